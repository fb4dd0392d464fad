//! Job requests, their dispatch, and the reports they produce.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use wreathlab::oracle::{
    kp_series_definitional, lower_central_series, nilpotency_class, series_report, subgroup_exponent, verify_shield,
    FiniteGroup, DEFAULT_SIZE_LIMIT,
};
use wreathlab::{kp, shield, variety, AbelianGroupSpec, AbelianPGroup, ActiveProfile, LemmaInputs};

use crate::parse::{parse_explicit_group, parse_group_spec, parse_profile, ParseError, ParsedGroup};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// An abelian group given as text (`p=5: 3,1,1`) or as its JSON object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupArg {
    Text(String),
    Json(AbelianGroupSpec),
}

/// An active profile given as text (`D4`, `p=2 c=2 s=2,1`) or as JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileArg {
    Text(String),
    Json(ActiveProfile),
}

/// A non-negative integer, as a JSON number or a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(u64),
    Text(String),
}

impl From<u64> for Num {
    fn from(n: u64) -> Self {
        Num::Int(n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", content = "args", rename_all = "kebab-case")]
pub enum Command {
    Kp {
        group: GroupArg,
    },
    Shield {
        profile: ProfileArg,
        group: GroupArg,
    },
    Lemma1 {
        profile: ProfileArg,
        v: u32,
        l: Num,
        t: Num,
    },
    Lemma2 {
        profile: ProfileArg,
        v: u32,
        z: Num,
        t: Num,
    },
    Thresholds {
        profile: ProfileArg,
        v: u32,
        l: Num,
        z: Num,
    },
    Crossover {
        profile: ProfileArg,
        v: u32,
        l: Num,
        z: Num,
    },
    Decide {
        profile: ProfileArg,
        group: GroupArg,
    },
    OracleClass {
        group: String,
    },
    OracleVerify {
        active: String,
        passive: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
    },
    KpDefinitional {
        group: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Kp { .. } => "kp",
            Command::Shield { .. } => "shield",
            Command::Lemma1 { .. } => "lemma1",
            Command::Lemma2 { .. } => "lemma2",
            Command::Thresholds { .. } => "thresholds",
            Command::Crossover { .. } => "crossover",
            Command::Decide { .. } => "decide",
            Command::OracleClass { .. } => "oracle-class",
            Command::OracleVerify { .. } => "oracle-verify",
            Command::KpDefinitional { .. } => "kp-definitional",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobRequest {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputFormat>,
}

impl From<Command> for JobRequest {
    fn from(command: Command) -> Self {
        Self { command, output: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub size_limit: u64,
    /// Number of `t` values past `t*` checked by `crossover`.
    pub sweep: u64,
    pub output: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            size_limit: DEFAULT_SIZE_LIMIT,
            sweep: 50,
            output: OutputFormat::Text,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error("{field}: {source}")]
    Parse {
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Operation(#[from] wreathlab::Error),
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Parse { .. } | JobError::Invalid(_) => 2,
            JobError::Operation(_) => 1,
        }
    }
}

/// The outcome of one job. `mismatch` is set when a verifying command found
/// the two sides disagreeing.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub job: JobRequest,
    /// Which formula or procedure produced the result.
    pub formula: &'static str,
    pub result: Value,
    pub text: String,
    pub mismatch: bool,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.job.command.name(),
            "job": self.job,
            "formula": self.formula,
            "result": self.result,
            "status": if self.mismatch { "mismatch" } else { "ok" },
        })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Json => {
                let mut out = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
                out.push('\n');
                out
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.mismatch {
            3
        } else {
            0
        }
    }
}

fn group_arg(arg: &GroupArg) -> Result<ParsedGroup, JobError> {
    match arg {
        GroupArg::Text(text) => parse_group_spec(text).map_err(|source| JobError::Parse { field: "group", source }),
        GroupArg::Json(spec) => Ok(match spec.to_finite() {
            Some(g) => ParsedGroup::Finite(g),
            None => ParsedGroup::Infinite(spec.clone()),
        }),
    }
}

fn finite_group_arg(arg: &GroupArg) -> Result<AbelianPGroup, JobError> {
    match group_arg(arg)? {
        ParsedGroup::Finite(g) => Ok(g),
        ParsedGroup::Infinite(_) => Err(JobError::Invalid(
            "group: this command needs finite multiplicities".into(),
        )),
    }
}

fn profile_arg(arg: &ProfileArg) -> Result<ActiveProfile, JobError> {
    match arg {
        ProfileArg::Text(text) => parse_profile(text).map_err(|source| JobError::Parse {
            field: "profile",
            source,
        }),
        ProfileArg::Json(profile) => Ok(profile.clone()),
    }
}

fn num_arg(arg: &Num, field: &'static str) -> Result<BigUint, JobError> {
    match arg {
        Num::Int(n) => Ok(BigUint::from(*n)),
        Num::Text(text) => text
            .trim()
            .parse()
            .map_err(|_| JobError::Invalid(format!("{field}: {text:?} is not a non-negative integer"))),
    }
}

fn explicit_arg(text: &str, field: &'static str, size_limit: u64) -> Result<FiniteGroup, JobError> {
    let expr = parse_explicit_group(text).map_err(|source| JobError::Parse { field, source })?;
    Ok(expr.build(size_limit)?)
}

/// Smallest prime factor of `n`, if `n > 1`.
fn smallest_prime(n: u64) -> Option<u64> {
    (2..=n).find(|d| n.is_multiple_of(*d))
}

pub fn run_job(job: &JobRequest, config: &Config) -> Result<Report, JobError> {
    let mut mismatch = false;
    let (formula, result, text) = match &job.command {
        Command::Kp { group } => {
            let g = finite_group_arg(group)?;
            let runs = kp::kp_sequence(&g);
            let mut text = String::new();
            for run in &runs {
                let range = if run.start == run.end {
                    run.start.to_string()
                } else {
                    format!("{}-{}", run.start, run.end)
                };
                writeln!(text, "K[{range}] order={} {}", run.group.order(), run.group).unwrap();
            }
            let result = json!({
                "group": g,
                "runs": runs.iter().map(|run| json!({
                    "start": run.start.to_string(),
                    "end": run.end.to_string(),
                    "order": run.group.order().to_string(),
                    "group": run.group,
                })).collect::<Vec<_>>(),
            });
            ("kp-power-subgroups", result, text)
        }
        Command::Shield { profile, group } => {
            let profile = profile_arg(profile)?;
            let g = finite_group_arg(group)?;
            let params = kp::shield_params(&g)?;
            let class = shield::shield_class(&profile, &g)?;
            let argmax = shield::shield_argmax(&profile, &g)?;
            let e: Vec<String> = params.e.iter().map(|(s, n)| format!("e({s})={n}")).collect();
            let text = format!(
                "class={class} argmax_h={argmax} d={} a={} b={} {}\n",
                params.d,
                params.a,
                params.b,
                e.join(" ")
            );
            let result = json!({
                "class": class.to_string(),
                "argmax_h": argmax,
                "params": params,
            });
            ("shield-formula", result, text)
        }
        Command::Lemma1 { profile, v, l, t } => {
            let profile = profile_arg(profile)?;
            let (l, t) = (num_arg(l, "l")?, num_arg(t, "t")?);
            let inputs = LemmaInputs::from_profile(&profile, *v, l.clone(), BigUint::default(), t.clone());
            let class = shield::lemma1_class(&inputs)?;
            let direct = shield::shield_class(&profile, &shield::z_group(profile.p(), *v, &l, &t)?)?;
            let threshold = shield::t0_threshold(&profile, *v, &l)?;
            let applies = threshold.as_ref().is_some_and(|t0| &t >= t0);
            mismatch = applies && class != direct;
            let threshold_text = threshold.as_ref().map_or("none".to_string(), ToString::to_string);
            let text = format!("lemma={class} direct={direct} t0={threshold_text} applies={applies}\n");
            let result = json!({
                "inputs": inputs,
                "class": class.to_string(),
                "direct": direct.to_string(),
                "t0": threshold.map(|t0| t0.to_string()),
                "applies": applies,
            });
            ("lemma1-closed-form", result, text)
        }
        Command::Lemma2 { profile, v, z, t } => {
            let profile = profile_arg(profile)?;
            let (z, t) = (num_arg(z, "z")?, num_arg(t, "t")?);
            let inputs = LemmaInputs::from_profile(&profile, *v, BigUint::default(), z.clone(), t.clone());
            let class = shield::lemma2_class(&inputs)?;
            let direct = shield::shield_class(&profile, &shield::y_group(profile.p(), *v, &z, &t)?)?;
            let threshold = shield::t1_threshold(&profile, *v, &z)?;
            let applies = t >= threshold;
            mismatch = applies && class != direct;
            let text = format!("lemma={class} direct={direct} t1={threshold} applies={applies}\n");
            let result = json!({
                "inputs": inputs,
                "class": class.to_string(),
                "direct": direct.to_string(),
                "t1": threshold.to_string(),
                "applies": applies,
            });
            ("lemma2-closed-form", result, text)
        }
        Command::Thresholds { profile, v, l, z } => {
            let profile = profile_arg(profile)?;
            let (l, z) = (num_arg(l, "l")?, num_arg(z, "z")?);
            let t0 = shield::t0_threshold(&profile, *v, &l)?;
            let t1 = shield::t1_threshold(&profile, *v, &z)?;
            let t0_text = t0.as_ref().map_or("none".to_string(), ToString::to_string);
            let text = format!("t0={t0_text} t1={t1}\n");
            let result = json!({
                "t0": t0.map(|t| t.to_string()),
                "t1": t1.to_string(),
            });
            ("lemma-thresholds", result, text)
        }
        Command::Crossover { profile, v, l, z } => {
            let profile = profile_arg(profile)?;
            let (l, z) = (num_arg(l, "l")?, num_arg(z, "z")?);
            let crossover = shield::crossover_tstar(&profile, *v, &l, &z)?;
            let base = LemmaInputs::from_profile(&profile, *v, l, z, crossover.t_star.clone());
            let mut failures = Vec::new();
            for step in 1..=config.sweep {
                let inputs = base.with_t(&crossover.t_star + step);
                if shield::lemma2_class(&inputs)? <= shield::lemma1_class(&inputs)? {
                    failures.push(inputs.t.to_string());
                }
            }
            mismatch = !failures.is_empty();
            let t0_text = crossover.t0.as_ref().map_or("none".to_string(), ToString::to_string);
            let text = format!(
                "t*={} crossing={} t0={t0_text} t1={} sweep={} {}\n",
                crossover.t_star,
                crossover.closed_form_crossing,
                crossover.t1,
                config.sweep,
                if mismatch { "MISMATCH" } else { "OK" }
            );
            let result = json!({
                "crossover": crossover,
                "sweep": config.sweep,
                "sweep_failures": failures,
            });
            ("crossover-closed-form", result, text)
        }
        Command::Decide { profile, group } => {
            let profile = profile_arg(profile)?;
            let spec = group_arg(group)?.into_spec();
            let decision = variety::theorem1_decide(&profile, &spec)?;
            let text = format!("{}: {}\n", decision.generates_product, decision.explanation);
            (
                "cpv-infinity-criterion",
                serde_json::to_value(&decision).expect("decisions serialize"),
                text,
            )
        }
        Command::OracleClass { group } => {
            let g = explicit_arg(group, "group", config.size_limit)?;
            let class = nilpotency_class(&g);
            let text = format!("{} order={} class={class}\n", g.name(), g.order());
            let result = json!({ "group": g.name(), "order": g.order(), "class": class });
            ("brute-force-lower-central-series", result, text)
        }
        Command::OracleVerify { active, passive, p } => {
            let a = explicit_arg(active, "active", config.size_limit)?;
            let b = explicit_arg(passive, "passive", config.size_limit)?;
            let p = match p {
                Some(p) => *p,
                None => smallest_prime(b.order())
                    .or_else(|| smallest_prime(a.order()))
                    .ok_or_else(|| JobError::Invalid("p: cannot infer a prime from two trivial groups".into()))?,
            };
            let check = verify_shield(&a, &b, p, config.size_limit)?;
            mismatch = !check.agrees();
            let text = format!(
                "oracle={} formula={} {}\n",
                check.oracle,
                check.formula,
                if mismatch { "MISMATCH" } else { "OK" }
            );
            (
                "brute-force-vs-shield-formula",
                serde_json::to_value(&check).expect("checks serialize"),
                text,
            )
        }
        Command::KpDefinitional { group, p } => {
            let g = explicit_arg(group, "group", config.size_limit)?;
            let p = match p {
                Some(p) => *p,
                None => smallest_prime(g.order())
                    .ok_or_else(|| JobError::Invalid("p: cannot infer a prime from the trivial group".into()))?,
            };
            let series = kp_series_definitional(&g, p)?;
            let gammas = lower_central_series(&g);
            let text = series_report(&g, "K", &series);
            let terms = |terms: &[wreathlab::oracle::Subgroup]| {
                terms
                    .iter()
                    .map(|term| json!({ "order": term.order(), "exponent": subgroup_exponent(&g, term) }))
                    .collect::<Vec<_>>()
            };
            let result = json!({
                "group": g.name(),
                "p": p,
                "kp": terms(&series),
                "gamma": terms(&gammas),
            });
            ("brute-force-kp-definition", result, text)
        }
    };
    Ok(Report {
        job: job.clone(),
        formula,
        result,
        text,
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(command: Command) -> Report {
        run_job(&command.into(), &Config::default()).unwrap()
    }

    #[test]
    fn job_json_shape() {
        let job: JobRequest = serde_json::from_str(
            r#"{"command":"shield","args":{"profile":"p=2 c=1 s=2","group":"p=5: 3,1,1"},"output":"json"}"#,
        )
        .unwrap();
        assert_eq!(job.output, Some(OutputFormat::Json));
        assert!(matches!(job.command, Command::Shield { .. }));
        let back: JobRequest = serde_json::from_value(serde_json::to_value(&job).unwrap()).unwrap();
        assert_eq!(back, job);

        let job: JobRequest =
            serde_json::from_str(r#"{"command":"lemma1","args":{"profile":{"p":2,"s":[2,1]},"v":2,"l":"1","t":4}}"#)
                .unwrap();
        assert!(matches!(job.command, Command::Lemma1 { .. }));
        assert!(serde_json::from_str::<JobRequest>(r#"{"command":"nope","args":{}}"#).is_err());
    }

    #[test]
    fn shield_example() {
        let report = run(Command::Shield {
            profile: ProfileArg::Text("p=5 c=1 s=2".into()),
            group: GroupArg::Text("p=5: 3,1,1".into()),
        });
        assert_eq!(report.result["class"], "233");
        assert!(report.text.starts_with("class=233 "));
    }

    #[test]
    fn oracle_verify_text() {
        let report = run(Command::OracleVerify {
            active: "C2".into(),
            passive: "C2".into(),
            p: None,
        });
        assert_eq!(report.text, "oracle=2 formula=2 OK\n");
        assert!(!report.mismatch);
    }

    #[test]
    fn lemma_reports_agree_past_threshold() {
        let profile = ProfileArg::Text("D4".into());
        let report = run(Command::Lemma1 {
            profile: profile.clone(),
            v: 2,
            l: 1.into(),
            t: 10.into(),
        });
        assert_eq!(report.result["applies"], true);
        assert_eq!(report.result["class"], report.result["direct"]);
        let report = run(Command::Lemma2 {
            profile,
            v: 2,
            z: 1.into(),
            t: 10.into(),
        });
        assert_eq!(report.result["class"], report.result["direct"]);
    }

    #[test]
    fn error_kinds() {
        let config = Config::default();
        let bad_prime = JobRequest::from(Command::Kp {
            group: GroupArg::Text("p=4: 1".into()),
        });
        assert_eq!(run_job(&bad_prime, &config).unwrap_err().exit_code(), 2);
        let mismatched = JobRequest::from(Command::Decide {
            profile: ProfileArg::Text("D4".into()),
            group: GroupArg::Text("p=3: 1*inf".into()),
        });
        assert_eq!(run_job(&mismatched, &config).unwrap_err().exit_code(), 1);
        let too_big = JobRequest::from(Command::OracleClass {
            group: "C3 wr C9".into(),
        });
        let small = Config {
            size_limit: 1000,
            ..config
        };
        assert_eq!(run_job(&too_big, &small).unwrap_err().exit_code(), 1);
    }
}
