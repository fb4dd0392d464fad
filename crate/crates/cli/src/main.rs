use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wreathlab_cli::batch::run_batch;
use wreathlab_cli::job::{run_job, Command, Config, GroupArg, JobRequest, Num, OutputFormat, ProfileArg};

#[derive(Parser)]
#[command(
    name = "wreathlab",
    version,
    about = "Nilpotency classes and varieties of wreath products of p-groups"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, env = "WREATHLAB_OUTPUT", default_value = "text")]
    output: OutputFormat,
    /// Largest explicit group the brute-force engine will build.
    #[arg(long, global = true, env = "WREATHLAB_SIZE_LIMIT", default_value_t = wreathlab::oracle::DEFAULT_SIZE_LIMIT)]
    size_limit: u64,
    /// How many t values past t* `crossover` checks.
    #[arg(long, global = true, env = "WREATHLAB_SWEEP", default_value_t = 50)]
    sweep: u64,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// K_p-series of an abelian p-group, run-length encoded.
    Kp { group: String },
    /// Class of A Wr B from the profile of A.
    Shield {
        #[arg(long)]
        profile: String,
        group: String,
    },
    /// Closed-form class for the Z(l,t) family.
    Lemma1 {
        #[arg(long)]
        profile: String,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        l: String,
        #[arg(long)]
        t: String,
    },
    /// Closed-form class for the Y(z,t) family.
    Lemma2 {
        #[arg(long)]
        profile: String,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        z: String,
        #[arg(long)]
        t: String,
    },
    /// Least t from which each closed form applies.
    Thresholds {
        #[arg(long)]
        profile: String,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        l: String,
        #[arg(long)]
        z: String,
    },
    /// Where the Y family overtakes the Z family, with a verification sweep.
    Crossover {
        #[arg(long)]
        profile: String,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        l: String,
        #[arg(long)]
        z: String,
    },
    /// Whether A Wr B generates var(A)var(B).
    Decide {
        #[arg(long)]
        profile: String,
        group: String,
    },
    /// Brute-force nilpotency class of an explicit group.
    OracleClass { group: String },
    /// Brute-force class of A Wr B against the formula.
    OracleVerify {
        active: String,
        passive: String,
        #[arg(long)]
        p: Option<u64>,
    },
    /// K_p-series of an explicit group computed from its definition.
    KpDefinitional {
        group: String,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Run a JSON array of jobs.
    Batch { file: PathBuf },
}

fn to_command(cmd: Cmd) -> Command {
    let profile = ProfileArg::Text;
    let group = GroupArg::Text;
    let num = Num::Text;
    match cmd {
        Cmd::Kp { group: g } => Command::Kp { group: group(g) },
        Cmd::Shield { profile: a, group: g } => Command::Shield {
            profile: profile(a),
            group: group(g),
        },
        Cmd::Lemma1 { profile: a, v, l, t } => Command::Lemma1 {
            profile: profile(a),
            v,
            l: num(l),
            t: num(t),
        },
        Cmd::Lemma2 { profile: a, v, z, t } => Command::Lemma2 {
            profile: profile(a),
            v,
            z: num(z),
            t: num(t),
        },
        Cmd::Thresholds { profile: a, v, l, z } => Command::Thresholds {
            profile: profile(a),
            v,
            l: num(l),
            z: num(z),
        },
        Cmd::Crossover { profile: a, v, l, z } => Command::Crossover {
            profile: profile(a),
            v,
            l: num(l),
            z: num(z),
        },
        Cmd::Decide { profile: a, group: g } => Command::Decide {
            profile: profile(a),
            group: group(g),
        },
        Cmd::OracleClass { group } => Command::OracleClass { group },
        Cmd::OracleVerify { active, passive, p } => Command::OracleVerify { active, passive, p },
        Cmd::KpDefinitional { group, p } => Command::KpDefinitional { group, p },
        Cmd::Batch { .. } => unreachable!("batch is handled separately"),
    }
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = Config {
        size_limit: cli.size_limit,
        sweep: cli.sweep,
        output: cli.output,
    };
    if let Cmd::Batch { file } = &cli.command {
        return match run_batch(file, &config) {
            Ok(report) => {
                print!("{}", report.render(config.output));
                exit(report.exit_code())
            }
            Err(error) => {
                eprintln!("error: {error}");
                exit(2)
            }
        };
    }
    let job = JobRequest::from(to_command(cli.command));
    match run_job(&job, &config) {
        Ok(report) => {
            print!("{}", report.render(config.output));
            exit(report.exit_code())
        }
        Err(error) => {
            eprintln!("error: {error}");
            exit(error.exit_code())
        }
    }
}
