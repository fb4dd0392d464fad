//! Batch execution of JSON job files.

use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::job::{run_job, Config, JobError, JobRequest, OutputFormat, Report};

#[derive(Debug, thiserror::Error)]
pub enum BatchError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid job file: {0}")]
    Schema(#[from] serde_json::Error),
}

pub struct BatchReport {
    /// One entry per job, in input order.
    pub entries: Vec<Result<Report, JobError>>,
}

impl BatchReport {
    pub fn errors(&self) -> usize {
        self.entries.iter().filter(|entry| entry.is_err()).count()
    }

    pub fn mismatches(&self) -> usize {
        self.entries
            .iter()
            .filter(|entry| matches!(entry, Ok(report) if report.mismatch))
            .count()
    }

    /// 0 if every job succeeded, 1 if any job errored, otherwise 3 if any
    /// verification disagreed.
    pub fn exit_code(&self) -> i32 {
        if self.errors() > 0 {
            1
        } else if self.mismatches() > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        let jobs: Vec<Value> = self
            .entries
            .iter()
            .enumerate()
            .map(|(index, entry)| match entry {
                Ok(report) => {
                    let mut value = report.to_json();
                    value["index"] = json!(index);
                    value
                }
                Err(error) => json!({ "index": index, "status": "error", "error": error.to_string() }),
            })
            .collect();
        json!({
            "jobs": jobs,
            "summary": {
                "total": self.entries.len(),
                "errors": self.errors(),
                "mismatches": self.mismatches(),
            },
        })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut out = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
                out.push('\n');
                out
            }
            OutputFormat::Text => {
                let mut out = String::new();
                for (index, entry) in self.entries.iter().enumerate() {
                    match entry {
                        Ok(report) => {
                            out.push_str(&format!("[{index}] {}\n", report.job.command.name()));
                            out.push_str(&report.render(report.job.output.unwrap_or(OutputFormat::Text)));
                        }
                        Err(error) => out.push_str(&format!("[{index}] error: {error}\n")),
                    }
                }
                out.push_str(&format!(
                    "{} jobs, {} errors, {} mismatches\n",
                    self.entries.len(),
                    self.errors(),
                    self.mismatches()
                ));
                out
            }
        }
    }
}

pub fn parse_jobs(text: &str) -> Result<Vec<JobRequest>, BatchError> {
    Ok(serde_json::from_str(text)?)
}

/// Runs the jobs in parallel; the report keeps input order.
pub fn run_jobs(jobs: &[JobRequest], config: &Config) -> BatchReport {
    BatchReport {
        entries: jobs.par_iter().map(|job| run_job(job, config)).collect(),
    }
}

pub fn run_batch(path: &Path, config: &Config) -> Result<BatchReport, BatchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BatchError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(run_jobs(&parse_jobs(&text)?, config))
}
