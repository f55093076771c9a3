//! Result persistence: CSV rows and JSON documents.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::optim::Trajectory;

use super::{AggregateStats, BenchError, BenchRun, ConfigId, TrialResult};

pub const CSV_HEADER: &str =
    "task,transform,rule,policy,seed,status,iterations,final_cost,cost_evals,grad_evals,wall_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// 17 significant digits, enough to reproduce any f64 exactly.
fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render the CSV document (header always present, one row per trial).
pub fn render_csv(run: &BenchRun) -> String {
    let mut s = String::with_capacity(64 * (run.runs.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in &run.runs {
        let t = &r.result;
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            run.id.task,
            run.id.transform,
            run.id.rule,
            run.id.policy,
            t.seed,
            t.status.as_str(),
            t.iterations_to_threshold.map_or(String::new(), |i| i.to_string()),
            float17(t.final_cost),
            t.n_cost_evals,
            t.n_grad_evals,
            t.wall_time_ms,
        ));
    }
    s
}

/// The JSON document layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonDocument {
    pub config: ConfigId,
    pub results: Vec<TrialResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<AggregateStats>,
    /// Full per-iteration trajectories, present only with `--traces`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<Vec<Trajectory>>,
}

pub fn render_json(
    run: &BenchRun,
    stats: Option<&AggregateStats>,
    include_traces: bool,
) -> Result<String, BenchError> {
    let doc = JsonDocument {
        config: run.id.clone(),
        results: run.runs.iter().map(|r| r.result.clone()).collect(),
        stats: stats.cloned(),
        trajectories: include_traces
            .then(|| run.runs.iter().map(|r| r.trajectory.clone()).collect()),
    };
    serde_json::to_string_pretty(&doc)
        .map_err(|e| BenchError::Io(std::io::Error::other(e)))
}

/// Persist results. CSV uses the fixed column schema; JSON additionally
/// carries the aggregate statistics and (with `include_traces`) the full
/// trajectories.
pub fn write_results(
    run: &BenchRun,
    stats: Option<&AggregateStats>,
    path: &Path,
    format: OutputFormat,
    include_traces: bool,
) -> Result<(), BenchError> {
    let text = match format {
        OutputFormat::Csv => render_csv(run),
        OutputFormat::Json => render_json(run, stats, include_traces)?,
    };
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}
