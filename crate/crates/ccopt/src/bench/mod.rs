//! Multi-seed trial runner, statistics matching the benchmark tables, and
//! result persistence.

mod config;
mod output;

pub use config::{parse_config_file, BenchConfig, SeedSpec};
pub use output::{render_csv, render_json, write_results, JsonDocument, OutputFormat, CSV_HEADER};

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::optim::{run_optimization, OptimError, RunStatus, Trajectory};
use crate::tasks::TaskError;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown task {0:?} for --task (see `ccopt list-tasks` for the registry)")]
    UnknownTask(String),
    #[error("invalid config at {field}: {msg}")]
    InvalidConfig { field: String, msg: String },
    #[error("seed mismatch: {0}")]
    SeedMismatch(String),
    #[error("cannot aggregate an empty result set")]
    EmptyInput,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error(transparent)]
    Qsim(#[from] crate::qsim::QsimError),
    #[error(transparent)]
    Optim(#[from] OptimError),
}

/// Identifies one benchmark configuration in outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigId {
    pub task: String,
    pub transform: String,
    pub rule: String,
    pub policy: String,
}

/// Per-seed outcome of one optimization trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub seed: u64,
    pub status: RunStatus,
    /// Present iff the trial converged.
    pub iterations_to_threshold: Option<usize>,
    pub final_cost: f64,
    pub n_cost_evals: usize,
    pub n_grad_evals: usize,
    pub wall_time_ms: u64,
}

/// A trial result together with its full trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRun {
    pub result: TrialResult,
    pub trajectory: Trajectory,
}

/// All trials of one configuration, ordered by the seed list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub id: ConfigId,
    pub runs: Vec<TrialRun>,
}

impl BenchRun {
    pub fn results(&self) -> Vec<TrialResult> {
        self.runs.iter().map(|r| r.result.clone()).collect()
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.runs.iter().map(|r| r.result.seed).collect()
    }
}

/// Cross-seed statistics for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub task: String,
    pub transform: String,
    pub rule: String,
    pub policy: String,
    pub n_trials: usize,
    pub n_converged: usize,
    pub success_rate: f64,
    /// Mean iterations over converged trials only; absent when none converged.
    pub mean_iters: Option<f64>,
    /// Lower-interpolated median over converged trials only.
    pub median_iters: Option<usize>,
    pub mean_final_cost: f64,
}

impl AggregateStats {
    /// `"49-1/29.14"`-style summary: converged-failed/mean-iterations.
    pub fn success_summary(&self) -> String {
        let failed = self.n_trials - self.n_converged;
        match self.mean_iters {
            Some(m) => format!("{}-{}/{:.2}", self.n_converged, failed, m),
            None => format!("{}-{}/-", self.n_converged, failed),
        }
    }
}

/// Run one trial per seed. Trials are independent and deterministic per
/// seed; they execute in parallel up to the `CCOPT_THREADS` cap (0 or unset
/// = auto) and are reported in seed-list order regardless of scheduling.
pub fn run_trials(cfg: &BenchConfig) -> Result<BenchRun, BenchError> {
    let task = cfg.build_task()?;
    let run_cfg = cfg.to_run_config(&task)?;
    run_cfg.validate(task.dim)?;
    let seeds = cfg.seeds.seeds();
    let id = cfg.config_id();

    let mut slots: Vec<Option<TrialRun>> = Vec::new();
    slots.resize_with(seeds.len(), || None);
    let threads = thread_cap().max(1).min(seeds.len().max(1));
    let chunk = seeds.len().div_ceil(threads);

    if !seeds.is_empty() {
        std::thread::scope(|scope| {
            for (slot_chunk, seed_chunk) in slots.chunks_mut(chunk).zip(seeds.chunks(chunk)) {
                let task = &task;
                let run_cfg = &run_cfg;
                scope.spawn(move || {
                    for (slot, &seed) in slot_chunk.iter_mut().zip(seed_chunk) {
                        let start = Instant::now();
                        let trajectory = run_optimization(task, run_cfg, seed)
                            .expect("config validated before spawning trials");
                        let wall_time_ms = start.elapsed().as_millis() as u64;
                        let result = TrialResult {
                            seed,
                            status: trajectory.status,
                            iterations_to_threshold: trajectory.iterations_to_threshold,
                            final_cost: trajectory.final_cost(),
                            n_cost_evals: trajectory.total_cost_evals(),
                            n_grad_evals: trajectory.total_grad_evals(),
                            wall_time_ms,
                        };
                        *slot = Some(TrialRun { result, trajectory });
                    }
                });
            }
        });
    }

    Ok(BenchRun {
        id,
        runs: slots.into_iter().map(|s| s.expect("every slot filled")).collect(),
    })
}

fn thread_cap() -> usize {
    match std::env::var("CCOPT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(0) | None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        Some(n) => n,
    }
}

/// Aggregate trial results into table statistics.
pub fn aggregate(results: &[TrialResult], id: &ConfigId) -> Result<AggregateStats, BenchError> {
    if results.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let n_trials = results.len();
    let mut iters: Vec<usize> = results
        .iter()
        .filter(|r| r.status == RunStatus::Converged)
        .map(|r| r.iterations_to_threshold.expect("converged implies iterations"))
        .collect();
    iters.sort_unstable();
    let n_converged = iters.len();
    let mean_iters = if n_converged > 0 {
        Some(iters.iter().sum::<usize>() as f64 / n_converged as f64)
    } else {
        None
    };
    let median_iters = if n_converged > 0 {
        Some(iters[(n_converged - 1) / 2])
    } else {
        None
    };
    let mean_final_cost = results.iter().map(|r| r.final_cost).sum::<f64>() / n_trials as f64;

    Ok(AggregateStats {
        task: id.task.clone(),
        transform: id.transform.clone(),
        rule: id.rule.clone(),
        policy: id.policy.clone(),
        n_trials,
        n_converged,
        success_rate: n_converged as f64 / n_trials as f64,
        mean_iters,
        median_iters,
        mean_final_cost,
    })
}

/// One seed's paired outcomes in a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub seed: u64,
    pub baseline_status: RunStatus,
    pub baseline_iters: Option<usize>,
    pub baseline_final_cost: f64,
    pub candidate_status: RunStatus,
    pub candidate_iters: Option<usize>,
    pub candidate_final_cost: f64,
}

/// Matched-seed comparison between a baseline and a transform candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub baseline: AggregateStats,
    pub candidate: AggregateStats,
    /// candidate mean iterations / baseline mean iterations.
    pub iteration_ratio: Option<f64>,
    /// Fraction of seeds where the candidate's final cost ≤ baseline's
    /// (ties count as wins).
    pub win_fraction: f64,
    /// Published reference ratio for this task, when one exists.
    pub published_reference_ratio: Option<f64>,
}

/// Published iteration ratios used as report context.
fn published_reference_ratio(task: &str) -> Option<f64> {
    match task {
        // barren-plateau benchmark: 4.7 iterations vs 29.14
        "barren_local" | "barren_global" => Some(4.7 / 29.14),
        // variational classifier: roughly 30 steps vs roughly 100
        "iris" => Some(30.0 / 100.0),
        _ => None,
    }
}

/// Pair two runs seed by seed. Both must target the same task with the same
/// seed list.
pub fn compare(baseline: &BenchRun, candidate: &BenchRun) -> Result<ComparisonReport, BenchError> {
    if baseline.id.task != candidate.id.task {
        return Err(BenchError::InvalidConfig {
            field: "task".into(),
            msg: format!(
                "comparison requires one task, got {:?} vs {:?}",
                baseline.id.task, candidate.id.task
            ),
        });
    }
    let seeds_a = baseline.seeds();
    let seeds_b = candidate.seeds();
    if seeds_a != seeds_b {
        return Err(BenchError::SeedMismatch(format!(
            "baseline seeds {seeds_a:?} differ from candidate seeds {seeds_b:?}"
        )));
    }
    if seeds_a.is_empty() {
        return Err(BenchError::EmptyInput);
    }

    let rows: Vec<ComparisonRow> = baseline
        .runs
        .iter()
        .zip(&candidate.runs)
        .map(|(a, b)| ComparisonRow {
            seed: a.result.seed,
            baseline_status: a.result.status,
            baseline_iters: a.result.iterations_to_threshold,
            baseline_final_cost: a.result.final_cost,
            candidate_status: b.result.status,
            candidate_iters: b.result.iterations_to_threshold,
            candidate_final_cost: b.result.final_cost,
        })
        .collect();

    let base_stats = aggregate(&baseline.results(), &baseline.id)?;
    let cand_stats = aggregate(&candidate.results(), &candidate.id)?;
    let iteration_ratio = match (cand_stats.mean_iters, base_stats.mean_iters) {
        (Some(c), Some(b)) if b > 0.0 => Some(c / b),
        _ => None,
    };
    let wins = rows
        .iter()
        .filter(|r| r.candidate_final_cost <= r.baseline_final_cost)
        .count();
    let win_fraction = wins as f64 / rows.len() as f64;

    Ok(ComparisonReport {
        published_reference_ratio: published_reference_ratio(&baseline.id.task),
        rows,
        baseline: base_stats,
        candidate: cand_stats,
        iteration_ratio,
        win_fraction,
    })
}

impl ComparisonReport {
    /// Human-readable rendering for the CLI.
    pub fn render(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "task {} | baseline {}/{}/{} vs candidate {}/{}/{}",
            self.baseline.task,
            self.baseline.transform,
            self.baseline.rule,
            self.baseline.policy,
            self.candidate.transform,
            self.candidate.rule,
            self.candidate.policy,
        );
        let _ = writeln!(s, "seed  base_status  base_iters  base_cost      cand_status  cand_iters  cand_cost");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<5} {:<12} {:<11} {:<14.6e} {:<12} {:<11} {:.6e}",
                r.seed,
                r.baseline_status.as_str(),
                r.baseline_iters.map_or("-".into(), |i| i.to_string()),
                r.baseline_final_cost,
                r.candidate_status.as_str(),
                r.candidate_iters.map_or("-".into(), |i| i.to_string()),
                r.candidate_final_cost,
            );
        }
        let _ = writeln!(
            s,
            "baseline:  {} (success {:.2}, mean final cost {:.6e})",
            self.baseline.success_summary(),
            self.baseline.success_rate,
            self.baseline.mean_final_cost
        );
        let _ = writeln!(
            s,
            "candidate: {} (success {:.2}, mean final cost {:.6e})",
            self.candidate.success_summary(),
            self.candidate.success_rate,
            self.candidate.mean_final_cost
        );
        let _ = writeln!(
            s,
            "iteration ratio (candidate/baseline): {}",
            self.iteration_ratio.map_or("-".into(), |r| format!("{r:.4}"))
        );
        let _ = writeln!(s, "win fraction (candidate cost ≤ baseline): {:.2}", self.win_fraction);
        if let Some(r) = self.published_reference_ratio {
            let _ = writeln!(s, "published reference ratio for this task: {r:.3}");
        }
        s
    }
}
