//! The outer optimization loop: trigger policies, stopping rules, and the
//! per-iteration trajectory record.

use serde::{Deserialize, Serialize};
use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;

use crate::coords::LandscapePoint;

use super::steps::{cc_hyperspherical_step, cc_rotation_step, pad_control_step, plain_step};
use super::{
    GradientVector, OptimError, OptimizerState, Problem, StallDetector, UpdateRule,
    DEFAULT_GRAD_TOL, DEFAULT_PATIENCE,
};

/// Which coordinate change (if any) wraps the update rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformSpec {
    /// No transform: textbook behaviour.
    None,
    /// Hyperspherical coordinates of the cost-augmented point, with
    /// `inner_steps` substeps in `(θ⃗, r)` before each collapse.
    Hyperspherical { inner_steps: usize },
    /// Per-coordinate (parameter, cost)-plane rotations.
    Rotation { angles: Vec<f64> },
    /// Extra cost-free coordinates: the negative control.
    Pad { dims: usize },
}

impl TransformSpec {
    pub fn hyperspherical() -> Self {
        TransformSpec::Hyperspherical { inner_steps: 1 }
    }

    /// One rotation angle broadcast over all `n` coordinates.
    pub fn rotation_uniform(alpha: f64, n: usize) -> Self {
        TransformSpec::Rotation {
            angles: vec![alpha; n],
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            TransformSpec::None => "none",
            TransformSpec::Hyperspherical { .. } => "hyperspherical",
            TransformSpec::Rotation { .. } => "rotation",
            TransformSpec::Pad { .. } => "pad",
        }
    }

    /// True for the transforms that actually involve the cost axis.
    fn involves_cost_axis(&self) -> bool {
        matches!(
            self,
            TransformSpec::Hyperspherical { .. } | TransformSpec::Rotation { .. }
        )
    }

    pub(crate) fn validate(&self, n: usize) -> Result<(), OptimError> {
        match self {
            TransformSpec::None => Ok(()),
            TransformSpec::Hyperspherical { inner_steps } => {
                if *inner_steps < 1 {
                    return Err(OptimError::InvalidSpec("inner_steps must be ≥ 1".into()));
                }
                Ok(())
            }
            TransformSpec::Rotation { angles } => {
                if angles.len() != n {
                    return Err(OptimError::DimensionMismatch {
                        expected: n,
                        got: angles.len(),
                    });
                }
                if angles.iter().any(|a| !a.is_finite() || a.abs() >= FRAC_PI_2) {
                    return Err(OptimError::InvalidSpec(
                        "rotation angles must lie strictly inside (−π/2, π/2)".into(),
                    ));
                }
                Ok(())
            }
            TransformSpec::Pad { dims } => {
                if *dims < 1 {
                    return Err(OptimError::InvalidSpec("pad dims must be ≥ 1".into()));
                }
                Ok(())
            }
        }
    }
}

/// When the transform is applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PolicySpec {
    /// Every iteration.
    Always,
    /// Only while the stall detector is latched.
    Adaptive { grad_tol: f64, patience: usize },
    /// Blocks of `period` iterations, transform on the odd blocks.
    Alternate { period: usize },
}

impl PolicySpec {
    pub fn adaptive_default() -> Self {
        PolicySpec::Adaptive {
            grad_tol: DEFAULT_GRAD_TOL,
            patience: DEFAULT_PATIENCE,
        }
    }

    pub fn mode_str(&self) -> &'static str {
        match self {
            PolicySpec::Always => "always",
            PolicySpec::Adaptive { .. } => "adaptive",
            PolicySpec::Alternate { .. } => "alternate",
        }
    }

    fn validate(&self) -> Result<(), OptimError> {
        match self {
            PolicySpec::Always => Ok(()),
            PolicySpec::Adaptive { grad_tol, patience } => {
                if *grad_tol <= 0.0 || *patience < 1 {
                    return Err(OptimError::InvalidSpec(
                        "adaptive policy needs grad_tol > 0 and patience ≥ 1".into(),
                    ));
                }
                Ok(())
            }
            PolicySpec::Alternate { period } => {
                if *period < 1 {
                    return Err(OptimError::InvalidSpec("alternate period must be ≥ 1".into()));
                }
                Ok(())
            }
        }
    }

    fn says_transform(&self, iter: usize, detector: &StallDetector) -> bool {
        match self {
            PolicySpec::Always => true,
            PolicySpec::Adaptive { .. } => detector.latched(),
            PolicySpec::Alternate { period } => (iter / period) % 2 == 1,
        }
    }
}

/// Stopping rules for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopSpec {
    pub max_iters: usize,
    /// Success level: the trial converges once cost ≤ this.
    pub cost_threshold: f64,
    /// With no cost-axis transform configured, declare the trial stalled as
    /// soon as the gradient ∞-norm is ≤ this.
    pub grad_floor: f64,
}

impl StopSpec {
    pub fn new(max_iters: usize, cost_threshold: f64) -> Self {
        StopSpec {
            max_iters,
            cost_threshold,
            grad_floor: 0.0,
        }
    }

    fn validate(&self) -> Result<(), OptimError> {
        if self.max_iters < 1 {
            return Err(OptimError::InvalidSpec("max_iters must be ≥ 1".into()));
        }
        if self.grad_floor < 0.0 || !self.grad_floor.is_finite() {
            return Err(OptimError::InvalidSpec("grad_floor must be finite ≥ 0".into()));
        }
        Ok(())
    }
}

/// Everything that configures one optimization trial besides the problem
/// and the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub transform: TransformSpec,
    pub policy: PolicySpec,
    pub rule: UpdateRule,
    pub stop: StopSpec,
    /// Learning rate used inside transformed coordinates; `None` keeps the
    /// rule's own rate. The transformed landscape rescales gradients, so the
    /// rate that was tuned for the original coordinates is often wrong there.
    pub transform_lr: Option<f64>,
    /// Reset transformed-space optimizer moments whenever the transform
    /// (re-)activates instead of letting them persist.
    pub reset_moments_on_activation: bool,
}

impl RunConfig {
    pub fn new(transform: TransformSpec, policy: PolicySpec, rule: UpdateRule, stop: StopSpec) -> Self {
        RunConfig {
            transform,
            policy,
            rule,
            stop,
            transform_lr: None,
            reset_moments_on_activation: false,
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), OptimError> {
        self.transform.validate(n)?;
        self.policy.validate()?;
        self.rule.validate()?;
        self.stop.validate()?;
        if let Some(lr) = self.transform_lr {
            if !(lr > 0.0 && lr.is_finite()) {
                return Err(OptimError::InvalidSpec("transform_lr must be > 0".into()));
            }
        }
        Ok(())
    }
}

/// Terminal status of a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    MaxIters,
    Stalled,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::MaxIters => "max_iters",
            RunStatus::Stalled => "stalled",
        }
    }
}

/// One outer iteration of a trial. `cost` is the cost after the update;
/// `grad_inf_norm` belongs to the gradient that drove the update; the
/// evaluation counters are cumulative over the trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub cost: f64,
    pub grad_inf_norm: f64,
    pub cost_evals: usize,
    pub grad_evals: usize,
    pub transform_active: bool,
}

/// Full per-trial record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub initial_cost: f64,
    pub records: Vec<IterationRecord>,
    pub status: RunStatus,
    /// Number of updates taken to first reach the cost threshold; present
    /// iff the trial converged.
    pub iterations_to_threshold: Option<usize>,
    /// Iteration at which the cost came back non-finite, if the trial was
    /// aborted for that reason (0 with no records = the initial evaluation).
    pub nonfinite_at: Option<usize>,
    pub final_params: Vec<f64>,
}

impl Trajectory {
    pub fn final_cost(&self) -> f64 {
        self.records.last().map_or(self.initial_cost, |r| r.cost)
    }

    pub fn total_cost_evals(&self) -> usize {
        self.records.last().map_or(1, |r| r.cost_evals)
    }

    pub fn total_grad_evals(&self) -> usize {
        self.records.last().map_or(0, |r| r.grad_evals)
    }
}

/// Run one seeded optimization trial. Deterministic given the problem,
/// configuration, and seed.
pub fn run_optimization(
    problem: &dyn Problem,
    cfg: &RunConfig,
    seed: u64,
) -> Result<Trajectory, OptimError> {
    let n = problem.dim();
    cfg.validate(n)?;

    let cost_evals = Cell::new(0usize);
    let grad_evals = Cell::new(0usize);
    let cost_fn = |x: &[f64]| -> f64 {
        cost_evals.set(cost_evals.get() + 1);
        problem.cost(x)
    };
    let grad_fn = |x: &[f64]| -> GradientVector {
        grad_evals.set(grad_evals.get() + 1);
        problem.gradient(x)
    };

    let mut params = problem.initial_params(seed);
    if params.len() != n {
        return Err(OptimError::DimensionMismatch {
            expected: n,
            got: params.len(),
        });
    }
    let mut cost = cost_fn(&params);
    let initial_cost = cost;

    let mut traj = Trajectory {
        initial_cost,
        records: Vec::new(),
        status: RunStatus::MaxIters,
        iterations_to_threshold: None,
        nonfinite_at: None,
        final_params: params.clone(),
    };

    if !cost.is_finite() {
        traj.status = RunStatus::Stalled;
        traj.nonfinite_at = Some(0);
        return Ok(traj);
    }
    if cost <= cfg.stop.cost_threshold {
        traj.status = RunStatus::Converged;
        traj.iterations_to_threshold = Some(0);
        return Ok(traj);
    }

    let transform_rule = match cfg.transform_lr {
        Some(lr) => cfg.rule.with_learning_rate(lr),
        None => cfg.rule,
    };
    let mut plain_state = OptimizerState::new();
    let mut transform_state = OptimizerState::new();
    let mut detector = match cfg.policy {
        PolicySpec::Adaptive { grad_tol, patience } => StallDetector::new(grad_tol, patience),
        _ => StallDetector::new(DEFAULT_GRAD_TOL, DEFAULT_PATIENCE),
    };
    let mut prev_transformed = false;

    for iter in 0..cfg.stop.max_iters {
        let use_transform = !matches!(cfg.transform, TransformSpec::None)
            && cfg.policy.says_transform(iter, &detector);
        if use_transform && !prev_transformed && cfg.reset_moments_on_activation {
            transform_state.reset();
        }
        prev_transformed = use_transform;

        let point = LandscapePoint {
            params: params.clone(),
            cost,
        };
        let outcome = if use_transform {
            match &cfg.transform {
                TransformSpec::Hyperspherical { inner_steps } => cc_hyperspherical_step(
                    &point,
                    &cost_fn,
                    &grad_fn,
                    &transform_rule,
                    &mut transform_state,
                    *inner_steps,
                )?,
                TransformSpec::Rotation { angles } => cc_rotation_step(
                    &point,
                    &cost_fn,
                    &grad_fn,
                    &transform_rule,
                    &mut transform_state,
                    angles,
                )?,
                TransformSpec::Pad { dims } => pad_control_step(
                    &point,
                    &cost_fn,
                    &grad_fn,
                    &transform_rule,
                    &mut transform_state,
                    *dims,
                )?,
                TransformSpec::None => unreachable!(),
            }
        } else {
            plain_step(&point, &cost_fn, &grad_fn, &cfg.rule, &mut plain_state)?
        };

        if !outcome.point.cost.is_finite() {
            traj.status = RunStatus::Stalled;
            traj.nonfinite_at = Some(iter);
            return Ok(traj);
        }

        params = outcome.point.params;
        cost = outcome.point.cost;
        traj.records.push(IterationRecord {
            iter,
            cost,
            grad_inf_norm: outcome.grad_inf_norm,
            cost_evals: cost_evals.get(),
            grad_evals: grad_evals.get(),
            transform_active: use_transform,
        });
        traj.final_params = params.clone();
        detector.observe(outcome.grad_inf_norm);

        if cost <= cfg.stop.cost_threshold {
            traj.status = RunStatus::Converged;
            traj.iterations_to_threshold = Some(iter + 1);
            return Ok(traj);
        }
        // A stall can only be declared when no cost-axis transform is
        // configured: with one configured there is always an escape move.
        if !cfg.transform.involves_cost_axis() && outcome.grad_inf_norm <= cfg.stop.grad_floor {
            traj.status = RunStatus::Stalled;
            return Ok(traj);
        }
    }
    traj.status = RunStatus::MaxIters;
    Ok(traj)
}
