//! Update rules and the transform-wrapped optimization loops.
//!
//! Plain gradient descent, momentum, and Adam act directly on the parameter
//! vector. The two coordinate-change steps wrap the same rules: the
//! hyperspherical step updates the augmented point's angles and radius and
//! then collapses back onto the true landscape, while the rotation step
//! updates each rotated (parameter, cost)-plane coordinate and maps back
//! through the inverse rotation. A padding step extends the space *without*
//! the cost axis and serves as the negative control.

mod run;
mod steps;

pub use run::{
    run_optimization, IterationRecord, PolicySpec, RunConfig, RunStatus, StopSpec, Trajectory,
    TransformSpec,
};
pub use steps::{cc_hyperspherical_step, cc_rotation_step, pad_control_step, plain_step, StepOutcome};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default gradient-∞-norm tolerance for the adaptive trigger policy.
pub const DEFAULT_GRAD_TOL: f64 = 1e-6;
/// Default number of consecutive low-gradient iterations before latching.
pub const DEFAULT_PATIENCE: usize = 5;
/// Default plane-rotation angle.
pub const DEFAULT_ROTATION_ANGLE: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

/// Cartesian gradient of a cost function, in cost units per parameter unit.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientVector {
    pub entries: Vec<f64>,
}

impl GradientVector {
    pub fn new(entries: Vec<f64>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn inf_norm(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl From<Vec<f64>> for GradientVector {
    fn from(entries: Vec<f64>) -> Self {
        Self { entries }
    }
}

/// An optimization problem: pure cost and gradient oracles plus a seeded
/// initializer. Implementations must be safe to call from several trials
/// concurrently.
pub trait Problem: Sync {
    fn dim(&self) -> usize;
    fn cost(&self, params: &[f64]) -> f64;
    fn gradient(&self, params: &[f64]) -> GradientVector;
    fn initial_params(&self, seed: u64) -> Vec<f64>;
}

/// Which update rule drives the descent, with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UpdateRule {
    Gd {
        learning_rate: f64,
    },
    Momentum {
        learning_rate: f64,
        momentum: f64,
    },
    Adam {
        learning_rate: f64,
        beta1: f64,
        beta2: f64,
        epsilon: f64,
    },
}

impl UpdateRule {
    pub fn gd(learning_rate: f64) -> Self {
        UpdateRule::Gd { learning_rate }
    }

    pub fn momentum(learning_rate: f64, momentum: f64) -> Self {
        UpdateRule::Momentum {
            learning_rate,
            momentum,
        }
    }

    /// Adam with the customary β₁ = 0.9, β₂ = 0.999, ε = 1e−8.
    pub fn adam(learning_rate: f64) -> Self {
        UpdateRule::Adam {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }

    pub fn learning_rate(&self) -> f64 {
        match *self {
            UpdateRule::Gd { learning_rate }
            | UpdateRule::Momentum { learning_rate, .. }
            | UpdateRule::Adam { learning_rate, .. } => learning_rate,
        }
    }

    /// Same rule with a different learning rate (used for the separate
    /// transformed-space rate).
    pub fn with_learning_rate(mut self, lr: f64) -> Self {
        match &mut self {
            UpdateRule::Gd { learning_rate }
            | UpdateRule::Momentum { learning_rate, .. }
            | UpdateRule::Adam { learning_rate, .. } => *learning_rate = lr,
        }
        self
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            UpdateRule::Gd { .. } => "gd",
            UpdateRule::Momentum { .. } => "momentum",
            UpdateRule::Adam { .. } => "adam",
        }
    }

    pub fn validate(&self) -> Result<(), OptimError> {
        let ok = match *self {
            UpdateRule::Gd { learning_rate } => learning_rate > 0.0,
            UpdateRule::Momentum {
                learning_rate,
                momentum,
            } => learning_rate > 0.0 && (0.0..1.0).contains(&momentum),
            UpdateRule::Adam {
                learning_rate,
                beta1,
                beta2,
                epsilon,
            } => {
                learning_rate > 0.0
                    && (0.0..1.0).contains(&beta1)
                    && (0.0..1.0).contains(&beta2)
                    && epsilon > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(OptimError::InvalidSpec(format!("bad update rule {self:?}")))
        }
    }
}

/// Per-space optimizer memory. Moment vectors are keyed by transformed
/// coordinate index and sized lazily on first use; `gd` keeps them empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OptimizerState {
    pub step_count: u64,
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub velocity: Vec<f64>,
}

impl OptimizerState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// One application of the update rule: returns the additive step `delta` for
/// the coordinates the gradient lives in, updating `state` in place.
pub fn apply_update_rule(
    state: &mut OptimizerState,
    rule: &UpdateRule,
    grad: &[f64],
) -> Result<Vec<f64>, OptimError> {
    let n = grad.len();
    let delta = match *rule {
        UpdateRule::Gd { learning_rate } => grad.iter().map(|g| -learning_rate * g).collect(),
        UpdateRule::Momentum {
            learning_rate,
            momentum,
        } => {
            ensure_dim(&mut state.velocity, n)?;
            for (v, g) in state.velocity.iter_mut().zip(grad) {
                *v = momentum * *v + g;
            }
            state.velocity.iter().map(|v| -learning_rate * v).collect()
        }
        UpdateRule::Adam {
            learning_rate,
            beta1,
            beta2,
            epsilon,
        } => {
            ensure_dim(&mut state.first_moment, n)?;
            ensure_dim(&mut state.second_moment, n)?;
            let t = (state.step_count + 1) as i32;
            let bc1 = 1.0 - beta1.powi(t);
            let bc2 = 1.0 - beta2.powi(t);
            let mut delta = Vec::with_capacity(n);
            let moments = state.first_moment.iter_mut().zip(state.second_moment.iter_mut());
            for ((m, v), &g) in moments.zip(grad) {
                *m = beta1 * *m + (1.0 - beta1) * g;
                *v = beta2 * *v + (1.0 - beta2) * g * g;
                let m_hat = *m / bc1;
                let v_hat = *v / bc2;
                delta.push(-learning_rate * m_hat / (v_hat.sqrt() + epsilon));
            }
            delta
        }
    };
    state.step_count += 1;
    Ok(delta)
}

fn ensure_dim(v: &mut Vec<f64>, n: usize) -> Result<(), OptimError> {
    if v.is_empty() {
        v.resize(n, 0.0);
    } else if v.len() != n {
        return Err(OptimError::DimensionMismatch {
            expected: v.len(),
            got: n,
        });
    }
    Ok(())
}

/// Latching low-gradient detector behind the adaptive trigger policy.
///
/// Latches after `patience` consecutive observations with ∞-norm below
/// `grad_tol`; unlatches only once the norm climbs back above `10·grad_tol`
/// (factor-10 hysteresis so the transform is not toggled by noise).
#[derive(Debug, Clone)]
pub struct StallDetector {
    grad_tol: f64,
    patience: usize,
    consecutive_below: usize,
    latched: bool,
}

impl StallDetector {
    pub fn new(grad_tol: f64, patience: usize) -> Self {
        Self {
            grad_tol,
            patience,
            consecutive_below: 0,
            latched: false,
        }
    }

    pub fn observe(&mut self, grad_inf_norm: f64) {
        if grad_inf_norm >= 10.0 * self.grad_tol {
            self.latched = false;
            self.consecutive_below = 0;
        } else if grad_inf_norm < self.grad_tol {
            self.consecutive_below += 1;
            if self.consecutive_below >= self.patience {
                self.latched = true;
            }
        } else {
            self.consecutive_below = 0;
        }
    }

    pub fn latched(&self) -> bool {
        self.latched
    }
}

/// Replay a window of gradient ∞-norms through a fresh detector and report
/// whether it ends latched.
pub fn stall_detector(window: &[f64], grad_tol: f64, patience: usize) -> bool {
    let mut d = StallDetector::new(grad_tol, patience);
    for &norm in window {
        d.observe(norm);
    }
    d.latched()
}
