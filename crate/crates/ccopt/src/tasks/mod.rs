//! Benchmark problem definitions: classical diagnostic landscapes, quantum
//! circuit tasks, and file ingestion for datasets and Hamiltonians.

mod classical;
mod eigen;
mod io;
mod quantum;

pub use classical::{plateau_ramp_1d, quadratic_1d};
pub use eigen::exact_ground_energy;
pub use io::{load_hamiltonian, load_iris, Dataset};
pub use quantum::{
    barren_cost_hamiltonian, barren_plateau_task, barren_ring_ansatz, default_fourier_grid,
    fourier_fit_task, hardware_efficient_ansatz, iris_classifier_task, vqe_task, BarrenVariant,
    FourierTarget, IrisClassifier,
};

use crate::optim::{GradientVector, Problem};
use crate::qsim::QsimError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TaskError {
    #[error("qubit count {0} outside the supported range {1}..={2}")]
    QubitBound(usize, usize, usize),
    #[error("Hamiltonian on {h} qubits does not match ansatz on {ansatz}")]
    SizeMismatch { h: usize, ansatz: usize },
    #[error("{0} qubits is too large for dense diagonalization (max 4)")]
    TooLarge(usize),
    #[error("target function exceeds the model range [−1, 1] (max |target| = {0})")]
    TargetOutOfRange(f64),
    #[error("dataset rows must have exactly 4 features, found {0}")]
    BadFeatureWidth(usize),
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("class {0:?} does not appear in the dataset")]
    UnknownClass(String),
    #[error("Pauli words have inconsistent lengths ({0} vs {1})")]
    InconsistentWordLength(usize, usize),
    #[error("gradient oracle disagrees with finite differences at {point:?}: {analytic} vs {fd}")]
    GradientInconsistent {
        point: Vec<f64>,
        analytic: f64,
        fd: f64,
    },
    #[error("invalid task: {0}")]
    Invalid(String),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How a task's gradient oracle is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradSource {
    Analytic,
    ParameterShift,
    FiniteDiff,
}

type CostBox = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradBox = Box<dyn Fn(&[f64]) -> GradientVector + Send + Sync>;
type InitBox = Box<dyn Fn(u64) -> Vec<f64> + Send + Sync>;

/// A benchmark problem: pure cost/gradient oracles, a seeded initializer,
/// and its success level.
pub struct Task {
    pub name: String,
    pub dim: usize,
    pub grad_source: GradSource,
    pub success_threshold: f64,
    pub reference_optimum: Option<f64>,
    cost_fn: CostBox,
    grad_fn: GradBox,
    init_sampler: InitBox,
}

impl Task {
    /// Assemble a task and, for analytic / parameter-shift gradients, check
    /// the gradient oracle against central finite differences of the cost on
    /// ten sampled points before accepting it.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        grad_source: GradSource,
        success_threshold: f64,
        reference_optimum: Option<f64>,
        cost_fn: CostBox,
        grad_fn: GradBox,
        init_sampler: InitBox,
    ) -> Result<Self, TaskError> {
        if dim == 0 {
            return Err(TaskError::Invalid("dimension must be ≥ 1".into()));
        }
        let task = Task {
            name: name.into(),
            dim,
            grad_source,
            success_threshold,
            reference_optimum,
            cost_fn,
            grad_fn,
            init_sampler,
        };
        if !matches!(task.grad_source, GradSource::FiniteDiff) {
            task.check_gradient_consistency()?;
        }
        Ok(task)
    }

    pub fn cost(&self, params: &[f64]) -> f64 {
        (self.cost_fn)(params)
    }

    pub fn gradient(&self, params: &[f64]) -> GradientVector {
        (self.grad_fn)(params)
    }

    pub fn initial_params(&self, seed: u64) -> Vec<f64> {
        (self.init_sampler)(seed)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_success_threshold(mut self, threshold: f64) -> Self {
        self.success_threshold = threshold;
        self
    }

    fn check_gradient_consistency(&self) -> Result<(), TaskError> {
        const FD_STEP: f64 = 1e-5;
        const TOL: f64 = 1e-5;
        for i in 0..10u64 {
            let point = (self.init_sampler)(0xC0FFEE + i);
            let grad = (self.grad_fn)(&point);
            for k in 0..self.dim {
                let mut plus = point.clone();
                let mut minus = point.clone();
                plus[k] += FD_STEP;
                minus[k] -= FD_STEP;
                let fd = ((self.cost_fn)(&plus) - (self.cost_fn)(&minus)) / (2.0 * FD_STEP);
                let a = grad.entries[k];
                if (a - fd).abs() > TOL * a.abs().max(1.0) {
                    return Err(TaskError::GradientInconsistent {
                        point,
                        analytic: a,
                        fd,
                    });
                }
            }
        }
        Ok(())
    }
}

impl Problem for Task {
    fn dim(&self) -> usize {
        self.dim
    }
    fn cost(&self, params: &[f64]) -> f64 {
        Task::cost(self, params)
    }
    fn gradient(&self, params: &[f64]) -> GradientVector {
        Task::gradient(self, params)
    }
    fn initial_params(&self, seed: u64) -> Vec<f64> {
        Task::initial_params(self, seed)
    }
}

impl std::fmt::Debug for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Task")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("grad_source", &self.grad_source)
            .field("success_threshold", &self.success_threshold)
            .field("reference_optimum", &self.reference_optimum)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests;
