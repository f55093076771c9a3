//! Benchmark configuration: the task registry plus flag/file ingestion.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use crate::optim::{PolicySpec, RunConfig, StopSpec, TransformSpec, UpdateRule};
use crate::qsim::{Gate, ParamCircuit, PauliHamiltonian};
use crate::tasks::{
    barren_plateau_task, fourier_fit_task, hardware_efficient_ansatz, iris_classifier_task,
    load_hamiltonian, load_iris, plateau_ramp_1d, quadratic_1d, vqe_task, BarrenVariant,
    FourierTarget, Task,
};

use super::{BenchError, ConfigId};

/// Seed selection: a count (seeds `0..n`) or an explicit list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedSpec {
    Count(u64),
    List(Vec<u64>),
}

impl SeedSpec {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedSpec::Count(n) => (0..*n).collect(),
            SeedSpec::List(v) => v.clone(),
        }
    }

    /// `"5"` means five seeds 0..5; `"3,7,9"` is an explicit list.
    pub fn parse(text: &str) -> Result<Self, String> {
        if text.contains(',') {
            let seeds: Result<Vec<u64>, _> = text.split(',').map(|s| s.trim().parse()).collect();
            seeds.map(SeedSpec::List).map_err(|e| e.to_string())
        } else {
            text.trim().parse().map(SeedSpec::Count).map_err(|e| e.to_string())
        }
    }
}

/// Fully resolved benchmark configuration. Defaults < config file < flags.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub task: String,
    pub transform: String,
    pub rule: String,
    pub policy: String,
    pub lr: f64,
    pub transform_lr: Option<f64>,
    pub alpha: f64,
    pub inner_steps: usize,
    pub pad_dims: usize,
    pub momentum: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub grad_tol: f64,
    pub patience: usize,
    pub period: usize,
    pub seeds: SeedSpec,
    pub max_iters: usize,
    /// Success threshold; `None` uses the task's own.
    pub threshold: Option<f64>,
    pub grad_floor: f64,
    pub reset_moments: bool,
    pub qubits: usize,
    pub layers: usize,
    pub data: Option<PathBuf>,
    pub hamiltonian: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: String,
    pub traces: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            task: String::new(),
            transform: "none".into(),
            rule: "gd".into(),
            policy: "always".into(),
            lr: 0.1,
            transform_lr: None,
            alpha: FRAC_PI_4,
            inner_steps: 1,
            pad_dims: 1,
            momentum: 0.9,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            grad_tol: 1e-6,
            patience: 5,
            period: 10,
            seeds: SeedSpec::Count(1),
            max_iters: 200,
            threshold: None,
            grad_floor: 0.0,
            reset_moments: false,
            qubits: 6,
            layers: 2,
            data: None,
            hamiltonian: None,
            out: None,
            format: "csv".into(),
            traces: false,
        }
    }
}

impl BenchConfig {
    pub fn config_id(&self) -> ConfigId {
        ConfigId {
            task: self.task.clone(),
            transform: self.transform.clone(),
            rule: self.rule.clone(),
            policy: self.policy.clone(),
        }
    }

    /// Instantiate the named task from the registry.
    pub fn build_task(&self) -> Result<Task, BenchError> {
        let task = match self.task.as_str() {
            "quadratic" => quadratic_1d()?,
            "plateau_ramp" => plateau_ramp_1d()?,
            "barren_global" => barren_plateau_task(self.qubits, self.layers, BarrenVariant::Global, 0)?,
            "barren_local" => barren_plateau_task(self.qubits, self.layers, BarrenVariant::Local, 0)?,
            "vqe_single_qubit" => {
                let h = PauliHamiltonian::from_terms(&[(1.0, "Z")])?;
                let ansatz = ParamCircuit::new(1, vec![Gate::rx(0, 0)], 1)?;
                vqe_task(h, ansatz)?.with_name("vqe_single_qubit")
            }
            "vqe_tfim2" => {
                let h = PauliHamiltonian::from_terms(&[(-1.0, "ZZ"), (-1.0, "XI"), (-1.0, "IX")])?;
                let ansatz = hardware_efficient_ansatz(2, self.layers)?;
                vqe_task(h, ansatz)?.with_name("vqe_tfim2")
            }
            "vqe_file" => {
                let path = self.hamiltonian.as_ref().ok_or_else(|| BenchError::InvalidConfig {
                    field: "--hamiltonian".into(),
                    msg: "task vqe_file needs a Hamiltonian file".into(),
                })?;
                let h = load_hamiltonian(path)?;
                let q = h.num_qubits().ok_or_else(|| BenchError::InvalidConfig {
                    field: "--hamiltonian".into(),
                    msg: "Hamiltonian file has no terms".into(),
                })?;
                let ansatz = hardware_efficient_ansatz(q, self.layers)?;
                vqe_task(h, ansatz)?.with_name("vqe_file")
            }
            "fourier_r2" => {
                // cos(2x): inside the degree-2 model class (two data gates
                // with identity trainables realize it exactly).
                let target = FourierTarget::new(vec![0.0, 0.0, 1.0], vec![0.0, 0.0])
                    .expect("static coefficients");
                let grid = crate::tasks::default_fourier_grid(2);
                fourier_fit_task(2, target, &grid)?.with_name("fourier_r2")
            }
            "iris" => {
                let path = self.data.as_ref().ok_or_else(|| BenchError::InvalidConfig {
                    field: "--data".into(),
                    msg: "task iris needs the Iris CSV path".into(),
                })?;
                let ds = load_iris(path, Some(("Iris-setosa", "Iris-versicolor")))?;
                iris_classifier_task(&ds, self.layers)?
            }
            other => return Err(BenchError::UnknownTask(other.to_string())),
        };
        Ok(task)
    }

    /// Names and descriptions of every registered task.
    pub fn registry() -> &'static [(&'static str, &'static str)] {
        &[
            ("quadratic", "f(x) = x² from x₀ = 1 (closed-form convergence)"),
            ("plateau_ramp", "1-d C¹ landscape with an exactly flat region"),
            ("barren_global", "RY+CZ-ring ansatz, global overlap cost (qubits/layers configurable)"),
            ("barren_local", "RY+CZ-ring ansatz, per-qubit local cost (qubits/layers configurable)"),
            ("vqe_single_qubit", "VQE: H = Z under a single RX"),
            ("vqe_tfim2", "VQE: 2-qubit transverse-field Ising model (ground energy −√5)"),
            ("vqe_file", "VQE on a Hamiltonian file (--hamiltonian), RY+CNOT ansatz"),
            ("fourier_r2", "degree-2 data-reuploading fit of cos(2x)"),
            ("iris", "binary Iris classifier, amplitude encoding (--data)"),
        ]
    }

    /// Translate into the optimizer-facing run configuration.
    pub fn to_run_config(&self, task: &Task) -> Result<RunConfig, BenchError> {
        let transform = match self.transform.as_str() {
            "none" => TransformSpec::None,
            "hyperspherical" => TransformSpec::Hyperspherical {
                inner_steps: self.inner_steps,
            },
            "rotation" => TransformSpec::rotation_uniform(self.alpha, task.dim),
            "pad" => TransformSpec::Pad { dims: self.pad_dims },
            other => {
                return Err(BenchError::InvalidConfig {
                    field: "--transform".into(),
                    msg: format!("unknown transform {other:?}"),
                })
            }
        };
        let rule = match self.rule.as_str() {
            "gd" => UpdateRule::gd(self.lr),
            "momentum" => UpdateRule::momentum(self.lr, self.momentum),
            "adam" => UpdateRule::Adam {
                learning_rate: self.lr,
                beta1: self.beta1,
                beta2: self.beta2,
                epsilon: self.epsilon,
            },
            other => {
                return Err(BenchError::InvalidConfig {
                    field: "--rule".into(),
                    msg: format!("unknown rule {other:?}"),
                })
            }
        };
        let policy = match self.policy.as_str() {
            "always" => PolicySpec::Always,
            "adaptive" => PolicySpec::Adaptive {
                grad_tol: self.grad_tol,
                patience: self.patience,
            },
            "alternate" => PolicySpec::Alternate { period: self.period },
            other => {
                return Err(BenchError::InvalidConfig {
                    field: "--policy".into(),
                    msg: format!("unknown policy {other:?}"),
                })
            }
        };
        let stop = StopSpec {
            max_iters: self.max_iters,
            cost_threshold: self.threshold.unwrap_or(task.success_threshold),
            grad_floor: self.grad_floor,
        };
        let mut cfg = RunConfig::new(transform, policy, rule, stop);
        cfg.transform_lr = self.transform_lr;
        cfg.reset_moments_on_activation = self.reset_moments;
        Ok(cfg)
    }

    /// Apply one `key = value` setting (config-file key or flag name).
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), BenchError> {
        let bad = |msg: String| BenchError::InvalidConfig {
            field: key.to_string(),
            msg,
        };
        let key_norm = key.trim().trim_start_matches("--").replace('-', "_");
        match key_norm.as_str() {
            "task" => self.task = value.into(),
            "transform" => self.transform = value.into(),
            "rule" => self.rule = value.into(),
            "policy" => self.policy = value.into(),
            "lr" => self.lr = value.parse().map_err(|e| bad(format!("{e}")))?,
            "transform_lr" => {
                self.transform_lr = Some(value.parse().map_err(|e| bad(format!("{e}")))?)
            }
            "alpha" => self.alpha = value.parse().map_err(|e| bad(format!("{e}")))?,
            "inner_steps" => self.inner_steps = value.parse().map_err(|e| bad(format!("{e}")))?,
            "pad_dims" => self.pad_dims = value.parse().map_err(|e| bad(format!("{e}")))?,
            "momentum" => self.momentum = value.parse().map_err(|e| bad(format!("{e}")))?,
            "beta1" => self.beta1 = value.parse().map_err(|e| bad(format!("{e}")))?,
            "beta2" => self.beta2 = value.parse().map_err(|e| bad(format!("{e}")))?,
            "epsilon" => self.epsilon = value.parse().map_err(|e| bad(format!("{e}")))?,
            "grad_tol" => self.grad_tol = value.parse().map_err(|e| bad(format!("{e}")))?,
            "patience" => self.patience = value.parse().map_err(|e| bad(format!("{e}")))?,
            "period" => self.period = value.parse().map_err(|e| bad(format!("{e}")))?,
            "seeds" => self.seeds = SeedSpec::parse(value).map_err(bad)?,
            "max_iters" => self.max_iters = value.parse().map_err(|e| bad(format!("{e}")))?,
            "threshold" => self.threshold = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
            "grad_floor" => self.grad_floor = value.parse().map_err(|e| bad(format!("{e}")))?,
            "reset_moments" => {
                self.reset_moments = value.parse().map_err(|e| bad(format!("{e}")))?
            }
            "qubits" => self.qubits = value.parse().map_err(|e| bad(format!("{e}")))?,
            "layers" => self.layers = value.parse().map_err(|e| bad(format!("{e}")))?,
            "data" => self.data = Some(PathBuf::from(value)),
            "hamiltonian" => self.hamiltonian = Some(PathBuf::from(value)),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.into(),
            "traces" => self.traces = value.parse().map_err(|e| bad(format!("{e}")))?,
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Load a flat `key = value` config file over the current settings.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), BenchError> {
        for (key, value) in parse_config_file(path)? {
            self.apply_kv(&key, &value)?;
        }
        Ok(())
    }
}

/// Parse a flat config file: one `key = value` per line, `#` comments.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, BenchError> {
    let text = std::fs::read_to_string(path)?;
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(BenchError::InvalidConfig {
                field: format!("config:{}", idx + 1),
                msg: format!("expected `key = value`, found {line:?}"),
            });
        };
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}
