//! Variational quantum-circuit benchmark tasks.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qsim::{
    apply_circuit, circuit_cost, expectation, parameter_shift_gradient, prepare_amplitude_state,
    Gate, ParamCircuit, PauliHamiltonian,
};

use super::eigen::exact_ground_energy;
use super::io::Dataset;
use super::{GradSource, Task, TaskError};

fn seeded_rng(task_salt: u64, trial_seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed.wrapping_add(task_salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Layered RY + CZ-ring ansatz used by the barren-plateau benchmark.
pub fn barren_ring_ansatz(q: usize, layers: usize) -> Result<ParamCircuit, TaskError> {
    let mut gates = Vec::new();
    let mut slot = 0;
    for _ in 0..layers {
        for t in 0..q {
            gates.push(Gate::ry(t, slot));
            slot += 1;
        }
        for t in 0..q - 1 {
            gates.push(Gate::cz(t, t + 1));
        }
        if q > 2 {
            gates.push(Gate::cz(q - 1, 0));
        }
    }
    Ok(ParamCircuit::new(q, gates, slot)?)
}

/// Layered RY + CNOT-chain ansatz with a closing RY layer; the stock VQE
/// ansatz for real-amplitude ground states.
pub fn hardware_efficient_ansatz(q: usize, layers: usize) -> Result<ParamCircuit, TaskError> {
    let mut gates = Vec::new();
    let mut slot = 0;
    for _ in 0..layers {
        for t in 0..q {
            gates.push(Gate::ry(t, slot));
            slot += 1;
        }
        for t in 0..q.saturating_sub(1) {
            gates.push(Gate::cnot(t, t + 1));
        }
    }
    for t in 0..q {
        gates.push(Gate::ry(t, slot));
        slot += 1;
    }
    Ok(ParamCircuit::new(q, gates, slot)?)
}

/// Global or local flavour of the barren-plateau cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrenVariant {
    /// `1 − |⟨0…0|ψ⟩|²`: the projector onto the target state.
    Global,
    /// `1 − (1/q)·Σ_j p_j(0)`: per-qubit marginals averaged.
    Local,
}

/// Cost observable such that `cost = ⟨H⟩` vanishes exactly at `|0…0⟩` and
/// stays inside `[0, 1]`.
pub fn barren_cost_hamiltonian(q: usize, variant: BarrenVariant) -> PauliHamiltonian {
    let mut terms: Vec<(f64, String)> = Vec::new();
    match variant {
        BarrenVariant::Global => {
            // 1 − ⟨Π_j (I+Z_j)/2⟩ expanded over all Z-subsets.
            let w = 0.5f64.powi(q as i32);
            terms.push((1.0 - w, "I".repeat(q)));
            for mask in 1usize..(1 << q) {
                let word: String = (0..q)
                    .map(|t| if mask >> (q - 1 - t) & 1 == 1 { 'Z' } else { 'I' })
                    .collect();
                terms.push((-w, word));
            }
        }
        BarrenVariant::Local => {
            terms.push((0.5, "I".repeat(q)));
            for j in 0..q {
                let word: String = (0..q).map(|t| if t == j { 'Z' } else { 'I' }).collect();
                terms.push((-0.5 / q as f64, word));
            }
        }
    }
    let refs: Vec<(f64, &str)> = terms.iter().map(|(c, w)| (*c, w.as_str())).collect();
    PauliHamiltonian::from_terms(&refs).expect("well-formed generated words")
}

/// Barren-plateau benchmark: a shallow RY + CZ-ring ansatz trained to reach
/// `|0…0⟩` under the global or local cost, from uniform `[0, 2π)` starts.
pub fn barren_plateau_task(
    q: usize,
    layers: usize,
    variant: BarrenVariant,
    seed: u64,
) -> Result<Task, TaskError> {
    if !(2..=8).contains(&q) {
        return Err(TaskError::QubitBound(q, 2, 8));
    }
    let circuit = barren_ring_ansatz(q, layers)?;
    let h = barren_cost_hamiltonian(q, variant);
    let n = circuit.n_params;
    let name = match variant {
        BarrenVariant::Global => "barren_global",
        BarrenVariant::Local => "barren_local",
    };

    let c2 = circuit.clone();
    let h2 = h.clone();
    Task::new(
        name,
        n,
        GradSource::ParameterShift,
        0.05,
        Some(0.0),
        Box::new(move |params| circuit_cost(&circuit, &h, params).expect("valid circuit")),
        Box::new(move |params| {
            parameter_shift_gradient(&c2, &h2, params)
                .expect("valid circuit")
                .into()
        }),
        Box::new(move |trial_seed| {
            let mut rng = seeded_rng(seed, trial_seed);
            (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect()
        }),
    )
}

/// VQE benchmark: minimize `⟨ψ(θ)|H|ψ(θ)⟩` over the ansatz parameters. The
/// reference optimum comes from dense diagonalization when the register is
/// small enough.
pub fn vqe_task(h: PauliHamiltonian, ansatz: ParamCircuit) -> Result<Task, TaskError> {
    if let Some(hq) = h.num_qubits() {
        if hq != ansatz.qubits {
            return Err(TaskError::SizeMismatch {
                h: hq,
                ansatz: ansatz.qubits,
            });
        }
    }
    let reference = if ansatz.qubits <= 4 && !h.terms.is_empty() {
        Some(exact_ground_energy(&h)?)
    } else {
        None
    };
    let threshold = reference.map_or(f64::NEG_INFINITY, |r| r + 1e-3);
    let n = ansatz.n_params;

    let c2 = ansatz.clone();
    let h2 = h.clone();
    Task::new(
        "vqe",
        n,
        GradSource::ParameterShift,
        threshold,
        reference,
        Box::new(move |params| circuit_cost(&ansatz, &h, params).expect("valid circuit")),
        Box::new(move |params| {
            parameter_shift_gradient(&c2, &h2, params)
                .expect("valid circuit")
                .into()
        }),
        Box::new(move |trial_seed| {
            let mut rng = seeded_rng(0x7d5e, trial_seed);
            (0..n).map(|_| rng.random_range(-PI..PI)).collect()
        }),
    )
}

/// Truncated Fourier series `a_0 + Σ_{k=1..r} a_k cos(kx) + b_k sin(kx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTarget {
    /// `a_0..a_r`.
    pub cos_coeffs: Vec<f64>,
    /// `b_1..b_r`.
    pub sin_coeffs: Vec<f64>,
}

impl FourierTarget {
    pub fn new(cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Result<Self, TaskError> {
        if cos_coeffs.is_empty() || cos_coeffs.len() != sin_coeffs.len() + 1 {
            return Err(TaskError::Invalid(
                "need a_0..a_r and b_1..b_r coefficient vectors".into(),
            ));
        }
        Ok(Self {
            cos_coeffs,
            sin_coeffs,
        })
    }

    pub fn degree(&self) -> usize {
        self.sin_coeffs.len()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut y = self.cos_coeffs[0];
        for k in 1..=self.degree() {
            y += self.cos_coeffs[k] * (k as f64 * x).cos();
            y += self.sin_coeffs[k - 1] * (k as f64 * x).sin();
        }
        y
    }

    fn sup_norm(&self) -> f64 {
        (0..1024)
            .map(|i| self.eval(-PI + 2.0 * PI * i as f64 / 1024.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Uniform grid of `4(r+1)` sample points in `[−π, π)`.
pub fn default_fourier_grid(r: usize) -> Vec<f64> {
    let n = 4 * (r + 1);
    (0..n).map(|i| -PI + 2.0 * PI * i as f64 / n as f64).collect()
}

/// Single-qubit data-reuploading model for one trainable block.
fn reuploading_circuit(r: usize, x: f64) -> ParamCircuit {
    let mut gates = Vec::new();
    for rep in 0..r {
        gates.push(Gate::rz(0, 2 * rep));
        gates.push(Gate::ry(0, 2 * rep + 1));
        gates.push(Gate::rx_fixed(0, x));
    }
    gates.push(Gate::rz(0, 2 * r));
    gates.push(Gate::ry(0, 2 * r + 1));
    ParamCircuit::new(1, gates, 2 * (r + 1)).expect("well-formed model circuit")
}

/// Fourier-series fitting benchmark: a degree-`r` data-reuploading model
/// `g_θ(x) = ⟨Z⟩` trained to a target series by mean squared error over the
/// sample grid. The target must fit inside the model's `[−1, 1]` range.
pub fn fourier_fit_task(
    r: usize,
    target: FourierTarget,
    grid: &[f64],
) -> Result<Task, TaskError> {
    if target.degree() > r {
        return Err(TaskError::Invalid(format!(
            "target degree {} exceeds model degree {r}",
            target.degree()
        )));
    }
    if grid.len() < 2 * r + 1 {
        return Err(TaskError::Invalid(format!(
            "grid needs ≥ {} points for degree {r}",
            2 * r + 1
        )));
    }
    let sup = target.sup_norm();
    if sup > 1.0 + 1e-9 {
        return Err(TaskError::TargetOutOfRange(sup));
    }

    let z = PauliHamiltonian::from_terms(&[(1.0, "Z")]).expect("static word");
    let points: Vec<(ParamCircuit, f64)> = grid
        .iter()
        .map(|&x| (reuploading_circuit(r, x), target.eval(x)))
        .collect();
    let n = 2 * (r + 1);

    let points2 = points.clone();
    let z2 = z.clone();
    Task::new(
        "fourier",
        n,
        GradSource::ParameterShift,
        1e-6,
        Some(0.0),
        Box::new(move |params| {
            let mut acc = 0.0;
            for (c, t) in &points {
                let g = circuit_cost(c, &z, params).expect("valid circuit");
                acc += (g - t) * (g - t);
            }
            acc / points.len() as f64
        }),
        Box::new(move |params| {
            let mut grad = vec![0.0; params.len()];
            for (c, t) in &points2 {
                let g = circuit_cost(c, &z2, params).expect("valid circuit");
                let dg = parameter_shift_gradient(c, &z2, params).expect("valid circuit");
                for (gk, dk) in grad.iter_mut().zip(&dg) {
                    *gk += 2.0 * (g - t) * dk;
                }
            }
            grad.iter_mut().for_each(|gk| *gk /= points2.len() as f64);
            grad.into()
        }),
        Box::new(move |trial_seed| {
            let mut rng = seeded_rng(0xf0f0, trial_seed);
            (0..n).map(|_| rng.random_range(-PI..PI)).collect()
        }),
    )
}

/// Amplitude-encoded variational classifier over 4-feature rows with ±1
/// labels: per sample, scale each feature column to `[0.1, 1.0]` over the
/// dataset, prepare the scaled row as normalized amplitudes on 2 qubits, run
/// `layers` blocks of (RY, RY, CNOT), and predict `⟨Z₀⟩ + bias`. The bias is
/// the last trainable parameter.
///
/// The column scaling matters: raw Iris rows are all-positive and nearly
/// parallel after normalization, which caps how far apart the circuit can
/// push the two classes. Scaling spreads them over the sphere while keeping
/// every amplitude vector strictly nonzero.
pub struct IrisClassifier {
    circuits: Vec<ParamCircuit>,
    labels: Vec<f64>,
    n_circuit_params: usize,
    observable: PauliHamiltonian,
}

/// Per-column affine map onto `[0.1, 1.0]`; constant columns sit at the
/// midpoint.
fn column_scaled(features: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let cols = features[0].len();
    let mut lo = vec![f64::INFINITY; cols];
    let mut hi = vec![f64::NEG_INFINITY; cols];
    for row in features {
        for (c, &v) in row.iter().enumerate() {
            lo[c] = lo[c].min(v);
            hi[c] = hi[c].max(v);
        }
    }
    features
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(c, &v)| {
                    if hi[c] - lo[c] > 1e-12 {
                        0.1 + 0.9 * (v - lo[c]) / (hi[c] - lo[c])
                    } else {
                        0.55
                    }
                })
                .collect()
        })
        .collect()
}

impl IrisClassifier {
    pub fn new(ds: &Dataset, layers: usize) -> Result<Self, TaskError> {
        if layers == 0 {
            return Err(TaskError::Invalid("layers must be ≥ 1".into()));
        }
        if ds.labels.iter().any(|&l| l != 1.0 && l != -1.0) {
            return Err(TaskError::Invalid("classifier labels must be ±1".into()));
        }
        if ds.features.is_empty() {
            return Err(TaskError::Invalid("classifier needs at least one sample".into()));
        }
        for row in &ds.features {
            if row.len() != 4 {
                return Err(TaskError::BadFeatureWidth(row.len()));
            }
        }
        let n_circuit_params = 2 * layers;
        let mut circuits = Vec::with_capacity(ds.features.len());
        for row in &column_scaled(&ds.features) {
            let prep = prepare_amplitude_state(row)?;
            let mut gates = Vec::new();
            for l in 0..layers {
                gates.push(Gate::ry(0, 2 * l));
                gates.push(Gate::ry(1, 2 * l + 1));
                gates.push(Gate::cnot(0, 1));
            }
            let c = ParamCircuit::new(2, gates, n_circuit_params)?.with_preparation(prep)?;
            circuits.push(c);
        }
        Ok(Self {
            circuits,
            labels: ds.labels.clone(),
            n_circuit_params,
            observable: PauliHamiltonian::from_terms(&[(1.0, "ZI")]).expect("static word"),
        })
    }

    /// Circuit parameters plus the bias.
    pub fn n_params(&self) -> usize {
        self.n_circuit_params + 1
    }

    pub fn predictions(&self, params: &[f64]) -> Vec<f64> {
        let bias = params[self.n_circuit_params];
        let circuit_params = &params[..self.n_circuit_params];
        self.circuits
            .iter()
            .map(|c| {
                let sv = apply_circuit(c, circuit_params).expect("valid circuit");
                expectation(&sv, &self.observable).expect("matching word") + bias
            })
            .collect()
    }

    pub fn cost(&self, params: &[f64]) -> f64 {
        let preds = self.predictions(params);
        preds
            .iter()
            .zip(&self.labels)
            .map(|(p, l)| (p - l) * (p - l))
            .sum::<f64>()
            / self.labels.len() as f64
    }

    pub fn gradient(&self, params: &[f64]) -> Vec<f64> {
        let n = self.n_params();
        let n_samples = self.labels.len() as f64;
        let circuit_params = &params[..self.n_circuit_params];
        let preds = self.predictions(params);
        let mut grad = vec![0.0; n];
        for ((c, pred), label) in self.circuits.iter().zip(&preds).zip(&self.labels) {
            let residual = 2.0 * (pred - label) / n_samples;
            let dg = parameter_shift_gradient(c, &self.observable, circuit_params)
                .expect("valid circuit");
            for (k, dk) in dg.iter().enumerate() {
                grad[k] += residual * dk;
            }
            grad[n - 1] += residual; // analytic bias derivative
        }
        grad
    }

    /// Fraction of samples whose prediction sign matches the label.
    pub fn accuracy(&self, params: &[f64]) -> f64 {
        let preds = self.predictions(params);
        let hits = preds
            .iter()
            .zip(&self.labels)
            .filter(|(p, l)| **p * **l > 0.0)
            .count();
        hits as f64 / self.labels.len() as f64
    }

    pub fn into_task(self) -> Result<Task, TaskError> {
        let n = self.n_params();
        let me = std::sync::Arc::new(self);
        let me2 = me.clone();
        Task::new(
            "iris",
            n,
            GradSource::ParameterShift,
            0.24,
            None,
            Box::new(move |params| me.cost(params)),
            Box::new(move |params| me2.gradient(params).into()),
            Box::new(move |trial_seed| {
                let mut rng = seeded_rng(0x1815, trial_seed);
                (0..n).map(|_| rng.random_range(-PI..PI)).collect()
            }),
        )
    }
}

/// Classifier benchmark over an ingested dataset.
pub fn iris_classifier_task(ds: &Dataset, layers: usize) -> Result<Task, TaskError> {
    IrisClassifier::new(ds, layers)?.into_task()
}
