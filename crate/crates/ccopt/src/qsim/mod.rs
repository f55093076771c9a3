//! Minimal dense statevector simulator behind the quantum benchmark cost
//! functions.
//!
//! Deliberately desk-scale: dense amplitudes only, at most [`MAX_QUBITS`]
//! qubits, and a six-gate vocabulary (RX/RY/RZ/H/CNOT/CZ). Basis ordering is
//! big-endian throughout — qubit 0 is the most significant bit of the basis
//! index, so `|01⟩` (qubit 0 in `|0⟩`, qubit 1 in `|1⟩`) is index 1.

mod gradient;
mod pauli;

pub use gradient::parameter_shift_gradient;
pub use pauli::{Pauli, PauliHamiltonian, PauliTerm};

use num_complex::Complex64;
use thiserror::Error;

/// Hard cap on qubit count; dense simulation beyond this is out of scope.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsimError {
    #[error("parameter vector has length {got}, circuit declares {expected}")]
    BadParamLength { expected: usize, got: usize },
    #[error("Pauli word length {word} does not match state qubit count {qubits}")]
    WordLengthMismatch { word: usize, qubits: usize },
    #[error("parameterized gate {0:?} does not admit the shift rule")]
    UnsupportedGate(GateKind),
    #[error("amplitude vector must not be all zero")]
    ZeroVector,
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("{0} qubits exceeds the dense-simulation cap of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("invalid circuit: {0}")]
    BadCircuit(String),
}

/// Gate vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    RX,
    RY,
    RZ,
    H,
    Cnot,
    Cz,
}

impl GateKind {
    fn is_rotation(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }
}

/// One gate of a parameterized circuit. Rotation gates carry either a
/// parameter slot (trainable) or a fixed angle (data/constant gates); the
/// other kinds carry neither.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub param_slot: Option<usize>,
    pub fixed_angle: Option<f64>,
}

impl Gate {
    pub fn rx(qubit: usize, slot: usize) -> Self {
        Self::rotation(GateKind::RX, qubit, Some(slot), None)
    }
    pub fn ry(qubit: usize, slot: usize) -> Self {
        Self::rotation(GateKind::RY, qubit, Some(slot), None)
    }
    pub fn rz(qubit: usize, slot: usize) -> Self {
        Self::rotation(GateKind::RZ, qubit, Some(slot), None)
    }
    pub fn rx_fixed(qubit: usize, angle: f64) -> Self {
        Self::rotation(GateKind::RX, qubit, None, Some(angle))
    }
    pub fn ry_fixed(qubit: usize, angle: f64) -> Self {
        Self::rotation(GateKind::RY, qubit, None, Some(angle))
    }
    pub fn rz_fixed(qubit: usize, angle: f64) -> Self {
        Self::rotation(GateKind::RZ, qubit, None, Some(angle))
    }
    pub fn h(qubit: usize) -> Self {
        Gate {
            kind: GateKind::H,
            targets: vec![qubit],
            param_slot: None,
            fixed_angle: None,
        }
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate {
            kind: GateKind::Cnot,
            targets: vec![control, target],
            param_slot: None,
            fixed_angle: None,
        }
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Gate {
            kind: GateKind::Cz,
            targets: vec![a, b],
            param_slot: None,
            fixed_angle: None,
        }
    }

    fn rotation(kind: GateKind, qubit: usize, slot: Option<usize>, fixed: Option<f64>) -> Self {
        Gate {
            kind,
            targets: vec![qubit],
            param_slot: slot,
            fixed_angle: fixed,
        }
    }
}

/// A parameterized gate list on `qubits` qubits reading `n_params` flat
/// parameters, optionally starting from a declared preparation instead of
/// `|0…0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCircuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
    pub n_params: usize,
    pub preparation: Option<Vec<Complex64>>,
}

impl ParamCircuit {
    pub fn new(qubits: usize, gates: Vec<Gate>, n_params: usize) -> Result<Self, QsimError> {
        let c = ParamCircuit {
            qubits,
            gates,
            n_params,
            preparation: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_preparation(mut self, amplitudes: Vec<Complex64>) -> Result<Self, QsimError> {
        if amplitudes.len() != 1 << self.qubits {
            return Err(QsimError::BadCircuit(format!(
                "preparation has {} amplitudes, expected {}",
                amplitudes.len(),
                1 << self.qubits
            )));
        }
        self.preparation = Some(amplitudes);
        Ok(self)
    }

    fn validate(&self) -> Result<(), QsimError> {
        if self.qubits == 0 {
            return Err(QsimError::BadCircuit("qubit count must be ≥ 1".into()));
        }
        if self.qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits(self.qubits));
        }
        for (i, g) in self.gates.iter().enumerate() {
            let arity = match g.kind {
                GateKind::Cnot | GateKind::Cz => 2,
                _ => 1,
            };
            if g.targets.len() != arity {
                return Err(QsimError::BadCircuit(format!(
                    "gate {i} ({:?}) expects {arity} target(s)",
                    g.kind
                )));
            }
            if g.targets.iter().any(|&t| t >= self.qubits) {
                return Err(QsimError::BadCircuit(format!("gate {i} targets out of range")));
            }
            if arity == 2 && g.targets[0] == g.targets[1] {
                return Err(QsimError::BadCircuit(format!("gate {i} targets must be distinct")));
            }
            if g.kind.is_rotation() {
                if g.param_slot.is_some() == g.fixed_angle.is_some() {
                    return Err(QsimError::BadCircuit(format!(
                        "rotation gate {i} needs exactly one of param_slot / fixed_angle"
                    )));
                }
                if let Some(slot) = g.param_slot {
                    if slot >= self.n_params {
                        return Err(QsimError::BadCircuit(format!(
                            "gate {i} references slot {slot} ≥ n_params {}",
                            self.n_params
                        )));
                    }
                }
            } else if g.param_slot.is_some() || g.fixed_angle.is_some() {
                return Err(QsimError::BadCircuit(format!(
                    "gate {i} ({:?}) cannot carry an angle",
                    g.kind
                )));
            }
        }
        Ok(())
    }
}

/// Dense amplitudes over `2^qubits` basis states, big-endian.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    pub qubits: usize,
    pub amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `qubits` qubits.
    pub fn zero(qubits: usize) -> Result<Self, QsimError> {
        if qubits == 0 {
            return Err(QsimError::BadCircuit("qubit count must be ≥ 1".into()));
        }
        if qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits(qubits));
        }
        let mut amplitudes = vec![Complex64::ZERO; 1 << qubits];
        amplitudes[0] = Complex64::ONE;
        Ok(Statevector { qubits, amplitudes })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Bit mask selecting `qubit` in a basis index (qubit 0 = MSB).
    fn mask(&self, qubit: usize) -> usize {
        1 << (self.qubits - 1 - qubit)
    }

    fn apply_single(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) {
        let mask = self.mask(qubit);
        let dim = self.amplitudes.len();
        for b in 0..dim {
            if b & mask == 0 {
                let b1 = b | mask;
                let a0 = self.amplitudes[b];
                let a1 = self.amplitudes[b1];
                self.amplitudes[b] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[b1] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_gate(&mut self, gate: &Gate, angle: Option<f64>) {
        match gate.kind {
            GateKind::RX => {
                let half = angle.expect("rotation angle resolved by caller") / 2.0;
                let (s, c) = half.sin_cos();
                let mi_s = Complex64::new(0.0, -s);
                self.apply_single(
                    gate.targets[0],
                    [
                        [Complex64::new(c, 0.0), mi_s],
                        [mi_s, Complex64::new(c, 0.0)],
                    ],
                );
            }
            GateKind::RY => {
                let half = angle.expect("rotation angle resolved by caller") / 2.0;
                let (s, c) = half.sin_cos();
                self.apply_single(
                    gate.targets[0],
                    [
                        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                    ],
                );
            }
            GateKind::RZ => {
                let half = angle.expect("rotation angle resolved by caller") / 2.0;
                let phase_neg = Complex64::from_polar(1.0, -half);
                let phase_pos = Complex64::from_polar(1.0, half);
                self.apply_single(
                    gate.targets[0],
                    [
                        [phase_neg, Complex64::ZERO],
                        [Complex64::ZERO, phase_pos],
                    ],
                );
            }
            GateKind::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.apply_single(
                    gate.targets[0],
                    [
                        [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
                        [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
                    ],
                );
            }
            GateKind::Cnot => {
                let cmask = self.mask(gate.targets[0]);
                let tmask = self.mask(gate.targets[1]);
                for b in 0..self.amplitudes.len() {
                    if b & cmask != 0 && b & tmask == 0 {
                        self.amplitudes.swap(b, b | tmask);
                    }
                }
            }
            GateKind::Cz => {
                let m = self.mask(gate.targets[0]) | self.mask(gate.targets[1]);
                for b in 0..self.amplitudes.len() {
                    if b & m == m {
                        self.amplitudes[b] = -self.amplitudes[b];
                    }
                }
            }
        }
    }
}

/// Run the circuit on `|0…0⟩` (or its declared preparation) with the given
/// flat parameter vector.
pub fn apply_circuit(c: &ParamCircuit, params: &[f64]) -> Result<Statevector, QsimError> {
    apply_circuit_shifted(c, params, usize::MAX, 0.0)
}

/// Like [`apply_circuit`], but with `shift` added to the angle of the single
/// gate at index `shift_gate`. This per-gate (not per-slot) offset is what
/// the shift rule needs when several gates share a slot.
pub(crate) fn apply_circuit_shifted(
    c: &ParamCircuit,
    params: &[f64],
    shift_gate: usize,
    shift: f64,
) -> Result<Statevector, QsimError> {
    if params.len() != c.n_params {
        return Err(QsimError::BadParamLength {
            expected: c.n_params,
            got: params.len(),
        });
    }
    let mut sv = match &c.preparation {
        Some(amps) => Statevector {
            qubits: c.qubits,
            amplitudes: amps.clone(),
        },
        None => Statevector::zero(c.qubits)?,
    };
    for (i, gate) in c.gates.iter().enumerate() {
        let mut angle = match (gate.param_slot, gate.fixed_angle) {
            (Some(slot), _) => Some(params[slot]),
            (None, Some(a)) => Some(a),
            (None, None) => None,
        };
        if i == shift_gate {
            angle = Some(angle.expect("only rotation gates are shifted") + shift);
        }
        sv.apply_gate(gate, angle);
    }
    Ok(sv)
}

/// Cost of a circuit under a Pauli observable: `⟨ψ(params)|H|ψ(params)⟩`.
pub fn circuit_cost(c: &ParamCircuit, h: &PauliHamiltonian, params: &[f64]) -> Result<f64, QsimError> {
    let sv = apply_circuit(c, params)?;
    pauli::expectation(&sv, h)
}

/// Exact amplitude encoding of a feature vector: normalizes to unit 2-norm.
pub fn prepare_amplitude_state(features: &[f64]) -> Result<Vec<Complex64>, QsimError> {
    if features.is_empty() || !features.len().is_power_of_two() {
        return Err(QsimError::NotPowerOfTwo(features.len()));
    }
    let norm = features.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm <= 0.0 || !norm.is_finite() {
        return Err(QsimError::ZeroVector);
    }
    Ok(features.iter().map(|&v| Complex64::new(v / norm, 0.0)).collect())
}

pub use pauli::expectation;
