//! Pauli-string observables and their dense expectation values.

use num_complex::Complex64;

use super::{QsimError, Statevector};

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// One weighted Pauli word. `word[i]` acts on qubit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub word: Vec<Pauli>,
}

/// A Hermitian observable as a real-weighted sum of Pauli words. All words
/// must share one length; an empty term list is the zero observable.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliHamiltonian {
    pub terms: Vec<PauliTerm>,
}

impl PauliHamiltonian {
    /// Build from `(coefficient, word)` pairs like `(-1.0, "ZZ")`.
    pub fn from_terms(terms: &[(f64, &str)]) -> Result<Self, QsimError> {
        let mut out = Vec::with_capacity(terms.len());
        let mut len: Option<usize> = None;
        for &(coeff, word) in terms {
            let parsed: Option<Vec<Pauli>> = word.chars().map(Pauli::from_char).collect();
            let parsed = parsed.ok_or_else(|| {
                QsimError::BadCircuit(format!("invalid Pauli word {word:?}"))
            })?;
            match len {
                None => len = Some(parsed.len()),
                Some(l) if l != parsed.len() => {
                    return Err(QsimError::WordLengthMismatch {
                        word: parsed.len(),
                        qubits: l,
                    })
                }
                _ => {}
            }
            out.push(PauliTerm { coeff, word: parsed });
        }
        Ok(PauliHamiltonian { terms: out })
    }

    /// Word length (= qubit count), `None` for the empty observable.
    pub fn num_qubits(&self) -> Option<usize> {
        self.terms.first().map(|t| t.word.len())
    }
}

/// `Σ_t coeff_t · ⟨sv|P_t|sv⟩`. The imaginary residue is a rounding artifact
/// (real coefficients, Hermitian words) and is discarded after a debug
/// assertion.
pub fn expectation(sv: &Statevector, h: &PauliHamiltonian) -> Result<f64, QsimError> {
    let mut acc = Complex64::ZERO;
    for term in &h.terms {
        if term.word.len() != sv.qubits {
            return Err(QsimError::WordLengthMismatch {
                word: term.word.len(),
                qubits: sv.qubits,
            });
        }
        acc += Complex64::new(term.coeff, 0.0) * word_expectation(sv, &term.word);
    }
    // NaN amplitudes (non-finite parameters upstream) pass through; the
    // optimization loop aborts such trials on the non-finite cost.
    debug_assert!(
        acc.im.is_nan() || acc.im.abs() <= 1e-12,
        "imaginary residue {} exceeds tolerance",
        acc.im
    );
    Ok(acc.re)
}

/// `⟨ψ|P|ψ⟩` for one Pauli word: `P|b⟩ = phase(b)·|flip(b)⟩` basis by basis.
fn word_expectation(sv: &Statevector, word: &[Pauli]) -> Complex64 {
    let q = sv.qubits;
    let mut flip_mask = 0usize;
    for (t, op) in word.iter().enumerate() {
        if matches!(op, Pauli::X | Pauli::Y) {
            flip_mask |= 1 << (q - 1 - t);
        }
    }
    let mut acc = Complex64::ZERO;
    for (b, &amp) in sv.amplitudes.iter().enumerate() {
        if amp == Complex64::ZERO {
            continue;
        }
        let mut phase = Complex64::ONE;
        for (t, op) in word.iter().enumerate() {
            let bit = b >> (q - 1 - t) & 1;
            match op {
                Pauli::I | Pauli::X => {}
                Pauli::Y => {
                    // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                    phase *= if bit == 0 {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    };
                }
                Pauli::Z => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
            }
        }
        acc += sv.amplitudes[b ^ flip_mask].conj() * phase * amp;
    }
    acc
}
