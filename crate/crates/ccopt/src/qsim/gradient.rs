//! Exact gradients of circuit expectations via the parameter-shift rule.

use std::f64::consts::FRAC_PI_2;

use super::pauli::{expectation, PauliHamiltonian};
use super::{apply_circuit_shifted, ParamCircuit, QsimError};

/// `∂⟨H⟩/∂param_k` for every slot, with shift `π/2`.
///
/// Each gate is shifted independently and gates sharing a slot contribute a
/// sum (product-rule correct). Only RX/RY/RZ gates may carry slots.
pub fn parameter_shift_gradient(
    c: &ParamCircuit,
    h: &PauliHamiltonian,
    params: &[f64],
) -> Result<Vec<f64>, QsimError> {
    if params.len() != c.n_params {
        return Err(QsimError::BadParamLength {
            expected: c.n_params,
            got: params.len(),
        });
    }
    let mut grad = vec![0.0; c.n_params];
    for (i, gate) in c.gates.iter().enumerate() {
        let Some(slot) = gate.param_slot else { continue };
        if !matches!(
            gate.kind,
            super::GateKind::RX | super::GateKind::RY | super::GateKind::RZ
        ) {
            return Err(QsimError::UnsupportedGate(gate.kind));
        }
        let plus = expectation(&apply_circuit_shifted(c, params, i, FRAC_PI_2)?, h)?;
        let minus = expectation(&apply_circuit_shifted(c, params, i, -FRAC_PI_2)?, h)?;
        grad[slot] += 0.5 * (plus - minus);
    }
    Ok(grad)
}
