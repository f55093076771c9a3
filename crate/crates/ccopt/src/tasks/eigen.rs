//! Dense exact diagonalization for small Pauli Hamiltonians — the reference
//! oracle for VQE tasks.

use num_complex::Complex64;

use crate::qsim::{Pauli, PauliHamiltonian};

use super::TaskError;

const MAX_DENSE_QUBITS: usize = 4;

/// Minimum eigenvalue of `Σ coeff·P_word` for at most 4 qubits.
pub fn exact_ground_energy(h: &PauliHamiltonian) -> Result<f64, TaskError> {
    Ok(ground_state(h)?.0)
}

/// Ground energy together with a ground state vector (for residual checks).
pub(crate) fn ground_state(h: &PauliHamiltonian) -> Result<(f64, Vec<Complex64>), TaskError> {
    let Some(q) = h.num_qubits() else {
        // Zero operator: every vector is an eigenvector with eigenvalue 0.
        return Ok((0.0, vec![Complex64::ONE]));
    };
    if q > MAX_DENSE_QUBITS {
        return Err(TaskError::TooLarge(q));
    }
    let m = dense_matrix(h, q);
    let dim = 1 << q;

    // Embed the Hermitian matrix H = A + iB as the real symmetric
    // [[A, −B], [B, A]]; its spectrum is that of H with doubled multiplicity
    // and an eigenvector (x, y) folds back to x + iy.
    let mut real = vec![vec![0.0f64; 2 * dim]; 2 * dim];
    for r in 0..dim {
        for c in 0..dim {
            real[r][c] = m[r][c].re;
            real[r][c + dim] = -m[r][c].im;
            real[r + dim][c] = m[r][c].im;
            real[r + dim][c + dim] = m[r][c].re;
        }
    }
    let (eigenvalues, vectors) = jacobi_eigen(real);
    let (min_idx, &min_val) = eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    let mut v: Vec<Complex64> = (0..dim)
        .map(|r| Complex64::new(vectors[r][min_idx], vectors[r + dim][min_idx]))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut v {
        *a /= norm;
    }
    Ok((min_val, v))
}

/// Dense complex matrix of the observable, big-endian basis ordering.
pub(crate) fn dense_matrix(h: &PauliHamiltonian, q: usize) -> Vec<Vec<Complex64>> {
    let dim = 1 << q;
    let mut m = vec![vec![Complex64::ZERO; dim]; dim];
    for term in &h.terms {
        let mut flip = 0usize;
        for (t, op) in term.word.iter().enumerate() {
            if matches!(op, Pauli::X | Pauli::Y) {
                flip |= 1 << (q - 1 - t);
            }
        }
        for col in 0..dim {
            let mut phase = Complex64::new(term.coeff, 0.0);
            for (t, op) in term.word.iter().enumerate() {
                let bit = col >> (q - 1 - t) & 1;
                match op {
                    Pauli::I | Pauli::X => {}
                    Pauli::Y => {
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
            m[col ^ flip][col] += phase;
        }
    }
    m
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix. Returns the
/// eigenvalues (diagonal after convergence) and the accumulated rotation
/// matrix whose columns are the eigenvectors.
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(1e-300);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for (r, row) in a.iter().enumerate() {
            for &v in &row[r + 1..] {
                off += v * v;
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[r][p];
                        let arq = a[r][q];
                        a[r][p] = c * arp - s * arq;
                        a[p][r] = a[r][p];
                        a[r][q] = s * arp + c * arq;
                        a[q][r] = a[r][q];
                    }
                    let vrp = v[r][p];
                    let vrq = v[r][q];
                    v[r][p] = c * vrp - s * vrq;
                    v[r][q] = s * vrp + c * vrq;
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| a[i][i]).collect();
    (eigenvalues, v)
}
