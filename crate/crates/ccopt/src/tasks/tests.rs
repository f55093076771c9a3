use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::{dense_matrix, ground_state};
use super::*;
use crate::qsim::{apply_circuit, circuit_cost, expectation, Gate, ParamCircuit, PauliHamiltonian, Statevector};

fn data_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ccopt_test_{}_{name}", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

// --- classical -------------------------------------------------------------

#[test]
fn plateau_ramp_values_and_junctions() {
    let t = plateau_ramp_1d().unwrap();
    assert_eq!(t.cost(&[0.5]), 0.0);
    assert_eq!(t.gradient(&[0.5]).entries[0], 0.0);
    // C¹ junction at x = 2: value −1, slope −2 from both pieces
    assert!((t.cost(&[2.0]) + 1.0).abs() < 1e-15);
    assert!((t.gradient(&[2.0]).entries[0] + 2.0).abs() < 1e-15);
    assert!((t.gradient(&[2.0 + 1e-12]).entries[0] + 2.0).abs() < 1e-9);
    // global minimum
    assert!((t.cost(&[3.0]) + 2.0).abs() < 1e-15);
    assert_eq!(t.initial_params(42), vec![0.5]);
}

#[test]
fn quadratic_task_basics() {
    let t = quadratic_1d().unwrap();
    assert_eq!(t.cost(&[1.0]), 1.0);
    assert_eq!(t.gradient(&[1.0]).entries[0], 2.0);
    assert_eq!(t.initial_params(9), vec![1.0]);
}

#[test]
fn task_construction_rejects_bad_gradient() {
    let err = Task::new(
        "broken",
        1,
        GradSource::Analytic,
        0.0,
        None,
        Box::new(|x: &[f64]| x[0] * x[0]),
        Box::new(|x: &[f64]| vec![3.0 * x[0]].into()), // wrong slope
        Box::new(|_| vec![1.0]),
    );
    assert!(matches!(err, Err(TaskError::GradientInconsistent { .. })));
}

// --- barren plateau ---------------------------------------------------------

#[test]
fn barren_costs_vanish_at_zero_parameters() {
    for variant in [BarrenVariant::Global, BarrenVariant::Local] {
        let t = barren_plateau_task(3, 2, variant, 0).unwrap();
        let zeros = vec![0.0; t.dim];
        assert!(t.cost(&zeros).abs() < 1e-12, "{variant:?}");
    }
}

#[test]
fn barren_single_flipped_qubit_costs() {
    // q=2, single RY(θ=π) on qubit 0: p₀(0) = 0, p₁(0) = 1.
    let c = ParamCircuit::new(2, vec![Gate::ry(0, 0)], 1).unwrap();
    let global = barren_cost_hamiltonian(2, BarrenVariant::Global);
    let local = barren_cost_hamiltonian(2, BarrenVariant::Local);
    let g = circuit_cost(&c, &global, &[PI]).unwrap();
    let l = circuit_cost(&c, &local, &[PI]).unwrap();
    assert!((g - 1.0).abs() < 1e-12);
    assert!((l - 0.5).abs() < 1e-12);

    // direct statevector arithmetic as the oracle
    let sv = apply_circuit(&c, &[PI]).unwrap();
    let p0 = sv.amplitudes[0].norm_sqr() + sv.amplitudes[1].norm_sqr();
    let p1 = sv.amplitudes[0].norm_sqr() + sv.amplitudes[2].norm_sqr();
    assert!(p0.abs() < 1e-12);
    assert!((p1 - 1.0).abs() < 1e-12);
}

#[test]
fn barren_global_dominates_local_on_random_states() {
    let q = 3;
    let global = barren_cost_hamiltonian(q, BarrenVariant::Global);
    let local = barren_cost_hamiltonian(q, BarrenVariant::Local);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let mut amps: Vec<Complex64> = (0..1 << q)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        let sv = Statevector { qubits: q, amplitudes: amps };
        let g = expectation(&sv, &global).unwrap();
        let l = expectation(&sv, &local).unwrap();
        assert!(g >= l - 1e-12, "global {g} < local {l}");
        assert!((-1e-12..=1.0 + 1e-12).contains(&g));
        assert!((-1e-12..=1.0 + 1e-12).contains(&l));
    }
}

#[test]
fn barren_costs_bounded_on_random_draws() {
    for variant in [BarrenVariant::Global, BarrenVariant::Local] {
        let t = barren_plateau_task(3, 2, variant, 1).unwrap();
        for seed in 0..1000 {
            let params = t.initial_params(seed);
            let c = t.cost(&params);
            assert!((-1e-12..=1.0 + 1e-12).contains(&c), "{variant:?} cost {c}");
        }
    }
}

#[test]
fn barren_qubit_bounds() {
    assert!(matches!(
        barren_plateau_task(1, 1, BarrenVariant::Local, 0),
        Err(TaskError::QubitBound(1, 2, 8))
    ));
    assert!(matches!(
        barren_plateau_task(9, 1, BarrenVariant::Local, 0),
        Err(TaskError::QubitBound(9, 2, 8))
    ));
}

// --- exact diagonalization ---------------------------------------------------

#[test]
fn ground_energy_of_single_paulis() {
    let z = PauliHamiltonian::from_terms(&[(1.0, "Z")]).unwrap();
    assert!((exact_ground_energy(&z).unwrap() + 1.0).abs() < 1e-12);
    let x = PauliHamiltonian::from_terms(&[(1.0, "X")]).unwrap();
    assert!((exact_ground_energy(&x).unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn tfim_ground_energy_and_residual() {
    let h = load_hamiltonian(&data_file("tfim2.ham")).unwrap();
    let (energy, v) = ground_state(&h).unwrap();
    assert!((energy + 5f64.sqrt()).abs() < 1e-9);

    // residual ‖Hv − λv‖ ≤ 1e−9
    let m = dense_matrix(&h, 2);
    let mut residual = 0.0f64;
    for r in 0..4 {
        let mut hv = Complex64::ZERO;
        for c in 0..4 {
            hv += m[r][c] * v[c];
        }
        residual += (hv - Complex64::new(energy, 0.0) * v[r]).norm_sqr();
    }
    assert!(residual.sqrt() <= 1e-9, "residual {}", residual.sqrt());
}

#[test]
fn diagonalization_size_guard() {
    let word = "Z".repeat(5);
    let h = PauliHamiltonian::from_terms(&[(1.0, &word)]).unwrap();
    assert!(matches!(exact_ground_energy(&h), Err(TaskError::TooLarge(5))));
}

// --- VQE ---------------------------------------------------------------------

#[test]
fn single_qubit_vqe_optimum() {
    let h = PauliHamiltonian::from_terms(&[(1.0, "Z")]).unwrap();
    let ansatz = ParamCircuit::new(1, vec![Gate::rx(0, 0)], 1).unwrap();
    let t = vqe_task(h, ansatz).unwrap();
    assert_eq!(t.reference_optimum, Some(-1.0));
    assert!((t.cost(&[PI]) + 1.0).abs() < 1e-12);
    assert!((t.success_threshold - (-1.0 + 1e-3)).abs() < 1e-15);
}

#[test]
fn tfim_vqe_variational_bound() {
    let h = load_hamiltonian(&data_file("tfim2.ham")).unwrap();
    let ansatz = hardware_efficient_ansatz(2, 2).unwrap();
    let t = vqe_task(h, ansatz).unwrap();
    let reference = t.reference_optimum.unwrap();
    assert!((reference + 5f64.sqrt()).abs() < 1e-9);
    for seed in 0..1000 {
        let params = t.initial_params(seed);
        assert!(t.cost(&params) >= reference - 1e-10);
    }
}

#[test]
fn vqe_size_mismatch() {
    let h = PauliHamiltonian::from_terms(&[(1.0, "ZZZ")]).unwrap();
    let ansatz = hardware_efficient_ansatz(2, 1).unwrap();
    assert!(matches!(
        vqe_task(h, ansatz),
        Err(TaskError::SizeMismatch { h: 3, ansatz: 2 })
    ));
}

// --- Fourier fitting -----------------------------------------------------------

#[test]
fn fourier_zero_target_cost_nonnegative() {
    let target = FourierTarget::new(vec![0.0, 0.0], vec![0.0]).unwrap();
    let t = fourier_fit_task(1, target, &default_fourier_grid(1)).unwrap();
    for seed in 0..20 {
        assert!(t.cost(&t.initial_params(seed)) >= 0.0);
    }
}

#[test]
fn fourier_cos_x_is_exactly_representable() {
    // RX(x) alone gives ⟨Z⟩ = cos x, so identity trainables fit cos(x).
    let target = FourierTarget::new(vec![0.0, 1.0], vec![0.0]).unwrap();
    let grid: Vec<f64> = (0..8).map(|i| -PI + 2.0 * PI * i as f64 / 8.0).collect();
    let t = fourier_fit_task(1, target, &grid).unwrap();
    assert!(t.cost(&[0.0, 0.0, 0.0, 0.0]) <= 1e-10);
}

#[test]
fn fourier_degree_one_cannot_fit_cos_2x() {
    // Dense sweep over the 4 trainables of the r=1 model vs target cos(2x).
    // The task constructor caps the target degree at the model degree, so the
    // mismatched fit is evaluated against the raw cos(2x) values directly.
    let grid = default_fourier_grid(1);
    let t = {
        // evaluate cos(2x) through a degree-2 target on the r=1 grid points
        let vals: Vec<f64> = grid.iter().map(|&x| (2.0 * x).cos()).collect();
        move |params: &[f64]| {
            let z = PauliHamiltonian::from_terms(&[(1.0, "Z")]).unwrap();
            let mut acc = 0.0;
            for (&x, &v) in grid.iter().zip(&vals) {
                let mut gates = vec![
                    Gate::rz(0, 0),
                    Gate::ry(0, 1),
                    Gate::rx_fixed(0, x),
                    Gate::rz(0, 2),
                    Gate::ry(0, 3),
                ];
                let c = ParamCircuit::new(1, std::mem::take(&mut gates), 4).unwrap();
                let g = circuit_cost(&c, &z, params).unwrap();
                acc += (g - v) * (g - v);
            }
            acc / grid.len() as f64
        }
    };
    let sweep: Vec<f64> = (0..9).map(|i| -PI + 2.0 * PI * i as f64 / 9.0).collect();
    let mut min_cost = f64::INFINITY;
    for &a in &sweep {
        for &b in &sweep {
            for &c in &sweep {
                for &d in &sweep {
                    min_cost = min_cost.min(t(&[a, b, c, d]));
                }
            }
        }
    }
    assert!(min_cost >= 0.01, "sweep minimum {min_cost}");
}

#[test]
fn fourier_model_output_stays_in_unit_range() {
    // ⟨Z⟩ of the reuploading circuit never leaves [−1, 1] for any trainables
    // or input point.
    let z = PauliHamiltonian::from_terms(&[(1.0, "Z")]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let x = rng.random_range(-PI..PI);
        let c = ParamCircuit::new(
            1,
            vec![
                Gate::rz(0, 0),
                Gate::ry(0, 1),
                Gate::rx_fixed(0, x),
                Gate::rz(0, 2),
                Gate::ry(0, 3),
            ],
            4,
        )
        .unwrap();
        let params: Vec<f64> = (0..4).map(|_| rng.random_range(-PI..PI)).collect();
        let g = circuit_cost(&c, &z, &params).unwrap();
        assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&g), "output {g}");
    }

    // and the task cost of a bounded target stays within the worst case
    let target = FourierTarget::new(vec![0.0, 0.0, 0.5], vec![0.0, 0.2]).unwrap();
    let grid = default_fourier_grid(2);
    let t = fourier_fit_task(2, target, &grid).unwrap();
    for _ in 0..50 {
        let params: Vec<f64> = (0..t.dim).map(|_| rng.random_range(-PI..PI)).collect();
        let c = t.cost(&params);
        assert!((0.0..=4.0).contains(&c));
    }
}

#[test]
fn fourier_rejects_out_of_range_target() {
    let target = FourierTarget::new(vec![0.0, 1.0, 0.9], vec![0.0, 0.0]).unwrap();
    assert!(matches!(
        fourier_fit_task(2, target, &default_fourier_grid(2)),
        Err(TaskError::TargetOutOfRange(_))
    ));
}

// --- classifier ----------------------------------------------------------------

#[test]
fn classifier_bias_can_zero_single_sample_loss() {
    let ds = Dataset {
        features: vec![vec![5.1, 3.5, 1.4, 0.2]],
        labels: vec![1.0],
    };
    let clf = IrisClassifier::new(&ds, 2).unwrap();
    let mut params = vec![0.0; clf.n_params()];
    let pred0 = clf.predictions(&params)[0];
    params[clf.n_params() - 1] = 1.0 - pred0;
    assert!(clf.cost(&params) < 1e-24);
}

#[test]
fn classifier_zero_output_gives_unit_cost() {
    // Rows engineered so that ⟨Z₀⟩ = 0 at zero circuit parameters.
    let ds = Dataset {
        features: vec![vec![1.0, 0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0, 0.0]],
        labels: vec![1.0, -1.0],
    };
    let clf = IrisClassifier::new(&ds, 1).unwrap();
    let params = vec![0.0; clf.n_params()];
    let preds = clf.predictions(&params);
    assert!(preds.iter().all(|p| p.abs() < 1e-12));
    assert!((clf.cost(&params) - 1.0).abs() < 1e-12);
}

#[test]
fn classifier_task_construction_validates_gradient() {
    let ds = load_iris(&data_file("iris.csv"), Some(("Iris-setosa", "Iris-versicolor"))).unwrap();
    let small = Dataset {
        features: ds.features[..8].to_vec(),
        labels: ds.labels[..8].to_vec(),
    };
    let t = iris_classifier_task(&small, 2).unwrap();
    assert_eq!(t.dim, 5);
}

#[test]
fn classifier_rejects_bad_rows() {
    let ds = Dataset {
        features: vec![vec![1.0, 2.0, 3.0]],
        labels: vec![1.0],
    };
    assert!(matches!(
        IrisClassifier::new(&ds, 1),
        Err(TaskError::BadFeatureWidth(3))
    ));
    let ds = Dataset {
        features: vec![vec![1.0, 2.0, 3.0, 4.0]],
        labels: vec![0.5],
    };
    assert!(IrisClassifier::new(&ds, 1).is_err());
}

// --- loaders ---------------------------------------------------------------------

#[test]
fn load_canonical_iris() {
    let all = load_iris(&data_file("iris.csv"), None).unwrap();
    assert_eq!(all.len(), 150);
    let classes: std::collections::BTreeSet<_> =
        all.labels.iter().map(|l| *l as i64).collect();
    assert_eq!(classes.len(), 3);

    let binary = load_iris(&data_file("iris.csv"), Some(("Iris-setosa", "Iris-versicolor"))).unwrap();
    assert_eq!(binary.len(), 100);
    // first canonical row maps to −1 under the (setosa, versicolor) order
    assert_eq!(binary.features[0], vec![5.1, 3.5, 1.4, 0.2]);
    assert_eq!(binary.labels[0], -1.0);
}

#[test]
fn load_iris_errors() {
    let p = write_temp("bad_iris.csv", "5.1,3.5,1.4,0.2,Iris-setosa\n4.9,3.0,1.4,0.2,Iris-setosa\na,b,c\n");
    let err = load_iris(&p, None);
    match err {
        Err(TaskError::ParseError { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected ParseError, got {other:?}"),
    }

    let p = write_temp("one_class.csv", "5.1,3.5,1.4,0.2,Iris-setosa\n");
    assert!(matches!(
        load_iris(&p, Some(("Iris-setosa", "Iris-versicolor"))),
        Err(TaskError::UnknownClass(_))
    ));
}

#[test]
fn load_iris_skips_header() {
    let p = write_temp(
        "header_iris.csv",
        "sepal_l,sepal_w,petal_l,petal_w,class\n5.1,3.5,1.4,0.2,Iris-setosa\n",
    );
    let ds = load_iris(&p, None).unwrap();
    assert_eq!(ds.len(), 1);
}

#[test]
fn load_hamiltonian_tfim_and_errors() {
    let p = write_temp("tfim.ham", "-1.0 ZZ\n-1.0 XI\n-1.0 IX\n");
    let h = load_hamiltonian(&p).unwrap();
    assert_eq!(h.terms.len(), 3);
    assert_eq!(h.num_qubits(), Some(2));

    let p = write_temp("bad_len.ham", "1.0 ZZ\n1.0 ZZZ\n");
    assert!(matches!(
        load_hamiltonian(&p),
        Err(TaskError::InconsistentWordLength(2, 3))
    ));

    let p = write_temp("empty.ham", "# nothing but comments\n\n");
    let h = load_hamiltonian(&p).unwrap();
    assert!(h.terms.is_empty());
    let sv = Statevector::zero(3).unwrap();
    assert_eq!(expectation(&sv, &h).unwrap(), 0.0);

    let p = write_temp("bad_coeff.ham", "x ZZ\n");
    assert!(matches!(load_hamiltonian(&p), Err(TaskError::ParseError { line: 1, .. })));
}
