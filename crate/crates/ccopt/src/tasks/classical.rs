//! Classical diagnostic landscapes with known closed forms.

use super::{GradSource, Task, TaskError};

/// 1-d diagnostic with an exactly flat region: `f(x) = 0` for `x ≤ 1`, then
/// a C¹ descent `−(x−1)²` on `(1, 2]` into the shifted well `(x−3)² − 2`.
/// Plain gradient methods started at `x₀ = 0.5` see a null gradient forever;
/// anything that escapes the flat piece can roll down to `f(3) = −2`.
pub fn plateau_ramp_1d() -> Result<Task, TaskError> {
    Task::new(
        "plateau_ramp",
        1,
        GradSource::Analytic,
        -1.5,
        Some(-2.0),
        Box::new(|x: &[f64]| {
            let x = x[0];
            if x <= 1.0 {
                0.0
            } else if x <= 2.0 {
                -(x - 1.0) * (x - 1.0)
            } else {
                (x - 3.0) * (x - 3.0) - 2.0
            }
        }),
        Box::new(|x: &[f64]| {
            let x = x[0];
            let g = if x <= 1.0 {
                0.0
            } else if x <= 2.0 {
                -2.0 * (x - 1.0)
            } else {
                2.0 * (x - 3.0)
            };
            vec![g].into()
        }),
        Box::new(|_seed| vec![0.5]),
    )
}

/// `f(x) = x²` from `x₀ = 1` for every seed; with gd and η = 0.4 the cost
/// decays as `0.04^k`, so the 1e−6 threshold is crossed at iteration 5.
pub fn quadratic_1d() -> Result<Task, TaskError> {
    Task::new(
        "quadratic",
        1,
        GradSource::Analytic,
        1e-6,
        Some(0.0),
        Box::new(|x: &[f64]| x[0] * x[0]),
        Box::new(|x: &[f64]| vec![2.0 * x[0]].into()),
        Box::new(|_seed| vec![1.0]),
    )
}
