//! Single optimization steps: plain, hyperspherical collapse, plane
//! rotation, and the padding control.

use crate::coords::{
    from_hyperspherical, hyperspherical_jacobian, rotate_plane, rotated_slope, to_hyperspherical,
    CoordsError, LandscapePoint, PlaneRotation, RotatedPlanePoint,
};

use super::{apply_update_rule, GradientVector, OptimError, OptimizerState, UpdateRule};

pub type CostFn<'a> = &'a dyn Fn(&[f64]) -> f64;
pub type GradFn<'a> = &'a dyn Fn(&[f64]) -> GradientVector;

/// Result of one outer step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    /// The new landscape point, with its cost freshly evaluated.
    pub point: LandscapePoint,
    /// ∞-norm of the cartesian gradient at the step's starting point.
    pub grad_inf_norm: f64,
}

/// Textbook step in the original coordinates: one gradient, one update, one
/// cost evaluation at the new point.
pub fn plain_step(
    p: &LandscapePoint,
    cost_fn: CostFn,
    grad_fn: GradFn,
    rule: &UpdateRule,
    state: &mut OptimizerState,
) -> Result<StepOutcome, OptimError> {
    let grad = grad_fn(&p.params);
    let norm = grad.inf_norm();
    let delta = apply_update_rule(state, rule, &grad.entries)?;
    let params: Vec<f64> = p.params.iter().zip(&delta).map(|(x, d)| x + d).collect();
    let cost = cost_fn(&params);
    Ok(StepOutcome {
        point: LandscapePoint { params, cost },
        grad_inf_norm: norm,
    })
}

/// Hyperspherical change-of-coordinates step with collapse.
///
/// The augmented point moves to its hyperspherical description, takes
/// `inner_steps` updates of `(θ⃗, r)` driven by the chain-rule gradient
/// `Jᵀ∇f` (with `∇f` re-evaluated at the re-projected parameters each
/// substep), and finally collapses: the parameters are projected back and
/// the true cost is evaluated there, replacing the stale cost-axis value.
///
/// Consumes exactly `inner_steps` gradient evaluations plus one cost
/// evaluation. If the augmented point sits at the origin (no angles exist),
/// the step falls back to one untransformed gradient-descent step.
pub fn cc_hyperspherical_step(
    p: &LandscapePoint,
    cost_fn: CostFn,
    grad_fn: GradFn,
    rule: &UpdateRule,
    state: &mut OptimizerState,
    inner_steps: usize,
) -> Result<StepOutcome, OptimError> {
    let n = p.dim();
    let mut h = match to_hyperspherical(p) {
        Ok(h) => h,
        Err(CoordsError::ZeroRadius) => {
            // Origin point: no hyperspherical description. Take one plain
            // gradient-descent step (the documented fallback; optimizer
            // state is left untouched because its coordinates differ).
            let grad = grad_fn(&p.params);
            let norm = grad.inf_norm();
            let lr = rule.learning_rate();
            let params: Vec<f64> = p
                .params
                .iter()
                .zip(&grad.entries)
                .map(|(x, g)| x - lr * g)
                .collect();
            let cost = cost_fn(&params);
            return Ok(StepOutcome {
                point: LandscapePoint { params, cost },
                grad_inf_norm: norm,
            });
        }
        Err(e) => return Err(OptimError::InvalidSpec(e.to_string())),
    };

    let mut first_norm = None;
    for _ in 0..inner_steps.max(1) {
        let (params, _stale_cost_axis) = from_hyperspherical(&h);
        let grad = grad_fn(&params);
        if grad.len() != n {
            return Err(OptimError::DimensionMismatch {
                expected: n,
                got: grad.len(),
            });
        }
        first_norm.get_or_insert(grad.inf_norm());
        let jac = match hyperspherical_jacobian(&h) {
            Ok(j) => j,
            // Radius collapsed mid-flight: stop the inner loop and collapse.
            Err(CoordsError::ZeroRadius) => break,
            Err(e) => return Err(OptimError::InvalidSpec(e.to_string())),
        };
        let transformed_grad = jac.pullback(&grad.entries);
        let delta = apply_update_rule(state, rule, &transformed_grad)?;
        for (a, d) in h.angles.iter_mut().zip(&delta) {
            *a += d;
        }
        h.radius += delta[n];
    }

    // Collapse: project back and replace the stale cost-axis value with the
    // true cost at the new parameters.
    let (params, _) = from_hyperspherical(&h);
    let cost = cost_fn(&params);
    Ok(StepOutcome {
        point: LandscapePoint { params, cost },
        grad_inf_norm: first_norm.unwrap_or(0.0),
    })
}

/// Plane-rotation step.
///
/// The cartesian gradient is evaluated once at the incoming point and every
/// coordinate is processed against it (Jacobi style, order independent):
/// rotate `(x_i, cost)` by `α_i`, take the rotated-curve slope as the
/// transformed gradient component, update the rotated coordinates together
/// under the rule, and map each back through the inverse rotation holding
/// the untouched component fixed. Coordinates whose rotated curve is
/// vertical fall back to an untransformed update this step. Consumes one
/// gradient and one cost evaluation.
pub fn cc_rotation_step(
    p: &LandscapePoint,
    cost_fn: CostFn,
    grad_fn: GradFn,
    rule: &UpdateRule,
    state: &mut OptimizerState,
    rot_angles: &[f64],
) -> Result<StepOutcome, OptimError> {
    let n = p.dim();
    if rot_angles.len() != n {
        return Err(OptimError::DimensionMismatch {
            expected: n,
            got: rot_angles.len(),
        });
    }
    let grad = grad_fn(&p.params);
    if grad.len() != n {
        return Err(OptimError::DimensionMismatch {
            expected: n,
            got: grad.len(),
        });
    }

    let mut rotations = Vec::with_capacity(n);
    for (i, &alpha) in rot_angles.iter().enumerate() {
        rotations.push(
            PlaneRotation::new(i, alpha).map_err(|e| OptimError::InvalidSpec(e.to_string()))?,
        );
    }

    // Rotated coordinates and transformed gradient; singular coordinates are
    // processed untransformed (their slope is the raw gradient component and
    // the rule's delta applies to x_i directly).
    let mut rotated = Vec::with_capacity(n);
    let mut slopes = Vec::with_capacity(n);
    let mut singular = vec![false; n];
    for i in 0..n {
        rotated.push(rotate_plane(p.params[i], p.cost, &rotations[i]));
        match rotated_slope(grad.entries[i], &rotations[i]) {
            Ok(s) => slopes.push(s),
            Err(CoordsError::SlopeSingular) => {
                singular[i] = true;
                slopes.push(grad.entries[i]);
            }
            Err(e) => return Err(OptimError::InvalidSpec(e.to_string())),
        }
    }

    let delta = apply_update_rule(state, rule, &slopes)?;
    let mut params = Vec::with_capacity(n);
    for i in 0..n {
        if singular[i] {
            params.push(p.params[i] + delta[i]);
        } else {
            let moved = RotatedPlanePoint {
                u: rotated[i].u + delta[i],
                w: rotated[i].w,
            };
            let (x_i, _cost_axis) = crate::coords::unrotate_plane(&moved, &rotations[i]);
            params.push(x_i);
        }
    }
    let cost = cost_fn(&params);
    Ok(StepOutcome {
        point: LandscapePoint { params, cost },
        grad_inf_norm: grad.inf_norm(),
    })
}

/// Negative-control step: extend the coordinate space by `pad_dims` constant
/// coordinates that the cost never sees. Their gradient components are
/// identically zero, so the parameter trajectory reproduces the
/// untransformed update exactly and the padded coordinates never move.
pub fn pad_control_step(
    p: &LandscapePoint,
    cost_fn: CostFn,
    grad_fn: GradFn,
    rule: &UpdateRule,
    state: &mut OptimizerState,
    pad_dims: usize,
) -> Result<StepOutcome, OptimError> {
    let n = p.dim();
    let grad = grad_fn(&p.params);
    let norm = grad.inf_norm();
    let mut extended = grad.entries.clone();
    extended.resize(n + pad_dims, 0.0);
    let delta = apply_update_rule(state, rule, &extended)?;
    let params: Vec<f64> = p.params.iter().zip(&delta).map(|(x, d)| x + d).collect();
    let cost = cost_fn(&params);
    Ok(StepOutcome {
        point: LandscapePoint { params, cost },
        grad_inf_norm: norm,
    })
}
