//! Exact coordinate changes between the cartesian landscape description and
//! the two transformed descriptions used by the optimizer.
//!
//! Conventions, fixed once for the whole crate: the augmented cartesian
//! vector is `y ∈ ℝ^{n+1}` with `y_k = x_k` for `k = 1..n` and `y_{n+1}`
//! the cost value (the cost always occupies the *last* axis). The forward
//! hyperspherical map is
//!
//! ```text
//! y_k     = r · cos θ_k · Π_{j<k} sin θ_j      (k = 1..n)
//! y_{n+1} = r · Π_{j=1..n} sin θ_j
//! ```
//!
//! so the cost axis is the all-sines component and every angle couples to
//! it. Plane rotations use `R(α) = [[cos α, −sin α], [sin α, cos α]]` acting
//! on the column `(x_i, cost)ᵀ`.

use thiserror::Error;

/// Errors from coordinate-change operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoordsError {
    /// The augmented point sits at the origin; there is no meaningful set of
    /// angles. Callers fall back to an untransformed step.
    #[error("augmented point has (near-)zero radius; no hyperspherical description")]
    ZeroRadius,
    /// The rotated landscape curve is vertical at this gradient value, so
    /// its slope is undefined. Callers skip the transform for this
    /// coordinate this step.
    #[error("rotated curve is vertical (cos α − g·sin α ≈ 0)")]
    SlopeSingular,
    /// Input failed a domain invariant.
    #[error("invalid {what}: {why}")]
    Invalid {
        what: &'static str,
        why: &'static str,
    },
}

/// Radius below which the hyperspherical description is refused.
pub const ZERO_RADIUS_EPS: f64 = 1e-300;

/// Denominator magnitude below which the rotated slope is declared singular.
pub const SLOPE_SINGULAR_EPS: f64 = 1e-9;

/// A point of the optimization landscape: the parameter vector together with
/// the current cost value riding along as an extra coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct LandscapePoint {
    /// Optimization variables, length `n ≥ 1`.
    pub params: Vec<f64>,
    /// Cost value at `params`.
    pub cost: f64,
}

impl LandscapePoint {
    pub fn new(params: Vec<f64>, cost: f64) -> Result<Self, CoordsError> {
        if params.is_empty() {
            return Err(CoordsError::Invalid {
                what: "LandscapePoint",
                why: "params must have length ≥ 1",
            });
        }
        if !cost.is_finite() || params.iter().any(|v| !v.is_finite()) {
            return Err(CoordsError::Invalid {
                what: "LandscapePoint",
                why: "entries must be finite",
            });
        }
        Ok(Self { params, cost })
    }

    /// Dimension `n` of the parameter space (the augmented space has `n+1`).
    pub fn dim(&self) -> usize {
        self.params.len()
    }

    /// The augmented cartesian vector `(x_1, …, x_n, cost)`.
    pub fn augmented(&self) -> Vec<f64> {
        let mut y = self.params.clone();
        y.push(self.cost);
        y
    }
}

/// Hyperspherical description of an augmented point: `n` angles plus a
/// radius. Canonical ranges (what [`to_hyperspherical`] emits) are
/// `θ_1..θ_{n−1} ∈ [0, π]` and `θ_n ∈ (−π, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersphericalPoint {
    /// Angles `θ_1..θ_n`.
    pub angles: Vec<f64>,
    /// Radius `r ≥ 0`.
    pub radius: f64,
}

impl HypersphericalPoint {
    pub fn new(angles: Vec<f64>, radius: f64) -> Result<Self, CoordsError> {
        if angles.is_empty() {
            return Err(CoordsError::Invalid {
                what: "HypersphericalPoint",
                why: "needs at least one angle",
            });
        }
        if !radius.is_finite() || radius < 0.0 || angles.iter().any(|a| !a.is_finite()) {
            return Err(CoordsError::Invalid {
                what: "HypersphericalPoint",
                why: "radius must be finite ≥ 0 and angles finite",
            });
        }
        if radius == 0.0 && angles.iter().any(|&a| a != 0.0) {
            return Err(CoordsError::Invalid {
                what: "HypersphericalPoint",
                why: "zero radius requires all angles zero (canonical origin)",
            });
        }
        Ok(Self { angles, radius })
    }

    /// Parameter-space dimension `n` (= number of angles).
    pub fn dim(&self) -> usize {
        self.angles.len()
    }
}

/// An SO(2) rotation of the plane spanned by one parameter axis and the cost
/// axis. `angle` must stay strictly inside `(−π/2, π/2)`: at `±π/2` the
/// rotation swaps the parameter axis with the cost axis and the back-map
/// degenerates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneRotation {
    /// Which parameter axis is rotated against the cost axis.
    pub coord_index: usize,
    /// Rotation angle `α ∈ (−π/2, π/2)`.
    pub angle: f64,
}

impl PlaneRotation {
    pub fn new(coord_index: usize, angle: f64) -> Result<Self, CoordsError> {
        if !angle.is_finite() || angle.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(CoordsError::Invalid {
                what: "PlaneRotation",
                why: "angle must lie strictly inside (−π/2, π/2)",
            });
        }
        Ok(Self { coord_index, angle })
    }
}

/// A point of one (parameter, cost) plane after rotation: `u` is the rotated
/// parameter coordinate, `w` the rotated cost coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedPlanePoint {
    pub u: f64,
    pub w: f64,
}

/// Partial derivatives of the first `n` cartesian components with respect to
/// the hyperspherical coordinates. Entry `(k, j)` is `∂x_k/∂θ_{j+1}` for
/// `j < n` and `∂x_k/∂r` for `j = n`, so the matrix is `n × (n+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformJacobian {
    rows: Vec<Vec<f64>>,
}

impl TransformJacobian {
    /// Number of cartesian (parameter) rows `n`.
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, k: usize, j: usize) -> f64 {
        self.rows[k][j]
    }

    /// Chain rule: pull the cartesian gradient `g` (length `n`) back to the
    /// hyperspherical coordinates, returning `Jᵀ g` of length `n+1`
    /// (`n` angle components followed by the radius component).
    pub fn pullback(&self, g: &[f64]) -> Vec<f64> {
        let n = self.n_rows();
        assert_eq!(g.len(), n, "gradient length must match Jacobian rows");
        let mut out = vec![0.0; n + 1];
        for (k, row) in self.rows.iter().enumerate() {
            let gk = g[k];
            if gk == 0.0 {
                continue;
            }
            for (j, &entry) in row.iter().enumerate() {
                out[j] += gk * entry;
            }
        }
        out
    }
}

/// Change an augmented landscape point into its hyperspherical description.
///
/// `radius = ‖y‖₂`, `θ_k = atan2(√(y_{k+1}² + … + y_{n+1}²), y_k)` for
/// `k < n`, and `θ_n = atan2(y_{n+1}, y_n)`; branch cuts are deterministic
/// and the canonical ranges stated on [`HypersphericalPoint`] always hold.
pub fn to_hyperspherical(p: &LandscapePoint) -> Result<HypersphericalPoint, CoordsError> {
    let y = p.augmented();
    let n = p.dim();

    // tail_sq[k] = y_k² + y_{k+1}² + … accumulated from the back.
    let mut tail_sq = vec![0.0; n + 2];
    for k in (0..n + 1).rev() {
        tail_sq[k] = tail_sq[k + 1] + y[k] * y[k];
    }
    let radius = tail_sq[0].sqrt();
    if radius < ZERO_RADIUS_EPS {
        return Err(CoordsError::ZeroRadius);
    }

    let mut angles = Vec::with_capacity(n);
    for k in 0..n - 1 {
        angles.push(tail_sq[k + 1].sqrt().atan2(y[k]));
    }
    let mut last = y[n].atan2(y[n - 1]);
    if last == -std::f64::consts::PI {
        last = std::f64::consts::PI;
    }
    angles.push(last);

    Ok(HypersphericalPoint { angles, radius })
}

/// Project a hyperspherical point back to cartesian coordinates, returning
/// the `n` parameter components and the (stale) cost-axis component.
pub fn from_hyperspherical(h: &HypersphericalPoint) -> (Vec<f64>, f64) {
    let n = h.dim();
    let mut params = Vec::with_capacity(n);
    let mut sin_prod = h.radius;
    for k in 0..n {
        params.push(sin_prod * h.angles[k].cos());
        sin_prod *= h.angles[k].sin();
    }
    (params, sin_prod)
}

/// Analytic partials of the parameter components with respect to
/// `(θ_1..θ_n, r)`.
///
/// All entries are built from products of sines and cosines directly (never
/// via cotangent divisions), so nothing blows up near the singular set.
pub fn hyperspherical_jacobian(h: &HypersphericalPoint) -> Result<TransformJacobian, CoordsError> {
    if h.radius < ZERO_RADIUS_EPS {
        return Err(CoordsError::ZeroRadius);
    }
    let n = h.dim();
    let sines: Vec<f64> = h.angles.iter().map(|a| a.sin()).collect();
    let cosines: Vec<f64> = h.angles.iter().map(|a| a.cos()).collect();

    // prefix[k] = Π_{m<k} sin θ_m  (prefix[0] = 1).
    let mut prefix = vec![1.0; n + 1];
    for k in 0..n {
        prefix[k + 1] = prefix[k] * sines[k];
    }

    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = vec![0.0; n + 1];
        // ∂x_k/∂θ_j = r · cos θ_k · cos θ_j · Π_{m<k, m≠j} sin θ_m  (j < k)
        for j in 0..k {
            let mut prod = 1.0;
            for (m, &s) in sines.iter().enumerate().take(k) {
                if m != j {
                    prod *= s;
                }
            }
            row[j] = h.radius * cosines[k] * cosines[j] * prod;
        }
        // ∂x_k/∂θ_k = −r · sin θ_k · Π_{m<k} sin θ_m
        row[k] = -h.radius * sines[k] * prefix[k];
        // ∂x_k/∂r = cos θ_k · Π_{m<k} sin θ_m
        row[n] = cosines[k] * prefix[k];
        rows.push(row);
    }
    Ok(TransformJacobian { rows })
}

/// Rotate one (parameter, cost) pair into the rotated frame:
/// `u = x_i cos α − cost sin α`, `w = x_i sin α + cost cos α`.
pub fn rotate_plane(x_i: f64, cost: f64, rot: &PlaneRotation) -> RotatedPlanePoint {
    let (sin_a, cos_a) = rot.angle.sin_cos();
    RotatedPlanePoint {
        u: x_i * cos_a - cost * sin_a,
        w: x_i * sin_a + cost * cos_a,
    }
}

/// Apply the inverse rotation `R(−α)`, recovering the parameter coordinate
/// and the cost-axis component. Composing with [`rotate_plane`] is the
/// identity to machine precision.
pub fn unrotate_plane(rp: &RotatedPlanePoint, rot: &PlaneRotation) -> (f64, f64) {
    let (sin_a, cos_a) = rot.angle.sin_cos();
    (rp.u * cos_a + rp.w * sin_a, -rp.u * sin_a + rp.w * cos_a)
}

/// Slope of the rotated landscape curve at a point where the original cost
/// has slope `g_i`:
///
/// ```text
/// s = (sin α + g_i cos α) / (cos α − g_i sin α)
/// ```
///
/// At a flat point (`g_i = 0`) this is `tan α`, which is what lets the
/// rotated frame keep moving where the original frame sees a null gradient.
pub fn rotated_slope(g_i: f64, rot: &PlaneRotation) -> Result<f64, CoordsError> {
    let (sin_a, cos_a) = rot.angle.sin_cos();
    let denom = cos_a - g_i * sin_a;
    if denom.abs() < SLOPE_SINGULAR_EPS {
        return Err(CoordsError::SlopeSingular);
    }
    Ok((sin_a + g_i * cos_a) / denom)
}
