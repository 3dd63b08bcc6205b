use serde::{Deserialize, Serialize};

use super::{GeomError, Point2};

/// Diagonal loading applied when the smaller eigenvalue drops below it (m²).
pub const COV_REGULARIZATION: f64 = 1e-6;

/// A symmetric 2×2 matrix. Used both for covariances (m²) and their
/// inverses, the precision matrices (m⁻²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cov2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Cov2 {
    pub const IDENTITY: Cov2 = Cov2 {
        xx: 1.0,
        xy: 0.0,
        yy: 1.0,
    };

    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Self { xx, xy, yy }
    }

    pub const fn diag(xx: f64, yy: f64) -> Self {
        Self { xx, xy: 0.0, yy }
    }

    pub const fn isotropic(variance: f64) -> Self {
        Self::diag(variance, variance)
    }

    /// `R(heading) · diag(along, across) · R(heading)ᵀ`.
    pub fn from_principal(heading: f64, along: f64, across: f64) -> Self {
        let (s, c) = heading.sin_cos();
        Self {
            xx: along * c * c + across * s * s,
            xy: (along - across) * c * s,
            yy: along * s * s + across * c * c,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.xx.is_finite() && self.xy.is_finite() && self.yy.is_finite()
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let half_diff = 0.5 * (self.xx - self.yy);
        let r = half_diff.hypot(self.xy);
        (mean - r, mean + r)
    }

    /// Orientation of the eigenvector belonging to the larger eigenvalue.
    pub fn major_axis_heading(&self) -> f64 {
        0.5 * (2.0 * self.xy).atan2(self.xx - self.yy)
    }

    pub fn mul_vec(&self, v: Point2) -> Point2 {
        Point2::new(self.xx * v.x + self.xy * v.y, self.xy * v.x + self.yy * v.y)
    }

    /// `vᵀ M v`.
    pub fn quad_form(&self, v: Point2) -> f64 {
        v.x * (self.xx * v.x + self.xy * v.y) + v.y * (self.xy * v.x + self.yy * v.y)
    }

    pub fn add_diagonal(&self, value: f64) -> Self {
        Self::new(self.xx + value, self.xy, self.yy + value)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.xx * factor, self.xy * factor, self.yy * factor)
    }

    /// Returns the matrix with diagonal loading applied when the smaller
    /// eigenvalue is below [`COV_REGULARIZATION`]. Fails when the result is
    /// still not positive-definite.
    pub fn regularized(&self) -> Result<Self, GeomError> {
        if !self.is_finite() {
            return Err(GeomError::NonFinite("covariance"));
        }
        let (lo, hi) = self.eigenvalues();
        if lo >= COV_REGULARIZATION {
            return Ok(*self);
        }
        let loaded = self.add_diagonal(COV_REGULARIZATION);
        let (lo2, _) = loaded.eigenvalues();
        if lo2 > 0.0 {
            Ok(loaded)
        } else {
            Err(GeomError::NotPositiveDefinite(lo, hi))
        }
    }

    /// Plain 2×2 inverse; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.abs() <= f64::MIN_POSITIVE || !det.is_finite() {
            return None;
        }
        Some(Self::new(self.yy / det, -self.xy / det, self.xx / det))
    }

    /// Inverse of the regularized covariance.
    pub fn precision(&self) -> Result<Self, GeomError> {
        let reg = self.regularized()?;
        let (lo, hi) = reg.eigenvalues();
        reg.inverse().ok_or(GeomError::NotPositiveDefinite(lo, hi))
    }
}

impl Default for Cov2 {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Distance of `p` from `mean` under the metric induced by `cov⁻¹`.
pub fn mahalanobis_distance(p: Point2, mean: Point2, cov: &Cov2) -> Result<f64, GeomError> {
    let precision = cov.precision()?;
    Ok(precision.quad_form(p - mean).max(0.0).sqrt())
}
