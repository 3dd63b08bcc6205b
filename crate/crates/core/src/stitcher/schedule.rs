use super::{GaussianWaypoint, Schedule, StitchError, StitchParams};
use crate::geom::{Cov2, Polyline};

/// Regularization weight for 1-based step `t` given breakaway horizon `T`.
///
/// Up to `T` the weight is `λ₀`. Afterwards it is chosen so that the
/// solution's distance to the goal approximately follows `c·f(t)` with
/// `f(t) = 1/(t − T)`, assuming `λₜ` dominates the precision eigenvalues:
///
/// ```text
/// λₜ = λ₀ + ‖Σₜ⁻¹ (μₜ − Π(μₜ))‖ / (c · f(t))
/// ```
///
/// The value is computed once per waypoint and held fixed while solving.
pub fn lambda_schedule(
    t: usize,
    breakaway: usize,
    wp: &GaussianWaypoint,
    goal: &Polyline,
    params: &StitchParams,
) -> Result<f64, StitchError> {
    if t == 0 {
        return Err(StitchError::InvalidParams("time steps are 1-based".into()));
    }
    if t <= breakaway || params.schedule == Schedule::Constant {
        return Ok(params.lambda0);
    }
    let precision = wp.cov.precision()?;
    let offset = wp.mean - goal.project_point(wp.mean).point;
    let pull = precision.mul_vec(offset).norm();
    let f = 1.0 / (t - breakaway) as f64;
    Ok(params.lambda0 + pull / (params.c * f))
}

/// Ratio `λ / |Λ|∞` of the weight to the largest precision eigenvalue.
pub fn precision_dominance(lambda: f64, cov: &Cov2) -> Result<f64, StitchError> {
    let (_, largest) = cov.precision()?.eigenvalues();
    Ok(lambda / largest)
}
