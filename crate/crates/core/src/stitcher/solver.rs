use super::{GaussianWaypoint, StitchError};
use crate::geom::{Cov2, Point2, Polyline};

/// Iterates of the alternating minimization. Index 0 holds the start
/// `y⁰ = μ` paired with its projection; index `m` holds `(yᵐ, gᵐ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingTrace {
    pub iterates: Vec<Point2>,
    pub anchors: Vec<Point2>,
    pub objectives: Vec<f64>,
}

impl AlternatingTrace {
    pub fn solution(&self) -> Point2 {
        *self.iterates.last().expect("at least the start point")
    }
}

/// `𝓛(y, g) = ‖y − μ‖²_P + λ‖y − g‖²` with `P` the precision matrix.
pub fn pair_objective(y: Point2, g: Point2, mean: Point2, precision: &Cov2, lambda: f64) -> f64 {
    precision.quad_form(y - mean) + lambda * y.distance_squared(g)
}

/// The regularized objective with the inner minimum over the goal taken
/// exactly: `‖y − μ‖²_{Σ⁻¹} + λ · dist(y, goal)²`.
pub fn regularized_objective(
    y: Point2,
    wp: &GaussianWaypoint,
    goal: &Polyline,
    lambda: f64,
) -> Result<f64, StitchError> {
    let precision = wp.cov.precision()?;
    let d = goal.distance_to(y);
    Ok(precision.quad_form(y - wp.mean) + lambda * d * d)
}

/// Closed-form minimizer of `𝓛(·, g)`: `(P + λI)⁻¹(Pμ + λg)`.
fn y_update(
    mean: Point2,
    precision: &Cov2,
    lambda: f64,
    anchor: Point2,
) -> Result<Point2, StitchError> {
    let system = precision.add_diagonal(lambda);
    let det = system.det();
    if !(det.is_finite() && det > f64::EPSILON * system.trace().abs().max(1.0).powi(2)) {
        return Err(StitchError::SingularSystem(det));
    }
    let rhs = precision.mul_vec(mean) + anchor * lambda;
    let inv = system.inverse().ok_or(StitchError::SingularSystem(det))?;
    Ok(inv.mul_vec(rhs))
}

fn validate(lambda: f64, iterations: usize) -> Result<(), StitchError> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(StitchError::InvalidParams(format!(
            "lambda must be >= 0, got {lambda}"
        )));
    }
    if iterations == 0 {
        return Err(StitchError::InvalidParams("iterations must be >= 1".into()));
    }
    Ok(())
}

/// Alternating minimization for one waypoint: starting from `y⁰ = μ`,
/// repeat `gᵐ = Π(yᵐ⁻¹)` then `yᵐ = argmin_y 𝓛(y, gᵐ)` for `iterations`
/// rounds and return `yᴹ`.
pub fn solve_waypoint(
    wp: &GaussianWaypoint,
    goal: &Polyline,
    lambda: f64,
    iterations: usize,
) -> Result<Point2, StitchError> {
    validate(lambda, iterations)?;
    let precision = wp.cov.precision()?;
    if lambda == 0.0 {
        return Ok(wp.mean);
    }
    let mut y = wp.mean;
    for _ in 0..iterations {
        let g = goal.project_point(y).point;
        y = y_update(wp.mean, &precision, lambda, g)?;
    }
    Ok(y)
}

/// [`solve_waypoint`] that also records every iterate and objective value.
pub fn solve_waypoint_traced(
    wp: &GaussianWaypoint,
    goal: &Polyline,
    lambda: f64,
    iterations: usize,
) -> Result<AlternatingTrace, StitchError> {
    validate(lambda, iterations)?;
    let precision = wp.cov.precision()?;
    let mut y = wp.mean;
    let g0 = goal.project_point(y).point;
    let mut trace = AlternatingTrace {
        iterates: vec![y],
        anchors: vec![g0],
        objectives: vec![pair_objective(y, g0, wp.mean, &precision, lambda)],
    };
    for _ in 0..iterations {
        let g = goal.project_point(y).point;
        y = if lambda == 0.0 {
            wp.mean
        } else {
            y_update(wp.mean, &precision, lambda, g)?
        };
        trace.iterates.push(y);
        trace.anchors.push(g);
        trace
            .objectives
            .push(pair_objective(y, g, wp.mean, &precision, lambda));
    }
    Ok(trace)
}
