use super::{GaussianWaypoint, PredictedTrajectory, StitchError};
use crate::geom::{
    mahalanobis_distance, mahalanobis_project, OrientedBox, Point2, Polyline, ProjectionMode,
};

/// Compatibility of a single body point `p` whose position is distributed
/// as `N(p, Σ)`: the probability that a draw lies at least as far (in
/// Mahalanobis distance) as the closest goal point, `exp(−D²/2)`.
pub fn footprint_vertex_score(
    vertex: Point2,
    wp: &GaussianWaypoint,
    goal: &Polyline,
    mode: ProjectionMode,
) -> Result<f64, StitchError> {
    let closest = mahalanobis_project(goal, vertex, &wp.cov, mode)?;
    let d = mahalanobis_distance(closest, vertex, &wp.cov)?;
    Ok((-0.5 * d * d).exp())
}

/// Waypoint compatibility with the goal, in `[0, 1]`: 1 when the footprint
/// overlaps the goal, otherwise the best vertex score.
pub fn compatibility_score_with(
    wp: &GaussianWaypoint,
    goal: &Polyline,
    footprint: &OrientedBox,
    mode: ProjectionMode,
) -> Result<f64, StitchError> {
    wp.cov.precision()?;
    if footprint.intersects_polyline(goal) {
        return Ok(1.0);
    }
    let mut best = 0.0_f64;
    for v in footprint.corners() {
        best = best.max(footprint_vertex_score(v, wp, goal, mode)?);
    }
    Ok(best.clamp(0.0, 1.0))
}

/// [`compatibility_score_with`] using the Euclidean goal projection.
pub fn compatibility_score(
    wp: &GaussianWaypoint,
    goal: &Polyline,
    footprint: &OrientedBox,
) -> Result<f64, StitchError> {
    compatibility_score_with(wp, goal, footprint, ProjectionMode::Euclidean)
}

pub fn compatibility_scores(
    traj: &PredictedTrajectory,
    goal: &Polyline,
    footprints: &[OrientedBox],
    mode: ProjectionMode,
) -> Result<Vec<f64>, StitchError> {
    if footprints.len() != traj.len() {
        return Err(StitchError::FootprintCount {
            expected: traj.len(),
            got: footprints.len(),
        });
    }
    traj.waypoints
        .iter()
        .zip(footprints)
        .map(|(wp, fp)| compatibility_score_with(wp, goal, fp, mode))
        .collect()
}

/// Latest 1-based step whose score reaches `alpha`, or 0 if none does.
pub fn breakaway_from_scores(scores: &[f64], alpha: f64) -> usize {
    scores
        .iter()
        .rposition(|&s| s >= alpha)
        .map_or(0, |i| i + 1)
}

/// Breakaway horizon `T`.
pub fn breakaway_horizon(
    traj: &PredictedTrajectory,
    goal: &Polyline,
    footprints: &[OrientedBox],
    alpha: f64,
) -> Result<usize, StitchError> {
    let scores = compatibility_scores(traj, goal, footprints, ProjectionMode::Euclidean)?;
    Ok(breakaway_from_scores(&scores, alpha))
}
