//! Uncertainty-aware stitching.
//!
//! A learned predictor supplies `H` Gaussian waypoints `N(μₜ, Σₜ)`; a lane
//! association supplies a goal polyline. Each waypoint is turned into a
//! solution point by minimizing
//!
//! ```text
//! ‖y − μ‖²_{Σ⁻¹} + λₜ · min_{g ∈ goal} ‖y − g‖²
//! ```
//!
//! with alternating minimization ([`solve_waypoint`]). The weight `λₜ` is
//! `λ₀` up to the breakaway horizon `T` (the last waypoint whose footprint
//! is still compatible with the goal, see [`breakaway_horizon`]) and grows
//! afterwards so the path converges onto the goal ([`lambda_schedule`]).
//! Past the horizon the remaining lateral offset is decayed linearly and
//! the rest of the goal is appended ([`extend_path`]).

mod compat;
mod extend;
mod schedule;
mod solver;

pub use compat::{
    breakaway_from_scores, breakaway_horizon, compatibility_score, compatibility_score_with,
    compatibility_scores, footprint_vertex_score,
};
pub use extend::{decay_factors, decay_steps, extend_path};
pub use schedule::{lambda_schedule, precision_dominance};
pub use solver::{
    pair_objective, regularized_objective, solve_waypoint, solve_waypoint_traced, AlternatingTrace,
};

use serde::{Deserialize, Serialize};

use crate::geom::{Cov2, GeomError, OrientedBox, Point2, Polyline, ProjectionMode};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StitchError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("invalid stitching parameters: {0}")]
    InvalidParams(String),
    #[error("invalid predicted trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("normal equations are singular (det = {0:e})")]
    SingularSystem(f64),
    #[error("expected {expected} footprints, got {got}")]
    FootprintCount { expected: usize, got: usize },
}

/// One predicted waypoint `N(mean, cov)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianWaypoint {
    pub mean: Point2,
    pub cov: Cov2,
}

impl GaussianWaypoint {
    pub const fn new(mean: Point2, cov: Cov2) -> Self {
        Self { mean, cov }
    }
}

/// A learned trajectory: `H` Gaussian waypoints at a fixed cadence `dt`,
/// the first one at time `dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedTrajectory {
    pub dt: f64,
    pub waypoints: Vec<GaussianWaypoint>,
}

impl PredictedTrajectory {
    pub fn new(dt: f64, waypoints: Vec<GaussianWaypoint>) -> Result<Self, StitchError> {
        let traj = Self { dt, waypoints };
        traj.validate()?;
        Ok(traj)
    }

    pub fn validate(&self) -> Result<(), StitchError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(StitchError::InvalidTrajectory(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.waypoints.is_empty() {
            return Err(StitchError::InvalidTrajectory("no waypoints".into()));
        }
        for (i, wp) in self.waypoints.iter().enumerate() {
            if !wp.mean.is_finite() {
                return Err(StitchError::InvalidTrajectory(format!(
                    "waypoint {i} mean is not finite"
                )));
            }
            wp.cov.regularized()?;
        }
        Ok(())
    }

    /// Horizon `H`.
    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn means(&self) -> Vec<Point2> {
        self.waypoints.iter().map(|w| w.mean).collect()
    }
}

/// How many points the full solution path carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetLength {
    /// Exactly `N` points, fewer only if the goal runs out.
    Points(usize),
    /// Append goal remainder while the solution path is at most this long (m).
    PathLength(f64),
}

impl Default for TargetLength {
    fn default() -> Self {
        TargetLength::PathLength(100.0)
    }
}

/// Whether `λₜ` grows after the breakaway horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    #[default]
    Adaptive,
    /// `λₜ = λ₀` for every waypoint.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StitchParams {
    /// Base regularization weight `λ₀`.
    pub lambda0: f64,
    /// Alternating-minimization steps `M`.
    pub iterations: usize,
    /// Compatibility threshold `α`.
    pub alpha: f64,
    /// Scale `c` of the post-breakaway convergence target `c·f(t)`.
    pub c: f64,
    /// Sampling distance `s` of the extension (m).
    pub sample_step: f64,
    /// Distance `d` over which the terminal offset is decayed (m).
    pub shrink_distance: f64,
    pub target_length: TargetLength,
    pub schedule: Schedule,
    /// Goal projection used inside the compatibility score.
    pub projection: ProjectionMode,
}

impl Default for StitchParams {
    fn default() -> Self {
        Self {
            lambda0: 0.55,
            iterations: 10,
            alpha: 0.5,
            c: 1.0,
            sample_step: 1.0,
            shrink_distance: 10.0,
            target_length: TargetLength::default(),
            schedule: Schedule::Adaptive,
            projection: ProjectionMode::Euclidean,
        }
    }
}

impl StitchParams {
    /// Default parameters with a different `(λ₀, α)` pair.
    pub fn with_lambda_alpha(lambda0: f64, alpha: f64) -> Self {
        Self {
            lambda0,
            alpha,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), StitchError> {
        let bad = |msg: String| Err(StitchError::InvalidParams(msg));
        if !(self.lambda0 >= 0.0 && self.lambda0.is_finite()) {
            return bad(format!("lambda0 must be >= 0, got {}", self.lambda0));
        }
        if self.iterations == 0 {
            return bad("iterations must be >= 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad(format!("c must be > 0, got {}", self.c));
        }
        if !(self.sample_step > 0.0 && self.sample_step.is_finite()) {
            return bad(format!("sample_step must be > 0, got {}", self.sample_step));
        }
        if !(self.sample_step <= self.shrink_distance && self.shrink_distance.is_finite()) {
            return bad(format!(
                "sample_step ({}) must not exceed shrink_distance ({})",
                self.sample_step, self.shrink_distance
            ));
        }
        if let TargetLength::PathLength(len) = self.target_length {
            if !(len >= 0.0 && len.is_finite()) {
                return bad(format!("target path length must be >= 0, got {len}"));
            }
        }
        Ok(())
    }
}

/// The stitched spatial path: `prefix_length` optimized points followed by
/// the decay and goal-remainder extension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionPath {
    pub points: Vec<Point2>,
    pub prefix_length: usize,
    /// Breakaway horizon `T` (0 when no waypoint was compatible).
    pub breakaway: usize,
}

impl SolutionPath {
    pub fn prefix(&self) -> &[Point2] {
        &self.points[..self.prefix_length]
    }

    pub fn extension(&self) -> &[Point2] {
        &self.points[self.prefix_length..]
    }

    pub fn to_polyline(&self) -> Result<Polyline, GeomError> {
        Polyline::from_points_dedup(self.points.iter().copied())
    }
}

/// Per-waypoint output of [`stitch_prefix`].
#[derive(Debug, Clone, PartialEq)]
pub struct Prefix {
    pub points: Vec<Point2>,
    pub breakaway: usize,
    pub scores: Vec<f64>,
    pub lambdas: Vec<f64>,
    /// `λₜ / |Λₜ|∞`; the convergence schedule assumes this is large.
    pub dominance: Vec<f64>,
}

/// Means closer than this are treated as coincident when deriving headings.
const HEADING_EPS: f64 = 1e-6;

/// Footprints centered on the waypoint means. Heading at step `t` is the
/// direction from `μₜ₋₁` to `μₜ₊₁` (one-sided at the ends), falling back to
/// the goal heading when those means coincide.
pub fn footprints(
    traj: &PredictedTrajectory,
    goal: &Polyline,
    length: f64,
    width: f64,
) -> Result<Vec<OrientedBox>, StitchError> {
    let means = traj.means();
    let h = means.len();
    let mut out = Vec::with_capacity(h);
    for t in 0..h {
        let from = means[t.saturating_sub(1)];
        let to = means[(t + 1).min(h - 1)];
        let heading = if from.distance(to) >= HEADING_EPS {
            (to - from).heading()
        } else {
            goal.heading_at(goal.project_point(means[t]).arc)
        };
        out.push(OrientedBox::new(means[t], heading, length, width)?);
    }
    Ok(out)
}

/// Optimizes every waypoint independently with its scheduled `λₜ`.
pub fn stitch_prefix(
    traj: &PredictedTrajectory,
    goal: &Polyline,
    footprints: &[OrientedBox],
    params: &StitchParams,
) -> Result<Prefix, StitchError> {
    params.validate()?;
    traj.validate()?;
    if footprints.len() != traj.len() {
        return Err(StitchError::FootprintCount {
            expected: traj.len(),
            got: footprints.len(),
        });
    }
    let scores = compatibility_scores(traj, goal, footprints, params.projection)?;
    let breakaway = breakaway_from_scores(&scores, params.alpha);
    let mut points = Vec::with_capacity(traj.len());
    let mut lambdas = Vec::with_capacity(traj.len());
    let mut dominance = Vec::with_capacity(traj.len());
    for (i, wp) in traj.waypoints.iter().enumerate() {
        let lambda = lambda_schedule(i + 1, breakaway, wp, goal, params)?;
        points.push(solve_waypoint(wp, goal, lambda, params.iterations)?);
        dominance.push(precision_dominance(lambda, &wp.cov)?);
        lambdas.push(lambda);
    }
    Ok(Prefix {
        points,
        breakaway,
        scores,
        lambdas,
        dominance,
    })
}

/// Full pipeline: footprints, breakaway, prefix, extension.
pub fn stitch(
    traj: &PredictedTrajectory,
    goal: &Polyline,
    actor_dims: (f64, f64),
    params: &StitchParams,
) -> Result<SolutionPath, StitchError> {
    if let TargetLength::Points(n) = params.target_length {
        if n < traj.len() {
            return Err(StitchError::InvalidParams(format!(
                "target length {n} is shorter than the horizon {}",
                traj.len()
            )));
        }
    }
    let boxes = footprints(traj, goal, actor_dims.0, actor_dims.1)?;
    let prefix = stitch_prefix(traj, goal, &boxes, params)?;
    extend_path(&prefix.points, prefix.breakaway, goal, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight_goal() -> Polyline {
        Polyline::new(vec![Point2::new(-5.0, 0.0), Point2::new(200.0, 0.0)]).unwrap()
    }

    fn traj_from(means: &[Point2], cov: Cov2) -> PredictedTrajectory {
        PredictedTrajectory::new(
            0.1,
            means
                .iter()
                .map(|&m| GaussianWaypoint::new(m, cov))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn default_params_match_reported_grid_search() {
        let p = StitchParams::default();
        assert_eq!(p.lambda0, 0.55);
        assert_eq!(p.iterations, 10);
        assert_eq!(p.alpha, 0.5);
        assert_eq!(p.c, 1.0);
        assert_eq!(p.sample_step, 1.0);
        assert_eq!(p.shrink_distance, 10.0);
        p.validate().unwrap();
    }

    #[test]
    fn param_validation() {
        let p = StitchParams {
            sample_step: 11.0,
            ..StitchParams::default()
        };
        assert!(p.validate().is_err());
        let p = StitchParams::with_lambda_alpha(0.5, 1.0);
        assert!(p.validate().is_err());
        let p = StitchParams {
            iterations: 0,
            ..StitchParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn trajectory_validation() {
        assert!(PredictedTrajectory::new(0.1, vec![]).is_err());
        assert!(PredictedTrajectory::new(
            0.0,
            vec![GaussianWaypoint::new(Point2::ORIGIN, Cov2::IDENTITY)]
        )
        .is_err());
        assert!(PredictedTrajectory::new(
            0.1,
            vec![GaussianWaypoint::new(Point2::ORIGIN, Cov2::diag(-1.0, 1.0))]
        )
        .is_err());
    }

    #[test]
    fn footprint_headings() {
        let means: Vec<Point2> = (1..=5).map(|k| Point2::new(k as f64, k as f64)).collect();
        let boxes = footprints(
            &traj_from(&means, Cov2::IDENTITY),
            &straight_goal(),
            4.0,
            2.0,
        )
        .unwrap();
        for b in &boxes {
            assert!((b.heading - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        }
        // stationary means fall back to the goal direction
        let still = vec![Point2::new(3.0, 1.0); 4];
        let boxes = footprints(
            &traj_from(&still, Cov2::IDENTITY),
            &straight_goal(),
            4.0,
            2.0,
        )
        .unwrap();
        assert!(boxes.iter().all(|b| b.heading == 0.0));
    }

    #[test]
    fn on_goal_trajectory_is_reproduced() {
        let means: Vec<Point2> = (1..=60).map(|k| Point2::new(k as f64, 0.0)).collect();
        let traj = traj_from(&means, Cov2::isotropic(0.3));
        let path = stitch(
            &traj,
            &straight_goal(),
            (4.5, 1.9),
            &StitchParams::default(),
        )
        .unwrap();
        assert_eq!(path.breakaway, 60);
        assert_eq!(path.prefix_length, 60);
        for (y, m) in path.prefix().iter().zip(&means) {
            assert!(y.distance(*m) <= 1e-6);
        }
        for y in path.extension() {
            assert!(y.y.abs() <= 1e-6);
        }
        // default target: remainder stops at 100 m of path
        let poly = path.to_polyline().unwrap();
        assert!(poly.length() <= 100.0 + 1e-9);
        assert!(poly.length() > 98.0);
    }

    #[test]
    fn explicit_point_target() {
        let means: Vec<Point2> = (1..=20).map(|k| Point2::new(k as f64, 0.0)).collect();
        let traj = traj_from(&means, Cov2::IDENTITY);
        let params = StitchParams {
            target_length: TargetLength::Points(50),
            ..StitchParams::default()
        };
        let path = stitch(&traj, &straight_goal(), (4.5, 1.9), &params).unwrap();
        assert_eq!(path.points.len(), 50);
        let short = StitchParams {
            target_length: TargetLength::Points(10),
            ..StitchParams::default()
        };
        assert!(stitch(&traj, &straight_goal(), (4.5, 1.9), &short).is_err());
    }

    #[test]
    fn stitching_is_deterministic() {
        let means: Vec<Point2> = (1..=60)
            .map(|k| Point2::new(k as f64 * 0.8, 0.002 * (k * k) as f64))
            .collect();
        let traj = traj_from(&means, Cov2::new(0.4, 0.1, 0.2));
        let a = stitch(
            &traj,
            &straight_goal(),
            (4.5, 1.9),
            &StitchParams::default(),
        )
        .unwrap();
        let b = stitch(
            &traj,
            &straight_goal(),
            (4.5, 1.9),
            &StitchParams::default(),
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(a
            .points
            .iter()
            .zip(&b.points)
            .all(|(p, q)| p.x.to_bits() == q.x.to_bits() && p.y.to_bits() == q.y.to_bits()));
    }
}
