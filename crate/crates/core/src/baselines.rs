//! Comparison methods: ballistic rollout, pure pursuit on the goal and
//! fixed-horizon linear decay-stitching LS(n).

use crate::geom::{Point2, Polyline};
use crate::stitcher::{extend_path, PredictedTrajectory, SolutionPath, StitchError, StitchParams};
use crate::tracker::{rollout_with, ActorState, TimedTrajectory, TrackerConfig};

/// Distance covered by time `t` at constant acceleration `a0`, with the
/// speed floored at zero (no upper clamp).
pub fn ballistic_distance(v0: f64, a0: f64, t: f64) -> f64 {
    let v0 = v0.max(0.0);
    if a0 >= 0.0 {
        return v0 * t + 0.5 * a0 * t * t;
    }
    let stop = v0 / -a0;
    let t = t.min(stop);
    v0 * t + 0.5 * a0 * t * t
}

/// Rolls the current state forward along its heading, ignoring the map.
/// Returns `horizon_steps + 1` states including the initial one.
pub fn ballistic(state0: &ActorState, horizon_steps: usize, dt: f64) -> TimedTrajectory {
    let dir = Point2::from_heading(state0.heading);
    let states = (0..=horizon_steps)
        .map(|k| {
            let t = k as f64 * dt;
            let speed = (state0.speed + state0.acceleration * t).max(0.0);
            ActorState {
                position: state0.position
                    + dir * ballistic_distance(state0.speed, state0.acceleration, t),
                speed,
                acceleration: if speed > 0.0 {
                    state0.acceleration
                } else {
                    0.0
                },
                ..*state0
            }
        })
        .collect();
    TimedTrajectory { dt, states }
}

/// Pure pursuit tracking the goal itself.
pub fn pp_on_goal(state0: &ActorState, goal: &Polyline, config: &TrackerConfig) -> TimedTrajectory {
    rollout_with(state0, goal, config)
}

/// Number of verbatim prefix points `⌊n/Δt⌋` for LS(n).
pub fn linear_stitch_horizon(n: f64, dt: f64) -> usize {
    (n / dt + 1e-9).floor() as usize
}

/// LS(n): the first `⌊n/Δt⌋` means verbatim, then the shared extension.
/// Covariances are ignored throughout.
pub fn linear_stitch(
    traj: &PredictedTrajectory,
    goal: &Polyline,
    n: f64,
    params: &StitchParams,
) -> Result<SolutionPath, StitchError> {
    traj.validate()?;
    let horizon = linear_stitch_horizon(n, traj.dt);
    if horizon == 0 || horizon > traj.len() {
        return Err(StitchError::InvalidParams(format!(
            "LS horizon {horizon} outside 1..={}",
            traj.len()
        )));
    }
    let prefix: Vec<Point2> = traj.waypoints[..horizon].iter().map(|w| w.mean).collect();
    extend_path(&prefix, horizon, goal, params)
}
