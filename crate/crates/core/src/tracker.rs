//! Pure-pursuit path tracking and retiming.
//!
//! Every actor follows the same longitudinal speed profile: the initial
//! acceleration is held for a while, then decays to zero at a fixed jerk,
//! and the speed is clamped to `[v_min, v_max]`. Spatial paths become timed
//! trajectories either by tracking them with pure pursuit ([`rollout`]) or
//! by walking along them at the profile speed ([`retime`]).

use serde::{Deserialize, Serialize};

use crate::geom::{normalize_angle, Point2, Polyline, MIN_SEGMENT_LENGTH};

/// Minimum turn radius of regular vehicles (m).
pub const REGULAR_TURN_RADIUS: f64 = 5.0;
/// Minimum turn radius of large vehicles (m).
pub const LARGE_TURN_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrackerError {
    #[error("retiming needs at least 2 path points, got {0}")]
    TooFewPoints(usize),
    #[error("invalid tracker setting: {0}")]
    InvalidConfig(String),
}

/// Kinematic state and footprint of a tracked actor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActorState {
    pub position: Point2,
    pub heading: f64,
    pub speed: f64,
    pub acceleration: f64,
    pub length: f64,
    pub width: f64,
    pub is_large: bool,
}

impl ActorState {
    pub fn min_turn_radius(&self) -> f64 {
        if self.is_large {
            LARGE_TURN_RADIUS
        } else {
            REGULAR_TURN_RADIUS
        }
    }

    pub fn dims(&self) -> (f64, f64) {
        (self.length, self.width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpeedProfileParams {
    /// How long the initial acceleration is held (s).
    pub hold_duration: f64,
    /// Rate at which the acceleration magnitude decays afterwards (m/s³).
    pub jerk: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Default for SpeedProfileParams {
    fn default() -> Self {
        Self {
            hold_duration: 2.0,
            jerk: 1.0,
            v_min: 0.0,
            v_max: 15.0,
        }
    }
}

impl SpeedProfileParams {
    pub fn validate(&self) -> Result<(), TrackerError> {
        if !(self.hold_duration >= 0.0 && self.jerk > 0.0 && self.v_min <= self.v_max) {
            return Err(TrackerError::InvalidConfig(format!(
                "bad speed profile {self:?}"
            )));
        }
        Ok(())
    }
}

/// The speed profile of one actor, starting from `(v0, a0)` at `t = 0`.
///
/// The commanded acceleration keeps its sign, so the unclamped speed is
/// monotone and the clamped speed is simply `clamp(v0 + ∫a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedProfile {
    pub v0: f64,
    pub a0: f64,
    pub params: SpeedProfileParams,
}

impl SpeedProfile {
    pub fn new(v0: f64, a0: f64, params: SpeedProfileParams) -> Self {
        Self { v0, a0, params }
    }

    pub fn from_state(state: &ActorState, params: SpeedProfileParams) -> Self {
        Self::new(state.speed, state.acceleration, params)
    }

    fn decay_duration(&self) -> f64 {
        self.a0.abs() / self.params.jerk
    }

    /// Commanded (unclamped) acceleration at `t`.
    pub fn commanded_acceleration(&self, t: f64) -> f64 {
        let hold = self.params.hold_duration;
        if t <= hold {
            self.a0
        } else {
            self.a0.signum() * (self.a0.abs() - self.params.jerk * (t - hold)).max(0.0)
        }
    }

    /// `∫₀ᵗ a(τ) dτ` of the commanded acceleration.
    fn velocity_change(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        let hold = self.params.hold_duration;
        if t <= hold {
            return self.a0 * t;
        }
        let tau = (t - hold).min(self.decay_duration());
        self.a0 * hold + self.a0 * tau - self.a0.signum() * 0.5 * self.params.jerk * tau * tau
    }

    fn start_speed(&self) -> f64 {
        self.v0.clamp(self.params.v_min, self.params.v_max)
    }

    pub fn speed(&self, t: f64) -> f64 {
        (self.start_speed() + self.velocity_change(t)).clamp(self.params.v_min, self.params.v_max)
    }

    /// Effective acceleration (zero while the speed is clamped).
    pub fn acceleration(&self, t: f64) -> f64 {
        let raw = self.start_speed() + self.velocity_change(t);
        if raw >= self.params.v_max && self.a0 > 0.0 || raw <= self.params.v_min && self.a0 < 0.0 {
            0.0
        } else {
            self.commanded_acceleration(t)
        }
    }

    /// Time at which the speed first reaches a clamp bound, if it does.
    fn clamp_time(&self) -> Option<f64> {
        let end = self.params.hold_duration + self.decay_duration();
        let v_start = self.start_speed();
        let hits = |t: f64| {
            let v = v_start + self.velocity_change(t);
            v >= self.params.v_max && self.a0 > 0.0 || v <= self.params.v_min && self.a0 < 0.0
        };
        if self.a0 == 0.0 || !hits(end) {
            return None;
        }
        if hits(0.0) {
            return Some(0.0);
        }
        let (mut lo, mut hi) = (0.0, end);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hits(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// Distance travelled by time `t`.
    ///
    /// The speed is a polynomial of degree ≤ 2 between breakpoints, so
    /// Simpson's rule on each piece is exact.
    pub fn distance(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let mut knots = vec![0.0, t];
        let hold = self.params.hold_duration;
        for k in [
            Some(hold),
            Some(hold + self.decay_duration()),
            self.clamp_time(),
        ]
        .into_iter()
        .flatten()
        {
            if k > 0.0 && k < t {
                knots.push(k);
            }
        }
        knots.sort_by(f64::total_cmp);
        knots
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                (b - a) / 6.0 * (self.speed(a) + 4.0 * self.speed(0.5 * (a + b)) + self.speed(b))
            })
            .sum()
    }
}

/// Speed at time `t` for an actor starting at `(v0, a0)`.
pub fn profile_speed(v0: f64, a0: f64, t: f64, params: &SpeedProfileParams) -> f64 {
    SpeedProfile::new(v0, a0, *params).speed(t)
}

/// States at a uniform cadence; `states[k]` is at time `k·dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimedTrajectory {
    pub dt: f64,
    pub states: Vec<ActorState>,
}

impl TimedTrajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn positions(&self) -> Vec<Point2> {
        self.states.iter().map(|s| s.position).collect()
    }

    /// State at `time` if it falls on the cadence within the trajectory.
    pub fn state_at(&self, time: f64) -> Option<&ActorState> {
        let k = (time / self.dt).round();
        if k < 0.0 || (k * self.dt - time).abs() > 1e-9 {
            return None;
        }
        self.states.get(k as usize)
    }

    /// Spatial polyline of the positions (duplicates dropped).
    pub fn track(&self) -> Option<Polyline> {
        Polyline::from_points_dedup(self.positions()).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackerConfig {
    /// Pure-pursuit lookahead distance (m).
    pub lookahead: f64,
    /// Output cadence (s).
    pub output_dt: f64,
    /// Number of future output steps.
    pub horizon_steps: usize,
    pub profile: SpeedProfileParams,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            lookahead: 5.0,
            output_dt: 0.1,
            horizon_steps: 60,
            profile: SpeedProfileParams::default(),
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<(), TrackerError> {
        if !(self.lookahead > 0.0 && self.output_dt > 0.0) {
            return Err(TrackerError::InvalidConfig(format!(
                "lookahead and output_dt must be positive ({}, {})",
                self.lookahead, self.output_dt
            )));
        }
        self.profile.validate()
    }
}

/// Lookahead target: the path point `lookahead` meters past the actor's
/// projection, or the terminal vertex. `None` once the path is used up.
pub fn lookahead_target(position: Point2, path: &Polyline, lookahead: f64) -> Option<Point2> {
    let here = path.project_point(position);
    if here.arc >= path.length() - MIN_SEGMENT_LENGTH {
        return None;
    }
    Some(path.point_at(here.arc + lookahead))
}

/// Pure-pursuit curvature `2·y/L²` toward the lookahead target, clamped to
/// the actor's minimum turn radius.
pub fn pure_pursuit_curvature(state: &ActorState, path: &Polyline, lookahead: f64) -> Option<f64> {
    let target = lookahead_target(state.position, path, lookahead)?;
    let local = (target - state.position).rotate(-state.heading);
    let dist_sq = local.norm_squared();
    if dist_sq <= MIN_SEGMENT_LENGTH * MIN_SEGMENT_LENGTH {
        return None;
    }
    let max_curvature = 1.0 / state.min_turn_radius();
    Some((2.0 * local.y / dist_sq).clamp(-max_curvature, max_curvature))
}

/// Moves a pose `distance` meters along a circular arc of `curvature`.
pub fn advance_along_arc(
    position: Point2,
    heading: f64,
    curvature: f64,
    distance: f64,
) -> (Point2, f64) {
    if curvature.abs() < 1e-12 {
        return (position + Point2::from_heading(heading) * distance, heading);
    }
    let new_heading = heading + curvature * distance;
    let dx = (new_heading.sin() - heading.sin()) / curvature;
    let dy = (heading.cos() - new_heading.cos()) / curvature;
    (position + Point2::new(dx, dy), normalize_angle(new_heading))
}

/// One tracking step of length `step_dt` starting at time `elapsed`.
///
/// The actor covers the profile distance over `[elapsed, elapsed + step_dt]`
/// along an exact circular arc; speed and acceleration are then set from
/// the profile at the end of the step.
pub fn pure_pursuit_step(
    state: &ActorState,
    path: &Polyline,
    lookahead: f64,
    step_dt: f64,
    profile: &SpeedProfile,
    elapsed: f64,
) -> ActorState {
    let end = elapsed + step_dt;
    let mut next = *state;
    next.speed = profile.speed(end);
    next.acceleration = profile.acceleration(end);
    let Some(curvature) = pure_pursuit_curvature(state, path, lookahead) else {
        return next;
    };
    let distance = profile.distance(end) - profile.distance(elapsed);
    let (position, heading) = advance_along_arc(state.position, state.heading, curvature, distance);
    next.position = position;
    next.heading = heading;
    next
}

/// Pure-pursuit sub-steps per output interval.
pub const SUBSTEPS: usize = 2;

/// Tracks `path` from `state0`, recording a state every `output_dt`.
/// Returns `horizon_steps + 1` states including the initial one.
pub fn rollout(
    state0: &ActorState,
    path: &Polyline,
    horizon_steps: usize,
    output_dt: f64,
    lookahead: f64,
    profile: &SpeedProfileParams,
) -> TimedTrajectory {
    let speed_profile = SpeedProfile::from_state(state0, *profile);
    let step_dt = output_dt / SUBSTEPS as f64;
    let mut states = Vec::with_capacity(horizon_steps + 1);
    let mut state = *state0;
    states.push(state);
    for k in 0..horizon_steps {
        for j in 0..SUBSTEPS {
            let elapsed = k as f64 * output_dt + j as f64 * step_dt;
            state = pure_pursuit_step(&state, path, lookahead, step_dt, &speed_profile, elapsed);
        }
        states.push(state);
    }
    TimedTrajectory {
        dt: output_dt,
        states,
    }
}

/// [`rollout`] with the settings of a [`TrackerConfig`].
pub fn rollout_with(
    state0: &ActorState,
    path: &Polyline,
    config: &TrackerConfig,
) -> TimedTrajectory {
    rollout(
        state0,
        path,
        config.horizon_steps,
        config.output_dt,
        config.lookahead,
        &config.profile,
    )
}

/// Reassigns times to a spatial path: the point at step `k` is the one at
/// the profile distance `∫₀^{k·dt} v` along the path, extrapolated along
/// the terminal heading once the path runs out. Returns
/// `horizon_steps + 1` states.
pub fn retime(
    path_points: &[Point2],
    state0: &ActorState,
    profile: &SpeedProfileParams,
    output_dt: f64,
    horizon_steps: usize,
) -> Result<TimedTrajectory, TrackerError> {
    if path_points.len() < 2 {
        return Err(TrackerError::TooFewPoints(path_points.len()));
    }
    let speed_profile = SpeedProfile::from_state(state0, *profile);
    let line = Polyline::from_points_dedup(path_points.iter().copied()).ok();
    let states = (0..=horizon_steps)
        .map(|k| {
            let t = k as f64 * output_dt;
            let arc = speed_profile.distance(t);
            let (position, heading) = match &line {
                None => (path_points[0], state0.heading),
                Some(line) if arc <= line.length() => (line.point_at(arc), line.heading_at(arc)),
                Some(line) => {
                    let heading = line.heading_at(line.length());
                    let overshoot = arc - line.length();
                    (
                        line.last() + Point2::from_heading(heading) * overshoot,
                        heading,
                    )
                }
            };
            ActorState {
                position,
                heading,
                speed: speed_profile.speed(t),
                acceleration: speed_profile.acceleration(t),
                ..*state0
            }
        })
        .collect();
    Ok(TimedTrajectory {
        dt: output_dt,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn actor(position: Point2, heading: f64, speed: f64, acceleration: f64) -> ActorState {
        ActorState {
            position,
            heading,
            speed,
            acceleration,
            length: 4.5,
            width: 1.9,
            is_large: false,
        }
    }

    fn p() -> SpeedProfileParams {
        SpeedProfileParams::default()
    }

    #[test]
    fn profile_examples() {
        assert_eq!(profile_speed(10.0, 0.0, 5.0, &p()), 10.0);
        assert!((profile_speed(10.0, 1.0, 2.0, &p()) - 12.0).abs() < 1e-12);
        assert!((profile_speed(10.0, 1.0, 3.0, &p()) - 12.5).abs() < 1e-12);
        // decay finished after one more second: stays at 12.5
        assert!((profile_speed(10.0, 1.0, 9.0, &p()) - 12.5).abs() < 1e-12);
    }

    #[test]
    fn profile_clamps() {
        // 14 + 2·1 would overshoot: clamped to exactly 15 and held
        assert_eq!(profile_speed(14.0, 1.0, 1.0, &p()), 15.0);
        assert_eq!(profile_speed(14.0, 1.0, 6.0, &p()), 15.0);
        assert_eq!(profile_speed(1.0, -2.0, 3.0, &p()), 0.0);
        assert_eq!(profile_speed(20.0, 0.0, 0.0, &p()), 15.0);
        let sp = SpeedProfile::new(14.0, 1.0, p());
        assert_eq!(sp.acceleration(1.5), 0.0);
        assert_eq!(sp.acceleration(0.5), 1.0);
    }

    #[test]
    fn deceleration_decays_symmetrically() {
        assert!((profile_speed(10.0, -1.0, 3.0, &p()) - 7.5).abs() < 1e-12);
    }

    #[test]
    fn distance_matches_fine_quadrature() {
        for &(v0, a0) in &[
            (10.0, 1.0),
            (3.0, -2.0),
            (14.5, 0.8),
            (0.0, 0.0),
            (5.0, 3.0),
        ] {
            let sp = SpeedProfile::new(v0, a0, p());
            for &t in &[0.5, 2.0, 3.3, 6.0] {
                let n = (t / 1e-4) as usize;
                let h = t / n as f64;
                let trap: f64 = (0..n)
                    .map(|i| 0.5 * h * (sp.speed(i as f64 * h) + sp.speed((i + 1) as f64 * h)))
                    .sum();
                assert!((sp.distance(t) - trap).abs() < 1e-6, "{v0} {a0} {t}");
            }
        }
    }

    #[test]
    fn curvature_straight_ahead_is_zero() {
        let path = Polyline::new(vec![Point2::ORIGIN, Point2::new(50.0, 0.0)]).unwrap();
        let s = actor(Point2::ORIGIN, 0.0, 10.0, 0.0);
        assert_eq!(pure_pursuit_curvature(&s, &path, 5.0), Some(0.0));
    }

    #[test]
    fn curvature_is_clamped() {
        // target at local (L/√2, L/√2), L = 5: raw κ ≈ 0.2828, clamped to 1/5
        let d = 5.0 * FRAC_1_SQRT_2;
        let path = Polyline::new(vec![
            Point2::ORIGIN,
            Point2::new(d, d),
            Point2::new(d, 40.0),
        ])
        .unwrap();
        let target = lookahead_target(Point2::ORIGIN, &path, 5.0).unwrap();
        assert!(target.distance(Point2::new(d, d)) < 1e-12);
        let raw = 2.0 * d / 25.0;
        assert!((raw - 0.28284271247461906).abs() < 1e-12);
        let s = actor(Point2::ORIGIN, 0.0, 10.0, 0.0);
        assert!((pure_pursuit_curvature(&s, &path, 5.0).unwrap() - 0.2).abs() < 1e-15);
        let large = ActorState {
            is_large: true,
            ..s
        };
        assert!((pure_pursuit_curvature(&large, &path, 5.0).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn straight_step_advance() {
        let path = Polyline::new(vec![Point2::ORIGIN, Point2::new(50.0, 0.0)]).unwrap();
        let s = actor(Point2::new(1.0, 0.0), 0.0, 10.0, 0.0);
        let sp = SpeedProfile::from_state(&s, p());
        let next = pure_pursuit_step(&s, &path, 5.0, 0.05, &sp, 0.0);
        assert!((next.position.x - 1.5).abs() < 1e-12);
        assert_eq!(next.position.y, 0.0);
        assert_eq!(next.heading, 0.0);
    }

    #[test]
    fn holds_at_path_end() {
        let path = Polyline::new(vec![Point2::ORIGIN, Point2::new(5.0, 0.0)]).unwrap();
        let s = actor(Point2::new(5.0, 0.0), 0.0, 10.0, 0.0);
        let sp = SpeedProfile::from_state(&s, p());
        let next = pure_pursuit_step(&s, &path, 5.0, 0.05, &sp, 0.0);
        assert_eq!(next.position, s.position);
    }

    #[test]
    fn rollout_straight_line() {
        let path = Polyline::new(vec![Point2::ORIGIN, Point2::new(200.0, 0.0)]).unwrap();
        let traj = rollout(
            &actor(Point2::ORIGIN, 0.0, 10.0, 0.0),
            &path,
            60,
            0.1,
            5.0,
            &p(),
        );
        assert_eq!(traj.len(), 61);
        for (k, s) in traj.states.iter().enumerate() {
            assert!((s.position.x - k as f64).abs() < 1e-9);
            assert!(s.position.y.abs() <= 1e-9);
        }
    }

    #[test]
    fn rollout_stationary() {
        let path = Polyline::new(vec![Point2::ORIGIN, Point2::new(200.0, 0.0)]).unwrap();
        let traj = rollout(
            &actor(Point2::ORIGIN, 0.0, 0.0, 0.0),
            &path,
            60,
            0.1,
            5.0,
            &p(),
        );
        assert!(traj.states.iter().all(|s| s.position == Point2::ORIGIN));
    }

    #[test]
    fn rollout_turn_respects_radius() {
        let mut pts = vec![Point2::ORIGIN];
        for i in 0..=30 {
            let a = FRAC_PI_2 * i as f64 / 30.0;
            pts.push(Point2::new(20.0 + 8.0 * a.sin(), 8.0 - 8.0 * a.cos()));
        }
        pts.push(Point2::new(28.0, 100.0));
        let path = Polyline::from_points_dedup(pts).unwrap();
        let traj = rollout(
            &actor(Point2::ORIGIN, 0.0, 10.0, 0.0),
            &path,
            60,
            0.1,
            5.0,
            &p(),
        );
        for w in traj.states.windows(2) {
            let dh = normalize_angle(w[1].heading - w[0].heading).abs();
            assert!(dh <= 10.0 * 0.1 / REGULAR_TURN_RADIUS + 1e-9);
        }
    }

    #[test]
    fn retime_examples() {
        let pts = [Point2::ORIGIN, Point2::new(100.0, 0.0)];
        let tt = retime(&pts, &actor(Point2::ORIGIN, 0.0, 10.0, 0.0), &p(), 0.1, 60).unwrap();
        for (k, s) in tt.states.iter().enumerate() {
            assert!((s.position.x - k as f64).abs() < 1e-9);
        }
        let still = retime(&pts, &actor(Point2::ORIGIN, 0.0, 0.0, 0.0), &p(), 0.1, 60).unwrap();
        assert!(still.states.iter().all(|s| s.position == Point2::ORIGIN));
        // extrapolation past the end
        let short = [Point2::ORIGIN, Point2::new(0.0, 2.0)];
        let tt = retime(
            &short,
            &actor(Point2::ORIGIN, 0.0, 10.0, 0.0),
            &p(),
            0.1,
            10,
        )
        .unwrap();
        assert!(tt.states[10].position.distance(Point2::new(0.0, 10.0)) < 1e-9);
        assert!(retime(
            &pts[..1],
            &actor(Point2::ORIGIN, 0.0, 1.0, 0.0),
            &p(),
            0.1,
            5
        )
        .is_err());
    }

    #[test]
    fn state_lookup() {
        let pts = [Point2::ORIGIN, Point2::new(100.0, 0.0)];
        let tt = retime(&pts, &actor(Point2::ORIGIN, 0.0, 10.0, 0.0), &p(), 0.1, 60).unwrap();
        assert!((tt.state_at(3.0).unwrap().position.x - 30.0).abs() < 1e-9);
        assert!(tt.state_at(7.0).is_none());
        assert!(tt.state_at(0.05).is_none());
    }
}
