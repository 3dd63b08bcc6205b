//! Synthetic scenarios: lane geometries, corner-cutting ground truth and a
//! simulated short-term predictor with Gaussian uncertainty.
//!
//! Every record is produced from its own seed, so any record can be
//! regenerated in isolation and a record set is reproducible from the
//! generator seed.

mod geometry;
mod io;
mod predict;

pub use geometry::{
    curvature_at, gen_goal, goal_candidates, lane, turn_angle, warp_inward, CornerCut, LEAD_IN,
    LEAD_OUT, MAX_CHORD,
};
pub use io::{
    load, load_from_str, save, save_to_string, ScenarioFile, ScenarioIoError, SCHEMA_VERSION,
};
pub use predict::{gen_prediction, Divergence, PredictorModel};

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::Polyline;
use crate::stitcher::PredictedTrajectory;
use crate::tracker::{retime, ActorState, SpeedProfile, SpeedProfileParams, TimedTrajectory};

/// Prediction horizon `H` of the simulated predictor.
pub const HORIZON: usize = 60;
/// Prediction cadence (s).
pub const DT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Maneuver {
    Straight,
    LeftTurn,
    RightTurn,
    IntersectionStraightVsTurn,
    UTurn,
}

impl Maneuver {
    pub const ALL: [Maneuver; 5] = [
        Maneuver::Straight,
        Maneuver::LeftTurn,
        Maneuver::RightTurn,
        Maneuver::IntersectionStraightVsTurn,
        Maneuver::UTurn,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Maneuver::Straight => "straight",
            Maneuver::LeftTurn => "left_turn",
            Maneuver::RightTurn => "right_turn",
            Maneuver::IntersectionStraightVsTurn => "intersection_straight_vs_turn",
            Maneuver::UTurn => "u_turn",
        }
    }

    pub fn is_turn(self) -> bool {
        self != Maneuver::Straight
    }
}

impl fmt::Display for Maneuver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One evaluation case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    pub id: String,
    pub maneuver: Maneuver,
    pub goal_candidates: Vec<Polyline>,
    pub gt_track: TimedTrajectory,
    /// Predicted modes; at least one.
    pub predicted: Vec<PredictedTrajectory>,
    pub actor0: ActorState,
    pub rng_seed: u64,
    /// Drift applied to the first predicted mode, if any.
    pub divergence: Option<Divergence>,
}

impl ScenarioRecord {
    /// Whether the predicted trajectory was made to leave its lane.
    pub fn is_divergent(&self) -> bool {
        self.divergence.is_some() || self.maneuver == Maneuver::IntersectionStraightVsTurn
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ManeuverCounts {
    pub straight: usize,
    pub left_turn: usize,
    pub right_turn: usize,
    pub intersection_straight_vs_turn: usize,
    pub u_turn: usize,
}

impl Default for ManeuverCounts {
    fn default() -> Self {
        Self {
            straight: 747,
            left_turn: 60,
            right_turn: 53,
            intersection_straight_vs_turn: 100,
            u_turn: 40,
        }
    }
}

impl ManeuverCounts {
    pub fn zero() -> Self {
        Self {
            straight: 0,
            left_turn: 0,
            right_turn: 0,
            intersection_straight_vs_turn: 0,
            u_turn: 0,
        }
    }

    pub fn get(&self, m: Maneuver) -> usize {
        match m {
            Maneuver::Straight => self.straight,
            Maneuver::LeftTurn => self.left_turn,
            Maneuver::RightTurn => self.right_turn,
            Maneuver::IntersectionStraightVsTurn => self.intersection_straight_vs_turn,
            Maneuver::UTurn => self.u_turn,
        }
    }

    pub fn total(&self) -> usize {
        Maneuver::ALL.iter().map(|&m| self.get(m)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid generator config: {0}")]
pub struct ConfigError(pub String);

/// Generator settings. Ranges are `[low, high]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    pub counts: ManeuverCounts,
    /// Arc radius of left/right turns and intersections (m).
    pub turn_radius: [f64; 2],
    pub u_turn_radius: [f64; 2],
    /// Actor position relative to the corner entry, along the lane (m).
    pub turn_entry_offset: [f64; 2],
    pub intersection_entry_offset: [f64; 2],
    pub speed: [f64; 2],
    pub acceleration: [f64; 2],
    /// Turning speed is capped at `sqrt(max_lateral_accel · radius)`.
    pub max_lateral_accel: f64,
    pub corner_cut_gain: f64,
    /// Corner cut per unit curvature before capping (m²).
    pub corner_cut_per_curvature: f64,
    pub corner_cut_cap: f64,
    pub corner_cut_smoothing: f64,
    /// Marginal standard deviation of the predicted-mean error (m).
    pub prediction_noise: f64,
    pub noise_correlation: f64,
    pub sigma0: f64,
    /// Variance growth of the predicted covariance (m²/s).
    pub covariance_growth: f64,
    pub covariance_aspect: [f64; 2],
    /// Fraction of records whose first mode drifts off the lane.
    pub divergence_fraction: f64,
    pub divergence_start: [f64; 2],
    /// Terminal gap between the drifting footprint and the lane, in
    /// lateral standard deviations.
    pub divergence_gap: [f64; 2],
    /// Lateral drift rate of the additional modes (m/s).
    pub extra_mode_drift: [f64; 2],
    pub modes: usize,
    pub large_vehicle_fraction: f64,
    /// Ground-truth length in steps of [`DT`].
    pub gt_steps: usize,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            counts: ManeuverCounts::default(),
            turn_radius: [12.0, 30.0],
            u_turn_radius: [6.0, 12.0],
            turn_entry_offset: [-12.0, 4.0],
            intersection_entry_offset: [-30.0, -12.0],
            speed: [4.0, 14.0],
            acceleration: [-1.0, 1.0],
            max_lateral_accel: 3.0,
            corner_cut_gain: 0.8,
            corner_cut_per_curvature: 30.0,
            corner_cut_cap: 1.5,
            corner_cut_smoothing: 5.0,
            prediction_noise: 0.2,
            noise_correlation: 0.9,
            sigma0: 0.3,
            covariance_growth: 0.3,
            covariance_aspect: [0.25, 1.0],
            divergence_fraction: 0.25,
            divergence_start: [1.0, 3.0],
            divergence_gap: [1.35, 1.65],
            extra_mode_drift: [1.0, 2.5],
            modes: 3,
            large_vehicle_fraction: 0.1,
            gt_steps: 80,
            seed: 7,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let ranges = [
            ("turn_radius", self.turn_radius),
            ("u_turn_radius", self.u_turn_radius),
            ("turn_entry_offset", self.turn_entry_offset),
            ("intersection_entry_offset", self.intersection_entry_offset),
            ("speed", self.speed),
            ("acceleration", self.acceleration),
            ("covariance_aspect", self.covariance_aspect),
            ("divergence_start", self.divergence_start),
            ("divergence_gap", self.divergence_gap),
            ("extra_mode_drift", self.extra_mode_drift),
        ];
        for (name, [lo, hi]) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(ConfigError(format!("{name} range [{lo}, {hi}] is empty")));
            }
        }
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(ConfigError(msg.to_string()))
            }
        };
        check(self.turn_radius[0] >= 5.0, "turn_radius must be >= 5 m")?;
        check(self.u_turn_radius[0] >= 5.0, "u_turn_radius must be >= 5 m")?;
        let lead = [self.turn_entry_offset, self.intersection_entry_offset];
        check(
            lead.iter().all(|r| r[0] > -LEAD_IN + 10.0 && r[1] <= 10.0),
            "entry offsets must lie in (-50, 10] m",
        )?;
        check(self.speed[0] >= 0.0, "speeds must be >= 0")?;
        check(
            self.max_lateral_accel > 0.0,
            "max_lateral_accel must be > 0",
        )?;
        check(
            (0.0..=1.0).contains(&self.corner_cut_gain),
            "corner_cut_gain must lie in [0, 1]",
        )?;
        check(
            self.corner_cut_per_curvature >= 0.0
                && self.corner_cut_cap >= 0.0
                && self.corner_cut_smoothing >= 0.0,
            "corner cut settings must be >= 0",
        )?;
        check(
            self.prediction_noise >= 0.0,
            "prediction_noise must be >= 0",
        )?;
        check(
            (0.0..1.0).contains(&self.noise_correlation),
            "noise_correlation must lie in [0, 1)",
        )?;
        check(self.sigma0 > 0.0, "sigma0 must be > 0")?;
        check(
            self.covariance_growth >= 0.0,
            "covariance_growth must be >= 0",
        )?;
        check(
            self.covariance_aspect[0] > 0.0 && self.covariance_aspect[1] <= 1.0,
            "covariance_aspect must lie in (0, 1]",
        )?;
        check(
            (0.0..=1.0).contains(&self.divergence_fraction),
            "divergence_fraction must lie in [0, 1]",
        )?;
        check(
            self.divergence_start[0] >= 0.0 && self.divergence_start[1] < HORIZON as f64 * DT,
            "divergence_start must lie in [0, 6) s",
        )?;
        check(self.modes >= 1, "modes must be >= 1")?;
        check(
            (0.0..=1.0).contains(&self.large_vehicle_fraction),
            "large_vehicle_fraction must lie in [0, 1]",
        )?;
        check(self.gt_steps >= HORIZON, "gt_steps must be >= 60")?;
        Ok(())
    }

    pub fn corner_cut(&self) -> CornerCut {
        CornerCut {
            gain: self.corner_cut_gain,
            per_curvature: self.corner_cut_per_curvature,
            cap: self.corner_cut_cap,
            smoothing: self.corner_cut_smoothing,
        }
    }
}

/// Vehicle footprints (length, width) in meters.
pub const REGULAR_DIMS: (f64, f64) = (4.5, 1.9);
pub const LARGE_DIMS: (f64, f64) = (10.0, 2.5);

fn uniform<R: Rng + ?Sized>(rng: &mut R, [lo, hi]: [f64; 2]) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// Ground truth: the lane warped toward the inside of its bends, walked
/// from the actor's position at the actor's speed profile for `steps`.
pub fn gen_ground_truth(
    goal: &Polyline,
    cut: &CornerCut,
    state0: &ActorState,
    profile: &SpeedProfileParams,
    steps: usize,
) -> TimedTrajectory {
    let warped = warp_inward(goal, cut);
    let start = warped.project_point(state0.position).arc;
    let path = warped.suffix_from(start).unwrap_or(warped);
    retime(path.points(), state0, profile, DT, steps).expect("suffix has at least two points")
}

/// Drift rate that leaves the terminal footprint of the first mode `gap`
/// lateral standard deviations clear of the reference path. The footprint
/// yaw caused by the drift itself is accounted for.
pub fn calibrated_drift_rate(
    model: &PredictorModel,
    dims: (f64, f64),
    terminal_speed: f64,
    start_s: f64,
    gap: f64,
) -> f64 {
    let span = model.horizon as f64 * model.dt - start_s;
    let sigma = model.lateral_sigma(model.horizon);
    let mut rate = (0.5 * dims.1 + gap * sigma) / span;
    for _ in 0..20 {
        let yaw = rate.atan2(terminal_speed.max(1e-3));
        let clearance = 0.5 * dims.1 * yaw.cos() + 0.5 * dims.0 * yaw.sin();
        rate = (clearance + gap * sigma) / span;
    }
    rate
}

/// Builds record `id` of the given maneuver from its own seed.
pub fn generate_record(
    id: String,
    maneuver: Maneuver,
    config: &GeneratorConfig,
    seed: u64,
) -> ScenarioRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profile = SpeedProfileParams::default();

    let radius = uniform(
        &mut rng,
        if maneuver == Maneuver::UTurn {
            config.u_turn_radius
        } else {
            config.turn_radius
        },
    );
    let turn_sign = random_sign(&mut rng);
    let candidates = goal_candidates(maneuver, radius, turn_sign);
    let (gt_lane, predicted_lane) = match maneuver {
        Maneuver::IntersectionStraightVsTurn => (1, 0),
        _ => (0, 0),
    };

    let is_large = rng.random::<f64>() < config.large_vehicle_fraction;
    let (length, width) = if is_large { LARGE_DIMS } else { REGULAR_DIMS };
    let entry = match maneuver {
        Maneuver::Straight => uniform(&mut rng, [-40.0, 0.0]),
        Maneuver::IntersectionStraightVsTurn => uniform(&mut rng, config.intersection_entry_offset),
        _ => uniform(&mut rng, config.turn_entry_offset),
    };
    let mut speed = uniform(&mut rng, config.speed);
    let mut acceleration = uniform(&mut rng, config.acceleration);
    if maneuver.is_turn() {
        speed = speed.min((config.max_lateral_accel * radius).sqrt());
        acceleration = acceleration.min(0.0);
    }

    let cut = config.corner_cut();
    let goal = &candidates[gt_lane];
    let warped = warp_inward(goal, &cut);
    let on_lane = warped.project_point(goal.point_at(LEAD_IN + entry));
    let actor0 = ActorState {
        position: on_lane.point,
        heading: warped.heading_at(on_lane.arc),
        speed,
        acceleration,
        length,
        width,
        is_large,
    };
    let gt_track = gen_ground_truth(goal, &cut, &actor0, &profile, config.gt_steps);
    let reference = if predicted_lane == gt_lane {
        gt_track.clone()
    } else {
        let lane = &candidates[predicted_lane];
        let path = lane
            .suffix_from(lane.project_point(actor0.position).arc)
            .expect("actor is before the lane end");
        retime(path.points(), &actor0, &profile, DT, HORIZON).expect("lane suffix has two points")
    };

    let model = PredictorModel {
        horizon: HORIZON,
        dt: DT,
        noise: config.prediction_noise,
        correlation: config.noise_correlation,
        sigma0: config.sigma0,
        growth: config.covariance_growth,
        aspect: uniform(&mut rng, config.covariance_aspect),
    };
    let divergence = (rng.random::<f64>() < config.divergence_fraction).then(|| {
        let start_s = uniform(&mut rng, config.divergence_start);
        let gap = uniform(&mut rng, config.divergence_gap);
        let terminal_speed =
            SpeedProfile::new(speed, acceleration, profile).speed(HORIZON as f64 * DT);
        let rate = calibrated_drift_rate(&model, (length, width), terminal_speed, start_s, gap);
        Divergence {
            start_s,
            rate: random_sign(&mut rng) * rate,
        }
    });
    let mut predicted = vec![gen_prediction(&reference, &model, divergence, &mut rng)];
    for _ in 1..config.modes {
        let drift = Divergence {
            start_s: uniform(&mut rng, [0.5, 2.0]),
            rate: random_sign(&mut rng) * uniform(&mut rng, config.extra_mode_drift),
        };
        predicted.push(gen_prediction(&reference, &model, Some(drift), &mut rng));
    }

    ScenarioRecord {
        id,
        maneuver,
        goal_candidates: candidates,
        gt_track,
        predicted,
        actor0,
        rng_seed: seed,
        divergence,
    }
}

/// The full record set: maneuvers in a seed-determined order, each record
/// with a seed drawn from the generator seed.
pub fn generate(config: &GeneratorConfig) -> Result<Vec<ScenarioRecord>, ConfigError> {
    config.validate()?;
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<Maneuver> = Maneuver::ALL
        .iter()
        .flat_map(|&m| std::iter::repeat_n(m, config.counts.get(m)))
        .collect();
    for i in (1..order.len()).rev() {
        let j = master.random_range(0..=i);
        order.swap(i, j);
    }
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let seed = master.random::<u64>();
            generate_record(format!("{}-{i:04}", m.label()), m, config, seed)
        })
        .collect())
}
