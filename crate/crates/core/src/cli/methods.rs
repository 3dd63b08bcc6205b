//! Runs every compared method on a scenario record and scores it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{ballistic, linear_stitch, pp_on_goal};
use crate::eval::{
    cross_track_error, evaluate_samples, select_goal_index, select_mode_index, EvalError,
    MetricsTable, HORIZONS_S,
};
use crate::geom::{Point2, Polyline};
use crate::scenarios::ScenarioRecord;
use crate::stitcher::{stitch, PredictedTrajectory, StitchError, StitchParams};
use crate::tracker::{
    retime, rollout_with, ActorState, TimedTrajectory, TrackerConfig, TrackerError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Ballistic,
    Pp,
    /// Best predicted mode, retimed.
    Raw,
    /// LS(n) with `n` whole seconds.
    Ls(u32),
    Us,
}

impl Method {
    pub const DEFAULT_SET: [Method; 7] = [
        Method::Ballistic,
        Method::Pp,
        Method::Raw,
        Method::Ls(1),
        Method::Ls(3),
        Method::Ls(5),
        Method::Us,
    ];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Ballistic => f.write_str("ballistic"),
            Method::Pp => f.write_str("pp"),
            Method::Raw => f.write_str("raw"),
            Method::Ls(n) => write!(f, "ls{n}"),
            Method::Us => f.write_str("us"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("unknown method `{0}` (expected ballistic, pp, raw, ls1..ls6 or us)")]
pub struct UnknownMethod(pub String);

impl FromStr for Method {
    type Err = UnknownMethod;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "ballistic" => Ok(Method::Ballistic),
            "pp" => Ok(Method::Pp),
            "raw" => Ok(Method::Raw),
            "us" => Ok(Method::Us),
            other => other
                .strip_prefix("ls")
                .and_then(|n| n.parse::<u32>().ok())
                .filter(|n| (1..=6).contains(n))
                .map(Method::Ls)
                .ok_or_else(|| UnknownMethod(s.to_string())),
        }
    }
}

/// Parses a comma-separated method list; blank entries are ignored.
pub fn parse_methods(list: &str) -> Result<Vec<Method>, UnknownMethod> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum MethodError {
    #[error("scenario {id}: {source}")]
    Stitch {
        id: String,
        #[source]
        source: StitchError,
    },
    #[error("scenario {id}: {source}")]
    Tracker {
        id: String,
        #[source]
        source: TrackerError,
    },
    #[error("scenario {id}: {source}")]
    Eval {
        id: String,
        #[source]
        source: EvalError,
    },
}

/// Settings shared by all methods.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MethodSettings {
    pub stitch: StitchParams,
    pub tracker: TrackerConfig,
}

/// The inputs every method sees after goal and mode selection.
#[derive(Debug, Clone)]
pub struct PreparedScenario<'a> {
    pub record: &'a ScenarioRecord,
    pub gt_track: Polyline,
    pub goal: &'a Polyline,
    pub goal_index: usize,
    pub mode: &'a PredictedTrajectory,
    pub mode_index: usize,
}

/// Selects the goal and the mode. `Ok(None)` when no goal is in range.
pub fn prepare(record: &ScenarioRecord) -> Result<Option<PreparedScenario<'_>>, MethodError> {
    let Some(gt_track) = record.gt_track.track() else {
        return Ok(None);
    };
    let goal_index = match select_goal_index(
        &record.goal_candidates,
        gt_track.points(),
        record.actor0.position,
    ) {
        Ok(i) => i,
        Err(EvalError::NoGoal { .. }) => return Ok(None),
        Err(source) => {
            return Err(MethodError::Eval {
                id: record.id.clone(),
                source,
            })
        }
    };
    let goal = &record.goal_candidates[goal_index];
    let mode_index =
        select_mode_index(&record.predicted, goal).map_err(|source| MethodError::Eval {
            id: record.id.clone(),
            source,
        })?;
    Ok(Some(PreparedScenario {
        record,
        gt_track,
        goal,
        goal_index,
        mode: &record.predicted[mode_index],
        mode_index,
    }))
}

/// The actor's position followed by `points`, without repeats.
fn from_actor(actor: &ActorState, points: &[Point2]) -> Vec<Point2> {
    std::iter::once(actor.position)
        .chain(points.iter().copied())
        .collect()
}

fn track(actor: &ActorState, points: &[Point2]) -> Option<Polyline> {
    Polyline::from_points_dedup(from_actor(actor, points)).ok()
}

/// Pure pursuit along a stitched spatial path.
fn roll(actor: &ActorState, points: &[Point2], tracker: &TrackerConfig) -> TimedTrajectory {
    match track(actor, points) {
        Some(path) => rollout_with(actor, &path, tracker),
        // a degenerate path: the actor has nowhere to go
        None => TimedTrajectory {
            dt: tracker.output_dt,
            states: vec![*actor; tracker.horizon_steps + 1],
        },
    }
}

/// A predicted mode as a timed trajectory.
pub fn retime_mode(
    actor: &ActorState,
    mode: &PredictedTrajectory,
    tracker: &TrackerConfig,
) -> Result<TimedTrajectory, TrackerError> {
    retime(
        &from_actor(actor, &mode.means()),
        actor,
        &tracker.profile,
        tracker.output_dt,
        tracker.horizon_steps,
    )
}

/// Mean cross-track error of a timed trajectory over all horizons.
fn mean_horizon_error(traj: &TimedTrajectory, gt_track: &Polyline) -> f64 {
    let errs: Vec<f64> = HORIZONS_S
        .iter()
        .filter_map(|&h| traj.state_at(h as f64))
        .map(|s| cross_track_error(s.position, gt_track))
        .collect();
    if errs.is_empty() {
        f64::INFINITY
    } else {
        errs.iter().sum::<f64>() / errs.len() as f64
    }
}

/// Output of one method on one prepared scenario.
pub fn run_method(
    method: Method,
    prepared: &PreparedScenario<'_>,
    settings: &MethodSettings,
) -> Result<TimedTrajectory, MethodError> {
    let rec = prepared.record;
    let actor = &rec.actor0;
    let stitch_err = |source| MethodError::Stitch {
        id: rec.id.clone(),
        source,
    };
    let tracker_err = |source| MethodError::Tracker {
        id: rec.id.clone(),
        source,
    };
    let tracker = &settings.tracker;
    Ok(match method {
        Method::Ballistic => ballistic(actor, tracker.horizon_steps, tracker.output_dt),
        Method::Pp => pp_on_goal(actor, prepared.goal, tracker),
        Method::Raw => {
            // best of modes against the ground truth
            let mut best: Option<(f64, TimedTrajectory)> = None;
            for mode in &rec.predicted {
                let traj = retime_mode(actor, mode, tracker).map_err(tracker_err)?;
                let err = mean_horizon_error(&traj, &prepared.gt_track);
                if best.as_ref().is_none_or(|(b, _)| err < *b) {
                    best = Some((err, traj));
                }
            }
            best.expect("at least one mode").1
        }
        Method::Ls(n) => {
            let path = linear_stitch(prepared.mode, prepared.goal, n as f64, &settings.stitch)
                .map_err(stitch_err)?;
            roll(actor, &path.points, tracker)
        }
        Method::Us => {
            let path = stitch(prepared.mode, prepared.goal, actor.dims(), &settings.stitch)
                .map_err(stitch_err)?;
            roll(actor, &path.points, tracker)
        }
    })
}

/// Outputs of several methods, keyed by method name.
pub fn run_methods(
    methods: &[Method],
    prepared: &PreparedScenario<'_>,
    settings: &MethodSettings,
) -> Result<BTreeMap<String, TimedTrajectory>, MethodError> {
    methods
        .iter()
        .map(|&m| Ok((m.to_string(), run_method(m, prepared, settings)?)))
        .collect()
}

/// One per-scenario error measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetailRow {
    pub scenario_id: String,
    pub maneuver: String,
    pub method: String,
    pub horizon_s: u32,
    pub cte_m: f64,
}

/// Scores of one scenario; `None` when it was skipped for lack of a goal.
pub fn score_record(
    record: &ScenarioRecord,
    methods: &[Method],
    settings: &MethodSettings,
) -> Result<Option<Vec<DetailRow>>, MethodError> {
    let Some(prepared) = prepare(record)? else {
        return Ok(None);
    };
    let outputs = run_methods(methods, &prepared, settings)?;
    let samples =
        evaluate_samples(&outputs, &record.gt_track).map_err(|source| MethodError::Eval {
            id: record.id.clone(),
            source,
        })?;
    Ok(Some(
        samples
            .into_iter()
            .map(|s| DetailRow {
                scenario_id: record.id.clone(),
                maneuver: record.maneuver.label().to_string(),
                method: s.method,
                horizon_s: s.horizon_s,
                cte_m: s.cte,
            })
            .collect(),
    ))
}

/// Scores of a record set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteResult {
    pub table: MetricsTable,
    /// Detail rows in record order.
    pub detail: Vec<DetailRow>,
    pub skipped: Vec<String>,
}

impl SuiteResult {
    /// Per-scenario error of `method` at `horizon_s`, in record order.
    pub fn errors(&self, method: &str, horizon_s: u32) -> Vec<(&str, f64)> {
        self.detail
            .iter()
            .filter(|r| r.method == method && r.horizon_s == horizon_s)
            .map(|r| (r.scenario_id.as_str(), r.cte_m))
            .collect()
    }

    pub fn write_detail_csv<W: std::io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in &self.detail {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Scores every record. With `parallel`, records are processed on the
/// rayon pool; results are merged in record order either way.
pub fn score_suite(
    records: &[ScenarioRecord],
    methods: &[Method],
    settings: &MethodSettings,
    parallel: bool,
) -> Result<SuiteResult, MethodError> {
    let per_record: Vec<Result<Option<Vec<DetailRow>>, MethodError>> = if parallel {
        records
            .par_iter()
            .map(|r| score_record(r, methods, settings))
            .collect()
    } else {
        records
            .iter()
            .map(|r| score_record(r, methods, settings))
            .collect()
    };
    let mut out = SuiteResult::default();
    for (record, rows) in records.iter().zip(per_record) {
        match rows? {
            None => out.skipped.push(record.id.clone()),
            Some(rows) => {
                for r in &rows {
                    out.table.add(&r.method, r.horizon_s, &r.maneuver, r.cte_m);
                }
                out.detail.extend(rows);
            }
        }
    }
    Ok(out)
}
