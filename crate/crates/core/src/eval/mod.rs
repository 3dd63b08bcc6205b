//! Error metrics and selection logic: cross-track error with endpoint
//! extension, goal-path and mode selection, per-horizon aggregation.

mod metrics;

pub use metrics::{CteSample, MetricKey, MetricRow, MetricsTable, ALL_MANEUVERS};

use std::collections::BTreeMap;

use crate::geom::{Point2, Polyline, MIN_SEGMENT_LENGTH};
use crate::stitcher::PredictedTrajectory;
use crate::tracker::TimedTrajectory;

/// Evaluation horizons in seconds.
pub const HORIZONS_S: [u32; 6] = [1, 2, 3, 4, 5, 6];

/// Candidate goals must pass within this distance of the actor (m).
pub const GOAL_SEARCH_RADIUS: f64 = 100.0;

/// Resampling step of the goal used for DTW mode selection (m).
pub const MODE_SELECTION_STEP: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("no goal candidate within {radius} m of the actor")]
    NoGoal { radius: f64 },
    #[error("nothing to select from")]
    Empty,
    #[error("trajectory cadence {got} differs from ground truth {expected}")]
    CadenceMismatch { expected: f64, got: f64 },
}

/// Distance from `pred` to the ground-truth track. When the closest track
/// point is an endpoint, the track is extended as a ray along the endpoint
/// heading and the perpendicular distance to that ray is used instead.
pub fn cross_track_error(pred: Point2, gt_track: &Polyline) -> f64 {
    let proj = gt_track.project_point(pred);
    let n = gt_track.segment_count();
    let (anchor, dir) = if proj.arc <= MIN_SEGMENT_LENGTH {
        (gt_track.first(), gt_track.segment_direction(0))
    } else if proj.arc >= gt_track.length() - MIN_SEGMENT_LENGTH {
        (gt_track.last(), gt_track.segment_direction(n - 1))
    } else {
        return proj.distance;
    };
    let along = (pred - anchor).dot(dir);
    if along.abs() <= MIN_SEGMENT_LENGTH {
        return proj.distance;
    }
    (pred - anchor).cross(dir).abs()
}

/// Mean distance from the ground-truth points to `line`.
pub fn mean_distance(points: &[Point2], line: &Polyline) -> f64 {
    points.iter().map(|&p| line.distance_to(p)).sum::<f64>() / points.len() as f64
}

/// Index of the candidate within [`GOAL_SEARCH_RADIUS`] of the actor whose
/// mean distance to the ground-truth points is smallest (first on ties).
pub fn select_goal_index(
    candidates: &[Polyline],
    gt_points: &[Point2],
    actor_pos: Point2,
) -> Result<usize, EvalError> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in candidates.iter().enumerate() {
        if c.distance_to(actor_pos) > GOAL_SEARCH_RADIUS {
            continue;
        }
        let d = mean_distance(gt_points, c);
        if best.is_none_or(|(_, b)| d < b) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i).ok_or(EvalError::NoGoal {
        radius: GOAL_SEARCH_RADIUS,
    })
}

pub fn select_goal_path<'a>(
    candidates: &'a [Polyline],
    gt_track: &Polyline,
    actor_pos: Point2,
) -> Result<&'a Polyline, EvalError> {
    select_goal_index(candidates, gt_track.points(), actor_pos).map(|i| &candidates[i])
}

/// Classical dynamic time warping with Euclidean point cost.
pub fn dtw_distance(a: &[Point2], b: &[Point2]) -> f64 {
    assert!(
        !a.is_empty() && !b.is_empty(),
        "DTW needs nonempty sequences"
    );
    let mut prev = vec![f64::INFINITY; b.len() + 1];
    let mut cur = vec![f64::INFINITY; b.len() + 1];
    prev[0] = 0.0;
    for &p in a {
        cur[0] = f64::INFINITY;
        for (j, &q) in b.iter().enumerate() {
            let best = prev[j].min(prev[j + 1]).min(cur[j]);
            cur[j + 1] = p.distance(q) + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// The goal resampled at [`MODE_SELECTION_STEP`], restricted to the arc
/// window spanned by the modes (earliest first mean to latest last mean).
pub fn mode_reference(modes: &[PredictedTrajectory], goal: &Polyline) -> Vec<Point2> {
    let arcs = |pick: fn(&PredictedTrajectory) -> Point2| {
        modes.iter().map(move |m| goal.project_point(pick(m)).arc)
    };
    let start = arcs(|m| m.waypoints[0].mean).fold(f64::INFINITY, f64::min);
    let end = arcs(|m| m.waypoints[m.len() - 1].mean).fold(f64::NEG_INFINITY, f64::max);
    let (start, end) = if end > start {
        (start, end)
    } else {
        (0.0, goal.length())
    };
    let steps = ((end - start) / MODE_SELECTION_STEP).floor() as usize;
    let mut out: Vec<Point2> = (0..=steps)
        .map(|k| goal.point_at(start + k as f64 * MODE_SELECTION_STEP))
        .collect();
    if end - (start + steps as f64 * MODE_SELECTION_STEP) > MIN_SEGMENT_LENGTH {
        out.push(goal.point_at(end));
    }
    out
}

/// Index of the mode whose means are DTW-closest to the goal (first on
/// ties).
pub fn select_mode_index(
    modes: &[PredictedTrajectory],
    goal: &Polyline,
) -> Result<usize, EvalError> {
    if modes.is_empty() || modes.iter().any(|m| m.is_empty()) {
        return Err(EvalError::Empty);
    }
    let reference = mode_reference(modes, goal);
    let mut best = (0, f64::INFINITY);
    for (i, m) in modes.iter().enumerate() {
        let d = dtw_distance(&m.means(), &reference);
        if d < best.1 {
            best = (i, d);
        }
    }
    Ok(best.0)
}

pub fn select_mode<'a>(
    modes: &'a [PredictedTrajectory],
    goal: &Polyline,
) -> Result<&'a PredictedTrajectory, EvalError> {
    select_mode_index(modes, goal).map(|i| &modes[i])
}

/// Cross-track errors of every method at every horizon against the GT
/// track (the spatial polyline of GT positions). Samples beyond a
/// trajectory's end are skipped.
pub fn evaluate_samples(
    outputs: &BTreeMap<String, TimedTrajectory>,
    gt: &TimedTrajectory,
) -> Result<Vec<CteSample>, EvalError> {
    let Some(track) = gt.track() else {
        return Ok(Vec::new());
    };
    let mut samples = Vec::new();
    for (method, traj) in outputs {
        if (traj.dt - gt.dt).abs() > 1e-12 {
            return Err(EvalError::CadenceMismatch {
                expected: gt.dt,
                got: traj.dt,
            });
        }
        for h in HORIZONS_S {
            if let Some(state) = traj.state_at(h as f64) {
                samples.push(CteSample {
                    method: method.clone(),
                    horizon_s: h,
                    cte: cross_track_error(state.position, &track),
                });
            }
        }
    }
    Ok(samples)
}

/// Per-method, per-horizon rows tagged with `maneuver`.
pub fn evaluate(
    outputs: &BTreeMap<String, TimedTrajectory>,
    gt: &TimedTrajectory,
    maneuver: &str,
) -> Result<MetricsTable, EvalError> {
    let mut table = MetricsTable::default();
    for s in evaluate_samples(outputs, gt)? {
        table.add(&s.method, s.horizon_s, maneuver, s.cte);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Cov2;
    use crate::stitcher::GaussianWaypoint;
    use crate::tracker::ActorState;

    fn line(pts: &[(f64, f64)]) -> Polyline {
        Polyline::new(pts.iter().map(|&p| p.into()).collect()).unwrap()
    }

    #[test]
    fn cte_examples() {
        let track = line(&[(0.0, 0.0), (10.0, 0.0)]);
        assert_eq!(cross_track_error(Point2::new(3.0, 0.0), &track), 0.0);
        assert_eq!(cross_track_error(Point2::new(0.0, 1.0), &track), 1.0);
        assert!((cross_track_error(Point2::new(12.0, 1.0), &track) - 1.0).abs() < 1e-12);
        assert!((cross_track_error(Point2::new(-3.0, -2.0), &track) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn goal_selection() {
        let gt: Vec<Point2> = (0..50).map(|k| Point2::new(k as f64, 0.0)).collect();
        let cands = vec![
            line(&[(-10.0, 3.7), (100.0, 3.7)]),
            line(&[(-10.0, 0.0), (100.0, 0.0)]),
        ];
        assert_eq!(select_goal_index(&cands, &gt, Point2::ORIGIN).unwrap(), 1);
        let far = vec![line(&[(500.0, 0.0), (600.0, 0.0)])];
        assert!(matches!(
            select_goal_index(&far, &gt, Point2::ORIGIN),
            Err(EvalError::NoGoal { .. })
        ));
        // ties go to the first candidate
        let twins = vec![
            line(&[(0.0, 1.0), (60.0, 1.0)]),
            line(&[(0.0, -1.0), (60.0, -1.0)]),
        ];
        assert_eq!(select_goal_index(&twins, &gt, Point2::ORIGIN).unwrap(), 0);
    }

    #[test]
    fn dtw_examples() {
        let a = [Point2::ORIGIN, Point2::new(1.0, 0.0)];
        assert_eq!(dtw_distance(&a, &a), 0.0);
        assert_eq!(
            dtw_distance(&[Point2::ORIGIN], &[Point2::new(1.0, 0.0)]),
            1.0
        );
        let b = [Point2::ORIGIN, Point2::new(0.5, 0.0), Point2::new(1.0, 0.0)];
        assert!((dtw_distance(&a, &b) - 0.5).abs() < 1e-15);
        assert_eq!(dtw_distance(&a, &b), dtw_distance(&b, &a));
    }

    fn mode(offset: f64) -> PredictedTrajectory {
        let wps = (1..=60)
            .map(|k| GaussianWaypoint::new(Point2::new(k as f64, offset), Cov2::IDENTITY))
            .collect();
        PredictedTrajectory::new(0.1, wps).unwrap()
    }

    #[test]
    fn mode_selection() {
        let goal = line(&[(-20.0, 0.0), (200.0, 0.0)]);
        assert_eq!(select_mode_index(&[mode(3.0)], &goal).unwrap(), 0);
        assert_eq!(
            select_mode_index(&[mode(5.0), mode(0.0)], &goal).unwrap(),
            1
        );
        assert_eq!(
            select_mode_index(&[mode(-2.0), mode(1.0), mode(4.0)], &goal).unwrap(),
            1
        );
        assert!(select_mode_index(&[], &goal).is_err());
    }

    fn straight(offset: f64) -> TimedTrajectory {
        let states = (0..=60)
            .map(|k| ActorState {
                position: Point2::new(k as f64, offset),
                heading: 0.0,
                speed: 10.0,
                acceleration: 0.0,
                length: 4.5,
                width: 1.9,
                is_large: false,
            })
            .collect();
        TimedTrajectory { dt: 0.1, states }
    }

    #[test]
    fn evaluate_offsets() {
        let gt = straight(0.0);
        let outputs = BTreeMap::from([
            ("same".to_string(), gt.clone()),
            ("off".to_string(), straight(1.0)),
        ]);
        let table = evaluate(&outputs, &gt, "straight").unwrap();
        for h in HORIZONS_S {
            assert_eq!(table.mean("same", h, "straight"), Some(0.0));
            assert!((table.mean("off", h, "straight").unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn short_outputs_omit_rows() {
        let gt = straight(0.0);
        let mut short = straight(0.0);
        short.states.truncate(31);
        let outputs = BTreeMap::from([("short".to_string(), short)]);
        let table = evaluate(&outputs, &gt, "straight").unwrap();
        assert_eq!(table.count("short", 3, "straight"), 1);
        assert_eq!(table.count("short", 4, "straight"), 0);
    }
}
