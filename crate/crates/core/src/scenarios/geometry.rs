use std::f64::consts::{FRAC_PI_2, PI};

use crate::geom::{normalize_angle, Point2, Polyline, MIN_SEGMENT_LENGTH};

use super::Maneuver;

/// Lane length behind the corner entry (m).
pub const LEAD_IN: f64 = 60.0;
/// Lane length after the corner exit (m).
pub const LEAD_OUT: f64 = 160.0;
/// Longest chord used when sampling arcs (m).
pub const MAX_CHORD: f64 = 0.5;

/// Signed turn of a lane: left turns are positive.
pub fn turn_angle(maneuver: Maneuver) -> f64 {
    match maneuver {
        Maneuver::Straight => 0.0,
        Maneuver::LeftTurn => FRAC_PI_2,
        Maneuver::RightTurn => -FRAC_PI_2,
        Maneuver::UTurn => PI,
        Maneuver::IntersectionStraightVsTurn => FRAC_PI_2,
    }
}

/// A lane running along +x from `(−LEAD_IN, 0)` to the corner entry at the
/// origin, then a circular arc of `radius` turning by `angle`, then a
/// straight exit of [`LEAD_OUT`]. With `angle = 0` it is one straight line.
pub fn lane(radius: f64, angle: f64) -> Polyline {
    let mut pts = vec![Point2::new(-LEAD_IN, 0.0), Point2::ORIGIN];
    let mut heading = 0.0;
    if angle != 0.0 {
        let side = angle.signum();
        let center = Point2::new(0.0, side * radius);
        let n = (radius * angle.abs() / MAX_CHORD).ceil() as usize;
        for k in 1..=n {
            let a = angle * k as f64 / n as f64;
            // start vector from the center points back at the origin
            pts.push(center + Point2::new(0.0, -side * radius).rotate(a));
        }
        heading = angle;
    }
    let exit = *pts.last().expect("non-empty");
    pts.push(exit + Point2::from_heading(heading) * LEAD_OUT);
    Polyline::new(pts).expect("lane geometry is valid")
}

/// Goal lane for a maneuver. Intersections return the turning branch.
pub fn gen_goal(maneuver: Maneuver, radius: f64) -> Polyline {
    lane(radius, turn_angle(maneuver))
}

/// Every lane the actor could follow: the intersection offers the straight
/// branch and the turning branch, other maneuvers a single lane.
pub fn goal_candidates(maneuver: Maneuver, radius: f64, turn_sign: f64) -> Vec<Polyline> {
    match maneuver {
        Maneuver::IntersectionStraightVsTurn => {
            vec![lane(radius, 0.0), lane(radius, turn_sign * FRAC_PI_2)]
        }
        m => vec![gen_goal(m, radius)],
    }
}

/// How ground truth cuts corners: the lateral shift toward the inside of a
/// bend is `gain · min(per_curvature · |κ|, cap)`, averaged over
/// `± smoothing` meters of arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerCut {
    pub gain: f64,
    pub per_curvature: f64,
    pub cap: f64,
    pub smoothing: f64,
}

/// Sampling step of the warped path (m).
const WARP_STEP: f64 = 0.5;
/// Half-width of the heading difference used to estimate curvature (m).
const CURVATURE_BASE: f64 = 1.0;

/// Signed curvature at `arc`, from the heading change over
/// `±CURVATURE_BASE` meters.
pub fn curvature_at(line: &Polyline, arc: f64) -> f64 {
    let lo = (arc - CURVATURE_BASE).max(0.0);
    let hi = (arc + CURVATURE_BASE).min(line.length());
    if hi - lo <= MIN_SEGMENT_LENGTH {
        return 0.0;
    }
    normalize_angle(line.heading_at(hi) - line.heading_at(lo)) / (hi - lo)
}

/// The lane shifted toward the inside of its bends.
pub fn warp_inward(goal: &Polyline, cut: &CornerCut) -> Polyline {
    if cut.gain == 0.0 {
        return goal.clone();
    }
    let n = (goal.length() / WARP_STEP).ceil() as usize;
    let arcs: Vec<f64> = (0..=n)
        .map(|k| (k as f64 * WARP_STEP).min(goal.length()))
        .collect();
    let raw: Vec<f64> = arcs
        .iter()
        .map(|&a| {
            let k = curvature_at(goal, a);
            k.signum() * cut.gain * (cut.per_curvature * k.abs()).min(cut.cap)
        })
        .collect();
    let mut lo = 0;
    let mut hi = 0;
    let mut sum = 0.0;
    let mut out = Vec::with_capacity(arcs.len());
    for i in 0..arcs.len() {
        while hi < arcs.len() && arcs[hi] <= arcs[i] + cut.smoothing {
            sum += raw[hi];
            hi += 1;
        }
        while arcs[lo] < arcs[i] - cut.smoothing {
            sum -= raw[lo];
            lo += 1;
        }
        let shift = sum / (hi - lo) as f64;
        let tangent = Point2::from_heading(goal.heading_at(arcs[i]));
        out.push(goal.point_at(arcs[i]) + tangent.perp() * shift);
    }
    Polyline::from_points_dedup(out).expect("warped lane is valid")
}
