//! Static SVG scenes: lane goal, predicted means with 1σ ellipses, the
//! ground truth and method outputs.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::geom::{Cov2, Point2};
use crate::tracker::TimedTrajectory;

use super::methods::PreparedScenario;

const GOAL: &str = "#1f5fbf";
const OTHER_LANE: &str = "#9bb7e0";
const PREDICTION: &str = "#f28e1c";
const GT: &str = "#2ca02c";
const US: &str = "#000000";
const PP: &str = "#8e3fb5";

/// Stroke color of a method's output.
pub fn method_color(method: &str) -> &'static str {
    match method {
        "us" => US,
        "pp" => PP,
        "raw" => "#c46a00",
        "ballistic" => "#8c564b",
        _ => "#7f7f7f",
    }
}

/// Every how many waypoints an uncertainty ellipse is drawn.
const ELLIPSE_EVERY: usize = 10;
/// Pixels per meter.
const SCALE: f64 = 8.0;
/// Margin around the drawn content (m).
const MARGIN: f64 = 12.0;

struct Frame {
    min: Point2,
    max: Point2,
}

impl Frame {
    fn around(points: impl IntoIterator<Item = Point2>) -> Self {
        let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = Point2::new(min.x.min(p.x), min.y.min(p.y));
            max = Point2::new(max.x.max(p.x), max.y.max(p.y));
        }
        let pad = Point2::new(MARGIN, MARGIN);
        Self {
            min: min - pad,
            max: max + pad,
        }
    }

    fn width(&self) -> f64 {
        (self.max.x - self.min.x) * SCALE
    }

    fn height(&self) -> f64 {
        (self.max.y - self.min.y) * SCALE
    }

    /// World to canvas; the y axis points up in the world.
    fn map(&self, p: Point2) -> (f64, f64) {
        ((p.x - self.min.x) * SCALE, (self.max.y - p.y) * SCALE)
    }
}

fn polyline(
    out: &mut String,
    frame: &Frame,
    pts: &[Point2],
    stroke: &str,
    width: f64,
    extra: &str,
) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"  <polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"{extra}/>"#,
        coords.join(" ")
    );
}

fn ellipse(out: &mut String, frame: &Frame, center: Point2, cov: &Cov2) {
    let (lo, hi) = cov.eigenvalues();
    let (cx, cy) = frame.map(center);
    // canvas y is flipped, so rotations change sign
    let angle = -cov.major_axis_heading().to_degrees();
    let _ = writeln!(
        out,
        r#"  <ellipse cx="{cx:.3}" cy="{cy:.3}" rx="{:.3}" ry="{:.3}" transform="rotate({angle:.3} {cx:.3} {cy:.3})" fill="{PREDICTION}" fill-opacity="0.15" stroke="{PREDICTION}" stroke-width="1"/>"#,
        hi.max(0.0).sqrt() * SCALE,
        lo.max(0.0).sqrt() * SCALE,
    );
}

/// The scene as an SVG 1.1 document. Output bytes depend only on the
/// inputs.
pub fn render_scene(
    prepared: &PreparedScenario<'_>,
    outputs: &BTreeMap<String, TimedTrajectory>,
) -> String {
    let rec = prepared.record;
    let gt = rec.gt_track.positions();
    let means = prepared.mode.means();
    let frame = Frame::around(
        gt.iter()
            .chain(&means)
            .copied()
            .chain(outputs.values().flat_map(|t| t.positions())),
    );
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg version="1.1" xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = frame.width(),
        h = frame.height()
    );
    let _ = writeln!(out, "  <title>{} ({})</title>", rec.id, rec.maneuver);
    let _ = writeln!(
        out,
        r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##
    );
    for (i, lane) in rec.goal_candidates.iter().enumerate() {
        if i != prepared.goal_index {
            polyline(
                &mut out,
                &frame,
                lane.points(),
                OTHER_LANE,
                3.0,
                r#" stroke-dasharray="8 6""#,
            );
        }
    }
    polyline(&mut out, &frame, prepared.goal.points(), GOAL, 3.0, "");
    for w in prepared
        .mode
        .waypoints
        .iter()
        .skip(ELLIPSE_EVERY - 1)
        .step_by(ELLIPSE_EVERY)
    {
        ellipse(&mut out, &frame, w.mean, &w.cov);
    }
    polyline(&mut out, &frame, &means, PREDICTION, 2.0, "");
    polyline(&mut out, &frame, &gt, GT, 2.5, "");
    for (name, traj) in outputs {
        polyline(
            &mut out,
            &frame,
            &traj.positions(),
            method_color(name),
            2.0,
            "",
        );
    }
    let (ax, ay) = frame.map(rec.actor0.position);
    let _ = writeln!(
        out,
        r##"  <circle cx="{ax:.3}" cy="{ay:.3}" r="4" fill="#000000"/>"##
    );

    let mut legend = vec![
        ("goal", GOAL),
        ("prediction", PREDICTION),
        ("ground truth", GT),
    ];
    legend.extend(outputs.keys().map(|k| (k.as_str(), method_color(k))));
    for (i, (label, color)) in legend.iter().enumerate() {
        let y = 18.0 + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"  <line x1="10" y1="{y:.1}" x2="30" y2="{y:.1}" stroke="{color}" stroke-width="3"/>"#
        );
        let _ = writeln!(
            out,
            r#"  <text x="36" y="{:.1}" font-family="sans-serif" font-size="12">{label}</text>"#,
            y + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}
