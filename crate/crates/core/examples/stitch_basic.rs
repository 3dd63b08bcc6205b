//! Stitch a predicted trajectory that drifts away from a straight lane.
//!
//! Run with `cargo run --example stitch_basic`.

use std::error::Error;

use lanestitch::{
    stitch, Cov2, GaussianWaypoint, Point2, Polyline, PredictedTrajectory, StitchParams,
};

fn main() -> Result<(), Box<dyn Error>> {
    let goal = Polyline::new(vec![Point2::new(-10.0, 0.0), Point2::new(200.0, 0.0)])?;

    // 6 s at 10 Hz, 10 m/s, veering left after 2 s
    let waypoints = (1..=60)
        .map(|k| {
            let t = k as f64 * 0.1;
            let drift = 0.8 * (t - 2.0).max(0.0);
            let var = 0.09 + 0.3 * t;
            GaussianWaypoint::new(Point2::new(10.0 * t, drift), Cov2::diag(var, 0.25 * var))
        })
        .collect();
    let traj = PredictedTrajectory::new(0.1, waypoints)?;

    let params = StitchParams::default();
    let path = stitch(&traj, &goal, (4.5, 1.9), &params)?;

    println!("breakaway horizon T = {} of {}", path.breakaway, traj.len());
    println!(
        "{} points, {} from the prefix",
        path.points.len(),
        path.prefix_length
    );
    println!("{:>5} {:>8} {:>8}", "t", "mean y", "path y");
    for t in (10..=60).step_by(10) {
        println!(
            "{:>5.1} {:>8.3} {:>8.3}",
            t as f64 * 0.1,
            traj.waypoints[t - 1].mean.y,
            path.points[t - 1].y
        );
    }
    let end = *path.points.last().unwrap();
    println!("path ends at ({:.1}, {:.3})", end.x, end.y);
    Ok(())
}
