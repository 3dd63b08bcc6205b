//! Compatibility scores and the breakaway horizon for a prediction that
//! leaves the lane, under both goal projections, plus the λ schedule that
//! follows from them. The covariance is tilted against the lane, so the
//! Mahalanobis-closest goal point differs from the Euclidean one.

use std::error::Error;

use lanestitch::geom::ProjectionMode;
use lanestitch::stitcher::{
    breakaway_from_scores, compatibility_scores, footprints, lambda_schedule,
};
use lanestitch::{Cov2, GaussianWaypoint, Point2, Polyline, PredictedTrajectory, StitchParams};

fn main() -> Result<(), Box<dyn Error>> {
    let goal = Polyline::new(vec![Point2::new(0.0, 0.0), Point2::new(100.0, 0.0)])?;
    let waypoints = (1..=30)
        .map(|k| {
            let t = k as f64 * 0.1;
            GaussianWaypoint::new(
                Point2::new(8.0 * t, 0.4 * t * t),
                Cov2::from_principal(0.6, 0.6 + 0.3 * t, 0.05 + 0.02 * t),
            )
        })
        .collect();
    let traj = PredictedTrajectory::new(0.1, waypoints)?;
    let boxes = footprints(&traj, &goal, 4.5, 1.9)?;

    let params = StitchParams::default();
    for mode in [ProjectionMode::Euclidean, ProjectionMode::Exact] {
        let scores = compatibility_scores(&traj, &goal, &boxes, mode)?;
        let t = breakaway_from_scores(&scores, params.alpha);
        println!("{mode:?}: T = {t}");
        for k in (9..30).step_by(4) {
            let wp = &traj.waypoints[k];
            let lambda = lambda_schedule(k + 1, t, wp, &goal, &params)?;
            println!(
                "  t={:>2}  score={:.3}  lambda={:.3}",
                k + 1,
                scores[k],
                lambda
            );
        }
    }
    Ok(())
}
