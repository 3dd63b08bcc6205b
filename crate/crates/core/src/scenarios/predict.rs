use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::geom::{Cov2, Point2};
use crate::stitcher::{GaussianWaypoint, PredictedTrajectory};
use crate::tracker::TimedTrajectory;

/// A lateral drift of the predicted means away from the reference motion,
/// growing linearly from `start_s` at `rate` m/s (signed; positive drifts
/// to the left of the motion direction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    pub start_s: f64,
    pub rate: f64,
}

impl Divergence {
    pub fn offset_at(&self, t: f64) -> f64 {
        self.rate * (t - self.start_s).max(0.0)
    }
}

/// Noise and uncertainty model of the simulated short-term predictor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorModel {
    pub horizon: usize,
    pub dt: f64,
    /// Marginal standard deviation of the smooth mean error (m).
    pub noise: f64,
    /// Step-to-step correlation of the mean error, in `[0, 1)`.
    pub correlation: f64,
    /// Standard deviation of the covariance at `t = 0` (m).
    pub sigma0: f64,
    /// Growth of the variance per second (m²/s).
    pub growth: f64,
    /// Across-to-along variance ratio `ρ`.
    pub aspect: f64,
}

impl PredictorModel {
    /// Variance scale `σ₀² + growth · t·Δt` at 1-based step `t`.
    pub fn variance(&self, t: usize) -> f64 {
        self.sigma0 * self.sigma0 + self.growth * t as f64 * self.dt
    }

    /// Standard deviation across the motion direction at step `t`.
    pub fn lateral_sigma(&self, t: usize) -> f64 {
        (self.variance(t) * self.aspect).sqrt()
    }
}

/// A simulated learned trajectory following `reference` (states at
/// `0, dt, 2dt, …`). Means are the reference positions plus a smooth
/// (first-order autoregressive) error whose amplitude ramps up as `t/H`,
/// plus the optional lateral drift. Covariances are aligned with the
/// reference heading and grow linearly in time.
pub fn gen_prediction<R: Rng + ?Sized>(
    reference: &TimedTrajectory,
    model: &PredictorModel,
    divergence: Option<Divergence>,
    rng: &mut R,
) -> PredictedTrajectory {
    assert!(
        reference.len() > model.horizon,
        "reference shorter than the horizon"
    );
    let phi = model.correlation;
    let innovation = (1.0 - phi * phi).sqrt();
    let draw = |rng: &mut R| rng.sample::<f64, _>(StandardNormal);
    let mut err = (draw(rng), draw(rng));
    let waypoints = (1..=model.horizon)
        .map(|t| {
            err = (
                phi * err.0 + innovation * draw(rng),
                phi * err.1 + innovation * draw(rng),
            );
            let state = &reference.states[t];
            let along = Point2::from_heading(state.heading);
            let left = along.perp();
            let envelope = model.noise * t as f64 / model.horizon as f64;
            let drift = divergence.map_or(0.0, |d| d.offset_at(t as f64 * model.dt));
            let mean =
                state.position + along * (envelope * err.0) + left * (envelope * err.1 + drift);
            let v = model.variance(t);
            let cov = Cov2::from_principal(state.heading, v, v * model.aspect);
            GaussianWaypoint::new(mean, cov)
        })
        .collect();
    PredictedTrajectory {
        dt: model.dt,
        waypoints,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracker::ActorState;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn reference() -> TimedTrajectory {
        let states = (0..=80)
            .map(|k| ActorState {
                position: Point2::new(k as f64, 0.0),
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

    fn model(noise: f64, growth: f64) -> PredictorModel {
        PredictorModel {
            horizon: 60,
            dt: 0.1,
            noise,
            correlation: 0.9,
            sigma0: 0.3,
            growth,
            aspect: 0.5,
        }
    }

    #[test]
    fn noiseless_prediction_is_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = gen_prediction(&reference(), &model(0.0, 0.0), None, &mut rng);
        assert_eq!(p.len(), 60);
        for (t, w) in p.waypoints.iter().enumerate() {
            assert_eq!(w.mean, Point2::new((t + 1) as f64, 0.0));
            assert!((w.cov.xx - 0.09).abs() < 1e-15);
            assert!((w.cov.yy - 0.045).abs() < 1e-15);
        }
    }

    #[test]
    fn covariance_growth() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = gen_prediction(&reference(), &model(0.0, 0.1), None, &mut rng);
        let tr = p.waypoints[59].cov.trace();
        assert!((tr - 2.0 * (0.09 + 0.6) * 0.75).abs() < 1e-12);
    }

    #[test]
    fn drift_ramp() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = Divergence {
            start_s: 2.0,
            rate: 0.5,
        };
        let p = gen_prediction(&reference(), &model(0.0, 0.1), Some(d), &mut rng);
        assert!((p.waypoints[59].mean.y - 2.0).abs() < 1e-12);
        assert_eq!(p.waypoints[19].mean.y, 0.0);
    }

    #[test]
    fn seeded_noise_repeats() {
        let a = gen_prediction(
            &reference(),
            &model(0.3, 0.1),
            None,
            &mut ChaCha8Rng::seed_from_u64(9),
        );
        let b = gen_prediction(
            &reference(),
            &model(0.3, 0.1),
            None,
            &mut ChaCha8Rng::seed_from_u64(9),
        );
        assert_eq!(a, b);
        assert!(a.waypoints.iter().all(|w| w.cov.eigenvalues().0 > 0.0));
    }
}
