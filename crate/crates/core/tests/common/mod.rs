//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use lanestitch::{Cov2, GaussianWaypoint, Point2, Polyline};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A polyline wandering from near the origin with 2–6 segments of
/// 2–15 m, turning up to ±60° at each vertex.
pub fn random_goal(rng: &mut impl Rng) -> Polyline {
    let n = rng.random_range(2..=6);
    let mut p = Point2::new(rng.random_range(-8.0..-2.0), rng.random_range(-4.0..4.0));
    let mut heading: f64 = rng.random_range(-0.5..0.5);
    let mut pts = vec![p];
    for _ in 0..n {
        p += Point2::from_heading(heading) * rng.random_range(2.0..15.0);
        pts.push(p);
        heading += rng.random_range(-1.05..1.05);
    }
    Polyline::new(pts).unwrap()
}

/// Covariance with a random orientation, variances in `[0.05, 4]` m².
pub fn random_cov(rng: &mut impl Rng) -> Cov2 {
    let a: f64 = rng.random_range(0.05..4.0);
    let b: f64 = rng.random_range(0.05..4.0);
    Cov2::from_principal(rng.random_range(-3.2..3.2), a, b)
}

pub fn random_waypoint(rng: &mut impl Rng) -> GaussianWaypoint {
    let mean = Point2::new(rng.random_range(-3.0..12.0), rng.random_range(-5.0..5.0));
    GaussianWaypoint::new(mean, random_cov(rng))
}

/// Log-uniform weight in `[1e-2, 10]`.
pub fn random_lambda(rng: &mut impl Rng) -> f64 {
    10f64.powf(rng.random_range(-2.0..1.0))
}

/// Minimum of `f` over points spaced `step` apart along `line`, vertices
/// included.
pub fn min_along(line: &Polyline, step: f64, f: impl Fn(Point2) -> f64) -> (f64, Point2) {
    let mut best = (f64::INFINITY, line.first());
    for i in 0..line.segment_count() {
        let (a, b) = line.segment(i);
        let n = (a.distance(b) / step).ceil() as usize;
        for k in 0..=n {
            let p = a.lerp(b, k as f64 / n as f64);
            let v = f(p);
            if v < best.0 {
                best = (v, p);
            }
        }
    }
    best
}
