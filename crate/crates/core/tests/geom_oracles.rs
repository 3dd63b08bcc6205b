mod common;

use common::{min_along, random_cov, random_goal, rng};
use lanestitch::eval::cross_track_error;
use lanestitch::geom::{mahalanobis_distance, mahalanobis_project, ProjectionMode};
use lanestitch::{OrientedBox, Point2, Polyline};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn box_segment_test_agrees_with_dense_sampling() {
    let mut rng = rng(1);
    let step = 1e-3;
    for _ in 0..2000 {
        let b = OrientedBox::new(
            Point2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
            rng.random_range(-3.2..3.2),
            rng.random_range(0.5..5.0),
            rng.random_range(0.5..3.0),
        )
        .unwrap();
        let p = Point2::new(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
        let q = Point2::new(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
        let n = (p.distance(q) / step).ceil() as usize;
        let samples: Vec<Point2> = (0..=n).map(|k| p.lerp(q, k as f64 / n as f64)).collect();
        let hit = samples.iter().any(|&s| b.contains(s));
        if hit {
            assert!(b.intersects_segment(p, q));
        } else if b.intersects_segment(p, q) {
            // only a grazing clip may fall between samples
            let grown = OrientedBox::new(
                b.center,
                b.heading,
                b.length + 2.0 * step,
                b.width + 2.0 * step,
            )
            .unwrap();
            assert!(samples.iter().any(|&s| grown.contains(s)));
        }
    }
}

#[test]
fn exact_mahalanobis_projection_matches_millimetre_sampling() {
    let mut rng = rng(2);
    for _ in 0..100 {
        let goal = random_goal(&mut rng);
        let cov = random_cov(&mut rng);
        let mean = Point2::new(rng.random_range(-5.0..20.0), rng.random_range(-10.0..10.0));
        let q = |p: Point2| mahalanobis_distance(p, mean, &cov).unwrap();
        let exact = mahalanobis_project(&goal, mean, &cov, ProjectionMode::Exact).unwrap();
        let (sampled, _) = min_along(&goal, 1e-3, q);
        assert!(q(exact) <= sampled + 1e-12, "{} > {}", q(exact), sampled);
        // 0.5 mm from the optimum in a metric no tighter than 1/sqrt(0.05)
        assert!(sampled - q(exact) < 5e-4 / 0.05f64.sqrt());
    }
}

#[test]
fn euclidean_projection_matches_millimetre_sampling() {
    let mut rng = rng(3);
    for _ in 0..100 {
        let goal = random_goal(&mut rng);
        let p = Point2::new(rng.random_range(-5.0..20.0), rng.random_range(-10.0..10.0));
        let proj = goal.project_point(p);
        let (sampled, _) = min_along(&goal, 1e-3, |g| g.distance(p));
        assert!(proj.distance <= sampled + 1e-12);
        assert!(sampled - proj.distance < 5e-4);
        assert!(goal.point_at(proj.arc).distance(proj.point) < 1e-9);
    }
}

fn track(points: &[(f64, f64)]) -> Option<Polyline> {
    Polyline::from_points_dedup(points.iter().map(|&(x, y)| Point2::new(x, y))).ok()
}

proptest! {
    #[test]
    fn cross_track_error_is_rigid_invariant(
        pts in prop::collection::vec((-30.0..30.0f64, -30.0..30.0f64), 2..8),
        px in -40.0..40.0f64,
        py in -40.0..40.0f64,
        angle in -3.2..3.2f64,
        tx in -100.0..100.0f64,
        ty in -100.0..100.0f64,
    ) {
        let Some(line) = track(&pts) else { return Ok(()) };
        let shift = Point2::new(tx, ty);
        let moved = line.map_points(|p| p.rotate(angle) + shift).unwrap();
        let p = Point2::new(px, py);
        let a = cross_track_error(p, &line);
        let b = cross_track_error(p.rotate(angle) + shift, &moved);
        prop_assert!((a - b).abs() < 1e-8 * (1.0 + a), "{} vs {}", a, b);
    }

    #[test]
    fn cross_track_error_never_exceeds_distance(
        pts in prop::collection::vec((-30.0..30.0f64, -30.0..30.0f64), 2..8),
        px in -40.0..40.0f64,
        py in -40.0..40.0f64,
    ) {
        let Some(line) = track(&pts) else { return Ok(()) };
        let p = Point2::new(px, py);
        prop_assert!(cross_track_error(p, &line) <= line.distance_to(p) + 1e-9);
    }
}
