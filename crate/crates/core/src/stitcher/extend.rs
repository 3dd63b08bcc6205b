use super::{SolutionPath, StitchError, StitchParams, TargetLength};
use crate::geom::{Point2, Polyline, MIN_SEGMENT_LENGTH};

/// `⌊d/s⌋`, robust to `d/s` landing a hair below an integer.
pub fn decay_steps(shrink_distance: f64, sample_step: f64) -> usize {
    (shrink_distance / sample_step + 1e-9).floor() as usize
}

/// Offset multipliers `1 − k/K` for `k = 1..=K`; the last one is exactly 0.
pub fn decay_factors(steps: usize) -> Vec<f64> {
    (1..=steps)
        .map(|k| (steps - k) as f64 / steps as f64)
        .collect()
}

/// Extends a path prefix beyond the horizon.
///
/// The signed lateral offset of the last prefix point from the goal is
/// shrunk linearly to zero over `shrink_distance` of goal arc length,
/// sampled every `sample_step`; the goal remainder (sampled at the same
/// step) is appended after that until the target length is reached.
pub fn extend_path(
    prefix: &[Point2],
    breakaway: usize,
    goal: &Polyline,
    params: &StitchParams,
) -> Result<SolutionPath, StitchError> {
    params.validate()?;
    if prefix.is_empty() {
        return Err(StitchError::InvalidTrajectory("empty path prefix".into()));
    }
    let terminal = *prefix.last().expect("non-empty");
    let mut points = prefix.to_vec();
    let done = |points: Vec<Point2>| SolutionPath {
        points,
        prefix_length: prefix.len(),
        breakaway,
    };

    let anchor = goal.project_point(terminal);
    let remaining = goal.length() - anchor.arc;
    if remaining <= MIN_SEGMENT_LENGTH {
        return Ok(done(points));
    }
    let lateral = (terminal - anchor.point).dot(goal.normal_at(anchor.arc));
    let step = params.sample_step;

    let mut budget = Budget::new(params.target_length, &points);
    let offset_point =
        |arc: f64, factor: f64| goal.point_at(arc) + goal.normal_at(arc) * (lateral * factor);

    // decay section
    let decay_len = params.shrink_distance.min(remaining);
    let steps = decay_steps(decay_len, step);
    for k in 1..=steps {
        let arc = anchor.arc + k as f64 * step;
        let factor = if decay_len < params.shrink_distance {
            (1.0 - k as f64 * step / decay_len).max(0.0)
        } else {
            (steps - k) as f64 / steps as f64
        };
        if !budget.push(&mut points, offset_point(arc, factor), false) {
            return Ok(done(points));
        }
    }
    let mut arc = anchor.arc + steps as f64 * step;
    if decay_len < params.shrink_distance {
        // goal ran out inside the decay window
        if goal.length() - arc > MIN_SEGMENT_LENGTH {
            budget.push(&mut points, goal.last(), false);
        }
        return Ok(done(points));
    }

    if arc >= goal.length() - MIN_SEGMENT_LENGTH {
        return Ok(done(points));
    }

    // goal remainder
    loop {
        arc += step;
        let p = if arc >= goal.length() - MIN_SEGMENT_LENGTH {
            goal.last()
        } else {
            goal.point_at(arc)
        };
        if !budget.push(&mut points, p, true) || p == goal.last() {
            break;
        }
    }
    Ok(done(points))
}

/// Tracks the target-length stopping rule while points are appended.
/// Decay points ignore the path-length limit; goal-remainder points don't.
struct Budget {
    target: TargetLength,
    length: f64,
}

impl Budget {
    fn new(target: TargetLength, points: &[Point2]) -> Self {
        let length = points.windows(2).map(|w| w[0].distance(w[1])).sum();
        Self { target, length }
    }

    /// Appends `p` if the target allows it; returns whether more points may
    /// follow.
    fn push(&mut self, points: &mut Vec<Point2>, p: Point2, length_limited: bool) -> bool {
        let last = *points.last().expect("non-empty");
        let next = self.length + last.distance(p);
        match self.target {
            TargetLength::Points(n) => {
                if points.len() >= n {
                    return false;
                }
                points.push(p);
                self.length = next;
                points.len() < n
            }
            TargetLength::PathLength(max) => {
                if length_limited && next > max {
                    return false;
                }
                points.push(p);
                self.length = next;
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_axis(len: f64) -> Polyline {
        Polyline::new(vec![Point2::new(-20.0, 0.0), Point2::new(len, 0.0)]).unwrap()
    }

    #[test]
    fn factors() {
        assert_eq!(decay_steps(10.0, 1.0), 10);
        assert_eq!(decay_steps(0.3, 0.1), 3);
        let f = decay_factors(10);
        assert_eq!(f.len(), 10);
        assert!((f[0] - 0.9).abs() < 1e-15);
        assert_eq!(f[9], 0.0);
        assert!(f.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn zero_offset_extension_follows_goal() {
        let goal = x_axis(30.0);
        let path = extend_path(&[Point2::ORIGIN], 1, &goal, &StitchParams::default()).unwrap();
        for (k, p) in path.extension().iter().enumerate() {
            assert!(p.y.abs() < 1e-12);
            assert!((p.x - (k + 1) as f64).abs() < 1e-9);
        }
        assert_eq!(*path.points.last().unwrap(), goal.last());
    }

    #[test]
    fn lateral_offset_decays_linearly() {
        let goal = x_axis(60.0);
        let path =
            extend_path(&[Point2::new(0.0, 2.0)], 1, &goal, &StitchParams::default()).unwrap();
        let ext = path.extension();
        for k in 1..=10 {
            let p = ext[k - 1];
            assert!((p.x - k as f64).abs() < 1e-12);
            assert!(
                (p.y - 2.0 * (1.0 - k as f64 / 10.0)).abs() < 1e-12,
                "{k}: {p:?}"
            );
        }
        assert_eq!(ext[9].y, 0.0);
        assert!(ext[10..].iter().all(|p| p.y == 0.0));
    }

    #[test]
    fn terminal_point_past_goal_end() {
        let goal = x_axis(10.0);
        let prefix = [Point2::new(5.0, 1.0), Point2::new(14.0, 1.0)];
        let path = extend_path(&prefix, 2, &goal, &StitchParams::default()).unwrap();
        assert_eq!(path.points, prefix.to_vec());
    }

    #[test]
    fn short_goal_decays_over_what_is_left() {
        let goal = x_axis(5.0);
        let path =
            extend_path(&[Point2::new(0.0, 2.0)], 1, &goal, &StitchParams::default()).unwrap();
        let ext = path.extension();
        assert_eq!(ext.len(), 5);
        assert!((ext[0].y - 1.6).abs() < 1e-12);
        assert!(ext[4].y.abs() < 1e-12);
        assert_eq!(*ext.last().unwrap(), goal.last());
    }

    #[test]
    fn point_budget_truncates() {
        let goal = x_axis(500.0);
        let params = StitchParams {
            target_length: TargetLength::Points(25),
            ..StitchParams::default()
        };
        let prefix: Vec<Point2> = (0..20).map(|k| Point2::new(k as f64 * 0.5, 0.3)).collect();
        let path = extend_path(&prefix, 20, &goal, &params).unwrap();
        assert_eq!(path.points.len(), 25);
        assert_eq!(path.prefix(), &prefix[..]);
    }
}
