use serde::{Deserialize, Serialize};

use super::{normalize_angle, Cov2, GeomError, Point2, MIN_SEGMENT_LENGTH};

/// An open polyline with cached cumulative arc lengths.
///
/// Invariants: at least two vertices, every segment longer than
/// [`MIN_SEGMENT_LENGTH`], all coordinates finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct Polyline {
    points: Vec<Point2>,
    cumulative: Vec<f64>,
}

/// Closest point on a polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub point: Point2,
    /// Arc-length coordinate of `point`.
    pub arc: f64,
    pub segment: usize,
    pub distance: f64,
}

/// Metric used to pick the closest goal point for a Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionMode {
    /// Euclidean foot point; the cheap approximation used by default.
    #[default]
    Euclidean,
    /// Minimizes the Mahalanobis distance segment by segment.
    Exact,
}

impl Polyline {
    pub fn new(points: Vec<Point2>) -> Result<Self, GeomError> {
        if points.len() < 2 {
            return Err(GeomError::TooFewVertices(points.len()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite("polyline vertex"));
        }
        let mut cumulative = Vec::with_capacity(points.len());
        cumulative.push(0.0);
        for (i, w) in points.windows(2).enumerate() {
            let len = w[0].distance(w[1]);
            if len <= MIN_SEGMENT_LENGTH {
                return Err(GeomError::DegenerateSegment(i));
            }
            cumulative.push(cumulative[i] + len);
        }
        Ok(Self { points, cumulative })
    }

    /// Like [`Polyline::new`] but silently drops vertices that coincide
    /// with their predecessor.
    pub fn from_points_dedup<I>(points: I) -> Result<Self, GeomError>
    where
        I: IntoIterator<Item = Point2>,
    {
        let mut kept: Vec<Point2> = Vec::new();
        for p in points {
            match kept.last() {
                Some(last) if last.distance(p) <= MIN_SEGMENT_LENGTH => {}
                _ => kept.push(p),
            }
        }
        Self::new(kept)
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn arc_lengths(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    pub fn first(&self) -> Point2 {
        self.points[0]
    }

    pub fn last(&self) -> Point2 {
        *self.points.last().expect("non-empty")
    }

    pub fn segment(&self, i: usize) -> (Point2, Point2) {
        (self.points[i], self.points[i + 1])
    }

    /// Segment containing `arc`; at an interior vertex this is the
    /// following segment. Out-of-range arcs clamp to the end segments.
    pub fn segment_index_at(&self, arc: f64) -> usize {
        let idx = self.cumulative.partition_point(|&c| c <= arc);
        idx.saturating_sub(1).min(self.segment_count() - 1)
    }

    pub fn point_at(&self, arc: f64) -> Point2 {
        let arc = arc.clamp(0.0, self.length());
        let i = self.segment_index_at(arc);
        let (a, b) = self.segment(i);
        let seg_len = self.cumulative[i + 1] - self.cumulative[i];
        a.lerp(b, ((arc - self.cumulative[i]) / seg_len).clamp(0.0, 1.0))
    }

    /// Direction of travel at `arc`, in (−π, π].
    pub fn heading_at(&self, arc: f64) -> f64 {
        let (a, b) = self.segment(self.segment_index_at(arc));
        normalize_angle((b - a).heading())
    }

    /// Unit direction of segment `i`.
    pub fn segment_direction(&self, i: usize) -> Point2 {
        let (a, b) = self.segment(i);
        (b - a) * (1.0 / (self.cumulative[i + 1] - self.cumulative[i]))
    }

    /// Left-hand unit normal at `arc`.
    pub fn normal_at(&self, arc: f64) -> Point2 {
        self.segment_direction(self.segment_index_at(arc)).perp()
    }

    /// Euclidean projection. Among equidistant candidates the one with the
    /// smallest arc length wins.
    pub fn project_point(&self, p: Point2) -> Projection {
        let mut best = Projection {
            point: self.points[0],
            arc: 0.0,
            segment: 0,
            distance: f64::INFINITY,
        };
        let mut best_d2 = f64::INFINITY;
        for i in 0..self.segment_count() {
            let (a, b) = self.segment(i);
            let d = b - a;
            let t = ((p - a).dot(d) / d.norm_squared()).clamp(0.0, 1.0);
            let foot = a + d * t;
            let d2 = foot.distance_squared(p);
            if d2 < best_d2 {
                best_d2 = d2;
                let seg_len = self.cumulative[i + 1] - self.cumulative[i];
                best = Projection {
                    point: foot,
                    arc: self.cumulative[i] + t * seg_len,
                    segment: i,
                    distance: 0.0,
                };
            }
        }
        best.distance = best_d2.sqrt();
        best
    }

    pub fn distance_to(&self, p: Point2) -> f64 {
        self.project_point(p).distance
    }

    /// Points at arc lengths `0, step, 2·step, …` followed by the terminal
    /// vertex (skipped when a sample already sits on it).
    pub fn sample_every(&self, step: f64) -> Result<Vec<Point2>, GeomError> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(GeomError::InvalidStep(step));
        }
        let total = self.length();
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let arc = k as f64 * step;
            if arc >= total - MIN_SEGMENT_LENGTH {
                break;
            }
            out.push(self.point_at(arc));
            k += 1;
        }
        out.push(self.last());
        Ok(out)
    }

    /// Shape-preserving resampling: uniform samples every `step` meters
    /// plus the original corner vertices, so total length and endpoints are
    /// unchanged.
    pub fn resample(&self, step: f64) -> Result<Polyline, GeomError> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(GeomError::InvalidStep(step));
        }
        let total = self.length();
        let mut arcs: Vec<f64> = Vec::new();
        let mut k = 0usize;
        loop {
            let arc = k as f64 * step;
            if arc >= total - MIN_SEGMENT_LENGTH {
                break;
            }
            arcs.push(arc);
            k += 1;
        }
        let mut out: Vec<Point2> = Vec::with_capacity(arcs.len() + self.len());
        let mut corner = 1;
        for &arc in &arcs {
            while corner < self.len() - 1 && self.cumulative[corner] < arc {
                out.push(self.points[corner]);
                corner += 1;
            }
            out.push(self.point_at(arc));
        }
        while corner < self.len() - 1 {
            out.push(self.points[corner]);
            corner += 1;
        }
        out.push(self.last());
        Polyline::from_points_dedup(out)
    }

    /// The part of the polyline beyond `arc`; `None` when less than
    /// [`MIN_SEGMENT_LENGTH`] remains.
    pub fn suffix_from(&self, arc: f64) -> Option<Polyline> {
        if arc >= self.length() - MIN_SEGMENT_LENGTH {
            return None;
        }
        let arc = arc.max(0.0);
        let start = self.point_at(arc);
        let first_after = self.cumulative.partition_point(|&c| c <= arc);
        let pts = std::iter::once(start).chain(self.points[first_after..].iter().copied());
        Polyline::from_points_dedup(pts).ok()
    }

    /// Applies `f` to every vertex.
    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Result<Polyline, GeomError> {
        Polyline::new(self.points.iter().map(|&p| f(p)).collect())
    }
}

impl TryFrom<Vec<Point2>> for Polyline {
    type Error = GeomError;
    fn try_from(points: Vec<Point2>) -> Result<Self, Self::Error> {
        Polyline::new(points)
    }
}

impl From<Polyline> for Vec<Point2> {
    fn from(line: Polyline) -> Self {
        line.points
    }
}

/// Closest goal point to a Gaussian centered at `mean` with covariance
/// `cov`. [`ProjectionMode::Euclidean`] ignores the covariance.
pub fn mahalanobis_project(
    line: &Polyline,
    mean: Point2,
    cov: &Cov2,
    mode: ProjectionMode,
) -> Result<Point2, GeomError> {
    match mode {
        ProjectionMode::Euclidean => {
            // still validate the covariance so both modes fail alike
            cov.precision()?;
            Ok(line.project_point(mean).point)
        }
        ProjectionMode::Exact => {
            let precision = cov.precision()?;
            let mut best = line.first();
            let mut best_q = f64::INFINITY;
            for i in 0..line.segment_count() {
                let (a, b) = line.segment(i);
                let offset = a - mean;
                let dir = b - a;
                let curvature = precision.quad_form(dir);
                let slope = precision.mul_vec(offset).dot(dir);
                let t = (-slope / curvature).clamp(0.0, 1.0);
                let candidate = a + dir * t;
                let q = precision.quad_form(candidate - mean);
                if q < best_q {
                    best_q = q;
                    best = candidate;
                }
            }
            Ok(best)
        }
    }
}
