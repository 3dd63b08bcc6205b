use serde::{Deserialize, Serialize};

use super::{normalize_angle, GeomError, Point2, Polyline};

/// A rectangle with arbitrary orientation: the vehicle footprint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedBox {
    pub center: Point2,
    /// Direction of the length axis, in (−π, π].
    pub heading: f64,
    pub length: f64,
    pub width: f64,
}

impl OrientedBox {
    pub fn new(center: Point2, heading: f64, length: f64, width: f64) -> Result<Self, GeomError> {
        if !center.is_finite() || !heading.is_finite() {
            return Err(GeomError::NonFinite("oriented box"));
        }
        if !(length > 0.0 && width > 0.0) {
            return Err(GeomError::InvalidBox { length, width });
        }
        Ok(Self {
            center,
            heading: normalize_angle(heading),
            length,
            width,
        })
    }

    /// World point expressed in the box frame (x along the heading).
    pub fn to_local(&self, p: Point2) -> Point2 {
        (p - self.center).rotate(-self.heading)
    }

    pub fn to_world(&self, local: Point2) -> Point2 {
        local.rotate(self.heading) + self.center
    }

    /// Corners counter-clockwise starting front-left.
    pub fn corners(&self) -> [Point2; 4] {
        let hl = 0.5 * self.length;
        let hw = 0.5 * self.width;
        [
            self.to_world(Point2::new(hl, hw)),
            self.to_world(Point2::new(-hl, hw)),
            self.to_world(Point2::new(-hl, -hw)),
            self.to_world(Point2::new(hl, -hw)),
        ]
    }

    /// Boundary counts as inside (with a 1e-9 m tolerance for rounding).
    pub fn contains(&self, p: Point2) -> bool {
        let q = self.to_local(p);
        q.x.abs() <= 0.5 * self.length + 1e-9 && q.y.abs() <= 0.5 * self.width + 1e-9
    }

    /// Whether the closed segment `a`–`b` touches the closed rectangle.
    pub fn intersects_segment(&self, a: Point2, b: Point2) -> bool {
        // Liang–Barsky clipping in the box frame.
        let p = self.to_local(a);
        let d = self.to_local(b) - p;
        let hl = 0.5 * self.length;
        let hw = 0.5 * self.width;
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        for (denom, num) in [
            (-d.x, p.x + hl),
            (d.x, hl - p.x),
            (-d.y, p.y + hw),
            (d.y, hw - p.y),
        ] {
            if denom == 0.0 {
                if num < 0.0 {
                    return false;
                }
                continue;
            }
            let t = num / denom;
            if denom < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
            if t0 > t1 {
                return false;
            }
        }
        true
    }

    pub fn intersects_polyline(&self, line: &Polyline) -> bool {
        (0..line.segment_count()).any(|i| {
            let (a, b) = line.segment(i);
            self.intersects_segment(a, b)
        })
    }
}
