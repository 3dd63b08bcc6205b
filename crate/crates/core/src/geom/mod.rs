//! Planar geometry used throughout the crate: points, 2×2 covariances,
//! arc-length parameterized polylines and oriented rectangles.
//!
//! Everything here is a pure function of its inputs. Goal paths are short
//! (a few hundred vertices at most), so all queries are linear scans.

mod cov;
mod obox;
mod point;
mod polyline;

pub use cov::{mahalanobis_distance, Cov2, COV_REGULARIZATION};
pub use obox::OrientedBox;
pub use point::Point2;
pub use polyline::{mahalanobis_project, Polyline, Projection, ProjectionMode};

use std::f64::consts::PI;

/// Minimum admissible segment length of a [`Polyline`].
pub const MIN_SEGMENT_LENGTH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("covariance is not positive-definite (eigenvalues {0:.3e}, {1:.3e})")]
    NotPositiveDefinite(f64, f64),
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
    #[error("polyline needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polyline segment {0} is shorter than {MIN_SEGMENT_LENGTH} m")]
    DegenerateSegment(usize),
    #[error("box dimensions must be positive, got {length} x {width}")]
    InvalidBox { length: f64, width: f64 },
    #[error("resampling step must be positive and finite, got {0}")]
    InvalidStep(f64),
}

/// Wraps an angle into (−π, π].
pub fn normalize_angle(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(2.0 * PI);
    if wrapped > PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}
