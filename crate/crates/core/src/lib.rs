//! Fusing learned short-term trajectory predictions with long-term lane
//! goal paths.
//!
//! The crate has two halves:
//!
//! * the stitching algorithm itself ([`stitcher`]), built on the planar
//!   primitives in [`geom`];
//! * an evaluation harness around it: a pure-pursuit path tracker
//!   ([`tracker`]), comparison methods ([`baselines`]), cross-track
//!   metrics and selection logic ([`eval`]), a synthetic scenario generator
//!   ([`scenarios`]) and the experiment runner behind the `lanestitch`
//!   binary ([`cli`]).
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod baselines;
pub mod cli;
pub mod eval;
pub mod geom;
pub mod scenarios;
pub mod stitcher;
pub mod tracker;

pub use geom::{Cov2, OrientedBox, Point2, Polyline};
pub use stitcher::{stitch, GaussianWaypoint, PredictedTrajectory, SolutionPath, StitchParams};
