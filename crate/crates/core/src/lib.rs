//! Full-reference point cloud quality assessment.
//!
//! The crate implements a joint geometry-and-color projection metric: the
//! reference and degraded clouds are brought onto a common geometry by
//! nearest-neighbor recoloring, orthographically projected onto the six faces
//! of the precision box, filtered, cropped, padded and scored with 2D image
//! metrics. Per-branch scores are average-pooled and linearly fused.
//!
//! Alongside the metric sit the MPEG point-based baselines (D1, D2, Hausdorff,
//! point luma PSNR) and the statistics needed to correlate objective scores
//! with subjective ratings.
//!
//! The crate is `no_std` + `alloc`. The `std` feature enables `std::error::Error`
//! impls; `parallel` runs independent work units (branches, views, per-point
//! queries) on rayon. Results are bit-identical with and without `parallel`.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod baseline;
pub mod cloud;
mod error;
pub mod eval;
pub mod grid;
pub mod kdtree;
mod linalg;
pub mod metrics2d;
pub mod normals;
mod par;
pub mod pipeline;
pub mod projection;
pub mod recolor;

pub use cloud::{Color, PointCloud, Position, RawCloud};
pub use error::{Error, Result};
pub use grid::Grid;
pub use kdtree::NnIndex;
