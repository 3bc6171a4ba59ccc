//! Disk-area signatures of planar regions.
//!
//! The boundary of a compact simple region, traversed counterclockwise and
//! parameterized by arc length, is probed with disks: `g(s, r)` is the area
//! of the region clipped to the disk of radius `r` centered at boundary
//! point `s`. This crate computes such signatures exactly for polygons,
//! checks the geometric conditions under which they are invertible, and
//! recovers shapes back from signature data: polygon reconstruction from
//! derivative jumps, forward marching from partial data, curvature
//! estimation, and global Fourier fits driven by a direct-search optimizer.

pub mod curvature;
pub mod fit;
pub mod geometry;
pub mod graphlike;
pub mod invariant;
pub mod reconstruct;
pub mod shapes;
pub mod smooth;
pub mod svg;
mod util;

pub use geometry::{Point2, Polygon};
pub use util::fmt17;
