//! Linear-octree quadrants with three interchangeable encodings.
//!
//! A quadrant is an axis-aligned cube of a 2:1-refined domain, identified by
//! its anchor coordinates and refinement level. [`Quadrant`] is the plain
//! arithmetic form and serves as the reference for everything else. The
//! encodings trade size for decode cost under a single contract,
//! [`QuadrantEncoding`]:
//!
//! - [`StandardQuad3`] / [`StandardQuad2`]: explicit coordinates plus a
//!   payload word, 24 or 16 bytes.
//! - [`MortonQuad`]: one 64-bit word holding level and interleaved index.
//! - [`PackedQuad`]: four 32-bit lanes in 16 aligned bytes, with SSE/AVX2
//!   kernels behind a runtime probe.
//!
//! The [`conformance`] module enumerates complete trees and diffs any
//! encoding against the reference, operation by operation.

#![no_std]

extern crate alloc;

mod bits;
mod config;
pub mod conformance;
mod encoding;
mod error;
mod morton64;
mod packed128;
mod quadrant;
mod standard;

pub use config::{Dim, TreeConfig, MAX_TREE_LEVEL};
pub use encoding::QuadrantEncoding;
pub use error::Error;
pub use morton64::MortonQuad;
pub use packed128::{
    force_scalar, scalar_forced, vector_path_active, vector_path_available, PackedQuad,
};
pub use quadrant::{
    BoundaryReport, ChildId, DescendantEnd, Domain, FaceIndex, MortonIndex, Quadrant,
};
pub use standard::{StandardQuad2, StandardQuad3, STANDARD_MAX_LEVEL};
