use core::cmp::Ordering;

use crate::config::{Dim, TreeConfig};
use crate::error::Error;
use crate::quadrant::{BoundaryReport, ChildId, DescendantEnd, FaceIndex, MortonIndex, Quadrant};

/// One stored form of a quadrant plus the full operation contract.
///
/// Implementations must be bit-exact peers of [`Quadrant`]'s arithmetic: for
/// every valid input, decoding an operation's result here equals running the
/// same operation on the decoded input, and error/Outside outcomes agree.
/// The conformance harness enforces this exhaustively.
pub trait QuadrantEncoding: Copy + Eq + core::fmt::Debug {
    /// Stable name used in reports and benchmark output.
    const NAME: &'static str;

    /// Stored size in bytes; equals the serialized size and `size_of::<Self>()`.
    const STORED_BYTES: usize;

    /// Serialized form: a fixed-size little-endian byte array.
    type Bytes: AsRef<[u8]> + Copy + Eq + core::fmt::Debug;

    /// Deepest tree the encoding supports in dimension `dim`.
    fn supported_level(dim: Dim) -> u8;

    fn encode(cfg: &TreeConfig, q: Quadrant) -> Result<Self, Error>;

    fn decode(self, cfg: &TreeConfig) -> Result<Quadrant, Error>;

    /// Builds the quadrant with the given level-relative Morton index.
    fn from_morton(cfg: &TreeConfig, index: MortonIndex, level: u8) -> Result<Self, Error>;

    /// Level-relative Morton index of a valid stored quadrant.
    fn to_morton(self, cfg: &TreeConfig) -> MortonIndex;

    fn child(self, cfg: &TreeConfig, c: ChildId) -> Result<Self, Error>;

    fn parent(self, cfg: &TreeConfig) -> Result<Self, Error>;

    fn sibling(self, cfg: &TreeConfig, s: ChildId) -> Result<Self, Error>;

    fn child_id(self, cfg: &TreeConfig) -> Result<ChildId, Error>;

    fn successor(self, cfg: &TreeConfig) -> Result<Self, Error>;

    /// The same-level neighbor across `f`, or None outside the root domain.
    fn face_neighbor(self, cfg: &TreeConfig, f: FaceIndex) -> Option<Self>;

    fn tree_boundaries(self, cfg: &TreeConfig) -> BoundaryReport;

    fn ancestor(self, cfg: &TreeConfig, level: u8) -> Result<Self, Error>;

    fn descendant(self, cfg: &TreeConfig, level: u8, end: DescendantEnd) -> Result<Self, Error>;

    /// Space-filling-curve order; must sort any set exactly like the
    /// reference comparator.
    fn compare(self, cfg: &TreeConfig, other: Self) -> Ordering;

    fn is_ancestor(self, cfg: &TreeConfig, other: Self) -> bool;

    fn to_bytes(self) -> Self::Bytes;

    fn from_bytes(cfg: &TreeConfig, bytes: Self::Bytes) -> Result<Self, Error>;

    /// Cheap fold of the stored words, used as a benchmark dead-code sink.
    /// Not comparable across encodings.
    fn sink_word(self) -> u64;
}
