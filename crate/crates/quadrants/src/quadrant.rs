//! Arithmetic reference implementation of the quadrant operation contract.
//!
//! [`Quadrant`] stores anchor coordinates and level directly and implements
//! every operation with plain coordinate arithmetic and per-bit loops. The
//! compact encodings are verified against this module, so it stays boring on
//! purpose: no interleave tricks, no word-level shortcuts.

use core::cmp::Ordering;

use crate::config::{Dim, TreeConfig};
use crate::error::Error;

/// Morton index value. A level-relative index occupies d*level bits; an index
/// relative to the maximum level occupies d*L bits (up to 90, hence 128-bit
/// storage).
pub type MortonIndex = u128;

/// Child position within a parent: bit k is the anchor offset along axis k.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChildId(u8);

impl ChildId {
    pub const fn new(dim: Dim, id: u8) -> Result<Self, Error> {
        if id >= dim.children() {
            return Err(Error::InvalidChildId(id));
        }
        Ok(ChildId(id))
    }

    #[inline]
    pub const fn index(self) -> u8 {
        self.0
    }

    /// 1 when the child is offset along `axis`, else 0.
    #[inline]
    pub const fn axis_bit(self, axis: u32) -> u32 {
        ((self.0 >> axis) & 1) as u32
    }
}

/// Face of a quadrant: axis i/2, the lower face for even i, upper for odd.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct FaceIndex(u8);

impl FaceIndex {
    pub const fn new(dim: Dim, face: u8) -> Result<Self, Error> {
        if face >= dim.faces() {
            return Err(Error::InvalidFace(face));
        }
        Ok(FaceIndex(face))
    }

    #[inline]
    pub const fn index(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn axis(self) -> u32 {
        (self.0 >> 1) as u32
    }

    /// True for the face in the positive axis direction.
    #[inline]
    pub const fn is_upper(self) -> bool {
        self.0 & 1 == 1
    }
}

impl TreeConfig {
    /// All child positions for this dimension.
    pub fn child_ids(&self) -> impl DoubleEndedIterator<Item = ChildId> + ExactSizeIterator {
        (0..self.dim().children()).map(ChildId)
    }

    /// All face indices for this dimension.
    pub fn face_indices(&self) -> impl DoubleEndedIterator<Item = FaceIndex> + ExactSizeIterator {
        (0..self.dim().faces()).map(FaceIndex)
    }
}

/// Per-axis root boundary contact: entry i is the touched face code 2i
/// (lower) or 2i+1 (upper), -1 for no contact, and -2 on every axis for the
/// root, which touches both faces of each axis.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct BoundaryReport {
    dim: Dim,
    faces: [i32; 3],
}

impl BoundaryReport {
    /// Entries at axes beyond the dimension are forced to 0 so derived
    /// equality only sees the live axes.
    pub fn new(dim: Dim, mut faces: [i32; 3]) -> Self {
        for axis in dim.count() as usize..3 {
            faces[axis] = 0;
        }
        BoundaryReport { dim, faces }
    }

    #[inline]
    pub fn faces(&self) -> &[i32] {
        &self.faces[..self.dim.count() as usize]
    }
}

/// Which end of the refined range a descendant query asks for.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum DescendantEnd {
    First,
    Last,
}

/// Axis-aligned lattice region covered by a quadrant; `upper` is exclusive.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Domain {
    pub lower: [u64; 3],
    pub upper: [u64; 3],
}

impl Domain {
    /// Topological dimension of the intersection with `other`, or None when
    /// the regions are disjoint. Face contact between distinct quadrants has
    /// dimension d-1: one axis touches, the rest overlap.
    pub fn intersection_dim(&self, other: &Domain, dim: Dim) -> Option<u32> {
        let mut positive = 0;
        for axis in 0..dim.count() as usize {
            let lo = self.lower[axis].max(other.lower[axis]);
            let hi = self.upper[axis].min(other.upper[axis]);
            if lo > hi {
                return None;
            }
            if hi > lo {
                positive += 1;
            }
        }
        Some(positive)
    }
}

/// Canonical quadrant value: anchor coordinates on the [0, 2^L)^d lattice and
/// a refinement level. In 2D the third coordinate is always 0.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quadrant {
    coords: [u32; 3],
    level: u8,
}

impl Quadrant {
    /// The level-0 quadrant covering the whole root domain.
    #[inline]
    pub const fn root() -> Self {
        Quadrant { coords: [0; 3], level: 0 }
    }

    /// Builds a quadrant from parts an encoding already guarantees valid.
    #[inline]
    pub(crate) const fn from_parts(coords: [u32; 3], level: u8) -> Self {
        Quadrant { coords, level }
    }

    /// Builds a quadrant from anchor coordinates, rejecting out-of-domain or
    /// misaligned values.
    pub fn new(cfg: &TreeConfig, coords: [u32; 3], level: u8) -> Result<Self, Error> {
        cfg.validate_level(level)?;
        let len = cfg.quadrant_len(level);
        let d = cfg.dim().count() as usize;
        for (axis, &c) in coords.iter().enumerate() {
            if axis >= d {
                if c != 0 {
                    return Err(Error::CoordinateOutOfRange);
                }
                continue;
            }
            if c >= cfg.root_len() {
                return Err(Error::CoordinateOutOfRange);
            }
            if c % len != 0 {
                return Err(Error::MisalignedCoordinate);
            }
        }
        Ok(Quadrant { coords, level })
    }

    /// Builds a quadrant from level-relative coordinates; the anchor is the
    /// given value times 2^(L-level).
    pub fn from_level_relative(cfg: &TreeConfig, rel: [u32; 3], level: u8) -> Result<Self, Error> {
        cfg.validate_level(level)?;
        let shift = cfg.max_level() - level;
        let d = cfg.dim().count() as usize;
        let mut coords = [0u32; 3];
        for (axis, &r) in rel.iter().enumerate() {
            if (axis >= d && r != 0) || (level < 32 && r >> level != 0) {
                return Err(Error::CoordinateOutOfRange);
            }
            coords[axis] = r << shift;
        }
        Ok(Quadrant { coords, level })
    }

    #[inline]
    pub const fn coords(&self) -> [u32; 3] {
        self.coords
    }

    #[inline]
    pub const fn x(&self) -> u32 {
        self.coords[0]
    }

    #[inline]
    pub const fn y(&self) -> u32 {
        self.coords[1]
    }

    #[inline]
    pub const fn z(&self) -> u32 {
        self.coords[2]
    }

    #[inline]
    pub const fn level(&self) -> u8 {
        self.level
    }

    /// Anchor coordinates divided by the quadrant length.
    pub fn level_relative(&self, cfg: &TreeConfig) -> [u32; 3] {
        let shift = cfg.max_level() - self.level;
        [self.coords[0] >> shift, self.coords[1] >> shift, self.coords[2] >> shift]
    }

    /// Rebuilds a quadrant from its level-relative Morton index: index bit
    /// d*i + k is coordinate bit i of axis k.
    pub fn from_morton(cfg: &TreeConfig, index: MortonIndex, level: u8) -> Result<Self, Error> {
        cfg.validate_level(level)?;
        let d = cfg.dim().count();
        if index >> (d * level as u32) != 0 {
            return Err(Error::IndexOutOfRange);
        }
        let mut coords = [0u32; 3];
        for i in 0..level as u32 {
            for axis in 0..d {
                coords[axis as usize] |= (((index >> (d * i + axis)) & 1) as u32) << i;
            }
        }
        let shift = cfg.max_level() - level;
        for c in &mut coords {
            *c <<= shift;
        }
        Ok(Quadrant { coords, level })
    }

    /// Level-relative Morton index: the bit interleave of the level-relative
    /// coordinates, x in the lowest slot of each d-bit group.
    pub fn to_morton(&self, cfg: &TreeConfig) -> MortonIndex {
        let d = cfg.dim().count();
        let shift = cfg.max_level() - self.level;
        let mut index: MortonIndex = 0;
        for i in 0..self.level as u32 {
            for axis in 0..d {
                let bit = (self.coords[axis as usize] >> (shift as u32 + i)) & 1;
                index |= (bit as MortonIndex) << (d * i + axis);
            }
        }
        index
    }

    /// Morton index relative to the maximum level: the space-filling-curve
    /// sort key shared by all levels.
    pub fn morton_key(&self, cfg: &TreeConfig) -> MortonIndex {
        let d = cfg.dim().count();
        self.to_morton(cfg) << (d * (cfg.max_level() - self.level) as u32)
    }

    /// The child at position `c`: the anchor moves half a quadrant length
    /// along every axis whose bit is set in `c`.
    pub fn child(&self, cfg: &TreeConfig, c: ChildId) -> Result<Self, Error> {
        if self.level == cfg.max_level() {
            return Err(Error::AtMaxLevel);
        }
        let half = cfg.quadrant_len(self.level + 1);
        let mut coords = self.coords;
        for axis in 0..cfg.dim().count() {
            coords[axis as usize] |= c.axis_bit(axis) * half;
        }
        Ok(Quadrant { coords, level: self.level + 1 })
    }

    /// The containing quadrant one level up: the child offset bit cleared
    /// from each coordinate.
    pub fn parent(&self, cfg: &TreeConfig) -> Result<Self, Error> {
        if self.level == 0 {
            return Err(Error::IsRoot);
        }
        let len = cfg.quadrant_len(self.level);
        let mut coords = self.coords;
        for c in &mut coords {
            *c &= !len;
        }
        Ok(Quadrant { coords, level: self.level - 1 })
    }

    /// The sibling at position `s` under the same parent.
    pub fn sibling(&self, cfg: &TreeConfig, s: ChildId) -> Result<Self, Error> {
        if self.level == 0 {
            return Err(Error::IsRoot);
        }
        let len = cfg.quadrant_len(self.level);
        let mut coords = self.coords;
        for axis in 0..cfg.dim().count() {
            let c = &mut coords[axis as usize];
            if s.axis_bit(axis) != 0 {
                *c |= len;
            } else {
                *c &= !len;
            }
        }
        Ok(Quadrant { coords, level: self.level })
    }

    /// Which child of its parent this quadrant is.
    pub fn child_id(&self, cfg: &TreeConfig) -> Result<ChildId, Error> {
        if self.level == 0 {
            return Err(Error::IsRoot);
        }
        let len = cfg.quadrant_len(self.level);
        let mut id = 0u8;
        for axis in 0..cfg.dim().count() {
            if self.coords[axis as usize] & len != 0 {
                id |= 1 << axis;
            }
        }
        Ok(ChildId(id))
    }

    /// The next quadrant of the same level in Morton order.
    pub fn successor(&self, cfg: &TreeConfig) -> Result<Self, Error> {
        let d = cfg.dim().count();
        let index = self.to_morton(cfg);
        if index == (1u128 << (d * self.level as u32)) - 1 {
            return Err(Error::LastOfLevel);
        }
        Self::from_morton(cfg, index + 1, self.level)
    }

    /// The same-level neighbor across face `f`, or None when it would lie
    /// outside the root domain. The bound check runs before any arithmetic.
    pub fn face_neighbor(&self, cfg: &TreeConfig, f: FaceIndex) -> Option<Self> {
        let axis = f.axis() as usize;
        let len = cfg.quadrant_len(self.level);
        let c = self.coords[axis];
        let moved = if f.is_upper() {
            if c >= cfg.root_len() - len {
                return None;
            }
            c + len
        } else {
            if c == 0 {
                return None;
            }
            c - len
        };
        let mut coords = self.coords;
        coords[axis] = moved;
        Some(Quadrant { coords, level: self.level })
    }

    /// Which root faces the quadrant touches, one entry per axis.
    pub fn tree_boundaries(&self, cfg: &TreeConfig) -> BoundaryReport {
        let d = cfg.dim().count() as usize;
        let mut faces = [0i32; 3];
        if self.level == 0 {
            for f in faces[..d].iter_mut() {
                *f = -2;
            }
            return BoundaryReport::new(cfg.dim(), faces);
        }
        // A level-l quadrant touches the upper face when its anchor sits at
        // 2^L - 2^(L-l), the last slot of its own grid.
        let upper = cfg.root_len() - cfg.quadrant_len(self.level);
        for (axis, f) in faces[..d].iter_mut().enumerate() {
            let c = self.coords[axis];
            *f = if c == 0 {
                2 * axis as i32
            } else if c == upper {
                2 * axis as i32 + 1
            } else {
                -1
            };
        }
        BoundaryReport::new(cfg.dim(), faces)
    }

    /// The ancestor at `level`: coordinate bits below the target grid
    /// spacing cleared.
    pub fn ancestor(&self, cfg: &TreeConfig, level: u8) -> Result<Self, Error> {
        if level > self.level {
            return Err(Error::InvalidTargetLevel { level: self.level, target: level });
        }
        let mask = !(cfg.quadrant_len(level) - 1);
        let mut coords = self.coords;
        for c in &mut coords {
            *c &= mask;
        }
        Ok(Quadrant { coords, level })
    }

    /// The first or last descendant at `level` in Morton order: the first
    /// shares the anchor, the last sits at the opposite corner's slot.
    pub fn descendant(
        &self,
        cfg: &TreeConfig,
        level: u8,
        end: DescendantEnd,
    ) -> Result<Self, Error> {
        cfg.validate_level(level)?;
        if level < self.level {
            return Err(Error::InvalidTargetLevel { level: self.level, target: level });
        }
        let mut coords = self.coords;
        if end == DescendantEnd::Last {
            let offset = cfg.quadrant_len(self.level) - cfg.quadrant_len(level);
            for axis in 0..cfg.dim().count() as usize {
                coords[axis] += offset;
            }
        }
        Ok(Quadrant { coords, level })
    }

    /// Space-filling-curve order: by Morton key, ancestors before the
    /// descendants sharing their anchor (level ascending breaks ties).
    pub fn compare(&self, cfg: &TreeConfig, other: &Self) -> Ordering {
        (self.morton_key(cfg), self.level).cmp(&(other.morton_key(cfg), other.level))
    }

    /// True when `self` contains `other`; every quadrant is its own ancestor.
    pub fn is_ancestor(&self, cfg: &TreeConfig, other: &Self) -> bool {
        self.level <= other.level && other.ancestor(cfg, self.level) == Ok(*self)
    }

    /// The lattice region the quadrant covers.
    pub fn domain(&self, cfg: &TreeConfig) -> Domain {
        let len = cfg.quadrant_len(self.level) as u64;
        let mut lower = [0u64; 3];
        let mut upper = [0u64; 3];
        for axis in 0..cfg.dim().count() as usize {
            lower[axis] = self.coords[axis] as u64;
            upper[axis] = lower[axis] + len;
        }
        Domain { lower, upper }
    }
}
