//! Raw Morton index encoding: one 64-bit word per quadrant.
//!
//! Layout: bits 63..56 hold the level, bits 55..0 hold the coordinate bits
//! interleaved as (z y x) groups, most significant group = level 1, relative
//! to the maximum level. All bits right of group `level` are zero. The
//! operations below work on the word directly; nothing here round-trips
//! through per-axis coordinates except decoding itself.

use core::cmp::Ordering;

use crate::bits::{compact2, compact3, spread2, spread3};
use crate::config::{Dim, TreeConfig};
use crate::encoding::QuadrantEncoding;
use crate::error::Error;
use crate::quadrant::{BoundaryReport, ChildId, DescendantEnd, FaceIndex, MortonIndex, Quadrant};

/// Bits 55..0: everything but the level byte.
const COORD_MASK: u64 = (1 << 56) - 1;

/// Lowest bit of each 3-bit group over the full 18-group range: 0, 3, .., 51.
const X_PATTERN_3D: u64 = 0x0009_2492_4924_9249;

/// Lowest bit of each 2-bit group over the full 28-group range: 0, 2, .., 54.
const X_PATTERN_2D: u64 = 0x0055_5555_5555_5555;

const fn capacity(dim: Dim) -> u8 {
    match dim {
        // floor(56 / 3) and floor(56 / 2) coordinate groups fit the low bits
        Dim::D3 => 18,
        Dim::D2 => 28,
    }
}

fn check_cfg(cfg: &TreeConfig) -> Result<(), Error> {
    let supported = capacity(cfg.dim());
    if cfg.max_level() > supported {
        return Err(Error::LevelUnsupported { max_level: cfg.max_level(), supported });
    }
    Ok(())
}

/// Morton-word quadrant: level in the high byte, interleaved coordinates
/// below, 8 bytes total.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct MortonQuad(u64);

impl MortonQuad {
    /// The stored word.
    #[inline]
    pub const fn word(self) -> u64 {
        self.0
    }

    #[inline]
    const fn level_of(self) -> u8 {
        (self.0 >> 56) as u8
    }

    /// Builds from a raw word, rejecting words that violate the layout.
    pub fn from_word(cfg: &TreeConfig, word: u64) -> Result<Self, Error> {
        check_cfg(cfg)?;
        let level = (word >> 56) as u8;
        cfg.validate_level(level)?;
        let d = cfg.dim().count();
        let coords = word & COORD_MASK;
        // no coordinate bits above group 1 or right of group `level`
        if coords >> (d * cfg.max_level() as u32) != 0 {
            return Err(Error::InvalidEncoding);
        }
        if coords & low_group_mask(cfg, level) != 0 {
            return Err(Error::InvalidEncoding);
        }
        Ok(MortonQuad(word))
    }

    /// 1 in every bit of the direction pattern for `axis`, restricted to the
    /// groups active at `level`.
    #[inline]
    fn direction_mask(cfg: &TreeConfig, level: u8, axis: u32) -> u64 {
        let d = cfg.dim().count();
        let pattern = match cfg.dim() {
            Dim::D3 => X_PATTERN_3D,
            Dim::D2 => X_PATTERN_2D,
        } & ((1u64 << (d * cfg.max_level() as u32)) - 1);
        let mask_level = !((1u64 << (d * (cfg.max_level() - level) as u32)) - 1);
        (pattern & mask_level) << axis
    }
}

/// All coordinate bits right of the level-`level` group.
#[inline]
fn low_group_mask(cfg: &TreeConfig, level: u8) -> u64 {
    (1u64 << (cfg.dim().count() * (cfg.max_level() - level) as u32)) - 1
}

impl QuadrantEncoding for MortonQuad {
    const NAME: &'static str = "morton64";
    const STORED_BYTES: usize = 8;
    type Bytes = [u8; 8];

    fn supported_level(dim: Dim) -> u8 {
        capacity(dim)
    }

    fn encode(cfg: &TreeConfig, q: Quadrant) -> Result<Self, Error> {
        check_cfg(cfg)?;
        let [x, y, z] = q.level_relative(cfg);
        let index = match cfg.dim() {
            Dim::D3 => spread3(x) | spread3(y) << 1 | spread3(z) << 2,
            Dim::D2 => spread2(x) | spread2(y) << 1,
        };
        let shift = cfg.dim().count() * (cfg.max_level() - q.level()) as u32;
        Ok(MortonQuad((q.level() as u64) << 56 | index << shift))
    }

    fn decode(self, cfg: &TreeConfig) -> Result<Quadrant, Error> {
        check_cfg(cfg)?;
        let level = self.level_of();
        cfg.validate_level(level)?;
        let coords = self.0 & COORD_MASK;
        if coords >> (cfg.dim().count() * cfg.max_level() as u32) != 0
            || coords & low_group_mask(cfg, level) != 0
        {
            return Err(Error::InvalidEncoding);
        }
        let index = coords >> (cfg.dim().count() * (cfg.max_level() - level) as u32);
        let rel = match cfg.dim() {
            Dim::D3 => [compact3(index), compact3(index >> 1), compact3(index >> 2)],
            Dim::D2 => [compact2(index), compact2(index >> 1), 0],
        };
        Quadrant::from_level_relative(cfg, rel, level)
    }

    fn from_morton(cfg: &TreeConfig, index: MortonIndex, level: u8) -> Result<Self, Error> {
        check_cfg(cfg)?;
        cfg.validate_level(level)?;
        let d = cfg.dim().count();
        if index >> (d * level as u32) != 0 {
            return Err(Error::IndexOutOfRange);
        }
        // relate the level-specific index to the maximum level
        let word = (level as u64) << 56 | (index as u64) << (d * (cfg.max_level() - level) as u32);
        Ok(MortonQuad(word))
    }

    #[inline]
    fn to_morton(self, cfg: &TreeConfig) -> MortonIndex {
        let shift = cfg.dim().count() * (cfg.max_level() - self.level_of()) as u32;
        ((self.0 & COORD_MASK) >> shift) as MortonIndex
    }

    #[inline]
    fn child(self, cfg: &TreeConfig, c: ChildId) -> Result<Self, Error> {
        let level = self.level_of();
        if level == cfg.max_level() {
            return Err(Error::AtMaxLevel);
        }
        let shift = (c.index() as u64) << (cfg.dim().count() * (cfg.max_level() - level - 1) as u32);
        Ok(MortonQuad((self.0 | shift) + (1 << 56)))
    }

    #[inline]
    fn parent(self, cfg: &TreeConfig) -> Result<Self, Error> {
        let level = self.level_of();
        if level == 0 {
            return Err(Error::IsRoot);
        }
        let d = cfg.dim().count();
        let group = ((1u64 << d) - 1) << (d * (cfg.max_level() - level) as u32);
        // blank the level-l group, then drop the level byte by one
        Ok(MortonQuad((self.0 & !group) - (1 << 56)))
    }

    #[inline]
    fn sibling(self, cfg: &TreeConfig, s: ChildId) -> Result<Self, Error> {
        let level = self.level_of();
        if level == 0 {
            return Err(Error::IsRoot);
        }
        let d = cfg.dim().count();
        let shift = d * (cfg.max_level() - level) as u32;
        let group = ((1u64 << d) - 1) << shift;
        Ok(MortonQuad(self.0 & !group | (s.index() as u64) << shift))
    }

    #[inline]
    fn child_id(self, cfg: &TreeConfig) -> Result<ChildId, Error> {
        let level = self.level_of();
        if level == 0 {
            return Err(Error::IsRoot);
        }
        let d = cfg.dim().count();
        let id = (self.0 >> (d * (cfg.max_level() - level) as u32)) as u8 & ((1 << d) - 1);
        ChildId::new(cfg.dim(), id)
    }

    #[inline]
    fn successor(self, cfg: &TreeConfig) -> Result<Self, Error> {
        let level = self.level_of();
        let d = cfg.dim().count();
        let shift = d * (cfg.max_level() - level) as u32;
        let index_mask = ((1u64 << (d * level as u32)) - 1) << shift;
        if self.0 & index_mask == index_mask {
            return Err(Error::LastOfLevel);
        }
        Ok(MortonQuad(self.0 + (1 << shift)))
    }

    fn face_neighbor(self, cfg: &TreeConfig, f: FaceIndex) -> Option<Self> {
        let level = self.level_of();
        let dir = Self::direction_mask(cfg, level, f.axis());
        let q = self.0;
        let r = if f.is_upper() {
            if q & dir == dir {
                return None; // already on the upper boundary of the axis
            }
            (q | !dir) + 1 // move along the axis direction
        } else {
            if q & dir == 0 {
                return None; // already on the lower boundary
            }
            (q & dir) - 1 // move against the axis direction
        };
        Some(MortonQuad(r & dir | q & !dir)) // restore unchanged bits
    }

    fn tree_boundaries(self, cfg: &TreeConfig) -> BoundaryReport {
        let level = self.level_of();
        let d = cfg.dim().count() as usize;
        let mut faces = [0i32; 3];
        if level == 0 {
            for f in faces[..d].iter_mut() {
                *f = -2;
            }
            return BoundaryReport::new(cfg.dim(), faces);
        }
        let index = (self.0 & COORD_MASK) >> (d as u32 * (cfg.max_level() - level) as u32);
        let top = (1u32 << level) - 1; // level-relative upper anchor
        for (axis, f) in faces[..d].iter_mut().enumerate() {
            let rel = match cfg.dim() {
                Dim::D3 => compact3(index >> axis as u32),
                Dim::D2 => compact2(index >> axis as u32),
            };
            *f = if rel == 0 {
                2 * axis as i32
            } else if rel == top {
                2 * axis as i32 + 1
            } else {
                -1
            };
        }
        BoundaryReport::new(cfg.dim(), faces)
    }

    #[inline]
    fn ancestor(self, cfg: &TreeConfig, level: u8) -> Result<Self, Error> {
        let own = self.level_of();
        if level > own {
            return Err(Error::InvalidTargetLevel { level: own, target: level });
        }
        let coords = self.0 & COORD_MASK & !low_group_mask(cfg, level);
        Ok(MortonQuad((level as u64) << 56 | coords))
    }

    #[inline]
    fn descendant(self, cfg: &TreeConfig, level: u8, end: DescendantEnd) -> Result<Self, Error> {
        let own = self.level_of();
        cfg.validate_level(level)?;
        if level < own {
            return Err(Error::InvalidTargetLevel { level: own, target: level });
        }
        let mut coords = self.0 & COORD_MASK;
        if end == DescendantEnd::Last {
            // fill every group between the own and the target level
            coords |= low_group_mask(cfg, own) & !low_group_mask(cfg, level);
        }
        Ok(MortonQuad((level as u64) << 56 | coords))
    }

    /// Raw words never compare directly: the level byte would outrank the
    /// coordinates. Mask first, tie-break on level.
    #[inline]
    fn compare(self, _cfg: &TreeConfig, other: Self) -> Ordering {
        (self.0 & COORD_MASK, self.0 >> 56).cmp(&(other.0 & COORD_MASK, other.0 >> 56))
    }

    #[inline]
    fn is_ancestor(self, cfg: &TreeConfig, other: Self) -> bool {
        self.level_of() <= other.level_of() && other.ancestor(cfg, self.level_of()) == Ok(self)
    }

    #[inline]
    fn to_bytes(self) -> [u8; 8] {
        self.0.to_le_bytes()
    }

    fn from_bytes(cfg: &TreeConfig, bytes: [u8; 8]) -> Result<Self, Error> {
        Self::from_word(cfg, u64::from_le_bytes(bytes))
    }

    #[inline]
    fn sink_word(self) -> u64 {
        self.0
    }
}
