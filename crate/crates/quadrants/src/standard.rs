//! Coordinate-tuple encodings: explicit per-axis anchors, a level byte and a
//! free payload field.
//!
//! `from_morton` deinterleaves with a masked-extract loop, `child` and
//! `sibling` set or clear one coordinate bit per axis. Everything else runs
//! on the fields through the shared coordinate arithmetic.

use core::cmp::Ordering;
use core::hash::{Hash, Hasher};

use crate::config::{Dim, TreeConfig};
use crate::encoding::QuadrantEncoding;
use crate::error::Error;
use crate::quadrant::{BoundaryReport, ChildId, DescendantEnd, FaceIndex, MortonIndex, Quadrant};

/// Coordinate fields cover [0, 2^L) plus one spare bit for overflow-free
/// neighbor arithmetic.
pub const STANDARD_MAX_LEVEL: u8 = 29;

fn check_cfg(cfg: &TreeConfig, dim: Dim) -> Result<(), Error> {
    if cfg.dim() != dim {
        return Err(Error::WrongDimension);
    }
    if cfg.max_level() > STANDARD_MAX_LEVEL {
        return Err(Error::LevelUnsupported {
            max_level: cfg.max_level(),
            supported: STANDARD_MAX_LEVEL,
        });
    }
    Ok(())
}

/// 3D coordinate-tuple octant, stored in 24 bytes: x, y, z, level, three zero
/// padding bytes and an 8-byte payload.
#[derive(Copy, Clone, Debug)]
#[repr(C)]
pub struct StandardQuad3 {
    x: u32,
    y: u32,
    z: u32,
    level: u8,
    pad: [u8; 3],
    payload: u64,
}

// payload is user data: it never takes part in equality or ordering
impl PartialEq for StandardQuad3 {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y && self.z == other.z && self.level == other.level
    }
}

impl Eq for StandardQuad3 {}

impl Hash for StandardQuad3 {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.x, self.y, self.z, self.level).hash(state);
    }
}

impl StandardQuad3 {
    #[inline]
    pub const fn x(&self) -> u32 {
        self.x
    }

    #[inline]
    pub const fn y(&self) -> u32 {
        self.y
    }

    #[inline]
    pub const fn z(&self) -> u32 {
        self.z
    }

    #[inline]
    pub const fn level(&self) -> u8 {
        self.level
    }

    #[inline]
    pub const fn payload(&self) -> u64 {
        self.payload
    }

    #[inline]
    pub const fn with_payload(mut self, payload: u64) -> Self {
        self.payload = payload;
        self
    }

    #[inline]
    fn oracle(self) -> Quadrant {
        Quadrant::from_parts([self.x, self.y, self.z], self.level)
    }

    /// Same payload, coordinates and level taken from `q`.
    #[inline]
    fn rebuild(self, q: Quadrant) -> Self {
        StandardQuad3 {
            x: q.x(),
            y: q.y(),
            z: q.z(),
            level: q.level(),
            pad: [0; 3],
            payload: self.payload,
        }
    }
}

impl QuadrantEncoding for StandardQuad3 {
    const NAME: &'static str = "standard";
    const STORED_BYTES: usize = 24;
    type Bytes = [u8; 24];

    fn supported_level(_dim: Dim) -> u8 {
        STANDARD_MAX_LEVEL
    }

    fn encode(cfg: &TreeConfig, q: Quadrant) -> Result<Self, Error> {
        check_cfg(cfg, Dim::D3)?;
        Ok(StandardQuad3 {
            x: q.x(),
            y: q.y(),
            z: q.z(),
            level: q.level(),
            pad: [0; 3],
            payload: 0,
        })
    }

    fn decode(self, cfg: &TreeConfig) -> Result<Quadrant, Error> {
        check_cfg(cfg, Dim::D3)?;
        Quadrant::new(cfg, [self.x, self.y, self.z], self.level)
    }

    fn from_morton(cfg: &TreeConfig, index: MortonIndex, level: u8) -> Result<Self, Error> {
        check_cfg(cfg, Dim::D3)?;
        cfg.validate_level(level)?;
        if index >> (3 * level as u32) != 0 {
            return Err(Error::IndexOutOfRange);
        }
        let mut x = 0u32;
        let mut y = 0u32;
        let mut z = 0u32;
        for i in 0..level as u32 {
            let extract = 1u128 << (3 * i); // mask for the axis-0 bit of group i
            let shift = 2 * i; // distance from group i down to coordinate bit i
            x |= ((index & extract) >> shift) as u32;
            y |= ((index & (extract << 1)) >> (shift + 1)) as u32;
            z |= ((index & (extract << 2)) >> (shift + 2)) as u32;
        }
        let up = cfg.max_level() - level;
        Ok(StandardQuad3 {
            x: x << up,
            y: y << up,
            z: z << up,
            level,
            pad: [0; 3],
            payload: 0,
        })
    }

    #[inline]
    fn to_morton(self, cfg: &TreeConfig) -> MortonIndex {
        self.oracle().to_morton(cfg)
    }

    #[inline]
    fn child(self, cfg: &TreeConfig, c: ChildId) -> Result<Self, Error> {
        if self.level == cfg.max_level() {
            return Err(Error::AtMaxLevel);
        }
        let shift = 1u32 << (cfg.max_level() - (self.level + 1));
        let c = c.index();
        Ok(StandardQuad3 {
            x: if c & 0b001 != 0 { self.x | shift } else { self.x },
            y: if c & 0b010 != 0 { self.y | shift } else { self.y },
            z: if c & 0b100 != 0 { self.z | shift } else { self.z },
            level: self.level + 1,
            pad: [0; 3],
            payload: self.payload,
        })
    }

    #[inline]
    fn parent(self, cfg: &TreeConfig) -> Result<Self, Error> {
        self.oracle().parent(cfg).map(|q| self.rebuild(q))
    }

    #[inline]
    fn sibling(self, cfg: &TreeConfig, s: ChildId) -> Result<Self, Error> {
        if self.level == 0 {
            return Err(Error::IsRoot);
        }
        let shift = 1u32 << (cfg.max_level() - self.level);
        let s = s.index();
        Ok(StandardQuad3 {
            x: if s & 0b001 != 0 { self.x | shift } else { self.x & !shift },
            y: if s & 0b010 != 0 { self.y | shift } else { self.y & !shift },
            z: if s & 0b100 != 0 { self.z | shift } else { self.z & !shift },
            level: self.level,
            pad: [0; 3],
            payload: self.payload,
        })
    }

    #[inline]
    fn child_id(self, cfg: &TreeConfig) -> Result<ChildId, Error> {
        self.oracle().child_id(cfg)
    }

    #[inline]
    fn successor(self, cfg: &TreeConfig) -> Result<Self, Error> {
        self.oracle().successor(cfg).map(|q| self.rebuild(q))
    }

    #[inline]
    fn face_neighbor(self, cfg: &TreeConfig, f: FaceIndex) -> Option<Self> {
        self.oracle().face_neighbor(cfg, f).map(|q| self.rebuild(q))
    }

    #[inline]
    fn tree_boundaries(self, cfg: &TreeConfig) -> BoundaryReport {
        self.oracle().tree_boundaries(cfg)
    }

    #[inline]
    fn ancestor(self, cfg: &TreeConfig, level: u8) -> Result<Self, Error> {
        self.oracle().ancestor(cfg, level).map(|q| self.rebuild(q))
    }

    #[inline]
    fn descendant(self, cfg: &TreeConfig, level: u8, end: DescendantEnd) -> Result<Self, Error> {
        self.oracle().descendant(cfg, level, end).map(|q| self.rebuild(q))
    }

    #[inline]
    fn compare(self, cfg: &TreeConfig, other: Self) -> Ordering {
        self.oracle().compare(cfg, &other.oracle())
    }

    #[inline]
    fn is_ancestor(self, cfg: &TreeConfig, other: Self) -> bool {
        self.oracle().is_ancestor(cfg, &other.oracle())
    }

    fn to_bytes(self) -> [u8; 24] {
        let mut out = [0u8; 24];
        out[0..4].copy_from_slice(&self.x.to_le_bytes());
        out[4..8].copy_from_slice(&self.y.to_le_bytes());
        out[8..12].copy_from_slice(&self.z.to_le_bytes());
        out[12] = self.level;
        out[16..24].copy_from_slice(&self.payload.to_le_bytes());
        out
    }

    fn from_bytes(cfg: &TreeConfig, bytes: [u8; 24]) -> Result<Self, Error> {
        check_cfg(cfg, Dim::D3)?;
        if bytes[13..16] != [0; 3] {
            return Err(Error::InvalidEncoding);
        }
        let word = |i: usize| u32::from_le_bytes([bytes[i], bytes[i + 1], bytes[i + 2], bytes[i + 3]]);
        let (x, y, z, level) = (word(0), word(4), word(8), bytes[12]);
        Quadrant::new(cfg, [x, y, z], level)?;
        let payload = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
        Ok(StandardQuad3 { x, y, z, level, pad: [0; 3], payload })
    }

    #[inline]
    fn sink_word(self) -> u64 {
        (self.x as u64)
            ^ ((self.y as u64) << 20)
            ^ ((self.z as u64) << 40)
            ^ ((self.level as u64) << 56)
    }
}

/// 2D coordinate-tuple quadrant, stored in 16 bytes: x, y, level, three zero
/// padding bytes and a 4-byte payload.
#[derive(Copy, Clone, Debug)]
#[repr(C)]
pub struct StandardQuad2 {
    x: u32,
    y: u32,
    level: u8,
    pad: [u8; 3],
    payload: u32,
}

impl PartialEq for StandardQuad2 {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y && self.level == other.level
    }
}

impl Eq for StandardQuad2 {}

impl Hash for StandardQuad2 {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.x, self.y, self.level).hash(state);
    }
}

impl StandardQuad2 {
    #[inline]
    pub const fn x(&self) -> u32 {
        self.x
    }

    #[inline]
    pub const fn y(&self) -> u32 {
        self.y
    }

    #[inline]
    pub const fn level(&self) -> u8 {
        self.level
    }

    #[inline]
    pub const fn payload(&self) -> u32 {
        self.payload
    }

    #[inline]
    pub const fn with_payload(mut self, payload: u32) -> Self {
        self.payload = payload;
        self
    }

    #[inline]
    fn oracle(self) -> Quadrant {
        Quadrant::from_parts([self.x, self.y, 0], self.level)
    }

    #[inline]
    fn rebuild(self, q: Quadrant) -> Self {
        StandardQuad2 { x: q.x(), y: q.y(), level: q.level(), pad: [0; 3], payload: self.payload }
    }
}

impl QuadrantEncoding for StandardQuad2 {
    const NAME: &'static str = "standard";
    const STORED_BYTES: usize = 16;
    type Bytes = [u8; 16];

    fn supported_level(_dim: Dim) -> u8 {
        STANDARD_MAX_LEVEL
    }

    fn encode(cfg: &TreeConfig, q: Quadrant) -> Result<Self, Error> {
        check_cfg(cfg, Dim::D2)?;
        Ok(StandardQuad2 { x: q.x(), y: q.y(), level: q.level(), pad: [0; 3], payload: 0 })
    }

    fn decode(self, cfg: &TreeConfig) -> Result<Quadrant, Error> {
        check_cfg(cfg, Dim::D2)?;
        Quadrant::new(cfg, [self.x, self.y, 0], self.level)
    }

    fn from_morton(cfg: &TreeConfig, index: MortonIndex, level: u8) -> Result<Self, Error> {
        check_cfg(cfg, Dim::D2)?;
        cfg.validate_level(level)?;
        if index >> (2 * level as u32) != 0 {
            return Err(Error::IndexOutOfRange);
        }
        let mut x = 0u32;
        let mut y = 0u32;
        for i in 0..level as u32 {
            let extract = 1u128 << (2 * i);
            x |= ((index & extract) >> i) as u32;
            y |= ((index & (extract << 1)) >> (i + 1)) as u32;
        }
        let up = cfg.max_level() - level;
        Ok(StandardQuad2 { x: x << up, y: y << up, level, pad: [0; 3], payload: 0 })
    }

    #[inline]
    fn to_morton(self, cfg: &TreeConfig) -> MortonIndex {
        self.oracle().to_morton(cfg)
    }

    #[inline]
    fn child(self, cfg: &TreeConfig, c: ChildId) -> Result<Self, Error> {
        if self.level == cfg.max_level() {
            return Err(Error::AtMaxLevel);
        }
        let shift = 1u32 << (cfg.max_level() - (self.level + 1));
        let c = c.index();
        Ok(StandardQuad2 {
            x: if c & 0b01 != 0 { self.x | shift } else { self.x },
            y: if c & 0b10 != 0 { self.y | shift } else { self.y },
            level: self.level + 1,
            pad: [0; 3],
            payload: self.payload,
        })
    }

    #[inline]
    fn parent(self, cfg: &TreeConfig) -> Result<Self, Error> {
        self.oracle().parent(cfg).map(|q| self.rebuild(q))
    }

    #[inline]
    fn sibling(self, cfg: &TreeConfig, s: ChildId) -> Result<Self, Error> {
        if self.level == 0 {
            return Err(Error::IsRoot);
        }
        let shift = 1u32 << (cfg.max_level() - self.level);
        let s = s.index();
        Ok(StandardQuad2 {
            x: if s & 0b01 != 0 { self.x | shift } else { self.x & !shift },
            y: if s & 0b10 != 0 { self.y | shift } else { self.y & !shift },
            level: self.level,
            pad: [0; 3],
            payload: self.payload,
        })
    }

    #[inline]
    fn child_id(self, cfg: &TreeConfig) -> Result<ChildId, Error> {
        self.oracle().child_id(cfg)
    }

    #[inline]
    fn successor(self, cfg: &TreeConfig) -> Result<Self, Error> {
        self.oracle().successor(cfg).map(|q| self.rebuild(q))
    }

    #[inline]
    fn face_neighbor(self, cfg: &TreeConfig, f: FaceIndex) -> Option<Self> {
        self.oracle().face_neighbor(cfg, f).map(|q| self.rebuild(q))
    }

    #[inline]
    fn tree_boundaries(self, cfg: &TreeConfig) -> BoundaryReport {
        self.oracle().tree_boundaries(cfg)
    }

    #[inline]
    fn ancestor(self, cfg: &TreeConfig, level: u8) -> Result<Self, Error> {
        self.oracle().ancestor(cfg, level).map(|q| self.rebuild(q))
    }

    #[inline]
    fn descendant(self, cfg: &TreeConfig, level: u8, end: DescendantEnd) -> Result<Self, Error> {
        self.oracle().descendant(cfg, level, end).map(|q| self.rebuild(q))
    }

    #[inline]
    fn compare(self, cfg: &TreeConfig, other: Self) -> Ordering {
        self.oracle().compare(cfg, &other.oracle())
    }

    #[inline]
    fn is_ancestor(self, cfg: &TreeConfig, other: Self) -> bool {
        self.oracle().is_ancestor(cfg, &other.oracle())
    }

    fn to_bytes(self) -> [u8; 16] {
        let mut out = [0u8; 16];
        out[0..4].copy_from_slice(&self.x.to_le_bytes());
        out[4..8].copy_from_slice(&self.y.to_le_bytes());
        out[8] = self.level;
        out[12..16].copy_from_slice(&self.payload.to_le_bytes());
        out
    }

    fn from_bytes(cfg: &TreeConfig, bytes: [u8; 16]) -> Result<Self, Error> {
        check_cfg(cfg, Dim::D2)?;
        if bytes[9..12] != [0; 3] {
            return Err(Error::InvalidEncoding);
        }
        let word = |i: usize| u32::from_le_bytes([bytes[i], bytes[i + 1], bytes[i + 2], bytes[i + 3]]);
        let (x, y, level) = (word(0), word(4), bytes[8]);
        Quadrant::new(cfg, [x, y, 0], level)?;
        Ok(StandardQuad2 { x, y, level, pad: [0; 3], payload: word(12) })
    }

    #[inline]
    fn sink_word(self) -> u64 {
        (self.x as u64) ^ ((self.y as u64) << 28) ^ ((self.level as u64) << 56)
    }
}
