use crate::error::Error;

/// Spatial dimension of the refinement tree.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Dim {
    D2,
    D3,
}

impl Dim {
    /// Number of spatial axes.
    #[inline]
    pub const fn count(self) -> u32 {
        match self {
            Dim::D2 => 2,
            Dim::D3 => 3,
        }
    }

    /// Children per refined quadrant: 2^d.
    #[inline]
    pub const fn children(self) -> u8 {
        1 << self.count()
    }

    /// Faces per quadrant: 2d.
    #[inline]
    pub const fn faces(self) -> u8 {
        2 * self.count() as u8
    }
}

/// Largest maximum level any tree in this crate can be configured with.
pub const MAX_TREE_LEVEL: u8 = 30;

/// Tree geometry: dimension d and maximum refinement level L.
///
/// Anchor coordinates live on the integer lattice [0, 2^L)^d; a quadrant of
/// level l spans 2^(L-l) lattice units per axis, so its anchor is a multiple
/// of that length.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct TreeConfig {
    dim: Dim,
    max_level: u8,
}

impl TreeConfig {
    pub const fn new(dim: Dim, max_level: u8) -> Result<Self, Error> {
        if max_level == 0 || max_level > MAX_TREE_LEVEL {
            return Err(Error::InvalidMaxLevel(max_level));
        }
        Ok(TreeConfig { dim, max_level })
    }

    /// The deepest tree all three encodings can hold at once: L = 18 in 3D
    /// (54 interleaved bits), L = 28 in 2D (56 bits).
    pub const fn cross_encoding(dim: Dim) -> Self {
        match dim {
            Dim::D2 => TreeConfig { dim, max_level: 28 },
            Dim::D3 => TreeConfig { dim, max_level: 18 },
        }
    }

    #[inline]
    pub const fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub const fn max_level(&self) -> u8 {
        self.max_level
    }

    /// Side length of the root domain: 2^L lattice units.
    #[inline]
    pub const fn root_len(&self) -> u32 {
        1 << self.max_level
    }

    /// Side length of a level-`level` quadrant: 2^(L-level) lattice units.
    #[inline]
    pub const fn quadrant_len(&self, level: u8) -> u32 {
        1 << (self.max_level - level)
    }

    #[inline]
    pub const fn validate_level(&self, level: u8) -> Result<(), Error> {
        if level > self.max_level {
            return Err(Error::LevelOutOfRange { level, max_level: self.max_level });
        }
        Ok(())
    }
}
