use core::fmt;

/// Errors reported by quadrant construction and the contract operations.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Error {
    /// Maximum level outside `1..=MAX_TREE_LEVEL`.
    InvalidMaxLevel(u8),
    /// Level above the configured maximum.
    LevelOutOfRange { level: u8, max_level: u8 },
    /// Morton index too large for the given level.
    IndexOutOfRange,
    /// Child position not below 2^d.
    InvalidChildId(u8),
    /// Face index not below 2d.
    InvalidFace(u8),
    /// The root has no parent, sibling or child position.
    IsRoot,
    /// A quadrant at the maximum level cannot be refined.
    AtMaxLevel,
    /// No successor: the quadrant is the last of its level.
    LastOfLevel,
    /// The configured tree is deeper than this encoding can hold.
    LevelUnsupported { max_level: u8, supported: u8 },
    /// Coordinate with set bits below the level's grid spacing.
    MisalignedCoordinate,
    /// Coordinate outside the root domain.
    CoordinateOutOfRange,
    /// Target level incompatible with the operation and source level.
    InvalidTargetLevel { level: u8, target: u8 },
    /// Stored bits violate the encoding's invariants.
    InvalidEncoding,
    /// Encoding used with a tree of the wrong dimension.
    WrongDimension,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::InvalidMaxLevel(l) => write!(f, "invalid maximum level {l}"),
            Error::LevelOutOfRange { level, max_level } => {
                write!(f, "level {level} above maximum {max_level}")
            }
            Error::IndexOutOfRange => write!(f, "morton index out of range for level"),
            Error::InvalidChildId(c) => write!(f, "child position {c} out of range"),
            Error::InvalidFace(i) => write!(f, "face index {i} out of range"),
            Error::IsRoot => write!(f, "operation undefined on the root"),
            Error::AtMaxLevel => write!(f, "quadrant already at maximum level"),
            Error::LastOfLevel => write!(f, "last quadrant of its level has no successor"),
            Error::LevelUnsupported { max_level, supported } => {
                write!(f, "tree level {max_level} above encoding capacity {supported}")
            }
            Error::MisalignedCoordinate => write!(f, "coordinate misaligned for level"),
            Error::CoordinateOutOfRange => write!(f, "coordinate outside the root domain"),
            Error::InvalidTargetLevel { level, target } => {
                write!(f, "target level {target} invalid from level {level}")
            }
            Error::InvalidEncoding => write!(f, "stored bits violate encoding invariants"),
            Error::WrongDimension => write!(f, "encoding does not match the tree dimension"),
        }
    }
}

impl core::error::Error for Error {}
