//! Four-lane 128-bit encoding: x, y, z and level as 32-bit lanes.
//!
//! The scalar kernels in [`scalar`] define the semantics. On x86_64 with
//! AVX2, `child`, `parent`, `from_morton` and `tree_boundaries` dispatch to
//! lane-parallel kernels in [`vector`] that produce bit-identical values;
//! [`force_scalar`] pins the scalar path for differential runs and timing.

use core::cmp::Ordering;
use core::sync::atomic::{AtomicBool, AtomicU8, Ordering::Relaxed};

use crate::config::{Dim, TreeConfig, MAX_TREE_LEVEL};
use crate::encoding::QuadrantEncoding;
use crate::error::Error;
use crate::quadrant::{BoundaryReport, ChildId, DescendantEnd, FaceIndex, MortonIndex, Quadrant};

pub(crate) mod scalar;
#[cfg(target_arch = "x86_64")]
pub(crate) mod vector;

static FORCE_SCALAR: AtomicBool = AtomicBool::new(false);

// 0 = unprobed, 1 = unavailable, 2 = available
static VECTOR_PROBE: AtomicU8 = AtomicU8::new(0);

/// Pins every dispatched operation to the scalar kernels. Process-global, so
/// timing runs see one consistent path.
pub fn force_scalar(enabled: bool) {
    FORCE_SCALAR.store(enabled, Relaxed);
}

pub fn scalar_forced() -> bool {
    FORCE_SCALAR.load(Relaxed)
}

/// True when the running CPU and OS support the vector kernels.
pub fn vector_path_available() -> bool {
    match VECTOR_PROBE.load(Relaxed) {
        1 => false,
        2 => true,
        _ => {
            let ok = probe_vector();
            VECTOR_PROBE.store(if ok { 2 } else { 1 }, Relaxed);
            ok
        }
    }
}

/// True when dispatched operations currently take the vector path.
pub fn vector_path_active() -> bool {
    !scalar_forced() && vector_path_available()
}

#[cfg(target_arch = "x86_64")]
fn probe_vector() -> bool {
    use core::arch::x86_64::{__cpuid, __cpuid_count, _xgetbv};

    #[target_feature(enable = "xsave")]
    unsafe fn xcr0() -> u64 {
        _xgetbv(0)
    }

    // cpuid and leaf 7 exist on every chip that could report AVX2
    let leaf1 = __cpuid(1);
    let osxsave = leaf1.ecx & (1 << 27) != 0;
    let avx = leaf1.ecx & (1 << 28) != 0;
    if !osxsave || !avx {
        return false;
    }
    // the OS must save/restore XMM and YMM state
    if unsafe { xcr0() } & 0x6 != 0x6 {
        return false;
    }
    __cpuid_count(7, 0).ebx & (1 << 5) != 0
}

#[cfg(not(target_arch = "x86_64"))]
fn probe_vector() -> bool {
    false
}

/// Quadrant as four 32-bit lanes: lane 0 = x, 1 = y, 2 = z, 3 = level. The
/// 16-byte alignment satisfies vector loads by construction. In 2D lane 2 is
/// always zero.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
#[repr(C, align(16))]
pub struct PackedQuad {
    pub(crate) lanes: [u32; 4],
}

impl PackedQuad {
    /// The stored lanes in x, y, z, level order.
    #[inline]
    pub const fn lanes(self) -> [u32; 4] {
        self.lanes
    }

    #[inline]
    fn oracle(self) -> Quadrant {
        Quadrant::from_parts([self.lanes[0], self.lanes[1], self.lanes[2]], self.lanes[3] as u8)
    }

    #[inline]
    fn from_oracle(q: Quadrant) -> Self {
        PackedQuad { lanes: [q.x(), q.y(), q.z(), q.level() as u32] }
    }

    #[inline]
    const fn level_of(self) -> u8 {
        self.lanes[3] as u8
    }
}

impl QuadrantEncoding for PackedQuad {
    const NAME: &'static str = "packed128";
    const STORED_BYTES: usize = 16;
    type Bytes = [u8; 16];

    fn supported_level(_dim: Dim) -> u8 {
        MAX_TREE_LEVEL
    }

    fn encode(_cfg: &TreeConfig, q: Quadrant) -> Result<Self, Error> {
        Ok(Self::from_oracle(q))
    }

    fn decode(self, cfg: &TreeConfig) -> Result<Quadrant, Error> {
        for lane in self.lanes {
            if lane & 1 << 31 != 0 {
                return Err(Error::InvalidEncoding);
            }
        }
        if self.lanes[3] > MAX_TREE_LEVEL as u32 {
            return Err(Error::InvalidEncoding);
        }
        Quadrant::new(cfg, [self.lanes[0], self.lanes[1], self.lanes[2]], self.lanes[3] as u8)
    }

    fn from_morton(cfg: &TreeConfig, index: MortonIndex, level: u8) -> Result<Self, Error> {
        cfg.validate_level(level)?;
        let d = cfg.dim().count();
        if index >> (d * level as u32) != 0 {
            return Err(Error::IndexOutOfRange);
        }
        #[cfg(target_arch = "x86_64")]
        // the vector kernel tracks per-coordinate bits in 64-bit lanes
        if vector_path_active() && d * level as u32 <= 63 {
            return Ok(unsafe { vector::from_morton(cfg, index as u64, level) });
        }
        Ok(scalar::from_morton(cfg, index, level))
    }

    #[inline]
    fn to_morton(self, cfg: &TreeConfig) -> MortonIndex {
        self.oracle().to_morton(cfg)
    }

    #[inline]
    fn child(self, cfg: &TreeConfig, c: ChildId) -> Result<Self, Error> {
        if self.level_of() == cfg.max_level() {
            return Err(Error::AtMaxLevel);
        }
        #[cfg(target_arch = "x86_64")]
        if vector_path_active() {
            return Ok(unsafe { vector::child(cfg, self, c) });
        }
        Ok(scalar::child(cfg, self, c))
    }

    #[inline]
    fn parent(self, cfg: &TreeConfig) -> Result<Self, Error> {
        if self.level_of() == 0 {
            return Err(Error::IsRoot);
        }
        #[cfg(target_arch = "x86_64")]
        if vector_path_active() {
            return Ok(unsafe { vector::parent(cfg, self) });
        }
        Ok(scalar::parent(cfg, self))
    }

    #[inline]
    fn sibling(self, cfg: &TreeConfig, s: ChildId) -> Result<Self, Error> {
        self.oracle().sibling(cfg, s).map(Self::from_oracle)
    }

    #[inline]
    fn child_id(self, cfg: &TreeConfig) -> Result<ChildId, Error> {
        self.oracle().child_id(cfg)
    }

    #[inline]
    fn successor(self, cfg: &TreeConfig) -> Result<Self, Error> {
        self.oracle().successor(cfg).map(Self::from_oracle)
    }

    #[inline]
    fn face_neighbor(self, cfg: &TreeConfig, f: FaceIndex) -> Option<Self> {
        self.oracle().face_neighbor(cfg, f).map(Self::from_oracle)
    }

    #[inline]
    fn tree_boundaries(self, cfg: &TreeConfig) -> BoundaryReport {
        #[cfg(target_arch = "x86_64")]
        if vector_path_active() {
            return unsafe { vector::tree_boundaries(cfg, self) };
        }
        scalar::tree_boundaries(cfg, self)
    }

    #[inline]
    fn ancestor(self, cfg: &TreeConfig, level: u8) -> Result<Self, Error> {
        self.oracle().ancestor(cfg, level).map(Self::from_oracle)
    }

    #[inline]
    fn descendant(self, cfg: &TreeConfig, level: u8, end: DescendantEnd) -> Result<Self, Error> {
        self.oracle().descendant(cfg, level, end).map(Self::from_oracle)
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
        for (chunk, lane) in out.chunks_exact_mut(4).zip(self.lanes) {
            chunk.copy_from_slice(&lane.to_le_bytes());
        }
        out
    }

    fn from_bytes(cfg: &TreeConfig, bytes: [u8; 16]) -> Result<Self, Error> {
        let mut lanes = [0u32; 4];
        for (lane, chunk) in lanes.iter_mut().zip(bytes.chunks_exact(4)) {
            *lane = u32::from_le_bytes(chunk.try_into().unwrap());
        }
        let q = PackedQuad { lanes };
        q.decode(cfg)?;
        Ok(q)
    }

    #[inline]
    fn sink_word(self) -> u64 {
        (self.lanes[0] as u64)
            ^ ((self.lanes[1] as u64) << 21)
            ^ ((self.lanes[2] as u64) << 42)
            ^ ((self.lanes[3] as u64) << 58)
    }
}
