//! AVX2 lane-parallel kernels. Bit-identical twins of the scalar kernels;
//! callers check [`super::vector_path_available`] first.

use core::arch::x86_64::*;

use super::PackedQuad;
use crate::config::TreeConfig;
use crate::quadrant::{BoundaryReport, ChildId};

#[inline]
unsafe fn load(q: PackedQuad) -> __m128i {
    // PackedQuad is 16-byte aligned by construction
    _mm_load_si128(q.lanes.as_ptr().cast())
}

#[inline]
unsafe fn store(v: __m128i) -> PackedQuad {
    let mut out = PackedQuad { lanes: [0; 4] };
    _mm_store_si128(out.lanes.as_mut_ptr().cast(), v);
    out
}

#[target_feature(enable = "avx2")]
pub(crate) unsafe fn child(cfg: &TreeConfig, q: PackedQuad, c: ChildId) -> PackedQuad {
    let level = q.lanes[3] as u8;
    // per-lane masks pick the direction bit of c for x, y and z
    let ext = _mm_and_si128(_mm_set_epi32(0, 4, 2, 1), _mm_set1_epi32(c.index() as i32));
    let ins = _mm_srlv_epi32(ext, _mm_set_epi32(0, 2, 1, 0));
    let shifted = _mm_sll_epi32(ins, _mm_cvtsi32_si128((cfg.max_level() - level - 1) as i32));
    let r = _mm_or_si128(load(q), shifted);
    store(_mm_insert_epi32::<3>(r, level as i32 + 1))
}

#[target_feature(enable = "avx2")]
pub(crate) unsafe fn parent(cfg: &TreeConfig, q: PackedQuad) -> PackedQuad {
    let level = q.lanes[3] as u8;
    let len = 1i32 << (cfg.max_level() - level);
    // blank the child bit in every coordinate lane, keep the level lane
    let r = _mm_and_si128(load(q), _mm_set_epi32(-1, !len, !len, !len));
    store(_mm_insert_epi32::<3>(r, level as i32 - 1))
}

/// Defined for d * level <= 63: intermediate per-coordinate positions are
/// tracked in two 64-bit lanes (x low, y high); z stays scalar rather than
/// widening to 256-bit registers.
#[target_feature(enable = "avx2")]
pub(crate) unsafe fn from_morton(cfg: &TreeConfig, index: u64, level: u8) -> PackedQuad {
    let d = cfg.dim().count() as i64;
    let idx = _mm_set1_epi64x(index as i64);
    let ones = _mm_set1_epi64x(1);
    let mut acc = _mm_setzero_si128();
    let mut z = 0u64;
    for i in 0..level as i64 {
        let bit = d * i; // index bit holding coordinate bit i of x
        let down = (d - 1) * i; // distance back to coordinate bit i
        let ext = _mm_sllv_epi64(ones, _mm_set_epi64x(bit + 1, bit));
        let crd = _mm_srlv_epi64(_mm_and_si128(idx, ext), _mm_set_epi64x(down + 1, down));
        acc = _mm_or_si128(acc, crd);
        if d == 3 {
            z |= (index & 1 << (bit + 2)) >> (down + 2);
        }
    }
    // repack the 64-bit accumulators into 32-bit lanes [x, y, 0, 0]
    let packed = _mm_shuffle_epi32::<0b11_11_10_00>(acc);
    let packed = _mm_insert_epi32::<2>(packed, z as i32);
    let packed = _mm_sll_epi32(packed, _mm_cvtsi32_si128((cfg.max_level() - level) as i32));
    store(_mm_insert_epi32::<3>(packed, level as i32))
}

#[target_feature(enable = "avx2")]
pub(crate) unsafe fn tree_boundaries(cfg: &TreeConfig, q: PackedQuad) -> BoundaryReport {
    let level = q.lanes[3] as u8;
    let d = cfg.dim().count() as usize;
    if level == 0 {
        let mut faces = [0i32; 3];
        for f in faces[..d].iter_mut() {
            *f = -2;
        }
        return BoundaryReport::new(cfg.dim(), faces);
    }
    let up = (cfg.root_len() - cfg.quadrant_len(level)) as i32;
    let v = load(q);
    let at_zero = _mm_cmpeq_epi32(v, _mm_setzero_si128());
    let at_up = _mm_cmpeq_epi32(v, _mm_set1_epi32(up));
    // face codes plus one, so untouched lanes land at -1 after the subtract
    let lower = _mm_and_si128(at_zero, _mm_set_epi32(0, 5, 3, 1));
    let upper = _mm_and_si128(at_up, _mm_set_epi32(0, 6, 4, 2));
    let r = _mm_sub_epi32(_mm_or_si128(lower, upper), _mm_set1_epi32(1));
    let faces = [
        _mm_extract_epi32::<0>(r),
        _mm_extract_epi32::<1>(r),
        _mm_extract_epi32::<2>(r),
    ];
    BoundaryReport::new(cfg.dim(), faces)
}
