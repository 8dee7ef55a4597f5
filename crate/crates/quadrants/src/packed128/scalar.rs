//! Portable kernels for the lane encoding. These define the semantics the
//! vector kernels must reproduce bit for bit. Guards (root, maximum level,
//! index range) run in the dispatcher, not here.

use super::PackedQuad;
use crate::config::TreeConfig;
use crate::quadrant::{BoundaryReport, ChildId, MortonIndex};

pub(crate) fn from_morton(cfg: &TreeConfig, index: MortonIndex, level: u8) -> PackedQuad {
    let d = cfg.dim().count();
    let mut lanes = [0u32; 4];
    for i in 0..level as u32 {
        for axis in 0..d {
            lanes[axis as usize] |= (((index >> (d * i + axis)) & 1) as u32) << i;
        }
    }
    let up = cfg.max_level() - level;
    for lane in lanes[..d as usize].iter_mut() {
        *lane <<= up;
    }
    lanes[3] = level as u32;
    PackedQuad { lanes }
}

#[inline]
pub(crate) fn child(cfg: &TreeConfig, q: PackedQuad, c: ChildId) -> PackedQuad {
    let level = q.lanes[3] as u8;
    let shift = 1u32 << (cfg.max_level() - level - 1);
    let mut lanes = q.lanes;
    for axis in 0..cfg.dim().count() {
        lanes[axis as usize] |= c.axis_bit(axis) * shift;
    }
    lanes[3] += 1;
    PackedQuad { lanes }
}

#[inline]
pub(crate) fn parent(cfg: &TreeConfig, q: PackedQuad) -> PackedQuad {
    let level = q.lanes[3] as u8;
    let len = 1u32 << (cfg.max_level() - level);
    let mut lanes = q.lanes;
    for lane in lanes[..3].iter_mut() {
        *lane &= !len;
    }
    lanes[3] -= 1;
    PackedQuad { lanes }
}

#[inline]
pub(crate) fn tree_boundaries(cfg: &TreeConfig, q: PackedQuad) -> BoundaryReport {
    q.oracle().tree_boundaries(cfg)
}
