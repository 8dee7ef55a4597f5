//! Bit spread/compact helpers shared by the compact encodings.

/// Spreads the low 21 bits of `x` to every third bit of the result.
#[inline]
pub(crate) const fn spread3(x: u32) -> u64 {
    let mut v = x as u64 & 0x1f_ffff;
    v = (v | v << 32) & 0x001f_0000_0000_ffff; // bits 20..16 and 15..0
    v = (v | v << 16) & 0x001f_0000_ff00_00ff; // groups of 8
    v = (v | v << 8) & 0x100f_00f0_0f00_f00f; // groups of 4
    v = (v | v << 4) & 0x10c3_0c30_c30c_30c3; // groups of 2
    (v | v << 2) & 0x1249_2492_4924_9249 // one bit in three
}

/// Inverse of [`spread3`]: gathers every third bit into the low 21 bits.
#[inline]
pub(crate) const fn compact3(v: u64) -> u32 {
    let mut v = v & 0x1249_2492_4924_9249;
    v = (v | v >> 2) & 0x10c3_0c30_c30c_30c3;
    v = (v | v >> 4) & 0x100f_00f0_0f00_f00f;
    v = (v | v >> 8) & 0x001f_0000_ff00_00ff;
    v = (v | v >> 16) & 0x001f_0000_0000_ffff;
    ((v | v >> 32) & 0x1f_ffff) as u32
}

/// Spreads the low 32 bits of `x` to every other bit of the result.
#[inline]
pub(crate) const fn spread2(x: u32) -> u64 {
    let mut v = x as u64;
    v = (v | v << 16) & 0x0000_ffff_0000_ffff;
    v = (v | v << 8) & 0x00ff_00ff_00ff_00ff;
    v = (v | v << 4) & 0x0f0f_0f0f_0f0f_0f0f;
    v = (v | v << 2) & 0x3333_3333_3333_3333;
    (v | v << 1) & 0x5555_5555_5555_5555 // one bit in two
}

/// Inverse of [`spread2`]: gathers every other bit into the low 32 bits.
#[inline]
pub(crate) const fn compact2(v: u64) -> u32 {
    let mut v = v & 0x5555_5555_5555_5555;
    v = (v | v >> 1) & 0x3333_3333_3333_3333;
    v = (v | v >> 2) & 0x0f0f_0f0f_0f0f_0f0f;
    v = (v | v >> 4) & 0x00ff_00ff_00ff_00ff;
    v = (v | v >> 8) & 0x0000_ffff_0000_ffff;
    (v | v >> 16) as u32
}
