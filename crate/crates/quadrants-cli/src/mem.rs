//! Uniform-forest memory footprints: count times stored size, with a real
//! array build below a safety cap so the numbers come from live data.

use std::hint::black_box;

use quadrants::{QuadrantEncoding, TreeConfig};

/// Above this many elements the report only does arithmetic by default.
pub const BUILD_CAP: u128 = 1 << 27;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum BuildMode {
    Auto,
    AccountOnly,
    ForceBuild,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct MemoryReport {
    pub repr: &'static str,
    pub dim: u32,
    pub level: u8,
    pub count: u128,
    pub bytes_per_quadrant: usize,
    pub total_bytes: u128,
    pub built: bool,
}

/// Sizes a uniform forest of one refinement level: 2^(d*level) quadrants,
/// built by repeated from_morton calls when small enough.
pub fn memory_report<E: QuadrantEncoding>(
    cfg: &TreeConfig,
    level: u8,
    mode: BuildMode,
) -> Result<MemoryReport, String> {
    cfg.validate_level(level).map_err(|e| e.to_string())?;
    let d = cfg.dim().count();
    let count = 1u128 << (d * level as u32);
    let build = match mode {
        BuildMode::AccountOnly => false,
        BuildMode::ForceBuild => true,
        BuildMode::Auto => count <= BUILD_CAP,
    };
    if build {
        let mut arr: Vec<E> = Vec::with_capacity(count as usize);
        for i in 0..count {
            arr.push(E::from_morton(cfg, i, level).map_err(|e| e.to_string())?);
        }
        assert_eq!(arr.len() as u128, count);
        assert_eq!(core::mem::size_of::<E>(), E::STORED_BYTES);
        black_box(&arr);
    }
    Ok(MemoryReport {
        repr: E::NAME,
        dim: d,
        level,
        count,
        bytes_per_quadrant: E::STORED_BYTES,
        total_bytes: count * E::STORED_BYTES as u128,
        built: build,
    })
}
