//! Tight-loop throughput measurement: one (representation, operation) pair
//! at a time over a materialized complete-tree workload.
//!
//! The timed loop folds each raw result word into a local sink that is
//! black-boxed afterwards, so the calls cannot be dead-code eliminated and
//! nothing heavier than the operation sits inside the loop. The reported
//! checksum is computed in a second, untimed pass from decoded results, so
//! it is identical across representations for the same workload.

use std::hint::black_box;
use std::time::Instant;

use quadrants::conformance::CompleteTree;
use quadrants::{
    BoundaryReport, ChildId, FaceIndex, MortonIndex, Quadrant, QuadrantEncoding, TreeConfig,
};

/// The seven measured operations.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum BenchOp {
    Morton,
    Child,
    Parent,
    Sibling,
    Fneigh,
    Tbound,
    Successor,
}

impl BenchOp {
    pub const ALL: [BenchOp; 7] = [
        BenchOp::Morton,
        BenchOp::Child,
        BenchOp::Parent,
        BenchOp::Sibling,
        BenchOp::Fneigh,
        BenchOp::Tbound,
        BenchOp::Successor,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            BenchOp::Morton => "morton",
            BenchOp::Child => "child",
            BenchOp::Parent => "parent",
            BenchOp::Sibling => "sibling",
            BenchOp::Fneigh => "fneigh",
            BenchOp::Tbound => "tbound",
            BenchOp::Successor => "successor",
        }
    }
}

/// One output row; everything but the timing fields is deterministic.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BenchRecord {
    pub repr: &'static str,
    pub op: &'static str,
    pub dim: u32,
    pub kmax: u8,
    pub count: u64,
    pub reps: u32,
    pub ns_per_call_min: f64,
    pub ns_per_call_median: f64,
    pub checksum: u64,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str =
        "repr,op,dim,kmax,count,reps,ns_per_call_min,ns_per_call_median,checksum";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.3},{:.3},{:#018x}",
            self.repr,
            self.op,
            self.dim,
            self.kmax,
            self.count,
            self.reps,
            self.ns_per_call_min,
            self.ns_per_call_median,
            self.checksum
        )
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

// Digest of a decoded result; shared by all representations so checksums
// are comparable across them.
fn digest_quadrant(q: &Quadrant) -> u64 {
    let c = q.coords();
    splitmix((c[0] as u64) ^ (c[1] as u64) << 21 ^ (c[2] as u64) << 42 ^ (q.level() as u64) << 56)
}

// Fixed digest for an Outside face-neighbor result.
const OUTSIDE_DIGEST: u64 = 0x4f55_5453_4944_4521;

fn digest_boundary(r: &BoundaryReport) -> u64 {
    let packed = r
        .faces()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (axis, &code)| acc | (((code + 2) as u64) << (8 * axis)));
    splitmix(packed)
}

// Cheap raw fold of a boundary report for the timed sink.
#[inline]
fn boundary_word(r: &BoundaryReport) -> u64 {
    r.faces()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (axis, &code)| acc ^ ((code as u32 as u64) << (8 * axis)))
}

// Times `f` over `data` once per repetition and reports (min, median)
// nanoseconds per call. With threads > 1 the data splits into contiguous
// chunks, each timed independently on its own thread; the slowest chunk's
// per-call time stands for the repetition.
fn measure<T: Sync>(
    data: &[T],
    reps: u32,
    threads: usize,
    f: impl Fn(&T) -> u64 + Sync,
) -> (f64, f64) {
    let f = &f;
    let mut per_call: Vec<f64> = Vec::with_capacity(reps as usize);
    for _ in 0..reps {
        let ns = if threads == 1 {
            let start = Instant::now();
            let mut sink = 0u64;
            for item in data {
                sink = sink.wrapping_add(f(item));
            }
            black_box(sink);
            start.elapsed().as_nanos() as f64 / data.len() as f64
        } else {
            let chunk = data.len().div_ceil(threads);
            std::thread::scope(|s| {
                let handles: Vec<_> = data
                    .chunks(chunk)
                    .map(|part| {
                        s.spawn(move || {
                            let start = Instant::now();
                            let mut sink = 0u64;
                            for item in part {
                                sink = sink.wrapping_add(f(item));
                            }
                            black_box(sink);
                            start.elapsed().as_nanos() as f64 / part.len() as f64
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().unwrap())
                    .fold(0.0f64, f64::max)
            })
        };
        per_call.push(ns);
    }
    per_call.sort_by(f64::total_cmp);
    let n = per_call.len();
    let median = if n % 2 == 1 {
        per_call[n / 2]
    } else {
        (per_call[n / 2 - 1] + per_call[n / 2]) / 2.0
    };
    (per_call[0], median)
}

/// Builds the workload for `op`, times it, and checksums the results.
pub fn run<E: QuadrantEncoding + Sync>(
    cfg: &TreeConfig,
    k_max: u8,
    op: BenchOp,
    reps: u32,
    threads: usize,
) -> Result<BenchRecord, String> {
    if reps == 0 {
        return Err("reps must be at least 1".into());
    }
    if threads == 0 {
        return Err("threads must be at least 1".into());
    }
    let supported = E::supported_level(cfg.dim());
    if cfg.max_level() > supported {
        return Err(format!("{} holds levels up to {supported} here", E::NAME));
    }

    let mut base: Vec<E> = Vec::new();
    let mut decoded: Vec<Quadrant> = Vec::new();
    for w in CompleteTree::new(cfg, k_max).map_err(|e| e.to_string())? {
        base.push(E::encode(cfg, w).map_err(|e| e.to_string())?);
        decoded.push(w);
    }

    let (count, min, median, checksum) = match op {
        BenchOp::Morton => {
            let pairs: Vec<(MortonIndex, u8)> =
                decoded.iter().map(|w| (w.to_morton(cfg), w.level())).collect();
            let (min, median) = measure(&pairs, reps, threads, |&(i, l)| {
                E::from_morton(cfg, i, l).unwrap().sink_word()
            });
            let checksum = fold(pairs.iter().map(|&(i, l)| {
                digest_quadrant(&E::from_morton(cfg, i, l).unwrap().decode(cfg).unwrap())
            }));
            (pairs.len(), min, median, checksum)
        }
        BenchOp::Child => {
            let ids: Vec<ChildId> = cfg.child_ids().collect();
            let items: Vec<(E, ChildId)> = base
                .iter()
                .zip(&decoded)
                .enumerate()
                .filter(|(_, (_, w))| w.level() < cfg.max_level())
                .map(|(i, (&e, _))| (e, ids[i % ids.len()]))
                .collect();
            guard_nonempty(&items, op)?;
            let (min, median) =
                measure(&items, reps, threads, |&(e, c)| e.child(cfg, c).unwrap().sink_word());
            let checksum = fold(items.iter().map(|&(e, c)| {
                digest_quadrant(&e.child(cfg, c).unwrap().decode(cfg).unwrap())
            }));
            (items.len(), min, median, checksum)
        }
        BenchOp::Parent => {
            let items: Vec<E> = base
                .iter()
                .zip(&decoded)
                .filter(|(_, w)| w.level() > 0)
                .map(|(&e, _)| e)
                .collect();
            guard_nonempty(&items, op)?;
            let (min, median) =
                measure(&items, reps, threads, |&e| e.parent(cfg).unwrap().sink_word());
            let checksum = fold(
                items.iter().map(|&e| digest_quadrant(&e.parent(cfg).unwrap().decode(cfg).unwrap())),
            );
            (items.len(), min, median, checksum)
        }
        BenchOp::Sibling => {
            let ids: Vec<ChildId> = cfg.child_ids().collect();
            let items: Vec<(E, ChildId)> = base
                .iter()
                .zip(&decoded)
                .enumerate()
                .filter(|(_, (_, w))| w.level() > 0)
                .map(|(i, (&e, _))| (e, ids[i % ids.len()]))
                .collect();
            guard_nonempty(&items, op)?;
            let (min, median) =
                measure(&items, reps, threads, |&(e, s)| e.sibling(cfg, s).unwrap().sink_word());
            let checksum = fold(items.iter().map(|&(e, s)| {
                digest_quadrant(&e.sibling(cfg, s).unwrap().decode(cfg).unwrap())
            }));
            (items.len(), min, median, checksum)
        }
        BenchOp::Fneigh => {
            let faces: Vec<FaceIndex> = cfg.face_indices().collect();
            let items: Vec<(E, FaceIndex)> = base
                .iter()
                .enumerate()
                .map(|(i, &e)| (e, faces[i % faces.len()]))
                .collect();
            guard_nonempty(&items, op)?;
            let (min, median) = measure(&items, reps, threads, |&(e, f)| {
                e.face_neighbor(cfg, f).map_or(0x5a5a, |n| n.sink_word())
            });
            let checksum = fold(items.iter().map(|&(e, f)| {
                e.face_neighbor(cfg, f)
                    .map_or(OUTSIDE_DIGEST, |n| digest_quadrant(&n.decode(cfg).unwrap()))
            }));
            (items.len(), min, median, checksum)
        }
        BenchOp::Tbound => {
            guard_nonempty(&base, op)?;
            let (min, median) =
                measure(&base, reps, threads, |&e| boundary_word(&e.tree_boundaries(cfg)));
            let checksum = fold(base.iter().map(|&e| digest_boundary(&e.tree_boundaries(cfg))));
            (base.len(), min, median, checksum)
        }
        BenchOp::Successor => {
            let items: Vec<E> = base
                .iter()
                .zip(&decoded)
                .filter(|(_, w)| w.successor(cfg).is_ok())
                .map(|(&e, _)| e)
                .collect();
            guard_nonempty(&items, op)?;
            let (min, median) =
                measure(&items, reps, threads, |&e| e.successor(cfg).unwrap().sink_word());
            let checksum = fold(items.iter().map(|&e| {
                digest_quadrant(&e.successor(cfg).unwrap().decode(cfg).unwrap())
            }));
            (items.len(), min, median, checksum)
        }
    };

    Ok(BenchRecord {
        repr: E::NAME,
        op: op.name(),
        dim: cfg.dim().count(),
        kmax: k_max,
        count: count as u64,
        reps,
        ns_per_call_min: min,
        ns_per_call_median: median,
        checksum,
    })
}

fn fold(digests: impl Iterator<Item = u64>) -> u64 {
    digests.fold(0u64, u64::wrapping_add)
}

fn guard_nonempty<T>(items: &[T], op: BenchOp) -> Result<(), String> {
    if items.is_empty() {
        return Err(format!("empty workload for {}", op.name()));
    }
    Ok(())
}
