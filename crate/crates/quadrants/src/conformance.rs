//! Differential harness: enumerate every quadrant of a complete tree and
//! check each encoding's operations against the reference arithmetic.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::config::{Dim, TreeConfig};
use crate::encoding::QuadrantEncoding;
use crate::error::Error;
use crate::packed128;
use crate::quadrant::{DescendantEnd, Quadrant};

// Above this many quadrants, pair operations switch from all-pairs to
// adjacent-pair spot checks.
const PAIR_LIMIT: usize = 2048;

/// Number of quadrants in a complete tree: all levels 0..=k_max.
pub fn complete_tree_count(dim: Dim, k_max: u8) -> u128 {
    let d = dim.count();
    ((1u128 << (d * (k_max as u32 + 1))) - 1) / ((1u128 << d) - 1)
}

/// Every quadrant of every level 0..=k_max, in curve order (parents first).
pub struct CompleteTree<'a> {
    cfg: &'a TreeConfig,
    k_max: u8,
    stack: Vec<Quadrant>,
}

impl<'a> CompleteTree<'a> {
    pub fn new(cfg: &'a TreeConfig, k_max: u8) -> Result<Self, Error> {
        cfg.validate_level(k_max)?;
        let mut stack = Vec::new();
        stack.push(Quadrant::root());
        Ok(CompleteTree { cfg, k_max, stack })
    }
}

impl Iterator for CompleteTree<'_> {
    type Item = Quadrant;

    fn next(&mut self) -> Option<Quadrant> {
        let q = self.stack.pop()?;
        if q.level() < self.k_max {
            // Reverse push so child 0 pops first.
            for c in self.cfg.child_ids().rev() {
                self.stack.push(q.child(self.cfg, c).unwrap());
            }
        }
        Some(q)
    }
}

/// Contract operations the harness exercises.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Op {
    Encode,
    Decode,
    FromMorton,
    ToMorton,
    Child,
    Parent,
    Sibling,
    ChildId,
    Successor,
    FaceNeighbor,
    TreeBoundaries,
    Ancestor,
    Descendant,
    Compare,
    IsAncestor,
    Bytes,
}

impl Op {
    pub const ALL: [Op; 16] = [
        Op::Encode,
        Op::Decode,
        Op::FromMorton,
        Op::ToMorton,
        Op::Child,
        Op::Parent,
        Op::Sibling,
        Op::ChildId,
        Op::Successor,
        Op::FaceNeighbor,
        Op::TreeBoundaries,
        Op::Ancestor,
        Op::Descendant,
        Op::Compare,
        Op::IsAncestor,
        Op::Bytes,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            Op::Encode => "encode",
            Op::Decode => "decode",
            Op::FromMorton => "from_morton",
            Op::ToMorton => "to_morton",
            Op::Child => "child",
            Op::Parent => "parent",
            Op::Sibling => "sibling",
            Op::ChildId => "child_id",
            Op::Successor => "successor",
            Op::FaceNeighbor => "face_neighbor",
            Op::TreeBoundaries => "tree_boundaries",
            Op::Ancestor => "ancestor",
            Op::Descendant => "descendant",
            Op::Compare => "compare",
            Op::IsAncestor => "is_ancestor",
            Op::Bytes => "bytes",
        }
    }
}

/// Tally for one operation.
#[derive(Clone, Debug)]
pub struct OpReport {
    pub op: Op,
    pub cases: u64,
    pub mismatches: u64,
    pub first_failure: Option<String>,
}

impl OpReport {
    fn new(op: Op) -> Self {
        OpReport { op, cases: 0, mismatches: 0, first_failure: None }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.mismatches += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }
}

/// Full differential run of one encoding over one complete tree.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub encoding: &'static str,
    pub dim: Dim,
    pub k_max: u8,
    pub quadrants: u64,
    pub ops: Vec<OpReport>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.ops.iter().all(|o| o.mismatches == 0)
    }

    pub fn total_cases(&self) -> u64 {
        self.ops.iter().map(|o| o.cases).sum()
    }
}

// Ok results must re-encode bit-exactly; errors must agree exactly.
fn outcome_matches<E: QuadrantEncoding>(
    cfg: &TreeConfig,
    oracle: &Result<Quadrant, Error>,
    got: &Result<E, Error>,
) -> bool {
    match (oracle, got) {
        (Ok(q), Ok(e)) => E::encode(cfg, *q).as_ref() == Ok(e),
        (Err(a), Err(b)) => a == b,
        _ => false,
    }
}

/// Runs every contract operation of `E` against the reference arithmetic
/// for every quadrant of the complete tree of depth `k_max`.
pub fn check_equivalence<E: QuadrantEncoding>(
    cfg: &TreeConfig,
    k_max: u8,
) -> Result<EquivalenceReport, Error> {
    let supported = E::supported_level(cfg.dim());
    if cfg.max_level() > supported {
        return Err(Error::LevelUnsupported { max_level: cfg.max_level(), supported });
    }

    let mut ops: Vec<OpReport> = Op::ALL.iter().map(|&op| OpReport::new(op)).collect();
    let [encode_t, decode_t, from_morton_t, to_morton_t, child_t, parent_t, sibling_t, child_id_t, successor_t, face_t, tbound_t, ancestor_t, descendant_t, compare_t, is_ancestor_t, bytes_t] =
        ops.as_mut_slice()
    else {
        unreachable!()
    };

    let mut items: Vec<(Quadrant, E)> = Vec::new();
    for w in CompleteTree::new(cfg, k_max)? {
        let enc = E::encode(cfg, w);
        encode_t.case(enc.is_ok(), || format!("encode {w:?} gave {enc:?}"));
        if let Ok(e) = enc {
            items.push((w, e));
        }
    }

    for &(w, e) in &items {
        let index = w.to_morton(cfg);
        let level = w.level();

        let dec = e.decode(cfg);
        decode_t.case(dec == Ok(w), || format!("decode {e:?} gave {dec:?}, want {w:?}"));

        let fm = E::from_morton(cfg, index, level);
        from_morton_t.case(fm.as_ref() == Ok(&e), || {
            format!("from_morton({index}, {level}) gave {fm:?}, want {e:?}")
        });

        let tm = e.to_morton(cfg);
        to_morton_t.case(tm == index, || format!("to_morton {w:?} gave {tm}, want {index}"));

        for c in cfg.child_ids() {
            let oracle = w.child(cfg, c);
            let got = e.child(cfg, c);
            child_t.case(outcome_matches(cfg, &oracle, &got), || {
                format!("child {} of {w:?}: oracle {oracle:?}, got {got:?}", c.index())
            });
        }

        let oracle = w.parent(cfg);
        let got = e.parent(cfg);
        parent_t.case(outcome_matches(cfg, &oracle, &got), || {
            format!("parent of {w:?}: oracle {oracle:?}, got {got:?}")
        });

        for s in cfg.child_ids() {
            let oracle = w.sibling(cfg, s);
            let got = e.sibling(cfg, s);
            sibling_t.case(outcome_matches(cfg, &oracle, &got), || {
                format!("sibling {} of {w:?}: oracle {oracle:?}, got {got:?}", s.index())
            });
        }

        let oracle = w.child_id(cfg);
        let got = e.child_id(cfg);
        child_id_t.case(oracle == got, || {
            format!("child_id of {w:?}: oracle {oracle:?}, got {got:?}")
        });

        let oracle = w.successor(cfg);
        let got = e.successor(cfg);
        successor_t.case(outcome_matches(cfg, &oracle, &got), || {
            format!("successor of {w:?}: oracle {oracle:?}, got {got:?}")
        });

        for f in cfg.face_indices() {
            let oracle = w.face_neighbor(cfg, f);
            let got = e.face_neighbor(cfg, f);
            let ok = match (&oracle, &got) {
                (Some(q), Some(n)) => E::encode(cfg, *q).as_ref() == Ok(n),
                (None, None) => true,
                _ => false,
            };
            face_t.case(ok, || {
                format!("face {} of {w:?}: oracle {oracle:?}, got {got:?}", f.index())
            });
        }

        let oracle = w.tree_boundaries(cfg);
        let got = e.tree_boundaries(cfg);
        tbound_t.case(oracle == got, || {
            format!("tree_boundaries of {w:?}: oracle {oracle:?}, got {got:?}")
        });

        for target in 0..=level {
            let oracle = w.ancestor(cfg, target);
            let got = e.ancestor(cfg, target);
            ancestor_t.case(outcome_matches(cfg, &oracle, &got), || {
                format!("ancestor {target} of {w:?}: oracle {oracle:?}, got {got:?}")
            });
        }

        for target in level..=cfg.max_level() {
            for end in [DescendantEnd::First, DescendantEnd::Last] {
                let oracle = w.descendant(cfg, target, end);
                let got = e.descendant(cfg, target, end);
                descendant_t.case(outcome_matches(cfg, &oracle, &got), || {
                    format!("descendant {target} {end:?} of {w:?}: oracle {oracle:?}, got {got:?}")
                });
            }
        }

        let bytes = e.to_bytes();
        let back = E::from_bytes(cfg, bytes);
        bytes_t.case(back.as_ref() == Ok(&e), || {
            format!("bytes round trip of {w:?} gave {back:?}")
        });
    }

    if items.len() <= PAIR_LIMIT {
        for &(wa, ea) in &items {
            for &(wb, eb) in &items {
                let oracle = wa.compare(cfg, &wb);
                let got = ea.compare(cfg, eb);
                compare_t.case(oracle == got, || {
                    format!("compare {wa:?} vs {wb:?}: oracle {oracle:?}, got {got:?}")
                });

                let oracle = wa.is_ancestor(cfg, &wb);
                let got = ea.is_ancestor(cfg, eb);
                is_ancestor_t.case(oracle == got, || {
                    format!("is_ancestor {wa:?} vs {wb:?}: oracle {oracle}, got {got}")
                });
            }
        }
    } else {
        // Enumeration comes back in curve order, so adjacent pairs pin the
        // full sort; ancestor pairs come from the ancestor op itself.
        for pair in items.windows(2) {
            let (wa, ea) = pair[0];
            let (wb, eb) = pair[1];
            compare_t.case(
                ea.compare(cfg, eb) == Ordering::Less
                    && eb.compare(cfg, ea) == Ordering::Greater
                    && ea.compare(cfg, ea) == Ordering::Equal,
                || format!("compare around {wa:?} / {wb:?}"),
            );

            let oracle = wa.is_ancestor(cfg, &wb);
            let got = ea.is_ancestor(cfg, eb);
            is_ancestor_t.case(oracle == got, || {
                format!("is_ancestor {wa:?} vs {wb:?}: oracle {oracle}, got {got}")
            });
        }
        for &(w, e) in &items {
            for target in 0..w.level() {
                let a = w.ancestor(cfg, target).unwrap();
                let ea = E::encode(cfg, a).unwrap();
                is_ancestor_t.case(ea.is_ancestor(cfg, e) && !e.is_ancestor(cfg, ea), || {
                    format!("is_ancestor {a:?} vs {w:?}")
                });
            }
        }
    }

    Ok(EquivalenceReport {
        encoding: E::NAME,
        dim: cfg.dim(),
        k_max,
        quadrants: items.len() as u64,
        ops,
    })
}

/// Scalar versus vector kernel agreement for the lane encoding.
#[derive(Clone, Debug)]
pub struct PathAgreement {
    pub vector_checked: bool,
    pub cases: u64,
    pub mismatches: u64,
    pub first_failure: Option<String>,
}

impl PathAgreement {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.mismatches += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }
}

/// Diffs the scalar and vector kernels over a complete tree. Reports zero
/// cases when the host lacks the vector path.
pub fn check_packed_paths(cfg: &TreeConfig, k_max: u8) -> Result<PathAgreement, Error> {
    cfg.validate_level(k_max)?;
    let mut agg = PathAgreement {
        vector_checked: packed128::vector_path_available(),
        cases: 0,
        mismatches: 0,
        first_failure: None,
    };
    if !agg.vector_checked {
        return Ok(agg);
    }

    #[cfg(target_arch = "x86_64")]
    {
        use crate::packed128::{scalar, vector};

        let d = cfg.dim().count();
        for w in CompleteTree::new(cfg, k_max)? {
            let index = w.to_morton(cfg);
            let level = w.level();
            let p = scalar::from_morton(cfg, index, level);

            if d * level as u32 <= 63 {
                let v = unsafe { vector::from_morton(cfg, index as u64, level) };
                agg.case(v == p, || {
                    format!("from_morton({index}, {level}): scalar {p:?}, vector {v:?}")
                });
            }

            let s = scalar::tree_boundaries(cfg, p);
            let v = unsafe { vector::tree_boundaries(cfg, p) };
            agg.case(s == v, || {
                format!("tree_boundaries of {w:?}: scalar {s:?}, vector {v:?}")
            });

            if level > 0 {
                let s = scalar::parent(cfg, p);
                let v = unsafe { vector::parent(cfg, p) };
                agg.case(s == v, || format!("parent of {w:?}: scalar {s:?}, vector {v:?}"));
            }

            if level < cfg.max_level() {
                for c in cfg.child_ids() {
                    let s = scalar::child(cfg, p, c);
                    let v = unsafe { vector::child(cfg, p, c) };
                    agg.case(s == v, || {
                        format!("child {} of {w:?}: scalar {s:?}, vector {v:?}", c.index())
                    });
                }
            }
        }
    }

    Ok(agg)
}
