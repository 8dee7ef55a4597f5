//! Cross-encoding equivalence at the depths every commit must survive,
//! plus a sanity check that the harness actually catches bugs.

use core::cmp::Ordering;

use quadrants::conformance::{
    check_equivalence, check_packed_paths, complete_tree_count, CompleteTree, Op,
};
use quadrants::{
    BoundaryReport, ChildId, DescendantEnd, Dim, Error, FaceIndex, MortonIndex, MortonQuad,
    PackedQuad, Quadrant, QuadrantEncoding, StandardQuad2, StandardQuad3, TreeConfig,
};

#[test]
fn full_contract_matches_reference_in_3d() {
    let cfg = TreeConfig::cross_encoding(Dim::D3);
    let expected = complete_tree_count(Dim::D3, 3) as u64;

    let s = check_equivalence::<StandardQuad3>(&cfg, 3).unwrap();
    let m = check_equivalence::<MortonQuad>(&cfg, 3).unwrap();
    let p = check_equivalence::<PackedQuad>(&cfg, 3).unwrap();
    for report in [&s, &m, &p] {
        assert!(report.passed(), "{}: {:?}", report.encoding, failing(report));
        assert_eq!(report.quadrants, expected);
        assert_eq!(report.quadrants, 585);
    }
}

#[test]
fn full_contract_matches_reference_in_2d() {
    let cfg = TreeConfig::cross_encoding(Dim::D2);
    let expected = complete_tree_count(Dim::D2, 5) as u64;

    let s = check_equivalence::<StandardQuad2>(&cfg, 5).unwrap();
    let m = check_equivalence::<MortonQuad>(&cfg, 5).unwrap();
    let p = check_equivalence::<PackedQuad>(&cfg, 5).unwrap();
    for report in [&s, &m, &p] {
        assert!(report.passed(), "{}: {:?}", report.encoding, failing(report));
        assert_eq!(report.quadrants, expected);
        assert_eq!(report.quadrants, 1365);
    }
}

// Deeper sweep than the per-commit depths above; run with --ignored.
#[test]
#[ignore = "extended depth sweep"]
fn full_contract_extended_depths() {
    let cfg = TreeConfig::cross_encoding(Dim::D3);
    for report in [
        check_equivalence::<StandardQuad3>(&cfg, 5).unwrap(),
        check_equivalence::<MortonQuad>(&cfg, 5).unwrap(),
        check_equivalence::<PackedQuad>(&cfg, 5).unwrap(),
    ] {
        assert!(report.passed(), "{}: {:?}", report.encoding, failing(&report));
        assert_eq!(report.quadrants, 37_449);
    }
    assert!(check_packed_paths(&cfg, 5).unwrap().passed());

    let cfg = TreeConfig::cross_encoding(Dim::D2);
    for report in [
        check_equivalence::<StandardQuad2>(&cfg, 8).unwrap(),
        check_equivalence::<MortonQuad>(&cfg, 8).unwrap(),
        check_equivalence::<PackedQuad>(&cfg, 8).unwrap(),
    ] {
        assert!(report.passed(), "{}: {:?}", report.encoding, failing(&report));
        assert_eq!(report.quadrants, 87_381);
    }
    assert!(check_packed_paths(&cfg, 8).unwrap().passed());
}

#[test]
fn packed_scalar_and_vector_agree() {
    let cfg = TreeConfig::cross_encoding(Dim::D3);
    let report = check_packed_paths(&cfg, 3).unwrap();
    assert!(report.passed(), "{:?}", report.first_failure);

    let cfg = TreeConfig::cross_encoding(Dim::D2);
    let report = check_packed_paths(&cfg, 5).unwrap();
    assert!(report.passed(), "{:?}", report.first_failure);
}

#[test]
fn enumeration_is_the_comparator_order() {
    for (dim, k) in [(Dim::D3, 3u8), (Dim::D2, 5)] {
        let cfg = TreeConfig::cross_encoding(dim);
        let all: Vec<Quadrant> = CompleteTree::new(&cfg, k).unwrap().collect();
        assert_eq!(all.len() as u128, complete_tree_count(dim, k));
        for pair in all.windows(2) {
            assert_eq!(pair[0].compare(&cfg, &pair[1]), Ordering::Less);
        }
    }
}

// The explicit cross-check: the lane encoding's child must equal the plain
// encoding's child routed through decode and re-encode.
#[test]
fn packed_child_equals_standard_child_through_codecs() {
    let cfg = TreeConfig::cross_encoding(Dim::D3);
    for w in CompleteTree::new(&cfg, 3).unwrap() {
        let p = PackedQuad::encode(&cfg, w).unwrap();
        let s = StandardQuad3::encode(&cfg, w).unwrap();
        for c in cfg.child_ids() {
            let direct = p.child(&cfg, c).unwrap();
            let routed = s.child(&cfg, c).unwrap().decode(&cfg).unwrap();
            assert_eq!(direct, PackedQuad::encode(&cfg, routed).unwrap());
        }
    }
}

fn failing(report: &quadrants::conformance::EquivalenceReport) -> Vec<(&'static str, u64)> {
    report
        .ops
        .iter()
        .filter(|o| o.mismatches > 0)
        .map(|o| (o.op.name(), o.mismatches))
        .collect()
}

// A deliberately wrong encoding: child lands on the sibling of the child
// asked for. Everything else delegates to a correct encoding.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
struct MissesChild(MortonQuad);

impl QuadrantEncoding for MissesChild {
    const NAME: &'static str = "misses-child";
    const STORED_BYTES: usize = MortonQuad::STORED_BYTES;
    type Bytes = <MortonQuad as QuadrantEncoding>::Bytes;

    fn supported_level(dim: Dim) -> u8 {
        MortonQuad::supported_level(dim)
    }

    fn encode(cfg: &TreeConfig, q: Quadrant) -> Result<Self, Error> {
        MortonQuad::encode(cfg, q).map(MissesChild)
    }

    fn decode(self, cfg: &TreeConfig) -> Result<Quadrant, Error> {
        self.0.decode(cfg)
    }

    fn from_morton(cfg: &TreeConfig, index: MortonIndex, level: u8) -> Result<Self, Error> {
        MortonQuad::from_morton(cfg, index, level).map(MissesChild)
    }

    fn to_morton(self, cfg: &TreeConfig) -> MortonIndex {
        self.0.to_morton(cfg)
    }

    fn child(self, cfg: &TreeConfig, c: ChildId) -> Result<Self, Error> {
        let flipped = ChildId::new(cfg.dim(), c.index() ^ 1)?;
        self.0.child(cfg, flipped).map(MissesChild)
    }

    fn parent(self, cfg: &TreeConfig) -> Result<Self, Error> {
        self.0.parent(cfg).map(MissesChild)
    }

    fn sibling(self, cfg: &TreeConfig, s: ChildId) -> Result<Self, Error> {
        self.0.sibling(cfg, s).map(MissesChild)
    }

    fn child_id(self, cfg: &TreeConfig) -> Result<ChildId, Error> {
        self.0.child_id(cfg)
    }

    fn successor(self, cfg: &TreeConfig) -> Result<Self, Error> {
        self.0.successor(cfg).map(MissesChild)
    }

    fn face_neighbor(self, cfg: &TreeConfig, f: FaceIndex) -> Option<Self> {
        self.0.face_neighbor(cfg, f).map(MissesChild)
    }

    fn tree_boundaries(self, cfg: &TreeConfig) -> BoundaryReport {
        self.0.tree_boundaries(cfg)
    }

    fn ancestor(self, cfg: &TreeConfig, level: u8) -> Result<Self, Error> {
        self.0.ancestor(cfg, level).map(MissesChild)
    }

    fn descendant(self, cfg: &TreeConfig, level: u8, end: DescendantEnd) -> Result<Self, Error> {
        self.0.descendant(cfg, level, end).map(MissesChild)
    }

    fn compare(self, cfg: &TreeConfig, other: Self) -> Ordering {
        self.0.compare(cfg, other.0)
    }

    fn is_ancestor(self, cfg: &TreeConfig, other: Self) -> bool {
        self.0.is_ancestor(cfg, other.0)
    }

    fn to_bytes(self) -> Self::Bytes {
        self.0.to_bytes()
    }

    fn from_bytes(cfg: &TreeConfig, bytes: Self::Bytes) -> Result<Self, Error> {
        MortonQuad::from_bytes(cfg, bytes).map(MissesChild)
    }

    fn sink_word(self) -> u64 {
        self.0.sink_word()
    }
}

#[test]
fn harness_flags_an_injected_child_bug() {
    let cfg = TreeConfig::cross_encoding(Dim::D3);
    let report = check_equivalence::<MissesChild>(&cfg, 2).unwrap();
    assert!(!report.passed());
    for op in &report.ops {
        if op.op == Op::Child {
            assert_eq!(op.mismatches, op.cases);
            let msg = op.first_failure.as_deref().unwrap();
            assert!(msg.contains("child"), "{msg}");
            assert!(msg.contains("Quadrant"), "{msg}");
        } else {
            assert_eq!(op.mismatches, 0, "unexpected mismatch in {:?}", op.op);
        }
    }
}
