//! Acceptance gate: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test -p quadrants-cli --test acceptance -- --nocapture`
//! to see the lines on success.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use quadrants::conformance::{
    check_equivalence, check_packed_paths, complete_tree_count, CompleteTree,
};
use quadrants::{
    Dim, Error, FaceIndex, MortonQuad, PackedQuad, Quadrant, QuadrantEncoding,
    StandardQuad2, StandardQuad3, TreeConfig,
};

const CSV_HEADER: &str = "repr,op,dim,kmax,count,reps,ns_per_call_min,ns_per_call_median,checksum";

struct Criterion {
    name: &'static str,
    passed: bool,
}

fn criterion(name: &'static str) -> Criterion {
    Criterion { name, passed: false }
}

impl Criterion {
    fn pass(mut self) {
        self.passed = true;
    }
}

impl Drop for Criterion {
    fn drop(&mut self) {
        println!("acceptance criterion {}: {}", self.name, if self.passed { "PASS" } else { "FAIL" });
    }
}

// Runs the built binary with a clean QUADRANTS_PACKED_SCALAR slate.
fn run_cli(args: &[&str], envs: &[(&str, &str)]) -> (String, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_quadrants"))
        .args(args)
        .env_remove("QUADRANTS_PACKED_SCALAR")
        .envs(envs.iter().copied())
        .output()
        .expect("spawn quadrants binary");
    (String::from_utf8(out.stdout).expect("utf-8 stdout"), out.status.success())
}

fn kv(line: &str, key: &str) -> Option<String> {
    let prefix = format!("{key}=");
    line.split_whitespace()
        .find_map(|part| part.strip_prefix(&prefix).map(str::to_string))
}

fn csv_rows(out: &str) -> Vec<Vec<String>> {
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn criterion_1_exhaustive_oracle_equivalence() {
    let c = criterion("1 oracle equivalence");
    let start = Instant::now();
    let cfg3 = TreeConfig::cross_encoding(Dim::D3);
    let cfg2 = TreeConfig::cross_encoding(Dim::D2);
    let reports = [
        check_equivalence::<StandardQuad3>(&cfg3, 3).unwrap(),
        check_equivalence::<MortonQuad>(&cfg3, 3).unwrap(),
        check_equivalence::<PackedQuad>(&cfg3, 3).unwrap(),
        check_equivalence::<StandardQuad2>(&cfg2, 5).unwrap(),
        check_equivalence::<MortonQuad>(&cfg2, 5).unwrap(),
        check_equivalence::<PackedQuad>(&cfg2, 5).unwrap(),
    ];
    assert_eq!(reports[0].quadrants, 585);
    assert_eq!(reports[3].quadrants, 1365);
    for report in &reports {
        let broken: Vec<_> = report.ops.iter().filter(|o| o.mismatches > 0).collect();
        assert!(broken.is_empty(), "{}: {broken:?}", report.encoding);
        assert!(report.ops.iter().all(|o| o.cases > 0));
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    c.pass();
}

fn index_formulas<E: QuadrantEncoding>(cfg: &TreeConfig, k: u8) {
    let d = cfg.dim().count();
    for w in CompleteTree::new(cfg, k).unwrap() {
        let e = E::encode(cfg, w).unwrap();
        let index = e.to_morton(cfg);
        for c in cfg.child_ids() {
            let child = e.child(cfg, c).unwrap();
            assert_eq!(child.to_morton(cfg), (index << d) + c.index() as u128);
        }
        if w.level() > 0 {
            let rem = index % (1u128 << d);
            for s in cfg.child_ids() {
                let sib = e.sibling(cfg, s).unwrap();
                assert_eq!(sib.to_morton(cfg), index - rem + s.index() as u128);
            }
            assert_eq!(e.parent(cfg).unwrap().to_morton(cfg), (index - rem) >> d);
        }
    }
}

#[test]
fn criterion_2_definition_formulas() {
    let c = criterion("2 definition formulas");
    for (dim, k) in [(Dim::D3, 3u8), (Dim::D2, 5)] {
        let cfg = TreeConfig::cross_encoding(dim);
        let d = dim.count();
        // the reference arithmetic first
        for w in CompleteTree::new(&cfg, k).unwrap() {
            let index = w.to_morton(&cfg);
            for cid in cfg.child_ids() {
                let child = w.child(&cfg, cid).unwrap();
                assert_eq!(child.to_morton(&cfg), (index << d) + cid.index() as u128);
            }
            if w.level() > 0 {
                let rem = index % (1u128 << d);
                for s in cfg.child_ids() {
                    let sib = w.sibling(&cfg, s).unwrap();
                    assert_eq!(sib.to_morton(&cfg), index - rem + s.index() as u128);
                }
                assert_eq!(w.parent(&cfg).unwrap().to_morton(&cfg), (index - rem) >> d);
            }
        }
        match dim {
            Dim::D3 => index_formulas::<StandardQuad3>(&cfg, k),
            Dim::D2 => index_formulas::<StandardQuad2>(&cfg, k),
        }
        index_formulas::<MortonQuad>(&cfg, k);
        index_formulas::<PackedQuad>(&cfg, k);
    }
    c.pass();
}

fn successor_walk<E: QuadrantEncoding>(cfg: &TreeConfig, k: u8) {
    let d = cfg.dim().count();
    let total = 1u128 << (d * k as u32);
    let mut cur = E::from_morton(cfg, 0, k).unwrap();
    let mut visited = 1u128;
    loop {
        assert_eq!(cur.to_morton(cfg), visited - 1);
        assert_eq!(cur, E::from_morton(cfg, visited - 1, k).unwrap());
        match cur.successor(cfg) {
            Ok(next) => {
                assert_eq!(cur.compare(cfg, next), Ordering::Less);
                cur = next;
                visited += 1;
            }
            Err(e) => {
                assert_eq!(e, Error::LastOfLevel);
                break;
            }
        }
    }
    assert_eq!(visited, total);
}

#[test]
fn criterion_3_successor_enumeration() {
    let c = criterion("3 successor enumeration");
    for (dim, k_top) in [(Dim::D3, 3u8), (Dim::D2, 5)] {
        let cfg = TreeConfig::cross_encoding(dim);
        for k in 0..=k_top {
            // reference arithmetic
            let d = dim.count();
            let total = 1u128 << (d * k as u32);
            let mut cur = Quadrant::from_morton(&cfg, 0, k).unwrap();
            let mut visited = 1u128;
            loop {
                assert_eq!(cur.to_morton(&cfg), visited - 1);
                assert_eq!(cur, Quadrant::from_morton(&cfg, visited - 1, k).unwrap());
                match cur.successor(&cfg) {
                    Ok(next) => {
                        assert_eq!(cur.compare(&cfg, &next), Ordering::Less);
                        cur = next;
                        visited += 1;
                    }
                    Err(e) => {
                        assert_eq!(e, Error::LastOfLevel);
                        break;
                    }
                }
            }
            assert_eq!(visited, total);

            match dim {
                Dim::D3 => successor_walk::<StandardQuad3>(&cfg, k),
                Dim::D2 => successor_walk::<StandardQuad2>(&cfg, k),
            }
            successor_walk::<MortonQuad>(&cfg, k);
            successor_walk::<PackedQuad>(&cfg, k);
        }
    }
    c.pass();
}

fn fneigh_decoded<E: QuadrantEncoding>(
    cfg: &TreeConfig,
    w: Quadrant,
    f: FaceIndex,
) -> Option<Quadrant> {
    E::encode(cfg, w).unwrap().face_neighbor(cfg, f).map(|n| n.decode(cfg).unwrap())
}

#[test]
fn criterion_4_face_neighbor_involution_and_geometry() {
    let c = criterion("4 face-neighbor involution");
    for (dim, k) in [(Dim::D3, 3u8), (Dim::D2, 5)] {
        let cfg = TreeConfig::cross_encoding(dim);
        for w in CompleteTree::new(&cfg, k).unwrap() {
            for f in cfg.face_indices() {
                let oracle = w.face_neighbor(&cfg, f);
                let std_n = match dim {
                    Dim::D3 => fneigh_decoded::<StandardQuad3>(&cfg, w, f),
                    Dim::D2 => fneigh_decoded::<StandardQuad2>(&cfg, w, f),
                };
                assert_eq!(std_n, oracle);
                assert_eq!(fneigh_decoded::<MortonQuad>(&cfg, w, f), oracle);
                assert_eq!(fneigh_decoded::<PackedQuad>(&cfg, w, f), oracle);

                if let Some(n) = oracle {
                    let partner = FaceIndex::new(dim, f.index() ^ 1).unwrap();
                    assert_eq!(n.face_neighbor(&cfg, partner), Some(w));
                    let meet = w.domain(&cfg).intersection_dim(&n.domain(&cfg), dim);
                    assert_eq!(meet, Some(dim.count() - 1));
                }
            }
        }
    }
    c.pass();
}

// Per-axis boundary code straight from coordinate comparisons.
fn boundary_by_coords(cfg: &TreeConfig, w: &Quadrant) -> Vec<i32> {
    let len = cfg.quadrant_len(w.level());
    (0..cfg.dim().count() as usize)
        .map(|axis| {
            let lower = w.coords()[axis] == 0;
            let upper = w.coords()[axis] + len == cfg.root_len();
            match (lower, upper) {
                (true, true) => -2,
                (true, false) => 2 * axis as i32,
                (false, true) => 2 * axis as i32 + 1,
                (false, false) => -1,
            }
        })
        .collect()
}

#[test]
fn criterion_5_tree_boundaries() {
    let c = criterion("5 tree boundaries");
    for (dim, k) in [(Dim::D3, 3u8), (Dim::D2, 5)] {
        let cfg = TreeConfig::cross_encoding(dim);
        let d = dim.count() as usize;

        let root = Quadrant::root();
        assert!(root.tree_boundaries(&cfg).faces().iter().all(|&f| f == -2));
        assert!(PackedQuad::encode(&cfg, root)
            .unwrap()
            .tree_boundaries(&cfg)
            .faces()
            .iter()
            .all(|&f| f == -2));

        for w in CompleteTree::new(&cfg, k).unwrap() {
            let expected = boundary_by_coords(&cfg, &w);
            let got = w.tree_boundaries(&cfg);
            assert_eq!(got.faces(), &expected[..], "{w:?}");
            assert_eq!(MortonQuad::encode(&cfg, w).unwrap().tree_boundaries(&cfg), got);
            assert_eq!(PackedQuad::encode(&cfg, w).unwrap().tree_boundaries(&cfg), got);
            let std_got = match dim {
                Dim::D3 => StandardQuad3::encode(&cfg, w).unwrap().tree_boundaries(&cfg),
                Dim::D2 => StandardQuad2::encode(&cfg, w).unwrap().tree_boundaries(&cfg),
            };
            assert_eq!(std_got, got);
        }

        // the two corner leaves pin the code tables
        let origin = Quadrant::root().descendant(&cfg, k, quadrants::DescendantEnd::First).unwrap();
        let far = Quadrant::root().descendant(&cfg, k, quadrants::DescendantEnd::Last).unwrap();
        let lower: Vec<i32> = (0..d).map(|a| 2 * a as i32).collect();
        let upper: Vec<i32> = (0..d).map(|a| 2 * a as i32 + 1).collect();
        assert_eq!(origin.tree_boundaries(&cfg).faces(), &lower[..]);
        assert_eq!(far.tree_boundaries(&cfg).faces(), &upper[..]);
    }
    c.pass();
}

#[test]
fn criterion_6_memory_sizes() {
    let c = criterion("6 memory sizes");
    assert_eq!(StandardQuad3::STORED_BYTES, 24);
    assert_eq!(PackedQuad::STORED_BYTES, 16);
    assert_eq!(MortonQuad::STORED_BYTES, 8);
    assert_eq!(core::mem::size_of::<StandardQuad3>(), 24);
    assert_eq!(core::mem::size_of::<PackedQuad>(), 16);
    assert_eq!(core::mem::size_of::<MortonQuad>(), 8);

    fn total(out: &str, repr: &str) -> u128 {
        out.lines()
            .find(|l| kv(l, "repr").as_deref() == Some(repr))
            .and_then(|l| kv(l, "total_bytes"))
            .unwrap()
            .parse()
            .unwrap()
    }

    let (out, ok) = run_cli(&["mem", "--dim", "3", "--level", "7"], &[]);
    assert!(ok, "{out}");
    assert_eq!(total(&out, "standard"), 50_331_648);
    assert_eq!(total(&out, "packed128"), 33_554_432);
    assert_eq!(total(&out, "morton64"), 16_777_216);
    assert!(out.lines().any(|l| l.ends_with("= 3:2:1")), "{out}");

    let (out, ok) = run_cli(&["mem", "--dim", "3", "--level", "10"], &[]);
    assert!(ok, "{out}");
    assert!(out.contains("mode=accounted"));
    let within_1pct = |got: u128, expected_gb: f64| {
        let expected = expected_gb * 1e9;
        (got as f64 - expected).abs() / expected < 0.01
    };
    assert!(within_1pct(total(&out, "standard"), 25.8));
    assert!(within_1pct(total(&out, "packed128"), 17.2));
    assert!(within_1pct(total(&out, "morton64"), 8.6));
    c.pass();
}

#[test]
fn criterion_7_workload_fidelity() {
    let c = criterion("7 workload fidelity");
    assert_eq!(complete_tree_count(Dim::D3, 7), 2_396_745);
    let cfg = TreeConfig::cross_encoding(Dim::D3);
    for k in 0..=7u8 {
        let n = CompleteTree::new(&cfg, k).unwrap().count() as u128;
        assert_eq!(n, complete_tree_count(Dim::D3, k), "k={k}");
    }

    let (out, ok) = run_cli(
        &["bench", "--repr", "morton64", "--op", "tbound", "--dim", "3", "--kmax", "7", "--reps", "1"],
        &[],
    );
    assert!(ok, "{out}");
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][4], "2396745");
    c.pass();
}

#[test]
fn criterion_8_differential_vectorization() {
    let c = criterion("8 differential vectorization");
    let cfg = TreeConfig::cross_encoding(Dim::D3);
    let report = check_packed_paths(&cfg, 7).unwrap();
    assert!(report.passed(), "{:?}", report.first_failure);
    assert_eq!(report.vector_checked, quadrants::vector_path_available());
    if report.vector_checked {
        assert!(report.cases > 0);
    }

    let args =
        ["bench", "--repr", "packed128", "--op", "all", "--dim", "3", "--kmax", "7", "--reps", "1"];
    let (vec_out, vec_ok) = run_cli(&args, &[]);
    let (sca_out, sca_ok) = run_cli(&args, &[("QUADRANTS_PACKED_SCALAR", "1")]);
    assert!(vec_ok && sca_ok);
    let vec_rows = csv_rows(&vec_out);
    let sca_rows = csv_rows(&sca_out);
    assert_eq!(vec_rows.len(), 7);
    assert_eq!(sca_rows.len(), 7);
    for (v, s) in vec_rows.iter().zip(&sca_rows) {
        assert_eq!(v[1], s[1]);
        assert_eq!(v[4], s[4], "count differs for {}", v[1]);
        assert_eq!(v[8], s[8], "checksum differs for {}", v[1]);
    }
    c.pass();
}

#[test]
fn criterion_9_performance_protocol() {
    let c = criterion("9 performance protocol");
    let start = Instant::now();
    let (out, ok) =
        run_cli(&["bench", "--op", "all", "--dim", "3", "--kmax", "7", "--reps", "3"], &[]);
    let elapsed = start.elapsed();
    assert!(ok, "{out}");
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");

    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 21);
    let mut by_op: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for row in &rows {
        assert_eq!(row.len(), 9);
        assert!(["standard", "morton64", "packed128"].contains(&row[0].as_str()));
        assert_eq!(row[2], "3");
        assert_eq!(row[3], "7");
        assert!(row[4].parse::<u64>().unwrap() > 0);
        assert_eq!(row[5], "3");
        let min: f64 = row[6].parse().unwrap();
        let median: f64 = row[7].parse().unwrap();
        assert!(min > 0.0 && min <= median);
        let checksum = row[8].strip_prefix("0x").unwrap();
        u64::from_str_radix(checksum, 16).unwrap();
        by_op.entry(row[1].clone()).or_default().push(row[8].clone());
    }
    assert_eq!(by_op.len(), 7);
    for (op, checksums) in &by_op {
        assert_eq!(checksums.len(), 3, "{op}");
        assert!(checksums.iter().all(|c| c == &checksums[0]), "{op}: {checksums:?}");
    }
    c.pass();
}
