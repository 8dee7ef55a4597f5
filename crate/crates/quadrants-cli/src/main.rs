mod bench;
mod mem;
mod textform;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadrants::conformance::{check_equivalence, check_packed_paths, CompleteTree};
use quadrants::{
    Dim, MortonQuad, PackedQuad, Quadrant, QuadrantEncoding, StandardQuad2, StandardQuad3,
    TreeConfig,
};

use bench::{BenchOp, BenchRecord};
use mem::{BuildMode, MemoryReport};

/// Throughput, memory, and conformance driver for the quadrant encodings.
#[derive(Parser)]
#[command(name = "quadrants", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Time each operation in a tight loop over a complete-tree workload.
    Bench(BenchArgs),
    /// Report uniform-forest memory footprints.
    Mem(MemArgs),
    /// Check every encoding against the reference arithmetic.
    Conformance(ConformanceArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ReprArg {
    Standard,
    Morton64,
    Packed128,
    All,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum OpArg {
    Morton,
    Child,
    Parent,
    Sibling,
    Fneigh,
    Tbound,
    Successor,
    All,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum OutArg {
    Csv,
    Json,
}

#[derive(Args)]
struct BenchArgs {
    /// Representation to measure.
    #[arg(long, value_enum, default_value_t = ReprArg::All)]
    repr: ReprArg,
    /// Operation to measure.
    #[arg(long, value_enum, default_value_t = OpArg::All)]
    op: OpArg,
    /// Spatial dimension.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..=3))]
    dim: u32,
    /// Complete-tree workload depth.
    #[arg(long, default_value_t = 7)]
    kmax: u8,
    /// Timing repetitions; minimum and median per-call times are reported.
    #[arg(long, default_value_t = 10)]
    reps: u32,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutArg::Csv)]
    out: OutArg,
    /// Split the workload into this many chunks, each timed independently
    /// on its own thread; the slowest chunk sets the reported time.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct MemArgs {
    /// Representation to size.
    #[arg(long, value_enum, default_value_t = ReprArg::All)]
    repr: ReprArg,
    /// Spatial dimension.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..=3))]
    dim: u32,
    /// Uniform refinement level of the forest.
    #[arg(long)]
    level: u8,
    /// Never allocate; compute sizes arithmetically.
    #[arg(long, conflicts_with = "force_build")]
    account_only: bool,
    /// Build the array even above the safety cap.
    #[arg(long)]
    force_build: bool,
    /// Emit JSON lines instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConformanceArgs {
    /// Spatial dimension.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..=3))]
    dim: u32,
    /// Exhaustive tree depth.
    #[arg(long, default_value_t = 3)]
    kmax: u8,
    /// Emit JSON lines instead of text.
    #[arg(long)]
    json: bool,
    /// Write the enumerated corpus to this file in text form.
    #[arg(long, value_name = "PATH")]
    write_golden: Option<PathBuf>,
    /// Verify a corpus file: enumeration order plus byte round trips
    /// through every representation.
    #[arg(long, value_name = "PATH")]
    check_golden: Option<PathBuf>,
}

fn main() -> ExitCode {
    // One switch for differential runs: force the packed128 scalar path.
    if std::env::var("QUADRANTS_PACKED_SCALAR").is_ok_and(|v| !v.is_empty() && v != "0") {
        quadrants::force_scalar(true);
    }
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Mem(a) => cmd_mem(a),
        Cmd::Conformance(a) => cmd_conformance(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn to_dim(n: u32) -> Dim {
    if n == 2 {
        Dim::D2
    } else {
        Dim::D3
    }
}

fn chosen_reprs(arg: ReprArg) -> Vec<ReprArg> {
    match arg {
        ReprArg::All => vec![ReprArg::Standard, ReprArg::Morton64, ReprArg::Packed128],
        one => vec![one],
    }
}

fn cmd_bench(a: BenchArgs) -> Result<bool, String> {
    let dim = to_dim(a.dim);
    // One shared config keeps results and checksums comparable across
    // representations.
    let cfg = TreeConfig::cross_encoding(dim);
    if a.kmax > cfg.max_level() {
        return Err(format!("kmax {} exceeds the shared depth {}", a.kmax, cfg.max_level()));
    }
    let ops: Vec<BenchOp> = match a.op {
        OpArg::All => BenchOp::ALL.to_vec(),
        OpArg::Morton => vec![BenchOp::Morton],
        OpArg::Child => vec![BenchOp::Child],
        OpArg::Parent => vec![BenchOp::Parent],
        OpArg::Sibling => vec![BenchOp::Sibling],
        OpArg::Fneigh => vec![BenchOp::Fneigh],
        OpArg::Tbound => vec![BenchOp::Tbound],
        OpArg::Successor => vec![BenchOp::Successor],
    };

    let mut rows: Vec<BenchRecord> = Vec::new();
    for repr in chosen_reprs(a.repr) {
        for &op in &ops {
            let row = match (repr, dim) {
                (ReprArg::Standard, Dim::D3) => {
                    bench::run::<StandardQuad3>(&cfg, a.kmax, op, a.reps, a.threads)?
                }
                (ReprArg::Standard, Dim::D2) => {
                    bench::run::<StandardQuad2>(&cfg, a.kmax, op, a.reps, a.threads)?
                }
                (ReprArg::Morton64, _) => {
                    bench::run::<MortonQuad>(&cfg, a.kmax, op, a.reps, a.threads)?
                }
                (ReprArg::Packed128, _) => {
                    bench::run::<PackedQuad>(&cfg, a.kmax, op, a.reps, a.threads)?
                }
                (ReprArg::All, _) => unreachable!(),
            };
            rows.push(row);
        }
    }

    match a.out {
        OutArg::Csv => {
            println!("{}", BenchRecord::CSV_HEADER);
            for row in &rows {
                println!("{}", row.csv_row());
            }
        }
        OutArg::Json => {
            for row in &rows {
                println!("{}", serde_json::to_string(row).unwrap());
            }
        }
    }
    Ok(true)
}

fn mem_for<E: QuadrantEncoding>(
    dim: Dim,
    level: u8,
    mode: BuildMode,
) -> Result<MemoryReport, String> {
    let depth = level.max(1);
    if E::supported_level(dim) < depth {
        return Err(format!(
            "{} holds levels up to {} in {}D",
            E::NAME,
            E::supported_level(dim),
            dim.count()
        ));
    }
    let cfg = TreeConfig::new(dim, depth).map_err(|e| e.to_string())?;
    mem::memory_report::<E>(&cfg, level, mode)
}

fn cmd_mem(a: MemArgs) -> Result<bool, String> {
    let dim = to_dim(a.dim);
    let mode = if a.account_only {
        BuildMode::AccountOnly
    } else if a.force_build {
        BuildMode::ForceBuild
    } else {
        BuildMode::Auto
    };

    let mut reports: Vec<MemoryReport> = Vec::new();
    for repr in chosen_reprs(a.repr) {
        let report = match (repr, dim) {
            (ReprArg::Standard, Dim::D3) => mem_for::<StandardQuad3>(dim, a.level, mode)?,
            (ReprArg::Standard, Dim::D2) => mem_for::<StandardQuad2>(dim, a.level, mode)?,
            (ReprArg::Morton64, _) => mem_for::<MortonQuad>(dim, a.level, mode)?,
            (ReprArg::Packed128, _) => mem_for::<PackedQuad>(dim, a.level, mode)?,
            (ReprArg::All, _) => unreachable!(),
        };
        reports.push(report);
    }

    for r in &reports {
        if a.json {
            println!("{}", serde_json::to_string(r).unwrap());
        } else {
            println!(
                "mem repr={} dim={} level={} count={} bytes_per_quadrant={} total_bytes={} mode={}",
                r.repr,
                r.dim,
                r.level,
                r.count,
                r.bytes_per_quadrant,
                r.total_bytes,
                if r.built { "built" } else { "accounted" }
            );
        }
    }

    if !a.json && reports.len() == 3 {
        let by_name = |name: &str| reports.iter().find(|r| r.repr == name).unwrap().total_bytes;
        let (s, p, m) = (by_name("standard"), by_name("packed128"), by_name("morton64"));
        let g = gcd(gcd(s, p), m);
        println!("mem ratio standard:packed128:morton64 = {}:{}:{}", s / g, p / g, m / g);
    }
    Ok(true)
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn bytes_round_trip<E: QuadrantEncoding>(cfg: &TreeConfig, q: Quadrant) -> bool {
    let Ok(e) = E::encode(cfg, q) else {
        return false;
    };
    E::from_bytes(cfg, e.to_bytes()).is_ok_and(|back| back == e && back.decode(cfg) == Ok(q))
}

fn check_golden(cfg: &TreeConfig, kmax: u8, path: &PathBuf, json: bool) -> Result<bool, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let quads = textform::parse_corpus(cfg, &text)?;
    let expected: Vec<Quadrant> =
        CompleteTree::new(cfg, kmax).map_err(|e| e.to_string())?.collect();
    let order_ok = quads == expected;

    let mut byte_failures = 0u64;
    for &q in &quads {
        let ok = match cfg.dim() {
            Dim::D3 => bytes_round_trip::<StandardQuad3>(cfg, q),
            Dim::D2 => bytes_round_trip::<StandardQuad2>(cfg, q),
        } && bytes_round_trip::<MortonQuad>(cfg, q)
            && bytes_round_trip::<PackedQuad>(cfg, q);
        if !ok {
            byte_failures += 1;
        }
    }

    let clean = order_ok && byte_failures == 0;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "golden": path.display().to_string(),
                "quadrants": quads.len(),
                "order_ok": order_ok,
                "byte_failures": byte_failures,
            })
        );
    } else {
        println!(
            "golden file={} quadrants={} order={} byte_failures={}",
            path.display(),
            quads.len(),
            if order_ok { "ok" } else { "MISMATCH" },
            byte_failures
        );
    }
    Ok(clean)
}

fn cmd_conformance(a: ConformanceArgs) -> Result<bool, String> {
    let dim = to_dim(a.dim);
    let cfg = TreeConfig::cross_encoding(dim);
    let mut clean = true;

    if let Some(path) = &a.write_golden {
        let corpus = textform::write_corpus(
            &cfg,
            CompleteTree::new(&cfg, a.kmax).map_err(|e| e.to_string())?,
        );
        std::fs::write(path, corpus).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(path) = &a.check_golden {
        clean &= check_golden(&cfg, a.kmax, path, a.json)?;
    }

    let reports = match dim {
        Dim::D3 => vec![
            check_equivalence::<StandardQuad3>(&cfg, a.kmax),
            check_equivalence::<MortonQuad>(&cfg, a.kmax),
            check_equivalence::<PackedQuad>(&cfg, a.kmax),
        ],
        Dim::D2 => vec![
            check_equivalence::<StandardQuad2>(&cfg, a.kmax),
            check_equivalence::<MortonQuad>(&cfg, a.kmax),
            check_equivalence::<PackedQuad>(&cfg, a.kmax),
        ],
    };

    let mut quadrants = 0;
    for report in reports {
        let report = report.map_err(|e| e.to_string())?;
        quadrants = report.quadrants;
        for op in &report.ops {
            clean &= op.mismatches == 0;
            if a.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "repr": report.encoding,
                        "op": op.op.name(),
                        "cases": op.cases,
                        "mismatches": op.mismatches,
                        "first_failure": op.first_failure,
                    })
                );
            } else {
                println!(
                    "conformance repr={} op={} cases={} mismatches={}",
                    report.encoding,
                    op.op.name(),
                    op.cases,
                    op.mismatches
                );
                if let Some(first) = &op.first_failure {
                    println!("  first failure: {first}");
                }
            }
        }
    }

    let paths = check_packed_paths(&cfg, a.kmax).map_err(|e| e.to_string())?;
    clean &= paths.passed();
    if a.json {
        println!(
            "{}",
            serde_json::json!({
                "repr": "packed128",
                "op": "vector_paths",
                "vector_checked": paths.vector_checked,
                "cases": paths.cases,
                "mismatches": paths.mismatches,
                "first_failure": paths.first_failure,
            })
        );
    } else {
        println!(
            "conformance repr=packed128 op=vector_paths vector_checked={} cases={} mismatches={}",
            paths.vector_checked, paths.cases, paths.mismatches
        );
    }

    if !a.json {
        println!(
            "conformance result={} quadrants={quadrants}",
            if clean { "pass" } else { "fail" }
        );
    }
    Ok(clean)
}
