//! Golden-file text form: one quadrant per line, `Q3 <x> <y> <z> <level>`
//! or `Q2 <x> <y> <level>`, decimal, LF line endings.

use std::fmt::Write;

use quadrants::{Dim, Quadrant, TreeConfig};

pub fn write_line(dim: Dim, q: &Quadrant, out: &mut String) {
    let c = q.coords();
    match dim {
        Dim::D3 => writeln!(out, "Q3 {} {} {} {}", c[0], c[1], c[2], q.level()).unwrap(),
        Dim::D2 => writeln!(out, "Q2 {} {} {}", c[0], c[1], q.level()).unwrap(),
    }
}

pub fn write_corpus(cfg: &TreeConfig, quads: impl IntoIterator<Item = Quadrant>) -> String {
    let mut out = String::new();
    for q in quads {
        write_line(cfg.dim(), &q, &mut out);
    }
    out
}

pub fn parse_line(cfg: &TreeConfig, line: &str) -> Result<Quadrant, String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let (tag, n) = match cfg.dim() {
        Dim::D3 => ("Q3", 5),
        Dim::D2 => ("Q2", 4),
    };
    if fields.len() != n || fields[0] != tag {
        return Err(format!("want `{tag}` and {} fields: {line:?}", n - 1));
    }
    let mut nums = [0u32; 4];
    for (slot, s) in nums[..n - 1].iter_mut().zip(&fields[1..]) {
        *slot = s.parse().map_err(|e| format!("bad field {s:?} in {line:?}: {e}"))?;
    }
    let (coords, level) = match cfg.dim() {
        Dim::D3 => ([nums[0], nums[1], nums[2]], nums[3]),
        Dim::D2 => ([nums[0], nums[1], 0], nums[2]),
    };
    let level = u8::try_from(level).map_err(|_| format!("level {level} out of range: {line:?}"))?;
    Quadrant::new(cfg, coords, level).map_err(|e| format!("invalid quadrant {line:?}: {e}"))
}

/// Parses a whole corpus, one quadrant per non-empty line.
pub fn parse_corpus(cfg: &TreeConfig, text: &str) -> Result<Vec<Quadrant>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_line(cfg, line).map_err(|e| format!("line {}: {e}", i + 1))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_round_trip() {
        let cfg = TreeConfig::cross_encoding(Dim::D3);
        let q = Quadrant::new(&cfg, [131072, 0, 131072], 1).unwrap();
        let mut s = String::new();
        write_line(Dim::D3, &q, &mut s);
        assert_eq!(s, "Q3 131072 0 131072 1\n");
        assert_eq!(parse_line(&cfg, s.trim()), Ok(q));
    }

    #[test]
    fn two_d_omits_z() {
        let cfg = TreeConfig::cross_encoding(Dim::D2);
        let q = Quadrant::new(&cfg, [134217728, 0, 0], 1).unwrap();
        let mut s = String::new();
        write_line(Dim::D2, &q, &mut s);
        assert_eq!(s, "Q2 134217728 0 1\n");
        assert_eq!(parse_line(&cfg, "Q2 134217728 0 1"), Ok(q));
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        let cfg = TreeConfig::cross_encoding(Dim::D3);
        assert!(parse_line(&cfg, "Q2 0 0 0").is_err());
        assert!(parse_line(&cfg, "Q3 0 0 0").is_err());
        assert!(parse_line(&cfg, "Q3 0 0 0 0 0").is_err());
        assert!(parse_line(&cfg, "Q3 x 0 0 0").is_err());
        assert!(parse_line(&cfg, "Q3 1 0 0 1").is_err());
        assert!(parse_line(&cfg, "Q3 0 0 0 300").is_err());
    }

    #[test]
    fn corpus_skips_blank_lines_and_keeps_order() {
        let cfg = TreeConfig::cross_encoding(Dim::D3);
        let text = "Q3 0 0 0 0\n\nQ3 0 0 0 1\n";
        let quads = parse_corpus(&cfg, text).unwrap();
        assert_eq!(quads.len(), 2);
        assert_eq!(write_corpus(&cfg, quads), "Q3 0 0 0 0\nQ3 0 0 0 1\n");
    }
}
