//! Plain-text graph dump.
//!
//! ```text
//! rank 2 vertices 4 basepoint 0 exact
//! 0 1 1 2 2
//! ...
//! ```
//!
//! The header ends in `exact` or `approx:R`; each vertex line lists its id
//! and then `2n` targets in letter order `a A b B ...`, with `-` for an
//! undefined transition.

use std::fmt::Write;

use super::{Exactness, SchreierGraph};
use crate::error::{Error, Result};
use crate::words::Rank;

pub fn write_dump(g: &SchreierGraph) -> String {
    let mut out = String::new();
    let ex = match g.exactness() {
        Exactness::Exact => "exact".to_string(),
        Exactness::Approx { certified_radius } => format!("approx:{certified_radius}"),
    };
    writeln!(
        out,
        "rank {} vertices {} basepoint {} {ex}",
        g.rank(),
        g.vertex_count(),
        g.basepoint()
    )
    .unwrap();
    for v in 0..g.vertex_count() {
        write!(out, "{v}").unwrap();
        for code in 0..g.rank().degree() {
            match g.target_code(v, code) {
                Some(t) => write!(out, " {t}").unwrap(),
                None => out.push_str(" -"),
            }
        }
        out.push('\n');
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn read_dump(text: &str) -> Result<SchreierGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty dump"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 7 || h[0] != "rank" || h[2] != "vertices" || h[4] != "basepoint" {
        return Err(perr(hl, "expected 'rank n vertices V basepoint b exact|approx:R'"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| perr(hl, format!("bad number '{s}'")));
    let rank = Rank::new(num(h[1])?).map_err(|e| perr(hl, e.to_string()))?;
    let nv = num(h[3])?;
    let basepoint = num(h[5])?;
    let exactness = match h[6] {
        "exact" => Exactness::Exact,
        s => match s.strip_prefix("approx:") {
            Some(r) => Exactness::Approx {
                certified_radius: num(r)?,
            },
            None => return Err(perr(hl, format!("bad exactness '{s}'"))),
        },
    };
    let d = rank.degree();
    let mut table = vec![None; nv * d];
    let mut seen = vec![false; nv];
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != d + 1 {
            return Err(perr(ln, format!("expected {} fields, found {}", d + 1, toks.len())));
        }
        let v: usize = toks[0].parse().map_err(|_| perr(ln, "bad vertex id"))?;
        if v >= nv || seen[v] {
            return Err(perr(ln, format!("vertex id {v} out of range or repeated")));
        }
        seen[v] = true;
        for (code, tok) in toks[1..].iter().enumerate() {
            table[v * d + code] = match *tok {
                "-" => None,
                t => Some(t.parse().map_err(|_| perr(ln, format!("bad target '{t}'")))?),
            };
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(perr(0, format!("missing line for vertex {v}")));
    }
    SchreierGraph::from_table(rank, table, basepoint, exactness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schreier::{todd_coxeter, truncated_quotient, TruncateOptions};
    use crate::words::parse_relators;

    #[test]
    fn round_trip() {
        let r2 = Rank::new(2).unwrap();
        let g = todd_coxeter(r2, &parse_relators(r2, "aa bb abAB").unwrap(), 10).unwrap();
        let text = write_dump(&g);
        assert!(text.starts_with("rank 2 vertices 4 basepoint 0 exact\n"));
        assert_eq!(read_dump(&text).unwrap(), g);

        let (w, _) = truncated_quotient(r2, &[], TruncateOptions::new(2, 0)).unwrap();
        let text = write_dump(&w);
        assert!(text.starts_with("rank 2 vertices 17 basepoint 0 approx:2\n"));
        assert!(text.contains(" -"));
        assert_eq!(read_dump(&text).unwrap(), w);
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_dump("").is_err());
        assert!(read_dump("rank 2 vertices 1 basepoint 0 exact\n0 0 0 0\n").is_err());
        assert!(read_dump("rank 2 vertices 1 basepoint 0 fuzzy\n0 0 0 0 0\n").is_err());
        assert!(read_dump("rank 2 vertices 2 basepoint 0 exact\n0 0 0 0 0\n").is_err());
        // broken involution
        assert!(read_dump("rank 2 vertices 2 basepoint 0 approx:0\n0 1 - - -\n1 - - - -\n").is_err());
        assert!(read_dump("rank 2 vertices 1 basepoint 0 exact\n0 0 0 0 0\n").is_ok());
    }
}
