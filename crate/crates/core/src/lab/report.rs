use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ledger::{conjecture_margin, verdicts, BoundLedger, ConjectureMargin, Measurements, Verdict};
use crate::counting::{delta_estimate, growth_estimate, LoopCounts};
use crate::error::{Error, Result};
use crate::geometry::Girth;
use crate::schreier::BuildDiagnostics;
use crate::words::{Rank, ReducedWord};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub id: String,
    pub rank: usize,
    /// Exponent of the power-relator family, for sweep points.
    pub k: Option<u32>,
    pub relators: Vec<String>,
    pub diagnostics: Option<BuildDiagnostics>,
    pub ball_counts: Vec<u64>,
    pub loop_counts: Option<LoopCounts>,
    pub delta_hat: Vec<(usize, f64)>,
    pub growth_roots: Vec<(usize, f64)>,
    pub planar: Option<bool>,
    pub girth_lower: Option<Girth>,
    pub ledger: Option<BoundLedger>,
    pub margin: Option<ConjectureMargin>,
    pub verdicts: Vec<Verdict>,
    pub error: Option<String>,
}

impl Report {
    pub fn new(
        id: &str,
        rank: Rank,
        relators: &[ReducedWord],
        diagnostics: Option<BuildDiagnostics>,
        m: Measurements,
        ledger: BoundLedger,
    ) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            id: id.to_string(),
            rank: rank.get(),
            k: None,
            relators: relators.iter().map(|r| r.to_string()).collect(),
            diagnostics,
            ball_counts: m.balls.counts.clone(),
            delta_hat: delta_estimate(&m.loops, rank).values,
            growth_roots: growth_estimate(&m.balls),
            planar: Some(m.planarity.planar),
            girth_lower: Some(m.injectivity.lower),
            margin: Some(conjecture_margin(&ledger, rank)),
            verdicts: verdicts(&ledger, &m, rank),
            loop_counts: Some(m.loops),
            ledger: Some(ledger),
            error: None,
        }
    }

    pub fn failed(id: &str, rank: Rank, relators: &[ReducedWord], err: Error) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            id: id.to_string(),
            rank: rank.get(),
            k: None,
            relators: relators.iter().map(|r| r.to_string()).collect(),
            diagnostics: None,
            ball_counts: Vec::new(),
            loop_counts: None,
            delta_hat: Vec::new(),
            growth_roots: Vec::new(),
            planar: None,
            girth_lower: None,
            ledger: None,
            margin: None,
            verdicts: Vec::new(),
            error: Some(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" | "table" | "text-table" => Ok(Format::Text),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn ell(g: Girth) -> String {
    match g {
        Girth::Finite(x) => format!("{}", x as f64 / 2.0),
        Girth::Infinite => "inf".to_string(),
    }
}

/// One report. CSV has one row per radius.
pub fn emit_report(r: &Report, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(serde_json::to_vec_pretty(r).expect("report serializes")),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["r", "ball_count", "loop_count", "delta_hat", "growth_root"])
                .map_err(csv_err)?;
            let loops = r.loop_counts.as_ref().map_or(&[][..], |l| &l.counts[..]);
            let rows = r.ball_counts.len().max(loops.len());
            for i in 0..rows {
                let dh = r.delta_hat.iter().find(|x| x.0 == i).map(|x| x.1);
                let gr = r.growth_roots.iter().find(|x| x.0 == i).map(|x| x.1);
                w.write_record([
                    i.to_string(),
                    opt(r.ball_counts.get(i)),
                    opt(loops.get(i)),
                    opt(dh),
                    opt(gr),
                ])
                .map_err(csv_err)?;
            }
            w.into_inner().map_err(csv_err)
        }
        Format::Text => {
            let mut s = format!("{} (rank {})\n", r.id, r.rank);
            if let Some(e) = &r.error {
                writeln!(s, "error: {e}").unwrap();
            }
            if let Some(l) = &r.ledger {
                writeln!(s, "{:<10} {:>14} {:>14}", "quantity", "lower", "upper").unwrap();
                for (name, q) in l.quantities() {
                    writeln!(s, "{:<10} {:>14.9} {:>14.9}", name, q.lower.value, q.upper.value).unwrap();
                }
            }
            if let Some(m) = &r.margin {
                writeln!(s, "margin {:.6} ({:?})", m.margin, m.status).unwrap();
            }
            for v in &r.verdicts {
                writeln!(s, "  {:<22} {:?}", v.tag, v.status).unwrap();
            }
            Ok(s.into_bytes())
        }
    }
}

const SWEEP_COLUMNS: [&str; 6] = ["k", "ell", "i_lower", "growth_lower", "delta_upper", "delta_lower"];

fn summary_row(r: &Report) -> [String; 6] {
    let l = r.ledger.as_ref();
    [
        opt(r.k),
        r.girth_lower.map(ell).unwrap_or_default(),
        opt(l.map(|l| l.iso.lower.value)),
        opt(l.map(|l| l.growth.lower.value)),
        opt(l.map(|l| l.delta.upper.value)),
        opt(l.map(|l| l.delta.lower.value)),
    ]
}

/// A sweep: JSON array, CSV summary with one row per point, or a text
/// table of the same summary.
pub fn emit_sweep(reports: &[Report], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(serde_json::to_vec_pretty(reports).expect("reports serialize")),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(SWEEP_COLUMNS).map_err(csv_err)?;
            for r in reports {
                w.write_record(summary_row(r)).map_err(csv_err)?;
            }
            w.into_inner().map_err(csv_err)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "{:>4} {:>6} {:>12} {:>14} {:>12} {:>12}  note",
                "k", "ell", "i_lower", "growth_lower", "delta_upper", "delta_lower"
            )
            .unwrap();
            for r in reports {
                let row = summary_row(r);
                let short = |x: &str| x.parse::<f64>().map(|v| format!("{v:.6}")).unwrap_or_default();
                writeln!(
                    s,
                    "{:>4} {:>6} {:>12} {:>14} {:>12} {:>12}  {}",
                    row[0],
                    row[1],
                    short(&row[2]),
                    short(&row[3]),
                    short(&row[4]),
                    short(&row[5]),
                    r.error.as_deref().unwrap_or("")
                )
                .unwrap();
            }
            Ok(s.into_bytes())
        }
    }
}
