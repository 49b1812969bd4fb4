//! Experiment orchestration: bound ledgers, sweeps over the power-relator
//! family, conjecture margins and reports.

mod ledger;
mod report;

pub use ledger::{
    assemble_ledger, conjecture_margin, measure, verdicts, Bound, BoundLedger, ConjectureMargin, Interval,
    MeasureOptions, Measurements, QuotientKind, Status, Step, Verdict,
};
pub use report::{emit_report, emit_sweep, Format, Report, SCHEMA_VERSION};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::schreier::{truncated_quotient, BuildDiagnostics, Preset, SchreierGraph, TruncateOptions};
use crate::words::{Rank, ReducedWord};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub rank: Rank,
    pub ks: Vec<u32>,
    /// Window radius; `None` picks `⌈k/2⌉ + 2` per point, enough to see the
    /// shortest relator cycle through the basepoint.
    pub radius: Option<usize>,
    pub depth: usize,
    pub max_vertices: usize,
    pub measure: MeasureOptions,
}

impl SweepOptions {
    pub fn new(rank: Rank, ks: Vec<u32>) -> Self {
        SweepOptions {
            rank,
            ks,
            radius: None,
            depth: 2,
            max_vertices: 8_000_000,
            measure: MeasureOptions::default(),
        }
    }

    pub fn radius_for(&self, k: u32) -> usize {
        self.radius.unwrap_or((k as usize).div_ceil(2) + 2)
    }
}

/// Builds, measures and assembles one quotient into a report.
pub fn run_experiment(
    id: &str,
    g: &SchreierGraph,
    relators: &[ReducedWord],
    diagnostics: Option<BuildDiagnostics>,
    opts: &MeasureOptions,
) -> Result<Report> {
    let m = measure(g, opts)?;
    let ledger = assemble_ledger(g, &m)?;
    Ok(Report::new(id, g.rank(), relators, diagnostics, m, ledger))
}

fn sweep_point(opts: &SweepOptions, k: u32) -> Report {
    let preset = Preset::Powers(k);
    let id = format!("powers-n{}-k{k}", opts.rank.get());
    let rels = match preset.relators(opts.rank) {
        Ok(r) => r,
        Err(e) => return Report::failed(&id, opts.rank, &[], e),
    };
    let topts = TruncateOptions::new(opts.radius_for(k), opts.depth).with_max_vertices(opts.max_vertices);
    let mut inner = opts.measure;
    // points already run in parallel
    inner.exec = Exec::Sequential;
    let result = truncated_quotient(opts.rank, &rels, topts)
        .and_then(|(g, diag)| run_experiment(&id, &g, &rels, Some(diag), &inner));
    let mut report = match result {
        Ok(r) => r,
        Err(e) => Report::failed(&id, opts.rank, &rels, e),
    };
    report.k = Some(k);
    report
}

/// One report per `k` of the power-relator family, in the order given.
/// Failures are recorded in the report and do not stop the sweep.
pub fn theorem_trend_sweep(exec: Exec, opts: &SweepOptions) -> Result<Vec<Report>> {
    if opts.ks.is_empty() {
        return Err(Error::InvalidInput("empty k range".into()));
    }
    Ok(par::map(exec, &opts.ks, |&k| sweep_point(opts, k)))
}

/// Outcome of running every invariant on one graph.
#[derive(Debug, Clone, PartialEq)]
pub enum VerifyOutcome {
    /// No certified contradiction.
    Passed(Box<Report>),
    /// A hard invariant failed.
    Violation(String),
    /// The computation hit a size cap.
    ResourceCap(String),
}

impl VerifyOutcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            VerifyOutcome::Passed(_) => 0,
            VerifyOutcome::Violation(_) => 1,
            VerifyOutcome::ResourceCap(_) => 2,
        }
    }
}

pub fn verify(g: &SchreierGraph, opts: &MeasureOptions) -> VerifyOutcome {
    let result = g
        .validate()
        .and_then(|_| run_experiment("verify", g, &[], None, opts));
    match result {
        Ok(r) => match r.verdicts.iter().find(|v| v.status == Status::Violated) {
            Some(v) => VerifyOutcome::Violation(format!("verdict {} violated", v.tag)),
            None => VerifyOutcome::Passed(Box::new(r)),
        },
        Err(e @ (Error::ResourceCap { .. } | Error::Overflow { .. })) => VerifyOutcome::ResourceCap(e.to_string()),
        Err(e) => VerifyOutcome::Violation(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn small_sweep_is_ordered() {
        let rank = Rank::new(2).unwrap();
        let opts = SweepOptions::new(rank, vec![6, 4]);
        let reports = theorem_trend_sweep(Exec::Parallel, &opts).unwrap();
        assert_eq!(reports.iter().map(|r| r.k).collect::<Vec<_>>(), [Some(6), Some(4)]);
        let i: Vec<_> = reports
            .iter()
            .map(|r| r.ledger.as_ref().unwrap().iso.lower.exact.unwrap())
            .collect();
        assert_eq!(i, [Rational64::new(1, 4), Rational64::from(0)]);
    }

    #[test]
    fn failures_do_not_stop_the_sweep() {
        let rank = Rank::new(2).unwrap();
        let mut opts = SweepOptions::new(rank, vec![4, 6]);
        opts.max_vertices = 10;
        let reports = theorem_trend_sweep(Exec::Sequential, &opts).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().all(|r| r.error.is_some()));
    }

    #[test]
    fn empty_range_rejected() {
        let opts = SweepOptions::new(Rank::new(2).unwrap(), vec![]);
        assert!(theorem_trend_sweep(Exec::Sequential, &opts).is_err());
    }

    #[test]
    fn verify_exit_codes() {
        let rank = Rank::new(2).unwrap();
        let rels = Preset::Powers(6).relators(rank).unwrap();
        let g = truncated_quotient(rank, &rels, TruncateOptions::new(5, 2)).unwrap().0;
        assert_eq!(verify(&g, &MeasureOptions::default()).exit_code(), 0);
    }
}
