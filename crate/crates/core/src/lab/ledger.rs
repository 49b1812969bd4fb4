//! Two-sided bounds on δ, ρ, λ₀, i and growth, each with the chain of
//! inequalities that produced it.

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::counting::{ball_counts, delta_estimate, loop_counts_with, BallCounts, LoopCounts};
use crate::error::{Error, Result};
use crate::geometry::{
    cheeger_lambda0_lower, default_candidates, injectivity_radius, isoperimetric_upper_with,
    mohar_growth_lower_exact, planar_iso_formula, Girth, InjectivityRadius, IsoUpper,
};
use crate::par::Exec;
use crate::planar::{check_quotient_planarity, PlanarityVerdict};
use crate::schreier::SchreierGraph;
use crate::spectral::{
    delta_from_lambda0, lambda0_from_delta, power_iteration_rho_with, tree_lambda0, SpectralEstimate,
};
use crate::words::Rank;

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub op: String,
    /// Name of the inequality or identity applied.
    pub statement: String,
    pub inputs: Vec<(String, f64)>,
}

impl Step {
    fn new(op: &str, statement: &str, inputs: &[(&str, f64)]) -> Self {
        Step {
            op: op.to_string(),
            statement: statement.to_string(),
            inputs: inputs.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
    /// Exact rational value when the chain is rational throughout.
    #[serde(default)]
    pub exact: Option<Rational64>,
    pub chain: Vec<Step>,
}

impl Bound {
    fn new(value: f64, chain: Vec<Step>) -> Self {
        Bound {
            value,
            exact: None,
            chain,
        }
    }

    fn exact(value: Rational64, chain: Vec<Step>) -> Self {
        Bound {
            value: value.to_f64().unwrap(),
            exact: Some(value),
            chain,
        }
    }

    fn then(&self, value: f64, step: Step) -> Bound {
        let mut chain = self.chain.clone();
        chain.push(step);
        Bound::new(value, chain)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: Bound,
    pub upper: Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientKind {
    /// Finite quotient known exactly.
    Finite,
    /// Certified window onto an infinite (or unresolved) quotient.
    Window,
    /// No relation visible in the window: the trivial subgroup, kept only
    /// to calibrate against the tree.
    Calibration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundLedger {
    pub rank: usize,
    pub kind: QuotientKind,
    pub delta: Interval,
    pub rho: Interval,
    pub lambda0: Interval,
    pub iso: Interval,
    pub growth: Interval,
}

impl BoundLedger {
    pub fn quantities(&self) -> [(&'static str, &Interval); 5] {
        [
            ("delta", &self.delta),
            ("rho", &self.rho),
            ("lambda0", &self.lambda0),
            ("iso", &self.iso),
            ("growth", &self.growth),
        ]
    }

    /// Hard invariants: every interval is nonempty, `ρ = 1 − λ₀` on both
    /// ends, and the δ and λ₀ intervals correspond under the cogrowth
    /// formula.
    pub fn check(&self) -> Result<()> {
        for (name, q) in self.quantities() {
            if q.lower.value.is_nan() || q.lower.value > q.upper.value + TOL {
                return Err(Error::Inconsistent(format!(
                    "{name}: lower {} exceeds upper {}",
                    q.lower.value, q.upper.value
                )));
            }
        }
        if (1.0 - self.rho.lower.value - self.lambda0.upper.value).abs() > TOL
            || (1.0 - self.rho.upper.value - self.lambda0.lower.value).abs() > TOL
        {
            return Err(Error::Inconsistent("rho and lambda0 bounds disagree".into()));
        }
        if self.kind != QuotientKind::Calibration {
            let rank = Rank::new(self.rank)?;
            let from_upper = lambda0_from_delta(rank, self.delta.upper.value)?;
            let from_lower = lambda0_from_delta(rank, self.delta.lower.value)?;
            if self.lambda0.lower.value < from_upper - 1e-9 || self.lambda0.upper.value > from_lower + 1e-9 {
                return Err(Error::Inconsistent("delta and lambda0 bounds disagree".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureOptions {
    pub exec: Exec,
    /// Loop-count radius; defaults to twice the certified radius, or 12 on
    /// finite quotients.
    pub count_radius: Option<usize>,
    pub power_iters: usize,
    pub tol: f64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            exec: Exec::default(),
            count_radius: None,
            power_iters: 5_000,
            tol: 1e-10,
        }
    }
}

/// Raw measurements of one quotient graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurements {
    pub balls: BallCounts,
    pub loops: LoopCounts,
    pub injectivity: InjectivityRadius,
    pub planarity_radius: usize,
    pub planarity: PlanarityVerdict,
    pub iso_upper: Option<IsoUpper>,
    pub spectral: SpectralEstimate,
}

pub fn measure(g: &SchreierGraph, opts: &MeasureOptions) -> Result<Measurements> {
    let radius = match g.certified_radius() {
        Some(c) => c,
        None => g.distances().into_iter().flatten().max().unwrap_or(0),
    };
    let count_radius = opts.count_radius.unwrap_or(match g.certified_radius() {
        Some(c) => 2 * c,
        None => 12,
    });
    let cands = default_candidates(g);
    let iso_upper = if cands.is_empty() {
        None
    } else {
        Some(isoperimetric_upper_with(opts.exec, g, &cands)?)
    };
    Ok(Measurements {
        balls: ball_counts(g, radius)?,
        loops: loop_counts_with(opts.exec, g, count_radius)?,
        injectivity: injectivity_radius(g),
        planarity_radius: radius,
        planarity: check_quotient_planarity(g, radius)?,
        iso_upper,
        spectral: power_iteration_rho_with(opts.exec, g, opts.power_iters, opts.tol)?,
    })
}

fn classify(g: &SchreierGraph, m: &Measurements) -> QuotientKind {
    if g.is_exact() {
        QuotientKind::Finite
    } else if m.injectivity.found == Girth::Infinite && m.loops.counts.iter().all(|c| *c == 1u32.into()) {
        QuotientKind::Calibration
    } else {
        QuotientKind::Window
    }
}

fn point(value: f64, op: &str, statement: &str) -> Bound {
    Bound::new(value, vec![Step::new(op, statement, &[])])
}

fn finite_ledger(rank: Rank) -> BoundLedger {
    let q = rank.log_branching();
    let fin = "finite quotient";
    let both = |v: f64, op: &str, st: &str| Interval {
        lower: point(v, op, st),
        upper: point(v, op, st),
    };
    let zero = Rational64::zero();
    let one = Rational64::from(1);
    BoundLedger {
        rank: rank.get(),
        kind: QuotientKind::Finite,
        delta: both(q, fin, "amenable quotient has full cogrowth"),
        rho: both(1.0, fin, "amenable quotient has spectral radius one"),
        lambda0: both(0.0, fin, "amenable quotient has spectral radius one"),
        iso: Interval {
            lower: Bound::exact(zero, vec![Step::new(fin, "whole vertex set has empty boundary", &[])]),
            upper: Bound::exact(zero, vec![Step::new(fin, "whole vertex set has empty boundary", &[])]),
        },
        growth: Interval {
            lower: Bound::exact(one, vec![Step::new(fin, "bounded balls", &[])]),
            upper: Bound::exact(one, vec![Step::new(fin, "bounded balls", &[])]),
        },
    }
}

/// Chains the measured data through the planar isoperimetric bound, the
/// isoperimetric growth bound, the Cheeger inequality and the cogrowth formula, then
/// tightens δ and λ₀ against each other. Fails loudly if any interval ends
/// up empty.
pub fn assemble_ledger(g: &SchreierGraph, m: &Measurements) -> Result<BoundLedger> {
    let rank = g.rank();
    let kind = classify(g, m);
    if kind == QuotientKind::Finite {
        let ledger = finite_ledger(rank);
        ledger.check()?;
        return Ok(ledger);
    }
    let n = rank.get() as i64;
    let q = rank.branching() as f64;
    let log_q = rank.log_branching();

    // isoperimetric constant
    let iso_lower = if m.planarity.planar {
        let (v, vacuous) = planar_iso_formula(rank, m.injectivity.lower);
        let op = if vacuous { "planar bound (vacuous)" } else { "planar bound" };
        let girth = m.injectivity.lower.finite().map_or(f64::MAX, |x| x as f64);
        Bound::exact(
            v,
            vec![
                Step::new("girth lower bound", "shortest cycle in certified ball", &[("girth", girth)]),
                Step::new(op, "planar isoperimetric bound", &[("rank", n as f64)]),
            ],
        )
    } else {
        Bound::exact(
            Rational64::zero(),
            vec![Step::new("no planar certificate", "nonnegativity", &[])],
        )
    };
    let iso_upper = match &m.iso_upper {
        Some(u) => Bound::exact(
            u.exact,
            vec![Step::new(
                "best candidate set",
                "isoperimetric ratio of a finite set",
                &[("boundary", u.boundary as f64), ("size", u.size as f64)],
            )],
        ),
        None => Bound::exact(Rational64::from(1), vec![Step::new("trivial", "boundary at most degree", &[])]),
    };
    let i_lo = iso_lower.exact.unwrap();

    // growth
    let mohar = mohar_growth_lower_exact(i_lo)?;
    let growth_lower = iso_lower.clone().then(mohar.to_f64().unwrap(), Step::new("mohar", "growth from isoperimetry", &[]));
    let growth_lower = Bound {
        exact: Some(mohar),
        ..growth_lower
    };
    // ball sizes of a vertex-transitive graph are submultiplicative, so
    // every root bounds the growth from above
    let mut growth_upper = point(q, "tree growth", "quotient grows at most like the tree");
    if let Some(&(r, root)) = crate::counting::growth_estimate(&m.balls)
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
    {
        if root < growth_upper.value {
            growth_upper = Bound::new(
                root,
                vec![Step::new(
                    "ball root",
                    "submultiplicative ball sizes",
                    &[("radius", r as f64), ("ball", m.balls.counts[r] as f64)],
                )],
            );
        }
    }

    // bottom of the spectrum
    let cheeger = cheeger_lambda0_lower(i_lo.to_f64().unwrap())?;
    let mut lam_lo = iso_lower.then(cheeger, Step::new("cheeger", "cheeger inequality", &[]));
    let spec_lo = 1.0 - m.spectral.rho_upper;
    if spec_lo > lam_lo.value {
        lam_lo = point(spec_lo, "operator norm", "norm of the averaging operator");
    }
    let mut lam_up = point(tree_lambda0(rank), "tree spectrum", "quotients of the tree have larger spectral radius");
    let from_power = 1.0 - m.spectral.rho_lower;
    if from_power < lam_up.value {
        lam_up = Bound::new(
            from_power,
            vec![Step::new(
                "dirichlet power iteration",
                "rayleigh quotient bound",
                &[("rho_lower", m.spectral.rho_lower), ("iterations", m.spectral.iterations as f64)],
            )],
        );
    }
    if iso_upper.value < lam_up.value {
        lam_up = iso_upper.then(iso_upper.value, Step::new("indicator test function", "rayleigh quotient bound", &[]));
    }

    // cogrowth exponent
    let (mut delta_lo, mut delta_up);
    if kind == QuotientKind::Calibration {
        delta_lo = point(0.0, "counting", "no nontrivial element found");
        delta_up = point(log_q, "range cap", "subgroup of the free group");
    } else {
        delta_lo = point(log_q / 2.0, "half exponent", "nontrivial normal subgroup exponent bound");
        let est = delta_estimate(&m.loops, rank);
        if let Some(&(r, v)) = est.values.last() {
            if v > delta_lo.value {
                delta_lo = Bound::new(
                    v,
                    vec![Step::new(
                        "counting",
                        "poincare exponent from counted elements",
                        &[("radius", r as f64), ("count", crate::counting::ln_big(&m.loops.counts[r]).exp())],
                    )],
                );
            }
        }
        delta_up = point(log_q, "range cap", "subgroup of the free group");
        let eps = delta_from_lambda0(rank, lam_lo.value.min(tree_lambda0(rank)))?;
        if eps < delta_up.value {
            delta_up = lam_lo.then(eps, Step::new("cogrowth formula", "cogrowth formula", &[("lambda0", lam_lo.value)]));
        }
        // cross tightening through the monotone correspondence
        let via = lambda0_from_delta(rank, delta_lo.value.min(log_q))?;
        if via < lam_up.value {
            lam_up = delta_lo.then(via, Step::new("cogrowth formula", "cogrowth formula", &[("delta", delta_lo.value)]));
        }
        let via = lambda0_from_delta(rank, delta_up.value)?;
        if via > lam_lo.value {
            lam_lo = delta_up.then(via, Step::new("cogrowth formula", "cogrowth formula", &[("delta", delta_up.value)]));
        }
    }
    let rho = Interval {
        lower: lam_up.then(1.0 - lam_up.value, Step::new("complement", "rho equals one minus lambda0", &[])),
        upper: lam_lo.then(1.0 - lam_lo.value, Step::new("complement", "rho equals one minus lambda0", &[])),
    };
    let ledger = BoundLedger {
        rank: rank.get(),
        kind,
        delta: Interval {
            lower: delta_lo,
            upper: delta_up,
        },
        rho,
        lambda0: Interval {
            lower: lam_lo,
            upper: lam_up,
        },
        iso: Interval {
            lower: iso_lower,
            upper: iso_upper,
        },
        growth: Interval {
            lower: growth_lower,
            upper: growth_upper,
        },
    };
    ledger.check()?;
    Ok(ledger)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Satisfied,
    Inconclusive,
    Violated,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjectureMargin {
    /// `δ_lower + ½ log(growth_lower) + log 2 − log(2n − 1)`.
    pub margin: f64,
    /// Whether `δ_lower + ½ log(growth_lower) ≥ log(2n − 1)` is certified.
    pub status: Status,
}

/// Margin in the inequality `δ + ½ log growth + log 2 > log(2n − 1)`
/// evaluated on lower bounds, and the status of the stronger conjectured
/// inequality without the `log 2`. Lower bounds can confirm but never
/// refute, so the status is never `Violated`.
pub fn conjecture_margin(ledger: &BoundLedger, rank: Rank) -> ConjectureMargin {
    let lhs = ledger.delta.lower.value + 0.5 * ledger.growth.lower.value.ln();
    let margin = lhs + std::f64::consts::LN_2 - rank.log_branching();
    let status = if ledger.kind == QuotientKind::Calibration {
        Status::Skipped
    } else if lhs >= rank.log_branching() {
        Status::Satisfied
    } else {
        Status::Inconclusive
    };
    ConjectureMargin { margin, status }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub tag: String,
    pub status: Status,
}

fn verdict(tag: &str, status: Status) -> Verdict {
    Verdict {
        tag: tag.to_string(),
        status,
    }
}

/// Checks every inequality the ledger relies on against the data.
/// `Violated` is reserved for contradictions between certified bounds.
pub fn verdicts(ledger: &BoundLedger, m: &Measurements, rank: Rank) -> Vec<Verdict> {
    let log_q = rank.log_branching();
    let q = rank.branching() as f64;
    let calib = ledger.kind == QuotientKind::Calibration;
    let ok = |b: bool| if b { Status::Satisfied } else { Status::Violated };
    let mut out = Vec::new();
    for (name, i) in ledger.quantities() {
        out.push(verdict(&format!("{name}-interval"), ok(i.lower.value <= i.upper.value + TOL)));
    }
    out.push(verdict(
        "cheeger-inequality",
        ok(cheeger_lambda0_lower(ledger.iso.lower.value).unwrap_or(0.0) <= ledger.lambda0.upper.value + TOL),
    ));
    let mohar_ok = mohar_growth_lower_exact(ledger.iso.lower.exact.unwrap_or_default())
        .map(|v| v.to_f64().unwrap() <= ledger.growth.upper.value + TOL)
        .unwrap_or(false);
    out.push(verdict("mohar-growth-bound", ok(mohar_ok)));
    out.push(verdict(
        "cogrowth-formula",
        if calib {
            Status::Skipped
        } else {
            ok(ledger.check().is_ok())
        },
    ));
    out.push(verdict(
        "half-exponent-bound",
        if calib {
            Status::Skipped
        } else if ledger.delta.upper.value < log_q / 2.0 - TOL {
            Status::Violated
        } else {
            Status::Satisfied
        },
    ));
    let last_root = crate::counting::growth_estimate(&m.balls).last().map(|x| x.1);
    out.push(verdict(
        "growth-below-tree",
        match (ledger.kind, last_root) {
            (QuotientKind::Calibration, _) => Status::Skipped,
            (QuotientKind::Finite, _) => Status::Satisfied,
            (_, Some(r)) if r < q => Status::Satisfied,
            _ => Status::Inconclusive,
        },
    ));
    let cm = conjecture_margin(ledger, rank);
    out.push(verdict(
        "margin-inequality",
        match cm.status {
            Status::Skipped => Status::Skipped,
            _ if cm.margin > 0.0 => Status::Satisfied,
            _ => Status::Inconclusive,
        },
    ));
    out.push(verdict("cogrowth-conjecture", cm.status));
    out
}
