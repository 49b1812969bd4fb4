use std::cmp::Ordering;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{check_interior, core, Core, Girth, InjectivityRadius, Subgraph};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::schreier::{ball, SchreierGraph};
use crate::words::Rank;

/// Best candidate set `A` for `i(Γ) ≤ |∂A| / (2n |A|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoUpper {
    pub value: f64,
    pub exact: Rational64,
    pub boundary: usize,
    pub size: usize,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoLower {
    pub value: f64,
    pub exact: Rational64,
    /// The bound degenerated to 0.
    pub vacuous: bool,
    pub certificate: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IsoperimetricBound {
    pub lower: Option<IsoLower>,
    pub upper: Option<IsoUpper>,
}

impl IsoperimetricBound {
    pub fn is_consistent(&self) -> bool {
        match (&self.lower, &self.upper) {
            (Some(l), Some(u)) => l.exact <= u.exact,
            _ => true,
        }
    }
}

/// Balls of every certified interior radius around the basepoint, followed
/// by the cores of those balls that differ from the ball itself.
pub fn default_candidates(g: &SchreierGraph) -> Vec<Subgraph<'_>> {
    let rmax = match g.certified_radius() {
        Some(0) => return Vec::new(),
        Some(c) => c - 1,
        None => g.distances().into_iter().flatten().max().unwrap_or(0),
    };
    let balls: Vec<Subgraph> = (0..=rmax).map(|r| ball(g, r).expect("certified")).collect();
    let mut cores = Vec::new();
    for b in &balls {
        if let Ok(Core::Graph(c)) = core(b) {
            if c.vertex_count() < b.len() {
                cores.push(Subgraph::new(g, c.vertices.clone()));
            }
        }
    }
    balls.into_iter().chain(cores).collect()
}

pub fn isoperimetric_upper(g: &SchreierGraph, candidates: &[Subgraph]) -> Result<IsoUpper> {
    isoperimetric_upper_with(Exec::default(), g, candidates)
}

/// Minimum of `|∂A| / (2n|A|)` over the candidates, compared exactly; ties
/// go to the lexicographically smallest vertex list.
pub fn isoperimetric_upper_with(exec: Exec, g: &SchreierGraph, candidates: &[Subgraph]) -> Result<IsoUpper> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let evaluated = par::map(exec, candidates, |s| -> Result<(usize, usize)> {
        if !std::ptr::eq(s.host(), g) {
            return Err(Error::InvalidInput("candidate belongs to another graph".into()));
        }
        if s.is_empty() {
            return Err(Error::InvalidInput("empty candidate set".into()));
        }
        check_interior(s)?;
        Ok((s.boundary_slots(), s.len()))
    });
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, e) in evaluated.into_iter().enumerate() {
        let (b, n) = e?;
        let better = match best {
            None => true,
            Some((bb, bn, bi)) => match (b * bn).cmp(&(bb * n)) {
                Ordering::Less => true,
                Ordering::Equal => candidates[i].vertices() < candidates[bi].vertices(),
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((b, n, i));
        }
    }
    let (b, n, i) = best.expect("nonempty");
    Ok(IsoUpper {
        value: b as f64 / (g.rank().degree() * n) as f64,
        exact: Rational64::new(b as i64, (g.rank().degree() * n) as i64),
        boundary: b,
        size: n,
        witness: candidates[i].vertices().to_vec(),
    })
}

/// `(n−1)/n − 1/(n(ℓ−1))` for a planar graph with injectivity radius at
/// least `ℓ = girth / 2`; returns 0 (vacuous) when this is not positive.
pub fn planar_iso_formula(rank: Rank, girth_lower: Girth) -> (Rational64, bool) {
    let n = rank.get() as i64;
    let top = Rational64::new(n - 1, n);
    match girth_lower {
        Girth::Infinite => (top, false),
        Girth::Finite(g) if g <= 2 => (Rational64::zero(), true),
        Girth::Finite(g) => {
            let v = top - Rational64::new(2, n * (g as i64 - 2));
            if v > Rational64::zero() {
                (v, false)
            } else {
                (Rational64::zero(), true)
            }
        }
    }
}

/// Lower bound on `i(Γ)` for a planar quotient. Planarity is checked on the
/// radius-`radius` ball; a nonplanar ball refutes the hypothesis.
pub fn isoperimetric_lower_planar(g: &SchreierGraph, radius: usize, ell: &InjectivityRadius) -> Result<IsoLower> {
    let b = ball(g, radius)?;
    let verdict = crate::planar::is_planar(&b.to_multigraph());
    if !verdict.planar {
        return Err(Error::NotPlanar(format!("radius-{radius} ball is not planar")));
    }
    let (exact, vacuous) = planar_iso_formula(g.rank(), ell.lower);
    let mut certificate = vec![
        format!("planar ball radius {radius}"),
        format!("girth lower bound {}", ell.lower),
        "planar isoperimetric bound".to_string(),
    ];
    if vacuous {
        certificate.push("vacuous".to_string());
    }
    Ok(IsoLower {
        value: exact.to_f64().unwrap(),
        exact,
        vacuous,
        certificate,
    })
}

/// `growth ≥ (1 + i)/(1 − i)`.
pub fn mohar_growth_lower(i_lower: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&i_lower) {
        return Err(Error::OutOfRange {
            what: "isoperimetric lower bound",
            value: i_lower,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok((1.0 + i_lower) / (1.0 - i_lower))
}

pub fn mohar_growth_lower_exact(i_lower: Rational64) -> Result<Rational64> {
    let one = Rational64::from(1);
    if i_lower < Rational64::zero() || i_lower >= one {
        return Err(Error::OutOfRange {
            what: "isoperimetric lower bound",
            value: i_lower.to_f64().unwrap_or(f64::NAN),
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok((one + i_lower) / (one - i_lower))
}

/// `λ₀ ≥ 1 − √(1 − i²)`.
pub fn cheeger_lambda0_lower(i_lower: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&i_lower) {
        return Err(Error::OutOfRange {
            what: "isoperimetric lower bound",
            value: i_lower,
            lo: 0.0,
            hi: 1.0,
        });
    }
    // same value as 1 − √(1 − i²) without cancellation
    Ok(i_lower * i_lower / (1.0 + (1.0 - i_lower * i_lower).sqrt()))
}
