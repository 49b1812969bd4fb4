//! Simple random walk operator, spectral radius bounds and the exact
//! conversions between cogrowth, spectral radius and bottom of spectrum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::schreier::{SchreierGraph, UNDEF};
use crate::words::Rank;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodTag {
    PowerIteration,
    DirichletBall,
    ReturnProbability,
    RayleighQuotient,
    CheegerChain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub rho_lower: f64,
    pub rho_upper: f64,
    pub lambda0_lower: f64,
    pub lambda0_upper: f64,
    pub method_tags: Vec<MethodTag>,
    pub converged: bool,
    pub iterations: usize,
}

impl SpectralEstimate {
    pub fn from_rho(rho_lower: f64, rho_upper: f64, method_tags: Vec<MethodTag>) -> Self {
        SpectralEstimate {
            rho_lower,
            rho_upper,
            lambda0_lower: 1.0 - rho_upper,
            lambda0_upper: 1.0 - rho_lower,
            method_tags,
            converged: true,
            iterations: 0,
        }
    }
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_ITERS: usize = 100_000;

/// Vertices where a function may be nonzero without reaching past the
/// certified window: everything on exact graphs, otherwise complete vertices
/// strictly inside the certified ball.
fn interior(g: &SchreierGraph) -> Vec<bool> {
    match g.certified_radius() {
        None => vec![true; g.vertex_count()],
        Some(c) => g
            .distances()
            .iter()
            .enumerate()
            .map(|(v, d)| d.is_some_and(|d| d < c) && g.is_complete_at(v))
            .collect(),
    }
}

fn check_support(g: &SchreierGraph, f: &[f64]) -> Result<()> {
    if f.len() != g.vertex_count() {
        return Err(Error::InvalidInput(format!(
            "function has {} values for {} vertices",
            f.len(),
            g.vertex_count()
        )));
    }
    if g.is_exact() {
        return Ok(());
    }
    let ok = interior(g);
    match (0..f.len()).find(|&v| f[v] != 0.0 && !ok[v]) {
        Some(v) => Err(Error::SupportViolation { vertex: v }),
        None => Ok(()),
    }
}

fn srw_raw(exec: Exec, g: &SchreierGraph, f: &[f64], out: &mut [f64]) {
    let d = g.rank().degree();
    let scale = 1.0 / d as f64;
    par::fill(exec, out, |v| {
        g.row(v)
            .iter()
            .filter(|&&t| t != UNDEF)
            .map(|&t| f[t as usize])
            .sum::<f64>()
            * scale
    });
}

/// `(Pf)(x) = (1/2n) Σ_{y∼x} f(y)`, loops contributing `f(x)` twice.
pub fn apply_srw(g: &SchreierGraph, f: &[f64]) -> Result<Vec<f64>> {
    apply_srw_with(Exec::default(), g, f)
}

pub fn apply_srw_with(exec: Exec, g: &SchreierGraph, f: &[f64]) -> Result<Vec<f64>> {
    check_support(g, f)?;
    let mut out = vec![0.0; f.len()];
    srw_raw(exec, g, f, &mut out);
    Ok(out)
}

/// `Δf = f − Pf`.
pub fn apply_laplacian(g: &SchreierGraph, f: &[f64]) -> Result<Vec<f64>> {
    let pf = apply_srw(g, f)?;
    Ok(f.iter().zip(pf).map(|(a, b)| a - b).collect())
}

/// `(1/2n) Σ_{x∼y} |f(x) − f(y)|² / Σ f(x)²`, an upper bound for `λ₀`.
/// Undefined transitions are edges to vertices where `f` vanishes.
pub fn rayleigh_quotient(g: &SchreierGraph, f: &[f64]) -> Result<f64> {
    check_support(g, f)?;
    let norm: f64 = f.iter().map(|x| x * x).sum();
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let d = g.rank().degree();
    let mut energy = 0.0;
    for v in 0..g.vertex_count() {
        for code in 0..d {
            match g.target_code(v, code) {
                Some(t) if code % 2 == 0 => energy += (f[v] - f[t]).powi(2),
                Some(_) => {}
                None => energy += f[v] * f[v],
            }
        }
    }
    Ok(energy / d as f64 / norm)
}

pub fn power_iteration_rho(g: &SchreierGraph, iters: usize, tol: f64) -> Result<SpectralEstimate> {
    power_iteration_rho_with(Exec::default(), g, iters, tol)
}

/// Power iteration with `P²` restricted to the certified ball (Dirichlet
/// boundary) or to the whole exact graph. Every iterate gives
/// `‖Pf‖/‖f‖ ≤ ρ`; the upper bound is the trivial `‖P‖ ≤ 1`.
pub fn power_iteration_rho_with(exec: Exec, g: &SchreierGraph, iters: usize, tol: f64) -> Result<SpectralEstimate> {
    let nv = g.vertex_count();
    let dist = g.distances();
    let domain: Vec<bool> = match g.certified_radius() {
        None => dist.iter().map(|d| d.is_some()).collect(),
        Some(c) => dist.iter().map(|d| d.is_some_and(|d| d <= c)).collect(),
    };
    let radius = (0..nv)
        .filter(|&v| domain[v])
        .filter_map(|v| dist[v])
        .max()
        .unwrap_or(0);
    let q = g.rank().branching() as f64;
    let mut f: Vec<f64> = (0..nv)
        .map(|v| match dist[v] {
            Some(d) if domain[v] => q.powf(-(d as f64) / 2.0) * (radius + 1 - d) as f64,
            _ => 0.0,
        })
        .collect();
    let mut pf = vec![0.0; nv];
    let mut best = 0.0f64;
    let mut prev = f64::NAN;
    let mut converged = false;
    let mut done = 0;
    for it in 0..iters.max(1) {
        done = it + 1;
        let nf = par::sum_f64(exec, nv, |v| f[v] * f[v]).sqrt();
        f.iter_mut().for_each(|x| *x /= nf);
        srw_raw(exec, g, &f, &mut pf);
        for v in 0..nv {
            if !domain[v] {
                pf[v] = 0.0;
            }
        }
        let est = par::sum_f64(exec, nv, |v| pf[v] * pf[v]).sqrt();
        best = best.max(est);
        if (est - prev).abs() < tol {
            converged = true;
            break;
        }
        prev = est;
        srw_raw(exec, g, &pf, &mut f);
        for v in 0..nv {
            if !domain[v] {
                f[v] = 0.0;
            }
        }
    }
    let mut tags = vec![MethodTag::PowerIteration];
    if !g.is_exact() {
        tags.push(MethodTag::DirichletBall);
    }
    let best = best.min(1.0);
    Ok(SpectralEstimate {
        converged,
        iterations: done,
        ..SpectralEstimate::from_rho(best, 1.0, tags)
    })
}

/// `p_{2m}(o, o)` for `m = 1..=m_max`.
pub fn return_probabilities(g: &SchreierGraph, m_max: usize) -> Result<Vec<f64>> {
    g.check_radius(m_max)?;
    let nv = g.vertex_count();
    let mut p = vec![0.0; nv];
    let mut next = vec![0.0; nv];
    p[g.basepoint()] = 1.0;
    let mut out = Vec::with_capacity(m_max);
    for step in 1..=2 * m_max {
        srw_raw(Exec::Sequential, g, &p, &mut next);
        std::mem::swap(&mut p, &mut next);
        if step % 2 == 0 {
            out.push(p[g.basepoint()]);
        }
    }
    Ok(out)
}

/// `max_{m ≤ m_max} p_{2m}(o, o)^{1/(2m)} ≤ ρ`.
pub fn return_probability_rho_lower(g: &SchreierGraph, m_max: usize) -> Result<f64> {
    let ps = return_probabilities(g, m_max)?;
    Ok(ps
        .iter()
        .enumerate()
        .map(|(i, &p)| p.powf(1.0 / (2 * (i + 1)) as f64))
        .fold(0.0, f64::max))
}

/// Radial function `(2n−1)^{−d/2}(c − d)` on the interior of the certified
/// ball (all of an exact graph, with `c` one past the eccentricity).
pub fn radial_test_function(g: &SchreierGraph) -> Vec<f64> {
    let dist = g.distances();
    let ok = interior(g);
    let c = match g.certified_radius() {
        Some(c) => c,
        None => dist.iter().flatten().max().map_or(1, |m| m + 1),
    };
    let q = g.rank().branching() as f64;
    (0..g.vertex_count())
        .map(|v| match dist[v] {
            Some(d) if ok[v] && d < c => q.powf(-(d as f64) / 2.0) * (c - d) as f64,
            _ => 0.0,
        })
        .collect()
}

/// `λ₀ ≤ R(f)` for the radial test function; constants on exact graphs.
pub fn rayleigh_estimate(g: &SchreierGraph) -> Result<SpectralEstimate> {
    let f = if g.is_exact() {
        vec![1.0; g.vertex_count()]
    } else {
        radial_test_function(g)
    };
    let upper = rayleigh_quotient(g, &f)?.min(1.0);
    Ok(SpectralEstimate::from_rho(1.0 - upper, 1.0, vec![MethodTag::RayleighQuotient]))
}

/// `ρ ≥ max_m p_{2m}(o,o)^{1/(2m)}` with `m` up to the certified radius
/// (`m_max` on exact graphs).
pub fn return_probability_estimate(g: &SchreierGraph, m_max: usize) -> Result<SpectralEstimate> {
    let m = g.certified_radius().unwrap_or(m_max).min(m_max);
    if m == 0 {
        return Err(Error::RadiusNotCertified {
            requested: 1,
            certified: 0,
        });
    }
    let rho = return_probability_rho_lower(g, m)?;
    Ok(SpectralEstimate {
        iterations: m,
        ..SpectralEstimate::from_rho(rho, 1.0, vec![MethodTag::ReturnProbability])
    })
}

const RANGE_SLACK: f64 = 1e-12;

fn check_delta(rank: Rank, delta: f64) -> Result<()> {
    let top = rank.log_branching();
    if delta.is_nan() || delta < top / 2.0 - RANGE_SLACK || delta > top + RANGE_SLACK {
        return Err(Error::OutOfRange {
            what: "delta",
            value: delta,
            lo: top / 2.0,
            hi: top,
        });
    }
    Ok(())
}

/// Cogrowth formula: `ρ = (√(2n−1)/2n)(√(2n−1)/e^δ + e^δ/√(2n−1))`.
pub fn rho_from_delta(rank: Rank, delta: f64) -> Result<f64> {
    check_delta(rank, delta)?;
    let q = rank.branching() as f64;
    let s = q.sqrt();
    let e = delta.exp();
    Ok(s / rank.degree() as f64 * (s / e + e / s))
}

/// `λ₀ = (1/2n)(2n − 1 − e^δ)(1 − e^{−δ})`.
pub fn lambda0_from_delta(rank: Rank, delta: f64) -> Result<f64> {
    check_delta(rank, delta)?;
    let q = rank.branching() as f64;
    let e = delta.exp();
    Ok((q - e) * (1.0 - 1.0 / e) / rank.degree() as f64)
}

/// Bottom of the spectrum of the tree, `1 − √(2n−1)/n`.
pub fn tree_lambda0(rank: Rank) -> f64 {
    let n = rank.get() as f64;
    1.0 - (rank.branching() as f64).sqrt() / n
}

/// Inverse of [`lambda0_from_delta`] on the branch `e^δ ≥ √(2n−1)`:
/// `e^δ = n(1−λ₀) + √(n²(1−λ₀)² − (2n−1))`.
pub fn delta_from_lambda0(rank: Rank, lambda0: f64) -> Result<f64> {
    let n = rank.get() as f64;
    let q = rank.branching() as f64;
    let top = tree_lambda0(rank);
    if lambda0.is_nan() || lambda0 < -RANGE_SLACK || lambda0 > top + RANGE_SLACK {
        return Err(Error::OutOfRange {
            what: "lambda0",
            value: lambda0,
            lo: 0.0,
            hi: top,
        });
    }
    let lambda0 = lambda0.clamp(0.0, top);
    // factor the discriminant to avoid cancellation near the tree endpoint
    let a = n * (1.0 - lambda0);
    let disc = (n * (top - lambda0)).max(0.0) * (a + q.sqrt());
    Ok((a + disc.sqrt()).ln())
}
