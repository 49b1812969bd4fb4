//! Finite windows onto infinite quotients.
//!
//! For deepening level `L` and window radius `R` the builder scans every
//! relator at every vertex within distance `R + L` of the basepoint,
//! defining cosets and merging coincidences, and repeats until a full pass
//! changes nothing. The result is `T_n / H` where `H ⊆ N` is the least
//! subgroup containing `g r g⁻¹` for every relator `r` and every `g` of
//! length `≤ R + L` in `T_n / H`. Raising `L` only enlarges `H`, so balls
//! shrink monotonically towards those of `T_n / N`. With no relators the
//! window is the tree ball itself.

use serde::{Deserialize, Serialize};

use super::coset::{Cap, CosetTable};
use super::{Exactness, SchreierGraph};
use crate::error::{Error, Result};
use crate::words::{cyclic_reduce, Rank, ReducedWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncateOptions {
    pub radius: usize,
    pub depth: usize,
    /// Cap on coset-table rows allocated while building.
    pub max_vertices: usize,
}

impl TruncateOptions {
    pub fn new(radius: usize, depth: usize) -> Self {
        TruncateOptions {
            radius,
            depth,
            max_vertices: 8_000_000,
        }
    }

    pub fn with_max_vertices(mut self, cap: usize) -> Self {
        self.max_vertices = cap;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildDiagnostics {
    /// The coset table was complete and every relator closed at every
    /// vertex, so the window is the whole finite quotient.
    pub closed: bool,
    pub coset_count: usize,
    /// Largest `r ≤ R` whose ball agrees between levels `L` and `L + 1`
    /// (equal to `R` when closed).
    pub certified_radius: usize,
    pub deepening_level: usize,
}

enum Window {
    Closed(SchreierGraph),
    Open(SchreierGraph),
}

/// Builds the radius-`R` window of `T_n / ⟨⟨relators⟩⟩` at deepening `L`.
pub fn truncated_quotient(
    rank: Rank,
    relators: &[ReducedWord],
    opts: TruncateOptions,
) -> Result<(SchreierGraph, BuildDiagnostics)> {
    if opts.radius == 0 {
        return Err(Error::InvalidInput("window radius must be at least 1".into()));
    }
    let mut rels = Vec::new();
    for r in relators {
        if r.rank() != rank {
            return Err(Error::RankMismatch {
                left: rank.get(),
                right: r.rank().get(),
            });
        }
        let c: Vec<usize> = cyclic_reduce(r).letters().iter().map(|l| l.code()).collect();
        if !c.is_empty() && !rels.contains(&c) {
            rels.push(c);
        }
    }
    let r = opts.radius;
    let level = opts.depth;
    let here = match build_window(rank, &rels, r, level, opts.max_vertices)? {
        Window::Closed(g) => {
            let diag = BuildDiagnostics {
                closed: true,
                coset_count: g.vertex_count(),
                certified_radius: r,
                deepening_level: level,
            };
            return Ok((g, diag));
        }
        Window::Open(g) => g,
    };
    let next = match build_window(rank, &rels, r, level + 1, opts.max_vertices)? {
        Window::Closed(g) | Window::Open(g) => g,
    };
    let certified = (0..=r)
        .rev()
        .find(|&s| here.ball_isomorphic(&next, s))
        .unwrap_or(0);
    let mut g = here;
    g.set_exactness(Exactness::Approx {
        certified_radius: certified,
    });
    let diag = BuildDiagnostics {
        closed: false,
        coset_count: g.vertex_count(),
        certified_radius: certified,
        deepening_level: level,
    };
    Ok((g, diag))
}

fn build_window(rank: Rank, rels: &[Vec<usize>], r: usize, level: usize, cap: usize) -> Result<Window> {
    let scan = if rels.is_empty() { 0 } else { r + level };
    let mut ct = CosetTable::new(rank, Cap::Allocated(cap));
    loop {
        let before = ct.changes;
        ct.scan_within(scan, rels)?;
        if ct.changes == before {
            break;
        }
    }
    if ct.is_complete() {
        let g = ct.to_graph(Exactness::Exact);
        let closes = |w: &Vec<usize>, v: usize| {
            w.iter().try_fold(v, |cur, &x| g.target_code(cur, x)) == Some(v)
        };
        if (0..g.vertex_count()).all(|v| rels.iter().all(|w| closes(w, v))) {
            return Ok(Window::Closed(g));
        }
    }
    ct.complete_within(r)?;
    let g = ct.to_graph(Exactness::Approx { certified_radius: r });
    Ok(Window::Open(g.restrict_to_ball(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schreier::todd_coxeter;
    use crate::words::parse_relators;

    fn r2() -> Rank {
        Rank::new(2).unwrap()
    }

    fn build(rels: &str, r: usize, l: usize) -> (SchreierGraph, BuildDiagnostics) {
        let rels = parse_relators(r2(), rels).unwrap();
        truncated_quotient(r2(), &rels, TruncateOptions::new(r, l)).unwrap()
    }

    #[test]
    fn tree_window() {
        let (g, diag) = build("", 3, 1);
        assert_eq!(g.vertex_count(), 53);
        assert_eq!(diag.certified_radius, 3);
        assert!(!diag.closed);
        g.validate().unwrap();
    }

    #[test]
    fn grid_ball() {
        let (g, diag) = build("abAB", 2, 2);
        assert_eq!(g.vertex_count(), 13);
        assert_eq!(diag.certified_radius, 2);
        let (g, _) = build("abAB", 6, 6);
        assert_eq!(g.vertex_count(), 2 * 36 + 2 * 6 + 1);
    }

    #[test]
    fn klein_four_closes() {
        let (g, diag) = build("aa bb abAB", 5, 2);
        assert!(diag.closed);
        assert!(g.is_exact());
        let tc = todd_coxeter(r2(), &parse_relators(r2(), "aa bb abAB").unwrap(), 100).unwrap();
        assert!(g.isomorphic(&tc));
    }

    #[test]
    fn deepening_only_merges() {
        let mut last = usize::MAX;
        for l in 0..5 {
            let (g, _) = build("abAB", 5, l);
            assert!(g.vertex_count() <= last);
            last = g.vertex_count();
        }
        assert_eq!(last, 61);
    }

    #[test]
    fn resource_cap() {
        let rels = parse_relators(r2(), "abAB").unwrap();
        let opts = TruncateOptions::new(30, 2).with_max_vertices(1000);
        assert!(matches!(
            truncated_quotient(r2(), &rels, opts),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn zero_radius_rejected() {
        assert!(truncated_quotient(r2(), &[], TruncateOptions::new(0, 1)).is_err());
    }
}
