//! Subgraphs of quotient graphs: cores, Euler characteristic, boundaries,
//! injectivity radius and isoperimetric bounds.

mod girth;
mod iso;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::FiniteMultigraph;
use crate::schreier::{SchreierGraph, UNDEF};
use crate::words::{Letter, Rank};

pub use girth::{girth, injectivity_radius, Girth, InjectivityRadius};
pub use iso::{
    cheeger_lambda0_lower, default_candidates, isoperimetric_lower_planar, isoperimetric_upper,
    isoperimetric_upper_with, mohar_growth_lower, mohar_growth_lower_exact, planar_iso_formula,
    IsoLower, IsoUpper, IsoperimetricBound,
};

/// A vertex subset of a quotient graph with its induced edges.
#[derive(Debug, Clone)]
pub struct Subgraph<'a> {
    host: &'a SchreierGraph,
    vertices: Vec<usize>,
    // host vertex -> position in `vertices`, UNDEF outside
    local: Vec<u32>,
}

impl<'a> Subgraph<'a> {
    /// Panics if a vertex is out of range; duplicates are removed.
    pub fn new(host: &'a SchreierGraph, mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        let mut local = vec![UNDEF; host.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            assert!(v < host.vertex_count(), "vertex {v} not in host graph");
            local[v] = i as u32;
        }
        Subgraph {
            host,
            vertices,
            local,
        }
    }

    pub fn host(&self) -> &'a SchreierGraph {
        self.host
    }

    /// Sorted host vertex ids.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.local.get(v).is_some_and(|&i| i != UNDEF)
    }

    /// Induced edges `(u, positive letter, w)` in host ids; loops and
    /// parallel edges retained.
    pub fn edges(&self) -> Vec<(usize, Letter, usize)> {
        let d = self.host.rank().degree();
        let mut out = Vec::new();
        for &v in &self.vertices {
            for code in (0..d).step_by(2) {
                if let Some(t) = self.host.target_code(v, code) {
                    if self.contains(t) {
                        out.push((v, Letter::from_code(code), t));
                    }
                }
            }
        }
        out
    }

    /// Multigraph on local indices `0..len()` (position in [`Self::vertices`]).
    pub fn to_multigraph(&self) -> FiniteMultigraph {
        let edges = self
            .edges()
            .into_iter()
            .map(|(u, _, w)| (self.local[u] as usize, self.local[w] as usize))
            .collect();
        FiniteMultigraph::new(self.len(), edges).expect("induced edges are in range")
    }

    pub fn is_connected(&self) -> bool {
        self.to_multigraph().is_connected()
    }

    /// Host slots at member vertices that are undefined or leave the set.
    /// Loops never count.
    pub fn boundary_slots(&self) -> usize {
        self.vertices
            .iter()
            .flat_map(|&v| self.host.row(v).iter())
            .filter(|&&t| t == UNDEF || !self.contains(t as usize))
            .count()
    }
}

/// Number of host edges with exactly one endpoint in `s`.
///
/// On approximate hosts every member must lie strictly inside the certified
/// ball, where all of its transitions are faithful.
pub fn boundary_count(s: &Subgraph) -> Result<usize> {
    check_interior(s)?;
    Ok(s.boundary_slots())
}

pub(crate) fn check_interior(s: &Subgraph) -> Result<()> {
    let host = s.host();
    let Some(c) = host.certified_radius() else {
        return Ok(());
    };
    let dist = host.distances();
    for &v in s.vertices() {
        match dist[v] {
            Some(d) if d < c && host.is_complete_at(v) => {}
            Some(d) => {
                return Err(Error::RadiusNotCertified {
                    requested: d + 1,
                    certified: c,
                })
            }
            None => return Err(Error::SupportViolation { vertex: v }),
        }
    }
    Ok(())
}

/// A finite graph with no vertex of degree 1 and at least one edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreGraph {
    /// Vertex labels (host ids for cores of subgraphs).
    pub vertices: Vec<usize>,
    /// Edges as pairs of labels.
    pub edges: Vec<(usize, usize)>,
    /// `V − E`.
    pub chi: i64,
    /// `Σ (2n − deg)` over core vertices, loops counting 2.
    pub boundary: i64,
    pub ell: Girth,
}

impl CoreGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The core as a multigraph on positions in [`Self::vertices`].
    pub fn to_multigraph(&self) -> FiniteMultigraph {
        let pos = |x: usize| self.vertices.binary_search(&x).expect("edge endpoint in core");
        let edges = self.edges.iter().map(|&(u, w)| (pos(u), pos(w))).collect();
        FiniteMultigraph::new(self.vertices.len(), edges).expect("core edges are in range")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Core {
    /// The input was a tree.
    Trivial,
    Graph(CoreGraph),
}

impl Core {
    pub fn graph(&self) -> Option<&CoreGraph> {
        match self {
            Core::Trivial => None,
            Core::Graph(c) => Some(c),
        }
    }
}

/// Iteratively removes degree-1 vertices; returns the surviving vertex and
/// edge flags. The result does not depend on the removal order.
fn strip(m: &FiniteMultigraph) -> (Vec<bool>, Vec<bool>) {
    let nv = m.vertex_count();
    let mut deg = m.degrees();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, &(u, w)) in m.edges().iter().enumerate() {
        incident[u].push(i);
        if u != w {
            incident[w].push(i);
        }
    }
    let mut v_alive = vec![true; nv];
    let mut e_alive = vec![true; m.edge_count()];
    let mut queue: VecDeque<usize> = (0..nv).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !v_alive[v] || deg[v] > 1 {
            continue;
        }
        v_alive[v] = false;
        for &e in &incident[v] {
            if !e_alive[e] {
                continue;
            }
            e_alive[e] = false;
            let (a, b) = m.edges()[e];
            let other = if a == v { b } else { a };
            deg[other] -= 1;
            if deg[other] <= 1 && v_alive[other] {
                queue.push_back(other);
            }
        }
    }
    (v_alive, e_alive)
}

fn build_core(
    m: &FiniteMultigraph,
    labels: &[usize],
    boundary_of: impl Fn(&[bool]) -> i64,
) -> Result<Core> {
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    let (v_alive, e_alive) = strip(m);
    let edges: Vec<(usize, usize)> = m
        .edges()
        .iter()
        .zip(&e_alive)
        .filter(|(_, &a)| a)
        .map(|(&(u, w), _)| (labels[u], labels[w]))
        .collect();
    if edges.is_empty() {
        return Ok(Core::Trivial);
    }
    let vertices: Vec<usize> = (0..m.vertex_count())
        .filter(|&v| v_alive[v])
        .map(|v| labels[v])
        .collect();
    let chi = vertices.len() as i64 - edges.len() as i64;
    let boundary = boundary_of(&v_alive);
    let local = m.induced(&v_alive);
    Ok(Core::Graph(CoreGraph {
        vertices,
        edges,
        chi,
        boundary,
        ell: girth(&local),
    }))
}

/// Core of a connected subgraph, with boundary counted against the host.
pub fn core(s: &Subgraph) -> Result<Core> {
    let m = s.to_multigraph();
    build_core(&m, s.vertices(), |alive| {
        let kept: Vec<usize> = s
            .vertices()
            .iter()
            .zip(alive)
            .filter(|(_, &a)| a)
            .map(|(&v, _)| v)
            .collect();
        Subgraph::new(s.host(), kept).boundary_slots() as i64
    })
}

/// Core of an abstract connected multigraph viewed inside a `2n`-regular
/// host; boundary is `Σ (2n − deg)`.
pub fn core_of_multigraph(m: &FiniteMultigraph, rank: Rank) -> Result<Core> {
    let d = rank.degree();
    let deg = m.degrees();
    if let Some(v) = (0..m.vertex_count()).find(|&v| deg[v] > d) {
        return Err(Error::InvalidInput(format!(
            "vertex {v} has degree {} > {d}",
            deg[v]
        )));
    }
    let labels: Vec<usize> = (0..m.vertex_count()).collect();
    build_core(m, &labels, |alive| {
        let local = m.induced(alive);
        local.degrees().iter().map(|&k| (d - k) as i64).sum()
    })
}

/// `|∂C| = (2n − 2)|C| + 2χ(C)`, checked in exact integers.
pub fn euler_boundary_check(c: &CoreGraph, rank: Rank) -> bool {
    let n = rank.get() as i64;
    c.boundary == (2 * n - 2) * c.vertex_count() as i64 + 2 * c.chi
}

/// `|C| ≥ (2 − χ(C))(ℓ(C) − 1)` for a planar core with finite ℓ.
///
/// Planarity is established here; a nonplanar core is an error.
pub fn planar_core_size_check(c: &CoreGraph) -> Result<bool> {
    let verdict = crate::planar::is_planar(&c.to_multigraph());
    if !verdict.planar {
        return Err(Error::NotPlanar("core is not planar".into()));
    }
    let Girth::Finite(g) = c.ell else {
        return Err(Error::InvalidInput("core has infinite injectivity radius".into()));
    };
    // doubled: 2|C| ≥ (2 − χ)(2ℓ − 2)
    Ok(2 * c.vertex_count() as i64 >= (2 - c.chi) * (g as i64 - 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schreier::{ball, todd_coxeter, truncated_quotient, TruncateOptions};
    use crate::words::parse_relators;

    fn r2() -> Rank {
        Rank::new(2).unwrap()
    }

    fn grid(r: usize) -> SchreierGraph {
        let rels = parse_relators(r2(), "abAB").unwrap();
        truncated_quotient(r2(), &rels, TruncateOptions::new(r, r)).unwrap().0
    }

    fn cycle(m: usize) -> FiniteMultigraph {
        FiniteMultigraph::new(m, (0..m).map(|i| (i, (i + 1) % m)).collect()).unwrap()
    }

    #[test]
    fn path_has_trivial_core() {
        let p = FiniteMultigraph::new(5, (0..4).map(|i| (i, i + 1)).collect()).unwrap();
        assert_eq!(core_of_multigraph(&p, r2()).unwrap(), Core::Trivial);
        let single = FiniteMultigraph::new(1, vec![]).unwrap();
        assert_eq!(core_of_multigraph(&single, r2()).unwrap(), Core::Trivial);
    }

    #[test]
    fn cycle_with_pendant_path() {
        let mut edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend([(0, 5), (5, 6), (6, 7)]);
        let m = FiniteMultigraph::new(8, edges).unwrap();
        let c = core_of_multigraph(&m, r2()).unwrap();
        let c = c.graph().unwrap();
        assert_eq!(c.vertices, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.chi, 0);
        assert_eq!(c.ell, Girth::Finite(5));
    }

    #[test]
    fn disconnected_rejected() {
        let m = FiniteMultigraph::new(2, vec![]).unwrap();
        assert_eq!(core_of_multigraph(&m, r2()), Err(Error::Disconnected));
    }

    #[test]
    fn grid_ball_core() {
        let g = grid(3);
        let b = ball(&g, 2).unwrap();
        assert_eq!(b.len(), 13);
        let c = core(&b).unwrap();
        let c = c.graph().unwrap();
        assert_eq!(c.vertex_count(), 9);
        assert_eq!(c.edge_count(), 12);
        assert_eq!(c.chi, -3);
        assert!(euler_boundary_check(c, r2()));
        assert_eq!(c.ell, Girth::Finite(4));
    }

    #[test]
    fn boundary_examples() {
        let t = truncated_quotient(r2(), &[], TruncateOptions::new(2, 0)).unwrap().0;
        assert_eq!(boundary_count(&Subgraph::new(&t, vec![0])).unwrap(), 4);
        // leaf vertices sit on the edge of the certified window
        let leaf = t.vertex_count() - 1;
        assert!(boundary_count(&Subgraph::new(&t, vec![leaf])).is_err());

        let rose = todd_coxeter(r2(), &parse_relators(r2(), "a b").unwrap(), 4).unwrap();
        let s = Subgraph::new(&rose, vec![0]);
        assert_eq!(boundary_count(&s).unwrap(), 0);
        let c = core(&s).unwrap();
        let c = c.graph().unwrap();
        assert_eq!(c.chi, -1);
        assert!(euler_boundary_check(c, r2()));

        // unit square in the grid
        let g = grid(3);
        let sq = ["1", "a", "ab", "b"]
            .iter()
            .map(|w| g.read(0, &crate::words::parse_word(r2(), w).unwrap()).unwrap())
            .collect();
        let s = Subgraph::new(&g, sq);
        assert_eq!(boundary_count(&s).unwrap(), 8);
    }

    #[test]
    fn euler_examples() {
        let c5 = core_of_multigraph(&cycle(5), r2()).unwrap();
        let c5 = c5.graph().unwrap();
        assert_eq!(c5.boundary, 10);
        assert!(euler_boundary_check(c5, r2()));

        let theta = FiniteMultigraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        let th = core_of_multigraph(&theta, r2()).unwrap();
        let th = th.graph().unwrap();
        assert_eq!((th.chi, th.boundary), (-1, 2));
        assert!(euler_boundary_check(th, r2()));
        assert_eq!(th.ell, Girth::Finite(2));
        assert!(planar_core_size_check(th).unwrap());

        let sq = core_of_multigraph(&cycle(4), r2()).unwrap();
        assert!(planar_core_size_check(sq.graph().unwrap()).unwrap());
        let hex = core_of_multigraph(&cycle(6), r2()).unwrap();
        assert!(planar_core_size_check(hex.graph().unwrap()).unwrap());
    }

    #[test]
    fn nonplanar_core_rejected() {
        let k5 = FiniteMultigraph::complete(5);
        let r3 = Rank::new(3).unwrap();
        let c = core_of_multigraph(&k5, Rank::new(2).unwrap()).unwrap();
        assert!(matches!(planar_core_size_check(c.graph().unwrap()), Err(Error::NotPlanar(_))));
        assert!(core_of_multigraph(&FiniteMultigraph::complete(8), r3).is_err());
    }
}
