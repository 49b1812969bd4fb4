//! Quotient graphs `T_n / N` of the free-group Cayley tree.
//!
//! A [`SchreierGraph`] is a basepointed, letter-labelled, deterministic graph.
//! Finite quotients come out of [`todd_coxeter`] as exact graphs; infinite
//! quotients are observed through finite windows built by
//! [`truncated_quotient`], which carry a certified radius.

mod coset;
mod dump;
mod fold;
mod presets;
mod todd_coxeter;
mod truncate;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Subgraph;
use crate::words::{Letter, Rank, ReducedWord};

pub use dump::{read_dump, write_dump};
pub use fold::{fold, PreGraph};
pub use presets::Preset;
pub use todd_coxeter::todd_coxeter;
pub use truncate::{truncated_quotient, BuildDiagnostics, TruncateOptions};

pub(crate) const UNDEF: u32 = u32::MAX;

/// How faithfully a graph represents its quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    /// The whole (finite) quotient graph; every transition is defined.
    Exact,
    /// A window whose radius-`certified_radius` ball around the basepoint is
    /// believed to coincide with the quotient's.
    Approx { certified_radius: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierGraph {
    rank: Rank,
    // `table[v * 2n + letter]`, UNDEF where undefined.
    table: Vec<u32>,
    basepoint: usize,
    exactness: Exactness,
}

impl SchreierGraph {
    /// Builds a graph from a raw transition table and validates determinism,
    /// involution and (for exact graphs) totality.
    pub fn from_table(
        rank: Rank,
        table: Vec<Option<usize>>,
        basepoint: usize,
        exactness: Exactness,
    ) -> Result<Self> {
        let d = rank.degree();
        if !table.len().is_multiple_of(d) {
            return Err(Error::InvalidInput(format!(
                "table length {} is not a multiple of {d}",
                table.len()
            )));
        }
        let nv = table.len() / d;
        if basepoint >= nv.max(1) {
            return Err(Error::InvalidInput(format!("basepoint {basepoint} out of range")));
        }
        let mut raw = Vec::with_capacity(table.len());
        for t in table {
            match t {
                Some(t) if t >= nv => {
                    return Err(Error::InvalidInput(format!("target {t} out of range")))
                }
                Some(t) => raw.push(t as u32),
                None => raw.push(UNDEF),
            }
        }
        let g = SchreierGraph {
            rank,
            table: raw,
            basepoint,
            exactness,
        };
        g.validate()?;
        Ok(g)
    }

    pub(crate) fn from_raw(rank: Rank, table: Vec<u32>, basepoint: usize, exactness: Exactness) -> Self {
        SchreierGraph {
            rank,
            table,
            basepoint,
            exactness,
        }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.table.len() / self.rank.degree()
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    pub(crate) fn set_exactness(&mut self, e: Exactness) {
        self.exactness = e;
    }

    /// `None` means every radius is certified (exact graphs).
    pub fn certified_radius(&self) -> Option<usize> {
        match self.exactness {
            Exactness::Exact => None,
            Exactness::Approx { certified_radius } => Some(certified_radius),
        }
    }

    pub fn check_radius(&self, r: usize) -> Result<()> {
        match self.certified_radius() {
            Some(c) if r > c => Err(Error::RadiusNotCertified {
                requested: r,
                certified: c,
            }),
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn target(&self, v: usize, letter: Letter) -> Option<usize> {
        self.target_code(v, letter.code())
    }

    #[inline]
    pub fn target_code(&self, v: usize, code: usize) -> Option<usize> {
        let t = self.table[v * self.rank.degree() + code];
        (t != UNDEF).then_some(t as usize)
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u32] {
        let d = self.rank.degree();
        &self.table[v * d..(v + 1) * d]
    }

    /// Number of defined transitions at `v`; a loop contributes 2.
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().filter(|&&t| t != UNDEF).count()
    }

    pub fn is_complete_at(&self, v: usize) -> bool {
        self.row(v).iter().all(|&t| t != UNDEF)
    }

    /// Follows a word from `v`; `None` if some transition is undefined.
    pub fn read(&self, v: usize, word: &ReducedWord) -> Option<usize> {
        word.letters()
            .iter()
            .try_fold(v, |cur, &l| self.target(cur, l))
    }

    /// Scans the whole table for determinism, involution and, on exact
    /// graphs, totality.
    pub fn validate(&self) -> Result<()> {
        let d = self.rank.degree();
        for v in 0..self.vertex_count() {
            for code in 0..d {
                if let Some(t) = self.target_code(v, code) {
                    if self.target_code(t, code ^ 1) != Some(v) {
                        return Err(Error::InvalidInput(format!(
                            "involution fails at vertex {v}, letter {}",
                            Letter::from_code(code)
                        )));
                    }
                } else if self.is_exact() {
                    return Err(Error::InvalidInput(format!(
                        "exact graph has undefined transition at vertex {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// BFS distances from the basepoint; `None` for unreachable vertices.
    pub fn distances(&self) -> Vec<Option<usize>> {
        self.distances_from(self.basepoint)
    }

    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        if self.vertex_count() == 0 {
            return dist;
        }
        let mut queue = VecDeque::from([source]);
        dist[source] = Some(0);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &t in self.row(v) {
                if t != UNDEF && dist[t as usize].is_none() {
                    dist[t as usize] = Some(dv + 1);
                    queue.push_back(t as usize);
                }
            }
        }
        dist
    }

    /// Undirected edges, each reported once as `(v, positive letter, target)`.
    /// Loops appear once; a pair of vertices joined by `a` in both directions
    /// yields two parallel edges.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        let d = self.rank.degree();
        (0..self.vertex_count()).flat_map(move |v| {
            (0..d).step_by(2).filter_map(move |code| {
                self.target_code(v, code)
                    .map(|t| (v, Letter::from_code(code), t))
            })
        })
    }

    /// Canonical relabelling: BFS from the basepoint visiting letters in
    /// order; vertex ids are discovery order, and vertices farther than
    /// `radius` (or unreachable) are dropped. Two basepointed graphs are
    /// label-isomorphic iff their canonical tables are equal.
    pub fn canonical_table(&self, radius: Option<usize>) -> Vec<u32> {
        let (table, _) = self.canonical_parts(radius);
        table
    }

    fn canonical_parts(&self, radius: Option<usize>) -> (Vec<u32>, Vec<usize>) {
        let d = self.rank.degree();
        let nv = self.vertex_count();
        let mut new_id = vec![UNDEF; nv];
        let mut dist = vec![0usize; nv];
        let mut order = Vec::new();
        if nv == 0 {
            return (Vec::new(), order);
        }
        new_id[self.basepoint] = 0;
        order.push(self.basepoint);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            if radius.is_some_and(|r| dist[v] >= r) {
                continue;
            }
            for &t in self.row(v) {
                if t != UNDEF && new_id[t as usize] == UNDEF {
                    new_id[t as usize] = order.len() as u32;
                    dist[t as usize] = dist[v] + 1;
                    order.push(t as usize);
                }
            }
        }
        let mut table = Vec::with_capacity(order.len() * d);
        for &v in &order {
            for &t in self.row(v) {
                table.push(if t == UNDEF { UNDEF } else { new_id[t as usize] });
            }
        }
        (table, order)
    }

    /// Canonically relabelled copy keeping only the vertices reachable from
    /// the basepoint; the basepoint becomes vertex 0.
    pub fn canonical(&self) -> SchreierGraph {
        let (table, _) = self.canonical_parts(None);
        SchreierGraph::from_raw(self.rank, table, 0, self.exactness)
    }

    /// Induced subgraph on the radius-`r` ball as a standalone window,
    /// canonically relabelled. Exact graphs whose whole vertex set lies in
    /// the ball stay exact.
    pub fn restrict_to_ball(&self, r: usize) -> SchreierGraph {
        let (table, order) = self.canonical_parts(Some(r));
        let whole = order.len() == self.vertex_count();
        let exactness = match self.exactness {
            Exactness::Exact if whole => Exactness::Exact,
            Exactness::Exact => Exactness::Approx { certified_radius: r },
            Exactness::Approx { certified_radius } => Exactness::Approx {
                certified_radius: certified_radius.min(r),
            },
        };
        SchreierGraph::from_raw(self.rank, table, 0, exactness)
    }

    /// Label-preserving basepointed isomorphism of the radius-`r` balls.
    pub fn ball_isomorphic(&self, other: &SchreierGraph, r: usize) -> bool {
        self.rank == other.rank && self.canonical_table(Some(r)) == other.canonical_table(Some(r))
    }

    /// Basepointed isomorphism of the reachable parts.
    pub fn isomorphic(&self, other: &SchreierGraph) -> bool {
        self.rank == other.rank && self.canonical_table(None) == other.canonical_table(None)
    }
}

/// Vertex set at distance `≤ r` from the basepoint, with induced edges.
pub fn ball(g: &SchreierGraph, r: usize) -> Result<Subgraph<'_>> {
    g.check_radius(r)?;
    let dist = g.distances();
    let verts: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| dist[v].is_some_and(|d| d <= r))
        .collect();
    Ok(Subgraph::new(g, verts))
}
