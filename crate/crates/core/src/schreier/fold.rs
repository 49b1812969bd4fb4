//! Stallings-type folding of labelled pre-graphs.

use std::collections::VecDeque;

use super::{Exactness, SchreierGraph, UNDEF};
use crate::words::{Letter, Rank, ReducedWord};

/// A labelled graph that may have several same-labelled edges leaving one
/// vertex. Each edge `(u, x, v)` also stands for its reverse `(v, x⁻¹, u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreGraph {
    rank: Rank,
    vertex_count: usize,
    basepoint: usize,
    edges: Vec<(usize, Letter, usize)>,
}

impl PreGraph {
    /// A single basepoint vertex and no edges.
    pub fn new(rank: Rank) -> Self {
        PreGraph {
            rank,
            vertex_count: 1,
            basepoint: 0,
            edges: Vec::new(),
        }
    }

    /// The radius-`r` ball of the tree `T_n`, with vertices numbered in BFS
    /// order (vertex 0 is the identity).
    pub fn tree_ball(rank: Rank, r: usize) -> Self {
        let mut g = PreGraph::new(rank);
        let mut queue = VecDeque::from([(0usize, usize::MAX, 0usize)]);
        while let Some((v, last, depth)) = queue.pop_front() {
            if depth == r {
                continue;
            }
            for code in 0..rank.degree() {
                if last != usize::MAX && code == last ^ 1 {
                    continue;
                }
                let w = g.add_vertex();
                g.add_edge(v, Letter::from_code(code), w);
                queue.push_back((w, code, depth + 1));
            }
        }
        g
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn edges(&self) -> &[(usize, Letter, usize)] {
        &self.edges
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, u: usize, letter: Letter, v: usize) {
        assert!(u < self.vertex_count && v < self.vertex_count, "edge endpoint out of range");
        assert!(letter.in_rank(self.rank), "letter outside rank");
        self.edges.push((u, letter, v));
    }

    /// Glues a closed path reading `word` at `v` through fresh vertices.
    pub fn attach_loop(&mut self, v: usize, word: &ReducedWord) {
        let letters = word.letters();
        let Some((&last, init)) = letters.split_last() else {
            return;
        };
        let mut cur = v;
        for &l in init {
            let w = self.add_vertex();
            self.add_edge(cur, l, w);
            cur = w;
        }
        self.add_edge(cur, last, v);
    }

    /// Same pre-graph with edges listed in a different order and vertex ids
    /// permuted by `perm` (old id -> new id).
    pub fn reordered(&self, edge_order: &[usize], perm: &[usize]) -> PreGraph {
        assert_eq!(edge_order.len(), self.edges.len());
        assert_eq!(perm.len(), self.vertex_count);
        PreGraph {
            rank: self.rank,
            vertex_count: self.vertex_count,
            basepoint: perm[self.basepoint],
            edges: edge_order
                .iter()
                .map(|&i| {
                    let (u, l, v) = self.edges[i];
                    (perm[u], l, perm[v])
                })
                .collect(),
        }
    }
}

struct Folder {
    d: usize,
    parent: Vec<u32>,
    table: Vec<u32>,
    work: Vec<(u32, u32, u32)>,
}

impl Folder {
    fn new(d: usize, nv: usize) -> Self {
        Folder {
            d,
            parent: (0..nv as u32).collect(),
            table: vec![UNDEF; nv * d],
            work: Vec::new(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn add_edge(&mut self, u: usize, code: usize, v: usize) {
        self.work.push((u as u32, code as u32, v as u32));
        while let Some((u, c, v)) = self.work.pop() {
            self.set(u as usize, c as usize, v as usize);
            self.set(v as usize, c as usize ^ 1, u as usize);
        }
    }

    fn set(&mut self, a: usize, code: usize, b: usize) {
        let a = self.find(a);
        let b = self.find(b);
        let slot = a * self.d + code;
        let cur = self.table[slot];
        if cur == UNDEF {
            self.table[slot] = b as u32;
            return;
        }
        let cur = self.find(cur as usize);
        if cur != b {
            self.union(cur, b);
        }
    }

    fn union(&mut self, x: usize, y: usize) {
        let (keep, gone) = if x < y { (x, y) } else { (y, x) };
        self.parent[gone] = keep as u32;
        for code in 0..self.d {
            let slot = gone * self.d + code;
            let t = self.table[slot];
            if t != UNDEF {
                self.table[slot] = UNDEF;
                self.work.push((keep as u32, code as u32, t));
            }
        }
    }

    fn finish(mut self, rank: Rank, basepoint: usize) -> SchreierGraph {
        for slot in 0..self.table.len() {
            let t = self.table[slot];
            if t != UNDEF {
                self.table[slot] = self.find(t as usize) as u32;
            }
        }
        let base = self.find(basepoint);
        let raw = SchreierGraph::from_raw(rank, self.table, base, Exactness::Exact);
        let mut g = raw.canonical();
        g.set_exactness(folded_exactness(&g));
        g
    }
}

/// A folded graph is the whole quotient when it is complete; otherwise its
/// balls are faithful up to the distance of the nearest incomplete vertex.
fn folded_exactness(g: &SchreierGraph) -> Exactness {
    let dist = g.distances();
    (0..g.vertex_count())
        .filter(|&v| !g.is_complete_at(v))
        .filter_map(|v| dist[v])
        .min()
        .map_or(Exactness::Exact, |d| Exactness::Approx { certified_radius: d })
}

/// Folds until deterministic. The result is canonically labelled from the
/// basepoint and does not depend on edge order or vertex numbering.
pub fn fold(pre: &PreGraph) -> SchreierGraph {
    let mut f = Folder::new(pre.rank.degree(), pre.vertex_count);
    for &(u, l, v) in &pre.edges {
        f.add_edge(u, l.code(), v);
    }
    f.finish(pre.rank, pre.basepoint)
}
