//! Planarity of finite multigraphs and of quotient-graph windows.

mod lr;

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schreier::{ball, SchreierGraph};

/// Undirected multigraph; loops and parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMultigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl FiniteMultigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, w)) = edges.iter().find(|&&(u, w)| u >= vertex_count || w >= vertex_count) {
            return Err(Error::InvalidInput(format!(
                "edge ({u}, {w}) has an endpoint outside 0..{vertex_count}"
            )));
        }
        Ok(FiniteMultigraph {
            vertex_count,
            edges,
        })
    }

    pub fn complete(k: usize) -> Self {
        let edges = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        FiniteMultigraph {
            vertex_count: k,
            edges,
        }
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
        FiniteMultigraph {
            vertex_count: a + b,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Degrees with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(u, w) in &self.edges {
            deg[u] += 1;
            deg[w] += 1;
        }
        deg
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, w) in &self.edges {
            adj[u].push(w);
            adj[w].push(u);
        }
        adj
    }

    pub fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut count = 0;
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Subgraph induced on the flagged vertices, renumbered in order.
    pub fn induced(&self, keep: &[bool]) -> FiniteMultigraph {
        let mut id = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            if keep[v] {
                id[v] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, w)| keep[u] && keep[w])
            .map(|&(u, w)| (id[u], id[w]))
            .collect();
        FiniteMultigraph {
            vertex_count: next,
            edges,
        }
    }

    /// Same graph with vertex `v` renamed `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> FiniteMultigraph {
        assert_eq!(perm.len(), self.vertex_count);
        FiniteMultigraph {
            vertex_count: self.vertex_count,
            edges: self.edges.iter().map(|&(u, w)| (perm[u], perm[w])).collect(),
        }
    }

    /// Drops loops and subdivides every repeated edge, giving a simple graph
    /// that is planar exactly when `self` is.
    pub fn normalized(&self) -> FiniteMultigraph {
        let mut seen = HashSet::new();
        let mut nv = self.vertex_count;
        let mut edges = Vec::new();
        for &(u, w) in &self.edges {
            if u == w {
                continue;
            }
            let key = (u.min(w), u.max(w));
            if seen.insert(key) {
                edges.push(key);
            } else {
                edges.push((u, nv));
                edges.push((nv, w));
                nv += 1;
            }
        }
        FiniteMultigraph {
            vertex_count: nv,
            edges,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    /// More than `3V − 6` edges after normalization.
    EdgeBound,
    /// The left-right constraints admit no consistent assignment; the graph
    /// contains a subdivision of K5 or K3,3.
    LrConflict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Clockwise neighbour order around every vertex of the normalized
    /// graph; vertices past the input's range are subdivision points.
    Rotation {
        vertex_count: usize,
        faces: usize,
        rotation: Vec<Vec<usize>>,
    },
    Obstruction { tag: Obstruction },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarityVerdict {
    pub planar: bool,
    /// False for planar verdicts on windows of a larger graph, which are
    /// evidence rather than proof.
    pub conclusive: bool,
    pub witness: Witness,
}

/// Number of faces traced by a rotation system.
pub fn count_faces(rotation: &[Vec<usize>]) -> usize {
    let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
    for (v, nbrs) in rotation.iter().enumerate() {
        for (i, &w) in nbrs.iter().enumerate() {
            pos.insert((v, w), i);
        }
    }
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut faces = 0;
    for (v, nbrs) in rotation.iter().enumerate() {
        for &w in nbrs {
            if used.contains(&(v, w)) {
                continue;
            }
            faces += 1;
            let (mut a, mut b) = (v, w);
            while used.insert((a, b)) {
                // next dart: at b, turn to the neighbour after a
                let rb = &rotation[b];
                let i = pos[&(b, a)];
                let c = rb[(i + 1) % rb.len()];
                (a, b) = (b, c);
            }
        }
    }
    faces
}

/// Euler's formula for a rotation system of a simple graph: every connected
/// component with an edge contributes `V − E + F = 2`.
pub fn rotation_is_planar(g: &FiniteMultigraph, rotation: &[Vec<usize>]) -> bool {
    let faces = count_faces(rotation) as i64;
    let isolated = g.degrees().iter().filter(|&&d| d == 0).count() as i64;
    let comps = g.component_count() as i64;
    g.vertex_count() as i64 - g.edge_count() as i64 + faces == 2 * (comps - isolated) + isolated
}

pub fn is_planar(g: &FiniteMultigraph) -> PlanarityVerdict {
    let s = g.normalized();
    let nv = s.vertex_count();
    if nv > 2 && s.edge_count() > 3 * nv - 6 {
        return PlanarityVerdict {
            planar: false,
            conclusive: true,
            witness: Witness::Obstruction {
                tag: Obstruction::EdgeBound,
            },
        };
    }
    match lr::lr_planarity(nv, s.edges()) {
        Some(rotation) => {
            assert!(
                rotation_is_planar(&s, &rotation),
                "left-right embedding failed the face-count check"
            );
            PlanarityVerdict {
                planar: true,
                conclusive: true,
                witness: Witness::Rotation {
                    vertex_count: nv,
                    faces: count_faces(&rotation),
                    rotation,
                },
            }
        }
        None => PlanarityVerdict {
            planar: false,
            conclusive: true,
            witness: Witness::Obstruction {
                tag: Obstruction::LrConflict,
            },
        },
    }
}

/// Planarity of the radius-`r` ball. A nonplanar ball refutes planarity of
/// the whole quotient; a planar one is only window evidence unless the ball
/// is the entire exact graph.
pub fn check_quotient_planarity(g: &SchreierGraph, r: usize) -> Result<PlanarityVerdict> {
    let b = ball(g, r)?;
    let whole = g.is_exact() && b.len() == g.vertex_count();
    let mut v = is_planar(&b.to_multigraph());
    if v.planar && !whole {
        v.conclusive = false;
    }
    Ok(v)
}
