use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::planar::FiniteMultigraph;
use crate::schreier::{ball, SchreierGraph};

/// Length of a shortest non-backtracking closed edge path. The injectivity
/// radius is half of it, so storing the girth keeps half-integers exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    /// Injectivity radius `girth / 2`.
    pub fn ell(self) -> f64 {
        match self {
            Girth::Finite(g) => g as f64 / 2.0,
            Girth::Infinite => f64::INFINITY,
        }
    }

    pub fn min(self, other: Girth) -> Girth {
        match (self, other) {
            (Girth::Finite(a), Girth::Finite(b)) => Girth::Finite(a.min(b)),
            (Girth::Finite(a), Girth::Infinite) | (Girth::Infinite, Girth::Finite(a)) => Girth::Finite(a),
            (Girth::Infinite, Girth::Infinite) => Girth::Infinite,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

/// Shortest cycle of a multigraph; a loop has length 1 and a pair of
/// parallel edges length 2.
pub fn girth(m: &FiniteMultigraph) -> Girth {
    let nv = m.vertex_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (e, &(u, w)) in m.edges().iter().enumerate() {
        adj[u].push((w, e));
        if u != w {
            adj[w].push((u, e));
        }
    }
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; nv];
    let mut via = vec![usize::MAX; nv];
    let mut touched = Vec::new();
    for s in 0..nv {
        for &v in &touched {
            dist[v] = usize::MAX;
            via[v] = usize::MAX;
        }
        touched.clear();
        dist[s] = 0;
        touched.push(s);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &(w, e) in &adj[u] {
                if e == via[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    via[w] = e;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// Injectivity radius of a quotient graph measured inside its certified
/// window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectivityRadius {
    /// Shortest cycle found in the certified ball (or the whole exact graph).
    pub found: Girth,
    /// True when `found` is the girth of the whole quotient.
    pub exact: bool,
    /// Sound lower bound on the girth of the whole quotient.
    pub lower: Girth,
}

/// For a normal subgroup every vertex of the quotient looks like the
/// basepoint, so a cycle of length `m` can be moved through the basepoint
/// and then lies in the radius-`⌊m/2⌋` ball. A certified radius `c` thus
/// detects every cycle of length `≤ 2c + 1`.
pub fn injectivity_radius(g: &SchreierGraph) -> InjectivityRadius {
    match g.certified_radius() {
        None => {
            let all: Vec<usize> = (0..g.vertex_count()).collect();
            let found = girth(&crate::geometry::Subgraph::new(g, all).to_multigraph());
            InjectivityRadius {
                found,
                exact: true,
                lower: found,
            }
        }
        Some(c) => {
            let b = ball(g, c).expect("certified radius");
            let found = girth(&b.to_multigraph());
            match found {
                Girth::Finite(m) if m <= 2 * c + 1 => InjectivityRadius {
                    found,
                    exact: true,
                    lower: found,
                },
                _ => InjectivityRadius {
                    found,
                    exact: false,
                    lower: found.min(Girth::Finite(2 * c + 2)),
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schreier::{truncated_quotient, Preset, TruncateOptions};
    use crate::words::{parse_relators, Rank};

    fn r2() -> Rank {
        Rank::new(2).unwrap()
    }

    #[test]
    fn small_graphs() {
        let tri = FiniteMultigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(girth(&tri), Girth::Finite(3));
        let loop1 = FiniteMultigraph::new(2, vec![(0, 1), (1, 1)]).unwrap();
        assert_eq!(girth(&loop1), Girth::Finite(1));
        let par = FiniteMultigraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(girth(&par), Girth::Finite(2));
        let path = FiniteMultigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(girth(&path), Girth::Infinite);
        assert_eq!(girth(&FiniteMultigraph::new(1, vec![]).unwrap()), Girth::Infinite);
        assert_eq!(girth(&FiniteMultigraph::complete_bipartite(3, 3)), Girth::Finite(4));
        // petersen graph
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        assert_eq!(girth(&FiniteMultigraph::new(10, e).unwrap()), Girth::Finite(5));
    }

    #[test]
    fn quotient_examples() {
        let grid = truncated_quotient(r2(), &parse_relators(r2(), "abAB").unwrap(), TruncateOptions::new(4, 3))
            .unwrap()
            .0;
        let ir = injectivity_radius(&grid);
        assert_eq!(ir.found, Girth::Finite(4));
        assert!(ir.exact);
        assert_eq!(ir.found.ell(), 2.0);

        let rels = Preset::Powers(6).relators(r2()).unwrap();
        let p6 = truncated_quotient(r2(), &rels, TruncateOptions::new(5, 2)).unwrap().0;
        let ir = injectivity_radius(&p6);
        assert_eq!(ir.found, Girth::Finite(6));
        assert!(ir.exact);

        let tree = truncated_quotient(r2(), &[], TruncateOptions::new(4, 0)).unwrap().0;
        let ir = injectivity_radius(&tree);
        assert_eq!(ir.found, Girth::Infinite);
        assert!(!ir.exact);
        assert_eq!(ir.lower, Girth::Finite(10));
    }
}
