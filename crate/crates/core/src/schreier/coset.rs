//! Coset table with HLT scanning and union-find coincidence processing,
//! shared by full enumeration and windowed closure.

use super::{Exactness, SchreierGraph, UNDEF};
use crate::error::{Error, Result};
use crate::words::Rank;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cap {
    /// Live cosets; exceeding it means the quotient may be infinite.
    Live(usize),
    /// Allocated rows; exceeding it is a resource failure.
    Allocated(usize),
}

pub(crate) struct CosetTable {
    rank: Rank,
    d: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    cap: Cap,
    /// Definitions, deductions and merges performed so far.
    pub changes: usize,
}

impl CosetTable {
    pub fn new(rank: Rank, cap: Cap) -> Self {
        let d = rank.degree();
        CosetTable {
            rank,
            d,
            table: vec![UNDEF; d],
            parent: vec![0],
            live: 1,
            cap,
            changes: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    pub fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.d + x]
    }

    #[inline]
    fn put(&mut self, c: usize, x: usize, v: u32) {
        self.table[c * self.d + x] = v;
    }

    #[inline]
    pub fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    pub fn define(&mut self, c: usize, x: usize) -> Result<()> {
        match self.cap {
            Cap::Live(cap) if self.live >= cap => return Err(Error::Overflow { cap }),
            Cap::Allocated(cap) if self.parent.len() >= cap => {
                return Err(Error::ResourceCap {
                    what: "coset table rows",
                    cap,
                })
            }
            _ => {}
        }
        let new = self.parent.len();
        self.parent.push(new as u32);
        self.table.extend(std::iter::repeat_n(UNDEF, self.d));
        self.put(c, x, new as u32);
        self.put(new, x ^ 1, c as u32);
        self.live += 1;
        self.changes += 1;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = c;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let k = self.rep(k);
        let l = self.rep(l);
        if k == l {
            return;
        }
        let (keep, gone) = if k < l { (k, l) } else { (l, k) };
        self.parent[gone] = keep as u32;
        self.live -= 1;
        self.changes += 1;
        queue.push(gone);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.d {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                let f = f as usize;
                self.put(f, x ^ 1, UNDEF);
                let mu = self.rep(e);
                let nu = self.rep(f);
                let mx = self.get(mu, x);
                if mx != UNDEF {
                    self.merge(nu, mx as usize, &mut queue);
                } else {
                    let nx = self.get(nu, x ^ 1);
                    if nx != UNDEF {
                        self.merge(mu, nx as usize, &mut queue);
                    } else {
                        self.put(mu, x, nu as u32);
                        self.put(nu, x ^ 1, mu as u32);
                    }
                }
            }
        }
    }

    /// Traces `w` from live coset `c` in both directions, defining cosets
    /// until the relator closes, then identifies the ends.
    pub fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]) as usize;
                i += 1;
            }
            if (i as isize) > j {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, w[j as usize] ^ 1) != UNDEF {
                b = self.get(b, w[j as usize] ^ 1) as usize;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                // deduction closes the relator cycle
                self.put(f, w[i], b as u32);
                self.put(b, w[i] ^ 1, f as u32);
                self.changes += 1;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    /// BFS over live cosets from coset 0, defining every missing transition
    /// at distance `< radius`. Returns the cosets at distance `≤ radius` in
    /// BFS order.
    pub fn complete_within(&mut self, radius: usize) -> Result<Vec<usize>> {
        let mut dist = vec![usize::MAX; self.parent.len()];
        let mut order = vec![0usize];
        dist[0] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            if dist[v] >= radius {
                continue;
            }
            for x in 0..self.d {
                if self.get(v, x) == UNDEF {
                    self.define(v, x)?;
                    dist.push(usize::MAX);
                }
                let t = self.get(v, x) as usize;
                if dist[t] == usize::MAX {
                    dist[t] = dist[v] + 1;
                    order.push(t);
                }
            }
        }
        Ok(order)
    }

    /// BFS over live cosets from coset 0 that scans every relator at each
    /// coset within distance `radius` before defining its missing
    /// transitions, so relator cycles close as early as possible.
    pub fn scan_within(&mut self, radius: usize, rels: &[Vec<usize>]) -> Result<()> {
        let mut dist = vec![usize::MAX; self.parent.len()];
        let mut order = vec![0usize];
        dist[0] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = self.rep(order[head]);
            let dv = dist[order[head]];
            head += 1;
            if v != order[head - 1] {
                // merged while queued; its representative is queued separately
                if dist[v] != usize::MAX {
                    continue;
                }
                dist[v] = dv;
            }
            for w in rels {
                if !self.is_live(v) {
                    break;
                }
                self.scan_and_fill(v, w)?;
            }
            if !self.is_live(v) || dv >= radius {
                continue;
            }
            for x in 0..self.d {
                if self.get(v, x) == UNDEF {
                    self.define(v, x)?;
                }
                let t = self.get(v, x) as usize;
                if dist.len() < self.parent.len() {
                    dist.resize(self.parent.len(), usize::MAX);
                }
                if dist[t] == usize::MAX {
                    dist[t] = dv + 1;
                    order.push(t);
                }
            }
        }
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        (0..self.parent.len())
            .filter(|&c| self.is_live(c))
            .all(|c| (0..self.d).all(|x| self.get(c, x) != UNDEF))
    }

    /// Live cosets reachable from coset 0 as a canonically labelled graph.
    pub fn to_graph(&self, exactness: Exactness) -> SchreierGraph {
        SchreierGraph::from_raw(self.rank, self.table.clone(), 0, exactness).canonical()
    }
}
