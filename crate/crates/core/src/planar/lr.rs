//! Left-right planarity test and embedding for simple graphs.
//!
//! Iterative: DFS orientation with
//! lowpoints and nesting depths, conflict-pair testing, then embedding by a
//! second DFS. Returns a clockwise rotation system or `None`.

use std::collections::HashMap;

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy)]
struct ConflictPair {
    id: usize,
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct State {
    // oriented edges: index = undirected edge id after orientation
    src: Vec<usize>,
    dst: Vec<usize>,
    height: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<i64>,
    out: Vec<Vec<usize>>,
    ordered: Vec<Vec<usize>>,
    refs: Vec<Option<usize>>,
    side: Vec<i64>,
    stack: Vec<ConflictPair>,
    next_id: usize,
    stack_bottom: Vec<Option<usize>>,
    lowpt_edge: Vec<usize>,
    roots: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl State {
    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        !i.is_empty() && self.lowpt[i.high.unwrap()] > self.lowpt[b]
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.is_empty() {
            return self.lowpt[p.right.low.unwrap()];
        }
        if p.right.is_empty() {
            return self.lowpt[p.left.low.unwrap()];
        }
        self.lowpt[p.left.low.unwrap()].min(self.lowpt[p.right.low.unwrap()])
    }

    fn push(&mut self, left: Interval, right: Interval) {
        let id = self.next_id;
        self.next_id += 1;
        self.stack.push(ConflictPair { id, left, right });
    }

    fn top_id(&self) -> Option<usize> {
        self.stack.last().map(|p| p.id)
    }

    fn orient(&mut self, adj: &[Vec<(usize, usize)>], root: usize) {
        let nv = adj.len();
        let mut ptr = vec![0usize; nv];
        let mut oriented = vec![false; self.src.len()];
        let mut awaiting = vec![false; nv];
        let mut frames = vec![root];
        while let Some(&v) = frames.last() {
            if ptr[v] == adj[v].len() {
                frames.pop();
                continue;
            }
            let (w, e) = adj[v][ptr[v]];
            if awaiting[v] {
                awaiting[v] = false;
                self.after_orient(v, e);
                ptr[v] += 1;
                continue;
            }
            if oriented[e] {
                ptr[v] += 1;
                continue;
            }
            oriented[e] = true;
            self.src[e] = v;
            self.dst[e] = w;
            self.out[v].push(e);
            self.lowpt[e] = self.height[v];
            self.lowpt2[e] = self.height[v];
            if self.height[w] == NONE {
                self.parent_edge[w] = Some(e);
                self.height[w] = self.height[v] + 1;
                awaiting[v] = true;
                frames.push(w);
            } else {
                self.lowpt[e] = self.height[w];
                self.after_orient(v, e);
                ptr[v] += 1;
            }
        }
    }

    fn after_orient(&mut self, v: usize, vw: usize) {
        self.nesting_depth[vw] = 2 * self.lowpt[vw] as i64;
        if self.lowpt2[vw] < self.height[v] {
            self.nesting_depth[vw] += 1;
        }
        if let Some(e) = self.parent_edge[v] {
            if self.lowpt[vw] < self.lowpt[e] {
                self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                self.lowpt[e] = self.lowpt[vw];
            } else if self.lowpt[vw] > self.lowpt[e] {
                self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
            } else {
                self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
            }
        }
    }

    fn test(&mut self, root: usize) -> bool {
        let nv = self.height.len();
        let mut ptr = vec![0usize; nv];
        let mut awaiting = vec![false; nv];
        let mut frames = vec![root];
        while let Some(&v) = frames.last() {
            let e = self.parent_edge[v];
            if ptr[v] == self.ordered[v].len() {
                frames.pop();
                if let Some(e) = e {
                    self.remove_back_edges(e);
                }
                continue;
            }
            let ei = self.ordered[v][ptr[v]];
            let w = self.dst[ei];
            if !awaiting[v] {
                self.stack_bottom[ei] = self.top_id();
                if self.parent_edge[w] == Some(ei) {
                    awaiting[v] = true;
                    frames.push(w);
                    continue;
                }
                self.lowpt_edge[ei] = ei;
                self.push(
                    Interval::default(),
                    Interval {
                        low: Some(ei),
                        high: Some(ei),
                    },
                );
            } else {
                awaiting[v] = false;
            }
            if self.lowpt[ei] < self.height[v] {
                let e = e.expect("non-root vertex");
                if ptr[v] == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
            ptr[v] += 1;
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p_left = Interval::default();
        let mut p_right = Interval::default();
        loop {
            let mut q = self.stack.pop().expect("conflict stack underflow");
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            if self.lowpt[q.right.low.unwrap()] > self.lowpt[e] {
                if p_right.is_empty() {
                    p_right = q.right;
                } else {
                    self.refs[p_right.low.unwrap()] = q.right.high;
                }
                p_right.low = q.right.low;
            } else {
                self.refs[q.right.low.unwrap()] = Some(self.lowpt_edge[e]);
            }
            if self.top_id() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(pl) = p_right.low {
                self.refs[pl] = q.right.high;
            }
            if q.right.low.is_some() {
                p_right.low = q.right.low;
            }
            if p_left.is_empty() {
                p_left = q.left;
            } else {
                self.refs[p_left.low.unwrap()] = q.left.high;
            }
            p_left.low = q.left.low;
        }
        if !(p_left.is_empty() && p_right.is_empty()) {
            self.push(p_left, p_right);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            let p = self.stack.pop().unwrap();
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.dst[h] != u {
                    break;
                }
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low;
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.dst[h] != u {
                    break;
                }
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.refs[r] = p.left.low;
                    self.side[r] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            let top = self.stack.last().expect("return edge on stack");
            let (hl, hr) = (top.left.high, top.right.high);
            self.refs[e] = match (hl, hr) {
                (Some(l), None) => Some(l),
                (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                _ => hr,
            };
        }
    }

    fn sign(&mut self, e: usize) -> i64 {
        // resolve the reference chain iteratively
        let mut chain = vec![e];
        while let Some(r) = self.refs[*chain.last().unwrap()] {
            chain.push(r);
        }
        for i in (0..chain.len() - 1).rev() {
            let (a, b) = (chain[i], chain[i + 1]);
            self.side[a] *= self.side[b];
            self.refs[a] = None;
        }
        self.side[e]
    }
}

/// Rotation system under construction: circular neighbour lists.
struct Embedding {
    cw: HashMap<(usize, usize), usize>,
    ccw: HashMap<(usize, usize), usize>,
    first: Vec<Option<usize>>,
}

impl Embedding {
    fn add_cw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        match reference {
            None => {
                self.cw.insert((v, w), w);
                self.ccw.insert((v, w), w);
                self.first[v] = Some(w);
            }
            Some(r) => {
                let cw_ref = self.cw[&(v, r)];
                self.cw.insert((v, r), w);
                self.cw.insert((v, w), cw_ref);
                self.ccw.insert((v, cw_ref), w);
                self.ccw.insert((v, w), r);
            }
        }
    }

    fn add_ccw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        match reference {
            None => self.add_cw(v, w, None),
            Some(r) => {
                let ccw_ref = self.ccw[&(v, r)];
                self.add_cw(v, w, Some(ccw_ref));
                if self.first[v] == Some(r) {
                    self.first[v] = Some(w);
                }
            }
        }
    }

    fn add_first(&mut self, v: usize, w: usize) {
        let reference = self.first[v];
        self.add_ccw(v, w, reference);
        self.first[v] = Some(w);
    }

    fn rotation(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(f) = self.first[v] {
            let mut cur = f;
            loop {
                out.push(cur);
                cur = self.cw[&(v, cur)];
                if cur == f {
                    break;
                }
            }
        }
        out
    }
}

/// Clockwise rotation system of a planar embedding of the simple graph
/// `edges` on `nv` vertices, or `None` if the graph is not planar.
pub(crate) fn lr_planarity(nv: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let m = edges.len();
    if nv > 2 && m > 3 * nv - 6 {
        return None;
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (e, &(u, w)) in edges.iter().enumerate() {
        adj[u].push((w, e));
        adj[w].push((u, e));
    }
    let mut st = State {
        src: vec![NONE; m],
        dst: vec![NONE; m],
        height: vec![NONE; nv],
        parent_edge: vec![None; nv],
        lowpt: vec![0; m],
        lowpt2: vec![0; m],
        nesting_depth: vec![0; m],
        out: vec![Vec::new(); nv],
        ordered: Vec::new(),
        refs: vec![None; m],
        side: vec![1; m],
        stack: Vec::new(),
        next_id: 0,
        stack_bottom: vec![None; m],
        lowpt_edge: vec![NONE; m],
        roots: Vec::new(),
    };
    for v in 0..nv {
        if st.height[v] == NONE {
            st.height[v] = 0;
            st.roots.push(v);
            st.orient(&adj, v);
        }
    }
    st.ordered = st
        .out
        .iter()
        .map(|es| {
            let mut es = es.clone();
            es.sort_by_key(|&e| st.nesting_depth[e]);
            es
        })
        .collect();
    for r in st.roots.clone() {
        if !st.test(r) {
            return None;
        }
    }
    for e in 0..m {
        let s = st.sign(e);
        st.nesting_depth[e] *= s;
    }
    let mut emb = Embedding {
        cw: HashMap::with_capacity(2 * m),
        ccw: HashMap::with_capacity(2 * m),
        first: vec![None; nv],
    };
    for v in 0..nv {
        let mut es = st.out[v].clone();
        es.sort_by_key(|&e| st.nesting_depth[e]);
        let mut prev = None;
        for &e in &es {
            emb.add_cw(v, st.dst[e], prev);
            prev = Some(st.dst[e]);
        }
        st.ordered[v] = es;
    }
    let mut left_ref = vec![NONE; nv];
    let mut right_ref = vec![NONE; nv];
    for r in st.roots.clone() {
        let mut ptr = vec![0usize; nv];
        let mut frames = vec![r];
        while let Some(&v) = frames.last() {
            if ptr[v] == st.ordered[v].len() {
                frames.pop();
                continue;
            }
            let ei = st.ordered[v][ptr[v]];
            ptr[v] += 1;
            let w = st.dst[ei];
            if st.parent_edge[w] == Some(ei) {
                emb.add_first(w, v);
                left_ref[v] = w;
                right_ref[v] = w;
                frames.push(w);
            } else if st.side[ei] == 1 {
                emb.add_cw(w, v, Some(right_ref[w]));
            } else {
                emb.add_ccw(w, v, Some(left_ref[w]));
                left_ref[w] = v;
            }
        }
    }
    Some((0..nv).map(|v| emb.rotation(v)).collect())
}
