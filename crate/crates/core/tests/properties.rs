use std::sync::OnceLock;

use cogrowth::geometry::{core, core_of_multigraph, euler_boundary_check, Core, Subgraph};
use cogrowth::planar::{count_faces, is_planar, FiniteMultigraph};
use cogrowth::schreier::{fold, truncated_quotient, PreGraph, TruncateOptions};
use cogrowth::spectral::{delta_from_lambda0, lambda0_from_delta, rho_from_delta};
use cogrowth::words::{multiply, parse_relators, reduce, Letter, Rank, ReducedWord};
use cogrowth::SchreierGraph;
use proptest::prelude::*;

fn r2() -> Rank {
    Rank::new(2).unwrap()
}

fn word(codes: &[usize]) -> ReducedWord {
    let letters: Vec<Letter> = codes.iter().map(|&c| Letter::from_code(c)).collect();
    reduce(r2(), &letters).unwrap()
}

fn grid() -> &'static SchreierGraph {
    static G: OnceLock<SchreierGraph> = OnceLock::new();
    G.get_or_init(|| {
        let rels = parse_relators(r2(), "abAB").unwrap();
        truncated_quotient(r2(), &rels, TruncateOptions::new(7, 2)).unwrap().0
    })
}

/// All rotation systems of a small simple graph; planar iff some system
/// satisfies Euler's formula.
fn brute_force_planar(g: &FiniteMultigraph) -> bool {
    let s = g.normalized();
    let nv = s.vertex_count();
    let mut adj = vec![Vec::new(); nv];
    for &(u, v) in s.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let comps = s.component_count() as i64;
    let isolated = adj.iter().filter(|a| a.is_empty()).count() as i64;
    let target = 2 * (comps - isolated) + isolated - nv as i64 + s.edge_count() as i64;
    fn perms(xs: &[usize]) -> Vec<Vec<usize>> {
        // fix the first neighbour; rotations are cyclic
        if xs.len() <= 2 {
            return vec![xs.to_vec()];
        }
        let mut out = Vec::new();
        let rest = &xs[1..];
        let mut idx: Vec<usize> = (0..rest.len()).collect();
        loop {
            let mut p = vec![xs[0]];
            p.extend(idx.iter().map(|&i| rest[i]));
            out.push(p);
            // next lexicographic permutation
            let Some(i) = (0..idx.len() - 1).rev().find(|&i| idx[i] < idx[i + 1]) else {
                break;
            };
            let j = (i + 1..idx.len()).rev().find(|&j| idx[j] > idx[i]).unwrap();
            idx.swap(i, j);
            idx[i + 1..].reverse();
        }
        out
    }
    let options: Vec<Vec<Vec<usize>>> = adj.iter().map(|a| perms(a)).collect();
    let mut choice = vec![0usize; nv];
    loop {
        let rot: Vec<Vec<usize>> = (0..nv).map(|v| options[v][choice[v]].clone()).collect();
        if count_faces(&rot) as i64 == target {
            return true;
        }
        let mut v = 0;
        loop {
            if v == nv {
                return false;
            }
            choice[v] += 1;
            if choice[v] < options[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

fn small_graph() -> impl Strategy<Value = FiniteMultigraph> {
    (3usize..=6).prop_flat_map(|nv| {
        prop::collection::vec((0..nv, 0..nv), 0..=10)
            .prop_map(move |e| FiniteMultigraph::new(nv, e).unwrap())
    })
}

fn interior_subset() -> impl Strategy<Value = Vec<usize>> {
    let g = grid();
    let c = g.certified_radius().unwrap();
    let d = g.distances();
    let interior: Vec<usize> = (0..g.vertex_count()).filter(|&v| d[v].is_some_and(|x| x < c)).collect();
    prop::sample::subsequence(interior.clone(), 1..=interior.len().min(40))
}

/// Connected interior sets grown by random steps from a random vertex.
fn connected_subset() -> impl Strategy<Value = Vec<usize>> {
    (any::<u64>(), 1usize..40).prop_map(|(seed, size)| {
        use rand::{Rng, SeedableRng};
        let g = grid();
        let c = g.certified_radius().unwrap();
        let d = g.distances();
        let inside = |v: usize| d[v].is_some_and(|x| x < c);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let start = loop {
            let v = rng.random_range(0..g.vertex_count());
            if inside(v) {
                break v;
            }
        };
        let mut set = vec![start];
        for _ in 0..20 * size {
            if set.len() == size {
                break;
            }
            let v = set[rng.random_range(0..set.len())];
            if let Some(t) = g.target_code(v, rng.random_range(0..4)) {
                if inside(t) && !set.contains(&t) {
                    set.push(t);
                }
            }
        }
        set
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(a in prop::collection::vec(0usize..4, 0..12),
                                     b in prop::collection::vec(0usize..4, 0..12),
                                     c in prop::collection::vec(0usize..4, 0..12)) {
        let (a, b, c) = (word(&a), word(&b), word(&c));
        let left = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
        let right = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(multiply(&a, &a.inverse()).unwrap().is_empty());
    }

    #[test]
    fn folding_ignores_insertion_order(
        rels in prop::collection::vec(prop::collection::vec(0usize..4, 1..6), 1..3),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut pre = PreGraph::tree_ball(r2(), 1);
        for v in 0..pre.vertex_count() {
            for w in &rels {
                let w = word(w);
                if !w.is_empty() {
                    pre.attach_loop(v, &w);
                }
            }
        }
        let reference = fold(&pre).canonical_table(None);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..pre.edges().len()).collect();
        let mut perm: Vec<usize> = (0..pre.vertex_count()).collect();
        for _ in 0..5 {
            order.shuffle(&mut rng);
            perm.shuffle(&mut rng);
            prop_assert_eq!(fold(&pre.reordered(&order, &perm)).canonical_table(None), reference.clone());
        }
    }

    #[test]
    fn planarity_matches_rotation_search(g in small_graph()) {
        prop_assert_eq!(is_planar(&g).planar, brute_force_planar(&g));
    }

    #[test]
    fn planarity_ignores_labels(g in small_graph(), perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let perm: Vec<usize> = perm.into_iter().filter(|&v| v < g.vertex_count()).collect();
        prop_assert_eq!(is_planar(&g.relabeled(&perm)).planar, is_planar(&g).planar);
    }

    #[test]
    fn euler_identity_on_grid_cores(set in prop_oneof![interior_subset(), connected_subset()]) {
        let s = Subgraph::new(grid(), set);
        match core(&s) {
            Ok(Core::Graph(c)) => prop_assert!(euler_boundary_check(&c, r2())),
            Ok(Core::Trivial) => {}
            Err(e) => prop_assert!(!s.is_connected(), "{}", e),
        }
    }

    #[test]
    fn core_does_not_depend_on_labels(set in connected_subset(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let s = Subgraph::new(grid(), set);
        prop_assert!(s.is_connected());
        let m = s.to_multigraph();
        let mut perm: Vec<usize> = (0..m.vertex_count()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let a = core_of_multigraph(&m, r2()).unwrap();
        let b = core_of_multigraph(&m.relabeled(&perm), r2()).unwrap();
        match (a, b) {
            (Core::Trivial, Core::Trivial) => {}
            (Core::Graph(x), Core::Graph(y)) => {
                prop_assert_eq!(x.vertex_count(), y.vertex_count());
                prop_assert_eq!(x.edge_count(), y.edge_count());
                prop_assert_eq!(x.boundary, y.boundary);
                prop_assert_eq!(x.ell, y.ell);
                let mut mapped: Vec<usize> = x.vertices.iter().map(|&v| perm[v]).collect();
                mapped.sort_unstable();
                prop_assert_eq!(mapped, y.vertices);
            }
            _ => prop_assert!(false, "core kinds differ"),
        }
    }

    #[test]
    fn cogrowth_conversions_agree(n in 2usize..6, t in 0.0f64..=1.0) {
        let rank = Rank::new(n).unwrap();
        let top = rank.log_branching();
        let delta = top / 2.0 + t * top / 2.0;
        let lam = lambda0_from_delta(rank, delta).unwrap();
        let rho = rho_from_delta(rank, delta).unwrap();
        prop_assert!((1.0 - rho - lam).abs() < 1e-14);
        let back = delta_from_lambda0(rank, lam).unwrap();
        // the inverse loses precision like a square root near the tree end
        prop_assert!((back - delta).abs() < 1e-6);
        prop_assert!(lambda0_from_delta(rank, back).unwrap() - lam < 1e-13);
    }

    #[test]
    fn deepening_never_grows_the_window(depth in 0usize..4) {
        let rels = parse_relators(r2(), "aaaaa bbbbb").unwrap();
        let here = truncated_quotient(r2(), &rels, TruncateOptions::new(5, depth)).unwrap().0;
        let next = truncated_quotient(r2(), &rels, TruncateOptions::new(5, depth + 1)).unwrap().0;
        prop_assert!(next.vertex_count() <= here.vertex_count());
    }
}
