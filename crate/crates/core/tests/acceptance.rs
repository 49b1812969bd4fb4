//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use cogrowth::counting::{ball_counts, loop_counts};
use cogrowth::geometry::{core, euler_boundary_check, planar_core_size_check, Core, CoreGraph, Girth, Subgraph};
use cogrowth::lab::{
    assemble_ledger, conjecture_margin, measure, theorem_trend_sweep, BoundLedger, MeasureOptions, SweepOptions,
};
use cogrowth::planar::{is_planar, FiniteMultigraph};
use cogrowth::schreier::{ball, fold, todd_coxeter, truncated_quotient, PreGraph, Preset, TruncateOptions};
use cogrowth::spectral::{
    delta_from_lambda0, lambda0_from_delta, power_iteration_rho, rho_from_delta, DEFAULT_ITERS, DEFAULT_TOL,
};
use cogrowth::words::{ball_count, parse_relators, Rank};
use cogrowth::{Exec, SchreierGraph};
use num_bigint::BigUint;
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rank(n: usize) -> Rank {
    Rank::new(n).unwrap()
}

fn window(rels: &str, r: usize, l: usize) -> SchreierGraph {
    let rels = parse_relators(rank(2), rels).unwrap();
    truncated_quotient(rank(2), &rels, TruncateOptions::new(r, l)).unwrap().0
}

fn powers_window(k: u32, r: usize) -> SchreierGraph {
    let rels = Preset::Powers(k).relators(rank(2)).unwrap();
    truncated_quotient(rank(2), &rels, TruncateOptions::new(r, 2)).unwrap().0
}

fn ledger(g: &SchreierGraph) -> BoundLedger {
    ledger_with(g, MeasureOptions::default())
}

fn ledger_with(g: &SchreierGraph, opts: MeasureOptions) -> BoundLedger {
    let m = measure(g, &opts).unwrap();
    assemble_ledger(g, &m).unwrap()
}

/// Reduced words over a, A, b, B of length at most `max` whose exponent
/// sums in both generators vanish.
fn grid_oracle(max: usize) -> Vec<u64> {
    // letter i: generator i / 2, sign + for even
    fn walk(len: usize, max: usize, last: Option<usize>, ea: i64, eb: i64, out: &mut [u64]) {
        if ea == 0 && eb == 0 {
            out[len] += 1;
        }
        if len == max {
            return;
        }
        for x in 0..4 {
            if last == Some(x ^ 1) {
                continue;
            }
            let s = if x % 2 == 0 { 1 } else { -1 };
            let (a, b) = if x < 2 { (ea + s, eb) } else { (ea, eb + s) };
            walk(len + 1, max, Some(x), a, b, out);
        }
    }
    let mut by_len = vec![0u64; max + 1];
    walk(0, max, None, 0, 0, &mut by_len);
    by_len
        .iter()
        .scan(0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

fn c1_tree_calibration() -> String {
    let mut sphere = BigUint::from(1u32);
    let mut total = BigUint::from(1u32);
    for r in 0..=12u32 {
        if r > 0 {
            sphere = if r == 1 { BigUint::from(4u32) } else { sphere * 3u32 };
            total += &sphere;
        }
        assert_eq!(ball_count(rank(2), r as usize), total);
        assert_eq!(total, BigUint::from(2 * 3u64.pow(r) - 1));
    }
    let t = truncated_quotient(rank(2), &[], TruncateOptions::new(12, 0)).unwrap().0;
    let b = ball_counts(&t, 12).unwrap();
    for r in 0..=12u32 {
        assert_eq!(b.counts[r as usize], 2 * 3u64.pow(r) - 1);
    }
    format!("|B_12| = {}", b.counts[12])
}

fn c2_grid_oracle() -> String {
    let oracle = grid_oracle(6);
    let g = window("abAB", 20, 2);
    let l = loop_counts(&g, 6).unwrap();
    for (r, &n) in oracle.iter().enumerate() {
        assert_eq!(l.counts[r], BigUint::from(n), "N({r})");
    }
    assert_eq!(oracle[4], 9);
    let b = ball_counts(&g, 20).unwrap();
    for r in 0..=20u64 {
        assert_eq!(b.counts[r as usize], 2 * r * r + 2 * r + 1);
    }
    format!("N(4) = {}, N(6) = {} (brute force agrees), grid balls exact to r = 20", oracle[4], oracle[6])
}

fn finite_quotients() -> Vec<SchreierGraph> {
    let klein = todd_coxeter(rank(2), &parse_relators(rank(2), "aa bb abAB").unwrap(), 100).unwrap();
    let mod2 = todd_coxeter(rank(2), &Preset::Mod2.relators(rank(2)).unwrap(), 100).unwrap();
    vec![klein, mod2]
}

fn c3_finite_quotients() -> String {
    let gs = finite_quotients();
    assert_eq!(gs[0].vertex_count(), 4);
    assert_eq!(gs[1].vertex_count(), 2);
    for g in &gs {
        let e = power_iteration_rho(g, DEFAULT_ITERS, DEFAULT_TOL).unwrap();
        assert!((e.rho_lower - 1.0).abs() < 1e-9);
        let d = delta_from_lambda0(g.rank(), 1.0 - e.rho_lower).unwrap();
        assert!((d - 3f64.ln()).abs() < 1e-6);
    }
    "4 and 2 cosets, rho = 1, delta = log 3".into()
}

fn c4_round_trips() -> String {
    let mut worst: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for n in 2..=4 {
        let rk = rank(n);
        let top = rk.log_branching();
        for i in 0..100 {
            let delta = top / 2.0 + (i as f64 + 0.5) / 100.0 * top / 2.0;
            let lam = lambda0_from_delta(rk, delta).unwrap();
            let back = delta_from_lambda0(rk, lam).unwrap();
            worst = worst.max((back - delta).abs());
            let rho = rho_from_delta(rk, delta).unwrap();
            worst_sum = worst_sum.max((1.0 - rho - lam).abs());
        }
    }
    assert!(worst < 1e-12, "round trip error {worst:e}");
    assert!(worst_sum < 1e-14, "rho + lambda0 error {worst_sum:e}");
    format!("max round-trip error {worst:.1e}, max |1 - rho - lambda0| {worst_sum:.1e}")
}

fn c5_tree_endpoint() -> String {
    let v = lambda0_from_delta(rank(2), 0.5 * 3f64.ln()).unwrap();
    let tree = 1.0 - 3f64.sqrt() / 2.0;
    assert!((v - tree).abs() < 1e-12);
    format!("lambda0 = {v:.15}")
}

/// Random connected vertex sets inside the certified interior.
fn random_cores(g: &SchreierGraph, rng: &mut ChaCha8Rng, want: usize, out: &mut Vec<CoreGraph>) {
    let interior: Vec<usize> = match g.certified_radius() {
        None => (0..g.vertex_count()).collect(),
        Some(c) => {
            let d = g.distances();
            (0..g.vertex_count())
                .filter(|&v| d[v].is_some_and(|x| x < c) && g.is_complete_at(v))
                .collect()
        }
    };
    let ok: std::collections::HashSet<usize> = interior.iter().copied().collect();
    let mut found = 0;
    let mut attempts = 0;
    while found < want && attempts < 50 * want {
        attempts += 1;
        let size = rng.random_range(interior.len().min(3)..=interior.len().min(80));
        let mut set = vec![interior[rng.random_range(0..interior.len())]];
        let mut frontier = set.clone();
        while set.len() < size && !frontier.is_empty() {
            let i = rng.random_range(0..frontier.len());
            let v = frontier[i];
            let code = rng.random_range(0..g.rank().degree());
            match g.target_code(v, code) {
                Some(t) if ok.contains(&t) && !set.contains(&t) => {
                    set.push(t);
                    frontier.push(t);
                }
                _ => {
                    if rng.random_range(0..8) == 0 {
                        frontier.swap_remove(i);
                    }
                }
            }
        }
        if let Ok(Core::Graph(c)) = core(&Subgraph::new(g, set)) {
            out.push(c);
            found += 1;
        }
    }
}

fn core_corpus() -> Vec<CoreGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cores = Vec::new();
    random_cores(&window("abAB", 8, 2), &mut rng, 30, &mut cores);
    for k in [4, 6, 8] {
        random_cores(&powers_window(k, k as usize), &mut rng, 15, &mut cores);
    }
    let a5 = todd_coxeter(rank(2), &parse_relators(rank(2), "aa bbb ababababab").unwrap(), 100).unwrap();
    random_cores(&a5, &mut rng, 15, &mut cores);
    for g in finite_quotients() {
        random_cores(&g, &mut rng, 5, &mut cores);
    }
    cores
}

fn c6_euler_identity() -> String {
    let cores = core_corpus();
    assert!(cores.len() >= 100, "only {} cores", cores.len());
    for c in &cores {
        assert!(euler_boundary_check(c, rank(2)));
    }
    format!("{} random cores", cores.len())
}

fn c7_planar_core_size() -> String {
    let mut planar = 0;
    for c in core_corpus() {
        if is_planar(&c.to_multigraph()).planar {
            assert!(planar_core_size_check(&c).unwrap());
            planar += 1;
        }
    }
    assert!(planar > 0);
    format!("{planar} planar cores")
}

fn stable_under_relabeling(m: &FiniteMultigraph, rng: &mut ChaCha8Rng) -> bool {
    let expected = is_planar(m).planar;
    let mut perm: Vec<usize> = (0..m.vertex_count()).collect();
    for _ in 0..50 {
        perm.shuffle(rng);
        if is_planar(&m.relabeled(&perm)).planar != expected {
            panic!("verdict changed under relabeling");
        }
    }
    expected
}

fn c8_planarity() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    assert!(!stable_under_relabeling(&FiniteMultigraph::complete(5), &mut rng));
    assert!(!stable_under_relabeling(&FiniteMultigraph::complete_bipartite(3, 3), &mut rng));
    let grid = window("abAB", 12, 2);
    for r in [2, 6, 12] {
        assert!(stable_under_relabeling(&ball(&grid, r).unwrap().to_multigraph(), &mut rng));
    }
    let mut checked = 0;
    for k in 2..=10u32 {
        let radius = (2 * k as usize).min(8);
        let g = powers_window(k, radius);
        let c = g.certified_radius().unwrap();
        assert_eq!(c, radius);
        assert!(is_planar(&ball(&g, c).unwrap().to_multigraph()).planar, "k = {k}");
        let small = ball(&g, c.min(6)).unwrap().to_multigraph();
        assert!(stable_under_relabeling(&small, &mut rng), "k = {k}");
        checked += 1;
    }
    format!("K5, K3,3 rejected; grid and {checked} powers balls planar, stable under 50 relabelings")
}

fn sweep() -> Vec<cogrowth::lab::Report> {
    let opts = SweepOptions::new(rank(2), vec![4, 6, 8, 10]);
    theorem_trend_sweep(Exec::Parallel, &opts).unwrap()
}

fn c9_trend() -> String {
    let reports = sweep();
    let expect_i = [Rational64::new(0, 1), Rational64::new(1, 4), Rational64::new(1, 3), Rational64::new(3, 8)];
    let expect_g = [Rational64::new(1, 1), Rational64::new(5, 3), Rational64::new(2, 1), Rational64::new(11, 5)];
    let mut uppers = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        assert!(r.error.is_none(), "{:?}", r.error);
        let k = r.k.unwrap() as usize;
        assert_eq!(r.girth_lower, Some(Girth::Finite(k)));
        let l = r.ledger.as_ref().unwrap();
        assert_eq!(l.iso.lower.exact, Some(expect_i[i]), "k = {k}");
        assert_eq!(l.growth.lower.exact, Some(expect_g[i]), "k = {k}");
        // closed-form root computed directly
        let lam = l.lambda0.lower.value;
        let a = 2.0 * (1.0 - lam);
        let root = (a + (a * a - 3.0).max(0.0).sqrt()).ln();
        assert!((l.delta.upper.value - root.min(3f64.ln())).abs() < 1e-9, "k = {k}");
        uppers.push(l.delta.upper.value);
    }
    assert!(uppers.windows(2).all(|w| w[1] < w[0]), "{uppers:?}");
    assert!(uppers[3] < 0.99 && 0.99 < 3f64.ln());
    let shown: Vec<String> = uppers.iter().map(|u| format!("{u:.5}")).collect();
    format!("delta upper = [{}]", shown.join(", "))
}

fn c10_margin() -> String {
    let r2 = rank(2);
    let grid = window("abAB", 6, 2);
    let opts = MeasureOptions {
        count_radius: Some(6),
        ..MeasureOptions::default()
    };
    let gl = ledger_with(&grid, opts);
    let oracle = grid_oracle(6);
    let expected = (oracle[6] as f64).ln() / 6.0 + 2f64.ln() - 3f64.ln();
    let gm = conjecture_margin(&gl, r2).margin;
    assert!((gm - expected).abs() < 1e-4, "grid margin {gm}");
    let mut ledgers = vec![gl];
    ledgers.extend(finite_quotients().iter().map(ledger));
    ledgers.extend(sweep().into_iter().map(|r| r.ledger.unwrap()));
    for l in &ledgers {
        assert!(conjecture_margin(l, r2).margin > 0.0);
    }
    format!("{} ledgers positive, grid margin {gm:+.4}", ledgers.len())
}

fn c11_dirichlet() -> String {
    let start = Instant::now();
    let cap = 3f64.sqrt() / 2.0;
    let mut last = 0.0;
    for r in 1..=10 {
        let t = truncated_quotient(rank(2), &[], TruncateOptions::new(r, 0)).unwrap().0;
        let e = power_iteration_rho(&t, DEFAULT_ITERS, DEFAULT_TOL).unwrap();
        assert!(e.rho_lower >= last, "r = {r}");
        assert!(e.rho_lower <= cap + 1e-9);
        last = e.rho_lower;
    }
    assert!(last > 0.80 && last < 0.86603, "rho(10) = {last}");
    format!("rho_lower(10) = {last:.6} in {:.1?}", start.elapsed())
}

fn c12_confluence() -> String {
    let r2 = rank(2);
    let rels = parse_relators(r2, "aaaa bbbb abab").unwrap();
    let mut pre = PreGraph::tree_ball(r2, 2);
    for v in 0..pre.vertex_count() {
        for w in &rels {
            pre.attach_loop(v, w);
        }
    }
    let reference = fold(&pre).canonical_table(None);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut order: Vec<usize> = (0..pre.edges().len()).collect();
    let mut perm: Vec<usize> = (0..pre.vertex_count()).collect();
    for _ in 0..200 {
        order.shuffle(&mut rng);
        perm.shuffle(&mut rng);
        assert_eq!(fold(&pre.reordered(&order, &perm)).canonical_table(None), reference);
    }
    format!("200 orders of {} edges agree", pre.edges().len())
}

type Criterion = (&'static str, fn() -> String);

fn main() {
    let criteria: [Criterion; 12] = [
        ("tree calibration", c1_tree_calibration),
        ("grid oracle", c2_grid_oracle),
        ("finite quotients", c3_finite_quotients),
        ("formula round trips", c4_round_trips),
        ("tree spectral endpoint", c5_tree_endpoint),
        ("euler boundary identity", c6_euler_identity),
        ("planar core size", c7_planar_core_size),
        ("planarity", c8_planarity),
        ("power family trend", c9_trend),
        ("margin inequality", c10_margin),
        ("dirichlet bracket", c11_dirichlet),
        ("folding confluence", c12_confluence),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        match catch_unwind(AssertUnwindSafe(f)) {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{:.2?}]", i + 1, start.elapsed()),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
