//! The acceptance criteria, one test each. Run with `--nocapture` to see the
//! per-criterion summary lines.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use pflow::compare::{compare_runs, Algorithm, Distribution, SweepSpec};
use pflow::decompose::decompose_with;
use pflow::decompose::Traversal;
use pflow::edge_lp::{max_processed_flow, solve_edge_lp, FlowObjective};
use pflow::gen::{gen_connected_instance, gen_random_instance, gen_reduction_instance, RandomSpec, ReductionSpec};
use pflow::mwu::{default_delta, iteration_bound, mwu_solve, shortest_processing_2walk, MwuConfig};
use pflow::naive::naive_solve;
use pflow::purchase::{
    greedy_budgeted_single_source, min_rounding_rounds, round_budgeted_purchase, round_min_purchase, solve_purchase_lp, GreedyConfig,
    PurchaseInstance, PurchaseMode,
};
use pflow::{verify_walk_solution, Demand, FlowNetwork, Orientation, Tolerance};

fn report(n: usize, name: &str, pass: bool, detail: &str) {
    println!("criterion {n:2} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_edge_lp_matches_walk_enumeration() {
    let start = Instant::now();
    let corpus = small_corpus(120);
    let mut worst = 0.0_f64;
    for inst in &corpus {
        let lp = solve_edge_lp(&inst.net, &inst.demands, &FlowObjective::MaxTotalFlow).unwrap().objective;
        worst = worst.max((lp - walk_lp_optimum(&inst.net, &inst.demands)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "oracle equivalence",
        worst <= 1e-6 && secs < 300.0,
        &format!("{} instances, max |edge − walk| = {worst:.2e}, {secs:.1}s", corpus.len()),
    );
}

#[test]
fn criterion_02_decomposition() {
    let corpus = small_corpus(120);
    let mut failures = Vec::new();
    for (k, inst) in corpus.iter().enumerate() {
        let (net, demands) = (&inst.net, &inst.demands);
        let out = solve_edge_lp(net, demands, &FlowObjective::MaxTotalFlow).unwrap();
        let (walks, stats) = decompose_with(net, demands, &out.solution, Traversal::Heap).unwrap();
        let verified = verify_walk_solution(net, demands, &walks, Tolerance::default()).unwrap().ok();
        let preserved = (walks.objective() - out.objective).abs() <= 1e-6;
        let shaped = walks.entries.iter().all(|w| w.max_visits(net, demands) <= 2);
        let bounded = stats.extractions.iter().all(|&e| e <= net.node_count() + 2 * net.arc_count());
        if !(verified && preserved && shaped && bounded) {
            failures.push(k);
        }
    }
    report(
        2,
        "decomposition",
        failures.is_empty(),
        &format!("{} instances, failing: {failures:?}", corpus.len()),
    );
}

#[test]
fn criterion_03_mwu_guarantee() {
    let corpus = small_corpus(120);
    let eps = 0.1;
    let mut worst_ratio = f64::INFINITY;
    let mut worst_excess = 0.0_f64;
    let mut worst_iter_frac = 0.0_f64;
    for inst in &corpus {
        let (net, demands) = (&inst.net, &inst.demands);
        let lp = max_processed_flow(net, demands).unwrap();
        let out = mwu_solve(net, demands, &MwuConfig::with_epsilon(eps)).unwrap();
        let obj = out.solution.objective();
        if lp > 1e-9 {
            worst_ratio = worst_ratio.min(obj / lp);
        }
        for (load, link) in out.solution.link_loads(net).iter().zip(net.links()) {
            worst_excess = worst_excess.max(load - link.capacity);
        }
        for (v, load) in out.solution.node_loads(net).iter().enumerate() {
            worst_excess = worst_excess.max(load - net.node_capacity(v));
        }
        let bound = iteration_bound(net.node_count(), net.link_count(), eps, out.delta);
        worst_iter_frac = worst_iter_frac.max(out.iterations as f64 / bound);
    }
    report(
        3,
        "mwu guarantee",
        worst_ratio >= 1.0 - eps && worst_excess <= 1e-9 && worst_iter_frac <= 1.0,
        &format!("min mwu/lp = {worst_ratio:.4}, max capacity excess = {worst_excess:.1e}, max iterations/bound = {worst_iter_frac:.3}"),
    );
}

#[test]
fn criterion_04_shortest_processing_walk() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=7);
        let mut net = FlowNetwork::new(Orientation::Directed);
        for v in 0..n {
            net.add_node(&format!("v{v}"), 1.0);
        }
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(0.4) {
                    net.add_edge(u, v, 1.0);
                }
            }
        }
        // Integer weights keep every sum exact.
        let arc_w: Vec<f64> = (0..net.arc_count()).map(|_| rng.gen_range(0..10) as f64).collect();
        let node_w: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.3) { f64::INFINITY } else { rng.gen_range(0..10) as f64 })
            .collect();
        let source = rng.gen_range(0..n);
        let got = shortest_processing_2walk(&net, &arc_w, &node_w, source);
        if got.cost != exhaustive_processing_cost(&net, &arc_w, &node_w, source) {
            mismatches += 1;
        }
    }
    report(4, "shortest processing walk", mismatches == 0, &format!("200 graphs, {mismatches} mismatches"));
}

#[test]
fn criterion_05_fixed_points() {
    let (net, d) = inst_line();
    let line = max_processed_flow(&net, &d).unwrap();

    let (net, d) = inst_loop();
    let out = solve_edge_lp(&net, &d, &FlowObjective::MaxTotalFlow).unwrap();
    let (walks, _) = decompose_with(&net, &d, &out.solution, Traversal::Heap).unwrap();
    let revisits = walks.entries.iter().any(|w| w.max_visits(&net, &d) == 2);
    let loop_oracle = walk_lp_optimum(&net, &d);

    let (net, d) = naive_gap();
    let gap_lp = max_processed_flow(&net, &d).unwrap();
    let gap_naive = naive_solve(&net, &d).unwrap().objective();
    let gap_oracle = walk_lp_optimum(&net, &d);

    let delta = default_delta(0.5, 4);
    let pass = (line - 3.0).abs() < 1e-9
        && (out.objective - 2.0).abs() < 1e-9
        && (loop_oracle - 2.0).abs() < 1e-9
        && revisits
        && (gap_lp - 2.0).abs() < 1e-9
        && (gap_oracle - 2.0).abs() < 1e-9
        && gap_naive.abs() < 1e-9
        && (delta - 1.0 / 24.0).abs() < 1e-15;
    report(
        5,
        "fixed points",
        pass,
        &format!("line {line}, loop {} (revisit {revisits}), gap lp {gap_lp} naive {gap_naive}, δ {delta:.6}", out.objective),
    );
}

fn sweep_family() -> Vec<(String, FlowNetwork, Vec<Demand>)> {
    (1..=4)
        .map(|seed| {
            let inst = gen_random_instance(&RandomSpec {
                nodes: 8,
                density: 0.35,
                edge_capacity: (1.0, 5.0),
                demands: 3,
                seed,
                ..RandomSpec::default()
            })
            .unwrap();
            (format!("family{seed}"), inst.net, inst.demands)
        })
        .collect()
}

#[test]
fn criterion_06_baseline_dominance_and_gap() {
    let mut violations = 0;
    let mut min_half_ratio = f64::INFINITY;
    let mut points = 0;
    for dist in [Distribution::All, Distribution::Half] {
        let mut spec = SweepSpec::new(0.25, 5.0, 0.25, dist).unwrap();
        spec.seed = 6;
        for (name, net, demands) in sweep_family() {
            let records = compare_runs(&name, &net, &demands, &spec, &[Algorithm::Lp, Algorithm::Naive]).unwrap();
            for pair in records.chunks(2) {
                let (lp, naive) = (&pair[0], &pair[1]);
                points += 1;
                assert!(lp.error.is_none() && naive.error.is_none() && lp.feasible && naive.feasible);
                if naive.objective > lp.objective + 1e-9 {
                    violations += 1;
                }
                if dist == Distribution::Half {
                    min_half_ratio = min_half_ratio.min(naive.ratio_to_lp.unwrap());
                }
            }
        }
    }
    report(
        6,
        "baseline dominance and sweep gap",
        violations == 0 && min_half_ratio <= 0.8,
        &format!("{points} grid points (20 per sweep), naive > lp at {violations}, min naive/lp in half = {min_half_ratio:.3}"),
    );
}

/// The fixed 8-node min-purchase instance: random topology, every node a
/// candidate with integer potential and cost. Its LP optimum is fractional on
/// four nodes.
fn min_purchase_instance() -> PurchaseInstance {
    let inst = gen_random_instance(&RandomSpec {
        nodes: 8,
        density: 0.35,
        edge_capacity: (2.0, 6.0),
        demands: 3,
        demand_amount: Some((1.0, 3.0)),
        seed: 28,
        ..RandomSpec::default()
    })
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let potential = (0..8).map(|_| rng.gen_range(1..=3) as f64).collect();
    let cost = (0..8).map(|_| rng.gen_range(1..=4) as f64).collect();
    PurchaseInstance::new(inst.net, potential, cost, inst.demands, None).unwrap()
}

#[test]
fn criterion_07_min_purchase_rounding() {
    let inst = min_purchase_instance();
    let delta = 0.2;
    let lp = solve_purchase_lp(&inst, PurchaseMode::Min, None).unwrap();
    let fractional = lp.x.iter().filter(|&&x| x > 1e-6 && x < 1.0 - 1e-6).count();
    let t = min_rounding_rounds(inst.net.node_count(), delta) as f64;
    let (mut violations, mut good, mut total_cost) = (0, 0, 0.0);
    for seed in 0..50 {
        let sol = round_min_purchase(&inst, &lp, delta, seed).unwrap();
        let net = inst.network_with(&sol.purchased);
        let links_ok = sol.flows.link_loads(&net).iter().zip(net.links()).all(|(l, e)| *l <= e.capacity + 1e-9);
        let nodes_ok = sol.flows.node_loads(&net).iter().enumerate().all(|(v, l)| *l <= net.node_capacity(v) + 1e-9);
        if !(links_ok && nodes_ok) {
            violations += 1;
        }
        if sol.served.iter().zip(&inst.demands).all(|(s, d)| *s >= (1.0 - delta) * d.amount - 1e-9) {
            good += 1;
        }
        total_cost += sol.cost;
    }
    let mean_cost = total_cost / 50.0;
    report(
        7,
        "min-purchase rounding",
        violations == 0 && good >= 45 && mean_cost <= t * lp.objective && fractional > 0,
        &format!(
            "LP cost {:.3} ({fractional} fractional x), mean cost {mean_cost:.3} (t = {t}), capacity violations {violations}, served ≥ (1−δ)R in {good}/50",
            lp.objective
        ),
    );
}

/// Random budgeted instances on up to `max_nodes` nodes.
fn budgeted_instance(seed: u64, max_nodes: usize, orientation: Orientation, single_source: bool) -> PurchaseInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = rng.gen_range(4..=max_nodes);
    let mut inst = gen_random_instance(&RandomSpec {
        nodes,
        density: 0.4,
        edge_capacity: (1.0, 5.0),
        demands: 2,
        demand_amount: Some((1.0, 5.0)),
        orientation,
        seed,
        ..RandomSpec::default()
    })
    .unwrap();
    if single_source {
        let (s, t0) = (inst.demands[0].source, inst.demands[0].sink);
        for d in &mut inst.demands {
            if d.sink == s {
                d.sink = t0;
            }
            d.source = s;
        }
        // Keep sinks reachable after moving the sources.
        for d in inst.demands.clone() {
            if max_processed_flow(&inst.net.with_node_capacities(vec![1e9; nodes]), &[d]).unwrap() <= 0.0 {
                inst.net.add_edge(d.source, d.sink, 1.0);
            }
        }
    }
    let potential = (0..nodes).map(|_| if rng.gen_bool(0.7) { rng.gen_range(1..=5) as f64 } else { 0.0 }).collect();
    let cost = (0..nodes).map(|_| rng.gen_range(1..=3) as f64).collect();
    let budget = rng.gen_range(2..=5) as f64;
    PurchaseInstance::new(inst.net, potential, cost, inst.demands, Some(budget)).unwrap()
}

#[test]
fn criterion_08_budgeted_purchase() {
    let mut over_budget = 0;
    let mut worst = f64::INFINITY;
    for seed in 0..50 {
        let inst = budgeted_instance(800 + seed, 7, Orientation::Directed, false);
        let k = inst.budget.unwrap();
        let sol = round_budgeted_purchase(&inst, seed).unwrap();
        if sol.cost > k + 1e-9 {
            over_budget += 1;
        }
        let (opt, _) = best_within_budget(&inst, k);
        if opt > 1e-9 {
            let n = inst.net.node_count() as f64;
            worst = worst.min(sol.total_served() / (opt / (16.0 * n.ln())));
        }
    }
    report(
        8,
        "budgeted purchase",
        over_budget == 0 && worst >= 1.0,
        &format!("cost > k in {over_budget}/50, min served / (OPT/(16 ln n)) = {worst:.3}"),
    );
}

fn two_paths() -> PurchaseInstance {
    let mut net = FlowNetwork::new(Orientation::Undirected);
    let s = net.add_node("s", 0.0);
    let a = net.add_node("a", 0.0);
    let b = net.add_node("b", 0.0);
    let t = net.add_node("t", 0.0);
    net.add_edge(s, a, 4.0);
    net.add_edge(a, t, 4.0);
    net.add_edge(s, b, 2.0);
    net.add_edge(b, t, 2.0);
    PurchaseInstance::new(net, vec![0.0, 3.0, 2.0, 0.0], vec![0.0, 1.0, 1.0, 0.0], vec![Demand::new(s, t, 10.0)], Some(1.0)).unwrap()
}

#[test]
fn criterion_09_greedy_single_source() {
    let factor = (1.0 - (-1.0_f64).exp()) / 8.0;
    let mut worst = f64::INFINITY;
    for seed in 0..30 {
        let inst = budgeted_instance(900 + seed, 8, Orientation::Undirected, true);
        let out = greedy_budgeted_single_source(&inst, &GreedyConfig::default()).unwrap();
        let (opt, _) = best_within_budget(&inst, inst.budget.unwrap());
        if opt > 1e-9 {
            worst = worst.min(out.solution.total_served() / (factor * opt));
        }
    }
    let inst = two_paths();
    let (bud_opt, bud_set) = best_within_budget(&inst, 1.0);
    let out = greedy_budgeted_single_source(&inst, &GreedyConfig::default()).unwrap();
    let bud_ok = (bud_opt - 3.0).abs() < 1e-9 && bud_set == [1] && out.solution.total_served() >= factor * bud_opt;
    report(
        9,
        "greedy single-source",
        worst >= 1.0 && bud_ok,
        &format!(
            "min served / ((1−1/e)/8·OPT) = {worst:.3}; two-path oracle {bud_opt} (buy {:?}), greedy bought {:?} serving {}",
            bud_set.iter().map(|&v| inst.net.node_name(v)).collect::<Vec<_>>(),
            out.solution.purchased.iter().map(|&v| inst.net.node_name(v)).collect::<Vec<_>>(),
            out.solution.total_served()
        ),
    );
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

/// Smallest number of sets covering the universe, by enumeration.
fn min_set_cover(universe: &[&str], sets: &[Vec<&str>]) -> usize {
    (0u32..1 << sets.len())
        .filter(|mask| universe.iter().all(|x| (0..sets.len()).any(|j| mask >> j & 1 == 1 && sets[j].contains(x))))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

#[test]
fn criterion_10_reductions() {
    let universe = ["1", "2", "3"];
    let sets = vec![vec!["1", "2"], vec!["2", "3"]];
    let owned_sets: Vec<Vec<String>> = sets.iter().map(|s| strings(s)).collect();

    let sc = gen_reduction_instance(&ReductionSpec::SetCover {
        universe: strings(&universe),
        sets: owned_sets.clone(),
    })
    .unwrap();
    let sc = PurchaseInstance::from_instance(&sc).unwrap();
    let sc_cost = cheapest_full_cover(&sc).map(|(c, _)| c);
    let sc_expected = min_set_cover(&universe, &sets) as f64;

    let vc = gen_reduction_instance(&ReductionSpec::VertexCover {
        vertices: strings(&["x", "y", "z"]),
        edges: vec![("x".into(), "y".into()), ("y".into(), "z".into()), ("x".into(), "z".into())],
    })
    .unwrap();
    let vc = PurchaseInstance::from_instance(&vc).unwrap();
    let vc_cost = cheapest_full_cover(&vc).map(|(c, _)| c);
    // Minimum vertex cover of K₃ by enumeration.
    let k3 = [(0, 1), (1, 2), (0, 2)];
    let vc_expected = (0u32..8)
        .filter(|m| k3.iter().all(|&(a, b)| m >> a & 1 == 1 || m >> b & 1 == 1))
        .map(|m| m.count_ones())
        .min()
        .unwrap() as f64;

    let mk = gen_reduction_instance(&ReductionSpec::MaxKCover {
        universe: strings(&universe),
        sets: owned_sets,
        k: 1,
    })
    .unwrap();
    let mk = PurchaseInstance::from_instance(&mk).unwrap();
    let (mk_served, _) = best_within_budget(&mk, 1.0);
    let mk_expected = sets.iter().map(|s| s.len()).max().unwrap() as f64;

    let pass = sc_cost == Some(2.0)
        && sc_expected == 2.0
        && vc_cost == Some(2.0)
        && vc_expected == 2.0
        && (mk_served - 2.0).abs() < 1e-9
        && mk_expected == 2.0;
    report(
        10,
        "reduction generators",
        pass,
        &format!("setcover {sc_cost:?} (brute {sc_expected}), K₃ cover {vc_cost:?} (brute {vc_expected}), max 1-cover {mk_served} (brute {mk_expected})"),
    );
}

#[test]
fn criterion_11_desk_scale_performance() {
    let inst = gen_connected_instance(
        &RandomSpec {
            nodes: 35,
            edge_capacity: (1.0, 10.0),
            node_capacity: (0.0, 10.0),
            demands: 20,
            orientation: Orientation::Undirected,
            seed: 35,
            ..RandomSpec::default()
        },
        57,
    )
    .unwrap();
    let start = Instant::now();
    let out = mwu_solve(&inst.net, &inst.demands, &MwuConfig::with_epsilon(0.3)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let feasible = verify_walk_solution(&inst.net, &inst.demands, &out.solution, Tolerance::default()).unwrap().ok();
    report(
        11,
        "desk-scale performance",
        secs < 60.0 && feasible,
        &format!(
            "35 nodes, {} edges, 20 demands, ε = 0.3: {:.2}s, {} iterations, objective {:.3}",
            inst.net.link_count(),
            secs,
            out.iterations,
            out.solution.objective()
        ),
    );
}
