mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pflow::gen::{gen_random_instance, RandomSpec};
use pflow::purchase::{
    greedy_budgeted_single_source, processing_oracle, round_budgeted_purchase, round_min_purchase, served_with,
    solve_purchase_lp, GreedyConfig, PurchaseInstance, PurchaseMode,
};
use pflow::{verify_edge_solution, Demand, Error, FlowNetwork, Orientation, Tolerance};

fn random_purchase(seed: u64, max_nodes: usize, orientation: Orientation, single_source: bool) -> PurchaseInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = rng.gen_range(4..=max_nodes);
    let mut inst = gen_random_instance(&RandomSpec {
        nodes,
        density: 0.45,
        edge_capacity: (1.0, 5.0),
        demands: 2,
        demand_amount: Some((1.0, 4.0)),
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
    }
    let potential = (0..nodes).map(|_| if rng.gen_bool(0.7) { rng.gen_range(1..=4) as f64 } else { 0.0 }).collect();
    let cost = (0..nodes).map(|_| rng.gen_range(0..=3) as f64).collect();
    let budget = rng.gen_range(1..=5) as f64;
    PurchaseInstance::new(inst.net, potential, cost, inst.demands, Some(budget)).unwrap()
}

/// s–a (4), a–t (4), s–b (2), b–t (2); C(a)=3, C(b)=2, unit costs.
fn two_paths(budget: f64) -> PurchaseInstance {
    let mut net = FlowNetwork::new(Orientation::Undirected);
    let s = net.add_node("s", 0.0);
    let a = net.add_node("a", 0.0);
    let b = net.add_node("b", 0.0);
    let t = net.add_node("t", 0.0);
    net.add_edge(s, a, 4.0);
    net.add_edge(a, t, 4.0);
    net.add_edge(s, b, 2.0);
    net.add_edge(b, t, 2.0);
    PurchaseInstance::new(net, vec![0.0, 3.0, 2.0, 0.0], vec![0.0, 1.0, 1.0, 0.0], vec![Demand::new(s, t, 10.0)], Some(budget)).unwrap()
}

/// s → a → t with C(a) = 5, cost 5, one demand of 2.
fn one_middlebox() -> PurchaseInstance {
    let mut net = FlowNetwork::new(Orientation::Directed);
    let s = net.add_node("s", 0.0);
    let a = net.add_node("a", 0.0);
    let t = net.add_node("t", 0.0);
    net.add_edge(s, a, 10.0);
    net.add_edge(a, t, 10.0);
    PurchaseInstance::new(net, vec![0.0, 5.0, 0.0], vec![0.0, 5.0, 0.0], vec![Demand::new(s, t, 2.0)], None).unwrap()
}

fn assert_feasible(inst: &PurchaseInstance, sol: &pflow::purchase::PurchaseSolution) {
    let net = inst.network_with(&sol.purchased);
    let report = verify_edge_solution(&net, &inst.demands, &sol.flows, Tolerance::absolute(1e-7)).unwrap();
    assert!(report.ok(), "{report}");
    for (s, d) in sol.served.iter().zip(&inst.demands) {
        assert!(*s <= d.amount + 1e-7);
    }
    assert!((sol.cost - inst.cost_of(&sol.purchased)).abs() < 1e-12);
}

#[test]
fn rounding_buys_the_node_and_serves_in_full() {
    let inst = one_middlebox();
    let lp = solve_purchase_lp(&inst, PurchaseMode::Min, None).unwrap();
    assert!((lp.objective - 5.0).abs() < 1e-9);
    let sol = round_min_purchase(&inst, &lp, 0.2, 3).unwrap();
    assert_eq!(sol.purchased, vec![1]);
    assert!((sol.total_served() - 2.0).abs() < 1e-9);
    assert_feasible(&inst, &sol);
}

#[test]
fn min_lp_is_a_lower_bound_on_brute_force() {
    let mut checked = 0;
    for seed in 0..40 {
        let mut inst = random_purchase(100 + seed, 6, Orientation::Directed, false);
        inst.budget = None;
        let Some((best, _)) = cheapest_full_cover(&inst) else { continue };
        let lp = solve_purchase_lp(&inst, PurchaseMode::Min, None).unwrap();
        assert!(lp.objective <= best + 1e-7, "seed {seed}: {} > {best}", lp.objective);
        let sol = round_min_purchase(&inst, &lp, 0.2, seed).unwrap();
        assert_feasible(&inst, &sol);
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn unsatisfiable_min_is_infeasible() {
    let mut inst = one_middlebox();
    inst.demands[0].amount = 20.0;
    assert!(matches!(solve_purchase_lp(&inst, PurchaseMode::Min, None), Err(Error::Infeasible(_))));
}

#[test]
fn budgeted_lp_bounds_the_best_subset() {
    for seed in 0..40 {
        let inst = random_purchase(200 + seed, 6, Orientation::Directed, false);
        let k = inst.budget.unwrap();
        let (best, _) = best_within_budget(&inst, k);
        let lp = solve_purchase_lp(&inst, PurchaseMode::Budgeted { budget: k }, None).unwrap();
        assert!(lp.objective >= best - 1e-7, "seed {seed}: {} < {best}", lp.objective);
    }
}

#[test]
fn budgeted_rounding_stays_within_budget() {
    for seed in 0..40 {
        let inst = random_purchase(300 + seed, 6, Orientation::Directed, false);
        let k = inst.budget.unwrap();
        let sol = round_budgeted_purchase(&inst, seed).unwrap();
        assert!(sol.cost <= k + 1e-12);
        assert_feasible(&inst, &sol);
        let (best, _) = best_within_budget(&inst, k);
        assert!(sol.total_served() <= best + 1e-7);
        assert!((sol.total_served() - purchase_value(&inst, &sol.purchased)).abs() < 1e-7);
    }
}

#[test]
fn two_paths_budget_two_matches_brute_force() {
    let inst = two_paths(2.0);
    let (best, set) = best_within_budget(&inst, 2.0);
    assert_eq!(set, vec![1, 2]);
    assert!((best - 5.0).abs() < 1e-9);
    let sol = round_budgeted_purchase(&inst, 1).unwrap();
    assert!(sol.cost <= 2.0);
    assert!(sol.total_served() >= 3.0 - 1e-9);
}

#[test]
fn zero_budget_serves_nothing() {
    let sol = round_budgeted_purchase(&two_paths(0.0), 0).unwrap();
    assert!(sol.purchased.is_empty());
    assert_eq!(sol.total_served(), 0.0);
}

#[test]
fn served_with_matches_oracle() {
    for seed in 0..20 {
        let inst = random_purchase(400 + seed, 6, Orientation::Directed, false);
        for (set, _) in candidate_subsets(&inst).into_iter().take(16) {
            let (v, _) = served_with(&inst, &set).unwrap();
            assert!((v - purchase_value(&inst, &set)).abs() < 1e-7);
        }
    }
}

fn quarter_network_flow(inst: &PurchaseInstance, set: &[usize]) -> f64 {
    let n = inst.net.node_count();
    let s = inst.demands[0].source;
    let mut arcs: Vec<(usize, usize, f64)> = inst
        .net
        .links()
        .iter()
        .flat_map(|l| {
            let a = inst.net.arc(l.arcs[0]);
            [(a.tail, a.head, l.capacity / 4.0), (a.head, a.tail, l.capacity / 4.0)]
        })
        .collect();
    arcs.extend(set.iter().map(|&p| (n, p, inst.potential[p])));
    maxflow_oracle(n + 1, &arcs, n, s)
}

#[test]
fn processing_oracle_matches_lp_max_flow() {
    for seed in 0..20 {
        let inst = random_purchase(500 + seed, 6, Orientation::Undirected, true);
        for (set, _) in candidate_subsets(&inst) {
            let got = processing_oracle(&inst, &set).unwrap();
            assert!((got - quarter_network_flow(&inst, &set)).abs() < 1e-7, "seed {seed} set {set:?}");
        }
    }
}

/// Whether `f` has diminishing returns on every pair `A ⊆ B`, `v ∉ B`.
fn first_submodularity_violation(
    items: &[usize],
    f: &mut dyn FnMut(&[usize]) -> f64,
) -> Option<(Vec<usize>, Vec<usize>, usize, f64, f64)> {
    let m = items.len();
    let pick = |mask: u32| -> Vec<usize> { (0..m).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).collect() };
    let values: Vec<f64> = (0u32..1 << m).map(|mask| f(&pick(mask))).collect();
    for b in 0u32..1 << m {
        let mut a = b;
        loop {
            for v in 0..m {
                if b >> v & 1 == 0 {
                    let gain_a = values[(a | 1 << v) as usize] - values[a as usize];
                    let gain_b = values[(b | 1 << v) as usize] - values[b as usize];
                    if gain_b > gain_a + 1e-7 {
                        return Some((pick(a), pick(b), items[v], gain_a, gain_b));
                    }
                }
            }
            if a == 0 {
                break;
            }
            a = (a - 1) & b;
        }
    }
    None
}

#[test]
fn processing_oracle_is_submodular() {
    for seed in 0..25 {
        let inst = random_purchase(600 + seed, 6, Orientation::Undirected, true);
        let items = inst.candidates();
        let mut f = |set: &[usize]| processing_oracle(&inst, set).unwrap();
        assert_eq!(first_submodularity_violation(&items, &mut f), None, "seed {seed}");
    }
}

#[test]
fn served_flow_is_not_submodular() {
    // Search seeded random instances for a pair A ⊆ B where adding a node
    // helps B more than A.
    let mut found = None;
    for seed in 0..400 {
        let inst = random_purchase(700 + seed, 5, Orientation::Directed, false);
        let items = inst.candidates();
        let mut f = |set: &[usize]| purchase_value(&inst, set);
        if let Some(v) = first_submodularity_violation(&items, &mut f) {
            found = Some((seed, v));
            break;
        }
    }
    let (seed, (a, b, v, gain_a, gain_b)) = found.expect("no counterexample found");
    println!("seed {}: A={a:?} B={b:?} v={v} gains {gain_a} < {gain_b}", 700 + seed);
    assert!(gain_b > gain_a);
}

#[test]
fn greedy_matches_brute_force_on_oracle() {
    for seed in 0..20 {
        let inst = random_purchase(800 + seed, 6, Orientation::Undirected, true);
        let k = inst.budget.unwrap();
        let out = greedy_budgeted_single_source(&inst, &GreedyConfig::default()).unwrap();
        assert!(out.solution.cost <= k + 1e-12);
        assert_feasible(&inst, &out.solution);
        let best_oracle = candidate_subsets(&inst)
            .into_iter()
            .filter(|(_, c)| *c <= k)
            .map(|(set, _)| processing_oracle(&inst, &set).unwrap())
            .fold(0.0, f64::max);
        // Greedy with size-3 seeds is within (1 − 1/e) of the best set.
        assert!(out.oracle_value >= (1.0 - (-1.0f64).exp()) * best_oracle - 1e-9, "seed {seed}");
        assert!(out.constructive_value <= out.solution.total_served() + 1e-7);
    }
}

#[test]
fn greedy_with_ample_budget_buys_everything_useful() {
    let inst = two_paths(10.0);
    let out = greedy_budgeted_single_source(&inst, &GreedyConfig::fast()).unwrap();
    assert!((out.oracle_value - processing_oracle(&inst, &[1, 2]).unwrap()).abs() < 1e-9);
}

#[test]
fn greedy_without_potential_is_empty() {
    let mut inst = two_paths(2.0);
    inst.potential = vec![0.0; 4];
    let out = greedy_budgeted_single_source(&inst, &GreedyConfig::default()).unwrap();
    assert!(out.solution.purchased.is_empty());
    assert_eq!(out.oracle_value, 0.0);
}

#[test]
fn greedy_rejects_multiple_sources() {
    let mut inst = two_paths(2.0);
    inst.demands.push(Demand::new(1, 3, 1.0));
    assert!(matches!(
        greedy_budgeted_single_source(&inst, &GreedyConfig::default()),
        Err(Error::Unsupported(_))
    ));
}
