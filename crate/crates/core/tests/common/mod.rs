//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's solvers; LPs go through `minilp`.
#![allow(dead_code)]

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use pflow::gen::{gen_random_instance, RandomSpec};
use pflow::instance::Instance;
use pflow::purchase::PurchaseInstance;
use pflow::{Demand, FlowNetwork, Orientation};

pub fn inst_line() -> (FlowNetwork, Vec<Demand>) {
    let mut net = FlowNetwork::new(Orientation::Directed);
    let s = net.add_node("s", 0.0);
    let a = net.add_node("a", 3.0);
    let t = net.add_node("t", 0.0);
    net.add_edge(s, a, 10.0);
    net.add_edge(a, t, 10.0);
    (net, vec![Demand::uncapped(s, t)])
}

pub fn inst_loop() -> (FlowNetwork, Vec<Demand>) {
    let mut net = FlowNetwork::new(Orientation::Directed);
    let s = net.add_node("s", 0.0);
    let a = net.add_node("a", 0.0);
    let p = net.add_node("p", 5.0);
    let t = net.add_node("t", 0.0);
    net.add_edge(s, a, 2.0);
    net.add_edge(a, p, 2.0);
    net.add_edge(p, a, 2.0);
    net.add_edge(a, t, 2.0);
    (net, vec![Demand::uncapped(s, t)])
}

pub fn naive_gap() -> (FlowNetwork, Vec<Demand>) {
    let mut net = FlowNetwork::new(Orientation::Directed);
    let s = net.add_node("s", 0.0);
    let u = net.add_node("u", 0.0);
    let t = net.add_node("t", 0.0);
    let w = net.add_node("w", 2.0);
    net.add_edge(s, u, 2.0);
    net.add_edge(u, t, 2.0);
    net.add_edge(u, w, 2.0);
    net.add_edge(w, u, 2.0);
    (net, vec![Demand::uncapped(s, t)])
}

/// All arc sequences from `source` to `sink` visiting every vertex at most
/// twice. Walks may pass through the sink and continue.
pub fn enumerate_two_walks(net: &FlowNetwork, source: usize, sink: usize) -> Vec<Vec<usize>> {
    fn go(net: &FlowNetwork, v: usize, sink: usize, visits: &mut [u8], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == sink && !path.is_empty() {
            out.push(path.clone());
        }
        for &a in net.out_arcs(v) {
            let u = net.arc(a).head;
            if visits[u] < 2 {
                visits[u] += 1;
                path.push(a);
                go(net, u, sink, visits, path, out);
                path.pop();
                visits[u] -= 1;
            }
        }
    }
    let mut visits = vec![0u8; net.node_count()];
    visits[source] = 1;
    let mut out = Vec::new();
    go(net, source, sink, &mut visits, &mut Vec::new(), &mut out);
    out
}

fn walk_vertices(net: &FlowNetwork, source: usize, arcs: &[usize]) -> Vec<usize> {
    let mut vs = vec![source];
    vs.extend(arcs.iter().map(|&a| net.arc(a).head));
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// Optimum of the walk-based LP over every 2-walk, with one variable per
/// (walk, processing vertex) and traversal-counted link loads.
pub fn walk_lp_optimum(net: &FlowNetwork, demands: &[Demand]) -> f64 {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let mut link_terms = vec![Vec::new(); net.link_count()];
    let mut node_terms = vec![Vec::new(); net.node_count()];
    for d in demands {
        let mut demand_terms = Vec::new();
        for walk in enumerate_two_walks(net, d.source, d.sink) {
            let mut mult = vec![0.0; net.link_count()];
            for &a in &walk {
                mult[net.arc(a).link] += 1.0;
            }
            for v in walk_vertices(net, d.source, &walk) {
                if net.node_capacity(v) <= 0.0 {
                    continue;
                }
                let x = problem.add_var(1.0, (0.0, f64::INFINITY));
                for (l, &m) in mult.iter().enumerate() {
                    if m > 0.0 {
                        link_terms[l].push((x, m));
                    }
                }
                node_terms[v].push((x, 1.0));
                demand_terms.push((x, 1.0));
            }
        }
        if d.is_capped() && !demand_terms.is_empty() {
            problem.add_constraint(demand_terms.as_slice(), ComparisonOp::Le, d.amount);
        }
    }
    for (l, terms) in link_terms.iter().enumerate() {
        if !terms.is_empty() {
            problem.add_constraint(terms.as_slice(), ComparisonOp::Le, net.link(l).capacity);
        }
    }
    for (v, terms) in node_terms.iter().enumerate() {
        if !terms.is_empty() {
            problem.add_constraint(terms.as_slice(), ComparisonOp::Le, net.node_capacity(v));
        }
    }
    problem.solve().expect("walk LP is always feasible").objective()
}

/// Cheapest (path s⇝u) + n(u) + (path u⇝v) over all simple paths and all u,
/// by exhaustive path enumeration.
pub fn exhaustive_processing_cost(net: &FlowNetwork, arc_w: &[f64], node_w: &[f64], source: usize) -> Vec<f64> {
    let n = net.node_count();
    // best[x][y]: cheapest simple path from x to y
    let mut best = vec![vec![f64::INFINITY; n]; n];
    fn paths(net: &FlowNetwork, w: &[f64], v: usize, cost: f64, seen: &mut [bool], row: &mut [f64]) {
        if cost < row[v] {
            row[v] = cost;
        }
        for &a in net.out_arcs(v) {
            let u = net.arc(a).head;
            if !seen[u] && w[a].is_finite() {
                seen[u] = true;
                paths(net, w, u, cost + w[a], seen, row);
                seen[u] = false;
            }
        }
    }
    for (x, row) in best.iter_mut().enumerate() {
        let mut seen = vec![false; n];
        seen[x] = true;
        paths(net, arc_w, x, 0.0, &mut seen, row);
    }
    (0..n)
        .map(|v| {
            (0..n)
                .map(|u| best[source][u] + node_w[u] + best[u][v])
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// The seeded corpus: ≤6 nodes, ≤10 arcs, integer capacities ≤5, ≤2 demands.
pub fn small_corpus(count: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        seed += 1;
        let nodes = 3 + (seed % 4) as usize;
        let spec = RandomSpec {
            nodes,
            density: 0.25 + 0.1 * (seed % 3) as f64,
            edge_capacity: (1.0, 5.0),
            node_capacity: (0.0, 5.0),
            integral: true,
            demands: 1 + (seed % 2) as usize,
            demand_amount: if seed % 5 == 0 { Some((1.0, 5.0)) } else { None },
            orientation: if seed % 7 == 0 { Orientation::Undirected } else { Orientation::Directed },
            seed,
        };
        let inst = gen_random_instance(&spec).unwrap();
        if inst.net.arc_count() <= 10 {
            out.push(inst);
        }
    }
    out
}

/// Maximum processed flow by an independent edge formulation: per commodity,
/// unprocessed (`w`) and processed (`g`) arc flows and processing `p(v)`.
/// Unprocessed flow leaves only the source's net injection; processed flow
/// is absorbed only at the sink.
pub fn edge_oracle(net: &FlowNetwork, demands: &[Demand]) -> f64 {
    if demands.is_empty() {
        return 0.0;
    }
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let mut link_terms = vec![Vec::new(); net.link_count()];
    let mut node_terms = vec![Vec::new(); net.node_count()];
    for d in demands {
        let w: Vec<_> = (0..net.arc_count()).map(|_| problem.add_var(0.0, (0.0, f64::INFINITY))).collect();
        let g: Vec<_> = (0..net.arc_count()).map(|_| problem.add_var(0.0, (0.0, f64::INFINITY))).collect();
        let p: Vec<_> = (0..net.node_count())
            .map(|v| problem.add_var(0.0, (0.0, net.node_capacity(v))))
            .collect();
        // served = p total; at the sink processed inflow − outflow = served
        let served = problem.add_var(1.0, (0.0, if d.is_capped() { d.amount } else { f64::INFINITY }));
        for v in 0..net.node_count() {
            // unprocessed: in − out − p(v) + [v = s]·served = 0
            let mut wt: Vec<_> = net.in_arcs(v).iter().map(|&a| (w[a], 1.0)).collect();
            wt.extend(net.out_arcs(v).iter().map(|&a| (w[a], -1.0)));
            wt.push((p[v], -1.0));
            if v == d.source {
                wt.push((served, 1.0));
            }
            problem.add_constraint(wt.as_slice(), ComparisonOp::Eq, 0.0);
            // processed: in − out + p(v) − [v = t]·served = 0
            let mut gt: Vec<_> = net.in_arcs(v).iter().map(|&a| (g[a], 1.0)).collect();
            gt.extend(net.out_arcs(v).iter().map(|&a| (g[a], -1.0)));
            gt.push((p[v], 1.0));
            if v == d.sink {
                gt.push((served, -1.0));
            }
            problem.add_constraint(gt.as_slice(), ComparisonOp::Eq, 0.0);
            node_terms[v].push((p[v], 1.0));
        }
        for a in 0..net.arc_count() {
            link_terms[net.arc(a).link].push((w[a], 1.0));
            link_terms[net.arc(a).link].push((g[a], 1.0));
        }
    }
    for (l, terms) in link_terms.iter().enumerate() {
        problem.add_constraint(terms.as_slice(), ComparisonOp::Le, net.link(l).capacity);
    }
    for (v, terms) in node_terms.iter().enumerate() {
        problem.add_constraint(terms.as_slice(), ComparisonOp::Le, net.node_capacity(v));
    }
    problem.solve().expect("flow LP is always feasible").objective()
}

/// Served flow when exactly `set` is bought.
pub fn purchase_value(inst: &PurchaseInstance, set: &[usize]) -> f64 {
    let mut caps = vec![0.0; inst.net.node_count()];
    for &v in set {
        caps[v] = inst.potential[v];
    }
    edge_oracle(&inst.net.with_node_capacities(caps), &inst.demands)
}

/// Every subset of the positive-potential nodes, with its cost.
pub fn candidate_subsets(inst: &PurchaseInstance) -> Vec<(Vec<usize>, f64)> {
    let cands: Vec<usize> = (0..inst.net.node_count()).filter(|&v| inst.potential[v] > 0.0).collect();
    (0u32..1 << cands.len())
        .map(|mask| {
            let set: Vec<usize> = cands.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            let cost = set.iter().map(|&v| inst.cost[v]).sum();
            (set, cost)
        })
        .collect()
}

/// Best served flow over all subsets costing at most `budget`.
pub fn best_within_budget(inst: &PurchaseInstance, budget: f64) -> (f64, Vec<usize>) {
    candidate_subsets(inst)
        .into_iter()
        .filter(|(_, c)| *c <= budget + 1e-9)
        .map(|(set, _)| (purchase_value(inst, &set), set))
        .fold((0.0, Vec::new()), |best, cur| if cur.0 > best.0 + 1e-9 { cur } else { best })
}

/// Cheapest subset serving every demand in full, if any.
pub fn cheapest_full_cover(inst: &PurchaseInstance) -> Option<(f64, Vec<usize>)> {
    let total: f64 = inst.demands.iter().map(|d| d.amount).sum();
    let mut subsets = candidate_subsets(inst);
    subsets.sort_by(|a, b| a.1.total_cmp(&b.1));
    subsets
        .into_iter()
        .find(|(set, _)| purchase_value(inst, set) >= total - 1e-7)
        .map(|(set, c)| (c, set))
}

/// Max flow by LP over directed `(tail, head, capacity)` arcs.
pub fn maxflow_oracle(nodes: usize, arcs: &[(usize, usize, f64)], s: usize, t: usize) -> f64 {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = arcs
        .iter()
        .map(|&(u, v, c)| {
            let gain = (u == s) as i32 as f64 - (v == s) as i32 as f64;
            problem.add_var(gain, (0.0, c))
        })
        .collect();
    for x in 0..nodes {
        if x == s || x == t {
            continue;
        }
        let terms: Vec<_> = arcs
            .iter()
            .zip(&vars)
            .filter_map(|(&(u, v, _), &var)| match (u == x, v == x) {
                (true, false) => Some((var, -1.0)),
                (false, true) => Some((var, 1.0)),
                _ => None,
            })
            .collect();
        if !terms.is_empty() {
            problem.add_constraint(terms.as_slice(), ComparisonOp::Eq, 0.0);
        }
    }
    problem.solve().expect("max flow LP is feasible").objective()
}
