use std::collections::HashMap;

use super::{solution_for_set, PurchaseInstance, PurchaseSolution};
use crate::maxflow::MaxFlow;
use crate::model::Orientation;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyConfig {
    /// Size of the seed sets enumerated before greedy extension.
    pub depth: usize,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig { depth: 3 }
    }
}

impl GreedyConfig {
    /// Singleton seeds only; cheaper on larger instances.
    pub fn fast() -> Self {
        GreedyConfig { depth: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyOutcome {
    /// Chosen set with its best routing.
    pub solution: PurchaseSolution,
    /// Processing that can be returned to the source in the quarter-capacity
    /// network.
    pub oracle_value: f64,
    /// Flow delivered by the explicit construction: processed flow reaches the
    /// source in one half of the capacity and is routed to the sinks in the
    /// other.
    pub constructive_value: f64,
}

fn single_source(inst: &PurchaseInstance) -> Result<usize> {
    if inst.net.orientation() != Orientation::Undirected {
        return Err(Error::Unsupported(
            "greedy purchase needs an undirected network; use round_budgeted_purchase".into(),
        ));
    }
    let Some(first) = inst.demands.first() else {
        return Err(Error::Unsupported("greedy purchase needs at least one demand".into()));
    };
    if inst.demands.iter().any(|d| d.source != first.source) {
        return Err(Error::Unsupported(
            "greedy purchase needs a single source; use round_budgeted_purchase".into(),
        ));
    }
    Ok(first.source)
}

/// Max flow into the source from the purchased nodes, each emitting at most
/// its potential, with every link at a quarter of its capacity.
pub fn processing_oracle(inst: &PurchaseInstance, set: &[usize]) -> Result<f64> {
    let s = single_source(inst)?;
    Ok(oracle_value(inst, s, set))
}

fn oracle_value(inst: &PurchaseInstance, s: usize, set: &[usize]) -> f64 {
    let net = &inst.net;
    let mut g = MaxFlow::new(net.node_count());
    for link in net.links() {
        let a = net.arc(link.arcs[0]);
        g.add_edge(a.tail, a.head, link.capacity / 4.0);
    }
    let sigma = g.add_node();
    for &p in set {
        g.add_arc(sigma, p, inst.potential[p]);
    }
    g.run(sigma, s)
}

fn constructive(inst: &PurchaseInstance, s: usize, supply: f64) -> f64 {
    let net = &inst.net;
    let mut g = MaxFlow::new(net.node_count());
    for link in net.links() {
        let a = net.arc(link.arcs[0]);
        g.add_edge(a.tail, a.head, link.capacity / 2.0);
    }
    let src = g.add_node();
    let sink = g.add_node();
    g.add_arc(src, s, supply);
    for d in &inst.demands {
        g.add_arc(d.sink, sink, d.amount);
    }
    g.run(src, sink)
}

fn subsets(items: &[usize], max: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(cur.clone());
    if cur.len() == max {
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        subsets(items, max, i + 1, cur, out);
        cur.pop();
    }
}

/// Budgeted purchase for an undirected single-source instance by greedy
/// maximization of [`processing_oracle`] under the budget, after enumerating
/// small seed sets.
pub fn greedy_budgeted_single_source(inst: &PurchaseInstance, config: &GreedyConfig) -> Result<GreedyOutcome> {
    let s = single_source(inst)?;
    let k = inst
        .budget
        .ok_or_else(|| Error::Structural("budgeted purchase needs a budget".into()))?;
    let candidates = inst.affordable(k);
    let mut memo: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut f = |set: &[usize]| -> f64 {
        let mut key = set.to_vec();
        key.sort_unstable();
        *memo.entry(key).or_insert_with_key(|key| oracle_value(inst, s, key))
    };

    let mut seeds = Vec::new();
    subsets(&candidates, config.depth, 0, &mut Vec::new(), &mut seeds);
    let mut best: (f64, Vec<usize>) = (0.0, Vec::new());
    for seed in seeds {
        if inst.cost_of(&seed) > k {
            continue;
        }
        let mut set = seed;
        let mut value = f(&set);
        let mut spent = inst.cost_of(&set);
        loop {
            // Zero-cost gains come first; otherwise best gain per unit cost.
            let mut pick: Option<(usize, f64, f64)> = None;
            for &v in &candidates {
                if set.contains(&v) || spent + inst.cost[v] > k {
                    continue;
                }
                set.push(v);
                let gain = f(&set) - value;
                set.pop();
                if gain <= 1e-12 {
                    continue;
                }
                let rate = if inst.cost[v] > 0.0 { gain / inst.cost[v] } else { f64::INFINITY };
                if pick.is_none_or(|(_, r, _)| rate > r) {
                    pick = Some((v, rate, gain));
                }
            }
            let Some((v, _, gain)) = pick else { break };
            set.push(v);
            spent += inst.cost[v];
            value += gain;
        }
        if value > best.0 + 1e-12 {
            best = (value, set);
        }
    }

    let (oracle, mut set) = best;
    set.sort_unstable();
    let solution = solution_for_set(inst, &set, oracle, "greedy")?;
    Ok(GreedyOutcome {
        solution,
        oracle_value: oracle,
        constructive_value: constructive(inst, s, oracle),
    })
}
