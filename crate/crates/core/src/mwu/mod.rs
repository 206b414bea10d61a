//! Multiplicative-weights approximation for the maximum processed flow.
//!
//! Every link and every processing-capable node is an expert whose weight
//! grows with its utilization. Each iteration routes a bottleneck amount of
//! flow along the cheapest processed 2-walk under the current weights; the
//! accumulated flow is scaled down at the end so that it is feasible.

mod shortest;

pub use shortest::{shortest_processing_2walk, ShortestWalkResult};

use std::collections::HashMap;

use crate::model::{validate_instance, Demand, FlowNetwork};
use crate::solution::{WalkEntry, WalkFlowSolution};
use crate::{Error, Result};

/// How the flow of a chosen walk is assigned to processing vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Process everything at the vertex that made the walk cheapest, and
    /// route min(bottleneck link capacity, its capacity).
    Argmin,
    /// Spread processing over all capable vertices of the walk in proportion
    /// to their capacity.
    Proportional,
}

#[derive(Debug, Clone, Copy)]
pub struct MwuConfig {
    pub epsilon: f64,
    /// Initial expert weight; defaults to [`default_delta`].
    pub delta: Option<f64>,
    pub max_iterations: usize,
    pub placement: Placement,
    /// Progress lines on standard error.
    pub verbose: bool,
}

impl Default for MwuConfig {
    fn default() -> Self {
        MwuConfig {
            epsilon: 0.1,
            delta: None,
            max_iterations: 10_000_000,
            placement: Placement::Argmin,
            verbose: false,
        }
    }
}

impl MwuConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        MwuConfig {
            epsilon,
            ..Default::default()
        }
    }
}

/// δ = (1+ε)·((1+ε)·m)^(−1/ε) for `m` experts.
pub fn default_delta(epsilon: f64, experts: usize) -> f64 {
    (1.0 + epsilon) * ((1.0 + epsilon) * experts as f64).powf(-1.0 / epsilon)
}

/// Number of experts: one per capacity link plus one per node that can
/// process.
pub fn expert_count(net: &FlowNetwork) -> usize {
    net.link_count() + net.node_capacities().iter().filter(|&&c| c > 0.0).count()
}

/// (|V| + |E|)·ln(1/(|E|·δ))/ε.
pub fn iteration_bound(nodes: usize, links: usize, epsilon: f64, delta: f64) -> f64 {
    (nodes + links) as f64 * (1.0 / (links as f64 * delta)).ln() / epsilon
}

/// One routed walk, before the final scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct MwuStep {
    pub demand: usize,
    pub arcs: Vec<usize>,
    /// Vertex minimizing the walk cost.
    pub cheapest: usize,
    pub flow: f64,
    pub processing: Vec<(usize, f64)>,
    /// Weighted length of the walk when it was chosen.
    pub cost: f64,
    /// Largest gain of any expert in this step (never above 1).
    pub max_gain: f64,
}

#[derive(Debug, Clone)]
pub struct MwuState {
    pub epsilon: f64,
    pub delta: f64,
    pub placement: Placement,
    pub link_weight: Vec<f64>,
    /// Weight per node; only meaningful where the node can process.
    pub node_weight: Vec<f64>,
    /// Flow routed per demand, unscaled.
    pub routed: Vec<f64>,
    pub excluded: Vec<bool>,
    pub iterations: usize,
    pub stopped: bool,
    walks: Vec<WalkEntry>,
    index: HashMap<(usize, Vec<usize>), usize>,
}

impl MwuState {
    pub fn new(net: &FlowNetwork, demands: &[Demand], config: &MwuConfig) -> Result<Self> {
        validate_instance(net, demands).into_result()?;
        let eps = config.epsilon;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Structural(format!("epsilon must lie in (0, 1), got {eps}")));
        }
        let delta = config.delta.unwrap_or_else(|| default_delta(eps, expert_count(net).max(1)));
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Structural(format!("delta must lie in (0, 1), got {delta}")));
        }
        Ok(MwuState {
            epsilon: eps,
            delta,
            placement: config.placement,
            link_weight: vec![delta; net.link_count()],
            node_weight: vec![delta; net.node_count()],
            routed: vec![0.0; demands.len()],
            excluded: vec![false; demands.len()],
            iterations: 0,
            stopped: net.link_count() == 0,
            walks: Vec::new(),
            index: HashMap::new(),
        })
    }

    /// Factor the accumulated flow is divided by: log_{1+ε}((1+ε)/δ).
    pub fn scale_factor(&self) -> f64 {
        ((1.0 + self.epsilon) / self.delta).ln() / (1.0 + self.epsilon).ln()
    }

    fn arc_weights(&self, net: &FlowNetwork) -> Vec<f64> {
        net.arcs()
            .iter()
            .map(|arc| {
                let cap = net.link(arc.link).capacity;
                if cap > 0.0 {
                    self.link_weight[arc.link] / cap
                } else {
                    f64::INFINITY
                }
            })
            .collect()
    }

    fn node_weights(&self, net: &FlowNetwork) -> Vec<f64> {
        (0..net.node_count())
            .map(|v| {
                let cap = net.node_capacity(v);
                if cap > 0.0 {
                    self.node_weight[v] / cap
                } else {
                    f64::INFINITY
                }
            })
            .collect()
    }

    /// Performs one iteration: picks the globally cheapest processed walk,
    /// routes its bottleneck amount and updates the weights. Returns `None`
    /// (and stops) when no demand has a usable walk.
    pub fn iterate(&mut self, net: &FlowNetwork, demands: &[Demand]) -> Option<MwuStep> {
        if self.stopped {
            return None;
        }
        let arc_w = self.arc_weights(net);
        let node_w = self.node_weights(net);
        let mut by_source: HashMap<usize, ShortestWalkResult> = HashMap::new();
        let mut best: Option<(f64, usize)> = None;
        for (i, d) in demands.iter().enumerate() {
            if self.excluded[i] {
                continue;
            }
            let r = by_source
                .entry(d.source)
                .or_insert_with(|| shortest_processing_2walk(net, &arc_w, &node_w, d.source));
            let c = r.cost[d.sink];
            if c.is_finite() && best.is_none_or(|(bc, _)| c < bc) {
                best = Some((c, i));
            }
        }
        let Some((cost, i)) = best else {
            self.stopped = true;
            return None;
        };
        let (arcs, cheapest) = by_source[&demands[i].source].walk_to(net, demands[i].sink)?;

        let mult = net.link_multiplicity(&arcs);
        let edge_room = mult
            .iter()
            .map(|&(l, k)| net.link(l).capacity / k as f64)
            .fold(f64::INFINITY, f64::min);
        let (mut flow, mut processing) = match self.placement {
            Placement::Argmin => {
                let f = edge_room.min(net.node_capacity(cheapest));
                (f, vec![(cheapest, f)])
            }
            Placement::Proportional => {
                let mut capable: Vec<usize> = net
                    .walk_nodes(demands[i].source, &arcs)
                    .into_iter()
                    .filter(|&v| net.node_capacity(v) > 0.0)
                    .collect();
                capable.sort_unstable();
                capable.dedup();
                let total: f64 = capable.iter().map(|&v| net.node_capacity(v)).sum();
                if total >= edge_room {
                    let split = capable.iter().map(|&v| (v, edge_room * net.node_capacity(v) / total)).collect();
                    (edge_room, split)
                } else {
                    (total, capable.iter().map(|&v| (v, net.node_capacity(v))).collect())
                }
            }
        };

        let d = &demands[i];
        if d.is_capped() {
            let remaining = d.amount * self.scale_factor() - self.routed[i];
            if flow >= remaining {
                let shrink = if flow > 0.0 { remaining.max(0.0) / flow } else { 0.0 };
                flow *= shrink;
                processing.iter_mut().for_each(|(_, p)| *p *= shrink);
                self.excluded[i] = true;
            }
        }
        self.routed[i] += flow;

        let growth = 1.0 + self.epsilon;
        let mut max_gain: f64 = 0.0;
        for &(l, k) in &mult {
            let gain = k as f64 * flow / net.link(l).capacity;
            max_gain = max_gain.max(gain);
            self.link_weight[l] *= growth.powf(gain);
            if self.link_weight[l] > 1.0 {
                self.stopped = true;
            }
        }
        for &(v, p) in &processing {
            let gain = p / net.node_capacity(v);
            max_gain = max_gain.max(gain);
            self.node_weight[v] *= growth.powf(gain);
            if self.node_weight[v] > 1.0 {
                self.stopped = true;
            }
        }
        self.iterations += 1;

        let key = (i, arcs.clone());
        match self.index.get(&key) {
            Some(&k) => {
                let entry = &mut self.walks[k];
                entry.flow += flow;
                for &(v, p) in &processing {
                    match entry.processing.iter_mut().find(|(u, _)| *u == v) {
                        Some(slot) => slot.1 += p,
                        None => entry.processing.push((v, p)),
                    }
                }
            }
            None => {
                self.index.insert(key, self.walks.len());
                self.walks.push(WalkEntry {
                    demand: i,
                    arcs: arcs.clone(),
                    flow,
                    processing: processing.clone(),
                });
            }
        }
        Some(MwuStep {
            demand: i,
            arcs,
            cheapest,
            flow,
            processing,
            cost,
            max_gain,
        })
    }

    /// Scales the accumulated flow into a feasible solution.
    pub fn finish(self) -> WalkFlowSolution {
        let factor = 1.0 / self.scale_factor();
        let mut sol = WalkFlowSolution {
            entries: self.walks.into_iter().filter(|w| w.flow > 0.0).collect(),
        };
        sol.scale(factor);
        sol
    }
}

#[derive(Debug, Clone)]
pub struct MwuOutcome {
    pub solution: WalkFlowSolution,
    pub iterations: usize,
    pub delta: f64,
}

/// Runs the multiplicative-weights solver to completion.
pub fn mwu_solve(net: &FlowNetwork, demands: &[Demand], config: &MwuConfig) -> Result<MwuOutcome> {
    let mut state = MwuState::new(net, demands, config)?;
    while !state.stopped {
        if state.iterations >= config.max_iterations {
            return Err(Error::ResourceLimit(format!(
                "multiplicative-weights solver exceeded {} iterations",
                config.max_iterations
            )));
        }
        if state.iterate(net, demands).is_none() {
            break;
        }
        if config.verbose && state.iterations % 1000 == 0 {
            let bound: f64 = state.routed.iter().sum::<f64>() / state.scale_factor();
            eprintln!("iteration {}: routed {bound:.6}", state.iterations);
        }
    }
    let iterations = state.iterations;
    let delta = state.delta;
    Ok(MwuOutcome {
        solution: state.finish(),
        iterations,
        delta,
    })
}
