//! Solution representations and the feasibility verifiers every solver's
//! output is checked against.
//!
//! A commodity's flow is split into an unprocessed part (still owing its
//! processing) and a processed part. Unprocessed flow is injected at the
//! source, turns into processed flow at the vertices that process it, and only
//! processed flow is absorbed at the sink. Walks may pass through either
//! terminal and processing may happen at any vertex of the walk, terminals
//! included.

use serde::{Deserialize, Serialize};

use crate::model::{Demand, FlowNetwork, Tolerance};
use crate::report::{ValidationReport, ViolationKind};
use crate::{Error, Result};

/// Per-commodity arc flows, unprocessed arc flows and node processing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeFlowSolution {
    /// `flow[i][a]`: total commodity-`i` flow on arc `a`.
    pub flow: Vec<Vec<f64>>,
    /// `unprocessed[i][a]`: the part of `flow[i][a]` not yet processed.
    pub unprocessed: Vec<Vec<f64>>,
    /// `processing[i][v]`: commodity-`i` flow processed at node `v`.
    pub processing: Vec<Vec<f64>>,
}

impl EdgeFlowSolution {
    pub fn zeros(net: &FlowNetwork, commodities: usize) -> Self {
        EdgeFlowSolution {
            flow: vec![vec![0.0; net.arc_count()]; commodities],
            unprocessed: vec![vec![0.0; net.arc_count()]; commodities],
            processing: vec![vec![0.0; net.node_count()]; commodities],
        }
    }

    pub fn commodities(&self) -> usize {
        self.flow.len()
    }

    /// Net flow leaving the source of commodity `i`.
    pub fn delivered(&self, net: &FlowNetwork, demand: &Demand, i: usize) -> f64 {
        let out: f64 = net.out_arcs(demand.source).iter().map(|&a| self.flow[i][a]).sum();
        let inc: f64 = net.in_arcs(demand.source).iter().map(|&a| self.flow[i][a]).sum();
        out - inc
    }

    pub fn objective(&self, net: &FlowNetwork, demands: &[Demand]) -> f64 {
        demands
            .iter()
            .enumerate()
            .map(|(i, d)| self.delivered(net, d, i))
            .sum::<f64>()
            + 0.0
    }

    pub fn link_loads(&self, net: &FlowNetwork) -> Vec<f64> {
        let mut loads = vec![0.0; net.link_count()];
        for flows in &self.flow {
            for (a, &f) in flows.iter().enumerate() {
                loads[net.arc(a).link] += f;
            }
        }
        loads
    }

    pub fn node_loads(&self, net: &FlowNetwork) -> Vec<f64> {
        let mut loads = vec![0.0; net.node_count()];
        for proc in &self.processing {
            for (v, &p) in proc.iter().enumerate() {
                loads[v] += p;
            }
        }
        loads
    }
}

/// One flow-carrying walk of a commodity and where its flow is processed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkEntry {
    pub demand: usize,
    /// Arc sequence from the commodity's source to its sink.
    pub arcs: Vec<usize>,
    pub flow: f64,
    /// `(node, amount)` pairs; amounts sum to `flow`.
    pub processing: Vec<(usize, f64)>,
}

impl WalkEntry {
    pub fn nodes(&self, net: &FlowNetwork, demands: &[Demand]) -> Vec<usize> {
        net.walk_nodes(demands[self.demand].source, &self.arcs)
    }

    /// Largest number of times any vertex occurs on the walk.
    pub fn max_visits(&self, net: &FlowNetwork, demands: &[Demand]) -> usize {
        let mut counts = vec![0usize; net.node_count()];
        for v in self.nodes(net, demands) {
            counts[v] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WalkFlowSolution {
    pub entries: Vec<WalkEntry>,
}

impl WalkFlowSolution {
    pub fn objective(&self) -> f64 {
        // + 0.0 turns the empty sum's -0.0 into 0.0.
        self.entries.iter().map(|e| e.flow).sum::<f64>() + 0.0
    }

    pub fn demand_totals(&self, commodities: usize) -> Vec<f64> {
        let mut totals = vec![0.0; commodities];
        for e in &self.entries {
            totals[e.demand] += e.flow;
        }
        totals
    }

    /// Per-link load, counting an arc once per traversal.
    pub fn link_loads(&self, net: &FlowNetwork) -> Vec<f64> {
        let mut loads = vec![0.0; net.link_count()];
        for e in &self.entries {
            for &a in &e.arcs {
                loads[net.arc(a).link] += e.flow;
            }
        }
        loads
    }

    /// Per-arc load summed over commodities.
    pub fn arc_loads(&self, net: &FlowNetwork) -> Vec<f64> {
        let mut loads = vec![0.0; net.arc_count()];
        for e in &self.entries {
            for &a in &e.arcs {
                loads[a] += e.flow;
            }
        }
        loads
    }

    pub fn node_loads(&self, net: &FlowNetwork) -> Vec<f64> {
        let mut loads = vec![0.0; net.node_count()];
        for e in &self.entries {
            for &(v, p) in &e.processing {
                loads[v] += p;
            }
        }
        loads
    }

    /// Multiplies every flow and processing amount by `factor`.
    pub fn scale(&mut self, factor: f64) {
        for e in &mut self.entries {
            e.flow *= factor;
            for (_, p) in &mut e.processing {
                *p *= factor;
            }
        }
    }

    /// Aggregates the walks into arc flows. Flow processed at `v` counts as
    /// unprocessed on the arcs before the first visit of `v`.
    pub fn to_edge_solution(&self, net: &FlowNetwork, demands: &[Demand]) -> EdgeFlowSolution {
        let mut sol = EdgeFlowSolution::zeros(net, demands.len());
        for e in &self.entries {
            let nodes = e.nodes(net, demands);
            let i = e.demand;
            for &(v, amount) in &e.processing {
                let at = nodes.iter().position(|&u| u == v).unwrap_or(nodes.len() - 1);
                for (k, &a) in e.arcs.iter().enumerate() {
                    sol.flow[i][a] += amount;
                    if k < at {
                        sol.unprocessed[i][a] += amount;
                    }
                }
                sol.processing[i][v] += amount;
            }
        }
        sol
    }
}

/// Checks a walk solution against every constraint of the walk-based LP:
/// 2-walk shape, full processing of each walk, shared edge and node
/// capacities, and demand caps.
pub fn verify_walk_solution(
    net: &FlowNetwork,
    demands: &[Demand],
    sol: &WalkFlowSolution,
    tol: Tolerance,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    for (k, e) in sol.entries.iter().enumerate() {
        let d = demands
            .get(e.demand)
            .ok_or_else(|| Error::Structural(format!("walk {k} references unknown demand {}", e.demand)))?;
        if let Some(&a) = e.arcs.iter().find(|&&a| a >= net.arc_count()) {
            return Err(Error::Structural(format!("walk {k} references unknown arc {a}")));
        }
        if let Some(&(v, _)) = e.processing.iter().find(|(v, _)| *v >= net.node_count()) {
            return Err(Error::Structural(format!("walk {k} references unknown node {v}")));
        }
        let at = format!("walk {k} (demand {})", e.demand);

        let contiguous = e.arcs.windows(2).all(|w| net.arc(w[0]).head == net.arc(w[1]).tail);
        let anchored = match (e.arcs.first(), e.arcs.last()) {
            (Some(&first), Some(&last)) => net.arc(first).tail == d.source && net.arc(last).head == d.sink,
            _ => false,
        };
        if !contiguous || !anchored {
            report.push(ViolationKind::MalformedWalk, at.clone(), 0.0);
            continue;
        }
        let visits = e.max_visits(net, demands);
        if visits > 2 {
            report.push(ViolationKind::TwoWalk, at.clone(), (visits - 2) as f64);
        }
        if e.flow < -tol.abs {
            report.push(ViolationKind::NegativeValue, at.clone(), -e.flow);
        }
        let nodes = e.nodes(net, demands);
        let mut processed = 0.0;
        for &(v, p) in &e.processing {
            if p < -tol.abs {
                report.push(ViolationKind::NegativeValue, format!("{at} at {}", net.node_name(v)), -p);
            }
            if p > tol.abs && !nodes.contains(&v) {
                report.push(ViolationKind::ProcessingOffWalk, format!("{at} at {}", net.node_name(v)), p);
            }
            processed += p;
        }
        if !tol.close(processed, e.flow) {
            report.push(ViolationKind::FullProcessing, at, (processed - e.flow).abs());
        }
    }

    check_shared_capacities(net, &sol.link_loads(net), &sol.node_loads(net), tol, &mut report);
    for (i, total) in sol.demand_totals(demands.len()).into_iter().enumerate() {
        if let Some(over) = tol.excess(total, demands[i].amount) {
            report.push(ViolationKind::DemandCap, format!("demand {i}"), over);
        }
    }
    Ok(report)
}

fn check_shared_capacities(
    net: &FlowNetwork,
    link_loads: &[f64],
    node_loads: &[f64],
    tol: Tolerance,
    report: &mut ValidationReport,
) {
    for (l, &load) in link_loads.iter().enumerate() {
        if let Some(over) = tol.excess(load, net.link(l).capacity) {
            let arc = net.arc(net.link(l).arcs[0]);
            report.push(
                ViolationKind::EdgeCapacity,
                format!("{}->{}", net.node_name(arc.tail), net.node_name(arc.head)),
                over,
            );
        }
    }
    for (v, &load) in node_loads.iter().enumerate() {
        if let Some(over) = tol.excess(load, net.node_capacity(v)) {
            report.push(ViolationKind::NodeCapacity, net.node_name(v).to_string(), over);
        }
    }
}

/// Checks an edge-based solution: flow conservation away from the
/// terminals, processing conservation (the source additionally injects the
/// commodity's net outflow as unprocessed flow), unprocessed ≤ total flow,
/// non-negativity, shared capacities and demand caps.
pub fn verify_edge_solution(
    net: &FlowNetwork,
    demands: &[Demand],
    sol: &EdgeFlowSolution,
    tol: Tolerance,
) -> Result<ValidationReport> {
    let k = demands.len();
    let dims_ok = sol.flow.len() == k
        && sol.unprocessed.len() == k
        && sol.processing.len() == k
        && sol.flow.iter().chain(&sol.unprocessed).all(|row| row.len() == net.arc_count())
        && sol.processing.iter().all(|row| row.len() == net.node_count());
    if !dims_ok {
        return Err(Error::Structural("edge solution dimensions do not match the instance".into()));
    }
    let mut report = ValidationReport::default();
    for (i, d) in demands.iter().enumerate() {
        let (f, w, p) = (&sol.flow[i], &sol.unprocessed[i], &sol.processing[i]);
        for a in 0..net.arc_count() {
            let at = || {
                let arc = net.arc(a);
                format!("demand {i} arc {}->{}", net.node_name(arc.tail), net.node_name(arc.head))
            };
            if f[a] < -tol.abs || w[a] < -tol.abs {
                report.push(ViolationKind::NegativeValue, at(), -f[a].min(w[a]));
            }
            if let Some(over) = tol.excess(w[a], f[a]) {
                report.push(ViolationKind::UnprocessedExceedsFlow, at(), over);
            }
        }
        let net_out = sol.delivered(net, d, i);
        for v in 0..net.node_count() {
            if p[v] < -tol.abs {
                report.push(ViolationKind::NegativeValue, format!("demand {i} node {}", net.node_name(v)), -p[v]);
            }
            let f_in: f64 = net.in_arcs(v).iter().map(|&a| f[a]).sum();
            let f_out: f64 = net.out_arcs(v).iter().map(|&a| f[a]).sum();
            if v != d.source && v != d.sink && !tol.close(f_in, f_out) {
                report.push(
                    ViolationKind::FlowConservation,
                    format!("demand {i} node {}", net.node_name(v)),
                    (f_in - f_out).abs(),
                );
            }
            let w_in: f64 = net.in_arcs(v).iter().map(|&a| w[a]).sum();
            let w_out: f64 = net.out_arcs(v).iter().map(|&a| w[a]).sum();
            let injected = if v == d.source { net_out } else { 0.0 };
            let balance = w_in + injected - w_out;
            if !tol.close(balance, p[v]) {
                report.push(
                    ViolationKind::ProcessingConservation,
                    format!("demand {i} node {}", net.node_name(v)),
                    (balance - p[v]).abs(),
                );
            }
        }
        if let Some(over) = tol.excess(net_out, d.amount) {
            report.push(ViolationKind::DemandCap, format!("demand {i}"), over);
        }
    }
    check_shared_capacities(net, &sol.link_loads(net), &sol.node_loads(net), tol, &mut report);
    Ok(report)
}
