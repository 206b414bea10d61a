//! The polynomial-size edge formulation of the processing flow problem.
//!
//! Each commodity's arc flow is carried by two variables, the unprocessed
//! part `w` and the processed part `g`, so the total is `f = w + g` and the
//! bound `w ≤ f` holds by construction. Processing variables `p(v)` turn
//! unprocessed flow into processed flow.

use crate::lp::{solve_lp, Direction, LpModel, LpSolution, Sense};
use crate::model::{validate_instance, Demand, FlowNetwork};
use crate::solution::EdgeFlowSolution;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum FlowObjective {
    /// Maximize the total processed flow delivered.
    MaxTotalFlow,
    /// Route every demand in full while minimizing the largest utilization of
    /// any link or processing node. Capacities become soft.
    MinMaxCongestion,
    /// Route every demand in full within capacities, minimizing
    /// Σ weight·load/capacity over links and nodes.
    MinWeightedCongestion { link_weights: Vec<f64>, node_weights: Vec<f64> },
}

/// Where each quantity lives in the LP's variable vector.
#[derive(Debug, Clone)]
pub struct EdgeLpLayout {
    pub unprocessed: Vec<Vec<usize>>,
    pub processed: Vec<Vec<usize>>,
    pub processing: Vec<Vec<Option<usize>>>,
    pub congestion: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct EdgeLp {
    pub model: LpModel,
    pub layout: EdgeLpLayout,
}

/// Builds the edge LP for `objective`.
pub fn build_edge_lp(net: &FlowNetwork, demands: &[Demand], objective: &FlowObjective) -> Result<EdgeLp> {
    validate_instance(net, demands).into_result()?;
    let minimize = !matches!(objective, FlowObjective::MaxTotalFlow);
    if minimize {
        if let Some(i) = demands.iter().position(|d| !d.is_capped()) {
            return Err(Error::Unsupported(format!(
                "congestion objectives need a finite amount for every demand (demand {i} is uncapped)"
            )));
        }
    }
    if let FlowObjective::MinWeightedCongestion {
        link_weights,
        node_weights,
    } = objective
    {
        if link_weights.len() != net.link_count() || node_weights.len() != net.node_count() {
            return Err(Error::Structural("congestion weights do not match the network".into()));
        }
        if link_weights.iter().chain(node_weights).any(|&w| !(w >= 0.0 && w.is_finite())) {
            return Err(Error::Structural("congestion weights must be finite and non-negative".into()));
        }
    }
    let soft = matches!(objective, FlowObjective::MinMaxCongestion);

    let dir = if minimize { Direction::Minimize } else { Direction::Maximize };
    let mut m = LpModel::new("processing_flow", dir);
    let inf = f64::INFINITY;
    let mut layout = EdgeLpLayout {
        unprocessed: Vec::new(),
        processed: Vec::new(),
        processing: Vec::new(),
        congestion: None,
    };
    let arc_label = |a: usize| {
        let arc = net.arc(a);
        format!("{}>{}", net.node_name(arc.tail), net.node_name(arc.head))
    };

    for (i, d) in demands.iter().enumerate() {
        let gain = if minimize { 0.0 } else { 1.0 };
        let mut w = Vec::with_capacity(net.arc_count());
        let mut g = Vec::with_capacity(net.arc_count());
        for a in 0..net.arc_count() {
            let arc = net.arc(a);
            let c = if arc.tail == d.source {
                gain
            } else if arc.head == d.source {
                -gain
            } else {
                0.0
            };
            w.push(m.add_var(format!("w{i}[{}]", arc_label(a)), 0.0, inf, c));
            g.push(m.add_var(format!("g{i}[{}]", arc_label(a)), 0.0, inf, c));
        }
        let mut p = vec![None; net.node_count()];
        for (v, slot) in p.iter_mut().enumerate() {
            let cap = net.node_capacity(v);
            if v == d.source && cap <= 0.0 {
                continue;
            }
            let upper = if soft && cap > 0.0 { inf } else { cap };
            *slot = Some(m.add_var(format!("p{i}[{}]", net.node_name(v)), 0.0, upper, 0.0));
        }

        let both = |v: usize, sign_in: f64, out: bool| -> Vec<(usize, f64)> {
            let arcs = if out { net.out_arcs(v) } else { net.in_arcs(v) };
            arcs.iter().flat_map(|&a| [(w[a], sign_in), (g[a], sign_in)]).collect()
        };
        for v in 0..net.node_count() {
            if v != d.source && v != d.sink {
                let mut terms = both(v, 1.0, false);
                terms.extend(both(v, -1.0, true));
                m.add_constraint(format!("flow{i}[{}]", net.node_name(v)), terms, Sense::Eq, 0.0);
            }
            // Unprocessed balance away from the source; processed balance at
            // the source (equivalent there given the injection).
            let x = if v == d.source { &g } else { &w };
            let sign = if v == d.source { -1.0 } else { 1.0 };
            let mut terms: Vec<(usize, f64)> = net.in_arcs(v).iter().map(|&a| (x[a], sign)).collect();
            terms.extend(net.out_arcs(v).iter().map(|&a| (x[a], -sign)));
            if let Some(pv) = p[v] {
                terms.push((pv, -1.0));
            }
            m.add_constraint(format!("proc{i}[{}]", net.node_name(v)), terms, Sense::Eq, 0.0);
        }
        let mut net_out = both(d.source, 1.0, true);
        net_out.extend(both(d.source, -1.0, false));
        if minimize {
            m.add_constraint(format!("demand{i}"), net_out, Sense::Eq, d.amount);
        } else {
            m.add_constraint(format!("nonneg{i}"), net_out.clone(), Sense::Ge, 0.0);
            if d.is_capped() {
                m.add_constraint(format!("demand{i}"), net_out, Sense::Le, d.amount);
            }
        }
        layout.unprocessed.push(w);
        layout.processed.push(g);
        layout.processing.push(p);
    }

    let lambda = soft.then(|| m.add_var("congestion", 0.0, inf, 1.0));
    layout.congestion = lambda;
    for (l, link) in net.links().iter().enumerate() {
        let mut terms = Vec::new();
        for i in 0..demands.len() {
            for &a in &link.arcs {
                terms.push((layout.unprocessed[i][a], 1.0));
                terms.push((layout.processed[i][a], 1.0));
            }
        }
        if let FlowObjective::MinWeightedCongestion { link_weights, .. } = objective {
            if link.capacity > 0.0 {
                for &(j, _) in &terms {
                    m.vars[j].cost += link_weights[l] / link.capacity;
                }
            }
        }
        match lambda {
            Some(lam) => {
                terms.push((lam, -link.capacity));
                m.add_constraint(format!("link{l}"), terms, Sense::Le, 0.0);
            }
            None => {
                m.add_constraint(format!("link{l}"), terms, Sense::Le, link.capacity);
            }
        }
    }
    for v in 0..net.node_count() {
        let cap = net.node_capacity(v);
        let mut terms: Vec<(usize, f64)> = layout.processing.iter().filter_map(|p| p[v]).map(|j| (j, 1.0)).collect();
        if terms.is_empty() || cap <= 0.0 {
            continue;
        }
        if let FlowObjective::MinWeightedCongestion { node_weights, .. } = objective {
            for &(j, _) in &terms {
                m.vars[j].cost += node_weights[v] / cap;
            }
        }
        match lambda {
            Some(lam) => {
                terms.push((lam, -cap));
                m.add_constraint(format!("node[{}]", net.node_name(v)), terms, Sense::Le, 0.0);
            }
            // A single commodity is already capped by the variable bound.
            None if terms.len() > 1 => {
                m.add_constraint(format!("node[{}]", net.node_name(v)), terms, Sense::Le, cap);
            }
            None => {}
        }
    }
    Ok(EdgeLp { model: m, layout })
}

/// Reads an [`EdgeFlowSolution`] out of an optimal assignment. Round-off
/// below 1e-12 is snapped to zero.
pub fn extract_edge_solution(lp: &EdgeLp, sol: &LpSolution, net: &FlowNetwork, demands: &[Demand]) -> EdgeFlowSolution {
    let snap = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x.max(0.0) };
    let mut out = EdgeFlowSolution::zeros(net, demands.len());
    for i in 0..demands.len() {
        for a in 0..net.arc_count() {
            let w = snap(sol.values[lp.layout.unprocessed[i][a]]);
            let g = snap(sol.values[lp.layout.processed[i][a]]);
            out.flow[i][a] = w + g;
            out.unprocessed[i][a] = w;
        }
        for v in 0..net.node_count() {
            if let Some(j) = lp.layout.processing[i][v] {
                out.processing[i][v] = snap(sol.values[j]);
            }
        }
    }
    out
}

/// Optimal value and solution of the edge LP.
#[derive(Debug, Clone)]
pub struct EdgeLpOutcome {
    /// Objective in the LP's own terms: delivered flow for
    /// [`FlowObjective::MaxTotalFlow`], congestion otherwise.
    pub objective: f64,
    pub solution: EdgeFlowSolution,
    pub iterations: usize,
}

pub fn solve_edge_lp(net: &FlowNetwork, demands: &[Demand], objective: &FlowObjective) -> Result<EdgeLpOutcome> {
    let lp = build_edge_lp(net, demands, objective)?;
    let sol = solve_lp(&lp.model)?.require_optimal("edge")?;
    let solution = extract_edge_solution(&lp, &sol, net, demands);
    Ok(EdgeLpOutcome {
        objective: sol.objective,
        solution,
        iterations: sol.iterations,
    })
}

/// Maximum total processed flow.
pub fn max_processed_flow(net: &FlowNetwork, demands: &[Demand]) -> Result<f64> {
    if demands.is_empty() {
        validate_instance(net, demands).into_result()?;
        return Ok(0.0);
    }
    Ok(solve_edge_lp(net, demands, &FlowObjective::MaxTotalFlow)?.objective)
}

/// Per-link and per-node utilization (load / capacity) of a solution; 0 where
/// capacity and load are both 0, infinite if load sits on zero capacity.
pub fn congestion(net: &FlowNetwork, sol: &EdgeFlowSolution) -> (Vec<f64>, Vec<f64>) {
    let ratio = |load: f64, cap: f64| {
        if load <= 0.0 {
            0.0
        } else if cap <= 0.0 {
            f64::INFINITY
        } else {
            load / cap
        }
    };
    let links = sol
        .link_loads(net)
        .iter()
        .zip(net.links())
        .map(|(&l, link)| ratio(l, link.capacity))
        .collect();
    let nodes = sol
        .node_loads(net)
        .iter()
        .enumerate()
        .map(|(v, &l)| ratio(l, net.node_capacity(v)))
        .collect();
    (links, nodes)
}
