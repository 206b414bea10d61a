//! The routing-first baseline: maximize plain multi-commodity flow while
//! ignoring processing, then process what the chosen paths happen to allow.

use crate::decompose::cancel_in;
use crate::lp::{solve_lp, Direction, LpModel, Sense};
use crate::model::{validate_instance, Demand, FlowNetwork};
use crate::solution::{WalkEntry, WalkFlowSolution};
use crate::Result;

/// A routed path of one commodity and its flow.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutedPath {
    pub demand: usize,
    pub arcs: Vec<usize>,
    pub flow: f64,
}

/// Maximum multi-commodity flow without processing, decomposed into paths
/// (cycles removed first, lowest arc index first when tracing).
pub fn route_without_processing(net: &FlowNetwork, demands: &[Demand]) -> Result<Vec<RoutedPath>> {
    validate_instance(net, demands).into_result()?;
    if demands.is_empty() {
        return Ok(Vec::new());
    }
    let mut m = LpModel::new("plain_flow", Direction::Maximize);
    let mut vars = Vec::with_capacity(demands.len());
    for (i, d) in demands.iter().enumerate() {
        let f: Vec<usize> = net
            .arcs()
            .iter()
            .enumerate()
            .map(|(a, arc)| {
                let c = if arc.tail == d.source {
                    1.0
                } else if arc.head == d.source {
                    -1.0
                } else {
                    0.0
                };
                m.add_var(format!("f{i}[{a}]"), 0.0, f64::INFINITY, c)
            })
            .collect();
        for v in 0..net.node_count() {
            if v == d.source || v == d.sink {
                continue;
            }
            let mut terms: Vec<(usize, f64)> = net.in_arcs(v).iter().map(|&a| (f[a], 1.0)).collect();
            terms.extend(net.out_arcs(v).iter().map(|&a| (f[a], -1.0)));
            m.add_constraint(format!("flow{i}[{v}]"), terms, Sense::Eq, 0.0);
        }
        let mut net_out: Vec<(usize, f64)> = net.out_arcs(d.source).iter().map(|&a| (f[a], 1.0)).collect();
        net_out.extend(net.in_arcs(d.source).iter().map(|&a| (f[a], -1.0)));
        m.add_constraint(format!("nonneg{i}"), net_out.clone(), Sense::Ge, 0.0);
        if d.is_capped() {
            m.add_constraint(format!("demand{i}"), net_out, Sense::Le, d.amount);
        }
        vars.push(f);
    }
    for (l, link) in net.links().iter().enumerate() {
        let terms = vars.iter().flat_map(|f| link.arcs.iter().map(|&a| (f[a], 1.0))).collect();
        m.add_constraint(format!("link{l}"), terms, Sense::Le, link.capacity);
    }
    let sol = solve_lp(&m)?.require_optimal("plain flow")?;

    let mut paths = Vec::new();
    for (i, d) in demands.iter().enumerate() {
        let mut flow: Vec<f64> = vars[i].iter().map(|&j| sol.values[j].max(0.0)).collect();
        let floor = 1e-12 * flow.iter().fold(1.0_f64, |a, &b| a.max(b));
        flow.iter_mut().for_each(|x| {
            if *x < floor {
                *x = 0.0
            }
        });
        cancel_in(net, &mut flow, floor);
        loop {
            let mut arcs = Vec::new();
            let mut v = d.source;
            while v != d.sink && arcs.len() <= net.node_count() {
                match net.out_arcs(v).iter().copied().find(|&a| flow[a] > 0.0) {
                    Some(a) => {
                        arcs.push(a);
                        v = net.arc(a).head;
                    }
                    None => break,
                }
            }
            if v != d.sink || arcs.is_empty() {
                break;
            }
            let amount = arcs.iter().map(|&a| flow[a]).fold(f64::INFINITY, f64::min);
            for &a in &arcs {
                flow[a] -= amount;
                if flow[a] < floor {
                    flow[a] = 0.0;
                }
            }
            paths.push(RoutedPath { demand: i, arcs, flow: amount });
        }
    }
    Ok(paths)
}

/// Routes first, then processes greedily along each path at the earliest
/// vertices with spare capacity. Only processed flow is kept.
pub fn naive_solve(net: &FlowNetwork, demands: &[Demand]) -> Result<WalkFlowSolution> {
    let paths = route_without_processing(net, demands)?;
    let mut residual = net.node_capacities().to_vec();
    let mut out = WalkFlowSolution::default();
    for path in paths {
        let mut left = path.flow;
        let mut processing = Vec::new();
        for v in net.walk_nodes(demands[path.demand].source, &path.arcs) {
            if left <= 0.0 {
                break;
            }
            let take = left.min(residual[v]);
            if take > 0.0 {
                residual[v] -= take;
                left -= take;
                processing.push((v, take));
            }
        }
        let flow: f64 = processing.iter().map(|&(_, p)| p).sum();
        if flow > 0.0 {
            out.entries.push(WalkEntry {
                demand: path.demand,
                arcs: path.arcs,
                flow,
                processing,
            });
        }
    }
    Ok(out)
}
