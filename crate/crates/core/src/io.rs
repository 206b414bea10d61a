//! Solution documents (JSON) and per-walk CSV rows.
//!
//! Walk documents name nodes and carry arc indices, so reading one back
//! against the same instance reproduces the solution exactly.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::instance::{parse_instance, Instance};
use crate::model::{Demand, FlowNetwork};
use crate::purchase::PurchaseSolution;
use crate::solution::{EdgeFlowSolution, WalkEntry, WalkFlowSolution};
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub algorithm: String,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
}

impl Meta {
    pub fn new(algorithm: &str) -> Self {
        Meta {
            algorithm: algorithm.to_string(),
            ..Meta::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub demand: usize,
    pub nodes: Vec<String>,
    pub arcs: Vec<usize>,
    pub flow: f64,
    pub processing: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeLoad {
    pub tail: String,
    pub head: String,
    pub load: f64,
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub objective: f64,
    pub walks: Vec<WalkRecord>,
    /// One entry per capacity link.
    pub edge_loads: Vec<EdgeLoad>,
    pub node_loads: BTreeMap<String, f64>,
    pub meta: Meta,
}

fn edge_loads(net: &FlowNetwork, loads: &[f64]) -> Vec<EdgeLoad> {
    net.links()
        .iter()
        .zip(loads)
        .map(|(link, &load)| {
            let arc = net.arc(link.arcs[0]);
            EdgeLoad {
                tail: net.node_name(arc.tail).to_string(),
                head: net.node_name(arc.head).to_string(),
                load,
                capacity: link.capacity,
            }
        })
        .collect()
}

fn node_loads(net: &FlowNetwork, loads: &[f64]) -> BTreeMap<String, f64> {
    (0..net.node_count()).map(|v| (net.node_name(v).to_string(), loads[v])).collect()
}

fn node_id(net: &FlowNetwork, name: &str) -> Result<usize> {
    net.node_index(name)
        .ok_or_else(|| Error::Structural(format!("unknown node {name:?} in solution document")))
}

impl SolutionDocument {
    pub fn from_walks(net: &FlowNetwork, demands: &[Demand], sol: &WalkFlowSolution, meta: Meta) -> Self {
        let walks = sol
            .entries
            .iter()
            .map(|e| {
                let mut processing = BTreeMap::new();
                for &(v, p) in &e.processing {
                    *processing.entry(net.node_name(v).to_string()).or_insert(0.0) += p;
                }
                WalkRecord {
                    demand: e.demand,
                    nodes: e.nodes(net, demands).into_iter().map(|v| net.node_name(v).to_string()).collect(),
                    arcs: e.arcs.clone(),
                    flow: e.flow,
                    processing,
                }
            })
            .collect();
        SolutionDocument {
            objective: sol.objective(),
            walks,
            edge_loads: edge_loads(net, &sol.link_loads(net)),
            node_loads: node_loads(net, &sol.node_loads(net)),
            meta,
        }
    }

    /// Rebuilds the walk solution, checking the document against `net`.
    pub fn to_walks(&self, net: &FlowNetwork, demands: &[Demand]) -> Result<WalkFlowSolution> {
        let mut entries = Vec::with_capacity(self.walks.len());
        for (k, w) in self.walks.iter().enumerate() {
            let d = demands
                .get(w.demand)
                .ok_or_else(|| Error::Structural(format!("walk {k} refers to unknown demand {}", w.demand)))?;
            if let Some(&a) = w.arcs.iter().find(|&&a| a >= net.arc_count()) {
                return Err(Error::Structural(format!("walk {k} refers to unknown arc {a}")));
            }
            let nodes: Vec<String> = net.walk_nodes(d.source, &w.arcs).into_iter().map(|v| net.node_name(v).to_string()).collect();
            if nodes != w.nodes {
                return Err(Error::Structural(format!("walk {k}: node list does not match its arcs")));
            }
            let mut processing = Vec::with_capacity(w.processing.len());
            for (name, &p) in &w.processing {
                processing.push((node_id(net, name)?, p));
            }
            processing.sort_by_key(|&(v, _)| v);
            entries.push(WalkEntry {
                demand: w.demand,
                arcs: w.arcs.clone(),
                flow: w.flow,
                processing,
            });
        }
        Ok(WalkFlowSolution { entries })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurchaseDocument {
    pub method: String,
    pub purchased: Vec<String>,
    pub cost: f64,
    pub lp_objective: f64,
    pub total_served: f64,
    /// Delivered amount per demand.
    pub served: Vec<f64>,
    /// Delivered fraction of each demand's amount.
    pub served_fraction: Vec<f64>,
    pub edge_loads: Vec<EdgeLoad>,
    pub node_loads: BTreeMap<String, f64>,
    pub flows: EdgeFlowSolution,
    pub meta: Meta,
}

impl PurchaseDocument {
    pub fn new(net: &FlowNetwork, demands: &[Demand], sol: &PurchaseSolution, meta: Meta) -> Self {
        PurchaseDocument {
            method: sol.method.clone(),
            purchased: sol.purchased.iter().map(|&v| net.node_name(v).to_string()).collect(),
            cost: sol.cost,
            lp_objective: sol.lp_objective,
            total_served: sol.total_served(),
            served: sol.served.clone(),
            served_fraction: sol.served_fractions(demands),
            edge_loads: edge_loads(net, &sol.flows.link_loads(net)),
            node_loads: node_loads(net, &sol.flows.node_loads(net)),
            flows: sol.flows.clone(),
            meta,
        }
    }
}

/// An edge-based solution bundled with the instance it solves, as consumed by
/// `pflow decompose`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSolutionDocument {
    /// The instance in the text format.
    pub instance: String,
    pub objective: f64,
    pub solution: EdgeFlowSolution,
    pub meta: Meta,
}

impl EdgeSolutionDocument {
    pub fn new(inst: &Instance, sol: &EdgeFlowSolution, meta: Meta) -> Self {
        EdgeSolutionDocument {
            instance: inst.emit(),
            objective: sol.objective(&inst.net, &inst.demands),
            solution: sol.clone(),
            meta,
        }
    }

    pub fn parts(&self) -> Result<(Instance, EdgeFlowSolution)> {
        let inst = parse_instance(&self.instance)?;
        let k = inst.demands.len();
        let (arcs, nodes) = (inst.net.arc_count(), inst.net.node_count());
        let sol = &self.solution;
        let shaped = sol.flow.len() == k
            && sol.unprocessed.len() == k
            && sol.processing.len() == k
            && sol.flow.iter().chain(&sol.unprocessed).all(|r| r.len() == arcs)
            && sol.processing.iter().all(|r| r.len() == nodes);
        if !shaped {
            return Err(Error::Structural("edge solution does not match the embedded instance".into()));
        }
        Ok((inst, self.solution.clone()))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_json(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    from_json(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Serialize)]
struct WalkRow<'a> {
    demand: usize,
    source: &'a str,
    sink: &'a str,
    flow: f64,
    hops: usize,
    nodes: String,
    processing: String,
}

/// One CSV row per walk: demand, terminals, flow, hop count, the node
/// sequence (space separated) and `node:amount` processing pairs.
pub fn write_walks_csv<W: Write>(out: W, net: &FlowNetwork, demands: &[Demand], sol: &WalkFlowSolution) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for e in &sol.entries {
        let d = &demands[e.demand];
        let nodes: Vec<&str> = e.nodes(net, demands).into_iter().map(|v| net.node_name(v)).collect();
        let processing: Vec<String> = e.processing.iter().map(|&(v, p)| format!("{}:{p}", net.node_name(v))).collect();
        w.serialize(WalkRow {
            demand: e.demand,
            source: net.node_name(d.source),
            sink: net.node_name(d.sink),
            flow: e.flow,
            hops: e.arcs.len(),
            nodes: nodes.join(" "),
            processing: processing.join(";"),
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct PurchaseRow<'a> {
    node: &'a str,
    purchased: bool,
    cost: f64,
    potential: f64,
    load: f64,
}

/// One CSV row per node with purchase status and processing load.
pub fn write_purchase_csv<W: Write>(out: W, inst: &crate::purchase::PurchaseInstance, sol: &PurchaseSolution) -> Result<()> {
    let net = &inst.net;
    let loads = sol.flows.node_loads(net);
    let mut w = csv::Writer::from_writer(out);
    for v in 0..net.node_count() {
        w.serialize(PurchaseRow {
            node: net.node_name(v),
            purchased: sol.purchased.contains(&v),
            cost: inst.cost[v],
            potential: inst.potential[v],
            load: loads[v],
        })?;
    }
    w.flush()?;
    Ok(())
}
