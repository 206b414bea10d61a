//! Instance data: capacitated networks with per-node processing capacity and
//! the commodities routed through them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::report::{ValidationReport, ViolationKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Directed,
    Undirected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub capacity: f64,
    /// The capacity link this arc draws from.
    pub link: usize,
}

/// A shared bandwidth budget. In a directed network every arc is its own link;
/// an undirected edge is a link holding two antiparallel arcs whose summed flow
/// is capped by the edge capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub arcs: Vec<usize>,
    pub capacity: f64,
}

/// Relative/absolute tolerance pair used by every feasibility check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-6, abs: 1e-9 }
    }
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Tolerance { rel: 0.0, abs }
    }

    pub fn slack(&self, bound: f64) -> f64 {
        (self.rel * bound.abs()).max(self.abs)
    }

    /// Amount by which `value` exceeds `bound` beyond the allowed slack.
    pub fn excess(&self, value: f64, bound: f64) -> Option<f64> {
        let over = value - bound;
        (over > self.slack(bound)).then_some(over)
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.slack(a.abs().max(b.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowNetwork {
    orientation: Orientation,
    names: Vec<String>,
    index: HashMap<String, usize>,
    node_capacity: Vec<f64>,
    arcs: Vec<Arc>,
    links: Vec<Link>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(orientation: Orientation) -> Self {
        FlowNetwork {
            orientation,
            names: Vec::new(),
            index: HashMap::new(),
            node_capacity: Vec::new(),
            arcs: Vec::new(),
            links: Vec::new(),
            out_arcs: Vec::new(),
            in_arcs: Vec::new(),
        }
    }

    /// Adds a node, or updates the capacity of an existing node with that name.
    /// Dense indices follow first appearance.
    pub fn add_node(&mut self, name: &str, capacity: f64) -> usize {
        if let Some(&id) = self.index.get(name) {
            self.node_capacity[id] = capacity;
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.node_capacity.push(capacity);
        self.out_arcs.push(Vec::new());
        self.in_arcs.push(Vec::new());
        id
    }

    /// Adds an edge between two existing nodes and returns its link id. In an
    /// undirected network this materializes two coupled arcs.
    ///
    /// Panics if either endpoint is out of range.
    pub fn add_edge(&mut self, tail: usize, head: usize, capacity: f64) -> usize {
        assert!(tail < self.node_count() && head < self.node_count(), "edge endpoint out of range");
        let link = self.links.len();
        let mut arcs = vec![self.push_arc(tail, head, capacity, link)];
        if self.orientation == Orientation::Undirected {
            arcs.push(self.push_arc(head, tail, capacity, link));
        }
        self.links.push(Link { arcs, capacity });
        link
    }

    fn push_arc(&mut self, tail: usize, head: usize, capacity: f64, link: usize) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { tail, head, capacity, link });
        self.out_arcs[tail].push(id);
        self.in_arcs[head].push(id);
        id
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn node_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn node_names(&self) -> &[String] {
        &self.names
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn node_capacity(&self, v: usize) -> f64 {
        self.node_capacity[v]
    }

    pub fn node_capacities(&self) -> &[f64] {
        &self.node_capacity
    }

    pub fn set_node_capacity(&mut self, v: usize, capacity: f64) {
        self.node_capacity[v] = capacity;
    }

    pub fn arc(&self, a: usize) -> &Arc {
        &self.arcs[a]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn link(&self, l: usize) -> &Link {
        &self.links[l]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn set_link_capacity(&mut self, l: usize, capacity: f64) {
        self.links[l].capacity = capacity;
        for &a in &self.links[l].arcs {
            self.arcs[a].capacity = capacity;
        }
    }

    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_arcs[v]
    }

    /// Lowest-index arc from `tail` to `head`, if any.
    pub fn find_arc(&self, tail: usize, head: usize) -> Option<usize> {
        self.out_arcs[tail].iter().copied().find(|&a| self.arcs[a].head == head)
    }

    /// Copy of the network with the given per-node processing capacities.
    pub fn with_node_capacities(&self, capacities: Vec<f64>) -> FlowNetwork {
        assert_eq!(capacities.len(), self.node_count());
        let mut net = self.clone();
        net.node_capacity = capacities;
        net
    }

    /// Copy with every edge and node capacity multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> FlowNetwork {
        let mut net = self.clone();
        for c in &mut net.node_capacity {
            *c *= factor;
        }
        for l in 0..net.links.len() {
            let cap = net.links[l].capacity * factor;
            net.set_link_capacity(l, cap);
        }
        net
    }

    /// Copy with every edge capacity multiplied by `factor`; node capacities untouched.
    pub fn with_edge_scale(&self, factor: f64) -> FlowNetwork {
        let mut net = self.clone();
        for l in 0..net.links.len() {
            let cap = net.links[l].capacity * factor;
            net.set_link_capacity(l, cap);
        }
        net
    }

    /// Number of times each link is used by the arc sequence.
    pub fn link_multiplicity(&self, arcs: &[usize]) -> Vec<(usize, usize)> {
        let mut counts: Vec<(usize, usize)> = Vec::new();
        for &a in arcs {
            let l = self.arcs[a].link;
            match counts.iter_mut().find(|(link, _)| *link == l) {
                Some((_, c)) => *c += 1,
                None => counts.push((l, 1)),
            }
        }
        counts
    }

    /// Node sequence visited by a contiguous arc sequence starting at `start`.
    pub fn walk_nodes(&self, start: usize, arcs: &[usize]) -> Vec<usize> {
        let mut nodes = Vec::with_capacity(arcs.len() + 1);
        nodes.push(start);
        nodes.extend(arcs.iter().map(|&a| self.arcs[a].head));
        nodes
    }
}

/// One commodity: `amount` units from `source` to `sink`. An infinite amount
/// means the commodity is uncapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Demand {
    pub source: usize,
    pub sink: usize,
    pub amount: f64,
}

impl Demand {
    pub fn new(source: usize, sink: usize, amount: f64) -> Self {
        Demand { source, sink, amount }
    }

    pub fn uncapped(source: usize, sink: usize) -> Self {
        Demand {
            source,
            sink,
            amount: f64::INFINITY,
        }
    }

    pub fn is_capped(&self) -> bool {
        self.amount.is_finite()
    }
}

/// Reports every well-formedness problem of an instance. Never fails; an
/// empty report means the instance is usable by every solver.
pub fn validate_instance(net: &FlowNetwork, demands: &[Demand]) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (v, &c) in net.node_capacities().iter().enumerate() {
        check_capacity(&mut report, c, || format!("node {}", net.node_name(v)));
    }
    for (a, arc) in net.arcs().iter().enumerate() {
        if arc.tail >= net.node_count() || arc.head >= net.node_count() {
            report.push(ViolationKind::UnknownNode, format!("arc {a}"), 0.0);
            continue;
        }
        if arc.tail == arc.head {
            report.push(ViolationKind::SelfLoop, format!("arc {a} at {}", net.node_name(arc.tail)), 0.0);
        }
    }
    for (l, link) in net.links().iter().enumerate() {
        let at = || {
            let arc = net.arc(link.arcs[0]);
            format!("edge {}-{}", net.node_name(arc.tail), net.node_name(arc.head))
        };
        check_capacity(&mut report, link.capacity, at);
        let expected = match net.orientation() {
            Orientation::Directed => 1,
            Orientation::Undirected => 2,
        };
        let well_formed = link.arcs.len() == expected
            && link.arcs.iter().all(|&a| net.arc(a).link == l)
            && (expected == 1 || {
                let (x, y) = (net.arc(link.arcs[0]), net.arc(link.arcs[1]));
                x.tail == y.head && x.head == y.tail
            });
        if !well_formed {
            report.push(ViolationKind::MalformedCouplingGroup, format!("link {l}"), 0.0);
        }
    }
    for (i, d) in demands.iter().enumerate() {
        if d.source >= net.node_count() || d.sink >= net.node_count() {
            report.push(ViolationKind::UnknownNode, format!("demand {i}"), 0.0);
            continue;
        }
        if d.source == d.sink {
            report.push(
                ViolationKind::DegenerateDemand,
                format!("demand {i} ({} -> {})", net.node_name(d.source), net.node_name(d.sink)),
                0.0,
            );
        }
        if d.amount.is_nan() || d.amount <= 0.0 {
            report.push(ViolationKind::NonPositiveDemand, format!("demand {i}"), -d.amount);
        }
    }
    report
}

fn check_capacity(report: &mut ValidationReport, c: f64, at: impl Fn() -> String) {
    if !c.is_finite() {
        report.push(ViolationKind::NonFiniteCapacity, at(), 0.0);
    } else if c < 0.0 {
        report.push(ViolationKind::NegativeCapacity, at(), -c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> (FlowNetwork, Vec<Demand>) {
        let mut net = FlowNetwork::new(Orientation::Directed);
        let s = net.add_node("s", 0.0);
        let a = net.add_node("a", 3.0);
        let t = net.add_node("t", 0.0);
        net.add_edge(s, a, 10.0);
        net.add_edge(a, t, 10.0);
        (net, vec![Demand::uncapped(s, t)])
    }

    #[test]
    fn well_formed_line_is_ok() {
        let (net, demands) = line();
        assert!(validate_instance(&net, &demands).ok());
    }

    #[test]
    fn negative_capacity_reported() {
        let (mut net, demands) = line();
        net.set_link_capacity(0, -1.0);
        let report = validate_instance(&net, &demands);
        let v = report.find(ViolationKind::NegativeCapacity).unwrap();
        assert_eq!(v.magnitude, 1.0);
    }

    #[test]
    fn degenerate_demand_reported() {
        let (net, _) = line();
        let report = validate_instance(&net, &[Demand::uncapped(1, 1)]);
        assert!(report.has(ViolationKind::DegenerateDemand));
    }

    #[test]
    fn self_loop_and_unknown_node() {
        let (mut net, _) = line();
        net.add_edge(1, 1, 2.0);
        let report = validate_instance(&net, &[Demand::uncapped(0, 7)]);
        assert!(report.has(ViolationKind::SelfLoop));
        assert!(report.has(ViolationKind::UnknownNode));
    }

    #[test]
    fn undirected_edge_is_coupled_pair() {
        let mut net = FlowNetwork::new(Orientation::Undirected);
        let u = net.add_node("u", 0.0);
        let v = net.add_node("v", 0.0);
        net.add_edge(u, v, 4.0);
        assert_eq!(net.arc_count(), 2);
        assert_eq!(net.link(0).arcs, vec![0, 1]);
        assert_eq!(net.arc(1).tail, v);
        assert!(validate_instance(&net, &[]).ok());
    }

    #[test]
    fn node_indices_follow_first_appearance() {
        let mut net = FlowNetwork::new(Orientation::Directed);
        assert_eq!(net.add_node("z", 1.0), 0);
        assert_eq!(net.add_node("a", 1.0), 1);
        assert_eq!(net.add_node("z", 2.0), 0);
        assert_eq!(net.node_capacity(0), 2.0);
    }
}
