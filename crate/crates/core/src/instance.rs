//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! graph directed|undirected
//! node NAME cap=FLOAT [cost=FLOAT] [potential=FLOAT]
//! edge U V cap=FLOAT
//! demand S T [amount=FLOAT]
//! budget FLOAT
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::model::{validate_instance, Demand, FlowNetwork, Orientation};
use crate::{Error, Result};

/// A network, its demands, and the optional purchase data.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub net: FlowNetwork,
    pub demands: Vec<Demand>,
    /// Per-node purchase cost (0 when absent).
    pub cost: Vec<f64>,
    /// Per-node processing potential for purchase problems (0 when absent).
    pub potential: Vec<f64>,
    pub budget: Option<f64>,
}

impl Instance {
    pub fn new(net: FlowNetwork, demands: Vec<Demand>) -> Self {
        let n = net.node_count();
        Instance {
            net,
            demands,
            cost: vec![0.0; n],
            potential: vec![0.0; n],
            budget: None,
        }
    }

    pub fn has_purchase_data(&self) -> bool {
        self.potential.iter().any(|&p| p > 0.0)
    }

    /// Renders the instance in the text format; parsing the output yields an
    /// equal instance.
    pub fn emit(&self) -> String {
        let net = &self.net;
        let mut out = String::new();
        let kind = match net.orientation() {
            Orientation::Directed => "directed",
            Orientation::Undirected => "undirected",
        };
        let _ = writeln!(out, "graph {kind}");
        for v in 0..net.node_count() {
            let _ = write!(out, "node {} cap={}", net.node_name(v), net.node_capacity(v));
            if self.cost[v] != 0.0 {
                let _ = write!(out, " cost={}", self.cost[v]);
            }
            if self.potential[v] != 0.0 {
                let _ = write!(out, " potential={}", self.potential[v]);
            }
            out.push('\n');
        }
        for link in net.links() {
            let arc = net.arc(link.arcs[0]);
            let _ = writeln!(out, "edge {} {} cap={}", net.node_name(arc.tail), net.node_name(arc.head), link.capacity);
        }
        for d in &self.demands {
            let _ = write!(out, "demand {} {}", net.node_name(d.source), net.node_name(d.sink));
            if d.is_capped() {
                let _ = write!(out, " amount={}", d.amount);
            }
            out.push('\n');
        }
        if let Some(b) = self.budget {
            let _ = writeln!(out, "budget {b}");
        }
        out
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number(line: usize, key: &str, text: &str) -> Result<f64> {
    text.parse::<f64>()
        .ok()
        .filter(|x| !x.is_nan())
        .ok_or_else(|| parse_error(line, format!("malformed value {text:?} for {key}")))
}

/// Splits `key=value` tokens, rejecting keys outside `allowed`.
fn options<'a>(line: usize, tokens: &[&'a str], allowed: &[&str]) -> Result<Vec<(&'a str, f64)>> {
    let mut out = Vec::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| parse_error(line, format!("expected key=value, found {tok:?}")))?;
        if !allowed.contains(&k) {
            return Err(parse_error(line, format!("unknown option {k:?}")));
        }
        if out.iter().any(|&(seen, _)| seen == k) {
            return Err(parse_error(line, format!("option {k:?} given twice")));
        }
        out.push((k, number(line, k, v)?));
    }
    Ok(out)
}

/// Parses the text format. Errors carry the offending line number.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut net: Option<FlowNetwork> = None;
    let mut cost = Vec::new();
    let mut potential = Vec::new();
    let mut demands = Vec::new();
    let mut budget = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let node = |net: &FlowNetwork, name: &str| {
            net.node_index(name)
                .ok_or_else(|| parse_error(line, format!("unknown node {name:?}")))
        };
        match tokens[0] {
            "graph" => {
                if net.is_some() {
                    return Err(parse_error(line, "graph must be the first declaration and appear once"));
                }
                let orientation = match tokens.get(1..) {
                    Some(["directed"]) => Orientation::Directed,
                    Some(["undirected"]) => Orientation::Undirected,
                    _ => return Err(parse_error(line, "expected `graph directed` or `graph undirected`")),
                };
                net = Some(FlowNetwork::new(orientation));
            }
            "node" => {
                let g = net.get_or_insert_with(|| FlowNetwork::new(Orientation::Directed));
                let name = tokens.get(1).ok_or_else(|| parse_error(line, "node needs a name"))?;
                if name.contains('=') {
                    return Err(parse_error(line, "node needs a name"));
                }
                if g.node_index(name).is_some() {
                    return Err(parse_error(line, format!("node {name:?} declared twice")));
                }
                let opts = options(line, &tokens[2..], &["cap", "cost", "potential"])?;
                let get = |k: &str| opts.iter().find(|&&(key, _)| key == k).map(|&(_, v)| v);
                let cap = get("cap").ok_or_else(|| parse_error(line, "node needs cap="))?;
                g.add_node(name, cap);
                cost.push(get("cost").unwrap_or(0.0));
                potential.push(get("potential").unwrap_or(0.0));
            }
            "edge" => {
                let g = net.get_or_insert_with(|| FlowNetwork::new(Orientation::Directed));
                if tokens.len() < 3 {
                    return Err(parse_error(line, "edge needs two endpoints"));
                }
                let (u, v) = (node(g, tokens[1])?, node(g, tokens[2])?);
                let opts = options(line, &tokens[3..], &["cap"])?;
                let cap = opts.first().map(|&(_, c)| c).ok_or_else(|| parse_error(line, "edge needs cap="))?;
                if u == v {
                    return Err(parse_error(line, "self-loop edge"));
                }
                g.add_edge(u, v, cap);
            }
            "demand" => {
                let g = net.as_ref().ok_or_else(|| parse_error(line, "demand before any node"))?;
                if tokens.len() < 3 {
                    return Err(parse_error(line, "demand needs a source and a sink"));
                }
                let (s, t) = (node(g, tokens[1])?, node(g, tokens[2])?);
                let opts = options(line, &tokens[3..], &["amount"])?;
                let amount = opts.first().map(|&(_, a)| a).unwrap_or(f64::INFINITY);
                demands.push(Demand::new(s, t, amount));
            }
            "budget" => {
                let [_, value] = tokens[..] else {
                    return Err(parse_error(line, "expected `budget VALUE`"));
                };
                budget = Some(number(line, "budget", value)?);
            }
            other => return Err(parse_error(line, format!("unknown directive {other:?}"))),
        }
    }
    let net = net.unwrap_or_else(|| FlowNetwork::new(Orientation::Directed));
    let report = validate_instance(&net, &demands);
    if !report.ok() {
        return Err(Error::InvalidInstance(report));
    }
    if let Some(i) = cost.iter().chain(&potential).position(|&x| !(x >= 0.0 && x.is_finite())) {
        let v = i % net.node_count().max(1);
        return Err(Error::Structural(format!(
            "node {} has a negative or non-finite cost/potential",
            net.node_name(v)
        )));
    }
    Ok(Instance {
        net,
        demands,
        cost,
        potential,
        budget,
    })
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}
