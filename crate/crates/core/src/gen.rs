//! Seeded random instances and the gadget instances of the hardness
//! reductions (set cover, max k-cover, vertex cover, max bisection).

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;
use crate::model::{Demand, FlowNetwork, Orientation};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub nodes: usize,
    /// Probability that any given (ordered, when directed) pair gets an edge.
    pub density: f64,
    pub edge_capacity: (f64, f64),
    pub node_capacity: (f64, f64),
    /// Capacities drawn as integers in the inclusive range.
    pub integral: bool,
    pub demands: usize,
    /// Demand amounts; `None` leaves demands uncapped.
    pub demand_amount: Option<(f64, f64)>,
    pub orientation: Orientation,
    pub seed: u64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            nodes: 6,
            density: 0.4,
            edge_capacity: (1.0, 5.0),
            node_capacity: (0.0, 5.0),
            integral: true,
            demands: 2,
            demand_amount: None,
            orientation: Orientation::Directed,
            seed: 0,
        }
    }
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64), integral: bool) -> f64 {
    if integral {
        rng.gen_range(lo.ceil() as i64..=hi.floor() as i64) as f64
    } else if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

fn reachable(net: &FlowNetwork, from: usize, to: usize) -> bool {
    let mut seen = vec![false; net.node_count()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            return true;
        }
        for &a in net.out_arcs(v) {
            let u = net.arc(a).head;
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    false
}

/// Deterministic random instance. Every demand's sink is reachable from its
/// source: if the random edges miss it, a direct edge is added.
pub fn gen_random_instance(spec: &RandomSpec) -> Result<Instance> {
    let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(Error::Structural(what.to_string())) };
    check(spec.nodes >= 2 || spec.demands == 0, "random instances need at least two nodes for demands")?;
    check((0.0..=1.0).contains(&spec.density), "density must lie in [0, 1]")?;
    let ranges = [spec.edge_capacity, spec.node_capacity];
    check(ranges.iter().all(|&(lo, hi)| 0.0 <= lo && lo <= hi && hi.is_finite()), "capacity ranges must satisfy 0 ≤ lo ≤ hi")?;
    if let Some((lo, hi)) = spec.demand_amount {
        check(0.0 < lo && lo <= hi && hi.is_finite(), "demand amounts must satisfy 0 < lo ≤ hi")?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut net = FlowNetwork::new(spec.orientation);
    for v in 0..spec.nodes {
        let cap = draw(&mut rng, spec.node_capacity, spec.integral);
        net.add_node(&format!("v{v}"), cap);
    }
    for u in 0..spec.nodes {
        for v in 0..spec.nodes {
            let wanted = match spec.orientation {
                Orientation::Directed => u != v,
                Orientation::Undirected => u < v,
            };
            if wanted && rng.gen_bool(spec.density) {
                let cap = draw(&mut rng, spec.edge_capacity, spec.integral);
                net.add_edge(u, v, cap);
            }
        }
    }
    let mut demands = Vec::with_capacity(spec.demands);
    for _ in 0..spec.demands {
        let s = rng.gen_range(0..spec.nodes);
        let t = (s + rng.gen_range(1..spec.nodes)) % spec.nodes;
        if !reachable(&net, s, t) {
            let cap = draw(&mut rng, spec.edge_capacity, spec.integral).max(1.0);
            net.add_edge(s, t, cap);
        }
        let amount = match spec.demand_amount {
            Some(range) => draw(&mut rng, range, spec.integral).max(f64::MIN_POSITIVE),
            None => f64::INFINITY,
        };
        demands.push(Demand::new(s, t, amount));
    }
    Ok(Instance::new(net, demands))
}

/// Deterministic connected instance with exactly `links` edges: a random
/// spanning tree plus distinct random extra pairs. `spec.density` is ignored.
/// In directed mode tree edges point away from node 0, so sinks may still be
/// unreachable; those demands get a direct edge as in [`gen_random_instance`].
pub fn gen_connected_instance(spec: &RandomSpec, links: usize) -> Result<Instance> {
    let n = spec.nodes;
    let max_links = match spec.orientation {
        Orientation::Directed => n * n.saturating_sub(1),
        Orientation::Undirected => n * n.saturating_sub(1) / 2,
    };
    if n < 2 || links + 1 < n || links > max_links {
        return Err(Error::Structural(format!("cannot build a connected graph with {n} nodes and {links} edges")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut net = FlowNetwork::new(spec.orientation);
    for v in 0..n {
        let cap = draw(&mut rng, spec.node_capacity, spec.integral);
        net.add_node(&format!("v{v}"), cap);
    }
    let key = |u: usize, v: usize| match spec.orientation {
        Orientation::Directed => (u, v),
        Orientation::Undirected => (u.min(v), u.max(v)),
    };
    let mut used = BTreeSet::new();
    let mut order: Vec<usize> = (1..n).collect();
    order.shuffle(&mut rng);
    let mut placed = vec![0];
    for v in order {
        let u = placed[rng.gen_range(0..placed.len())];
        used.insert(key(u, v));
        let cap = draw(&mut rng, spec.edge_capacity, spec.integral);
        net.add_edge(u, v, cap);
        placed.push(v);
    }
    while used.len() < links {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && used.insert(key(u, v)) {
            let cap = draw(&mut rng, spec.edge_capacity, spec.integral);
            net.add_edge(u, v, cap);
        }
    }
    let mut demands = Vec::with_capacity(spec.demands);
    for _ in 0..spec.demands {
        let s = rng.gen_range(0..n);
        let t = (s + rng.gen_range(1..n)) % n;
        if !reachable(&net, s, t) {
            let cap = draw(&mut rng, spec.edge_capacity, spec.integral).max(1.0);
            net.add_edge(s, t, cap);
        }
        let amount = match spec.demand_amount {
            Some(range) => draw(&mut rng, range, spec.integral).max(f64::MIN_POSITIVE),
            None => f64::INFINITY,
        };
        demands.push(Demand::new(s, t, amount));
    }
    Ok(Instance::new(net, demands))
}

/// Inputs for the reduction gadgets.
#[derive(Debug, Clone, PartialEq)]
pub enum ReductionSpec {
    /// Min-purchase instance whose optimum cost is the minimum set cover.
    SetCover { universe: Vec<String>, sets: Vec<Vec<String>> },
    /// Budgeted instance whose optimum serves the max number of elements
    /// coverable by `k` sets.
    MaxKCover {
        universe: Vec<String>,
        sets: Vec<Vec<String>>,
        k: usize,
    },
    /// Undirected min-purchase instance whose optimum is the minimum vertex
    /// cover of the graph.
    VertexCover { vertices: Vec<String>, edges: Vec<(String, String)> },
    /// Undirected budgeted instance built from a 3-regular graph; its optimum
    /// is 3|V|/2 plus the maximum bisection size.
    Bisection { vertices: Vec<String>, edges: Vec<(String, String)> },
}

fn cover_gadget(universe: &[String], sets: &[Vec<String>]) -> Result<Instance> {
    let unique: BTreeSet<&String> = universe.iter().collect();
    if unique.len() != universe.len() || universe.is_empty() {
        return Err(Error::Structural("universe must be a non-empty set".into()));
    }
    for (j, set) in sets.iter().enumerate() {
        if let Some(x) = set.iter().find(|x| !unique.contains(x)) {
            return Err(Error::Structural(format!("set {j} contains {x:?}, which is not in the universe")));
        }
    }
    let n = (sets.len() + universe.len() + 2) as f64;
    let mut net = FlowNetwork::new(Orientation::Directed);
    let s = net.add_node("s", 0.0);
    let set_nodes: Vec<usize> = (0..sets.len()).map(|j| net.add_node(&format!("S{}", j + 1), 0.0)).collect();
    let elem_nodes: Vec<usize> = universe.iter().map(|x| net.add_node(&format!("e_{x}"), 0.0)).collect();
    let t = net.add_node("t", 0.0);
    for &v in &set_nodes {
        net.add_edge(s, v, n);
    }
    for (j, set) in sets.iter().enumerate() {
        let members: BTreeSet<&String> = set.iter().collect();
        for (k, x) in universe.iter().enumerate() {
            if members.contains(x) {
                net.add_edge(set_nodes[j], elem_nodes[k], 1.0);
            }
        }
    }
    for &w in &elem_nodes {
        net.add_edge(w, t, 1.0);
    }
    let mut inst = Instance::new(net, vec![Demand::new(s, t, universe.len() as f64)]);
    for &v in &set_nodes {
        inst.potential[v] = n;
        inst.cost[v] = 1.0;
    }
    Ok(inst)
}

fn simple_graph(vertices: &[String], edges: &[(String, String)]) -> Result<(FlowNetwork, Vec<(usize, usize)>)> {
    let mut net = FlowNetwork::new(Orientation::Undirected);
    for v in vertices {
        if net.node_index(v).is_some() {
            return Err(Error::Structural(format!("vertex {v:?} listed twice")));
        }
        net.add_node(v, 0.0);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (a, b) in edges {
        let find = |x: &String| net.node_index(x).ok_or_else(|| Error::Structural(format!("unknown vertex {x:?}")));
        let (u, v) = (find(a)?, find(b)?);
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::Structural(format!("graph is not simple at edge {a}-{b}")));
        }
        out.push((u, v));
    }
    Ok((net, out))
}

pub fn gen_reduction_instance(spec: &ReductionSpec) -> Result<Instance> {
    match spec {
        ReductionSpec::SetCover { universe, sets } => cover_gadget(universe, sets),
        ReductionSpec::MaxKCover { universe, sets, k } => {
            let mut inst = cover_gadget(universe, sets)?;
            inst.budget = Some(*k as f64);
            Ok(inst)
        }
        ReductionSpec::VertexCover { vertices, edges } => {
            let (mut net, pairs) = simple_graph(vertices, edges)?;
            let n = net.node_count() as f64;
            let mut demands = Vec::new();
            for &(u, v) in &pairs {
                net.add_edge(u, v, 2.0);
                demands.push(Demand::new(u, v, 1.0));
                demands.push(Demand::new(v, u, 1.0));
            }
            let mut inst = Instance::new(net, demands);
            inst.potential = vec![n; vertices.len()];
            inst.cost = vec![1.0; vertices.len()];
            Ok(inst)
        }
        ReductionSpec::Bisection { vertices, edges } => {
            let (base, pairs) = simple_graph(vertices, edges)?;
            let n = base.node_count();
            let mut degree = vec![0; n];
            for &(u, v) in &pairs {
                degree[u] += 1;
                degree[v] += 1;
            }
            if !n.is_multiple_of(2) || degree.iter().any(|&d| d != 3) {
                return Err(Error::Structural("bisection input must be 3-regular with an even vertex count".into()));
            }
            let mut net = FlowNetwork::new(Orientation::Undirected);
            let u_nodes: Vec<usize> = vertices.iter().map(|v| net.add_node(&format!("u_{v}"), 0.0)).collect();
            let w_nodes: Vec<usize> = vertices.iter().map(|v| net.add_node(&format!("w_{v}"), 0.0)).collect();
            for i in 0..n {
                net.add_edge(u_nodes[i], w_nodes[i], 3.0);
            }
            for &(a, b) in &pairs {
                net.add_edge(u_nodes[a], u_nodes[b], 1.0);
            }
            let mut demands = Vec::new();
            for &w in &w_nodes {
                for &u in &u_nodes {
                    demands.push(Demand::new(u, w, 3.0));
                }
            }
            let mut inst = Instance::new(net, demands);
            for &u in &u_nodes {
                inst.potential[u] = 3.0 * n as f64;
                inst.cost[u] = 1.0;
            }
            inst.budget = Some(n as f64 / 2.0);
            Ok(inst)
        }
    }
}

/// A random 3-regular simple graph on `n` (even, ≥ 4) vertices, by retrying
/// random perfect matchings of vertex stubs.
pub fn random_cubic_graph(n: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Structural("cubic graphs need an even vertex count of at least 4".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v; 3]).collect();
        stubs.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        let ok = stubs.chunks(2).all(|p| p[0] != p[1] && seen.insert((p[0].min(p[1]), p[0].max(p[1]))));
        if ok {
            return Ok(seen.into_iter().collect());
        }
    }
    Err(Error::ResourceLimit("could not sample a simple cubic graph".into()))
}
