// Routing every demand in full while minimizing the worst utilization.

use pflow::edge_lp::{congestion, solve_edge_lp, FlowObjective};
use pflow::{Demand, FlowNetwork, Orientation};

pub fn run_example() -> pflow::Result<()> {
    let mut net = FlowNetwork::new(Orientation::Directed);
    let s = net.add_node("s", 0.0);
    let a = net.add_node("a", 1.0);
    let b = net.add_node("b", 3.0);
    let t = net.add_node("t", 0.0);
    net.add_edge(s, a, 2.0);
    net.add_edge(a, t, 2.0);
    net.add_edge(s, b, 2.0);
    net.add_edge(b, t, 2.0);
    let demands = vec![Demand::new(s, t, 3.0)];

    let out = solve_edge_lp(&net, &demands, &FlowObjective::MinMaxCongestion)?;
    let (links, nodes) = congestion(&net, &out.solution);
    println!("worst utilization {:.3}", out.objective);
    println!("links {links:.3?}");
    println!("nodes {nodes:.3?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
