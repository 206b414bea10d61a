// Routing first and processing afterwards can miss all processing: the only
// processing node hangs off the route, reachable only by a detour.

use pflow::edge_lp::max_processed_flow;
use pflow::naive::naive_solve;
use pflow::{Demand, FlowNetwork, Orientation};

pub fn run_example() -> pflow::Result<()> {
    let mut net = FlowNetwork::new(Orientation::Directed);
    let s = net.add_node("s", 0.0);
    let u = net.add_node("u", 0.0);
    let t = net.add_node("t", 0.0);
    let w = net.add_node("w", 2.0);
    net.add_edge(s, u, 2.0);
    net.add_edge(u, t, 2.0);
    net.add_edge(u, w, 2.0);
    net.add_edge(w, u, 2.0);
    let demands = vec![Demand::uncapped(s, t)];

    let exact = max_processed_flow(&net, &demands)?;
    let naive = naive_solve(&net, &demands)?.objective();
    println!("exact {exact}, route-then-process {naive}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
