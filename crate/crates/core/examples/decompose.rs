// Turns an edge-based LP solution into explicit walks. Here the only
// processing node sits on a dead end, so the walk visits `a` twice.

use pflow::decompose::decompose;
use pflow::edge_lp::{solve_edge_lp, FlowObjective};
use pflow::{verify_walk_solution, Demand, FlowNetwork, Orientation, Tolerance};

pub fn run_example() -> pflow::Result<()> {
    let mut net = FlowNetwork::new(Orientation::Directed);
    let s = net.add_node("s", 0.0);
    let a = net.add_node("a", 0.0);
    let p = net.add_node("p", 2.0);
    let t = net.add_node("t", 0.0);
    net.add_edge(s, a, 2.0);
    net.add_edge(a, p, 4.0);
    net.add_edge(p, a, 4.0);
    net.add_edge(a, t, 2.0);
    let demands = vec![Demand::uncapped(s, t)];

    let lp = solve_edge_lp(&net, &demands, &FlowObjective::MaxTotalFlow)?;
    let walks = decompose(&net, &demands, &lp.solution)?;
    for w in &walks.entries {
        let names: Vec<&str> = w.nodes(&net, &demands).iter().map(|&v| net.node_name(v)).collect();
        println!("{} units along {}", w.flow, names.join(" "));
    }
    let report = verify_walk_solution(&net, &demands, &walks, Tolerance::default())?;
    println!("feasible: {}", report.ok());
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
