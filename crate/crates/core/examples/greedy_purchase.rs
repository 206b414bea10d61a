// Greedy budgeted purchase for an undirected network with one source.

use pflow::purchase::{greedy_budgeted_single_source, GreedyConfig, PurchaseInstance};
use pflow::{Demand, FlowNetwork, Orientation};

pub fn run_example() -> pflow::Result<()> {
    let mut net = FlowNetwork::new(Orientation::Undirected);
    let s = net.add_node("s", 0.0);
    let a = net.add_node("a", 0.0);
    let b = net.add_node("b", 0.0);
    let t1 = net.add_node("t1", 0.0);
    let t2 = net.add_node("t2", 0.0);
    net.add_edge(s, a, 4.0);
    net.add_edge(s, b, 2.0);
    net.add_edge(a, t1, 4.0);
    net.add_edge(b, t2, 2.0);
    net.add_edge(a, b, 1.0);
    let inst = PurchaseInstance::new(
        net,
        vec![0.0, 3.0, 2.0, 0.0, 0.0],
        vec![0.0, 1.0, 1.0, 0.0, 0.0],
        vec![Demand::new(s, t1, 5.0), Demand::new(s, t2, 5.0)],
        Some(1.0),
    )?;
    let out = greedy_budgeted_single_source(&inst, &GreedyConfig::default())?;
    println!(
        "bought {:?}: oracle {}, construction {}, best routing {}",
        out.solution.purchased,
        out.oracle_value,
        out.constructive_value,
        out.solution.total_served()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
