// Buying processing nodes so that every demand is served, by LP rounding.

use pflow::purchase::{round_min_purchase, solve_purchase_lp, PurchaseInstance, PurchaseMode};
use pflow::{Demand, FlowNetwork, Orientation};

pub fn run_example() -> pflow::Result<()> {
    let mut net = FlowNetwork::new(Orientation::Directed);
    let s = net.add_node("s", 0.0);
    let a = net.add_node("a", 0.0);
    let b = net.add_node("b", 0.0);
    let t = net.add_node("t", 0.0);
    net.add_edge(s, a, 2.0);
    net.add_edge(a, t, 2.0);
    net.add_edge(s, b, 2.0);
    net.add_edge(b, t, 2.0);
    let inst = PurchaseInstance::new(
        net,
        vec![0.0, 2.0, 2.0, 0.0],
        vec![0.0, 1.0, 3.0, 0.0],
        vec![Demand::new(s, t, 3.0)],
        None,
    )?;

    let lp = solve_purchase_lp(&inst, PurchaseMode::Min, None)?;
    println!("fractional purchase {:?}, LP cost {}", lp.x, lp.objective);
    let sol = round_min_purchase(&inst, &lp, 0.2, 1)?;
    let names: Vec<&str> = sol.purchased.iter().map(|&v| inst.net.node_name(v)).collect();
    println!("bought {names:?} for {}, serving {}", sol.cost, sol.total_served());
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
