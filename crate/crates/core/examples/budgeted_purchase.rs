// Serving as much as possible with a purchase budget.

use pflow::purchase::{round_budgeted_purchase, PurchaseInstance};
use pflow::{Demand, FlowNetwork, Orientation};

pub fn run_example() -> pflow::Result<()> {
    let mut net = FlowNetwork::new(Orientation::Directed);
    let names = ["s", "a", "b", "c", "t"];
    for name in names {
        net.add_node(name, 0.0);
    }
    for mid in 1..=3 {
        net.add_edge(0, mid, 3.0);
        net.add_edge(mid, 4, 3.0);
    }
    let inst = PurchaseInstance::new(
        net,
        vec![0.0, 3.0, 2.0, 1.0, 0.0],
        vec![0.0, 2.0, 1.0, 1.0, 0.0],
        vec![Demand::new(0, 4, 6.0)],
        Some(2.0),
    )?;
    let sol = round_budgeted_purchase(&inst, 5)?;
    let bought: Vec<&str> = sol.purchased.iter().map(|&v| names[v]).collect();
    println!(
        "{}: bought {bought:?} for {}, serving {} (LP bound {})",
        sol.method,
        sol.cost,
        sol.total_served(),
        sol.lp_objective
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
