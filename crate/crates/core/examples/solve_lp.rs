// Exact maximum processed flow on a small network.

use pflow::edge_lp::{solve_edge_lp, FlowObjective};
use pflow::instance::parse_instance;

const INSTANCE: &str = "\
graph directed
node s cap=0
node a cap=1
node b cap=2
node t cap=0
edge s a cap=2
edge a b cap=2
edge b t cap=3
demand s t
";

pub fn run_example() -> pflow::Result<()> {
    let inst = parse_instance(INSTANCE)?;
    let out = solve_edge_lp(&inst.net, &inst.demands, &FlowObjective::MaxTotalFlow)?;
    println!("processed flow delivered: {}", out.objective);
    for (v, load) in out.solution.node_loads(&inst.net).iter().enumerate() {
        if *load > 0.0 {
            println!("  {} processes {load}", inst.net.node_name(v));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
