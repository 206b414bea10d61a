// Multiplicative-weights approximation compared with the exact optimum.

use pflow::edge_lp::max_processed_flow;
use pflow::gen::{gen_random_instance, RandomSpec};
use pflow::mwu::{mwu_solve, MwuConfig};

pub fn run_example() -> pflow::Result<()> {
    let inst = gen_random_instance(&RandomSpec {
        nodes: 10,
        demands: 3,
        seed: 7,
        ..RandomSpec::default()
    })?;
    let exact = max_processed_flow(&inst.net, &inst.demands)?;
    for eps in [0.3, 0.1] {
        let out = mwu_solve(&inst.net, &inst.demands, &MwuConfig::with_epsilon(eps))?;
        println!(
            "ε = {eps}: {:.4} of {exact:.4} after {} iterations",
            out.solution.objective(),
            out.iterations
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
