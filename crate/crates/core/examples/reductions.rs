// Gadget instances: a set-cover instance becomes a min-purchase problem.

use pflow::gen::{gen_reduction_instance, ReductionSpec};
use pflow::purchase::{solve_purchase_lp, PurchaseInstance, PurchaseMode};

pub fn run_example() -> pflow::Result<()> {
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let spec = ReductionSpec::SetCover {
        universe: s(&["1", "2", "3", "4"]),
        sets: vec![s(&["1", "2"]), s(&["2", "3"]), s(&["3", "4"]), s(&["1", "4"])],
    };
    let inst = gen_reduction_instance(&spec)?;
    print!("{}", inst.emit());
    let lp = solve_purchase_lp(&PurchaseInstance::from_instance(&inst)?, PurchaseMode::Min, None)?;
    println!("LP lower bound on the cover size: {}", lp.objective);
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
