// Instance text and solution JSON both round-trip.

use pflow::decompose::decompose;
use pflow::edge_lp::{solve_edge_lp, FlowObjective};
use pflow::gen::{gen_random_instance, RandomSpec};
use pflow::instance::parse_instance;
use pflow::io::{from_json, to_json, write_walks_csv, Meta, SolutionDocument};

pub fn run_example() -> pflow::Result<()> {
    let inst = gen_random_instance(&RandomSpec {
        nodes: 5,
        seed: 11,
        ..RandomSpec::default()
    })?;
    let text = inst.emit();
    assert_eq!(parse_instance(&text)?, inst);

    let lp = solve_edge_lp(&inst.net, &inst.demands, &FlowObjective::MaxTotalFlow)?;
    let walks = decompose(&inst.net, &inst.demands, &lp.solution)?;
    let doc = SolutionDocument::from_walks(&inst.net, &inst.demands, &walks, Meta::new("lp"));
    let json = to_json(&doc)?;
    let back: SolutionDocument = from_json(&json)?;
    assert_eq!(back.to_walks(&inst.net, &inst.demands)?, walks);
    println!("{json}");
    write_walks_csv(std::io::stdout(), &inst.net, &inst.demands, &walks)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
