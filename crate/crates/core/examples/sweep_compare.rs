// Compares solvers while sweeping node capacities.

use pflow::compare::{compare_runs, write_records_csv, Algorithm, Distribution, SweepSpec};
use pflow::gen::{gen_random_instance, RandomSpec};

pub fn run_example() -> pflow::Result<()> {
    let inst = gen_random_instance(&RandomSpec {
        nodes: 8,
        demands: 3,
        seed: 2,
        ..RandomSpec::default()
    })?;
    let mut sweep = SweepSpec::parse_range("0.5:2:0.5", Distribution::Half)?;
    sweep.reps = 2;
    let records = compare_runs(
        "random-8",
        &inst.net,
        &inst.demands,
        &sweep,
        &[Algorithm::Lp, Algorithm::Mwu, Algorithm::Naive],
    )?;
    write_records_csv(std::io::stdout(), &records)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> pflow::Result<()> {
    run_example()
}
