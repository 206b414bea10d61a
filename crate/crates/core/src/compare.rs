//! Capacity sweeps comparing the solvers on one instance.
//!
//! Every node gets the same processing capacity (`all`) or exactly half of
//! the nodes get it and the rest get none (`half`). Each grid point is solved
//! by every requested algorithm; the CSV carries objectives, timings and the
//! ratio to the LP optimum.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decompose::decompose;
use crate::edge_lp::{solve_edge_lp, FlowObjective};
use crate::model::{Demand, FlowNetwork, Tolerance};
use crate::mwu::{mwu_solve, MwuConfig};
use crate::naive::naive_solve;
use crate::solution::{verify_walk_solution, WalkFlowSolution};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Lp,
    Mwu,
    Naive,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Lp => "lp",
            Algorithm::Mwu => "mwu",
            Algorithm::Naive => "naive",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lp" => Ok(Algorithm::Lp),
            "mwu" => Ok(Algorithm::Mwu),
            "naive" => Ok(Algorithm::Naive),
            _ => Err(Error::Unsupported(format!("unknown algorithm {s:?} (expected lp, mwu or naive)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    All,
    Half,
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Distribution::All),
            "half" => Ok(Distribution::Half),
            _ => Err(Error::Unsupported(format!("unknown distribution {s:?} (expected all or half)"))),
        }
    }
}

/// A solver run's walk solution and iteration count (simplex pivots for the
/// LP).
#[derive(Debug, Clone)]
pub struct AlgorithmRun {
    pub solution: WalkFlowSolution,
    pub objective: f64,
    pub iterations: usize,
}

/// Solves `(net, demands)` with one algorithm; the LP result is decomposed
/// into walks.
pub fn run_algorithm(net: &FlowNetwork, demands: &[Demand], alg: Algorithm, mwu: &MwuConfig) -> Result<AlgorithmRun> {
    match alg {
        Algorithm::Lp => {
            let out = solve_edge_lp(net, demands, &FlowObjective::MaxTotalFlow)?;
            let solution = decompose(net, demands, &out.solution)?;
            Ok(AlgorithmRun {
                solution,
                objective: out.objective,
                iterations: out.iterations,
            })
        }
        Algorithm::Mwu => {
            let out = mwu_solve(net, demands, mwu)?;
            Ok(AlgorithmRun {
                objective: out.solution.objective(),
                solution: out.solution,
                iterations: out.iterations,
            })
        }
        Algorithm::Naive => {
            let solution = naive_solve(net, demands)?;
            Ok(AlgorithmRun {
                objective: solution.objective(),
                solution,
                iterations: 0,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub distribution: Distribution,
    /// Repetitions per grid point; under `half` each draws its own node half.
    pub reps: usize,
    pub seed: u64,
    pub epsilon: f64,
}

impl SweepSpec {
    pub fn new(lo: f64, hi: f64, step: f64, distribution: Distribution) -> Result<Self> {
        let spec = SweepSpec {
            lo,
            hi,
            step,
            distribution,
            reps: 1,
            seed: 0,
            epsilon: 0.1,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses `LO:HI:STEP`.
    pub fn parse_range(text: &str, distribution: Distribution) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(Error::Structural(format!("sweep must be LO:HI:STEP, got {text:?}")));
        };
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Structural(format!("bad number {s:?} in sweep {text:?}")))
        };
        Self::new(num(lo)?, num(hi)?, num(step)?, distribution)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo >= 0.0 && self.lo <= self.hi) {
            return Err(Error::Structural(format!("sweep needs 0 ≤ lo ≤ hi, got {}..{}", self.lo, self.hi)));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Structural(format!("sweep step must be positive, got {}", self.step)));
        }
        if self.reps == 0 {
            return Err(Error::Structural("sweep needs at least one repetition".into()));
        }
        Ok(())
    }

    /// Grid points lo, lo+step, … up to hi (inclusive, with rounding slack).
    pub fn grid(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.lo + k as f64 * self.step).collect()
    }

    /// Node capacities at grid value `cap` for repetition `rep`.
    pub fn capacities(&self, n: usize, cap: f64, rep: usize) -> Vec<f64> {
        match self.distribution {
            Distribution::All => vec![cap; n],
            Distribution::Half => {
                let mut order: Vec<usize> = (0..n).collect();
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(rep as u64));
                order.shuffle(&mut rng);
                let mut caps = vec![0.0; n];
                for &v in &order[..n / 2] {
                    caps[v] = cap;
                }
                caps
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub capacity: f64,
    pub distribution: Distribution,
    pub rep: usize,
    pub algorithm: Algorithm,
    pub objective: f64,
    /// Objective over the LP objective at the same point (1 when both are 0).
    pub ratio_to_lp: Option<f64>,
    pub seconds: f64,
    pub iterations: usize,
    pub feasible: bool,
    pub error: Option<String>,
}

/// `a / b`, reading 0/0 as 1.
pub fn ratio(a: f64, b: f64) -> f64 {
    if b.abs() <= 1e-12 {
        if a.abs() <= 1e-12 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

/// Runs the sweep. Solver errors are recorded on their row and the sweep
/// continues.
pub fn compare_runs(name: &str, net: &FlowNetwork, demands: &[Demand], sweep: &SweepSpec, algorithms: &[Algorithm]) -> Result<Vec<RunRecord>> {
    sweep.validate()?;
    let mut records = Vec::new();
    let mwu = MwuConfig::with_epsilon(sweep.epsilon);
    for cap in sweep.grid() {
        for rep in 0..sweep.reps {
            let point = net.with_node_capacities(sweep.capacities(net.node_count(), cap, rep));
            let first = records.len();
            for &alg in algorithms {
                let start = Instant::now();
                let result = run_algorithm(&point, demands, alg, &mwu);
                let seconds = start.elapsed().as_secs_f64();
                let mut record = RunRecord {
                    instance: name.to_string(),
                    capacity: cap,
                    distribution: sweep.distribution,
                    rep,
                    algorithm: alg,
                    objective: f64::NAN,
                    ratio_to_lp: None,
                    seconds,
                    iterations: 0,
                    feasible: false,
                    error: None,
                };
                match result {
                    Ok(run) => {
                        record.objective = run.objective;
                        record.iterations = run.iterations;
                        record.feasible = verify_walk_solution(&point, demands, &run.solution, Tolerance::default())?.ok();
                    }
                    Err(e) => record.error = Some(e.to_string()),
                }
                records.push(record);
            }
            let lp = records[first..]
                .iter()
                .find(|r| r.algorithm == Algorithm::Lp && r.error.is_none())
                .map(|r| r.objective);
            if let Some(lp) = lp {
                for r in &mut records[first..] {
                    if r.error.is_none() {
                        r.ratio_to_lp = Some(ratio(r.objective, lp));
                    }
                }
            }
        }
    }
    Ok(records)
}

pub fn write_records_csv<W: Write>(out: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
