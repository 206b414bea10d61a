use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lp::{solve_purchase_lp, PurchaseLpSolution, PurchaseMode};
use super::{served_with, solution_for_set, PurchaseInstance, PurchaseSolution};
use crate::{Error, Result};

/// Number of independent rounds used by [`round_min_purchase`]:
/// `⌈9 ln max(n, 2) / ε²⌉` with `ε = δ/2`.
pub fn min_rounding_rounds(nodes: usize, delta: f64) -> usize {
    let eps = delta / 2.0;
    (9.0 * (nodes.max(2) as f64).ln() / (eps * eps)).ceil() as usize
}

/// Rounds a min-mode LP solution. Every round buys each node with
/// probability `x_v`; the union of all rounds is purchased. Flows processed
/// at `v` are scaled by (rounds in which `v` was bought) / (`x_v` · rounds),
/// then shrunk uniformly until every link fits.
pub fn round_min_purchase(inst: &PurchaseInstance, lp: &PurchaseLpSolution, delta: f64, seed: u64) -> Result<PurchaseSolution> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Structural(format!("delta must lie in (0, 1), got {delta}")));
    }
    let n = inst.net.node_count();
    let rounds = min_rounding_rounds(n, delta);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = vec![0usize; n];
    for _ in 0..rounds {
        for v in 0..n {
            let x = lp.x[v];
            // Draw for every node so the stream does not depend on the support.
            let draw: f64 = rng.gen();
            if x > 0.0 && (x >= 1.0 - 1e-9 || draw < x) {
                count[v] += 1;
            }
        }
    }
    let purchased: Vec<usize> = (0..n).filter(|&v| count[v] > 0).collect();
    let factor: Vec<f64> = (0..n)
        .map(|v| {
            if count[v] == 0 {
                0.0
            } else if lp.x[v] >= 1.0 - 1e-9 {
                1.0
            } else {
                count[v] as f64 / (lp.x[v] * rounds as f64)
            }
        })
        .collect();
    Ok(lp.to_solution(inst, purchased, &factor, "min-rounding"))
}

/// The randomized pipeline for budgeted purchase. Nodes costing more than the
/// budget are never considered.
#[derive(Debug)]
pub struct BudgetedPlanner<'a> {
    inst: &'a PurchaseInstance,
    budget: f64,
    /// `max(ln n, 1)`.
    log_n: f64,
    cache: HashMap<Vec<usize>, f64>,
}

impl<'a> BudgetedPlanner<'a> {
    pub fn new(inst: &'a PurchaseInstance) -> Result<Self> {
        let budget = inst
            .budget
            .ok_or_else(|| Error::Structural("budgeted purchase needs a budget".into()))?;
        let log_n = (inst.net.node_count().max(1) as f64).ln().max(1.0);
        Ok(BudgetedPlanner {
            inst,
            budget,
            log_n,
            cache: HashMap::new(),
        })
    }

    pub fn repetitions(&self) -> usize {
        (self.inst.net.node_count().max(2) as f64).log2().ceil() as usize + 3
    }

    fn value(&mut self, set: &[usize]) -> Result<f64> {
        if let Some(&v) = self.cache.get(set) {
            return Ok(v);
        }
        let (v, _) = served_with(self.inst, set)?;
        self.cache.insert(set.to_vec(), v);
        Ok(v)
    }

    fn mask(&self, keep: impl Fn(usize) -> bool) -> Vec<bool> {
        (0..self.inst.net.node_count()).map(keep).collect()
    }

    pub fn run(&mut self, seed: u64) -> Result<PurchaseSolution> {
        let inst = self.inst;
        let k = self.budget;
        let affordable = inst.affordable(k);
        if affordable.is_empty() || inst.demands.is_empty() {
            return Ok(PurchaseSolution::empty(inst, 0.0, "budgeted-empty"));
        }
        let allowed = self.mask(|v| affordable.contains(&v));
        let lp = solve_purchase_lp(inst, PurchaseMode::Budgeted { budget: k / 2.0 }, Some(&allowed))?;
        let opt = lp.objective;

        let mut best_single: (f64, Vec<usize>) = (0.0, Vec::new());
        for &v in &affordable {
            let val = self.value(&[v])?;
            if val > best_single.0 {
                best_single = (val, vec![v]);
            }
        }
        if opt <= 1e-12 {
            return solution_for_set(inst, &best_single.1, opt, "budgeted-single");
        }
        if best_single.0 >= opt / (2.0 * self.log_n) {
            return solution_for_set(inst, &best_single.1, opt, "budgeted-single");
        }

        let threshold = k / self.log_n;
        let pruned = self.mask(|v| allowed[v] && inst.cost[v] < threshold);
        let lp = solve_purchase_lp(inst, PurchaseMode::Budgeted { budget: k / 2.0 }, Some(&pruned))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = best_single.clone();
        let mut method = "budgeted-single";
        for _ in 0..self.repetitions() {
            let set: Vec<usize> = (0..inst.net.node_count())
                .filter(|&v| {
                    let draw: f64 = rng.gen();
                    pruned[v] && lp.x[v] > 0.0 && draw < lp.x[v]
                })
                .collect();
            if set.is_empty() || inst.cost_of(&set) > k {
                continue;
            }
            let val = self.value(&set)?;
            if val > best.0 {
                best = (val, set);
                method = "budgeted-rounding";
            }
        }
        solution_for_set(inst, &best.1, opt, method)
    }
}

/// Budgeted purchase by LP rounding; the result never exceeds the budget.
pub fn round_budgeted_purchase(inst: &PurchaseInstance, seed: u64) -> Result<PurchaseSolution> {
    BudgetedPlanner::new(inst)?.run(seed)
}
