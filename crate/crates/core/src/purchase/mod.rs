//! Middlebox purchase planning: nodes only process flow once bought.
//!
//! Two variants are covered: buying the cheapest node set that serves every
//! demand, and serving as much as possible within a budget.

mod greedy;
mod lp;
mod rounding;

pub use greedy::{greedy_budgeted_single_source, processing_oracle, GreedyConfig, GreedyOutcome};
pub use lp::{build_purchase_lp, solve_purchase_lp, Leg, PurchaseLp, PurchaseLpSolution, PurchaseMode};
pub use rounding::{min_rounding_rounds, round_budgeted_purchase, round_min_purchase, BudgetedPlanner};

use serde::{Deserialize, Serialize};

use crate::edge_lp::{solve_edge_lp, FlowObjective};
use crate::instance::Instance;
use crate::model::{validate_instance, Demand, FlowNetwork};
use crate::solution::EdgeFlowSolution;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PurchaseInstance {
    /// Node capacities in `net` are ignored; `potential` applies once bought.
    pub net: FlowNetwork,
    pub potential: Vec<f64>,
    pub cost: Vec<f64>,
    pub demands: Vec<Demand>,
    pub budget: Option<f64>,
}

impl PurchaseInstance {
    pub fn new(net: FlowNetwork, potential: Vec<f64>, cost: Vec<f64>, demands: Vec<Demand>, budget: Option<f64>) -> Result<Self> {
        validate_instance(&net, &demands).into_result()?;
        let n = net.node_count();
        if potential.len() != n || cost.len() != n {
            return Err(Error::Structural("potential and cost must have one entry per node".into()));
        }
        if let Some(v) = (0..n).find(|&v| !(potential[v] >= 0.0 && potential[v].is_finite() && cost[v] >= 0.0 && cost[v].is_finite())) {
            return Err(Error::Structural(format!(
                "node {} needs finite, non-negative potential and cost",
                net.node_name(v)
            )));
        }
        if let Some(i) = demands.iter().position(|d| !d.is_capped()) {
            return Err(Error::Structural(format!("purchase problems need a finite amount for demand {i}")));
        }
        if let Some(k) = budget {
            if !(k >= 0.0 && k.is_finite()) {
                return Err(Error::Structural(format!("budget must be finite and non-negative, got {k}")));
            }
        }
        Ok(PurchaseInstance {
            net,
            potential,
            cost,
            demands,
            budget,
        })
    }

    pub fn from_instance(inst: &Instance) -> Result<Self> {
        Self::new(
            inst.net.clone(),
            inst.potential.clone(),
            inst.cost.clone(),
            inst.demands.clone(),
            inst.budget,
        )
    }

    /// Nodes with positive potential.
    pub fn candidates(&self) -> Vec<usize> {
        (0..self.net.node_count()).filter(|&v| self.potential[v] > 0.0).collect()
    }

    /// Candidates whose cost fits within `budget`.
    pub fn affordable(&self, budget: f64) -> Vec<usize> {
        self.candidates().into_iter().filter(|&v| self.cost[v] <= budget).collect()
    }

    pub fn cost_of(&self, set: &[usize]) -> f64 {
        set.iter().map(|&v| self.cost[v]).sum()
    }

    /// The network in which exactly the nodes of `set` process, at their
    /// potential.
    pub fn network_with(&self, set: &[usize]) -> FlowNetwork {
        let mut caps = vec![0.0; self.net.node_count()];
        for &v in set {
            caps[v] = self.potential[v];
        }
        self.net.with_node_capacities(caps)
    }

    pub fn total_demand(&self) -> f64 {
        self.demands.iter().map(|d| d.amount).sum()
    }
}

/// A purchased node set together with flows that use only those nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurchaseSolution {
    pub purchased: Vec<usize>,
    pub cost: f64,
    pub flows: EdgeFlowSolution,
    /// Flow delivered per demand.
    pub served: Vec<f64>,
    /// Objective of the LP relaxation the solution was derived from.
    pub lp_objective: f64,
    /// Which construction produced the solution.
    pub method: String,
}

impl PurchaseSolution {
    pub fn total_served(&self) -> f64 {
        self.served.iter().sum::<f64>() + 0.0
    }

    /// Served amount over requested amount, per demand.
    pub fn served_fractions(&self, demands: &[Demand]) -> Vec<f64> {
        self.served.iter().zip(demands).map(|(s, d)| s / d.amount).collect()
    }

    pub fn empty(inst: &PurchaseInstance, lp_objective: f64, method: &str) -> Self {
        PurchaseSolution {
            purchased: Vec::new(),
            cost: 0.0,
            flows: EdgeFlowSolution::zeros(&inst.net, inst.demands.len()),
            served: vec![0.0; inst.demands.len()],
            lp_objective,
            method: method.to_string(),
        }
    }
}

/// Best routing when exactly `set` is purchased: total served flow and the
/// flows achieving it.
pub fn served_with(inst: &PurchaseInstance, set: &[usize]) -> Result<(f64, EdgeFlowSolution)> {
    if inst.demands.is_empty() || set.is_empty() {
        return Ok((0.0, EdgeFlowSolution::zeros(&inst.net, inst.demands.len())));
    }
    let net = inst.network_with(set);
    let out = solve_edge_lp(&net, &inst.demands, &FlowObjective::MaxTotalFlow)?;
    Ok((out.objective.max(0.0), out.solution))
}

/// Packages `set` with its best routing.
pub(crate) fn solution_for_set(inst: &PurchaseInstance, set: &[usize], lp_objective: f64, method: &str) -> Result<PurchaseSolution> {
    let mut set = set.to_vec();
    set.sort_unstable();
    let (_, flows) = served_with(inst, &set)?;
    let served = inst
        .demands
        .iter()
        .enumerate()
        .map(|(i, d)| flows.delivered(&inst.net, d, i).max(0.0))
        .collect();
    Ok(PurchaseSolution {
        cost: inst.cost_of(&set),
        purchased: set,
        flows,
        served,
        lp_objective,
        method: method.to_string(),
    })
}
