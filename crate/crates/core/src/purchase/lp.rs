use super::{PurchaseInstance, PurchaseSolution};
use crate::lp::{solve_lp, Direction, LpModel, LpStatus, Sense};
use crate::solution::EdgeFlowSolution;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PurchaseMode {
    /// Serve every demand in full at minimum purchase cost.
    Min,
    /// Serve as much as possible (each demand at most its amount) with total
    /// purchase cost at most `budget`.
    Budgeted { budget: f64 },
}

/// Variable indices for the flow of one demand processed at one vertex: an
/// unprocessed leg from the source to the vertex and a processed leg from the
/// vertex to the sink.
#[derive(Debug, Clone)]
struct LegVars {
    demand: usize,
    vertex: usize,
    served: usize,
    unprocessed: Vec<(usize, usize)>,
    processed: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct PurchaseLp {
    pub model: LpModel,
    /// `x[v]` for candidate vertices.
    x: Vec<Option<usize>>,
    legs: Vec<LegVars>,
}

/// One leg pair of an LP solution, with arc flows as sparse lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Leg {
    pub demand: usize,
    pub vertex: usize,
    pub served: f64,
    pub unprocessed: Vec<(usize, f64)>,
    pub processed: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurchaseLpSolution {
    /// Fractional purchase per node (0 for non-candidates).
    pub x: Vec<f64>,
    pub legs: Vec<Leg>,
    /// Cost in min mode, served flow in budgeted mode.
    pub objective: f64,
}

/// Builds the edge-based purchase LP over the candidates allowed by `allowed`
/// (all positive-potential nodes when `None`).
pub fn build_purchase_lp(inst: &PurchaseInstance, mode: PurchaseMode, allowed: Option<&[bool]>) -> PurchaseLp {
    let net = &inst.net;
    let dir = match mode {
        PurchaseMode::Min => Direction::Minimize,
        PurchaseMode::Budgeted { .. } => Direction::Maximize,
    };
    let mut m = LpModel::new("purchase", dir);
    let n = net.node_count();
    let candidate = |v: usize| inst.potential[v] > 0.0 && allowed.is_none_or(|mask| mask[v]);
    let mut x = vec![None; n];
    for (v, slot) in x.iter_mut().enumerate() {
        if candidate(v) {
            let c = if mode == PurchaseMode::Min { inst.cost[v] } else { 0.0 };
            *slot = Some(m.add_var(format!("x[{}]", net.node_name(v)), 0.0, 1.0, c));
        }
    }

    let mut legs = Vec::new();
    let mut link_terms: Vec<Vec<(usize, f64)>> = vec![Vec::new(); net.link_count()];
    let mut per_vertex_link: Vec<Vec<Vec<(usize, f64)>>> = vec![Vec::new(); n];
    for (i, d) in inst.demands.iter().enumerate() {
        let mut served_terms = Vec::new();
        for v in 0..n {
            let Some(xv) = x[v] else { continue };
            let gain = if mode == PurchaseMode::Min { 0.0 } else { 1.0 };
            let g = m.add_var(format!("g{i}[{}]", net.node_name(v)), 0.0, f64::INFINITY, gain);
            served_terms.push((g, 1.0));
            m.add_constraint(format!("cap{i}[{}]", net.node_name(v)), vec![(g, 1.0), (xv, -d.amount)], Sense::Le, 0.0);

            // A leg from `from` to `to` carrying g; arcs into `from` and out
            // of `to` are not needed.
            let leg = |label: &str, from: usize, to: usize, m: &mut LpModel| -> Vec<(usize, usize)> {
                if from == to {
                    return Vec::new();
                }
                let vars: Vec<(usize, usize)> = (0..net.arc_count())
                    .filter(|&a| net.arc(a).head != from && net.arc(a).tail != to)
                    .map(|a| (a, m.add_var(format!("{label}{i}[{}][{a}]", net.node_name(v)), 0.0, f64::INFINITY, 0.0)))
                    .collect();
                let mut local = vec![None; net.arc_count()];
                for &(a, j) in &vars {
                    local[a] = Some(j);
                }
                for u in 0..n {
                    if u == from || u == to {
                        continue;
                    }
                    let mut terms: Vec<(usize, f64)> = net.in_arcs(u).iter().filter_map(|&a| local[a]).map(|j| (j, 1.0)).collect();
                    terms.extend(net.out_arcs(u).iter().filter_map(|&a| local[a]).map(|j| (j, -1.0)));
                    if !terms.is_empty() {
                        m.add_constraint(format!("{label}flow{i}[{}][{}]", net.node_name(v), net.node_name(u)), terms, Sense::Eq, 0.0);
                    }
                }
                let mut out: Vec<(usize, f64)> = net.out_arcs(from).iter().filter_map(|&a| local[a]).map(|j| (j, 1.0)).collect();
                out.push((g, -1.0));
                m.add_constraint(format!("{label}start{i}[{}]", net.node_name(v)), out, Sense::Eq, 0.0);
                vars
            };
            let unprocessed = leg("u", d.source, v, &mut m);
            let processed = leg("q", v, d.sink, &mut m);

            let slot = &mut per_vertex_link[v];
            if slot.is_empty() {
                *slot = vec![Vec::new(); net.link_count()];
            }
            for &(a, j) in unprocessed.iter().chain(&processed) {
                let l = net.arc(a).link;
                link_terms[l].push((j, 1.0));
                slot[l].push((j, 1.0));
            }
            legs.push(LegVars {
                demand: i,
                vertex: v,
                served: g,
                unprocessed,
                processed,
            });
        }
        match mode {
            PurchaseMode::Min => m.add_constraint(format!("demand{i}"), served_terms, Sense::Ge, d.amount),
            PurchaseMode::Budgeted { .. } => m.add_constraint(format!("demand{i}"), served_terms, Sense::Le, d.amount),
        };
    }
    for (l, terms) in link_terms.into_iter().enumerate() {
        if !terms.is_empty() {
            m.add_constraint(format!("link{l}"), terms, Sense::Le, net.link(l).capacity);
        }
    }
    for v in 0..n {
        let Some(xv) = x[v] else { continue };
        for (l, mut terms) in std::mem::take(&mut per_vertex_link[v]).into_iter().enumerate() {
            if !terms.is_empty() {
                terms.push((xv, -net.link(l).capacity));
                m.add_constraint(format!("link{l}[{}]", net.node_name(v)), terms, Sense::Le, 0.0);
            }
        }
        let mut terms: Vec<(usize, f64)> = legs.iter().filter(|g| g.vertex == v).map(|g| (g.served, 1.0)).collect();
        if !terms.is_empty() {
            terms.push((xv, -inst.potential[v]));
            m.add_constraint(format!("node[{}]", net.node_name(v)), terms, Sense::Le, 0.0);
        }
    }
    if let PurchaseMode::Budgeted { budget } = mode {
        let terms: Vec<(usize, f64)> = x.iter().enumerate().filter_map(|(v, xv)| xv.map(|j| (j, inst.cost[v]))).collect();
        if !terms.is_empty() {
            m.add_constraint("budget", terms, Sense::Le, budget);
        }
    }
    PurchaseLp { model: m, x, legs }
}

/// Solves the purchase LP. In min mode an infeasible LP means the demands
/// cannot be met even when buying every node.
pub fn solve_purchase_lp(inst: &PurchaseInstance, mode: PurchaseMode, allowed: Option<&[bool]>) -> Result<PurchaseLpSolution> {
    let lp = build_purchase_lp(inst, mode, allowed);
    let sol = solve_lp(&lp.model)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(Error::Infeasible("demands unsatisfiable even buying everything".into()));
        }
        LpStatus::Unbounded => return Err(Error::Unbounded),
    }
    let val = |j: usize| {
        let x = sol.values[j];
        if x < 1e-12 {
            0.0
        } else {
            x
        }
    };
    let x = lp.x.iter().map(|slot| slot.map_or(0.0, |j| val(j).min(1.0))).collect();
    let legs = lp
        .legs
        .iter()
        .map(|leg| {
            let sparse = |vars: &[(usize, usize)]| vars.iter().map(|&(a, j)| (a, val(j))).filter(|&(_, f)| f > 0.0).collect();
            Leg {
                demand: leg.demand,
                vertex: leg.vertex,
                served: val(leg.served),
                unprocessed: sparse(&leg.unprocessed),
                processed: sparse(&leg.processed),
            }
        })
        .collect();
    Ok(PurchaseLpSolution {
        x,
        legs,
        objective: sol.objective,
    })
}

impl PurchaseLpSolution {
    /// Superposes the legs, scaling those processed at `v` by `factor[v]`,
    /// then scales everything down uniformly if a link is overloaded and
    /// clips each demand to its amount.
    pub(crate) fn scaled_flows(&self, inst: &PurchaseInstance, factor: &[f64]) -> (EdgeFlowSolution, Vec<f64>) {
        let net = &inst.net;
        let k = inst.demands.len();
        let mut sol = EdgeFlowSolution::zeros(net, k);
        for leg in &self.legs {
            let f = factor[leg.vertex];
            if f <= 0.0 || leg.served <= 0.0 {
                continue;
            }
            let i = leg.demand;
            for &(a, x) in &leg.unprocessed {
                sol.flow[i][a] += f * x;
                sol.unprocessed[i][a] += f * x;
            }
            for &(a, x) in &leg.processed {
                sol.flow[i][a] += f * x;
            }
            sol.processing[i][leg.vertex] += f * leg.served;
        }
        let loads = sol.link_loads(net);
        let shrink = loads
            .iter()
            .zip(net.links())
            .filter(|(&load, _)| load > 0.0)
            .map(|(&load, link)| link.capacity / load)
            .fold(1.0_f64, f64::min);
        let mut served = vec![0.0; k];
        for i in 0..k {
            served[i] = sol.processing[i].iter().sum::<f64>() * shrink;
            let clip = if served[i] > inst.demands[i].amount {
                inst.demands[i].amount / served[i]
            } else {
                1.0
            };
            served[i] *= clip;
            let s = shrink * clip;
            for row in [&mut sol.flow[i], &mut sol.unprocessed[i], &mut sol.processing[i]] {
                row.iter_mut().for_each(|x| *x *= s);
            }
        }
        (sol, served)
    }

    pub(crate) fn to_solution(&self, inst: &PurchaseInstance, purchased: Vec<usize>, factor: &[f64], method: &str) -> PurchaseSolution {
        let (flows, served) = self.scaled_flows(inst, factor);
        PurchaseSolution {
            cost: inst.cost_of(&purchased),
            purchased,
            flows,
            served,
            lp_objective: self.objective,
            method: method.to_string(),
        }
    }
}
