//! Small linear-programming toolkit: a model builder, a dense two-phase
//! simplex solver, and MPS import/export for cross-checking with external
//! solvers.

mod mps;
mod simplex;

pub use mps::{read_mps, write_mps};
pub use simplex::{solve_lp, solve_lp_with, SimplexOptions};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    /// Objective coefficient.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub name: String,
    pub direction: Direction,
    pub vars: Vec<Variable>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Variable values; meaningful only when optimal.
    pub values: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Returns self if optimal, otherwise an error describing the status.
    pub fn require_optimal(self, what: &str) -> Result<Self> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            LpStatus::Infeasible => Err(Error::Infeasible(format!("{what} LP is infeasible"))),
            LpStatus::Unbounded => Err(Error::Unbounded),
        }
    }
}

impl LpModel {
    pub fn new(name: &str, direction: Direction) -> Self {
        LpModel {
            name: name.to_string(),
            direction,
            vars: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64, cost: f64) -> usize {
        self.vars.push(Variable {
            name: name.into(),
            lower,
            upper,
            cost,
        });
        self.vars.len() - 1
    }

    pub fn add_constraint(&mut self, name: impl Into<String>, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> usize {
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            sense,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.vars.iter().zip(values).map(|(v, x)| v.cost * x).sum()
    }

    /// Checks that every term references a declared variable and that bounds
    /// are consistent.
    pub fn validate(&self) -> Result<()> {
        for v in &self.vars {
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper {
                return Err(Error::Structural(format!("variable {} has bounds [{}, {}]", v.name, v.lower, v.upper)));
            }
            if !v.cost.is_finite() {
                return Err(Error::Structural(format!("variable {} has non-finite cost", v.name)));
            }
        }
        for c in &self.constraints {
            if !c.rhs.is_finite() {
                return Err(Error::Structural(format!("constraint {} has non-finite rhs", c.name)));
            }
            for &(j, a) in &c.terms {
                if j >= self.vars.len() {
                    return Err(Error::Structural(format!("constraint {} references undeclared variable {j}", c.name)));
                }
                if !a.is_finite() {
                    return Err(Error::Structural(format!("constraint {} has a non-finite coefficient", c.name)));
                }
            }
        }
        Ok(())
    }

    /// Largest absolute violation of any bound or constraint by `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, &x) in self.vars.iter().zip(values) {
            worst = worst.max(v.lower - x).max(x - v.upper);
        }
        for c in &self.constraints {
            let lhs: f64 = c.terms.iter().map(|&(j, a)| a * values[j]).sum();
            let gap = match c.sense {
                Sense::Le => lhs - c.rhs,
                Sense::Ge => c.rhs - lhs,
                Sense::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(gap);
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_rejects_undeclared_variable() {
        let mut m = LpModel::new("bad", Direction::Maximize);
        m.add_var("x", 0.0, 1.0, 1.0);
        m.add_constraint("c", vec![(3, 1.0)], Sense::Le, 1.0);
        assert!(m.validate().is_err());
    }

    #[test]
    fn validate_rejects_inverted_bounds() {
        let mut m = LpModel::new("bad", Direction::Maximize);
        m.add_var("x", 2.0, 1.0, 1.0);
        assert!(m.validate().is_err());
    }
}
