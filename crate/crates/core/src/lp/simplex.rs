use super::{Direction, LpModel, LpSolution, LpStatus, Sense};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Upper limit on tableau cells (rows × columns).
    pub max_cells: usize,
    pub pivot_tol: f64,
    pub opt_tol: f64,
    pub feas_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iterations: 200_000,
            max_cells: 60_000_000,
            pivot_tol: 1e-9,
            opt_tol: 1e-9,
            feas_tol: 1e-7,
        }
    }
}

pub fn solve_lp(model: &LpModel) -> Result<LpSolution> {
    solve_lp_with(model, &SimplexOptions::default())
}

#[derive(Clone, Copy, PartialEq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    rows: usize,
    width: usize, // columns + rhs
    cells: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    kind: Vec<ColKind>,
    nz: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.cells[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let piv = self.cells[r * w + q];
        self.nz.clear();
        for j in 0..w {
            let v = self.cells[r * w + j];
            if v != 0.0 {
                self.cells[r * w + j] = v / piv;
                self.nz.push(j);
            }
        }
        self.cells[r * w + q] = 1.0;
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.cells[i * w + q];
            if f == 0.0 {
                continue;
            }
            for &j in &self.nz {
                let v = self.cells[r * w + j];
                self.cells[i * w + j] -= f * v;
            }
            self.cells[i * w + q] = 0.0;
        }
        let f = self.obj[q];
        if f != 0.0 {
            for &j in &self.nz {
                self.obj[j] -= f * self.cells[r * w + j];
            }
            self.obj[q] = 0.0;
        }
        self.basis[r] = q;
    }

    fn set_objective(&mut self, costs: &[f64]) {
        let w = self.width;
        self.obj.iter_mut().for_each(|v| *v = 0.0);
        self.obj[..costs.len()].copy_from_slice(costs);
        for r in 0..self.rows {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                for j in 0..w {
                    let v = self.cells[r * w + j];
                    if v != 0.0 {
                        self.obj[j] -= cb * v;
                    }
                }
            }
        }
        for r in 0..self.rows {
            self.obj[self.basis[r]] = 0.0;
        }
    }

    /// Runs primal simplex on the current objective row. Returns false when
    /// the objective is unbounded.
    fn optimize(&mut self, opts: &SimplexOptions, allow_artificial: bool, iterations: &mut usize) -> Result<bool> {
        let ncols = self.width - 1;
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run > 50;
            let mut enter = None;
            let mut best = -opts.opt_tol;
            for j in 0..ncols {
                if !allow_artificial && self.kind[j] == ColKind::Artificial {
                    continue;
                }
                let d = self.obj[j];
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(q) = enter else { return Ok(true) };

            let mut leave: Option<(usize, f64, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, q);
                if a <= opts.pivot_tol {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                leave = match leave {
                    None => Some((r, ratio, a)),
                    Some((br, bratio, ba)) => {
                        let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                        let better = if tie {
                            if bland {
                                self.basis[r] < self.basis[br]
                            } else {
                                a > ba
                            }
                        } else {
                            ratio < bratio
                        };
                        if better {
                            Some((r, ratio, a))
                        } else {
                            Some((br, bratio, ba))
                        }
                    }
                };
            }
            let Some((r, ratio, _)) = leave else { return Ok(false) };
            if ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, q);
            *iterations += 1;
            if *iterations > opts.max_iterations {
                return Err(Error::ResourceLimit(format!("simplex exceeded {} iterations", opts.max_iterations)));
            }
        }
    }
}

/// Solves `model` with a dense two-phase primal simplex.
///
/// Variables need a finite lower bound. Infeasibility and unboundedness are
/// reported through the status; only the resource guards produce errors.
pub fn solve_lp_with(model: &LpModel, opts: &SimplexOptions) -> Result<LpSolution> {
    model.validate()?;
    let n = model.vars.len();
    for v in &model.vars {
        if !v.lower.is_finite() {
            return Err(Error::Unsupported(format!("variable {} has no finite lower bound", v.name)));
        }
    }
    let sign = match model.direction {
        Direction::Minimize => 1.0,
        Direction::Maximize => -1.0,
    };

    // Shifted columns: x = lower + x', fixed variables disappear.
    let mut col_of = vec![usize::MAX; n];
    let mut ncols = 0;
    for (j, v) in model.vars.iter().enumerate() {
        if v.upper > v.lower {
            col_of[j] = ncols;
            ncols += 1;
        }
    }
    let nstruct = ncols;

    struct Row {
        terms: Vec<(usize, f64)>,
        sense: Sense,
        rhs: f64,
    }
    let mut rows: Vec<Row> = Vec::new();
    let infeasible = |iterations| LpSolution {
        status: LpStatus::Infeasible,
        values: vec![0.0; n],
        objective: 0.0,
        iterations,
    };
    for c in &model.constraints {
        let mut rhs = c.rhs;
        let mut terms = Vec::with_capacity(c.terms.len());
        for &(j, a) in &c.terms {
            rhs -= a * model.vars[j].lower;
            if col_of[j] != usize::MAX && a != 0.0 {
                terms.push((col_of[j], a));
            }
        }
        if terms.is_empty() {
            let tol = opts.feas_tol * (1.0 + c.rhs.abs());
            let ok = match c.sense {
                Sense::Le => rhs >= -tol,
                Sense::Ge => rhs <= tol,
                Sense::Eq => rhs.abs() <= tol,
            };
            if !ok {
                return Ok(infeasible(0));
            }
            continue;
        }
        rows.push(Row { terms, sense: c.sense, rhs });
    }
    for (j, v) in model.vars.iter().enumerate() {
        if col_of[j] != usize::MAX && v.upper.is_finite() {
            rows.push(Row {
                terms: vec![(col_of[j], 1.0)],
                sense: Sense::Le,
                rhs: v.upper - v.lower,
            });
        }
    }
    for row in rows.iter_mut() {
        if row.rhs < 0.0 {
            row.rhs = -row.rhs;
            row.terms.iter_mut().for_each(|t| t.1 = -t.1);
            row.sense = match row.sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }

    let m = rows.len();
    let mut kind = vec![ColKind::Structural; nstruct];
    let mut extra = Vec::with_capacity(m); // (slack col, artificial col)
    for row in &rows {
        let slack = if row.sense == Sense::Eq {
            None
        } else {
            kind.push(ColKind::Slack);
            Some(kind.len() - 1)
        };
        let art = if row.sense == Sense::Le {
            None
        } else {
            kind.push(ColKind::Artificial);
            Some(kind.len() - 1)
        };
        extra.push((slack, art));
    }
    let total = kind.len();
    let width = total + 1;
    if m.saturating_mul(width) > opts.max_cells {
        return Err(Error::ResourceLimit(format!("LP tableau of {m}x{width} exceeds the cell limit")));
    }

    let mut t = Tableau {
        rows: m,
        width,
        cells: vec![0.0; m * width],
        obj: vec![0.0; width],
        basis: vec![0; m],
        kind,
        nz: Vec::with_capacity(width),
    };
    for (r, row) in rows.iter().enumerate() {
        for &(c, a) in &row.terms {
            t.cells[r * width + c] += a;
        }
        t.cells[r * width + total] = row.rhs;
        let (slack, art) = extra[r];
        if let Some(s) = slack {
            t.cells[r * width + s] = if row.sense == Sense::Le { 1.0 } else { -1.0 };
        }
        t.basis[r] = match (row.sense, slack, art) {
            (Sense::Le, Some(s), _) => s,
            (_, _, Some(a)) => {
                t.cells[r * width + a] = 1.0;
                a
            }
            _ => unreachable!(),
        };
    }

    let mut iterations = 0;
    let has_artificial = t.kind.contains(&ColKind::Artificial);
    if has_artificial {
        let phase1: Vec<f64> = t.kind.iter().map(|&k| if k == ColKind::Artificial { 1.0 } else { 0.0 }).collect();
        t.set_objective(&phase1);
        t.optimize(opts, true, &mut iterations)?;
        let infeas: f64 = (0..m).filter(|&r| t.kind[t.basis[r]] == ColKind::Artificial).map(|r| t.rhs(r)).sum();
        let scale = 1.0 + rows.iter().map(|r| r.rhs).fold(0.0, f64::max);
        if infeas > opts.feas_tol * scale {
            return Ok(infeasible(iterations));
        }
        // Drive remaining artificials out of the basis where possible.
        for r in 0..m {
            if t.kind[t.basis[r]] != ColKind::Artificial {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..total {
                if t.kind[j] == ColKind::Artificial {
                    continue;
                }
                let a = t.at(r, j).abs();
                if a > opts.pivot_tol && best.is_none_or(|(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            if let Some((j, _)) = best {
                t.pivot(r, j);
            }
        }
    }

    let mut costs = vec![0.0; total];
    for (j, v) in model.vars.iter().enumerate() {
        if col_of[j] != usize::MAX {
            costs[col_of[j]] = sign * v.cost;
        }
    }
    t.set_objective(&costs);
    if !t.optimize(opts, false, &mut iterations)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: vec![0.0; n],
            objective: 0.0,
            iterations,
        });
    }

    let mut shifted = vec![0.0; total];
    for r in 0..m {
        shifted[t.basis[r]] = t.rhs(r).max(0.0);
    }
    let values: Vec<f64> = model
        .vars
        .iter()
        .enumerate()
        .map(|(j, v)| {
            if col_of[j] == usize::MAX {
                v.lower
            } else {
                (v.lower + shifted[col_of[j]]).min(v.upper)
            }
        })
        .collect();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective: model.objective_value(&values),
        values,
        iterations,
    })
}
