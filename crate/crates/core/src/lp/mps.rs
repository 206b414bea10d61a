use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Direction, LpModel, Sense};
use crate::{Error, Result};

fn token(name: &str) -> String {
    name.chars().map(|c| if c.is_whitespace() { '_' } else { c }).collect()
}

/// Writes the model in free-format MPS.
pub fn write_mps(model: &LpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME {}", token(&model.name));
    if model.direction == Direction::Maximize {
        let _ = writeln!(out, "OBJSENSE\n    MAX");
    }
    out.push_str("ROWS\n N  obj\n");
    for c in &model.constraints {
        let s = match c.sense {
            Sense::Le => 'L',
            Sense::Ge => 'G',
            Sense::Eq => 'E',
        };
        let _ = writeln!(out, " {s}  {}", token(&c.name));
    }
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.vars.len()];
    for (i, c) in model.constraints.iter().enumerate() {
        for &(j, a) in &c.terms {
            columns[j].push((i, a));
        }
    }
    out.push_str("COLUMNS\n");
    for (j, v) in model.vars.iter().enumerate() {
        let name = token(&v.name);
        // Always emit the objective entry so every column is declared.
        let _ = writeln!(out, "    {name}  obj  {:e}", v.cost);
        for &(i, a) in &columns[j] {
            let _ = writeln!(out, "    {name}  {}  {:e}", token(&model.constraints[i].name), a);
        }
    }
    out.push_str("RHS\n");
    for c in &model.constraints {
        if c.rhs != 0.0 {
            let _ = writeln!(out, "    RHS  {}  {:e}", token(&c.name), c.rhs);
        }
    }
    out.push_str("BOUNDS\n");
    for v in &model.vars {
        let name = token(&v.name);
        if v.lower == v.upper {
            let _ = writeln!(out, " FX BND  {name}  {:e}", v.lower);
            continue;
        }
        if v.lower == f64::NEG_INFINITY && v.upper == f64::INFINITY {
            let _ = writeln!(out, " FR BND  {name}");
            continue;
        }
        if v.lower == f64::NEG_INFINITY {
            let _ = writeln!(out, " MI BND  {name}");
        } else if v.lower != 0.0 {
            let _ = writeln!(out, " LO BND  {name}  {:e}", v.lower);
        }
        if v.upper.is_finite() {
            let _ = writeln!(out, " UP BND  {name}  {:e}", v.upper);
        }
    }
    out.push_str("ENDATA\n");
    out
}

/// Reads free-format MPS as produced by [`write_mps`] (and most solvers).
pub fn read_mps(text: &str) -> Result<LpModel> {
    #[derive(PartialEq)]
    enum Section {
        None,
        ObjSense,
        Rows,
        Columns,
        Rhs,
        Bounds,
    }
    let mut model = LpModel::new("", Direction::Minimize);
    let mut section = Section::None;
    let mut obj_row = String::new();
    let mut rows: HashMap<String, usize> = HashMap::new();
    let mut vars: HashMap<String, usize> = HashMap::new();

    let num = |s: &str, line: usize| -> Result<f64> {
        s.parse::<f64>().map_err(|_| Error::Parse {
            line,
            message: format!("bad number {s:?}"),
        })
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let f: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') && !raw.starts_with('\t') {
            section = match f[0] {
                "NAME" => {
                    model.name = f.get(1).unwrap_or(&"").to_string();
                    Section::None
                }
                "OBJSENSE" => {
                    if let Some(s) = f.get(1) {
                        if s.starts_with("MAX") {
                            model.direction = Direction::Maximize;
                        }
                    }
                    Section::ObjSense
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => break,
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown section {other}"),
                    })
                }
            };
            continue;
        }
        let bad = |message: &str| Error::Parse {
            line,
            message: message.to_string(),
        };
        match section {
            Section::ObjSense => {
                if f[0].starts_with("MAX") {
                    model.direction = Direction::Maximize;
                }
            }
            Section::Rows => {
                if f.len() < 2 {
                    return Err(bad("row needs a type and a name"));
                }
                let sense = match f[0] {
                    "N" => {
                        if obj_row.is_empty() {
                            obj_row = f[1].to_string();
                        }
                        continue;
                    }
                    "L" => Sense::Le,
                    "G" => Sense::Ge,
                    "E" => Sense::Eq,
                    _ => return Err(bad("unknown row type")),
                };
                let i = model.add_constraint(f[1], Vec::new(), sense, 0.0);
                rows.insert(f[1].to_string(), i);
            }
            Section::Columns => {
                if f.len() < 3 || f.len().is_multiple_of(2) {
                    return Err(bad("column entry needs name/value pairs"));
                }
                let j = *vars
                    .entry(f[0].to_string())
                    .or_insert_with(|| model.add_var(f[0], 0.0, f64::INFINITY, 0.0));
                for pair in f[1..].chunks(2) {
                    let a = num(pair[1], line)?;
                    if pair[0] == obj_row {
                        model.vars[j].cost = a;
                    } else {
                        let &i = rows.get(pair[0]).ok_or_else(|| bad("unknown row"))?;
                        model.constraints[i].terms.push((j, a));
                    }
                }
            }
            Section::Rhs => {
                if f.len() < 3 || f.len().is_multiple_of(2) {
                    return Err(bad("rhs entry needs name/value pairs"));
                }
                for pair in f[1..].chunks(2) {
                    if pair[0] == obj_row {
                        continue;
                    }
                    let &i = rows.get(pair[0]).ok_or_else(|| bad("unknown row"))?;
                    model.constraints[i].rhs = num(pair[1], line)?;
                }
            }
            Section::Bounds => {
                if f.len() < 3 {
                    return Err(bad("bound entry too short"));
                }
                let &j = vars.get(f[2]).ok_or_else(|| bad("unknown column"))?;
                let value = f.get(3).map(|s| num(s, line)).transpose()?;
                let v = &mut model.vars[j];
                let need = || value.ok_or_else(|| bad("bound needs a value"));
                match f[0] {
                    "UP" => v.upper = need()?,
                    "LO" => v.lower = need()?,
                    "FX" => {
                        v.lower = need()?;
                        v.upper = v.lower;
                    }
                    "MI" => v.lower = f64::NEG_INFINITY,
                    "PL" => v.upper = f64::INFINITY,
                    "FR" => {
                        v.lower = f64::NEG_INFINITY;
                        v.upper = f64::INFINITY;
                    }
                    _ => return Err(bad("unknown bound type")),
                }
            }
            Section::None => return Err(bad("data outside a section")),
        }
    }
    Ok(model)
}
