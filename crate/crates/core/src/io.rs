//! Field files: CSV with header `x,u1,u2` (1D) or `x,y,u1,u2` (2D), one row
//! per node in row-major order, 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use crate::domain::{build_grid, VectorField};
use crate::error::{Error, Result};
use crate::scalar::{real, Real};

pub fn field_to_csv<S: Real>(u: &VectorField<S>) -> String {
    let grid = u.grid();
    let mut out = String::new();
    if grid.dim() == 1 {
        out.push_str("x,u1,u2\n");
        for (n, v) in u.values().iter().enumerate() {
            let (x, _) = grid.coords::<S>(n);
            writeln!(out, "{:.16e},{:.16e},{:.16e}", x, v[0], v[1]).unwrap();
        }
    } else {
        out.push_str("x,y,u1,u2\n");
        for (n, v) in u.values().iter().enumerate() {
            let (x, y) = grid.coords::<S>(n);
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", x, y, v[0], v[1]).unwrap();
        }
    }
    out
}

pub fn write_field<S: Real>(path: &Path, u: &VectorField<S>) -> Result<()> {
    std::fs::write(path, field_to_csv(u))?;
    Ok(())
}

pub fn field_from_csv<S: Real>(text: &str) -> Result<VectorField<S>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedField("empty file".into()))?;
    let dim = match header.trim() {
        "x,u1,u2" => 1,
        "x,y,u1,u2" => 2,
        other => {
            return Err(Error::MalformedField(format!(
                "unknown header {other:?}; expected \"x,u1,u2\" or \"x,y,u1,u2\""
            )))
        }
    };
    let mut values: Vec<[S; 2]> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 2 {
            return Err(Error::MalformedField(format!(
                "row {}: expected {} columns, got {}",
                lineno + 2,
                dim + 2,
                fields.len()
            )));
        }
        let mut parsed = [0.0f64; 4];
        for (slot, field) in parsed.iter_mut().zip(&fields) {
            *slot = field
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::MalformedField(format!("row {}: {e}", lineno + 2)))?;
        }
        values.push([real(parsed[dim]), real(parsed[dim + 1])]);
    }
    let m = if dim == 1 {
        values.len()
    } else {
        let m = (values.len() as f64).sqrt().round() as usize;
        if m * m != values.len() {
            return Err(Error::MalformedField(format!(
                "{} rows is not a square node count",
                values.len()
            )));
        }
        m
    };
    if m < 3 {
        return Err(Error::MalformedField(format!(
            "{m} nodes per axis; need at least 3"
        )));
    }
    VectorField::new(build_grid(dim, m)?, values)
}

pub fn read_field<S: Real>(path: &Path) -> Result<VectorField<S>> {
    field_from_csv(&std::fs::read_to_string(path)?)
}
