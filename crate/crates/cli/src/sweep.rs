//! Grid sweeps behind the `negativity`, `bell` and `fidelity` commands.
//!
//! Points are evaluated in parallel and collected in grid order (last axis
//! fastest), so the output does not depend on scheduling.

use otcss::bell::{bell_function, BellSetting, LOCAL_BOUND};
use otcss::gaussian::log_negativity;
use otcss::otcss::covariance;
use otcss::teleport::{channel_advantage, fidelity_difference, fidelity_squeezed_closed};
use otcss::{OtcssParams, Result};
use rayon::prelude::*;

use crate::output::{Cell, Table};
use crate::range::Axis;

/// Cartesian product of the axes, last axis varying fastest.
pub fn cartesian(axes: &[&Axis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        let values = axis.values();
        acc.iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

/// Checks every corner of the λ–γ box against the parameter envelope
/// before any computation starts.
pub fn validate_params(lambda: &Axis, gamma: &Axis) -> Result<()> {
    let (l0, l1) = lambda.bounds();
    let (g0, g1) = gamma.bounds();
    for l in [l0, l1] {
        for g in [g0, g1] {
            OtcssParams::new(l, g)?;
        }
    }
    Ok(())
}

fn evaluate<F>(points: Vec<Vec<f64>>, f: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(&[f64]) -> Result<Vec<Cell>> + Sync,
{
    points
        .par_iter()
        .map(|p| {
            let mut row: Vec<Cell> = p.iter().map(|&x| Cell::Num(x)).collect();
            row.extend(f(p)?);
            Ok(row)
        })
        .collect()
}

pub fn negativity(lambda: &Axis, gamma: &Axis) -> Result<Table> {
    validate_params(lambda, gamma)?;
    let rows = evaluate(cartesian(&[lambda, gamma]), |p| {
        let params = OtcssParams::new(p[0], p[1])?;
        Ok(vec![Cell::Num(log_negativity(&covariance(&params))?)])
    })?;
    Ok(Table {
        quantity: "log_negativity",
        source: "ppt-symplectic-eigenvalue",
        columns: vec!["lambda", "gamma", "log_negativity"],
        rows,
        timestamp: None,
    })
}

pub struct BellAxes<'a> {
    pub lambda: &'a Axis,
    pub gamma: &'a Axis,
    pub j: &'a Axis,
    pub theta: &'a Axis,
    pub phi: &'a Axis,
}

/// With `clip`, values at or below the local bound are written as null,
/// matching figures that only show violations.
pub fn bell(axes: &BellAxes, clip: bool) -> Result<Table> {
    validate_params(axes.lambda, axes.gamma)?;
    let (j0, _) = axes.j.bounds();
    BellSetting::new(j0, 0.0, 0.0)?;
    let grid = cartesian(&[axes.lambda, axes.gamma, axes.j, axes.theta, axes.phi]);
    let rows = evaluate(grid, |p| {
        let params = OtcssParams::new(p[0], p[1])?;
        let v = bell_function(&params, &BellSetting::new(p[2], p[3], p[4])?);
        let value = if clip && v.value <= LOCAL_BOUND {
            Cell::Null
        } else {
            Cell::Num(v.value)
        };
        Ok(vec![value, Cell::Bool(v.violates)])
    })?;
    Ok(Table {
        quantity: "bell",
        source: "displaced-parity-closed-form",
        columns: vec!["lambda", "gamma", "j", "theta", "phi", "bell", "violates"],
        rows,
        timestamp: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FidelityMode {
    /// `F(r)`; `r = 0` is the coherent-input fidelity.
    Plain,
    /// `F(r) - F(0)`.
    Difference,
    /// `F(r)` minus that of the two-mode squeezed vacuum channel with the same `λ`.
    VsTsvs,
}

pub fn fidelity(lambda: &Axis, gamma: &Axis, r: &Axis, mode: FidelityMode) -> Result<Table> {
    validate_params(lambda, gamma)?;
    let (r0, r1) = r.bounds();
    for x in [r0, r1] {
        otcss::teleport::InputState::squeezed(x)?;
    }
    let rows = evaluate(cartesian(&[lambda, gamma, r]), |p| {
        let params = OtcssParams::new(p[0], p[1])?;
        let v = match mode {
            FidelityMode::Plain => fidelity_squeezed_closed(&params, p[2])?.value(),
            FidelityMode::Difference => fidelity_difference(&params, p[2])?,
            FidelityMode::VsTsvs => channel_advantage(&params, p[2])?,
        };
        Ok(vec![Cell::Num(v)])
    })?;
    let (quantity, source, column) = match mode {
        FidelityMode::Plain => ("fidelity", "cf-teleportation-closed-form", "fidelity"),
        FidelityMode::Difference => (
            "fidelity_difference",
            "cf-teleportation-closed-form:F(r)-F(0)",
            "fidelity_difference",
        ),
        FidelityMode::VsTsvs => (
            "fidelity_advantage",
            "cf-teleportation-closed-form:F(r)-F_tsvs(r)",
            "fidelity_advantage",
        ),
    };
    Ok(Table {
        quantity,
        source,
        columns: vec!["lambda", "gamma", "r", column],
        rows,
        timestamp: None,
    })
}
