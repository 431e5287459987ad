use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::GridSpec;
use crate::symlang::{ComplexExpr, Point, Var};
use crate::tolerances::CLASS_CEILING_FACTOR;

use super::builtin::defining_builtin;
use super::ClassSpec;

/// How the pass threshold of each derivative triple is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ceiling {
    /// `CLASS_CEILING_FACTOR ×` the constant of the class's defining builtin
    /// at the same `(0, b, c)`. The builtins are x-independent, so the
    /// x-derivative triples reuse the `a = 0` calibration.
    Calibrated,
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderEntry {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub constant: f64,
    /// `[x, α, β]` where the constant is attained.
    pub worst_point: [f64; 3],
    pub ceiling: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub class: String,
    pub spec: ClassSpec,
    pub orders: Vec<OrderEntry>,
    pub pass: bool,
}

impl DecayReport {
    pub fn entry(&self, a: u32, b: u32, c: u32) -> Option<&OrderEntry> {
        self.orders.iter().find(|o| (o.a, o.b, o.c) == (a, b, c))
    }
}

/// Exact derivative `∂_x^a D_b^b D_c^c e` with the directions of the class.
pub fn class_derivative(e: &ComplexExpr, spec: &ClassSpec, a: u32, b: u32, c: u32) -> ComplexExpr {
    let (db, dc) = spec.variant.directions();
    e.differentiate(Var::X, a)
        .directional_derivative(db, b)
        .directional_derivative(dc, c)
}

/// `sup |∂^{a,b,c} e| / weight` over the lattice and where it is attained.
pub fn decay_constant(
    e: &ComplexExpr,
    spec: &ClassSpec,
    grid: &GridSpec,
    (a, b, c): (u32, u32, u32),
) -> Result<(f64, [f64; 3])> {
    let d = class_derivative(e, spec, a, b, c);
    let freqs = grid.frequencies();
    let n = grid.n_points();
    let xs: Vec<f64> = if d.depends_on(Var::X) {
        grid.nodes()
    } else {
        vec![0.0]
    };
    let rows: Vec<(f64, [f64; 3], Option<String>)> = (0..xs.len() * n)
        .into_par_iter()
        .map(|r| {
            let x = xs[r / n];
            let alpha = freqs[r % n];
            let mut best = (0.0f64, [x, alpha, freqs[0]], None);
            for &beta in &freqs {
                let v = d.eval(&Point::bilinear(x, alpha, beta)).norm();
                let w = spec.weight(a, b, c, alpha, beta);
                let ratio = v / w;
                if !ratio.is_finite() {
                    best.2 = Some(format!("(x={x}, alpha={alpha}, beta={beta})"));
                    return best;
                }
                if ratio > best.0 {
                    best = (ratio, [x, alpha, beta], None);
                }
            }
            best
        })
        .collect();
    let mut out = (0.0f64, [xs[0], freqs[0], freqs[0]]);
    for (c, p, bad) in rows {
        if let Some(point) = bad {
            return Err(Error::NonFinite {
                value: format!("derivative ({a},{b},{c})"),
                point,
            });
        }
        if c > out.0 {
            out = (c, p);
        }
    }
    Ok(out)
}

pub fn check_class(e: &ComplexExpr, spec: &ClassSpec, grid: &GridSpec) -> Result<DecayReport> {
    check_class_with(e, spec, grid, Ceiling::Calibrated)
}

pub fn check_class_with(
    e: &ComplexExpr,
    spec: &ClassSpec,
    grid: &GridSpec,
    ceiling: Ceiling,
) -> Result<DecayReport> {
    let calibration = match ceiling {
        Ceiling::Calibrated => Some(ComplexExpr::real(defining_builtin(spec)?)),
        Ceiling::Fixed(_) => None,
    };
    let mut orders = Vec::new();
    for (a, b, c) in spec.triples() {
        let (constant, worst_point) = decay_constant(e, spec, grid, (a, b, c))?;
        let limit = match (&calibration, ceiling) {
            (Some(cal), _) => {
                CLASS_CEILING_FACTOR * decay_constant(cal, spec, grid, (0, b, c))?.0
            }
            (None, Ceiling::Fixed(v)) => v,
            (None, Ceiling::Calibrated) => unreachable!(),
        };
        orders.push(OrderEntry {
            a,
            b,
            c,
            constant,
            worst_point,
            ceiling: limit,
            pass: constant <= limit,
        });
    }
    let pass = orders.iter().all(|o| o.pass);
    Ok(DecayReport {
        class: spec.to_string(),
        spec: *spec,
        orders,
        pass,
    })
}
