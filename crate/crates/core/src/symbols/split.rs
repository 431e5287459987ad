//! Low/high frequency splitting `σ = σ·P + σ·(1 − P)` with
//! `P(α, β) = Φ(α − β) Φ(α) Φ(β)`.
//!
//! Φ is C∞ with Φ = 1 on `|u| <= 1` and support in `|u| <= 2`. Such a bump is
//! not analytic, so it lives outside the expression language.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::lattice::GridSpec;
use crate::symlang::{ComplexExpr, Point};

use super::grid::{sample_symbol, SymbolGrid};

fn f(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// C∞ step: 0 for `t <= 0`, 1 for `t >= 1`.
pub fn smooth_step(t: f64) -> f64 {
    let (a, b) = (f(t), f(1.0 - t));
    a / (a + b)
}

/// The bump `Φ(u) = step(2 − |u|)`.
pub fn smooth_bump(u: f64) -> f64 {
    smooth_step(2.0 - u.abs())
}

pub fn cutoff(alpha: f64, beta: f64) -> f64 {
    smooth_bump(alpha - beta) * smooth_bump(alpha) * smooth_bump(beta)
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitSymbol {
    pub sigma: ComplexExpr,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitValue {
    pub sigma: Complex64,
    pub low: Complex64,
    pub high: Complex64,
}

pub fn split_symbol(sigma: &ComplexExpr) -> SplitSymbol {
    SplitSymbol {
        sigma: sigma.clone(),
    }
}

impl SplitSymbol {
    pub fn eval(&self, p: &Point) -> SplitValue {
        let s = self.sigma.eval(p);
        let cut = cutoff(p.alpha, p.beta);
        SplitValue {
            sigma: s,
            low: s * cut,
            high: s * (1.0 - cut),
        }
    }

    /// `(σ1, σ2)` sampled on the lattice.
    pub fn sample(&self, grid: &GridSpec) -> Result<(SymbolGrid, SymbolGrid)> {
        let full = sample_symbol(&self.sigma, grid)?;
        let freqs = grid.frequencies();
        let part = |low: bool| {
            let g = |x: usize, k: usize, l: usize| {
                let cut = cutoff(freqs[k], freqs[l]);
                full.at(x, k, l) * if low { cut } else { 1.0 - cut }
            };
            if full.is_x_independent() {
                SymbolGrid::from_fn_uniform(*grid, |k, l| g(0, k, l))
            } else {
                SymbolGrid::from_fn(*grid, g)
            }
        };
        Ok((part(true), part(false)))
    }
}
