//! Lebesgue, Sobolev and modulation-space norms of sampled functions.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::convention;
use crate::error::{Error, Result};
use crate::lattice::{transform, GridSpec, SampledFunction};
use crate::quantize::apply_jm;

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidExponent(format!("exponent must be positive, got {p}")));
    }
    Ok(())
}

/// `(Σ |v_i|^p w)^{1/p}`, the maximum for `p = ∞`. Quasi-norms for `p < 1`.
pub fn weighted_p_norm(values: impl Iterator<Item = f64>, weight: f64, p: f64) -> f64 {
    if p.is_infinite() {
        return values.fold(0.0, |m, v| m.max(v.abs()));
    }
    let sum: f64 = values.map(|v| v.abs().powf(p)).sum();
    (sum * weight).powf(1.0 / p)
}

/// `(Σ |f(x_n)|^p Δx)^{1/p}`; the maximum for `p = ∞`.
pub fn lebesgue_norm(f: &SampledFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(weighted_p_norm(
        f.samples().iter().map(|v| v.norm()),
        f.grid().dx(),
        p,
    ))
}

/// `‖J_s f‖_{L^p}`.
pub fn sobolev_norm(f: &SampledFunction, s: f64, p: f64) -> Result<f64> {
    check_exponent(p)?;
    lebesgue_norm(&apply_jm(s, f), p)
}

/// `‖f‖_{L²}` from the spectrum.
pub fn parseval_norm(f: &SampledFunction) -> f64 {
    let sum: f64 = f.spectrum().iter().map(|c| c.norm_sqr()).sum();
    (convention::parseval_constant(f.grid().period()) * sum).sqrt()
}

/// `V_φ f (x_n, ξ_k)`, index `n·N + k` with `k` a centered slot.
#[derive(Clone, Debug)]
pub struct StftGrid {
    pub window: SampledFunction,
    pub values: Vec<Complex64>,
}

impl StftGrid {
    pub fn grid(&self) -> &GridSpec {
        self.window.grid()
    }

    pub fn at(&self, n: usize, k: usize) -> Complex64 {
        self.values[n * self.grid().n_points() + k]
    }
}

/// Periodized Gaussian `Σ_j exp(−π ((t − jL)/w)²)` centered at 0.
pub fn gaussian_window(grid: &GridSpec, width: f64) -> SampledFunction {
    let l = grid.period();
    SampledFunction::from_fn(*grid, |t| {
        let v: f64 = (-3..=3)
            .map(|j| {
                let u = (t - j as f64 * l) / width;
                (-std::f64::consts::PI * u * u).exp()
            })
            .sum();
        Complex64::new(v, 0.0)
    })
}

/// Default window: width an eighth of the period.
pub fn default_window(grid: &GridSpec) -> SampledFunction {
    gaussian_window(grid, grid.period() / 8.0)
}

/// `V_φ f(x_n, ξ_k) = Δx Σ_m e^{−i ξ_k t_m} f(t_m) φ(t_m − x_n)` with circular
/// shifts of the window.
pub fn stft(f: &SampledFunction, window: &SampledFunction) -> Result<StftGrid> {
    let grid = *f.grid();
    if grid != *window.grid() {
        return Err(Error::GridMismatch);
    }
    if window.max_abs() == 0.0 {
        return Err(Error::InvalidParameter("window must be non-zero".into()));
    }
    let size = grid.n_points();
    let (fs, ws) = (f.samples(), window.samples());
    // Δx · N · (1/N) Σ = L · transform
    let scale = grid.period();
    let rows: Vec<Vec<Complex64>> = (0..size)
        .into_par_iter()
        .map(|n| {
            let u: Vec<Complex64> = (0..size)
                .map(|m| fs[m] * ws[(m + size - n) % size])
                .collect();
            transform(&grid, &u)
                .expect("length matches")
                .into_iter()
                .map(|c| c * scale)
                .collect()
        })
        .collect();
    Ok(StftGrid {
        window: window.clone(),
        values: rows.concat(),
    })
}

/// `‖ ‖V_φ f(x, ξ)‖_{p, dx} ‖_{t, dξ/2π}`.
pub fn modulation_norm(f: &SampledFunction, window: &SampledFunction, p: f64, t: f64) -> Result<f64> {
    check_exponent(p)?;
    check_exponent(t)?;
    let v = stft(f, window)?;
    let grid = *f.grid();
    let size = grid.n_points();
    let inner: Vec<f64> = (0..size)
        .map(|k| weighted_p_norm((0..size).map(|n| v.at(n, k).norm()), grid.dx(), p))
        .collect();
    Ok(weighted_p_norm(
        inner.into_iter(),
        convention::stft_frequency_weight(grid.period()),
        t,
    ))
}
