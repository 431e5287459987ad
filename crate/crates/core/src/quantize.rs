//! Operator application: the bilinear quadrature `T_σ`, the linear
//! quantization `τ(x, D)` and the Bessel lift `J_s`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{GridSpec, SampledFunction};
pub use crate::symbols::LinearSymbolGrid;
use crate::symbols::SymbolGrid;

/// `e^{2πi r/N}` for `r = 0..N`.
pub(crate) fn roots(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|r| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / n as f64))
        .collect()
}

/// `e^{i ξ_k x_n}` by table lookup.
#[inline]
pub(crate) fn phase(roots: &[Complex64], n: usize, k: i64) -> Complex64 {
    let size = roots.len() as i64;
    roots[(k * n as i64).rem_euclid(size) as usize]
}

fn same_grid(a: &GridSpec, b: &GridSpec) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// `T_σ(f, g)(x_n) = Σ_{k,l} σ(x_n, α_k, β_l) f̂_k ĝ_l e^{i x_n (α_k + β_l)}`.
///
/// x-independent symbols take the anti-diagonal path, the rest the direct sum.
pub fn apply_bilinear(
    sigma: &SymbolGrid,
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<SampledFunction> {
    if sigma.is_x_independent() {
        apply_bilinear_fast(sigma, f, g)
    } else {
        apply_bilinear_reference(sigma, f, g)
    }
}

/// Direct `O(N³)` evaluation.
pub fn apply_bilinear_reference(
    sigma: &SymbolGrid,
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<SampledFunction> {
    let grid = *sigma.grid();
    same_grid(&grid, f.grid())?;
    same_grid(&grid, g.grid())?;
    let size = grid.n_points();
    let roots = roots(size);
    let (fs, gs) = (f.spectrum(), g.spectrum());
    let samples = (0..size)
        .into_par_iter()
        .map(|n| {
            let gl: Vec<Complex64> = (0..size)
                .map(|l| gs[l] * phase(&roots, n, grid.mode(l)))
                .collect();
            let slice = sigma.slice(n);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..size {
                if fs[k] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &slice[k * size..(k + 1) * size];
                let inner: Complex64 = row.iter().zip(&gl).map(|(s, v)| s * v).sum();
                acc += fs[k] * phase(&roots, n, grid.mode(k)) * inner;
            }
            acc
        })
        .collect();
    SampledFunction::from_samples(grid, samples)
}

/// x-independent symbols: collect `σ(k, l) f̂_k ĝ_l` on the anti-diagonals
/// `k + l ≡ m (mod N)` and synthesize once.
pub fn apply_bilinear_fast(
    sigma: &SymbolGrid,
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<SampledFunction> {
    if !sigma.is_x_independent() {
        return Err(Error::InvalidParameter(
            "the anti-diagonal path needs an x-independent symbol".into(),
        ));
    }
    let grid = *sigma.grid();
    same_grid(&grid, f.grid())?;
    same_grid(&grid, g.grid())?;
    let size = grid.n_points();
    let (fs, gs) = (f.spectrum(), g.spectrum());
    let s = sigma.slice(0);
    let mut modes = vec![Complex64::new(0.0, 0.0); size];
    for k in 0..size {
        if fs[k] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for l in 0..size {
            let m = grid.wrap_slot(grid.mode(k) + grid.mode(l));
            modes[m] += s[k * size + l] * fs[k] * gs[l];
        }
    }
    SampledFunction::from_spectrum(grid, modes)
}

/// `τ(x, D) f (x_n) = Σ_k τ(x_n, ξ_k) f̂_k e^{i x_n ξ_k}`.
pub fn apply_linear(tau: &LinearSymbolGrid, f: &SampledFunction) -> Result<SampledFunction> {
    let grid = *tau.grid();
    same_grid(&grid, f.grid())?;
    let size = grid.n_points();
    let roots = roots(size);
    let fs = f.spectrum();
    let samples = (0..size)
        .map(|n| {
            (0..size)
                .map(|k| tau.at(n, k) * fs[k] * phase(&roots, n, grid.mode(k)))
                .sum()
        })
        .collect();
    SampledFunction::from_samples(grid, samples)
}

/// `J_s = (1 − Δ)^{s/2}`: multiplies mode `k` by `(1 + ξ_k²)^{s/2}`.
pub fn apply_jm(s: f64, f: &SampledFunction) -> SampledFunction {
    let grid = *f.grid();
    f.map_spectrum(|k, c| {
        let xi = grid.frequency(k);
        c * (1.0 + xi * xi).powf(s / 2.0)
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::f64::consts::PI;

    use super::*;
    use crate::lattice::{from_fourier_coeffs, make_grid};
    use crate::symbols::{sample_linear_symbol, sample_symbol};
    use crate::symlang::parse_complex;

    fn mode(grid: GridSpec, k: i64) -> SampledFunction {
        from_fourier_coeffs(grid, &BTreeMap::from([(k, Complex64::new(1.0, 0.0))])).unwrap()
    }

    #[test]
    fn constant_symbol_is_pointwise_product() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let f = SampledFunction::from_fn(g, |x| Complex64::new(x.cos(), 0.5 * (2.0 * x).sin()));
        let h = SampledFunction::from_fn(g, |x| Complex64::new(1.0 + (3.0 * x).sin(), 0.0));
        let one = sample_symbol(&parse_complex("1").unwrap(), &g).unwrap();
        let out = apply_bilinear(&one, &f, &h).unwrap();
        let prod = f.pointwise_product(&h).unwrap();
        assert!(out.max_abs_diff(&prod) < 1e-14);
        let reference = apply_bilinear_reference(&one, &f, &h).unwrap();
        assert!(out.max_abs_diff(&reference) < 1e-14);
    }

    #[test]
    fn derivative_multiplier() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let f = SampledFunction::from_fn(g, |x| Complex64::new((2.0 * x).sin(), x.cos()));
        let one = SampledFunction::from_fn(g, |_| Complex64::new(1.0, 0.0));
        let s = sample_symbol(&parse_complex("0+1i*alpha").unwrap(), &g).unwrap();
        let out = apply_bilinear(&s, &f, &one).unwrap();
        assert!(out.max_abs_diff(&f.derivative()) < 1e-13);
    }

    #[test]
    fn linear_examples() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let f = mode(g, 2);
        let one = sample_linear_symbol(&parse_complex("1").unwrap(), &g).unwrap();
        assert!(apply_linear(&one, &f).unwrap().max_abs_diff(&f) < 1e-15);
        let d = sample_linear_symbol(&parse_complex("1i*xi").unwrap(), &g).unwrap();
        assert!(apply_linear(&d, &f).unwrap().max_abs_diff(&f.derivative()) < 1e-13);
        let b = sample_linear_symbol(&parse_complex("bracket(xi)").unwrap(), &g).unwrap();
        let out = apply_linear(&b, &f).unwrap();
        let want = SampledFunction::from_fn(g, |x| Complex64::from_polar(5f64.sqrt(), 2.0 * x));
        assert!(out.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn bessel_lift() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let f = mode(g, 3);
        assert!(apply_jm(0.0, &f).max_abs_diff(&f) < 1e-15);
        let lifted = apply_jm(2.0, &f);
        let want = SampledFunction::from_fn(g, |x| Complex64::from_polar(10.0, 3.0 * x));
        assert!(lifted.max_abs_diff(&want) < 1e-13);
    }
}
