//! Adjoints and compositions computed exactly on the lattice.
//!
//! All frequency arithmetic is modulo `N`; `[k]` below denotes the lattice
//! representative of `k`. With `σ̂(a, ξ, η)` the discrete Fourier coefficients
//! of `σ` in `x`:
//!
//! ```text
//! (σ*1)^(a, ξ, η) = σ̂(a, [−ξ−η−a], η)
//! (σ*2)^(a, ξ, η) = σ̂(a, ξ, [−ξ−η−a])
//! ```

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{inverse_transform, transform, GridSpec, SampledFunction};
use crate::quantize::{phase, roots};
use crate::symbols::{LinearSymbolGrid, SymbolGrid};

use super::Which;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn same_grid(a: &GridSpec, b: &GridSpec) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// `σ̂[(a·N + k)·N + l]`, `a` a centered slot.
fn x_coefficients(sigma: &SymbolGrid) -> Vec<Complex64> {
    let grid = *sigma.grid();
    let size = grid.n_points();
    let columns: Vec<Vec<Complex64>> = (0..size * size)
        .into_par_iter()
        .map(|kl| {
            let col: Vec<Complex64> = (0..size)
                .map(|n| sigma.at(n, kl / size, kl % size))
                .collect();
            transform(&grid, &col).expect("length matches")
        })
        .collect();
    let mut out = vec![ZERO; size * size * size];
    for (kl, col) in columns.into_iter().enumerate() {
        for (a, c) in col.into_iter().enumerate() {
            out[a * size * size + kl] = c;
        }
    }
    out
}

/// Synthesizes `σ(x_n, k, l)` from coefficients laid out as in
/// [`x_coefficients`].
fn from_x_coefficients(grid: GridSpec, coeffs: &[Complex64]) -> SymbolGrid {
    let size = grid.n_points();
    let columns: Vec<Vec<Complex64>> = (0..size * size)
        .into_par_iter()
        .map(|kl| {
            let col: Vec<Complex64> = (0..size).map(|a| coeffs[a * size * size + kl]).collect();
            inverse_transform(&grid, &col).expect("length matches")
        })
        .collect();
    SymbolGrid::from_fn(grid, |n, k, l| columns[k * size + l][n])
}

/// Exact symbol of the first or second transpose under `⟨u, v⟩ = Δx Σ u v`.
pub fn adjoint_exact(sigma: &SymbolGrid, which: Which) -> SymbolGrid {
    let grid = *sigma.grid();
    let size = grid.n_points();
    // the slot of [−ξ−η−a]
    let partner = |a: usize, k: usize, l: usize| {
        grid.wrap_slot(-grid.mode(k) - grid.mode(l) - grid.mode(a))
    };
    if sigma.is_x_independent() {
        let a0 = grid.slot(0).expect("zero mode");
        return SymbolGrid::from_fn_uniform(grid, |k, l| match which {
            Which::First => sigma.at(0, partner(a0, k, l), l),
            Which::Second => sigma.at(0, k, partner(a0, k, l)),
        });
    }
    let hat = x_coefficients(sigma);
    let mut out = vec![ZERO; size * size * size];
    out.par_chunks_mut(size * size).enumerate().for_each(|(a, chunk)| {
        for k in 0..size {
            for l in 0..size {
                let p = partner(a, k, l);
                let (kk, ll) = match which {
                    Which::First => (p, l),
                    Which::Second => (k, p),
                };
                chunk[k * size + l] = hat[(a * size + kk) * size + ll];
            }
        }
    });
    from_x_coefficients(grid, &out)
}

/// `τ̂[(b·N) + ξ]`: x-coefficients of a linear symbol.
fn linear_x_coefficients(tau: &LinearSymbolGrid) -> Vec<Complex64> {
    let grid = *tau.grid();
    let size = grid.n_points();
    let mut out = vec![ZERO; size * size];
    for k in 0..size {
        let col: Vec<Complex64> = (0..size).map(|n| tau.at(n, k)).collect();
        for (b, c) in transform(&grid, &col).expect("length matches").into_iter().enumerate() {
            out[b * size + k] = c;
        }
    }
    out
}

/// `M[α][ξ] = τ̂([α − ξ], ξ)`: the action of `τ(x, D)` on Fourier coefficients.
fn coefficient_matrix(tau: &LinearSymbolGrid) -> Vec<Complex64> {
    let grid = *tau.grid();
    let size = grid.n_points();
    let hat = linear_x_coefficients(tau);
    let mut m = vec![ZERO; size * size];
    for a in 0..size {
        for k in 0..size {
            let b = grid.wrap_slot(grid.mode(a) - grid.mode(k));
            m[a * size + k] = hat[b * size + k];
        }
    }
    m
}

/// Symbol of `(f, g) ↦ T_σ(τ1(x, D) f, τ2(x, D) g)`.
pub fn compose_right_exact(
    sigma: &SymbolGrid,
    tau1: &LinearSymbolGrid,
    tau2: &LinearSymbolGrid,
) -> Result<SymbolGrid> {
    let grid = *sigma.grid();
    same_grid(&grid, tau1.grid())?;
    same_grid(&grid, tau2.grid())?;
    let size = grid.n_points();
    if tau1.is_x_independent() && tau2.is_x_independent() {
        let m = |n: usize, k: usize, l: usize| sigma.at(n, k, l) * tau1.at(0, k) * tau2.at(0, l);
        return Ok(if sigma.is_x_independent() {
            SymbolGrid::from_fn_uniform(grid, |k, l| m(0, k, l))
        } else {
            SymbolGrid::from_fn(grid, m)
        });
    }
    let (m1, m2) = (coefficient_matrix(tau1), coefficient_matrix(tau2));
    let roots = roots(size);
    let slices: Vec<Vec<Complex64>> = (0..size)
        .into_par_iter()
        .map(|n| {
            let s = sigma.slice(n);
            // S·B with B[β][η] = M2[β][η] e^{iβx}
            let mut sb = vec![ZERO; size * size];
            for a in 0..size {
                for b in 0..size {
                    let v = s[a * size + b] * phase(&roots, n, grid.mode(b));
                    if v == ZERO {
                        continue;
                    }
                    let row = &m2[b * size..(b + 1) * size];
                    for (acc, w) in sb[a * size..(a + 1) * size].iter_mut().zip(row) {
                        *acc += v * w;
                    }
                }
            }
            // Aᵀ·(S·B) with A[α][ξ] = M1[α][ξ] e^{iαx}
            let mut out = vec![ZERO; size * size];
            for a in 0..size {
                let pa = phase(&roots, n, grid.mode(a));
                let row = &sb[a * size..(a + 1) * size];
                for k in 0..size {
                    let v = m1[a * size + k] * pa;
                    if v == ZERO {
                        continue;
                    }
                    for (acc, w) in out[k * size..(k + 1) * size].iter_mut().zip(row) {
                        *acc += v * w;
                    }
                }
            }
            for k in 0..size {
                for l in 0..size {
                    out[k * size + l] *= phase(&roots, n, -grid.mode(k) - grid.mode(l));
                }
            }
            out
        })
        .collect();
    SymbolGrid::general(grid, slices.concat())
}

/// Symbol of `(f, g) ↦ τ(x, D) T_σ(f, g)`:
/// `Σ_a τ(x, [ξ + η + a]) σ̂(a, ξ, η) e^{iax}`.
pub fn compose_left_exact(tau: &LinearSymbolGrid, sigma: &SymbolGrid) -> Result<SymbolGrid> {
    let grid = *sigma.grid();
    same_grid(&grid, tau.grid())?;
    let size = grid.n_points();
    if sigma.is_x_independent() {
        let m = |n: usize, k: usize, l: usize| {
            tau.at_mode(n, grid.mode(k) + grid.mode(l)) * sigma.at(0, k, l)
        };
        return Ok(if tau.is_x_independent() {
            SymbolGrid::from_fn_uniform(grid, |k, l| m(0, k, l))
        } else {
            SymbolGrid::from_fn(grid, m)
        });
    }
    let hat = x_coefficients(sigma);
    let roots = roots(size);
    Ok(SymbolGrid::from_fn(grid, |n, k, l| {
        let s = grid.mode(k) + grid.mode(l);
        (0..size)
            .map(|a| {
                let am = grid.mode(a);
                tau.at_mode(n, s + am) * hat[(a * size + k) * size + l] * phase(&roots, n, am)
            })
            .sum()
    }))
}

/// Dense `N × N` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub grid: GridSpec,
    pub entries: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn at(&self, n: usize, m: usize) -> Complex64 {
        self.entries[n * self.grid.n_points() + m]
    }

    pub fn apply(&self, f: &SampledFunction) -> Result<SampledFunction> {
        same_grid(&self.grid, f.grid())?;
        let size = self.grid.n_points();
        let fs = f.samples();
        let out = (0..size)
            .map(|n| (0..size).map(|m| self.at(n, m) * fs[m]).sum())
            .collect();
        SampledFunction::from_samples(self.grid, out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let size = self.grid.n_points();
        let mut entries = vec![ZERO; size * size];
        for n in 0..size {
            for m in 0..size {
                entries[m * size + n] = self.at(n, m).conj();
            }
        }
        Self {
            grid: self.grid,
            entries,
        }
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        same_grid(&self.grid, &rhs.grid)?;
        let size = self.grid.n_points();
        let entries = (0..size * size)
            .into_par_iter()
            .map(|i| {
                let (n, m) = (i / size, i % size);
                (0..size).map(|j| self.at(n, j) * rhs.at(j, m)).sum()
            })
            .collect();
        Ok(Self {
            grid: self.grid,
            entries,
        })
    }

    /// `τ(x_n, ξ) = e^{−iξx_n} Σ_m M[n][m] e^{iξx_m}`.
    pub fn symbol(&self) -> LinearSymbolGrid {
        let grid = self.grid;
        let size = grid.n_points();
        let roots = roots(size);
        LinearSymbolGrid::from_fn(grid, |n, k| {
            let xi = grid.mode(k);
            let s: Complex64 = (0..size).map(|m| self.at(n, m) * phase(&roots, m, xi)).sum();
            s * phase(&roots, n, -xi)
        })
    }
}

/// `M[n][m] = (1/N) Σ_k τ(x_n, ξ_k) e^{iξ_k(x_n − x_m)}`.
pub fn operator_matrix(tau: &LinearSymbolGrid) -> OperatorMatrix {
    let grid = *tau.grid();
    let size = grid.n_points();
    let roots = roots(size);
    let inv = 1.0 / size as f64;
    let entries = (0..size * size)
        .into_par_iter()
        .map(|i| {
            let (n, m) = (i / size, i % size);
            let s: Complex64 = (0..size)
                .map(|k| {
                    let xi = grid.mode(k);
                    tau.at(n, k) * phase(&roots, (n + size - m) % size, xi)
                })
                .sum();
            s * inv
        })
        .collect();
    OperatorMatrix { grid, entries }
}

/// Symbol of the adjoint of `τ(x, D)` under `⟨u, v⟩ = Δx Σ u v̄`.
pub fn linear_adjoint_exact(tau: &LinearSymbolGrid) -> LinearSymbolGrid {
    operator_matrix(tau).adjoint().symbol()
}

/// Symbol of `τ1(x, D) ∘ τ2(x, D)`.
pub fn linear_compose_exact(
    tau1: &LinearSymbolGrid,
    tau2: &LinearSymbolGrid,
) -> Result<LinearSymbolGrid> {
    Ok(operator_matrix(tau1).compose(&operator_matrix(tau2))?.symbol())
}

/// `⟨u, v⟩ = Δx Σ u(x_n) v(x_n)`, no conjugation.
pub fn bilinear_pairing(u: &SampledFunction, v: &SampledFunction) -> Result<Complex64> {
    same_grid(u.grid(), v.grid())?;
    let s: Complex64 = u.samples().iter().zip(v.samples()).map(|(a, b)| a * b).sum();
    Ok(s * u.grid().dx())
}

/// Reads back the symbol of any bilinear operator from its action on pure
/// modes: `m(x, ξ, η) = e^{−i(ξ+η)x} T(e_ξ, e_η)(x)`.
pub fn extract_bilinear_symbol(
    op: impl Fn(&SampledFunction, &SampledFunction) -> Result<SampledFunction> + Sync,
    grid: &GridSpec,
) -> Result<SymbolGrid> {
    let grid = *grid;
    let size = grid.n_points();
    let roots = roots(size);
    let unit = |k: usize| {
        let mut spec = vec![ZERO; size];
        spec[k] = Complex64::new(1.0, 0.0);
        SampledFunction::from_spectrum(grid, spec)
    };
    let units: Vec<SampledFunction> = (0..size).map(unit).collect::<Result<_>>()?;
    let outputs: Vec<SampledFunction> = (0..size * size)
        .into_par_iter()
        .map(|i| op(&units[i / size], &units[i % size]))
        .collect::<Result<_>>()?;
    Ok(SymbolGrid::from_fn(grid, |n, k, l| {
        outputs[k * size + l].samples()[n] * phase(&roots, n, -grid.mode(k) - grid.mode(l))
    }))
}
