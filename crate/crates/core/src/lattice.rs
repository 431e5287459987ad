//! Uniform periodic grid, discrete Fourier transforms and sampled functions.
//!
//! See [`crate::convention`] for the normalization.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::convention;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n_points: usize,
    period: f64,
}

impl GridSpec {
    pub fn new(n_points: usize, period: f64) -> Result<Self> {
        if n_points % 2 != 0 {
            return Err(Error::InvalidGrid("n_points must be even".into()));
        }
        if n_points < 4 {
            return Err(Error::InvalidGrid(format!(
                "n_points must be at least 4, got {n_points}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "period must be positive, got {period}"
            )));
        }
        Ok(Self { n_points, period })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn dx(&self) -> f64 {
        self.period / self.n_points as f64
    }

    pub fn x(&self, n: usize) -> f64 {
        n as f64 * self.dx()
    }

    /// The Nyquist mode `-N/2`, the only lattice mode whose reflection leaves the lattice.
    pub fn nyquist(&self) -> i64 {
        -(self.n_points as i64 / 2)
    }

    pub fn min_mode(&self) -> i64 {
        self.nyquist()
    }

    pub fn max_mode(&self) -> i64 {
        self.n_points as i64 / 2 - 1
    }

    pub fn contains(&self, k: i64) -> bool {
        k >= self.min_mode() && k <= self.max_mode()
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        self.min_mode()..=self.max_mode()
    }

    /// Centered slot of mode `k`.
    pub fn slot(&self, k: i64) -> Option<usize> {
        self.contains(k).then(|| (k - self.min_mode()) as usize)
    }

    pub fn mode(&self, slot: usize) -> i64 {
        slot as i64 + self.min_mode()
    }

    /// Reduces an integer frequency modulo `N` onto the lattice.
    pub fn wrap(&self, k: i64) -> i64 {
        let n = self.n_points as i64;
        (k - self.min_mode()).rem_euclid(n) + self.min_mode()
    }

    /// Centered slot of `k mod N`.
    pub fn wrap_slot(&self, k: i64) -> usize {
        (k - self.min_mode()).rem_euclid(self.n_points as i64) as usize
    }

    pub fn frequency_unit(&self) -> f64 {
        convention::frequency_unit(self.period)
    }

    /// Physical frequency of mode `k`.
    pub fn frequency(&self, k: i64) -> f64 {
        k as f64 * self.frequency_unit()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes().map(|k| self.frequency(k)).collect()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|n| self.x(n)).collect()
    }

    /// `e^{i ξ_k x_n}`, computed from the exact integer phase `k n mod N`.
    pub fn phase(&self, n: usize, k: i64) -> Complex64 {
        let nn = self.n_points as i64;
        let r = (k * n as i64).rem_euclid(nn);
        Complex64::from_polar(1.0, 2.0 * PI * r as f64 / nn as f64)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_points {
            return Err(Error::LengthMismatch {
                expected: self.n_points,
                got: len,
            });
        }
        Ok(())
    }
}

pub fn make_grid(n_points: usize, period: f64) -> Result<GridSpec> {
    GridSpec::new(n_points, period)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn fft_plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Samples to centered spectrum.
pub fn transform(grid: &GridSpec, samples: &[Complex64]) -> Result<Vec<Complex64>> {
    grid.check_len(samples.len())?;
    let n = grid.n_points;
    let mut buf = samples.to_vec();
    fft_plan(n, false).process(&mut buf);
    let scale = 1.0 / n as f64;
    let half = n / 2;
    // fft slot j holds mode j (j < N/2) or j - N (j >= N/2)
    Ok((0..n).map(|c| buf[(c + half) % n] * scale).collect())
}

/// Centered spectrum to samples.
pub fn inverse_transform(grid: &GridSpec, spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    grid.check_len(spectrum.len())?;
    let n = grid.n_points;
    let half = n / 2;
    let mut buf: Vec<Complex64> = (0..n).map(|j| spectrum[(j + half) % n]).collect();
    fft_plan(n, true).process(&mut buf);
    Ok(buf)
}

/// Complex samples of a periodic function together with their spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    grid: GridSpec,
    samples: Vec<Complex64>,
    spectrum: Vec<Complex64>,
}

impl SampledFunction {
    pub fn from_samples(grid: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        let spectrum = transform(&grid, &samples)?;
        Ok(Self {
            grid,
            samples,
            spectrum,
        })
    }

    pub fn from_spectrum(grid: GridSpec, spectrum: Vec<Complex64>) -> Result<Self> {
        let samples = inverse_transform(&grid, &spectrum)?;
        Ok(Self {
            grid,
            samples,
            spectrum,
        })
    }

    pub fn from_real(grid: GridSpec, samples: &[f64]) -> Result<Self> {
        Self::from_samples(grid, samples.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = (0..grid.n_points).map(|n| f(grid.x(n))).collect();
        Self::from_samples(grid, samples).expect("length matches grid")
    }

    pub fn zeros(grid: GridSpec) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); grid.n_points];
        Self {
            grid,
            samples: z.clone(),
            spectrum: z,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }

    /// Coefficient of mode `k`, zero off the lattice.
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.grid
            .slot(k)
            .map(|s| self.spectrum[s])
            .unwrap_or_default()
    }

    /// Largest `|k|` carrying a coefficient above `tol · max |c|`.
    pub fn bandwidth(&self, tol: f64) -> i64 {
        let peak = self.spectrum.iter().map(|c| c.norm()).fold(0.0, f64::max);
        self.grid
            .modes()
            .filter(|&k| self.coeff(k).norm() > tol * peak)
            .map(i64::abs)
            .max()
            .unwrap_or(0)
    }

    pub fn map_spectrum(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        let spectrum = self
            .spectrum
            .iter()
            .enumerate()
            .map(|(s, &c)| f(self.grid.mode(s), c))
            .collect();
        Self::from_spectrum(self.grid, spectrum).expect("length matches grid")
    }

    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        Self::from_samples(self.grid, samples)
    }

    pub fn pointwise_product(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&u, &v)| u * v)
            .collect();
        Self::from_samples(self.grid, samples)
    }

    /// Spectral derivative `D f = f'`.
    pub fn derivative(&self) -> Self {
        let grid = self.grid;
        self.map_spectrum(|k, c| c * Complex64::new(0.0, grid.frequency(k)))
    }

    /// Largest absolute sample difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|u| u.norm()).fold(0.0, f64::max)
    }
}

pub fn from_fourier_coeffs(
    grid: GridSpec,
    coeffs: &BTreeMap<i64, Complex64>,
) -> Result<SampledFunction> {
    let mut spectrum = vec![Complex64::new(0.0, 0.0); grid.n_points];
    for (&k, &c) in coeffs {
        let slot = grid.slot(k).ok_or(Error::OffLattice {
            mode: k,
            lo: grid.min_mode(),
            hi: grid.max_mode(),
        })?;
        spectrum[slot] = c;
    }
    SampledFunction::from_spectrum(grid, spectrum)
}
