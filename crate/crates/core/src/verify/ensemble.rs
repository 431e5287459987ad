use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{from_fourier_coeffs, GridSpec, SampledFunction};
use crate::quantize::{phase, roots};
use crate::symbols::SymbolGrid;

/// Seeded band-limited test functions.
///
/// Coefficients are drawn for modes `−bandwidth..=bandwidth` only, so the same
/// seed gives the same trigonometric polynomial on every grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ensemble {
    pub seed: u64,
    pub count: usize,
    pub bandwidth: i64,
}

/// Unit-variance complex Gaussian.
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

pub fn random_function(grid: &GridSpec, bandwidth: i64, rng: &mut impl Rng) -> Result<SampledFunction> {
    let coeffs: BTreeMap<i64, Complex64> =
        (-bandwidth..=bandwidth).map(|k| (k, complex_gaussian(rng))).collect();
    from_fourier_coeffs(*grid, &coeffs)
}

impl Ensemble {
    pub fn new(seed: u64, count: usize, bandwidth: i64) -> Result<Self> {
        if bandwidth < 0 {
            return Err(Error::InvalidParameter("bandwidth must be non-negative".into()));
        }
        Ok(Self {
            seed,
            count,
            bandwidth,
        })
    }

    /// The largest bandwidth allowed on `grid`.
    pub fn default_bandwidth(grid: &GridSpec) -> i64 {
        (grid.n_points() as i64 - 1) / 4
    }

    pub fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        if 4 * self.bandwidth >= grid.n_points() as i64 {
            return Err(Error::InvalidParameter(format!(
                "bandwidth {} must be below n_points/4 = {}",
                self.bandwidth,
                grid.n_points() / 4
            )));
        }
        Ok(())
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed ^ trial as u64
    }

    /// `count` functions for one trial, drawn in order from the trial stream.
    pub fn functions(&self, grid: &GridSpec, trial: usize, count: usize) -> Result<Vec<SampledFunction>> {
        self.check_grid(grid)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.trial_seed(trial));
        (0..count)
            .map(|_| random_function(grid, self.bandwidth, &mut rng))
            .collect()
    }

    pub fn pair(&self, grid: &GridSpec, trial: usize) -> Result<(SampledFunction, SampledFunction)> {
        let mut v = self.functions(grid, trial, 2)?;
        let g = v.pop().expect("two functions");
        let f = v.pop().expect("two functions");
        Ok((f, g))
    }

    pub fn triple(
        &self,
        grid: &GridSpec,
        trial: usize,
    ) -> Result<(SampledFunction, SampledFunction, SampledFunction)> {
        let mut v = self.functions(grid, trial, 3)?.into_iter();
        let (f, g, h) = (v.next(), v.next(), v.next());
        Ok((f.expect("f"), g.expect("g"), h.expect("h")))
    }
}

/// `σ(x, α_k, β_l) = Σ_{|a| <= bandwidth} c(a, k, l) e^{iax}` with
/// unit-variance complex Gaussian `c`.
pub fn random_symbol(grid: &GridSpec, bandwidth: i64, seed: u64) -> Result<SymbolGrid> {
    let size = grid.n_points();
    if 2 * bandwidth >= size as i64 {
        return Err(Error::InvalidParameter("symbol bandwidth must be below n_points/2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = (2 * bandwidth + 1) as usize;
    let coeffs: Vec<Complex64> = (0..width * size * size)
        .map(|_| complex_gaussian(&mut rng))
        .collect();
    let roots = roots(size);
    Ok(SymbolGrid::from_fn(*grid, |n, k, l| {
        (0..width)
            .map(|j| {
                let a = j as i64 - bandwidth;
                coeffs[(j * size + k) * size + l] * phase(&roots, n, a)
            })
            .sum()
    }))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::lattice::make_grid;

    #[test]
    fn reproducible_and_grid_independent() {
        let e = Ensemble::new(7, 4, 3).unwrap();
        let g16 = make_grid(16, 2.0 * PI).unwrap();
        let g32 = make_grid(32, 2.0 * PI).unwrap();
        let (a, _) = e.pair(&g16, 2).unwrap();
        let (b, _) = e.pair(&g16, 2).unwrap();
        assert_eq!(a, b);
        let (c, _) = e.pair(&g32, 2).unwrap();
        for k in -3..=3 {
            assert!((a.coeff(k) - c.coeff(k)).norm() < 1e-14);
        }
        assert_eq!(c.bandwidth(1e-12), 3);
        assert!(Ensemble::new(1, 1, 4).unwrap().check_grid(&g16).is_err());
    }

    #[test]
    fn random_symbol_band() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let s = random_symbol(&g, 2, 42).unwrap();
        assert!(!s.is_x_independent());
        let again = random_symbol(&g, 2, 42).unwrap();
        assert_eq!(s, again);
    }
}
