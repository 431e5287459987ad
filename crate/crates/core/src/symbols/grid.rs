use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::GridSpec;
use crate::symlang::{ComplexExpr, Point, Var};

use super::ClassSpec;

/// Tensor storage. `Uniform` holds an x-independent symbol once.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolData {
    /// `N²` values, index `k·N + l`.
    Uniform(Vec<Complex64>),
    /// `N³` values, index `(n·N + k)·N + l`.
    General(Vec<Complex64>),
}

/// `σ(x_n, α_k, β_l)` on the lattice; `k`, `l` are centered slots.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolGrid {
    grid: GridSpec,
    data: SymbolData,
    pub source: Option<ComplexExpr>,
    pub claimed_class: Option<ClassSpec>,
}

impl SymbolGrid {
    pub fn uniform(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        let n = grid.n_points();
        if values.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        Ok(Self {
            grid,
            data: SymbolData::Uniform(values),
            source: None,
            claimed_class: None,
        })
    }

    pub fn general(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        let n = grid.n_points();
        if values.len() != n * n * n {
            return Err(Error::LengthMismatch {
                expected: n * n * n,
                got: values.len(),
            });
        }
        Ok(Self {
            grid,
            data: SymbolData::General(values),
            source: None,
            claimed_class: None,
        })
    }

    /// Builds an x-independent grid from `f(k_slot, l_slot)`.
    pub fn from_fn_uniform(
        grid: GridSpec,
        f: impl Fn(usize, usize) -> Complex64 + Sync,
    ) -> Self {
        let n = grid.n_points();
        let values = (0..n * n).into_par_iter().map(|i| f(i / n, i % n)).collect();
        Self::uniform(grid, values).expect("size matches")
    }

    /// Builds a general grid from `f(n, k_slot, l_slot)`.
    pub fn from_fn(grid: GridSpec, f: impl Fn(usize, usize, usize) -> Complex64 + Sync) -> Self {
        let n = grid.n_points();
        let values = (0..n * n * n)
            .into_par_iter()
            .map(|i| f(i / (n * n), (i / n) % n, i % n))
            .collect();
        Self::general(grid, values).expect("size matches")
    }

    pub fn constant(grid: GridSpec, c: Complex64) -> Self {
        let n = grid.n_points();
        Self::uniform(grid, vec![c; n * n]).expect("size matches")
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn data(&self) -> &SymbolData {
        &self.data
    }

    pub fn is_x_independent(&self) -> bool {
        matches!(self.data, SymbolData::Uniform(_))
    }

    #[inline]
    pub fn at(&self, n: usize, k: usize, l: usize) -> Complex64 {
        let size = self.grid.n_points();
        match &self.data {
            SymbolData::Uniform(v) => v[k * size + l],
            SymbolData::General(v) => v[(n * size + k) * size + l],
        }
    }

    /// The `N × N` frequency slice at `x_n`.
    pub fn slice(&self, n: usize) -> &[Complex64] {
        let size = self.grid.n_points();
        match &self.data {
            SymbolData::Uniform(v) => v,
            SymbolData::General(v) => &v[n * size * size..(n + 1) * size * size],
        }
    }

    /// Value at integer modes `(xi, eta)`, wrapped onto the lattice.
    pub fn at_modes(&self, n: usize, xi: i64, eta: i64) -> Complex64 {
        self.at(n, self.grid.wrap_slot(xi), self.grid.wrap_slot(eta))
    }

    pub fn to_general(&self) -> SymbolGrid {
        match &self.data {
            SymbolData::General(_) => self.clone(),
            SymbolData::Uniform(v) => {
                let n = self.grid.n_points();
                let mut values = Vec::with_capacity(n * n * n);
                for _ in 0..n {
                    values.extend_from_slice(v);
                }
                SymbolGrid {
                    data: SymbolData::General(values),
                    ..self.clone()
                }
            }
        }
    }

    pub fn values(&self) -> &[Complex64] {
        match &self.data {
            SymbolData::Uniform(v) | SymbolData::General(v) => v,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|self − other|` over all lattice points where `keep(k, l)`
    /// holds for the integer modes.
    pub fn max_abs_diff_where(
        &self,
        other: &SymbolGrid,
        keep: impl Fn(i64, i64) -> bool,
    ) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let size = self.grid.n_points();
        let xs = if self.is_x_independent() && other.is_x_independent() {
            1
        } else {
            size
        };
        let mut worst = 0.0f64;
        for n in 0..xs {
            for k in 0..size {
                for l in 0..size {
                    if keep(self.grid.mode(k), self.grid.mode(l)) {
                        worst = worst.max((self.at(n, k, l) - other.at(n, k, l)).norm());
                    }
                }
            }
        }
        Ok(worst)
    }

    pub fn max_abs_where(&self, keep: impl Fn(i64, i64) -> bool) -> f64 {
        let size = self.grid.n_points();
        let xs = if self.is_x_independent() { 1 } else { size };
        let mut worst = 0.0f64;
        for n in 0..xs {
            for k in 0..size {
                for l in 0..size {
                    if keep(self.grid.mode(k), self.grid.mode(l)) {
                        worst = worst.max(self.at(n, k, l).norm());
                    }
                }
            }
        }
        worst
    }
}

/// `τ(x_n, ξ_k)` on the lattice, index `n·N + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSymbolGrid {
    grid: GridSpec,
    values: Vec<Complex64>,
    pub source: Option<ComplexExpr>,
}

impl LinearSymbolGrid {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        let n = grid.n_points();
        if values.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        Ok(Self {
            grid,
            values,
            source: None,
        })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let n = grid.n_points();
        let values = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::new(grid, values).expect("size matches")
    }

    pub fn constant(grid: GridSpec, c: Complex64) -> Self {
        Self::from_fn(grid, |_, _| c)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn at(&self, n: usize, k: usize) -> Complex64 {
        self.values[n * self.grid.n_points() + k]
    }

    pub fn at_mode(&self, n: usize, xi: i64) -> Complex64 {
        self.at(n, self.grid.wrap_slot(xi))
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_x_independent(&self) -> bool {
        let n = self.grid.n_points();
        (1..n).all(|r| self.values[r * n..(r + 1) * n] == self.values[..n])
    }

    pub fn max_abs_diff_where(
        &self,
        other: &LinearSymbolGrid,
        keep: impl Fn(i64) -> bool,
    ) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let size = self.grid.n_points();
        let mut worst = 0.0f64;
        for n in 0..size {
            for k in 0..size {
                if keep(self.grid.mode(k)) {
                    worst = worst.max((self.at(n, k) - other.at(n, k)).norm());
                }
            }
        }
        Ok(worst)
    }
}

fn check_vars(e: &ComplexExpr, allowed: &[Var], what: &str) -> Result<()> {
    for v in e.re.vars().into_iter().chain(e.im.vars()) {
        if !allowed.contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "{what} symbols may not use `{v}`"
            )));
        }
    }
    Ok(())
}

/// `tensor[n,k,l] = e(x_n, α_k, β_l)`. `xi`/`eta` are accepted as aliases of
/// `alpha`/`beta`.
pub fn sample_symbol(e: &ComplexExpr, grid: &GridSpec) -> Result<SymbolGrid> {
    check_vars(e, &[Var::X, Var::Alpha, Var::Beta, Var::Xi, Var::Eta], "bilinear")?;
    let n = grid.n_points();
    let freqs = grid.frequencies();
    let x_dep = e.depends_on(Var::X);
    let xs = if x_dep { n } else { 1 };
    let values: Vec<Complex64> = (0..xs * n * n)
        .into_par_iter()
        .map(|i| {
            let p = Point::bilinear(grid.x(i / (n * n)), freqs[(i / n) % n], freqs[i % n]);
            e.eval(&p)
        })
        .collect();
    if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        let p = Point::bilinear(grid.x(i / (n * n)), freqs[(i / n) % n], freqs[i % n]);
        return Err(Error::NonFinite {
            value: values[i].to_string(),
            point: format!("(x={}, alpha={}, beta={})", p.x, p.alpha, p.beta),
        });
    }
    let mut out = if x_dep {
        SymbolGrid::general(*grid, values)?
    } else {
        SymbolGrid::uniform(*grid, values)?
    };
    out.source = Some(e.clone());
    Ok(out)
}

/// `tensor[n,k] = e(x_n, ξ_k)`.
pub fn sample_linear_symbol(e: &ComplexExpr, grid: &GridSpec) -> Result<LinearSymbolGrid> {
    check_vars(e, &[Var::X, Var::Xi], "linear")?;
    let freqs = grid.frequencies();
    let n = grid.n_points();
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        for &xi in &freqs {
            let v = e.eval(&Point::linear(grid.x(i), xi));
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite {
                    value: v.to_string(),
                    point: format!("(x={}, xi={xi})", grid.x(i)),
                });
            }
            values.push(v);
        }
    }
    let mut out = LinearSymbolGrid::new(*grid, values)?;
    out.source = Some(e.clone());
    Ok(out)
}
