use rayon::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{adjoint_exact, adjoint_expansion, Which};
use crate::error::{Error, Result};
use crate::lattice::{GridSpec, SampledFunction};
use crate::norms::sobolev_norm;
use crate::quantize::apply_bilinear;
use crate::report::{Check, Report, SCHEMA_VERSION};
use crate::symbols::{builtin, m_plus, sample_symbol, ClassSpec, SymbolGrid};
use crate::symlang::{ComplexExpr, SymbolExpr, Var};
use crate::tolerances::{DENOMINATOR_FLOOR, GROWTH_FACTOR, REMAINDER_NOISE_FLOOR};

use super::Ensemble;

/// `(p, q, r, s, ε)` with `1/r = 1/p + 1/q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub epsilon: f64,
}

impl Exponents {
    /// Requires `1 < p, q <= ∞`, `r > 2/3`, `s >= 0`, `ε >= 0`.
    pub fn new(p: f64, q: f64, s: f64, epsilon: f64) -> Result<Self> {
        if !(p > 1.0 && q > 1.0) {
            return Err(Error::InvalidExponent(format!("need 1 < p, q <= inf, got p={p}, q={q}")));
        }
        let inv = 1.0 / p + 1.0 / q;
        if !(inv < 1.5) {
            return Err(Error::InvalidExponent(format!("1/r = {inv} must be below 3/2")));
        }
        if !(s >= 0.0 && epsilon >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need s >= 0 and epsilon >= 0, got s={s}, epsilon={epsilon}"
            )));
        }
        let r = if inv == 0.0 { f64::INFINITY } else { 1.0 / inv };
        Ok(Self { p, q, r, s, epsilon })
    }

    /// As [`Exponents::new`] with an explicit `r`, which must satisfy the relation.
    pub fn with_r(p: f64, q: f64, r: f64, s: f64, epsilon: f64) -> Result<Self> {
        let e = Self::new(p, q, s, epsilon)?;
        if (1.0 / e.r - 1.0 / r).abs() > 1e-12 {
            return Err(Error::InvalidExponent(format!(
                "1/r must equal 1/p + 1/q: got r={r}, expected {}",
                e.r
            )));
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRatio {
    pub n_points: usize,
    pub trial: usize,
    pub seed: u64,
    /// `0` for skipped trials.
    pub ratio: f64,
    pub skipped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub n_points: usize,
    pub max: f64,
    pub median: f64,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub schema_version: u32,
    pub exponents: Exponents,
    pub m1: f64,
    pub m2: f64,
    pub ensemble: Ensemble,
    pub grids: Vec<usize>,
    pub trials: Vec<TrialRatio>,
    pub summaries: Vec<GridSummary>,
    /// `max(finest) / max(coarsest)`.
    pub growth_factor: f64,
    pub pass: bool,
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `‖T_σ(f,g)‖_{W^{s,r}} / (‖f‖_{W^{s+ε+(m1)+,p}} ‖g‖_{W^{s+ε+(m2)+,q}})`, or
/// `None` when the denominator is below `DENOMINATOR_FLOOR`.
pub fn boundedness_ratio(
    sigma: &SymbolGrid,
    (m1, m2): (f64, f64),
    e: &Exponents,
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<Option<f64>> {
    let den = sobolev_norm(f, e.s + e.epsilon + m_plus(m1), e.p)?
        * sobolev_norm(g, e.s + e.epsilon + m_plus(m2), e.q)?;
    if !(den >= DENOMINATOR_FLOOR) {
        return Ok(None);
    }
    Ok(Some(sobolev_norm(&apply_bilinear(sigma, f, g)?, e.s, e.r)? / den))
}

fn trial_ratios(
    sigma: &SymbolGrid,
    orders: (f64, f64),
    e: &Exponents,
    ensemble: &Ensemble,
) -> Result<Vec<TrialRatio>> {
    let grid = *sigma.grid();
    ensemble.check_grid(&grid)?;
    (0..ensemble.count)
        .into_par_iter()
        .map(|trial| {
            let (f, g) = ensemble.pair(&grid, trial)?;
            let ratio = boundedness_ratio(sigma, orders, e, &f, &g)?;
            Ok(TrialRatio {
                n_points: grid.n_points(),
                trial,
                seed: ensemble.trial_seed(trial),
                ratio: ratio.unwrap_or(0.0),
                skipped: ratio.is_none(),
            })
        })
        .collect()
}

/// Ratio study without the `ε > 0` precondition.
fn ratio_study(
    sigma: &ComplexExpr,
    orders: (f64, f64),
    e: &Exponents,
    ensemble: &Ensemble,
    grids: &[GridSpec],
) -> Result<RatioReport> {
    if grids.is_empty() {
        return Err(Error::InvalidParameter("at least one grid is required".into()));
    }
    let mut trials = Vec::new();
    let mut summaries = Vec::new();
    for grid in grids {
        let s = sample_symbol(sigma, grid)?;
        let t = trial_ratios(&s, orders, e, ensemble)?;
        let kept: Vec<f64> = t.iter().filter(|r| !r.skipped).map(|r| r.ratio).collect();
        summaries.push(GridSummary {
            n_points: grid.n_points(),
            max: kept.iter().copied().fold(0.0, f64::max),
            median: median(kept),
            skipped: t.iter().filter(|r| r.skipped).count(),
        });
        trials.extend(t);
    }
    let (first, last) = (summaries[0].max, summaries[summaries.len() - 1].max);
    let growth_factor = if first == 0.0 && last == 0.0 { 1.0 } else { last / first };
    Ok(RatioReport {
        schema_version: SCHEMA_VERSION,
        exponents: *e,
        m1: orders.0,
        m2: orders.1,
        ensemble: *ensemble,
        grids: grids.iter().map(|g| g.n_points()).collect(),
        trials,
        summaries,
        growth_factor,
        pass: growth_factor < GROWTH_FACTOR,
    })
}

/// Empirical boundedness ratios of `T_σ` on an ensemble, per grid, and their
/// growth under refinement. Grids should be listed coarse to fine.
pub fn boundedness_study(
    sigma: &ComplexExpr,
    spec: &ClassSpec,
    e: &Exponents,
    ensemble: &Ensemble,
    grids: &[GridSpec],
) -> Result<RatioReport> {
    if !(e.epsilon > 0.0) {
        return Err(Error::InvalidParameter("boundedness_study needs epsilon > 0".into()));
    }
    ratio_study(sigma, (spec.m1, spec.m2), e, ensemble, grids)
}

/// Records the max ratio at each `ε` and grid, and its growth under
/// refinement, for the Ω-weighted θ-line symbol or the unweighted
/// Marcinkiewicz product `atan(α) atan(β)`. Observational: every check passes.
pub fn epsilon_necessity_probe(
    weighted: bool,
    epsilons: &[f64],
    grids: &[GridSpec],
    ensemble: &Ensemble,
) -> Result<Report> {
    let sigma = if weighted {
        builtin::omega_weighted(std::f64::consts::FRAC_PI_3)?
    } else {
        let u = SymbolExpr::atan(SymbolExpr::var(Var::Xi));
        builtin::marcinkiewicz_product(&u, &u)
    };
    let sigma = ComplexExpr::real(sigma);
    let kind = if weighted {
        "epsilon_probe_weighted"
    } else {
        "epsilon_probe_unweighted"
    };
    let mut report = Report::new(kind, grids.first().copied(), Some(ensemble.seed));
    for &eps in epsilons {
        let e = Exponents::new(4.0, 4.0, 0.0, eps)?;
        let r = ratio_study(&sigma, (0.0, 0.0), &e, ensemble, grids)?;
        for s in &r.summaries {
            report.push(Check::observation(format!("max_ratio eps={eps} n={}", s.n_points), s.max));
        }
        report.push(Check::observation(format!("growth_factor eps={eps}"), r.growth_factor));
    }
    Ok(report)
}

/// `max ‖fg‖_{W^{m,r}} / (‖f‖_{W^{m+,p}} ‖g‖_{W^{m+,q}})` over the ensemble.
pub fn holder_constant(m: f64, e: &Exponents, ensemble: &Ensemble, grid: &GridSpec) -> Result<f64> {
    ensemble.check_grid(grid)?;
    let mp = m_plus(m);
    let ratios: Vec<f64> = (0..ensemble.count)
        .into_par_iter()
        .map(|trial| {
            let (f, g) = ensemble.pair(grid, trial)?;
            let den = sobolev_norm(&f, mp, e.p)? * sobolev_norm(&g, mp, e.q)?;
            if !(den >= DENOMINATOR_FLOOR) {
                return Ok(0.0);
            }
            Ok(sobolev_norm(&f.pointwise_product(&g)?, m, e.r)? / den)
        })
        .collect::<Result<_>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

/// Counts violations of `(1+|u−v|)^s <= (1+|u|)^{|s|} (1+|v|)^s` over seeded
/// samples with `|s| <= s_max`, `|u|, |v| <= uv_max`.
pub fn peetre_violations(seed: u64, count: usize, s_max: f64, uv_max: f64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .filter(|_| {
            let s = rng.random_range(-s_max..=s_max);
            let u = rng.random_range(-uv_max..=uv_max);
            let v = rng.random_range(-uv_max..=uv_max);
            let lhs = (1.0 + (u - v).abs()).powf(s);
            let rhs = (1.0 + u.abs()).powf(s.abs()) * (1.0 + v.abs()).powf(s);
            !(lhs <= rhs)
        })
        .count()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemainderFit {
    pub n_terms: u32,
    /// `|ξ + η|` along the ray.
    pub abscissae: Vec<f64>,
    /// `max_x |exact − series|` at each abscissa.
    pub remainders: Vec<f64>,
    pub slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemainderSlopeReport {
    pub schema_version: u32,
    pub symbol: String,
    pub n_points: usize,
    pub fits: [RemainderFit; 2],
    /// `slope(N + 1) − slope(N)`.
    pub slope_difference: f64,
    /// Ray points discarded because a remainder fell below the noise floor.
    pub discarded: usize,
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Log-log slopes of the first-adjoint remainder `exact − series(N)` for
/// `N = n_terms` and `n_terms + 1`, along the ray `η = 0`, `ξ = 2, …, N/4`
/// (lattice modes). Ray points where either remainder is below
/// `REMAINDER_NOISE_FLOOR · max |exact|` are dropped.
pub fn remainder_slope(sigma: &ComplexExpr, grid: &GridSpec, n_terms: u32) -> Result<RemainderSlopeReport> {
    let exact = adjoint_exact(&sample_symbol(sigma, grid)?, Which::First);
    let floor = REMAINDER_NOISE_FLOOR * exact.max_abs();
    let size = grid.n_points();
    let eta = grid.slot(0).expect("zero mode");
    let ray: Vec<i64> = (2..=(size as i64) / 4).collect();
    let mut rem = Vec::new();
    for n in [n_terms, n_terms + 1] {
        let series = adjoint_expansion(sigma, Which::First, n)?.sample(grid)?;
        let r: Vec<f64> = ray
            .iter()
            .map(|&k| {
                let slot = grid.slot(k).expect("ray inside lattice");
                (0..size)
                    .map(|x| (exact.at(x, slot, eta) - series.at(x, slot, eta)).norm())
                    .fold(0.0, f64::max)
            })
            .collect();
        rem.push(r);
    }
    let keep: Vec<usize> = (0..ray.len())
        .filter(|&i| rem[0][i] > floor && rem[1][i] > floor)
        .collect();
    if keep.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "only {} ray points above the noise floor {floor:e}",
            keep.len()
        )));
    }
    let xs: Vec<f64> = keep.iter().map(|&i| grid.frequency(ray[i]).abs()).collect();
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let fit = |j: usize, n: u32| {
        let r: Vec<f64> = keep.iter().map(|&i| rem[j][i]).collect();
        let ly: Vec<f64> = r.iter().map(|v| v.ln()).collect();
        RemainderFit {
            n_terms: n,
            abscissae: xs.clone(),
            slope: least_squares_slope(&lx, &ly),
            remainders: r,
        }
    };
    let fits = [fit(0, n_terms), fit(1, n_terms + 1)];
    Ok(RemainderSlopeReport {
        schema_version: SCHEMA_VERSION,
        symbol: sigma.to_string(),
        n_points: size,
        slope_difference: fits[1].slope - fits[0].slope,
        fits,
        discarded: ray.len() - keep.len(),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::lattice::make_grid;
    use crate::symlang::parse_complex;

    #[test]
    fn exponent_relation() {
        let e = Exponents::new(4.0, 4.0, 0.0, 0.1).unwrap();
        assert!((e.r - 2.0).abs() < 1e-15);
        assert!(Exponents::new(1.0, 4.0, 0.0, 0.1).is_err());
        assert!(Exponents::new(1.2, 1.2, 0.0, 0.1).is_err());
        assert!(Exponents::with_r(4.0, 4.0, 3.0, 0.0, 0.1).is_err());
        let inf = Exponents::new(f64::INFINITY, f64::INFINITY, 0.0, 0.1).unwrap();
        assert!(inf.r.is_infinite());
    }

    #[test]
    fn product_ratio_is_holder_ratio() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let ens = Ensemble::new(3, 8, 7).unwrap();
        let e = Exponents::new(4.0, 4.0, 0.0, 0.0).unwrap();
        let r = ratio_study(&parse_complex("1").unwrap(), (0.0, 0.0), &e, &ens, &[g]).unwrap();
        let c = holder_constant(0.0, &e, &ens, &g).unwrap();
        assert!((r.summaries[0].max - c).abs() <= 1e-12 * c);
        assert!(c <= 1.0 + 1e-12);
    }

    #[test]
    fn zero_input_is_skipped() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let e = Exponents::new(4.0, 4.0, 0.0, 0.1).unwrap();
        let one = sample_symbol(&parse_complex("1").unwrap(), &g).unwrap();
        let zero = SampledFunction::zeros(g);
        let f = SampledFunction::from_fn(g, |x| num_complex::Complex64::new(x.cos(), 0.0));
        assert_eq!(boundedness_ratio(&one, (0.0, 0.0), &e, &zero, &f).unwrap(), None);
        assert!(boundedness_ratio(&one, (0.0, 0.0), &e, &f, &f).unwrap().unwrap() > 0.0);
    }

    #[test]
    fn peetre_holds() {
        assert_eq!(peetre_violations(11, 2000, 5.0, 100.0), 0);
    }
}
