//! Truncated asymptotic expansions, built symbolically.
//!
//! Every term is `c · e` with `c = i^p / d` kept exact and `e` a derivative
//! of the inputs in the variables `(x, xi, eta)` (bilinear) or `(x, xi)`
//! (linear). Bilinear input symbols are written in `(x, alpha, beta)`,
//! linear ones in `(x, xi)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::GridSpec;
use crate::symbols::{sample_linear_symbol, sample_symbol, ClassSpec, LinearSymbolGrid, SymbolGrid};
use crate::symlang::{ComplexExpr, Point, SymbolExpr, Var};

use super::duality::{duality_class_map, Which};

/// `i^{i_power} / denominator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCoeff {
    pub i_power: u8,
    pub denominator: u128,
}

fn factorial(k: u32) -> u128 {
    (1..=k as u128).product()
}

impl ExactCoeff {
    /// `i^k / k!`.
    pub fn i_over_factorial(k: u32) -> Self {
        Self {
            i_power: (k % 4) as u8,
            denominator: factorial(k),
        }
    }

    /// `(−i)^k / k!`.
    pub fn minus_i_over_factorial(k: u32) -> Self {
        Self {
            i_power: ((3 * k) % 4) as u8,
            denominator: factorial(k),
        }
    }

    pub fn times(self, o: Self) -> Self {
        Self {
            i_power: (self.i_power + o.i_power) % 4,
            denominator: self.denominator * o.denominator,
        }
    }

    pub fn value(self) -> Complex64 {
        let unit = match self.i_power {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        unit / self.denominator as f64
    }
}

impl std::fmt::Display for ExactCoeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let unit = ["1", "1i", "-1", "-1i"][self.i_power as usize];
        if self.denominator == 1 {
            write!(f, "{unit}")
        } else {
            write!(f, "{unit}/{}", self.denominator)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionKind {
    Adjoint1,
    Adjoint2,
    ComposeRight,
    ComposeLeft,
    LinearAdjoint,
    LinearCompose,
}

impl ExpansionKind {
    pub fn is_bilinear(self) -> bool {
        !matches!(self, ExpansionKind::LinearAdjoint | ExpansionKind::LinearCompose)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    /// `[k]`, or `[k, j]` for the right composition.
    pub orders: Vec<u32>,
    pub coeff: ExactCoeff,
    pub expr: ComplexExpr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSeries {
    pub which: ExpansionKind,
    /// Truncation orders: `[N]`, or `[N, P]` for the right composition.
    pub orders: Vec<u32>,
    /// Identically vanishing terms are dropped.
    pub terms: Vec<ExpansionTerm>,
    /// Set by [`ExpansionSeries::with_remainder_class`].
    pub remainder_class: Option<ClassSpec>,
}

impl ExpansionSeries {
    /// Class of `exact − series` for an input symbol in `input`. `t` holds the
    /// orders of the linear symbols: `[t1, t2]` for the right composition,
    /// `[t]` for the left one, ignored otherwise.
    pub fn remainder_for(&self, input: &ClassSpec, t: &[f64]) -> Result<ClassSpec> {
        let n = self.orders[0] as f64;
        let need = |len: usize| {
            if t.len() < len {
                Err(Error::InvalidParameter(format!(
                    "expected {len} linear symbol orders, got {}",
                    t.len()
                )))
            } else {
                Ok(())
            }
        };
        match self.which {
            ExpansionKind::Adjoint1 => {
                let c = duality_class_map(input, Which::First)?;
                Ok(ClassSpec { m1: c.m1 - n, ..c })
            }
            ExpansionKind::Adjoint2 => {
                let c = duality_class_map(input, Which::Second)?;
                Ok(ClassSpec { m2: c.m2 - n, ..c })
            }
            ExpansionKind::ComposeRight => {
                need(2)?;
                let p = self.orders[1] as f64;
                Ok(ClassSpec {
                    m1: input.m1 + t[0] - n,
                    m2: input.m2 + t[1] - p,
                    ..*input
                })
            }
            ExpansionKind::ComposeLeft => {
                need(1)?;
                Ok(ClassSpec {
                    m1: input.m1 + t[0] - n,
                    m2: input.m2 - n,
                    ..*input
                })
            }
            ExpansionKind::LinearAdjoint | ExpansionKind::LinearCompose => Err(
                Error::InvalidParameter("linear expansions carry no bilinear class".into()),
            ),
        }
    }

    pub fn with_remainder_class(mut self, input: &ClassSpec, t: &[f64]) -> Result<Self> {
        self.remainder_class = Some(self.remainder_for(input, t)?);
        Ok(self)
    }

    pub fn eval(&self, p: &Point) -> Complex64 {
        self.terms.iter().map(|t| t.coeff.value() * t.expr.eval(p)).sum()
    }

    /// The truncated series as one expression.
    pub fn total(&self) -> ComplexExpr {
        self.terms.iter().fold(ComplexExpr::real(SymbolExpr::zero()), |acc, t| {
            let c = t.expr.times_i_pow(t.coeff.i_power as u32);
            let c = if t.coeff.denominator == 1 {
                c
            } else {
                c.scale(1.0 / t.coeff.denominator as f64)
            };
            acc.add(c)
        })
    }

    pub fn sample(&self, grid: &GridSpec) -> Result<SymbolGrid> {
        if !self.which.is_bilinear() {
            return Err(Error::InvalidParameter("linear series: use sample_linear".into()));
        }
        sample_symbol(&self.total(), grid)
    }

    pub fn sample_linear(&self, grid: &GridSpec) -> Result<LinearSymbolGrid> {
        if self.which.is_bilinear() {
            return Err(Error::InvalidParameter("bilinear series: use sample".into()));
        }
        sample_linear_symbol(&self.total(), grid)
    }
}

fn check_vars(e: &ComplexExpr, allowed: &[Var], what: &str) -> Result<()> {
    for v in e.re.vars().into_iter().chain(e.im.vars()) {
        if !allowed.contains(&v) {
            let names: Vec<&str> = allowed.iter().map(|v| v.name()).collect();
            return Err(Error::InvalidParameter(format!(
                "{what} must be written in ({}), found `{v}`",
                names.join(", ")
            )));
        }
    }
    Ok(())
}

fn check_bilinear(e: &ComplexExpr) -> Result<()> {
    check_vars(e, &[Var::X, Var::Alpha, Var::Beta], "bilinear symbol")
}

fn check_linear(e: &ComplexExpr) -> Result<()> {
    check_vars(e, &[Var::X, Var::Xi], "linear symbol")
}

fn v(var: Var) -> SymbolExpr {
    SymbolExpr::var(var)
}

/// `(alpha, beta) → (xi, eta)`.
fn to_output(e: &ComplexExpr) -> ComplexExpr {
    e.substitute_all(&[(Var::Alpha, v(Var::Xi)), (Var::Beta, v(Var::Eta))])
}

fn is_zero(e: &ComplexExpr) -> bool {
    e.re.is_zero() && e.im.is_zero()
}

fn push(terms: &mut Vec<ExpansionTerm>, orders: Vec<u32>, coeff: ExactCoeff, expr: ComplexExpr) {
    if !is_zero(&expr) {
        terms.push(ExpansionTerm { orders, coeff, expr });
    }
}

fn check_order(n: u32) -> Result<()> {
    // 34! overflows u128
    if n > 30 {
        return Err(Error::InvalidParameter(format!("expansion order {n} exceeds 30")));
    }
    Ok(())
}

/// `σ*1 ≈ Σ_{k<N} (i^k/k!) ∂_x^k ∂_α^k σ |_(α, β) = (−ξ−η, η)` and
/// `σ*2 ≈ Σ_{k<N} (i^k/k!) ∂_x^k ∂_β^k σ |_(α, β) = (ξ, −ξ−η)`.
pub fn adjoint_expansion(sigma: &ComplexExpr, which: Which, n: u32) -> Result<ExpansionSeries> {
    check_bilinear(sigma)?;
    check_order(n)?;
    let minus_sum = SymbolExpr::neg(SymbolExpr::add(v(Var::Xi), v(Var::Eta)));
    let (slot, subs) = match which {
        Which::First => (Var::Alpha, [(Var::Alpha, minus_sum), (Var::Beta, v(Var::Eta))]),
        Which::Second => (Var::Beta, [(Var::Alpha, v(Var::Xi)), (Var::Beta, minus_sum)]),
    };
    let mut terms = Vec::new();
    for k in 0..n {
        let d = sigma.differentiate(Var::X, k).differentiate(slot, k);
        push(&mut terms, vec![k], ExactCoeff::i_over_factorial(k), d.substitute_all(&subs));
    }
    Ok(ExpansionSeries {
        which: match which {
            Which::First => ExpansionKind::Adjoint1,
            Which::Second => ExpansionKind::Adjoint2,
        },
        orders: vec![n],
        terms,
        remainder_class: None,
    })
}

/// `Σ_{k ≤ N, j ≤ P} ((−i)^{k+j}/(k! j!)) ∂_x^k τ1(x, ξ) ∂_x^j τ2(x, η) ∂_ξ^k ∂_η^j σ`.
pub fn compose_right_expansion(
    sigma: &ComplexExpr,
    tau1: &ComplexExpr,
    tau2: &ComplexExpr,
    n: u32,
    p: u32,
) -> Result<ExpansionSeries> {
    check_bilinear(sigma)?;
    check_linear(tau1)?;
    check_linear(tau2)?;
    check_order(n)?;
    check_order(p)?;
    let tau2 = tau2.substitute_all(&[(Var::Xi, v(Var::Eta))]);
    let mut terms = Vec::new();
    for k in 0..=n {
        let t1 = tau1.differentiate(Var::X, k);
        if is_zero(&t1) {
            continue;
        }
        let sk = sigma.differentiate(Var::Alpha, k);
        for j in 0..=p {
            let t2 = tau2.differentiate(Var::X, j);
            if is_zero(&t2) {
                continue;
            }
            let s = to_output(&sk.differentiate(Var::Beta, j));
            let coeff = ExactCoeff::minus_i_over_factorial(k)
                .times(ExactCoeff::minus_i_over_factorial(j));
            push(&mut terms, vec![k, j], coeff, t1.clone().mul(t2).mul(s));
        }
    }
    Ok(ExpansionSeries {
        which: ExpansionKind::ComposeRight,
        orders: vec![n, p],
        terms,
        remainder_class: None,
    })
}

/// `Σ_{k<N} ((−i)^k/k!) (∂_ξ^k τ)(x, ξ + η) ∂_x^k σ(x, ξ, η)`.
pub fn compose_left_expansion(
    tau: &ComplexExpr,
    sigma: &ComplexExpr,
    n: u32,
) -> Result<ExpansionSeries> {
    check_bilinear(sigma)?;
    check_linear(tau)?;
    check_order(n)?;
    let sum = SymbolExpr::add(v(Var::Xi), v(Var::Eta));
    let mut terms = Vec::new();
    for k in 0..n {
        let t = tau.differentiate(Var::Xi, k).substitute_all(&[(Var::Xi, sum.clone())]);
        let s = to_output(&sigma.differentiate(Var::X, k));
        push(&mut terms, vec![k], ExactCoeff::minus_i_over_factorial(k), t.mul(s));
    }
    Ok(ExpansionSeries {
        which: ExpansionKind::ComposeLeft,
        orders: vec![n],
        terms,
        remainder_class: None,
    })
}

/// `τ* ≈ Σ_{k<N} ((−i)^k/k!) ∂_ξ^k ∂_x^k τ̄`.
pub fn linear_adjoint_expansion(tau: &ComplexExpr, n: u32) -> Result<ExpansionSeries> {
    check_linear(tau)?;
    check_order(n)?;
    let conj = tau.conj();
    let mut terms = Vec::new();
    for k in 0..n {
        let d = conj.differentiate(Var::X, k).differentiate(Var::Xi, k);
        push(&mut terms, vec![k], ExactCoeff::minus_i_over_factorial(k), d);
    }
    Ok(ExpansionSeries {
        which: ExpansionKind::LinearAdjoint,
        orders: vec![n],
        terms,
        remainder_class: None,
    })
}

/// `τ1 ∘ τ2 ≈ Σ_{k<N} ((−i)^k/k!) ∂_ξ^k τ1 ∂_x^k τ2`.
pub fn linear_compose_expansion(
    tau1: &ComplexExpr,
    tau2: &ComplexExpr,
    n: u32,
) -> Result<ExpansionSeries> {
    check_linear(tau1)?;
    check_linear(tau2)?;
    check_order(n)?;
    let mut terms = Vec::new();
    for k in 0..n {
        let d = tau1.differentiate(Var::Xi, k).mul(tau2.differentiate(Var::X, k));
        push(&mut terms, vec![k], ExactCoeff::minus_i_over_factorial(k), d);
    }
    Ok(ExpansionSeries {
        which: ExpansionKind::LinearCompose,
        orders: vec![n],
        terms,
        remainder_class: None,
    })
}

/// `κ(ξ) κ(η) σ(x, ξ, η) / κ(ξ + η)`, the symbol of
/// `κ(D)⁻¹ T_σ(κ(D) f, κ(D) g)` for an x-independent `σ`.
///
/// `κ` is a real multiplier in `xi` and must not vanish at any lattice
/// frequency or sum of two lattice frequencies.
pub fn principal_conjugation(
    sigma: &ComplexExpr,
    kappa: &ComplexExpr,
    grid: &GridSpec,
) -> Result<ComplexExpr> {
    check_bilinear(sigma)?;
    check_vars(kappa, &[Var::Xi], "multiplier")?;
    if !kappa.is_real() {
        return Err(Error::InvalidParameter("the multiplier must be real-valued".into()));
    }
    let lo = 2 * grid.min_mode();
    let hi = 2 * grid.max_mode();
    for k in lo..=hi {
        let xi = grid.frequency(k);
        let val = kappa.re.eval(&Point::linear(0.0, xi));
        if !(val.is_finite() && val != 0.0) {
            return Err(Error::InvalidParameter(format!(
                "multiplier is {val} at xi={xi}"
            )));
        }
    }
    let k = &kappa.re;
    let at = |e: SymbolExpr| k.substitute_all(&[(Var::Xi, e)]);
    let factor = SymbolExpr::div(
        SymbolExpr::mul(k.clone(), at(v(Var::Eta))),
        at(SymbolExpr::add(v(Var::Xi), v(Var::Eta))),
    );
    Ok(to_output(sigma).mul(ComplexExpr::real(factor)))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::calculus::exact::{adjoint_exact, compose_right_exact};
    use crate::lattice::make_grid;
    use crate::symlang::parse_complex;

    fn c(s: &str) -> ComplexExpr {
        parse_complex(s).unwrap()
    }

    #[test]
    fn coefficients() {
        let c3 = ExactCoeff::i_over_factorial(3);
        assert_eq!((c3.i_power, c3.denominator), (3, 6));
        assert_eq!(c3.to_string(), "-1i/6");
        let m3 = ExactCoeff::minus_i_over_factorial(3);
        assert_eq!((m3.i_power, m3.denominator), (1, 6));
        assert!((m3.value() - Complex64::new(0.0, 1.0 / 6.0)).norm() < 1e-17);
    }

    #[test]
    fn x_independent_adjoint_is_one_term() {
        let s = adjoint_expansion(&c("atan(beta-alpha)"), Which::First, 3).unwrap();
        assert_eq!(s.terms.len(), 1);
        let p = Point::bilinear(0.0, 1.0, 2.0);
        assert!((s.eval(&p).re - (2.0f64 + 3.0).atan()).abs() < 1e-15);
    }

    #[test]
    fn expansion_terminates_for_linear_x_dependence() {
        // sin(x)·α: one x-derivative survives, the α-derivative ends it.
        let g = make_grid(16, 2.0 * PI).unwrap();
        let e = c("sin(x)*alpha");
        for which in [Which::First, Which::Second] {
            let series = adjoint_expansion(&e, which, 2).unwrap();
            let approx = series.sample(&g).unwrap();
            let exact = adjoint_exact(&sample_symbol(&e, &g).unwrap(), which);
            let keep = |k: i64, l: i64| (k + l).abs() < 6;
            assert!(approx.max_abs_diff_where(&exact, keep).unwrap() < 1e-10);
        }
    }

    #[test]
    fn remainder_classes() {
        let input = ClassSpec::plain(1.0, 0.5, PI / 4.0, 1).unwrap();
        let s = adjoint_expansion(&c("1"), Which::First, 2).unwrap();
        let r = s.remainder_for(&input, &[]).unwrap();
        assert_eq!(r.variant, crate::symbols::Variant::Star1);
        assert_eq!((r.m1, r.m2), (-1.0, 0.5));
        let s = compose_right_expansion(&c("1"), &c("xi"), &c("1"), 2, 1).unwrap();
        let r = s.remainder_for(&input, &[1.0, 0.0]).unwrap();
        assert_eq!((r.m1, r.m2), (0.0, -0.5));
        assert!(s.remainder_for(&input, &[1.0]).is_err());
    }

    #[test]
    fn right_composition_x_independent_single_term() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        let s = compose_right_expansion(&c("alpha*beta"), &c("xi"), &c("bracket(xi)"), 3, 3).unwrap();
        assert_eq!(s.terms.len(), 1);
        let exact = compose_right_exact(
            &sample_symbol(&c("alpha*beta"), &g).unwrap(),
            &sample_linear_symbol(&c("xi"), &g).unwrap(),
            &sample_linear_symbol(&c("bracket(xi)"), &g).unwrap(),
        )
        .unwrap();
        assert!(s.sample(&g).unwrap().max_abs_diff_where(&exact, |_, _| true).unwrap() < 1e-12);
    }

    #[test]
    fn conjugation_rejects_vanishing_multiplier() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        assert!(principal_conjugation(&c("1"), &c("xi"), &g).is_err());
        let e = principal_conjugation(&c("alpha"), &c("bracket(xi)"), &g).unwrap();
        let p = Point::bilinear(0.0, 1.0, 2.0);
        let want = 1.0 * 2f64.sqrt() * 5f64.sqrt() / 10f64.sqrt();
        assert!((e.eval(&p).re - want).abs() < 1e-14);
    }
}
