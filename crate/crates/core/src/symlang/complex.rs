use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ast::{is_integer, SymbolExpr};
use super::{Func, Point, SymlangError, Var};

/// Complex symbol `re + i·im` as two real trees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexExpr {
    pub re: SymbolExpr,
    pub im: SymbolExpr,
}

impl ComplexExpr {
    pub fn new(re: SymbolExpr, im: SymbolExpr) -> Self {
        Self { re, im }
    }

    pub fn real(re: SymbolExpr) -> Self {
        Self::new(re, SymbolExpr::zero())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn as_real_const(&self) -> Option<f64> {
        if self.is_real() {
            self.re.as_const()
        } else {
            None
        }
    }

    pub fn eval(&self, p: &Point) -> Complex64 {
        let im = if self.is_real() { 0.0 } else { self.im.eval(p) };
        Complex64::new(self.re.eval(p), im)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.re.depends_on(v) || self.im.depends_on(v)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), SymbolExpr::neg(self.im.clone()))
    }

    /// `i^k · self`.
    pub fn times_i_pow(&self, k: u32) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => Self::new(SymbolExpr::neg(self.im.clone()), self.re.clone()),
            2 => self.neg(),
            _ => Self::new(self.im.clone(), SymbolExpr::neg(self.re.clone())),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(
            SymbolExpr::mul(SymbolExpr::constant(c), self.re.clone()),
            SymbolExpr::mul(SymbolExpr::constant(c), self.im.clone()),
        )
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        Self::new(SymbolExpr::neg(self.re.clone()), SymbolExpr::neg(self.im.clone()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, o: Self) -> Self {
        Self::new(SymbolExpr::add(self.re, o.re), SymbolExpr::add(self.im, o.im))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, o: Self) -> Self {
        Self::new(SymbolExpr::sub(self.re, o.re), SymbolExpr::sub(self.im, o.im))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: Self) -> Self {
        use SymbolExpr as E;
        if self.is_real() {
            return Self::new(E::mul(self.re.clone(), o.re), E::mul(self.re, o.im));
        }
        if o.is_real() {
            return Self::new(E::mul(self.re, o.re.clone()), E::mul(self.im, o.re));
        }
        let re = E::sub(
            E::mul(self.re.clone(), o.re.clone()),
            E::mul(self.im.clone(), o.im.clone()),
        );
        let im = E::add(E::mul(self.re, o.im), E::mul(self.im, o.re));
        Self::new(re, im)
    }

    /// Division by a real denominator only.
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, o: Self) -> Result<Self, SymlangError> {
        if !o.is_real() {
            return Err(SymlangError::Complex("complex denominator".into()));
        }
        Ok(Self::new(
            SymbolExpr::div(self.re, o.re.clone()),
            SymbolExpr::div(self.im, o.re),
        ))
    }

    /// Real powers of real values; non-negative integer powers of complex values.
    pub fn pow(self, p: f64) -> Result<Self, SymlangError> {
        if self.is_real() {
            return Ok(Self::real(SymbolExpr::pow(self.re, p)));
        }
        if !(is_integer(p) && p >= 0.0) {
            return Err(SymlangError::Complex(format!(
                "power {p} of a complex value"
            )));
        }
        let mut acc = Self::real(SymbolExpr::one());
        for _ in 0..p as u32 {
            acc = acc.mul(self.clone());
        }
        Ok(acc)
    }

    /// Functions of real arguments, and `exp` of complex ones.
    pub fn call(self, f: Func) -> Result<Self, SymlangError> {
        use SymbolExpr as E;
        if self.is_real() {
            return Ok(Self::real(E::call(f, self.re)));
        }
        if f != Func::Exp {
            return Err(SymlangError::Complex(format!(
                "`{}` of a complex argument",
                f.name()
            )));
        }
        let m = E::exp(self.re);
        Ok(Self::new(
            E::mul(m.clone(), E::cos(self.im.clone())),
            E::mul(m, E::sin(self.im)),
        ))
    }

    pub fn substitute_all(&self, subs: &[(Var, SymbolExpr)]) -> Self {
        Self::new(self.re.substitute_all(subs), self.im.substitute_all(subs))
    }

    pub fn differentiate(&self, v: Var, order: u32) -> Self {
        Self::new(
            super::diff::differentiate(&self.re, v, order),
            super::diff::differentiate(&self.im, v, order),
        )
    }

    pub fn directional_derivative(&self, d: super::Direction, order: u32) -> Self {
        Self::new(
            super::diff::directional_derivative(&self.re, d, order),
            super::diff::directional_derivative(&self.im, d, order),
        )
    }
}

impl From<SymbolExpr> for ComplexExpr {
    fn from(re: SymbolExpr) -> Self {
        Self::real(re)
    }
}

impl std::fmt::Display for ComplexExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({}+1i*{})", self.re, self.im)
        }
    }
}
