use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Func, Point, Var};

/// Real-valued expression tree. Children are shared, so cloning and
/// differentiating large trees is cheap.
///
/// Build trees through the associated constructors ([`SymbolExpr::add`] and
/// friends), which fold constants and drop neutral elements; this keeps
/// high-order derivatives small.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolExpr {
    Const(f64),
    Var(Var),
    Neg(Arc<SymbolExpr>),
    Add(Arc<SymbolExpr>, Arc<SymbolExpr>),
    Sub(Arc<SymbolExpr>, Arc<SymbolExpr>),
    Mul(Arc<SymbolExpr>, Arc<SymbolExpr>),
    Div(Arc<SymbolExpr>, Arc<SymbolExpr>),
    Pow(Arc<SymbolExpr>, f64),
    Call(Func, Arc<SymbolExpr>),
}

use SymbolExpr as E;

pub(crate) fn is_integer(p: f64) -> bool {
    p.fract() == 0.0 && p.abs() < 1e9
}

pub(crate) fn powf(u: f64, p: f64) -> f64 {
    if is_integer(p) {
        u.powi(p as i32)
    } else {
        u.powf(p)
    }
}

impl SymbolExpr {
    pub fn constant(c: f64) -> Self {
        E::Const(c)
    }

    pub fn var(v: Var) -> Self {
        E::Var(v)
    }

    pub fn zero() -> Self {
        E::Const(0.0)
    }

    pub fn one() -> Self {
        E::Const(1.0)
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            E::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(1.0)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(u: Self) -> Self {
        match u {
            E::Const(c) => E::Const(-c),
            E::Neg(inner) => Arc::unwrap_or_clone(inner),
            u => E::Neg(Arc::new(u)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(u: Self, v: Self) -> Self {
        match (&u, &v) {
            (E::Const(a), E::Const(b)) => E::Const(a + b),
            _ if u.is_zero() => v,
            _ if v.is_zero() => u,
            (_, E::Neg(w)) => E::Sub(Arc::new(u), w.clone()),
            _ => E::Add(Arc::new(u), Arc::new(v)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(u: Self, v: Self) -> Self {
        match (&u, &v) {
            (E::Const(a), E::Const(b)) => E::Const(a - b),
            _ if v.is_zero() => u,
            _ if u.is_zero() => Self::neg(v),
            (_, E::Neg(w)) => E::Add(Arc::new(u), w.clone()),
            _ => E::Sub(Arc::new(u), Arc::new(v)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(u: Self, v: Self) -> Self {
        match (&u, &v) {
            (E::Const(a), E::Const(b)) => E::Const(a * b),
            _ if u.is_zero() || v.is_zero() => E::Const(0.0),
            _ if u.is_one() => v,
            _ if v.is_one() => u,
            (E::Const(c), _) if *c == -1.0 => Self::neg(v),
            (_, E::Const(c)) if *c == -1.0 => Self::neg(u),
            // constants to the left
            (_, E::Const(_)) => E::Mul(Arc::new(v), Arc::new(u)),
            _ => E::Mul(Arc::new(u), Arc::new(v)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(u: Self, v: Self) -> Self {
        match (&u, &v) {
            (E::Const(a), E::Const(b)) if *b != 0.0 => E::Const(a / b),
            _ if v.is_one() => u,
            _ if u.is_zero() && v.as_const() != Some(0.0) => E::Const(0.0),
            _ => E::Div(Arc::new(u), Arc::new(v)),
        }
    }

    pub fn pow(u: Self, p: f64) -> Self {
        if p == 0.0 {
            return E::Const(1.0);
        }
        if p == 1.0 {
            return u;
        }
        if let E::Const(c) = u {
            let folded = powf(c, p);
            if folded.is_finite() && (c > 0.0 || (is_integer(p) && (p > 0.0 || c != 0.0))) {
                return E::Const(folded);
            }
        }
        E::Pow(Arc::new(u), p)
    }

    pub fn call(f: Func, u: Self) -> Self {
        if let E::Const(c) = u {
            let ok = match f {
                Func::Log | Func::Sqrt => c > 0.0,
                _ => true,
            };
            let folded = f.apply(c);
            if ok && folded.is_finite() {
                return E::Const(folded);
            }
        }
        E::Call(f, Arc::new(u))
    }

    pub fn exp(u: Self) -> Self {
        Self::call(Func::Exp, u)
    }

    pub fn log(u: Self) -> Self {
        Self::call(Func::Log, u)
    }

    pub fn sin(u: Self) -> Self {
        Self::call(Func::Sin, u)
    }

    pub fn cos(u: Self) -> Self {
        Self::call(Func::Cos, u)
    }

    pub fn atan(u: Self) -> Self {
        Self::call(Func::Atan, u)
    }

    pub fn sqrt(u: Self) -> Self {
        Self::call(Func::Sqrt, u)
    }

    pub fn bracket(u: Self) -> Self {
        Self::call(Func::Bracket, u)
    }

    pub fn eval(&self, p: &Point) -> f64 {
        match self {
            E::Const(c) => *c,
            E::Var(v) => p.get(*v),
            E::Neg(u) => -u.eval(p),
            E::Add(u, v) => u.eval(p) + v.eval(p),
            E::Sub(u, v) => u.eval(p) - v.eval(p),
            E::Mul(u, v) => u.eval(p) * v.eval(p),
            E::Div(u, v) => u.eval(p) / v.eval(p),
            E::Pow(u, e) => powf(u.eval(p), *e),
            E::Call(f, u) => f.apply(u.eval(p)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            E::Const(_) => {}
            E::Var(v) => {
                out.insert(*v);
            }
            E::Neg(u) | E::Pow(u, _) | E::Call(_, u) => u.collect_vars(out),
            E::Add(u, v) | E::Sub(u, v) | E::Mul(u, v) | E::Div(u, v) => {
                u.collect_vars(out);
                v.collect_vars(out);
            }
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        match self {
            E::Const(_) => false,
            E::Var(w) => *w == v,
            E::Neg(u) | E::Pow(u, _) | E::Call(_, u) => u.depends_on(v),
            E::Add(a, b) | E::Sub(a, b) | E::Mul(a, b) | E::Div(a, b) => {
                a.depends_on(v) || b.depends_on(v)
            }
        }
    }

    /// Number of nodes, counting shared children once per occurrence.
    pub fn size(&self) -> usize {
        match self {
            E::Const(_) | E::Var(_) => 1,
            E::Neg(u) | E::Pow(u, _) | E::Call(_, u) => 1 + u.size(),
            E::Add(a, b) | E::Sub(a, b) | E::Mul(a, b) | E::Div(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn substitute(&self, v: Var, with: &SymbolExpr) -> SymbolExpr {
        self.substitute_all(&[(v, with.clone())])
    }

    /// Simultaneous substitution.
    pub fn substitute_all(&self, subs: &[(Var, SymbolExpr)]) -> SymbolExpr {
        match self {
            E::Const(_) => self.clone(),
            E::Var(v) => subs
                .iter()
                .find(|(w, _)| w == v)
                .map(|(_, e)| e.clone())
                .unwrap_or_else(|| self.clone()),
            E::Neg(u) => Self::neg(u.substitute_all(subs)),
            E::Add(a, b) => Self::add(a.substitute_all(subs), b.substitute_all(subs)),
            E::Sub(a, b) => Self::sub(a.substitute_all(subs), b.substitute_all(subs)),
            E::Mul(a, b) => Self::mul(a.substitute_all(subs), b.substitute_all(subs)),
            E::Div(a, b) => Self::div(a.substitute_all(subs), b.substitute_all(subs)),
            E::Pow(u, p) => Self::pow(u.substitute_all(subs), *p),
            E::Call(f, u) => Self::call(*f, u.substitute_all(subs)),
        }
    }

    /// Fully parenthesized text that parses back to the same tree.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c < 0.0 || (c == 0.0 && c.is_sign_negative()) {
        write!(f, "(-{:?})", -c)
    } else {
        write!(f, "{c:?}")
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            E::Const(c) => write_const(f, *c),
            E::Var(v) => f.write_str(v.name()),
            E::Neg(u) => write!(f, "(-{u})"),
            E::Add(a, b) => write!(f, "({a}+{b})"),
            E::Sub(a, b) => write!(f, "({a}-{b})"),
            E::Mul(a, b) => write!(f, "({a}*{b})"),
            E::Div(a, b) => write!(f, "({a}/{b})"),
            E::Pow(u, p) => {
                write!(f, "({u}^")?;
                write_const(f, *p)?;
                f.write_str(")")
            }
            E::Call(func, u) => write!(f, "{}({u})", func.name()),
        }
    }
}

impl Serialize for SymbolExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SymbolExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}

impl From<f64> for SymbolExpr {
    fn from(c: f64) -> Self {
        E::Const(c)
    }
}

impl From<Var> for SymbolExpr {
    fn from(v: Var) -> Self {
        E::Var(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $ctor:ident) => {
        impl std::ops::$trait for SymbolExpr {
            type Output = SymbolExpr;
            fn $method(self, rhs: SymbolExpr) -> SymbolExpr {
                SymbolExpr::$ctor(self, rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl std::ops::Neg for SymbolExpr {
    type Output = SymbolExpr;
    fn neg(self) -> SymbolExpr {
        SymbolExpr::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> E {
        E::var(Var::Alpha)
    }

    #[test]
    fn constructors_fold() {
        assert_eq!(E::add(E::one(), E::constant(2.0)), E::Const(3.0));
        assert_eq!(E::mul(E::zero(), a()), E::zero());
        assert_eq!(E::mul(a(), E::one()), a());
        assert_eq!(E::neg(E::neg(a())), a());
        assert_eq!(E::pow(a(), 1.0), a());
        assert_eq!(E::call(Func::Exp, E::zero()), E::one());
        // log(0) stays symbolic so the validator can reject it
        assert!(matches!(E::log(E::zero()), E::Call(Func::Log, _)));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let e = E::sub(a(), E::var(Var::Beta));
        let swapped = e.substitute_all(&[(Var::Alpha, E::var(Var::Beta)), (Var::Beta, a())]);
        assert_eq!(swapped.to_string(), "(beta-alpha)");
    }

    #[test]
    fn display_parenthesizes_negatives() {
        let e = E::mul(E::constant(-2.0), a());
        assert_eq!(e.to_string(), "((-2.0)*alpha)");
        assert_eq!(E::pow(a(), -0.5).to_string(), "(alpha^(-0.5))");
    }
}
