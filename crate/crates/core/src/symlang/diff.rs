use serde::{Deserialize, Serialize};

use super::ast::SymbolExpr;
use super::{Func, Var};

use SymbolExpr as E;

/// Frequency directions used by the class definitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    DAlpha,
    DBeta,
    /// `∂_β − ∂_α`
    DBetaMinusAlpha,
    /// `∂_α − ∂_β`
    DAlphaMinusBeta,
}

impl std::str::FromStr for Direction {
    type Err = super::SymlangError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "d_alpha" => Direction::DAlpha,
            "d_beta" => Direction::DBeta,
            "d_beta_minus_alpha" => Direction::DBetaMinusAlpha,
            "d_alpha_minus_beta" => Direction::DAlphaMinusBeta,
            _ => return Err(super::SymlangError::UnknownVariable(s.to_string())),
        })
    }
}

fn d1(e: &E, v: Var) -> E {
    if !e.depends_on(v) {
        return E::zero();
    }
    match e {
        E::Const(_) => E::zero(),
        E::Var(w) => {
            if *w == v {
                E::one()
            } else {
                E::zero()
            }
        }
        E::Neg(u) => E::neg(d1(u, v)),
        E::Add(a, b) => E::add(d1(a, v), d1(b, v)),
        E::Sub(a, b) => E::sub(d1(a, v), d1(b, v)),
        E::Mul(a, b) => E::add(
            E::mul(d1(a, v), (**b).clone()),
            E::mul((**a).clone(), d1(b, v)),
        ),
        E::Div(a, b) => {
            // a'/b - a b'/b^2
            let (a, b) = ((**a).clone(), (**b).clone());
            let da = d1(&a, v);
            let db = d1(&b, v);
            E::sub(
                E::div(da, b.clone()),
                E::div(E::mul(a, db), E::pow(b, 2.0)),
            )
        }
        E::Pow(u, p) => {
            let u = (**u).clone();
            let du = d1(&u, v);
            E::mul(E::mul(E::constant(*p), E::pow(u, p - 1.0)), du)
        }
        E::Call(f, u) => {
            let u = (**u).clone();
            let du = d1(&u, v);
            let outer = match f {
                Func::Exp => E::exp(u),
                Func::Log => return E::div(du, u),
                Func::Sin => E::cos(u),
                Func::Cos => E::neg(E::sin(u)),
                Func::Tan => E::add(E::one(), E::pow(E::call(Func::Tan, u), 2.0)),
                Func::Atan => return E::div(du, E::add(E::one(), E::pow(u, 2.0))),
                Func::Sqrt => return E::div(du, E::mul(E::constant(2.0), E::sqrt(u))),
                Func::Bracket => return E::div(E::mul(u.clone(), du), E::bracket(u)),
            };
            E::mul(outer, du)
        }
    }
}

/// Exact `∂^order / ∂v^order`. Order 0 is the identity.
pub fn differentiate(e: &E, v: Var, order: u32) -> E {
    let mut out = e.clone();
    for _ in 0..order {
        out = d1(&out, v);
    }
    out
}

pub fn directional_derivative(e: &E, d: Direction, order: u32) -> E {
    let mut out = e.clone();
    for _ in 0..order {
        out = match d {
            Direction::DAlpha => d1(&out, Var::Alpha),
            Direction::DBeta => d1(&out, Var::Beta),
            Direction::DBetaMinusAlpha => E::sub(d1(&out, Var::Beta), d1(&out, Var::Alpha)),
            Direction::DAlphaMinusBeta => E::sub(d1(&out, Var::Alpha), d1(&out, Var::Beta)),
        };
    }
    out
}

impl SymbolExpr {
    pub fn differentiate(&self, v: Var, order: u32) -> SymbolExpr {
        differentiate(self, v, order)
    }

    pub fn directional_derivative(&self, d: Direction, order: u32) -> SymbolExpr {
        directional_derivative(self, d, order)
    }
}
