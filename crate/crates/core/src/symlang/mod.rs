//! Expression language for symbols `σ(x, α, β)` and `τ(x, ξ)`.
//!
//! Expressions are parsed from infix text, validated (guards on division,
//! `log`, fractional powers), evaluated pointwise and differentiated exactly.
//! Complex-valued symbols are a pair of real trees, see [`ComplexExpr`].
//!
//! Identifiers: the variables `x`, `y`, `alpha`, `beta`, `xi`, `eta`, the
//! constant `pi`, the imaginary unit `i` (complex parsing only) and the
//! functions `exp`, `log`, `sin`, `cos`, `tan`, `atan`, `sqrt` and
//! `bracket(u) = (1 + u²)^{1/2}`.

mod ast;
mod complex;
mod diff;
mod parser;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ast::SymbolExpr;
pub use complex::ComplexExpr;
pub use diff::Direction;
pub use parser::{parse, parse_complex, ParseError};
pub use validate::validate;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymlangError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("rejected expression: {0}")]
    Invalid(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("complex value not supported here: {0}")]
    Complex(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
    Alpha,
    Beta,
    Xi,
    Eta,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::X, Var::Y, Var::Alpha, Var::Beta, Var::Xi, Var::Eta];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Alpha => "alpha",
            Var::Beta => "beta",
            Var::Xi => "xi",
            Var::Eta => "eta",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Var {
    type Err = SymlangError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Var::from_name(s).ok_or_else(|| SymlangError::UnknownVariable(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Atan,
    Sqrt,
    Bracket,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Atan,
        Func::Sqrt,
        Func::Bracket,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Sqrt => "sqrt",
            Func::Bracket => "bracket",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn apply(self, u: f64) -> f64 {
        match self {
            Func::Exp => u.exp(),
            Func::Log => u.ln(),
            Func::Sin => u.sin(),
            Func::Cos => u.cos(),
            Func::Tan => u.tan(),
            Func::Atan => u.atan(),
            Func::Sqrt => u.sqrt(),
            Func::Bracket => u.hypot(1.0),
        }
    }
}

/// Values of every variable at one evaluation point. Unused variables are 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    pub eta: f64,
}

impl Point {
    /// A bilinear point; `xi`/`eta` mirror `alpha`/`beta` so that expansion
    /// output written in `(x, xi, eta)` samples on the same grid.
    pub fn bilinear(x: f64, alpha: f64, beta: f64) -> Self {
        Self {
            x,
            y: 0.0,
            alpha,
            beta,
            xi: alpha,
            eta: beta,
        }
    }

    pub fn linear(x: f64, xi: f64) -> Self {
        Self {
            x,
            xi,
            ..Self::default()
        }
    }

    pub fn get(&self, v: Var) -> f64 {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
            Var::Alpha => self.alpha,
            Var::Beta => self.beta,
            Var::Xi => self.xi,
            Var::Eta => self.eta,
        }
    }

    pub fn set(&mut self, v: Var, value: f64) {
        match v {
            Var::X => self.x = value,
            Var::Y => self.y = value,
            Var::Alpha => self.alpha = value,
            Var::Beta => self.beta = value,
            Var::Xi => self.xi = value,
            Var::Eta => self.eta = value,
        }
    }

    pub fn with(mut self, v: Var, value: f64) -> Self {
        self.set(v, value);
        self
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x={}, y={}, alpha={}, beta={}, xi={}, eta={})",
            self.x, self.y, self.alpha, self.beta, self.xi, self.eta
        )
    }
}
