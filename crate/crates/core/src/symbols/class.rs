use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symlang::Direction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `BS^m_{ρ,δ}`, `m = m1`.
    Classical,
    /// `BS^m_{ρ,δ;θ}`.
    ClassicalTheta,
    /// Order `(m1, m2)` class on the line `β = tan θ · α`.
    Plain,
    Star1,
    Star2,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Classical => "classical",
            Variant::ClassicalTheta => "classical_theta",
            Variant::Plain => "plain",
            Variant::Star1 => "star1",
            Variant::Star2 => "star2",
        }
    }

    /// Directions of the `b` and `c` derivatives.
    pub fn directions(self) -> (Direction, Direction) {
        match self {
            Variant::Star1 => (Direction::DAlpha, Direction::DBetaMinusAlpha),
            Variant::Star2 => (Direction::DAlphaMinusBeta, Direction::DBeta),
            _ => (Direction::DAlpha, Direction::DBeta),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "classical" => Variant::Classical,
            "classical_theta" | "classical-theta" => Variant::ClassicalTheta,
            "plain" => Variant::Plain,
            "star1" => Variant::Star1,
            "star2" => Variant::Star2,
            _ => return Err(Error::InvalidClass(format!("unknown class `{s}`"))),
        })
    }
}

/// The decay law a symbol claims to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub m1: f64,
    pub m2: f64,
    pub rho: f64,
    pub delta: f64,
    pub theta: f64,
    pub variant: Variant,
    pub max_deriv_order: u32,
}

pub const MAX_DERIV_ORDER: u32 = 4;

/// `m_+ = (|m| + m) / 2`.
pub fn m_plus(m: f64) -> f64 {
    (m.abs() + m) / 2.0
}

/// `tan θ`, snapped to the nearest integer when within rounding of it so
/// that `θ = π/4` gives the line `β = α` exactly.
pub fn line_slope(theta: f64) -> f64 {
    let t = theta.tan();
    if (t - t.round()).abs() < 1e-12 {
        t.round()
    } else {
        t
    }
}

impl ClassSpec {
    pub fn new(
        variant: Variant,
        m1: f64,
        m2: f64,
        rho: f64,
        delta: f64,
        theta: f64,
        max_deriv_order: u32,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) || !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidClass(format!(
                "rho and delta must lie in [0, 1], got {rho}, {delta}"
            )));
        }
        if !(theta.abs() < FRAC_PI_2) {
            return Err(Error::InvalidClass(format!(
                "theta must lie in (-pi/2, pi/2), got {theta}"
            )));
        }
        if max_deriv_order > MAX_DERIV_ORDER {
            return Err(Error::InvalidClass(format!(
                "max_deriv_order {max_deriv_order} exceeds {MAX_DERIV_ORDER}"
            )));
        }
        if !(m1.is_finite() && m2.is_finite()) {
            return Err(Error::InvalidClass("orders must be finite".into()));
        }
        let (rho, delta) = match variant {
            Variant::Plain | Variant::Star1 | Variant::Star2 => (1.0, 0.0),
            _ => (rho, delta),
        };
        Ok(Self {
            m1,
            m2,
            rho,
            delta,
            theta,
            variant,
            max_deriv_order,
        })
    }

    pub fn classical(m: f64, rho: f64, delta: f64, max_deriv_order: u32) -> Result<Self> {
        Self::new(Variant::Classical, m, 0.0, rho, delta, 0.0, max_deriv_order)
    }

    pub fn classical_theta(
        m: f64,
        rho: f64,
        delta: f64,
        theta: f64,
        max_deriv_order: u32,
    ) -> Result<Self> {
        Self::new(Variant::ClassicalTheta, m, 0.0, rho, delta, theta, max_deriv_order)
    }

    pub fn plain(m1: f64, m2: f64, theta: f64, max_deriv_order: u32) -> Result<Self> {
        Self::new(Variant::Plain, m1, m2, 1.0, 0.0, theta, max_deriv_order)
    }

    pub fn star1(m1: f64, m2: f64, theta: f64, max_deriv_order: u32) -> Result<Self> {
        Self::new(Variant::Star1, m1, m2, 1.0, 0.0, theta, max_deriv_order)
    }

    pub fn star2(m1: f64, m2: f64, theta: f64, max_deriv_order: u32) -> Result<Self> {
        Self::new(Variant::Star2, m1, m2, 1.0, 0.0, theta, max_deriv_order)
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn m1_plus(&self) -> f64 {
        m_plus(self.m1)
    }

    pub fn m2_plus(&self) -> f64 {
        m_plus(self.m2)
    }

    /// `θ ∈ {0, −π/4}`: no continuity claim attaches to these lines.
    pub fn is_degenerate(&self) -> bool {
        is_degenerate_angle(self.theta)
    }

    pub fn slope(&self) -> f64 {
        line_slope(self.theta)
    }

    /// All derivative triples `(a, b, c)` with `a + b + c <= max_deriv_order`.
    pub fn triples(&self) -> Vec<(u32, u32, u32)> {
        let d = self.max_deriv_order;
        let mut out = Vec::new();
        for total in 0..=d {
            for a in 0..=total {
                for b in 0..=total - a {
                    out.push((a, b, total - a - b));
                }
            }
        }
        out
    }

    /// The decay weight bounding `|∂^{a,b,c} σ|` at `(α, β)`.
    pub fn weight(&self, a: u32, b: u32, c: u32, alpha: f64, beta: f64) -> f64 {
        let br = |u: f64| u.hypot(1.0);
        let t = self.slope();
        let line = (beta - t * alpha).abs();
        let (b, c) = (b as i32, c as i32);
        match self.variant {
            Variant::Classical => {
                let s = self.m1 + self.delta * a as f64 - self.rho * (b + c) as f64;
                (1.0 + alpha * alpha + beta * beta).powf(s / 2.0)
            }
            Variant::ClassicalTheta => {
                let s = self.m1 + self.delta * a as f64 - self.rho * (b + c) as f64;
                br(line).powf(s)
            }
            Variant::Plain => {
                br(alpha).powf(self.m1)
                    * br(beta).powf(self.m2)
                    * br(alpha.abs().min(line)).powi(-b)
                    * br(beta.abs().min(line)).powi(-c)
            }
            Variant::Star1 => {
                let s = (alpha + beta).abs();
                br(s).powf(self.m1)
                    * br(beta).powf(self.m2)
                    * br(s.min(line)).powi(-b)
                    * br(beta.abs().min(line)).powi(-c)
            }
            Variant::Star2 => {
                let s = (alpha + beta).abs();
                br(alpha).powf(self.m1)
                    * br(s).powf(self.m2)
                    * br(alpha.abs().min(line)).powi(-b)
                    * br(s.min(line)).powi(-c)
            }
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

pub fn is_degenerate_angle(theta: f64) -> bool {
    theta.abs() < 1e-14 || (theta + FRAC_PI_4).abs() < 1e-14
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Variant::Classical => write!(
                f,
                "classical(m={}, rho={}, delta={})",
                self.m1, self.rho, self.delta
            ),
            Variant::ClassicalTheta => write!(
                f,
                "classical_theta(m={}, rho={}, delta={}, theta={})",
                self.m1, self.rho, self.delta, self.theta
            ),
            v => write!(
                f,
                "{}(m1={}, m2={}, theta={})",
                v.name(),
                self.m1,
                self.m2,
                self.theta
            ),
        }
    }
}
