//! Closed-form symbol families.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symlang::{SymbolExpr as E, Var};

use super::class::line_slope;
use super::{ClassSpec, Variant};

fn alpha() -> E {
    E::var(Var::Alpha)
}

fn beta() -> E {
    E::var(Var::Beta)
}

fn xi() -> E {
    E::var(Var::Xi)
}

/// `exp(−(α² + β²))`.
pub fn coifman_meyer_gauss() -> E {
    E::exp(-(E::pow(alpha(), 2.0) + E::pow(beta(), 2.0)))
}

/// `β − tan θ · α`.
pub fn line_coordinate(theta: f64) -> Result<E> {
    if !(theta.abs() < FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "theta_line needs theta in (-pi/2, pi/2), got {theta}"
        )));
    }
    Ok(beta() - E::constant(line_slope(theta)) * alpha())
}

/// `τ(x, β − tan θ · α)` for a profile `τ(x, ξ)`.
pub fn theta_line(theta: f64, profile: &E) -> Result<E> {
    Ok(profile.substitute(Var::Xi, &line_coordinate(theta)?))
}

/// `u(α) · v(β)` for profiles in `ξ`.
pub fn marcinkiewicz_product(u: &E, v: &E) -> E {
    u.substitute(Var::Xi, &alpha()) * v.substitute(Var::Xi, &beta())
}

/// `Ω(α, β) = log(2 + log(1 + (1 + ⟨β⟩)/(1 + ⟨α⟩)))`.
///
/// The inner logarithm is positive, so the absolute value is dropped.
pub fn omega() -> E {
    let ratio = (E::one() + E::bracket(beta())) / (E::one() + E::bracket(alpha()));
    E::log(E::constant(2.0) + E::log(E::one() + ratio))
}

/// `atan(β − tan θ · α) / Ω(α, β)`.
pub fn omega_weighted(theta: f64) -> Result<E> {
    Ok(theta_line(theta, &E::atan(xi()))? / omega())
}

/// `⟨α⟩^{m1} ⟨β⟩^{m2}`.
pub fn order_weight(m1: f64, m2: f64) -> E {
    E::pow(E::bracket(alpha()), m1) * E::pow(E::bracket(beta()), m2)
}

/// The member of `spec`'s class used to calibrate the checker's ceilings.
pub fn defining_builtin(spec: &ClassSpec) -> Result<E> {
    let (m1, m2) = (spec.m1, spec.m2);
    let line = E::atan(line_coordinate(spec.theta)?);
    let sum = alpha() + beta();
    Ok(match spec.variant {
        Variant::Classical => {
            let r2 = E::one() + E::pow(alpha(), 2.0) + E::pow(beta(), 2.0);
            coifman_meyer_gauss() * E::pow(r2, m1 / 2.0)
        }
        Variant::ClassicalTheta => theta_line(
            spec.theta,
            &(E::atan(xi()) * E::pow(E::bracket(xi()), m1)),
        )?,
        Variant::Plain => order_weight(m1, m2) * line,
        Variant::Star1 => {
            E::pow(E::bracket(sum), m1) * E::pow(E::bracket(beta()), m2) * line
        }
        Variant::Star2 => {
            E::pow(E::bracket(alpha()), m1) * E::pow(E::bracket(sum), m2) * line
        }
    })
}

/// Parameters for [`builtin`]; each family reads the fields it needs.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BuiltinParams {
    pub theta: Option<f64>,
    pub profile: Option<E>,
    pub u: Option<E>,
    pub v: Option<E>,
    pub m1: Option<f64>,
    pub m2: Option<f64>,
}

pub const BUILTIN_NAMES: [&str; 5] = [
    "coifman_meyer_gauss",
    "theta_line",
    "marcinkiewicz_product",
    "omega_weighted",
    "order_weight",
];

pub fn builtin(name: &str, params: &BuiltinParams) -> Result<E> {
    let need = |what: &str| Error::InvalidParameter(format!("`{name}` needs `{what}`"));
    match name {
        "coifman_meyer_gauss" => Ok(coifman_meyer_gauss()),
        "theta_line" => theta_line(
            params.theta.ok_or_else(|| need("theta"))?,
            params.profile.as_ref().ok_or_else(|| need("profile"))?,
        ),
        "marcinkiewicz_product" => {
            let default = E::pow(E::bracket(xi()), -1.0);
            Ok(marcinkiewicz_product(
                params.u.as_ref().unwrap_or(&default),
                params.v.as_ref().unwrap_or(&default),
            ))
        }
        "omega_weighted" => omega_weighted(params.theta.ok_or_else(|| need("theta"))?),
        "order_weight" => Ok(order_weight(
            params.m1.ok_or_else(|| need("m1"))?,
            params.m2.ok_or_else(|| need("m2"))?,
        )),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}
