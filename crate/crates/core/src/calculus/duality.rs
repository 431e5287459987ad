use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbols::{is_degenerate_angle, ClassSpec, Variant};

/// First or second transpose of a bilinear operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    #[serde(rename = "1")]
    First,
    #[serde(rename = "2")]
    Second,
}

impl Which {
    pub fn index(self) -> u8 {
        match self {
            Which::First => 1,
            Which::Second => 2,
        }
    }
}

impl TryFrom<u8> for Which {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Which::First),
            2 => Ok(Which::Second),
            _ => Err(Error::InvalidParameter(format!("adjoint index must be 1 or 2, got {v}"))),
        }
    }
}

/// The line angle of the adjoint class: `cot θ + cot θ*1 = −1`,
/// `tan θ + tan θ*2 = −1`.
pub fn adjoint_angle(theta: f64, which: Which) -> Result<f64> {
    if !(theta.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in (-pi/2, pi/2), got {theta}"
        )));
    }
    match which {
        Which::First => {
            if is_degenerate_angle(theta) {
                return Err(Error::DegenerateAngle(theta));
            }
            let cot_star = -1.0 - 1.0 / theta.tan();
            Ok((1.0 / cot_star).atan())
        }
        Which::Second => Ok((-1.0 - theta.tan()).atan()),
    }
}

/// Class of the adjoint symbol, orders preserved:
///
/// | class | `*1`          | `*2`          |
/// |-------|---------------|---------------|
/// | plain | star1 at θ*1  | star2 at θ*2  |
/// | star1 | plain at θ*1  | star1 at θ*2  |
/// | star2 | star2 at θ*1  | plain at θ*2  |
pub fn duality_class_map(spec: &ClassSpec, which: Which) -> Result<ClassSpec> {
    use Variant::*;
    let variant = match (spec.variant, which) {
        (Plain, Which::First) => Star1,
        (Plain, Which::Second) => Star2,
        (Star1, Which::First) => Plain,
        (Star1, Which::Second) => Star1,
        (Star2, Which::First) => Star2,
        (Star2, Which::Second) => Plain,
        (v, _) => {
            return Err(Error::InvalidClass(format!(
                "duality is defined for plain/star1/star2, got {}",
                v.name()
            )))
        }
    };
    let theta = adjoint_angle(spec.theta, which)?;
    Ok(spec.with_variant(variant).with_theta(theta))
}
