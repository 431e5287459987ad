use crate::error::{Error, Result};
use crate::lattice::GridSpec;
use crate::symlang::{Point, SymbolExpr, Var};

/// Truncated `𝔸^m` norm of `a(y, α)`:
/// `max_{j <= j_max, l <= l_max} sup (1 + |y| + |α|)^{−m} |∂_y^j ∂_α^l a|`
/// over the centered spatial lattice `y ∈ [−L/2, L/2)` times the frequency
/// lattice.
pub fn amnorm(a: &SymbolExpr, m: f64, grid: &GridSpec, j_max: u32, l_max: u32) -> Result<f64> {
    for v in a.vars() {
        if v != Var::Y && v != Var::Alpha {
            return Err(Error::InvalidParameter(format!(
                "amnorm symbols are functions of (y, alpha), found `{v}`"
            )));
        }
    }
    let n = grid.n_points();
    let ys: Vec<f64> = (0..n)
        .map(|i| (i as f64 - (n / 2) as f64) * grid.dx())
        .collect();
    let freqs = grid.frequencies();
    let mut best = 0.0f64;
    for j in 0..=j_max {
        for l in 0..=l_max {
            let d = a.differentiate(Var::Y, j).differentiate(Var::Alpha, l);
            for &y in &ys {
                for &alpha in &freqs {
                    let p = Point {
                        y,
                        alpha,
                        ..Point::default()
                    };
                    let v = d.eval(&p).abs() * (1.0 + y.abs() + alpha.abs()).powf(-m);
                    if !v.is_finite() {
                        return Err(Error::NonFinite {
                            value: v.to_string(),
                            point: format!("(y={y}, alpha={alpha})"),
                        });
                    }
                    best = best.max(v);
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::lattice::make_grid;
    use crate::symlang::parse;

    #[test]
    fn examples() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        assert_eq!(amnorm(&parse("1").unwrap(), 0.0, &g, 2, 2).unwrap(), 1.0);
        let y = amnorm(&parse("y").unwrap(), 1.0, &g, 1, 1).unwrap();
        assert!(y <= 1.0 && y > 0.7);
        let gauss = amnorm(&parse("exp(-(y^2+alpha^2))").unwrap(), 0.0, &g, 2, 2).unwrap();
        assert!(gauss.is_finite() && gauss >= 1.0);
        assert!(amnorm(&parse("x").unwrap(), 0.0, &g, 0, 0).is_err());
    }
}
