//! Static guard check by interval arithmetic over all of ℝ⁶.
//!
//! Accepted expressions evaluate without division by zero, `log`/`sqrt` of
//! non-positive values or fractional powers of negative bases. The rules are
//! chosen so that derivatives of accepted expressions are accepted again:
//! `sqrt` and fractional powers need a strictly positive argument, `tan` is
//! allowed on constants only.

use super::ast::{is_integer, powf, SymbolExpr};
use super::{Func, SymlangError};

use SymbolExpr as E;

#[derive(Clone, Copy, Debug)]
struct Range {
    lo: f64,
    hi: f64,
    /// Known to be `> 0` even when `lo == 0` (e.g. `exp`).
    pos: bool,
    neg: bool,
}

impl Range {
    fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            pos: lo > 0.0,
            neg: hi < 0.0,
        }
    }

    fn point(c: f64) -> Self {
        Self::new(c, c)
    }

    fn all() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    fn positive(lo: f64, hi: f64) -> Self {
        Self {
            pos: true,
            ..Self::new(lo.max(0.0), hi)
        }
    }

    fn nonzero(&self) -> bool {
        self.pos || self.neg
    }

    fn nonneg(&self) -> bool {
        self.pos || self.lo >= 0.0
    }

    fn nonpos(&self) -> bool {
        self.neg || self.hi <= 0.0
    }

    fn is_const(&self) -> bool {
        self.lo == self.hi && self.lo.is_finite()
    }
}

fn fix(lo: f64, hi: f64) -> (f64, f64) {
    (
        if lo.is_nan() { f64::NEG_INFINITY } else { lo },
        if hi.is_nan() { f64::INFINITY } else { hi },
    )
}

fn neg(a: Range) -> Range {
    Range {
        lo: -a.hi,
        hi: -a.lo,
        pos: a.neg,
        neg: a.pos,
    }
}

fn add(a: Range, b: Range) -> Range {
    let (lo, hi) = fix(a.lo + b.lo, a.hi + b.hi);
    let mut r = Range::new(lo, hi);
    r.pos |= (a.pos && b.nonneg()) || (b.pos && a.nonneg());
    r.neg |= (a.neg && b.nonpos()) || (b.neg && a.nonpos());
    r
}

fn mul_bounds(a: Range, b: Range) -> (f64, f64) {
    // bounds of extended intervals: 0 · ∞ = 0
    let m = |x: f64, y: f64| if x == 0.0 || y == 0.0 { 0.0 } else { x * y };
    let prods = [m(a.lo, b.lo), m(a.lo, b.hi), m(a.hi, b.lo), m(a.hi, b.hi)];
    let lo = prods.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = prods.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn mul(a: Range, b: Range) -> Range {
    let (lo, hi) = mul_bounds(a, b);
    let mut r = Range::new(lo, hi);
    r.pos |= (a.pos && b.pos) || (a.neg && b.neg);
    r.neg |= (a.pos && b.neg) || (a.neg && b.pos);
    r
}

fn recip(b: Range) -> Range {
    // b excludes 0
    let (lo, hi) = (1.0 / b.hi, 1.0 / b.lo);
    Range {
        lo,
        hi,
        pos: b.pos,
        neg: b.neg,
    }
}

fn pow(a: Range, p: f64) -> Range {
    if is_integer(p) {
        let even = (p as i64) % 2 == 0;
        let (lo, hi) = if a.nonneg() {
            (powf(a.lo, p), powf(a.hi, p))
        } else if a.nonpos() {
            if even {
                (powf(a.hi, p), powf(a.lo, p))
            } else {
                (powf(a.lo, p), powf(a.hi, p))
            }
        } else if even && p > 0.0 {
            (0.0, powf(a.lo, p).max(powf(a.hi, p)))
        } else if p > 0.0 {
            (powf(a.lo, p), powf(a.hi, p))
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        };
        let (lo, hi) = fix(lo.min(hi), hi.max(lo));
        let mut r = Range::new(lo, hi);
        r.pos |= a.pos || (even && a.nonzero());
        r.neg |= a.neg && !even;
        r
    } else {
        let (x, y) = (powf(a.lo, p), powf(a.hi, p));
        let (lo, hi) = fix(x.min(y), x.max(y));
        Range::positive(lo, hi)
    }
}

fn range(e: &E) -> Result<Range, SymlangError> {
    let bad = |msg: String| Err(SymlangError::Invalid(msg));
    Ok(match e {
        E::Const(c) => {
            if !c.is_finite() {
                return bad(format!("non-finite constant {c}"));
            }
            Range::point(*c)
        }
        E::Var(_) => Range::all(),
        E::Neg(u) => neg(range(u)?),
        E::Add(a, b) => add(range(a)?, range(b)?),
        E::Sub(a, b) => add(range(a)?, neg(range(b)?)),
        E::Mul(a, b) => mul(range(a)?, range(b)?),
        E::Div(a, b) => {
            let rb = range(b)?;
            if !rb.nonzero() {
                return bad(format!("denominator `{b}` may vanish"));
            }
            mul(range(a)?, recip(rb))
        }
        E::Pow(u, p) => {
            let r = range(u)?;
            if !p.is_finite() {
                return bad(format!("non-finite exponent {p}"));
            }
            if is_integer(*p) {
                if *p < 0.0 && !r.nonzero() {
                    return bad(format!("base `{u}` of negative power may vanish"));
                }
            } else if !r.pos {
                return bad(format!("base `{u}` of fractional power must be positive"));
            }
            pow(r, *p)
        }
        E::Call(f, u) => {
            let r = range(u)?;
            match f {
                Func::Exp => Range::positive(r.lo.exp(), r.hi.exp()),
                Func::Log => {
                    if !r.pos {
                        return bad(format!("argument `{u}` of log must be positive"));
                    }
                    let (lo, hi) = fix(r.lo.ln(), r.hi.ln());
                    Range::new(lo, hi)
                }
                Func::Sqrt => {
                    if !r.pos {
                        return bad(format!("argument `{u}` of sqrt must be positive"));
                    }
                    Range::positive(r.lo.sqrt(), r.hi.sqrt())
                }
                Func::Sin | Func::Cos => Range::new(-1.0, 1.0),
                Func::Tan => {
                    if !r.is_const() || r.lo.cos() == 0.0 {
                        return bad(format!("tan is allowed on constants only, got `{u}`"));
                    }
                    Range::point(r.lo.tan())
                }
                Func::Atan => Range::new(-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
                Func::Bracket => {
                    let m = if r.nonneg() {
                        r.lo
                    } else if r.nonpos() {
                        -r.hi
                    } else {
                        0.0
                    };
                    let big = r.lo.abs().max(r.hi.abs());
                    Range::positive(m.hypot(1.0), big.hypot(1.0))
                }
            }
        }
    })
}

/// Rejects expressions with unguarded division, `log`, `sqrt` or powers.
pub fn validate(e: &SymbolExpr) -> Result<(), SymlangError> {
    range(e).map(|_| ())
}
