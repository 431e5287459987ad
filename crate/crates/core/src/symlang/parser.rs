//! Recursive-descent parser.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | factor
//! factor   := base ('^' exponent)?
//! exponent := ['-'] (number | 'pi' | '(' expr ')')      constant only
//! base     := number | imag | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! imag     := number 'i'                                e.g. 1i, 2.5i
//! ```
//!
//! There is no implicit multiplication. `-a^2` is `-(a^2)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::ast::SymbolExpr;
use super::complex::ComplexExpr;
use super::validate::validate;
use super::{Func, SymlangError, Var};

#[derive(Debug, Clone, PartialEq, Error, Serialize)]
pub struct ParseError {
    /// Byte offset into the source.
    pub position: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.position, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Imag(v) => format!("imaginary literal {v}i"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn err(position: usize, message: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        position,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let is_ident = |b: u8| b.is_ascii_alphanumeric() || b == b'_';
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b.is_ascii_digit() || b == b'.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value: f64 = text
                .parse()
                .map_err(|_| err(start, format!("malformed number `{text}`"), &["number"]))?;
            if i < bytes.len()
                && bytes[i] == b'i'
                && !(i + 1 < bytes.len() && is_ident(bytes[i + 1]))
            {
                i += 1;
                out.push((Tok::Imag(value), start));
            } else {
                out.push((Tok::Num(value), start));
            }
        } else if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len() && is_ident(bytes[i]) {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if b"+-*/^(),".contains(&b) {
            out.push((Tok::Sym(b as char), i));
            i += 1;
        } else {
            let c = src[i..].chars().next().unwrap_or('?');
            return Err(err(i, format!("unexpected character `{c}`"), &[]));
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

/// Parse tree before splitting into real and imaginary parts.
#[derive(Clone, Debug)]
enum Raw {
    Num(f64),
    Imag(f64),
    Var(Var),
    Neg(Box<Raw>),
    Bin(char, Box<Raw>, Box<Raw>),
    Pow(Box<Raw>, f64),
    Call(Func, Box<Raw>),
}

const OPERAND: &[&str] = &["number", "identifier", "(", "-"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            return Ok(());
        }
        let found = self.peek().describe();
        Err(err(
            self.offset(),
            format!("expected `{c}`, found {found}"),
            &[&c.to_string()],
        ))
    }

    fn expr(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym(c @ ('+' | '-')) => *c,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Raw::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym(c @ ('*' | '/')) => *c,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Raw::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        if self.eat('-') {
            return Ok(Raw::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Raw, ParseError> {
        let base = self.base()?;
        if self.eat('^') {
            let p = self.exponent()?;
            return Ok(Raw::Pow(Box::new(base), p));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<f64, ParseError> {
        let at = self.offset();
        let negate = self.eat('-');
        let value = match self.bump() {
            (Tok::Num(v), _) => v,
            (Tok::Ident(s), _) if s == "pi" => std::f64::consts::PI,
            (Tok::Sym('('), _) => {
                let inner = self.expr()?;
                self.expect(')')?;
                match lower(&inner).ok().and_then(|c| c.as_real_const()) {
                    Some(v) => v,
                    None => return Err(err(at, "exponent must be a real constant", &[])),
                }
            }
            (t, p) => {
                return Err(err(
                    p,
                    format!("expected exponent, found {}", t.describe()),
                    &["number", "pi", "("],
                ))
            }
        };
        Ok(if negate { -value } else { value })
    }

    fn base(&mut self) -> Result<Raw, ParseError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Raw::Num(v)),
            Tok::Imag(v) => Ok(Raw::Imag(v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => self.ident(name, at),
            t => Err(err(
                at,
                format!("expected an operand, found {}", t.describe()),
                OPERAND,
            )),
        }
    }

    fn ident(&mut self, name: String, at: usize) -> Result<Raw, ParseError> {
        if let Some(f) = Func::from_name(&name) {
            self.expect('(')?;
            let arg = self.expr()?;
            if *self.peek() == Tok::Sym(',') {
                return Err(err(
                    self.offset(),
                    format!("`{name}` takes exactly one argument"),
                    &[")"],
                ));
            }
            self.expect(')')?;
            return Ok(Raw::Call(f, Box::new(arg)));
        }
        if let Some(v) = Var::from_name(&name) {
            return Ok(Raw::Var(v));
        }
        match name.as_str() {
            "pi" => Ok(Raw::Num(std::f64::consts::PI)),
            "i" => Ok(Raw::Imag(1.0)),
            _ => {
                let mut expected: Vec<&str> = Var::ALL.iter().map(|v| v.name()).collect();
                expected.extend(Func::ALL.iter().map(|f| f.name()));
                expected.extend(["pi", "i"]);
                Err(err(at, format!("unknown identifier `{name}`"), &expected))
            }
        }
    }
}

fn lower(raw: &Raw) -> Result<ComplexExpr, SymlangError> {
    Ok(match raw {
        Raw::Num(v) => ComplexExpr::real(SymbolExpr::constant(*v)),
        Raw::Imag(v) => ComplexExpr::new(SymbolExpr::zero(), SymbolExpr::constant(*v)),
        Raw::Var(v) => ComplexExpr::real(SymbolExpr::var(*v)),
        Raw::Neg(u) => lower(u)?.neg(),
        Raw::Bin(op, a, b) => {
            let (a, b) = (lower(a)?, lower(b)?);
            match op {
                '+' => a.add(b),
                '-' => a.sub(b),
                '*' => a.mul(b),
                _ => a.div(b)?,
            }
        }
        Raw::Pow(u, p) => lower(u)?.pow(*p)?,
        Raw::Call(f, u) => lower(u)?.call(*f)?,
    })
}

fn parse_raw(source: &str) -> Result<Raw, ParseError> {
    let mut p = Parser {
        toks: lex(source)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let found = p.peek().describe();
        return Err(err(
            p.offset(),
            format!("unexpected {found}"),
            &["+", "-", "*", "/", "^", "end of input"],
        ));
    }
    Ok(e)
}

/// Parses and validates a real expression.
pub fn parse(source: &str) -> Result<SymbolExpr, SymlangError> {
    let c = lower(&parse_raw(source)?)?;
    if !c.im.is_zero() {
        return Err(SymlangError::Complex(format!(
            "`{source}` has an imaginary part; use a complex symbol input"
        )));
    }
    validate(&c.re)?;
    Ok(c.re)
}

/// Parses and validates a complex expression (`i` or `<number>i` literals).
pub fn parse_complex(source: &str) -> Result<ComplexExpr, SymlangError> {
    let c = lower(&parse_raw(source)?)?;
    validate(&c.re)?;
    validate(&c.im)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::super::Point;
    use super::*;

    fn perr(src: &str) -> ParseError {
        match parse(src) {
            Err(SymlangError::Parse(e)) => e,
            other => panic!("expected parse error for {src:?}, got {other:?}"),
        }
    }

    #[test]
    fn constant_and_gaussian() {
        assert_eq!(parse("1").unwrap(), SymbolExpr::one());
        let g = parse("exp(-(alpha^2+beta^2))").unwrap();
        let a = SymbolExpr::var(Var::Alpha);
        let b = SymbolExpr::var(Var::Beta);
        let want = SymbolExpr::exp(-(SymbolExpr::pow(a, 2.0) + SymbolExpr::pow(b, 2.0)));
        assert_eq!(g, want);
    }

    #[test]
    fn unclosed_paren_reports_offset() {
        let e = perr("1/(alpha");
        assert_eq!(e.position, 8);
        assert_eq!(e.expected, vec![")".to_string()]);
    }

    #[test]
    fn precedence() {
        let p = Point::bilinear(0.0, 3.0, 2.0);
        assert_eq!(parse("-alpha^2").unwrap().eval(&p), -9.0);
        assert_eq!(parse("1+2*alpha-beta/2").unwrap().eval(&p), 6.0);
        assert_eq!(parse("2^3").unwrap().eval(&p), 8.0);
        assert_eq!(parse("(1+beta^2)^(-1/2)").unwrap().eval(&p), 5f64.powf(-0.5));
        assert!((parse("bracket(alpha)^-2").unwrap().eval(&p) - 0.1).abs() < 1e-16);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(perr("2x").position, 1);
        assert_eq!(perr("foo(1)").position, 0);
        assert_eq!(perr("exp(1, 2)").position, 5);
        assert_eq!(perr("alpha^beta").position, 6);
        assert_eq!(perr("").position, 0);
        assert_eq!(perr("1 $ 2").position, 2);
        assert!(matches!(parse("1/alpha"), Err(SymlangError::Invalid(_))));
        assert!(matches!(parse("log(alpha)"), Err(SymlangError::Invalid(_))));
        assert!(matches!(parse("i*x"), Err(SymlangError::Complex(_))));
    }

    #[test]
    fn complex_literals() {
        let c = parse_complex("0+1i*alpha").unwrap();
        let v = c.eval(&Point::bilinear(0.0, 2.0, 0.0));
        assert_eq!((v.re, v.im), (0.0, 2.0));
        let e = parse_complex("exp(i*2*x)").unwrap();
        let v = e.eval(&Point::linear(0.3, 0.0));
        assert!((v.re - 0.6f64.cos()).abs() < 1e-15 && (v.im - 0.6f64.sin()).abs() < 1e-15);
        assert!(parse_complex("1/(1+i*x)").is_err());
        assert!(parse_complex("atan(i*x)").is_err());
        let sq = parse_complex("(1+i*x)^2").unwrap().eval(&Point::linear(2.0, 0.0));
        assert_eq!((sq.re, sq.im), (-3.0, 4.0));
    }
}
