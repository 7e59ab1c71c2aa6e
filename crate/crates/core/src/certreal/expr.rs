//! Real-number expressions and their text syntax.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := ['-'] INT | '(' ['-'] INT ')'
//! atom     := NUMBER | 'phi' | 'log' '(' expr ')' | 'sqrt' '(' INT ')' | '(' expr ')'
//! ```
//!
//! `NUMBER` is an integer or a finite decimal such as `1.4`. Rationals are
//! written as quotients, e.g. `1/3`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{CertError, CertifiedReal};
use crate::surd::QuadraticSurd;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealExpr {
    Rational(BigRational),
    Surd(QuadraticSurd),
    /// The golden ratio `(1 + √5)/2`.
    Phi,
    Log(Box<RealExpr>),
    Neg(Box<RealExpr>),
    Add(Box<RealExpr>, Box<RealExpr>),
    Sub(Box<RealExpr>, Box<RealExpr>),
    Mul(Box<RealExpr>, Box<RealExpr>),
    Div(Box<RealExpr>, Box<RealExpr>),
    Pow(Box<RealExpr>, i64),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("invalid expression at offset {offset}: unexpected {token} ({message})")]
pub struct ParseError {
    pub offset: usize,
    pub token: String,
    pub message: String,
}

#[allow(clippy::should_implement_trait)]
impl RealExpr {
    pub fn int(n: impl Into<BigInt>) -> RealExpr {
        RealExpr::Rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> RealExpr {
        RealExpr::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn log(e: RealExpr) -> RealExpr {
        RealExpr::Log(Box::new(e))
    }

    pub fn div(a: RealExpr, b: RealExpr) -> RealExpr {
        RealExpr::Div(Box::new(a), Box::new(b))
    }

    pub fn mul(a: RealExpr, b: RealExpr) -> RealExpr {
        RealExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn add(a: RealExpr, b: RealExpr) -> RealExpr {
        RealExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: RealExpr, b: RealExpr) -> RealExpr {
        RealExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn pow(a: RealExpr, e: i64) -> RealExpr {
        RealExpr::Pow(Box::new(a), e)
    }

    pub fn parse(src: &str) -> Result<RealExpr, ParseError> {
        let mut p = Parser::new(src)?;
        let e = p.expr()?;
        match p.peek() {
            Tok::End => Ok(e),
            _ => Err(p.unexpected("end of input")),
        }
    }

    /// The exact value, when the expression is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            RealExpr::Rational(r) => Some(r.clone()),
            RealExpr::Surd(s) => s.to_rational(),
            _ => None,
        }
    }

    /// Evaluates to an interval containing the exact value.
    pub fn eval(&self, bits: u32) -> Result<CertifiedReal, CertError> {
        Ok(match self {
            RealExpr::Rational(r) => CertifiedReal::from_rational(r, bits),
            RealExpr::Surd(s) => s.enclose(bits),
            RealExpr::Phi => QuadraticSurd::golden_ratio().enclose(bits),
            RealExpr::Log(e) => e.eval(bits)?.ln()?,
            RealExpr::Neg(e) => e.eval(bits)?.neg(),
            RealExpr::Add(a, b) => a.eval(bits)?.add(&b.eval(bits)?),
            RealExpr::Sub(a, b) => a.eval(bits)?.sub(&b.eval(bits)?),
            RealExpr::Mul(a, b) => a.eval(bits)?.mul(&b.eval(bits)?),
            RealExpr::Div(a, b) => a.eval(bits)?.div(&b.eval(bits)?)?,
            RealExpr::Pow(a, n) => a.eval(bits)?.powi(*n)?,
        })
    }
}

impl fmt::Display for RealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealExpr::Rational(r) => {
                if r.is_integer() {
                    if r.is_negative() {
                        write!(f, "({})", r.numer())
                    } else {
                        write!(f, "{}", r.numer())
                    }
                } else {
                    write!(f, "({}/{})", r.numer(), r.denom())
                }
            }
            RealExpr::Surd(s) => write!(f, "({s})"),
            RealExpr::Phi => f.write_str("phi"),
            RealExpr::Log(e) => write!(f, "log({e})"),
            RealExpr::Neg(e) => write!(f, "-({e})"),
            RealExpr::Add(a, b) => write!(f, "({a} + {b})"),
            RealExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            RealExpr::Mul(a, b) => write!(f, "({a}*{b})"),
            RealExpr::Div(a, b) => write!(f, "({a}/{b})"),
            RealExpr::Pow(a, n) => {
                if *n < 0 {
                    write!(f, "({a}^({n}))")
                } else {
                    write!(f, "({a}^{n})")
                }
            }
        }
    }
}

impl std::str::FromStr for RealExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<RealExpr, ParseError> {
        RealExpr::parse(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational, String),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(_, s) => format!("number '{s}'"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".to_string(),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let value = parse_decimal(&text).ok_or_else(|| ParseError {
                offset: off,
                token: format!("'{text}'"),
                message: "malformed number".into(),
            })?;
            out.push((off, Tok::Num(value, text)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((off, Tok::Ident(text)));
        } else if "+-*/^()".contains(c) {
            out.push((off, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError {
                offset: off,
                token: format!("'{c}'"),
                message: "not part of the expression syntax".into(),
            });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

/// `"12"` or `"1.25"` as an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if !frac.bytes().all(|b| b.is_ascii_digit()) || (text.contains('.') && frac.is_empty()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(digits, den))
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let (offset, tok) = &self.toks[self.pos];
        ParseError {
            offset: *offset,
            token: tok.describe(),
            message: format!("expected {wanted}"),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    fn expr(&mut self) -> Result<RealExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = RealExpr::add(lhs, self.term()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = RealExpr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<RealExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = RealExpr::mul(lhs, self.unary()?);
                }
                Tok::Sym('/') => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = match (&lhs, &rhs) {
                        // fold integer quotients into rational literals
                        (RealExpr::Rational(a), RealExpr::Rational(b))
                            if a.is_integer() && b.is_integer() && !b.is_zero() =>
                        {
                            RealExpr::Rational(a / b)
                        }
                        _ => RealExpr::div(lhs, rhs),
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<RealExpr, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            let inner = self.unary()?;
            return Ok(match inner {
                RealExpr::Rational(r) => RealExpr::Rational(-r),
                e => RealExpr::Neg(Box::new(e)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<RealExpr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let paren = *self.peek() == Tok::Sym('(');
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Sym('-');
        if neg {
            self.bump();
        }
        let e = self.small_int("integer exponent")?;
        if paren {
            self.expect(')')?;
        }
        Ok(RealExpr::pow(base, if neg { -e } else { e }))
    }

    fn small_int(&mut self, wanted: &str) -> Result<i64, ParseError> {
        match self.peek().clone() {
            Tok::Num(r, _) if r.is_integer() => match i64::try_from(r.numer().clone()) {
                Ok(v) => {
                    self.bump();
                    Ok(v)
                }
                Err(_) => Err(self.unexpected(wanted)),
            },
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn atom(&mut self) -> Result<RealExpr, ParseError> {
        match self.peek().clone() {
            Tok::Num(r, _) => {
                self.bump();
                Ok(RealExpr::Rational(r))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "phi" => {
                    self.bump();
                    Ok(RealExpr::Phi)
                }
                "log" => {
                    self.bump();
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(RealExpr::log(e))
                }
                "sqrt" => {
                    self.bump();
                    self.expect('(')?;
                    let d = self.small_int("non-negative integer radicand")?;
                    if d < 0 {
                        return Err(self.unexpected("non-negative integer radicand"));
                    }
                    self.expect(')')?;
                    Ok(RealExpr::Surd(QuadraticSurd::new(
                        BigInt::zero(),
                        BigInt::one(),
                        BigInt::one(),
                        BigInt::from(d),
                    )))
                }
                _ => Err(self.unexpected("a number, 'phi', 'log', 'sqrt' or '('")),
            },
            _ => Err(self.unexpected("a number, 'phi', 'log', 'sqrt' or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(src: &str, bits: u32) -> CertifiedReal {
        RealExpr::parse(src).unwrap().eval(bits).unwrap()
    }

    #[test]
    fn parses_the_templates_used_by_the_pipelines() {
        for src in [
            "log(phi)/log(2)",
            "log(3)/log(2)",
            "log(3/(1+2^(-7)))/log(2)",
            "log(3*(1+phi^(-12)))/log(2)",
            "phi - (1+sqrt(5))/2",
            "-2^-3 + 1.4",
        ] {
            RealExpr::parse(src).unwrap();
        }
    }

    #[test]
    fn log2_value() {
        let x = val("log(2)", 64);
        assert!((x.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(x.width() < super::super::Dyadic::pow2(-60));
    }

    #[test]
    fn phi_identity_is_near_zero() {
        let x = val("phi - (1+sqrt(5))/2", 64);
        assert!(x.contains_zero());
        assert!(x.width() < super::super::Dyadic::pow2(-50));
    }

    #[test]
    fn ratio_of_logs() {
        let x = val("log(phi)/log(2)", 128);
        assert!((x.to_f64() - 0.694241913630617).abs() < 1e-14);
    }

    #[test]
    fn precedence_and_unary_minus() {
        let x = val("2 + 3*4^2 - -1", 64);
        assert_eq!(x.to_f64(), 51.0);
        let y = val("-2^2", 64);
        assert_eq!(y.to_f64(), -4.0);
        assert_eq!(val("1.4", 64).lo_rational(), val("14/10", 64).lo_rational());
    }

    #[test]
    fn errors_name_the_offending_token() {
        let e = RealExpr::parse("log(2) $ 3").unwrap_err();
        assert_eq!(e.offset, 7);
        assert!(e.token.contains('$'));
        let e = RealExpr::parse("log(2").unwrap_err();
        assert!(e.token.contains("end of input"));
        let e = RealExpr::parse("pi").unwrap_err();
        assert!(e.token.contains("pi"));
        let e = RealExpr::parse("2^x").unwrap_err();
        assert!(e.message.contains("exponent"));
    }

    #[test]
    fn display_reparses_to_same_value() {
        for src in ["log(3/(1+2^(-7)))/log(2)", "-(phi^3) + 1/7", "sqrt(5)*2"] {
            let e = RealExpr::parse(src).unwrap();
            let again = RealExpr::parse(&e.to_string()).unwrap();
            assert!(e.eval(96).unwrap().overlaps(&again.eval(96).unwrap()));
        }
    }

    #[test]
    fn log_of_negative_is_domain_error() {
        let e = RealExpr::parse("log(1-2)").unwrap();
        assert!(matches!(e.eval(64), Err(CertError::Domain(_))));
    }
}
