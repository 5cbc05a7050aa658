//! Closed-form real expressions used as numeric coordinates.
//!
//! An [`Expr`] is a small tree over rationals, `π`, `√`, `cos`, `sin` and
//! the field operations. It can be evaluated to an enclosing interval at
//! any precision, printed in a form the parser reads back to the same tree,
//! and folded into a quadratic [`Scalar`] when its value happens to lie in
//! one.

use super::interval::{BigInterval, IntervalError};
use crate::quadratic::{parse_rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Rational(BigRational),
    Pi,
    Sqrt(Box<Expr>),
    Cos(Box<Expr>),
    Sin(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("cannot parse expression `{input}` at byte {pos}: {msg}")]
    Parse { input: String, pos: usize, msg: String },
    #[error("division by zero in expression")]
    DivisionByZero,
}

impl Expr {
    pub fn rational(r: BigRational) -> Expr {
        Expr::Rational(r)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn pi() -> Expr {
        Expr::Pi
    }

    /// `(num/den)·π`.
    pub fn pi_times(num: i64, den: i64) -> Expr {
        Expr::ratio(num, den).mul(Expr::Pi)
    }

    pub fn from_scalar(s: &Scalar) -> Expr {
        if s.is_rational() {
            return Expr::Rational(s.a().clone());
        }
        let root = Expr::int(s.d() as i64).sqrt();
        let irr = Expr::Rational(s.b().clone()).mul(root);
        if s.a().is_zero() {
            irr
        } else {
            Expr::Rational(s.a().clone()).add(irr)
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Expr::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn sqrt(self) -> Expr {
        Expr::Sqrt(Box::new(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Expr {
        match self {
            Expr::Rational(r) => Expr::Rational(-r),
            e => Expr::Neg(Box::new(e)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Expr) -> Expr {
        match (self, other) {
            (Expr::Rational(a), Expr::Rational(b)) => Expr::Rational(a + b),
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Expr) -> Expr {
        match (self, other) {
            (Expr::Rational(a), Expr::Rational(b)) => Expr::Rational(a - b),
            (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Expr) -> Expr {
        match (self, other) {
            (Expr::Rational(a), Expr::Rational(b)) => Expr::Rational(a * b),
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    /// Division; a literal zero divisor is rejected at construction.
    pub fn try_div(self, other: Expr) -> Result<Expr, ExprError> {
        match (self, other) {
            (_, Expr::Rational(b)) if b.is_zero() => Err(ExprError::DivisionByZero),
            (Expr::Rational(a), Expr::Rational(b)) => Ok(Expr::Rational(a / b)),
            (a, b) => Ok(Expr::Div(Box::new(a), Box::new(b))),
        }
    }

    pub fn pow(self, e: i32) -> Result<Expr, ExprError> {
        match self {
            Expr::Rational(r) if e < 0 && r.is_zero() => Err(ExprError::DivisionByZero),
            Expr::Rational(r) => {
                let p = num_traits::pow(r, e.unsigned_abs() as usize);
                Ok(Expr::Rational(if e < 0 { p.recip() } else { p }))
            }
            b => Ok(Expr::Pow(Box::new(b), e)),
        }
    }

    /// Enclosure of the value at precision `prec`.
    pub fn eval(&self, prec: u32) -> Result<BigInterval, IntervalError> {
        Ok(match self {
            Expr::Rational(r) => BigInterval::from_rational(r, prec),
            Expr::Pi => BigInterval::pi(prec),
            Expr::Sqrt(x) => x.eval(prec)?.sqrt()?,
            Expr::Cos(x) => x.eval(prec)?.cos(),
            Expr::Sin(x) => x.eval(prec)?.sin(),
            Expr::Neg(x) => x.eval(prec)?.neg(),
            Expr::Add(a, b) => a.eval(prec)?.add(&b.eval(prec)?),
            Expr::Sub(a, b) => a.eval(prec)?.sub(&b.eval(prec)?),
            Expr::Mul(a, b) => a.eval(prec)?.mul(&b.eval(prec)?),
            Expr::Div(a, b) => a.eval(prec)?.div(&b.eval(prec)?)?,
            Expr::Pow(b, e) => b.eval(prec)?.pow(*e)?,
        })
    }

    pub fn approx(&self) -> f64 {
        self.eval(64).map(|iv| iv.mid_f64()).unwrap_or(f64::NAN)
    }

    /// `Some(q)` when the expression is syntactically `q·π`.
    pub fn as_pi_multiple(&self) -> Option<BigRational> {
        match self {
            Expr::Pi => Some(BigRational::one()),
            Expr::Rational(r) if r.is_zero() => Some(BigRational::zero()),
            Expr::Neg(x) => x.as_pi_multiple().map(|q| -q),
            Expr::Mul(a, b) => match (a.as_ref(), b.as_ref()) {
                (Expr::Rational(r), x) | (x, Expr::Rational(r)) => x.as_pi_multiple().map(|q| q * r),
                _ => None,
            },
            Expr::Div(a, b) => match b.as_ref() {
                Expr::Rational(r) => a.as_pi_multiple().map(|q| q / r),
                _ => None,
            },
            Expr::Add(a, b) => Some(a.as_pi_multiple()? + b.as_pi_multiple()?),
            Expr::Sub(a, b) => Some(a.as_pi_multiple()? - b.as_pi_multiple()?),
            _ => None,
        }
    }

    /// Exact value as a quadratic scalar, when the whole tree folds into a
    /// single field `ℚ(√d)`.
    pub fn as_quadratic(&self) -> Option<Scalar> {
        match self {
            Expr::Rational(r) => Some(Scalar::rational(r.clone())),
            Expr::Pi => None,
            Expr::Sqrt(x) => Scalar::sqrt_rational(x.as_quadratic()?.as_rational()?),
            Expr::Cos(x) => cos_pi_quadratic(&x.as_pi_multiple()?),
            Expr::Sin(x) => {
                let q = x.as_pi_multiple()?;
                cos_pi_quadratic(&(BigRational::new(1.into(), 2.into()) - q))
            }
            Expr::Neg(x) => Some(-x.as_quadratic()?),
            Expr::Add(a, b) => a.as_quadratic()?.try_add(&b.as_quadratic()?).ok(),
            Expr::Sub(a, b) => a.as_quadratic()?.try_sub(&b.as_quadratic()?).ok(),
            Expr::Mul(a, b) => a.as_quadratic()?.try_mul(&b.as_quadratic()?).ok(),
            Expr::Div(a, b) => a.as_quadratic()?.try_div(&b.as_quadratic()?).ok(),
            Expr::Pow(b, e) => {
                let base = b.as_quadratic()?;
                let mut acc = Scalar::one();
                for _ in 0..e.unsigned_abs() {
                    acc = acc.try_mul(&base).ok()?;
                }
                if *e < 0 {
                    acc.try_recip().ok()
                } else {
                    Some(acc)
                }
            }
        }
    }
}

/// `cos(qπ)` for `q` with denominator dividing 4 or 6.
fn cos_pi_quadratic(q: &BigRational) -> Option<Scalar> {
    let twelve = q * BigRational::from_integer(12.into());
    if !twelve.is_integer() {
        return None;
    }
    let j = twelve.to_integer().mod_floor(&BigInt::from(24)).to_u32()?;
    let j = if j > 12 { 24 - j } else { j };
    let half = |n: i64| BigRational::new(n.into(), 2.into());
    let root = |c: i64, d: u64| Scalar::new(BigRational::zero(), half(c), d).ok();
    match j {
        0 => Some(Scalar::integer(1)),
        2 => root(1, 3),
        3 => root(1, 2),
        4 => Some(Scalar::rational(half(1))),
        6 => Some(Scalar::integer(0)),
        8 => Some(Scalar::rational(half(-1))),
        9 => root(-1, 2),
        10 => root(-1, 3),
        12 => Some(Scalar::integer(-1)),
        _ => None,
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match (r.is_integer(), r.is_negative()) {
        (true, false) => write!(f, "{}", r.numer()),
        (true, true) => write!(f, "(-{})", r.numer().abs()),
        (false, false) => write!(f, "({}/{})", r.numer(), r.denom()),
        (false, true) => write!(f, "(-{}/{})", r.numer().abs(), r.denom()),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(r) => fmt_rational(r, f),
            Expr::Pi => write!(f, "pi"),
            Expr::Sqrt(x) => write!(f, "sqrt({x})"),
            Expr::Cos(x) => write!(f, "cos({x})"),
            Expr::Sin(x) => write!(f, "sin({x})"),
            Expr::Neg(x) => write!(f, "(-{x})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(b, e) => write!(f, "({b}^{e})"),
        }
    }
}

/// Grammar, loosest binding first:
///
/// ```text
/// expr  := term (('+' | '-') term)*
/// term  := unary (('*' | '/') unary | unary)*      juxtaposition multiplies
/// unary := '-' unary | power
/// power := atom ('^' ['-'] digits)?
/// atom  := number | 'pi' | 'π' | fn '(' expr ')' | 'sqrt' atom | '(' expr ')'
/// ```
///
/// Juxtaposition binds like `*`, so `2/5 pi` reads as `(2/5)·π`.
impl FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError::Parse { input: self.src.to_string(), pos: self.pos, msg: msg.to_string() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                acc = acc.add(self.term()?);
            } else if self.eat("-") {
                acc = acc.sub(self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' || c == '(' || c == 'π' => true,
            _ => ["pi", "sqrt", "cos", "sin"].iter().any(|k| self.rest().starts_with(k)),
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat("*") || self.eat("·") {
                acc = acc.mul(self.unary()?);
            } else if self.eat("/") {
                let at = self.pos;
                let rhs = self.unary()?;
                acc = acc.try_div(rhs).map_err(|_| ExprError::Parse {
                    input: self.src.to_string(),
                    pos: at,
                    msg: "division by zero".into(),
                })?;
            } else if self.starts_atom() {
                acc = acc.mul(self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat("-") {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat("^") {
            return Ok(base);
        }
        let neg = self.eat("-");
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.error("expected an integer exponent"));
        }
        self.pos += digits.len();
        let e: i32 = digits.parse().map_err(|_| self.error("exponent too large"))?;
        base.pow(if neg { -e } else { e }).map_err(|_| self.error("zero to a negative power"))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        if self.eat("(") {
            let e = self.expr()?;
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            return Ok(e);
        }
        if self.eat("pi") || self.eat("π") {
            return Ok(Expr::Pi);
        }
        if self.eat("sqrt") {
            return Ok(self.atom()?.sqrt());
        }
        for (name, f) in [("cos", Expr::cos as fn(Expr) -> Expr), ("sin", Expr::sin)] {
            if self.eat(name) {
                if !self.eat("(") {
                    return Err(self.error("expected `(`"));
                }
                let e = self.expr()?;
                if !self.eat(")") {
                    return Err(self.error("expected `)`"));
                }
                return Ok(f(e));
            }
        }
        self.number()
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let mut end = 0;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'-' || bytes[k] == b'+') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        if end == 0 {
            return Err(self.error("expected a number"));
        }
        let tok = &self.rest()[..end];
        let r = parse_rational(tok).ok_or_else(|| self.error("malformed number"))?;
        self.pos += end;
        Ok(Expr::Rational(r))
    }
}

/// A point whose coordinates are closed-form expressions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumericPoint {
    pub x: Expr,
    pub y: Expr,
}

impl NumericPoint {
    pub fn new(x: Expr, y: Expr) -> NumericPoint {
        NumericPoint { x, y }
    }

    /// `r·(cos t, sin t)` with `t = (num/den)·π`.
    pub fn polar(r: Expr, num: i64, den: i64) -> NumericPoint {
        let t = Expr::pi_times(num, den);
        NumericPoint::new(r.clone().mul(t.clone().cos()), r.mul(t.sin()))
    }

    pub fn from_scalars(x: &Scalar, y: &Scalar) -> NumericPoint {
        NumericPoint::new(Expr::from_scalar(x), Expr::from_scalar(y))
    }

    pub fn eval(&self, prec: u32) -> Result<(BigInterval, BigInterval), IntervalError> {
        Ok((self.x.eval(prec)?, self.y.eval(prec)?))
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.x.approx(), self.y.approx())
    }

    /// Both coordinates as quadratic scalars, if they fold.
    pub fn as_quadratic(&self) -> Option<(Scalar, Scalar)> {
        Some((self.x.as_quadratic()?, self.y.as_quadratic()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn parse(s: &str) -> Expr {
        s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse("2/5 pi"), Expr::ratio(2, 5).mul(Expr::Pi));
        assert_eq!(parse("-1/2"), Expr::ratio(-1, 2));
        assert_eq!(parse("0.125"), Expr::ratio(1, 8));
        assert_eq!(parse("1e-3"), Expr::ratio(1, 1000));
        assert_eq!(parse("sqrt 5"), Expr::int(5).sqrt());
        assert_eq!(parse("2^-2"), Expr::ratio(1, 4));
        assert_eq!(parse("cos(2π/5)"), Expr::int(2).mul(Expr::Pi).try_div(Expr::int(5)).unwrap().cos());
        assert!("1/0".parse::<Expr>().is_err());
        assert!("cos 3".parse::<Expr>().is_err());
        assert!("(1 + 2".parse::<Expr>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "(3 - sqrt 5)/2 * cos(3/5 pi)",
            "-sqrt(2)/2 + 1",
            "sin(pi/5)^2 - 1/3",
            "(-pi)^-1",
            "-(-7/3)",
        ] {
            let e = parse(s);
            assert_eq!(parse(&e.to_string()), e, "{s} -> {e}");
        }
    }

    #[test]
    fn folds_into_quadratic_fields() {
        let h = parse("cos(pi/6)").as_quadratic().unwrap();
        assert_eq!(h, Scalar::new(rat(0, 1), rat(1, 2), 3).unwrap());
        assert_eq!(parse("sin(pi/6)").as_quadratic().unwrap(), Scalar::rational(rat(1, 2)));
        assert_eq!(parse("sin(3/4 pi)").as_quadratic().unwrap(), Scalar::new(rat(0, 1), rat(1, 2), 2).unwrap());
        assert_eq!(parse("sqrt(12)/2").as_quadratic().unwrap(), Scalar::sqrt_of(3).unwrap());
        assert!(parse("cos(pi/5)").as_quadratic().is_none());
        assert!(parse("sqrt 2 + sqrt 3").as_quadratic().is_none());
    }

    #[test]
    fn evaluates_known_constants() {
        let golden = parse("(1 + sqrt 5)/4").eval(200).unwrap();
        let c = parse("cos(pi/5)").eval(200).unwrap();
        assert!(golden.overlaps(&c));
        assert!(c.width_log2().unwrap() < -150);
        let s = parse("sin(2/5 pi)^2 + cos(2/5 pi)^2").eval(128).unwrap();
        assert!(s.contains_rational(&rat(1, 1)));
    }
}
