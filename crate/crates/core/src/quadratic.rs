//! Elements `a + b√d` of a real quadratic field with rational `a`, `b`.
//!
//! Every scalar is kept canonical: `d` is square-free, and a scalar with
//! `b = 0` is stored with `d = 0`, so a rational has exactly one
//! representation no matter which field it came from. Arithmetic between
//! two irrational scalars over different radicands has no meaning here; the
//! operator impls panic on it and the `try_*` methods report it.

use crate::scalar::{ExactField, ExactScalar, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("radicand {0} is not square-free")]
    NotSquareFree(u64),
    #[error("cannot combine elements of Q(√{0}) and Q(√{1})")]
    IncompatibleFields(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse field element `{0}`")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    d: u64,
}

pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return true;
    }
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl Scalar {
    /// `a + b√d`. Fails unless `d` is square-free; `d ∈ {0, 1}` folds `b`
    /// into the rational part.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Scalar, FieldError> {
        if !is_square_free(d) {
            return Err(FieldError::NotSquareFree(d));
        }
        Ok(Scalar::canonical(a, b, d))
    }

    fn canonical(a: BigRational, b: BigRational, d: u64) -> Scalar {
        match d {
            0 => Scalar { a, b: BigRational::zero(), d: 0 },
            1 => Scalar { a: a + b, b: BigRational::zero(), d: 0 },
            _ if b.is_zero() => Scalar { a, b, d: 0 },
            _ => Scalar { a, b, d },
        }
    }

    pub fn rational(a: BigRational) -> Scalar {
        Scalar { a, b: BigRational::zero(), d: 0 }
    }

    pub fn integer(n: i64) -> Scalar {
        Scalar::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `√d` for a square-free `d`.
    pub fn sqrt_of(d: u64) -> Result<Scalar, FieldError> {
        Scalar::new(BigRational::zero(), BigRational::one(), d)
    }

    /// Exact square root of a non-negative rational, when it lies in some
    /// quadratic field with a radicand that fits in `u64`.
    pub fn sqrt_rational(r: &BigRational) -> Option<Scalar> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Scalar::zero());
        }
        // sqrt(p/q) = sqrt(p q) / q
        let pq = (r.numer() * r.denom()).to_biguint()?;
        let (s, m) = square_free_split(&pq)?;
        let coeff = BigRational::new(BigInt::from(s), r.denom().clone());
        let m = m.to_u64()?;
        Some(Scalar::canonical(BigRational::zero(), coeff, m))
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// Radicand; `0` for rationals.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    fn join_field(&self, other: &Scalar) -> Result<u64, FieldError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(FieldError::IncompatibleFields(x, y)),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        let d = self.join_field(other)?;
        Ok(Scalar::canonical(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        let d = self.join_field(other)?;
        Ok(Scalar::canonical(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        let d = self.join_field(other)?;
        let dr = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Scalar::canonical(a, b, d))
    }

    /// `a² - b²d`; non-zero for every non-zero element.
    pub fn norm(&self) -> BigRational {
        let dr = BigRational::from_integer(BigInt::from(self.d));
        &self.a * &self.a - &self.b * &self.b * dr
    }

    pub fn conjugate(&self) -> Scalar {
        Scalar { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    pub fn try_recip(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Scalar::canonical(&self.a / &n, -(&self.b / &n), self.d))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.try_mul(&other.try_recip()?)
    }

    /// Exact sign of `a + b√d` by rational comparisons only.
    pub fn signum(&self) -> Sign {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (s, Sign::Zero) | (Sign::Zero, s) => s,
            (x, y) if x == y => x,
            _ => {
                // opposite signs: compare a² against b²d
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
                match a2.cmp(&b2d) {
                    std::cmp::Ordering::Greater => sa,
                    std::cmp::Ordering::Less => sb,
                    std::cmp::Ordering::Equal => Sign::Zero,
                }
            }
        }
    }

    pub fn approx(&self) -> f64 {
        let a = ToPrimitive::to_f64(&self.a).unwrap_or(f64::NAN);
        if self.d == 0 {
            return a;
        }
        let b = ToPrimitive::to_f64(&self.b).unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    /// Scalars over `Q(√d)` that embed into the field with radicand `d`.
    pub fn lies_in(&self, d: u64) -> bool {
        self.d == 0 || self.d == d
    }
}

fn rational_sign(r: &BigRational) -> Sign {
    if r.is_zero() {
        Sign::Zero
    } else if r.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Splits `n = s² m` with `m` square-free. Gives up (returns `None`) when a
/// cofactor too large for trial division remains.
pub(crate) fn square_free_split(n: &BigUint) -> Option<(BigUint, BigUint)> {
    const LIMIT: u64 = 100_000;
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut m = BigUint::one();
    let mut p = 2u64;
    while p <= LIMIT {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            s *= pb.pow(e / 2);
            if e % 2 == 1 {
                m *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Some((s, m));
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
        return Some((s, m));
    }
    let lim = BigUint::from(LIMIT);
    if rest <= &lim * &lim {
        // no factor up to LIMIT, so the cofactor is prime
        m *= rest;
        return Some((s, m));
    }
    None
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::rational(BigRational::one())
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);
forward_op!(Div, div, try_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a, b: -self.b, d: self.d }
    }
}

impl ExactScalar for Scalar {
    fn sign(&self) -> Sign {
        self.signum()
    }

    fn to_f64(&self) -> f64 {
        self.approx()
    }

    fn from_rational(r: BigRational) -> Self {
        Scalar::rational(r)
    }

    fn compatible_with(&self, other: &Self) -> bool {
        self.join_field(other).is_ok()
    }
}

impl ExactField for Scalar {}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::rational(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            return write!(f, "{}", self.a);
        }
        let op = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "({} {} {}*sqrt {})", self.a, op, self.b.abs(), self.d)
    }
}

/// Parses an exact rational: `p`, `p/q`, or a decimal such as `-0.125` or
/// `1.5e-3`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Accepts rationals, decimals and sums of rational and `c*sqrt d` terms
/// such as `(1/2 + 1/2*sqrt 3)`, `(0 - 1/3*sqrt 3)`, `2*sqrt 5` or `sqrt 2`.
impl FromStr for Scalar {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FieldError::Parse(s.to_string());
        let mut t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        while t.starts_with('(') && t.ends_with(')') && encloses(&t) {
            t = t[1..t.len() - 1].to_string();
        }
        if t.is_empty() {
            return Err(err());
        }
        let mut total = Scalar::zero();
        for term in split_terms(&t) {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let value = match body.find("sqrt") {
                None => Scalar::rational(parse_rational(body).ok_or_else(err)?),
                Some(i) => {
                    let coeff = body[..i].trim_end_matches('*');
                    let coeff = if coeff.is_empty() {
                        BigRational::one()
                    } else {
                        parse_rational(coeff).ok_or_else(err)?
                    };
                    let rad = body[i + 4..].trim_start_matches('(').trim_end_matches(')');
                    let d: u64 = rad.parse().map_err(|_| err())?;
                    Scalar::new(BigRational::zero(), coeff, d)?
                }
            };
            let value = if neg { -value } else { value };
            total = total.try_add(&value)?;
        }
        Ok(total)
    }
}

fn encloses(t: &str) -> bool {
    let mut depth = 0i32;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i != t.len() - 1 {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

fn split_terms(t: &str) -> Vec<&str> {
    let bytes = t.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut depth = 0i32;
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start => {
                let prev = bytes[i - 1];
                if !matches!(prev, b'/' | b'*' | b'e' | b'E') {
                    out.push(&t[start..i]);
                    start = i;
                }
            }
            _ => {}
        }
    }
    out.push(&t[start..]);
    out
}
