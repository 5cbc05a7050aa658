//! Outward-rounded fixed-point intervals over arbitrary-precision integers.
//!
//! A `BigInterval` at precision `p` is `[lo·2⁻ᵖ, hi·2⁻ᵖ]`. Every operation
//! rounds its lower end down and its upper end up, so the true value of any
//! computation stays enclosed. Transcendental functions evaluate at a few
//! dozen guard bits above the requested precision and widen by their
//! truncation error bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

const GUARD: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("square root of a negative interval")]
    NegativeSqrt,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigInterval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_shr(x: &BigInt, n: u32) -> BigInt {
    x >> n
}

fn ceil_shr(x: &BigInt, n: u32) -> BigInt {
    -((-x) >> n)
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn pow2(n: u32) -> BigInt {
    BigInt::one() << n
}

impl BigInterval {
    /// Builds `[lo, hi]·2⁻ᵖ`, swapping the ends if needed.
    pub fn from_raw(lo: BigInt, hi: BigInt, prec: u32) -> BigInterval {
        if lo <= hi {
            BigInterval { lo, hi, prec }
        } else {
            BigInterval { lo: hi, hi: lo, prec }
        }
    }

    /// The exact dyadic value `m·2⁻ᵖ`.
    pub fn dyadic(m: BigInt, prec: u32) -> BigInterval {
        BigInterval { lo: m.clone(), hi: m, prec }
    }

    pub fn from_int(n: i64, prec: u32) -> BigInterval {
        BigInterval::dyadic(BigInt::from(n) << prec, prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> BigInterval {
        let scaled = r.numer() << prec;
        BigInterval {
            lo: div_floor(&scaled, r.denom()),
            hi: div_ceil(&scaled, r.denom()),
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_raw(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.prec))
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.prec))
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        BigRational::new(&self.lo + &self.hi, pow2(self.prec + 1)).to_f64().unwrap_or(f64::NAN)
    }

    /// Width in units of `2⁻ᵖ`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// `⌈log₂ width⌉`, or `None` for a point interval.
    pub fn width_log2(&self) -> Option<i64> {
        let w = self.width_ulps();
        if w.is_zero() {
            return None;
        }
        let bits = w.bits() as i64;
        let exact_pow = (&w & (&w - 1u8)).is_zero();
        Some(bits - i64::from(exact_pow) - self.prec as i64)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo_rational() <= r && r <= &self.hi_rational()
    }

    /// Re-expresses the interval at precision `p`, rounding outward.
    pub fn with_prec(&self, p: u32) -> BigInterval {
        if p >= self.prec {
            let s = p - self.prec;
            BigInterval { lo: &self.lo << s, hi: &self.hi << s, prec: p }
        } else {
            let s = self.prec - p;
            BigInterval { lo: floor_shr(&self.lo, s), hi: ceil_shr(&self.hi, s), prec: p }
        }
    }

    fn aligned(&self, other: &BigInterval) -> (BigInterval, BigInterval) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    pub fn overlaps(&self, other: &BigInterval) -> bool {
        let (a, b) = self.aligned(other);
        a.lo <= b.hi && b.lo <= a.hi
    }

    /// Whether `other` lies inside `self`.
    pub fn encloses(&self, other: &BigInterval) -> bool {
        let (a, b) = self.aligned(other);
        a.lo <= b.lo && b.hi <= a.hi
    }

    pub fn hull(&self, other: &BigInterval) -> BigInterval {
        let (a, b) = self.aligned(other);
        BigInterval { lo: a.lo.min(b.lo), hi: a.hi.max(b.hi), prec: a.prec }
    }

    pub fn intersect(&self, other: &BigInterval) -> Option<BigInterval> {
        let (a, b) = self.aligned(other);
        let lo = a.lo.max(b.lo);
        let hi = a.hi.min(b.hi);
        (lo <= hi).then_some(BigInterval { lo, hi, prec: a.prec })
    }

    /// Strict order of disjoint intervals: `Some(Less)` when `self` lies
    /// entirely below `other`.
    pub fn separated_from(&self, other: &BigInterval) -> Option<std::cmp::Ordering> {
        let (a, b) = self.aligned(other);
        if a.hi < b.lo {
            Some(std::cmp::Ordering::Less)
        } else if b.hi < a.lo {
            Some(std::cmp::Ordering::Greater)
        } else {
            None
        }
    }

    pub fn widen(&self, ulps: u32) -> BigInterval {
        BigInterval { lo: &self.lo - ulps, hi: &self.hi + ulps, prec: self.prec }
    }

    pub fn neg(&self) -> BigInterval {
        BigInterval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn abs(&self) -> BigInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let hi = (-&self.lo).max(self.hi.clone());
            BigInterval { lo: BigInt::zero(), hi, prec: self.prec }
        }
    }

    pub fn add(&self, other: &BigInterval) -> BigInterval {
        let (a, b) = self.aligned(other);
        BigInterval { lo: a.lo + b.lo, hi: a.hi + b.hi, prec: a.prec }
    }

    pub fn sub(&self, other: &BigInterval) -> BigInterval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BigInterval) -> BigInterval {
        let (a, b) = self.aligned(other);
        let p = a.prec;
        let prods = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = prods.iter().min().expect("four products");
        let max = prods.iter().max().expect("four products");
        BigInterval { lo: floor_shr(min, p), hi: ceil_shr(max, p), prec: p }
    }

    pub fn square(&self) -> BigInterval {
        let a = self.abs();
        let p = a.prec;
        BigInterval { lo: floor_shr(&(&a.lo * &a.lo), p), hi: ceil_shr(&(&a.hi * &a.hi), p), prec: p }
    }

    /// Exact multiplication by `2ᵏ`.
    pub fn mul_pow2(&self, k: i32) -> BigInterval {
        if k >= 0 {
            BigInterval { lo: &self.lo << k as u32, hi: &self.hi << k as u32, prec: self.prec }
        } else {
            let s = k.unsigned_abs();
            BigInterval { lo: floor_shr(&self.lo, s), hi: ceil_shr(&self.hi, s), prec: self.prec }
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> BigInterval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        BigInterval::from_raw(a, b, self.prec)
    }

    pub fn div(&self, other: &BigInterval) -> Result<BigInterval, IntervalError> {
        let (a, b) = self.aligned(other);
        if b.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let p = a.prec;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&a.lo, &a.hi] {
            let sx = x << p;
            for y in [&b.lo, &b.hi] {
                let f = div_floor(&sx, y);
                let c = div_ceil(&sx, y);
                lo = Some(match lo {
                    Some(l) if l <= f => l,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(h) if h >= c => h,
                    _ => c,
                });
            }
        }
        Ok(BigInterval { lo: lo.expect("nonempty"), hi: hi.expect("nonempty"), prec: p })
    }

    pub fn recip(&self) -> Result<BigInterval, IntervalError> {
        BigInterval::from_int(1, self.prec).div(self)
    }

    /// Square root; a lower end slightly below zero is clamped.
    pub fn sqrt(&self) -> Result<BigInterval, IntervalError> {
        if self.hi.is_negative() {
            return Err(IntervalError::NegativeSqrt);
        }
        let p = self.prec;
        let lo = if self.lo.is_positive() { (&self.lo << p).sqrt() } else { BigInt::zero() };
        let n = &self.hi << p;
        let mut hi = n.sqrt();
        if &hi * &hi < n {
            hi += 1u8;
        }
        Ok(BigInterval { lo, hi, prec: p })
    }

    pub fn pow(&self, e: i32) -> Result<BigInterval, IntervalError> {
        let mut acc = BigInterval::from_int(1, self.prec);
        let mut base = self.clone();
        let mut k = e.unsigned_abs();
        let even = k.is_multiple_of(2);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        if even && acc.lo.is_negative() {
            acc.lo = BigInt::zero();
        }
        if e < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    pub fn clamp(&self, lo: i64, hi: i64) -> BigInterval {
        let l = BigInt::from(lo) << self.prec;
        let h = BigInt::from(hi) << self.prec;
        BigInterval {
            lo: self.lo.clone().max(l.clone()).min(h.clone()),
            hi: self.hi.clone().min(h).max(l),
            prec: self.prec,
        }
    }

    fn mid_raw(&self) -> BigInt {
        floor_shr(&(&self.lo + &self.hi), 1)
    }

    /// Upper bound on the distance from the midpoint to either end, in ulps.
    fn rad_raw(&self) -> BigInt {
        ceil_shr(&(&self.hi - &self.lo), 1) + 1u8
    }

    pub fn pi(prec: u32) -> BigInterval {
        static CACHE: OnceLock<Mutex<HashMap<u32, BigInterval>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(v) = cache.lock().expect("pi cache poisoned").get(&prec) {
            return v.clone();
        }
        let wp = prec + 32;
        let (a, ea) = atan_inv(5, wp);
        let (b, eb) = atan_inv(239, wp);
        let approx = a * 16 - b * 4;
        let err = ea * 16 + eb * 4;
        let v = BigInterval { lo: &approx - &err, hi: &approx + &err, prec: wp }.with_prec(prec);
        cache.lock().expect("pi cache poisoned").insert(prec, v.clone());
        v
    }

    /// Enclosure of `arctan` over the interval.
    pub fn atan(&self) -> BigInterval {
        let p = self.prec;
        let wp = p + GUARD;
        let lo = atan_point(&self.lo, p, wp);
        let hi = atan_point(&self.hi, p, wp);
        BigInterval { lo: lo.lo, hi: hi.hi, prec: wp }.with_prec(p)
    }

    pub fn cos(&self) -> BigInterval {
        self.trig(true)
    }

    pub fn sin(&self) -> BigInterval {
        self.trig(false)
    }

    fn trig(&self, cosine: bool) -> BigInterval {
        let p = self.prec;
        let wp = p + GUARD + self.magnitude_bits();
        let x = self.with_prec(wp);
        let m = BigInterval::dyadic(x.mid_raw(), wp);
        let rad = x.rad_raw();
        let half_pi = BigInterval::pi(wp).mul_pow2(-1);
        let q = m.div(&half_pi).expect("π/2 is positive");
        let k = floor_shr(&(q.mid_raw() + (BigInt::one() << (wp - 1))), wp);
        let r = m.sub(&half_pi.mul_int(&k));
        let quadrant = k.mod_floor(&BigInt::from(4)).to_u8().expect("residue mod 4");
        let (use_cos, negate) = match (cosine, quadrant) {
            (true, 0) => (true, false),
            (true, 1) => (false, true),
            (true, 2) => (true, true),
            (true, _) => (false, false),
            (false, 0) => (false, false),
            (false, 1) => (true, false),
            (false, 2) => (false, true),
            (false, _) => (true, true),
        };
        let rm = r.mid_raw();
        let (approx, err) = taylor(&rm, wp, use_cos);
        let total = err + r.rad_raw() + rad;
        let v = BigInterval { lo: &approx - &total, hi: &approx + &total, prec: wp };
        let v = if negate { v.neg() } else { v };
        v.clamp(-1, 1).with_prec(p)
    }

    /// Enclosure of `arccos`; the input is clamped to `[-1, 1]`.
    pub fn acos(&self) -> BigInterval {
        let p = self.prec;
        let wp = p + GUARD;
        let x = self.with_prec(wp).clamp(-1, 1);
        let lo = acos_point(&x.hi, wp);
        let hi = acos_point(&x.lo, wp);
        BigInterval { lo: lo.lo, hi: hi.hi, prec: wp }.with_prec(p)
    }

    fn magnitude_bits(&self) -> u32 {
        let m = self.lo.magnitude().max(self.hi.magnitude()).bits() as u32;
        m.saturating_sub(self.prec)
    }

    /// Midpoint printed with `places` digits after the decimal point.
    pub fn to_decimal(&self, places: usize) -> String {
        let ten = BigInt::from(10);
        let scale = num_traits::pow(ten, places);
        let num = (&self.lo + &self.hi) * &scale;
        let den = pow2(self.prec + 1);
        let rounded = div_floor(&(num * 2 + &den), &(den * 2));
        let neg = rounded.is_negative();
        let digits = rounded.magnitude().to_string();
        let digits = format!("{:0>width$}", digits, width = places + 1);
        let (int, frac) = digits.split_at(digits.len() - places);
        let sign = if neg { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Midpoint with `digits` significant digits.
    pub fn to_significant(&self, digits: usize) -> String {
        let m = self.mid_f64().abs();
        let int_digits = if m >= 1.0 { m.log10().floor() as usize + 1 } else { 0 };
        self.to_decimal(digits.saturating_sub(int_digits).max(1))
    }
}

impl fmt::Debug for BigInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]@{}", self.lo_f64(), self.hi_f64(), self.prec)
    }
}

/// `atan(1/m)` at precision `wp` as `(approx, error bound)` in ulps.
fn atan_inv(m: u32, wp: u32) -> (BigInt, BigInt) {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let mut power = pow2(wp).div_floor(&m);
    let mut sum = BigInt::zero();
    let mut k: u32 = 0;
    while !power.is_zero() {
        let term = power.div_floor(&BigInt::from(2 * k + 1));
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power = power.div_floor(&m2);
        k += 1;
    }
    (sum, BigInt::from(2 * k + 2))
}

/// Enclosure of `atan(m·2⁻ᵖ)` at precision `wp ≥ p`.
fn atan_point(m: &BigInt, p: u32, wp: u32) -> BigInterval {
    if m.is_negative() {
        return atan_point(&-m, p, wp).neg();
    }
    if m.is_zero() {
        return BigInterval::dyadic(BigInt::zero(), wp);
    }
    let mut y = BigInterval::dyadic(m.clone(), p).with_prec(wp);
    let one = BigInterval::from_int(1, wp);
    let small = BigInt::one() << (wp - 8);
    let mut halvings = 0i32;
    // atan x = 2·atan(x / (1 + √(1 + x²)))
    while y.hi > small {
        let s = one.add(&y.square()).sqrt().expect("1 + x² > 0");
        y = y.div(&one.add(&s)).expect("1 + √(1 + x²) > 0");
        halvings += 1;
    }
    let ym = y.mid_raw();
    let (approx, err) = atan_series(&ym, wp);
    let total = err + y.rad_raw();
    BigInterval { lo: &approx - &total, hi: &approx + &total, prec: wp }.mul_pow2(halvings)
}

/// Alternating series for `atan z`, `0 ≤ z ≤ 2⁻⁸`, as `(approx, error bound)`.
fn atan_series(z: &BigInt, wp: u32) -> (BigInt, BigInt) {
    let z2 = floor_shr(&(z * z), wp);
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut k: u32 = 0;
    while !power.is_zero() {
        let term = power.div_floor(&BigInt::from(2 * k + 1));
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power = floor_shr(&(&power * &z2), wp);
        k += 1;
    }
    (sum, BigInt::from(3 * k + 6))
}

/// Taylor series for `cos z` or `sin z` with `|z| ≲ 1`.
fn taylor(z: &BigInt, wp: u32, cosine: bool) -> (BigInt, BigInt) {
    let z2 = floor_shr(&(z * z), wp);
    let (mut term, mut n) = if cosine { (pow2(wp), 0u32) } else { (z.clone(), 1u32) };
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !term.is_zero() {
        if k.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = floor_shr(&(&term * &z2), wp);
        term = if term.is_negative() {
            -((-term).div_floor(&BigInt::from((n + 1) * (n + 2))))
        } else {
            term.div_floor(&BigInt::from((n + 1) * (n + 2)))
        };
        n += 2;
        k += 1;
    }
    (sum, BigInt::from(3 * k + 6))
}

/// Enclosure of `acos(m·2⁻ʷᵖ)` for `m·2⁻ʷᵖ ∈ [-1, 1]`.
fn acos_point(m: &BigInt, wp: u32) -> BigInterval {
    let one = BigInterval::from_int(1, wp);
    let e = BigInterval::dyadic(m.clone(), wp);
    if !m.is_negative() {
        // acos e = 2·atan √((1 - e)/(1 + e))
        let t = one.sub(&e).div(&one.add(&e)).expect("1 + e ≥ 1").sqrt().expect("nonnegative");
        t.atan().mul_pow2(1)
    } else {
        let t = one.add(&e).div(&one.sub(&e)).expect("1 - e > 1").sqrt().expect("nonnegative");
        BigInterval::pi(wp).sub(&t.atan().mul_pow2(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn close(iv: &BigInterval, v: f64) -> bool {
        iv.lo_f64() <= v + 1e-15 && v - 1e-15 <= iv.hi_f64()
    }

    #[test]
    fn pi_digits() {
        let pi = BigInterval::pi(200);
        assert!(pi.width_log2().unwrap() < -190);
        assert_eq!(
            pi.to_decimal(50),
            "3.14159265358979323846264338327950288419716939937511"
        );
        assert!(BigInterval::pi(400).with_prec(200).overlaps(&pi));
    }

    #[test]
    fn arithmetic_encloses() {
        let third = BigInterval::from_rational(&rat(1, 3), 64);
        assert!(third.contains_rational(&rat(1, 3)));
        let sum = third.add(&third).add(&third);
        assert!(sum.contains_rational(&rat(1, 1)));
        let two = BigInterval::from_int(2, 100);
        let r = two.sqrt().unwrap();
        assert!(r.square().contains_rational(&rat(2, 1)));
        assert!(close(&r, std::f64::consts::SQRT_2));
        assert!(two.sub(&two).recip().is_err());
        assert_eq!(BigInterval::from_int(-3, 10).pow(2).unwrap(), BigInterval::from_int(9, 10));
    }

    #[test]
    fn elementary_functions() {
        let one = BigInterval::from_int(1, 128);
        let quarter_pi = one.atan();
        assert!(quarter_pi.mul_pow2(2).overlaps(&BigInterval::pi(128)));
        assert!(quarter_pi.width_log2().unwrap() < -120);
        let big = BigInterval::from_int(1 << 40, 128).atan();
        assert!(close(&big, (2f64.powi(40)).atan()));
        let x = BigInterval::from_rational(&rat(7, 3), 128);
        assert!(close(&x.cos(), (7.0f64 / 3.0).cos()));
        assert!(close(&x.sin(), (7.0f64 / 3.0).sin()));
        let third_pi = BigInterval::pi(160).mul(&BigInterval::from_rational(&rat(1, 3), 160));
        assert!(third_pi.cos().contains_rational(&rat(1, 2)));
        let half = BigInterval::from_rational(&rat(1, 2), 128);
        assert!(half.acos().overlaps(&third_pi.with_prec(128)));
        let neg = BigInterval::from_rational(&rat(-1, 2), 128);
        let two_thirds_pi = BigInterval::pi(128).mul(&BigInterval::from_rational(&rat(2, 3), 128));
        assert!(neg.acos().overlaps(&two_thirds_pi));
    }

    #[test]
    fn decimal_output() {
        let x = BigInterval::from_rational(&rat(-5, 4), 20);
        assert_eq!(x.to_decimal(3), "-1.250");
        assert_eq!(BigInterval::from_rational(&rat(1, 8), 20).to_decimal(2), "0.13");
    }
}
