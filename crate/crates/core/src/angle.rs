//! Angle vocabulary shared by every kernel: π-rational values, degenerate
//! angles and census modes.

use num_integer::Integer;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Whether the trivial zero angle takes part in a census. Straight angles
/// (π) never do.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum CensusMode {
    #[default]
    ExcludeZero,
    IncludeZero,
}

impl CensusMode {
    pub fn includes_zero(self) -> bool {
        matches!(self, CensusMode::IncludeZero)
    }
}

/// A collinear triple seen from its vertex: both endpoints on one side
/// (`Zero`) or on opposite sides (`Pi`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degenerate {
    Zero,
    Pi,
}

/// The angle `(num/den)·π`, kept in lowest terms with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PiRational {
    num: i64,
    den: i64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PiRationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("angle {0} lies outside [0, π]")]
    OutOfRange(String),
    #[error("cannot parse angle `{0}`")]
    Parse(String),
}

impl PiRational {
    /// Builds `num/den · π`, reducing the fraction. The value must lie in
    /// `[0, 1]` (as a multiple of π).
    pub fn new(num: i64, den: i64) -> Result<Self, PiRationalError> {
        if den == 0 {
            return Err(PiRationalError::ZeroDenominator);
        }
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        if num < 0 || num > den {
            return Err(PiRationalError::OutOfRange(format!("{num}/{den}")));
        }
        Ok(PiRational { num, den })
    }

    pub const ZERO: PiRational = PiRational { num: 0, den: 1 };
    pub const PI: PiRational = PiRational { num: 1, den: 1 };

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_straight(&self) -> bool {
        self.num == self.den
    }

    /// True for values a census may report, i.e. strictly inside `(0, π)`.
    pub fn is_proper(&self) -> bool {
        !self.is_zero() && !self.is_straight()
    }

    /// `π - self`.
    pub fn supplement(&self) -> PiRational {
        PiRational::new(self.den - self.num, self.den).expect("supplement stays in range")
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64 * std::f64::consts::PI
    }

    /// Sum of angles; `None` if it exceeds π.
    pub fn checked_add(&self, other: &PiRational) -> Option<PiRational> {
        let num = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        let den = self.den as i128 * other.den as i128;
        let g = num.gcd(&den);
        let (num, den) = (num / g.max(1), den / g.max(1));
        if num > den {
            return None;
        }
        PiRational::new(i64::try_from(num).ok()?, i64::try_from(den).ok()?).ok()
    }

    /// Plain ASCII form understood by [`FromStr`], e.g. `2/5 pi`.
    pub fn to_ascii(&self) -> String {
        match (self.num, self.den) {
            (0, _) => "0".to_string(),
            (n, 1) => format!("{n} pi"),
            (n, d) => format!("{n}/{d} pi"),
        }
    }
}

impl Ord for PiRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for PiRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "π"),
            (n, 1) => write!(f, "{n}π"),
            (1, d) => write!(f, "π/{d}"),
            (n, d) => write!(f, "{n}π/{d}"),
        }
    }
}

/// Accepts `0`, `pi`, `2/5 pi`, `2/5pi`, `pi/5`, `2pi/5`, `2π/5` and `π`.
impl FromStr for PiRational {
    type Err = PiRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PiRationalError::Parse(s.to_string());
        let t: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*' && *c != '·')
            .collect::<String>()
            .replace('π', "pi");
        if t == "0" {
            return Ok(PiRational::ZERO);
        }
        let pos = t.find("pi").ok_or_else(err)?;
        let (before, after) = (&t[..pos], &t[pos + 2..]);
        let parse_int = |x: &str| x.parse::<i64>().map_err(|_| err());
        let (mut num, mut den) = (1i64, 1i64);
        if !before.is_empty() {
            match before.split_once('/') {
                Some((n, d)) => {
                    num = parse_int(n)?;
                    den = parse_int(d)?;
                }
                None => num = parse_int(before)?,
            }
        }
        if !after.is_empty() {
            let d = after.strip_prefix('/').ok_or_else(err)?;
            den *= parse_int(d)?;
        }
        PiRational::new(num, den)
    }
}
