//! Census results shared by the exact and numeric paths.

use crate::angle::{CensusMode, PiRational};
use crate::exact::ExactAngleKey;
use crate::numeric::BigInterval;
use crate::quadratic::Scalar;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certification {
    /// Decided by an exact kernel.
    Exact,
    /// Intervals separated, and any equalities matched to declared exact values.
    CertifiedNumeric,
    /// The precision budget ran out before every pair could be decided.
    Unresolved,
}

impl fmt::Display for Certification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certification::Exact => "exact",
            Certification::CertifiedNumeric => "certified",
            Certification::Unresolved => "unresolved",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CensusCount {
    Exact(usize),
    Range { min: usize, max: usize },
}

impl CensusCount {
    pub fn exact(&self) -> Option<usize> {
        match self {
            CensusCount::Exact(n) => Some(*n),
            CensusCount::Range { .. } => None,
        }
    }

    pub fn min(&self) -> usize {
        match self {
            CensusCount::Exact(n) => *n,
            CensusCount::Range { min, .. } => *min,
        }
    }

    pub fn max(&self) -> usize {
        match self {
            CensusCount::Exact(n) => *n,
            CensusCount::Range { max, .. } => *max,
        }
    }
}

impl fmt::Display for CensusCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusCount::Exact(n) => write!(f, "{n}"),
            CensusCount::Range { min, max } => write!(f, "{min}..{max}"),
        }
    }
}

/// Where a numeric cluster sits relative to the degenerate angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClusterKind {
    /// All members are certified proper angles.
    Interior,
    /// Contains triples that could not be told apart from collinear with
    /// both endpoints on one side.
    NearZero,
    /// Contains triples that could not be told apart from a straight angle.
    NearPi,
}

/// A cluster of numerically indistinguishable angles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericCluster {
    pub kind: ClusterKind,
    /// Hull of the member angles, in radians.
    pub angle: BigInterval,
    /// Hull of the member cosines; clustering happens in this domain.
    pub cos: BigInterval,
    /// Member triples with certified nonzero cross product.
    pub proper: usize,
    /// Member triples whose cross product could not be separated from zero.
    pub boundary: usize,
}

impl NumericCluster {
    pub fn members(&self) -> usize {
        self.proper + self.boundary
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AngleValue {
    Zero,
    /// An exact rational multiple of π.
    Pi(PiRational),
    /// An exact angle that is not a recognised π-multiple.
    Key(ExactAngleKey<Scalar>),
    /// A numeric cluster, labelled when matched to a declared value.
    Interval { cluster: NumericCluster, label: Option<PiRational> },
}

impl AngleValue {
    pub fn pi_rational(&self) -> Option<PiRational> {
        match self {
            AngleValue::Zero => Some(PiRational::ZERO),
            AngleValue::Pi(p) => Some(*p),
            AngleValue::Interval { label, .. } => *label,
            AngleValue::Key(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, AngleValue::Zero) || self.pi_rational().is_some_and(|p| p.is_zero())
    }

    pub fn approx_radians(&self) -> f64 {
        match self {
            AngleValue::Zero => 0.0,
            AngleValue::Pi(p) => p.to_f64(),
            AngleValue::Key(k) => k.approx_radians(),
            AngleValue::Interval { cluster, .. } => cluster.angle.mid_f64(),
        }
    }

    /// `π/5` style when the value is a known π-multiple, otherwise a decimal
    /// with `digits` significant digits.
    pub fn display(&self, digits: usize) -> String {
        if let Some(p) = self.pi_rational() {
            return p.to_string();
        }
        match self {
            AngleValue::Key(k) => {
                let iv = crate::numeric::key_angle_interval(k, (digits as u32) * 4 + 16);
                iv.to_significant(digits)
            }
            AngleValue::Interval { cluster, .. } => cluster.angle.to_significant(digits),
            _ => unreachable!("π-rational values handled above"),
        }
    }
}

/// The distinct-angle census of a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport {
    pub mode: CensusMode,
    pub count: CensusCount,
    /// Sorted by angle.
    pub values: Vec<AngleValue>,
    /// One `(a, vertex, c)` index triple per value.
    pub witnesses: Vec<[usize; 3]>,
    pub certification: Certification,
    /// Final working precision of a numeric census.
    pub precision_bits: Option<u32>,
}

impl CensusReport {
    pub fn pi_values(&self) -> Option<Vec<PiRational>> {
        self.values.iter().map(|v| v.pi_rational()).collect()
    }

    pub fn exact_count(&self) -> Option<usize> {
        self.count.exact()
    }

    /// `3 distinct angles: π/5, 2π/5, 3π/5 (exact)`.
    pub fn summary(&self) -> String {
        let values: Vec<String> = self.values.iter().map(|v| v.display(50)).collect();
        let noun = if self.count == CensusCount::Exact(1) { "angle" } else { "angles" };
        format!("{} distinct {}: {} ({})", self.count, noun, values.join(", "), self.certification)
    }
}
