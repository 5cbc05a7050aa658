//! Exact orientation and angle predicates.
//!
//! An angle at a vertex is never materialised as a real number. It is kept
//! as the projective pair `(dot, |cross|)` of its legs, with `cot θ =
//! dot / |cross|`, and two angles are ordered by a single cross-multiplied
//! sign test.

use crate::angle::Degenerate;
use crate::scalar::{ExactField, ExactScalar, Sign};
use num_rational::BigRational;
use num_traits::{Float, One, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }
}

impl<T: ExactScalar> Point<T> {
    pub fn sub(&self, other: &Point<T>) -> Point<T> {
        Point::new(self.x.clone() - other.x.clone(), self.y.clone() - other.y.clone())
    }

    pub fn add(&self, other: &Point<T>) -> Point<T> {
        Point::new(self.x.clone() + other.x.clone(), self.y.clone() + other.y.clone())
    }

    pub fn dot(&self, other: &Point<T>) -> T {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn cross(&self, other: &Point<T>) -> T {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn norm2(&self) -> T {
        self.dot(self)
    }

    pub fn compatible_with(&self, other: &Point<T>) -> bool {
        self.x.compatible_with(&other.x)
            && self.x.compatible_with(&other.y)
            && self.y.compatible_with(&other.x)
            && self.y.compatible_with(&other.y)
    }

    pub fn to_f64(&self) -> Point<f64> {
        Point::new(self.x.to_f64(), self.y.to_f64())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("coincident points")]
    CoincidentPoints,
    #[error("angle keys live in incompatible quadratic fields")]
    IncompatibleFields,
    #[error("similarity scale must be positive")]
    NonPositiveScale,
    #[error("rotation ({0}, {1}) is not on the unit circle")]
    NotOnUnitCircle(String, String),
}

/// The angle at a vertex as the pair `(dot, |cross|)` of its legs.
/// `cross` is strictly positive; the angle is the unique `θ ∈ (0, π)` with
/// `cot θ = dot / cross`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactAngleKey<T> {
    dot: T,
    cross: T,
}

impl<T: ExactScalar> ExactAngleKey<T> {
    /// Builds a key from `(dot, cross)`; `cross` must be positive.
    pub fn new(dot: T, cross: T) -> Option<Self> {
        (cross.sign() == Sign::Positive).then_some(ExactAngleKey { dot, cross })
    }

    pub fn dot(&self) -> &T {
        &self.dot
    }

    pub fn cross(&self) -> &T {
        &self.cross
    }

    /// Angle order, assuming compatible fields. Smaller angle = `Less`.
    pub fn cmp_angle(&self, other: &Self) -> Ordering {
        // θ1 < θ2  ⇔  cot θ1 > cot θ2  ⇔  t1·c2 > t2·c1
        let lhs = other.dot.clone() * self.cross.clone();
        let rhs = self.dot.clone() * other.cross.clone();
        (lhs - rhs).sign().to_ordering()
    }

    pub fn approx_radians(&self) -> f64 {
        self.cross.to_f64().atan2(self.dot.to_f64())
    }

    fn compatible_with(&self, other: &Self) -> bool {
        self.dot.compatible_with(&other.dot)
            && self.dot.compatible_with(&other.cross)
            && self.cross.compatible_with(&other.dot)
            && self.cross.compatible_with(&other.cross)
    }
}

/// Result of measuring the angle at a vertex.
#[derive(Clone, Debug, PartialEq)]
pub enum AngleKind<T> {
    Proper(ExactAngleKey<T>),
    Degenerate(Degenerate),
}

impl<T> AngleKind<T> {
    pub fn proper(&self) -> Option<&ExactAngleKey<T>> {
        match self {
            AngleKind::Proper(k) => Some(k),
            AngleKind::Degenerate(_) => None,
        }
    }
}

/// Angle at vertex `b` between rays `b→a` and `b→c`.
pub fn angle_key<T: ExactScalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> Result<AngleKind<T>, KernelError> {
    if !(a.compatible_with(b) && b.compatible_with(c) && a.compatible_with(c)) {
        return Err(KernelError::IncompatibleFields);
    }
    if a == b || b == c || a == c {
        return Err(KernelError::CoincidentPoints);
    }
    let u = a.sub(b);
    let v = c.sub(b);
    let dot = u.dot(&v);
    let cross = u.cross(&v);
    Ok(match cross.sign() {
        Sign::Zero => {
            if dot.sign() == Sign::Positive {
                AngleKind::Degenerate(Degenerate::Zero)
            } else {
                AngleKind::Degenerate(Degenerate::Pi)
            }
        }
        _ => AngleKind::Proper(ExactAngleKey { dot, cross: cross.abs_exact() }),
    })
}

/// Total order on angle keys; fails when the keys mix two different
/// quadratic fields.
pub fn key_compare<T: ExactScalar>(k1: &ExactAngleKey<T>, k2: &ExactAngleKey<T>) -> Result<Ordering, KernelError> {
    if !k1.compatible_with(k2) {
        return Err(KernelError::IncompatibleFields);
    }
    Ok(k1.cmp_angle(k2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn of_sign(s: Sign) -> Orientation {
        match s {
            Sign::Negative => Orientation::Clockwise,
            Sign::Zero => Orientation::Collinear,
            Sign::Positive => Orientation::CounterClockwise,
        }
    }
}

pub fn orientation<T: ExactScalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> Orientation {
    Orientation::of_sign(b.sub(a).cross(&c.sub(a)).sign())
}

/// `p ↦ scale · R(rot) · p + shift` with a rational rotation `rot = (cos, sin)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Similarity {
    cos: BigRational,
    sin: BigRational,
    scale: BigRational,
    shift: (BigRational, BigRational),
}

impl Similarity {
    pub fn new(
        rot: (BigRational, BigRational),
        scale: BigRational,
        shift: (BigRational, BigRational),
    ) -> Result<Similarity, KernelError> {
        if scale <= BigRational::zero() {
            return Err(KernelError::NonPositiveScale);
        }
        if &rot.0 * &rot.0 + &rot.1 * &rot.1 != BigRational::one() {
            return Err(KernelError::NotOnUnitCircle(rot.0.to_string(), rot.1.to_string()));
        }
        Ok(Similarity { cos: rot.0, sin: rot.1, scale, shift })
    }

    pub fn identity() -> Similarity {
        Similarity {
            cos: BigRational::one(),
            sin: BigRational::zero(),
            scale: BigRational::one(),
            shift: (BigRational::zero(), BigRational::zero()),
        }
    }

    pub fn cos(&self) -> &BigRational {
        &self.cos
    }

    pub fn sin(&self) -> &BigRational {
        &self.sin
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn shift(&self) -> &(BigRational, BigRational) {
        &self.shift
    }

    pub fn apply<T: ExactScalar>(&self, p: &Point<T>) -> Point<T> {
        let c = T::from_rational(&self.cos * &self.scale);
        let s = T::from_rational(&self.sin * &self.scale);
        let x = c.clone() * p.x.clone() - s.clone() * p.y.clone() + T::from_rational(self.shift.0.clone());
        let y = s * p.x.clone() + c * p.y.clone() + T::from_rational(self.shift.1.clone());
        Point::new(x, y)
    }
}

pub fn apply_similarity<T: ExactScalar>(points: &[Point<T>], sim: &Similarity) -> Vec<Point<T>> {
    points.iter().map(|p| sim.apply(p)).collect()
}

/// Whether two point sets are images of each other under a similarity
/// (rotation, reflection, dilation, translation).
pub fn is_similar<T: ExactField>(a: &[Point<T>], b: &[Point<T>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.len() < 2 {
        return true;
    }
    let a0 = &a[0];
    let Some(a1) = a.iter().find(|p| *p != a0) else {
        return b.iter().all(|p| p == &b[0]);
    };
    // Complex-number view: z ↦ α z + β or z ↦ α z̄ + β.
    let da = a1.sub(a0);
    for reflect in [false, true] {
        let da = if reflect { conj(&da) } else { da.clone() };
        let base = if reflect { conj(a0) } else { a0.clone() };
        for (i, bi) in b.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if i == j {
                    continue;
                }
                let alpha = cdiv(&bj.sub(bi), &da);
                let beta = bi.sub(&cmul(&alpha, &base));
                let maps = a.iter().all(|p| {
                    let z = if reflect { conj(p) } else { p.clone() };
                    let img = cmul(&alpha, &z).add(&beta);
                    b.contains(&img)
                });
                if maps {
                    return true;
                }
            }
        }
    }
    false
}

fn conj<T: ExactScalar>(p: &Point<T>) -> Point<T> {
    Point::new(p.x.clone(), -p.y.clone())
}

fn cmul<T: ExactScalar>(p: &Point<T>, q: &Point<T>) -> Point<T> {
    Point::new(
        p.x.clone() * q.x.clone() - p.y.clone() * q.y.clone(),
        p.x.clone() * q.y.clone() + p.y.clone() * q.x.clone(),
    )
}

fn cdiv<T: ExactField>(p: &Point<T>, q: &Point<T>) -> Point<T> {
    let n = q.norm2();
    let num = cmul(p, &conj(q));
    Point::new(num.x / n.clone(), num.y / n)
}

/// Distinct proper angles of a point set, each with the first triple
/// `(a, vertex, c)` that realises it, plus witnesses of the degenerate
/// angles when present.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCensus<T> {
    /// Sorted by increasing angle.
    pub keys: Vec<(ExactAngleKey<T>, [usize; 3])>,
    pub zero: Option<[usize; 3]>,
    pub straight: Option<[usize; 3]>,
}

/// Exact census over all triples, vertex-major with `a < c`.
pub fn census_exact<T: ExactScalar>(points: &[Point<T>]) -> Result<ExactCensus<T>, KernelError> {
    let n = points.len();
    let mut keys = Vec::new();
    let (mut zero, mut straight) = (None, None);
    for b in 0..n {
        for a in 0..n {
            for c in a + 1..n {
                if a == b || c == b {
                    continue;
                }
                match angle_key(&points[a], &points[b], &points[c])? {
                    AngleKind::Proper(k) => keys.push((k, [a, b, c])),
                    AngleKind::Degenerate(Degenerate::Zero) => {
                        zero.get_or_insert([a, b, c]);
                    }
                    AngleKind::Degenerate(Degenerate::Pi) => {
                        straight.get_or_insert([a, b, c]);
                    }
                }
            }
        }
    }
    if let Some((first, _)) = keys.first() {
        if keys.iter().any(|(k, _)| !k.compatible_with(first)) {
            return Err(KernelError::IncompatibleFields);
        }
    }
    // stable sort keeps the earliest witness first among equal angles
    keys.sort_by(|x, y| x.0.cmp_angle(&y.0));
    keys.dedup_by(|later, earlier| later.0.cmp_angle(&earlier.0) == Ordering::Equal);
    Ok(ExactCensus { keys, zero, straight })
}

/// Angle at `b` in radians, in `[0, π]`.
pub fn angle_f<T: Float>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> T {
    let (ux, uy) = (a.x - b.x, a.y - b.y);
    let (vx, vy) = (c.x - b.x, c.y - b.y);
    (ux * vy - uy * vx).abs().atan2(ux * vx + uy * vy)
}

pub fn orientation_f<T: Float>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> T {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}
