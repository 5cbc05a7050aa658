//! Configurations, the distinct-angle census, and checks of the structural
//! lemmas about small configurations with few angles.

use crate::angle::{CensusMode, Degenerate, PiRational};
use crate::cyclic::{census_cyclic_witnessed, cyclic_angle, cyclic_orientation, CyclicConfig, CyclicError, CyclicPoint};
use crate::exact::{angle_key, census_exact, orientation, AngleKind, ExactAngleKey, KernelError, Orientation, Point};
use crate::numeric::{
    angle_interval, certify_census, cluster_census, BigInterval, ExpectedAngle, MatchOutcome, NumericError,
    NumericPoint, PrecisionSchedule,
};
use crate::quadratic::Scalar;
use crate::report::{AngleValue, CensusCount, CensusReport, Certification};
use crate::scalar::rat;
use crate::QuadPoint;
use num_traits::Zero;
use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("a census needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("all points collinear")]
    AllCollinear,
    #[error("points {0} and {1} coincide")]
    RepeatedPoints(usize, usize),
    #[error("coordinate {0} does not lie in Q(√{1})")]
    OutsideField(String, u64),
    #[error("configuration is not a subset of the larger one")]
    NotASubset,
    #[error("expected {expected} points, got {got}")]
    WrongPointCount { expected: usize, got: usize },
    #[error("points are not in strictly convex position")]
    NotConvex,
    #[error("point is not strictly inside the triangle")]
    NotInterior,
    #[error("an exact predicate could not be decided numerically: {0}")]
    Undecidable(String),
    #[error("configuration contradicts the structural lemma: {0}")]
    LemmaViolation(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigPoints {
    /// Coordinates in `ℚ(√d)`; `d = 0` for rationals.
    Quadratic { d: u64, points: Vec<QuadPoint> },
    Cyclic(CyclicConfig),
    Numeric(Vec<NumericPoint>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Quadratic { d: u64 },
    Concyclic { n: u32 },
    Numeric,
}

/// A validated planar point set: at least three distinct points, not all
/// on one line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    name: Option<String>,
    points: ConfigPoints,
    declared: Option<Vec<PiRational>>,
    declared_zero: Option<bool>,
}

impl Configuration {
    pub fn new(points: ConfigPoints) -> Result<Configuration, CensusError> {
        let cfg = Configuration { name: None, points, declared: None, declared_zero: None };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Rational or quadratic points; the field is inferred.
    pub fn quadratic(points: Vec<QuadPoint>) -> Result<Configuration, CensusError> {
        let d = points
            .iter()
            .flat_map(|p| [p.x.d(), p.y.d()])
            .find(|&d| d != 0)
            .unwrap_or(0);
        Configuration::new(ConfigPoints::Quadratic { d, points })
    }

    pub fn rational(points: &[(i64, i64)]) -> Configuration {
        let pts = points.iter().map(|&(x, y)| Point::new(Scalar::integer(x), Scalar::integer(y))).collect();
        Configuration::quadratic(pts).expect("valid rational configuration")
    }

    pub fn cyclic(cfg: CyclicConfig) -> Result<Configuration, CensusError> {
        Configuration::new(ConfigPoints::Cyclic(cfg))
    }

    pub fn numeric(points: Vec<NumericPoint>) -> Result<Configuration, CensusError> {
        Configuration::new(ConfigPoints::Numeric(points))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Declares the expected census (zero excluded).
    pub fn with_declared(mut self, values: Vec<PiRational>) -> Self {
        let mut values = values;
        values.sort();
        values.dedup();
        self.declared = Some(values);
        self
    }

    /// Declares whether the zero angle occurs.
    pub fn with_declared_zero(mut self, zero: bool) -> Self {
        self.declared_zero = Some(zero);
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn points(&self) -> &ConfigPoints {
        &self.points
    }

    pub fn declared(&self) -> Option<&[PiRational]> {
        self.declared.as_deref()
    }

    pub fn declared_zero(&self) -> Option<bool> {
        self.declared_zero
    }

    pub fn domain(&self) -> Domain {
        match &self.points {
            ConfigPoints::Quadratic { d, .. } => Domain::Quadratic { d: *d },
            ConfigPoints::Cyclic(c) => Domain::Concyclic { n: c.n() },
            ConfigPoints::Numeric(_) => Domain::Numeric,
        }
    }

    pub fn len(&self) -> usize {
        match &self.points {
            ConfigPoints::Quadratic { points, .. } => points.len(),
            ConfigPoints::Cyclic(c) => c.len(),
            ConfigPoints::Numeric(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Approximate coordinates, for drawing and float searches.
    pub fn points_f64(&self) -> Vec<(f64, f64)> {
        match &self.points {
            ConfigPoints::Quadratic { points, .. } => points.iter().map(|p| (p.x.approx(), p.y.approx())).collect(),
            ConfigPoints::Cyclic(c) => c.coordinates_f64(),
            ConfigPoints::Numeric(p) => p.iter().map(|q| q.approx()).collect(),
        }
    }

    /// The same points as closed-form numeric coordinates.
    pub fn numeric_points(&self) -> Vec<NumericPoint> {
        match &self.points {
            ConfigPoints::Quadratic { points, .. } => {
                points.iter().map(|p| NumericPoint::from_scalars(&p.x, &p.y)).collect()
            }
            ConfigPoints::Cyclic(c) => c
                .points()
                .into_iter()
                .map(|p| match p {
                    CyclicPoint::Center => NumericPoint::from_scalars(&Scalar::zero(), &Scalar::zero()),
                    CyclicPoint::Vertex(k) => {
                        NumericPoint::polar(crate::numeric::Expr::int(1), 2 * k as i64, c.n() as i64)
                    }
                })
                .collect(),
            ConfigPoints::Numeric(p) => p.clone(),
        }
    }

    /// Sub-configuration on the given indices, in the given order.
    pub fn subset(&self, idx: &[usize]) -> Result<Configuration, CensusError> {
        let points = match &self.points {
            ConfigPoints::Quadratic { d, points } => ConfigPoints::Quadratic {
                d: *d,
                points: idx.iter().map(|&i| points[i].clone()).collect(),
            },
            ConfigPoints::Cyclic(c) => {
                let pts = c.points();
                let chosen: Vec<CyclicPoint> = idx.iter().map(|&i| pts[i]).collect();
                let vs = chosen.iter().filter_map(|p| match p {
                    CyclicPoint::Vertex(k) => Some(*k),
                    CyclicPoint::Center => None,
                });
                ConfigPoints::Cyclic(CyclicConfig::new(c.n(), vs, chosen.contains(&CyclicPoint::Center))?)
            }
            ConfigPoints::Numeric(p) => ConfigPoints::Numeric(idx.iter().map(|&i| p[i].clone()).collect()),
        };
        Configuration::new(points)
    }

    /// Exact quadratic points when the domain allows it, including numeric
    /// points whose expressions fold into one quadratic field.
    pub fn quadratic_points(&self) -> Option<Vec<QuadPoint>> {
        match &self.points {
            ConfigPoints::Quadratic { points, .. } => Some(points.clone()),
            ConfigPoints::Cyclic(_) => None,
            ConfigPoints::Numeric(p) => {
                let pts: Vec<QuadPoint> = p
                    .iter()
                    .map(|q| q.as_quadratic().map(|(x, y)| Point::new(x, y)))
                    .collect::<Option<_>>()?;
                let d = pts.iter().flat_map(|p| [p.x.d(), p.y.d()]).find(|&d| d != 0).unwrap_or(0);
                pts.iter().all(|p| p.x.lies_in(d) && p.y.lies_in(d)).then_some(pts)
            }
        }
    }

    fn validate(&self) -> Result<(), CensusError> {
        let n = self.len();
        if n < 3 {
            return Err(CensusError::TooFewPoints(n));
        }
        if let ConfigPoints::Quadratic { d, points } = &self.points {
            for p in points {
                for s in [&p.x, &p.y] {
                    if !s.lies_in(*d) {
                        return Err(CensusError::OutsideField(s.to_string(), *d));
                    }
                }
            }
        }
        let geo = Geometry::of(self, PrecisionSchedule::default().cap);
        for i in 0..n {
            for j in i + 1..n {
                if geo.coincide(i, j) {
                    return Err(CensusError::RepeatedPoints(i, j));
                }
            }
        }
        for j in 1..n {
            for k in j + 1..n {
                if matches!(geo.orient(0, j, k), Some(o) if o != Orientation::Collinear) {
                    return Ok(());
                }
            }
        }
        Err(CensusError::AllCollinear)
    }
}

/// Exact and interval predicates over any configuration domain.
enum Geometry<'a> {
    Quad(Vec<QuadPoint>),
    Cyc(&'a CyclicConfig, Vec<CyclicPoint>),
    Num(Vec<NumericPoint>, Vec<(BigInterval, BigInterval)>, u32),
}

impl<'a> Geometry<'a> {
    fn of(cfg: &'a Configuration, prec: u32) -> Geometry<'a> {
        if let Some(q) = cfg.quadratic_points() {
            return Geometry::Quad(q);
        }
        match &cfg.points {
            ConfigPoints::Cyclic(c) => Geometry::Cyc(c, c.points()),
            _ => {
                let pts = cfg.numeric_points();
                let coords = pts
                    .iter()
                    .map(|p| p.eval(prec + 64).expect("catalogued expressions evaluate"))
                    .collect();
                Geometry::Num(pts, coords, prec)
            }
        }
    }

    fn coincide(&self, i: usize, j: usize) -> bool {
        match self {
            Geometry::Quad(p) => p[i] == p[j],
            Geometry::Cyc(_, p) => p[i] == p[j],
            Geometry::Num(_, c, _) => {
                let dx = c[i].0.sub(&c[j].0);
                let dy = c[i].1.sub(&c[j].1);
                dx.square().add(&dy.square()).contains_zero()
            }
        }
    }

    /// `None` when a numeric cross product cannot be separated from zero.
    fn orient(&self, i: usize, j: usize, k: usize) -> Option<Orientation> {
        match self {
            Geometry::Quad(p) => Some(orientation(&p[i], &p[j], &p[k])),
            Geometry::Cyc(c, p) => Some(cyclic_orientation(p[i], p[j], p[k], c.n())),
            Geometry::Num(_, c, _) => {
                let ux = c[j].0.sub(&c[i].0);
                let uy = c[j].1.sub(&c[i].1);
                let vx = c[k].0.sub(&c[i].0);
                let vy = c[k].1.sub(&c[i].1);
                let cross = ux.mul(&vy).sub(&uy.mul(&vx));
                if cross.is_positive() {
                    Some(Orientation::CounterClockwise)
                } else if cross.is_negative() {
                    Some(Orientation::Clockwise)
                } else {
                    None
                }
            }
        }
    }

    /// Whether `p` lies strictly between `a` and `b`.
    fn between(&self, a: usize, p: usize, b: usize) -> Option<bool> {
        match self {
            Geometry::Quad(q) => Some(matches!(
                angle_key(&q[a], &q[p], &q[b]),
                Ok(AngleKind::Degenerate(Degenerate::Pi))
            )),
            Geometry::Cyc(c, q) => Some(cyclic_angle(q[a], q[p], q[b], c.n()) == Err(Degenerate::Pi)),
            Geometry::Num(..) => self.orient(a, p, b).map(|_| false),
        }
    }

    /// Whether the angle `∠abc` equals `value`. Numeric domains answer
    /// with interval overlap at the geometry's precision.
    fn angle_is(&self, a: usize, b: usize, c: usize, value: PiRational) -> bool {
        match self {
            Geometry::Quad(q) => match angle_key(&q[a], &q[b], &q[c]) {
                Ok(AngleKind::Proper(k)) => pi_label(&k) == Some(value),
                _ => false,
            },
            Geometry::Cyc(cfg, q) => cyclic_angle(q[a], q[b], q[c], cfg.n()) == Ok(value),
            Geometry::Num(p, _, prec) => match angle_interval(&p[a], &p[b], &p[c], *prec) {
                Ok(iv) => iv.overlaps(&pi_interval(value, *prec)),
                Err(_) => false,
            },
        }
    }

    /// Whether `|ij| = |kl|`; numeric domains answer with interval overlap.
    fn same_length(&self, i: usize, j: usize, k: usize, l: usize) -> bool {
        match self {
            Geometry::Quad(q) => q[i].sub(&q[j]).norm2() == q[k].sub(&q[l]).norm2(),
            Geometry::Cyc(cfg, q) => chord_key(q[i], q[j], cfg.n()) == chord_key(q[k], q[l], cfg.n()),
            Geometry::Num(_, c, _) => {
                let d2 = |a: usize, b: usize| {
                    let dx = c[a].0.sub(&c[b].0);
                    let dy = c[a].1.sub(&c[b].1);
                    dx.square().add(&dy.square())
                };
                d2(i, j).overlaps(&d2(k, l))
            }
        }
    }

    fn is_exact(&self) -> bool {
        !matches!(self, Geometry::Num(..))
    }
}

/// A chord of the unit circle through `p`, `q` has length `2 sin(π t)`;
/// returns `t ∈ (0, 1/2]` (a radius has `t = 1/6`).
fn chord_key(p: CyclicPoint, q: CyclicPoint, n: u32) -> (u32, u32) {
    let reduce = |a: u32, b: u32| {
        let g = num_integer::gcd(a, b);
        (a / g, b / g)
    };
    match (p, q) {
        (CyclicPoint::Vertex(a), CyclicPoint::Vertex(b)) => {
            let d = (a + n - b) % n;
            reduce(d.min(n - d), n)
        }
        _ => (1, 6),
    }
}

fn pi_interval(value: PiRational, prec: u32) -> BigInterval {
    let q = rat(value.num(), value.den());
    BigInterval::pi(prec).mul(&BigInterval::from_rational(&q, prec))
}

/// Cotangents of the π-rational angles whose cotangent is quadratic.
fn cot_table() -> &'static Vec<(PiRational, Scalar)> {
    static TABLE: OnceLock<Vec<(PiRational, Scalar)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let s = |a: (i64, i64), b: (i64, i64), d: u64| Scalar::new(rat(a.0, a.1), rat(b.0, b.1), d).expect("square-free");
        let entries = [
            ((1, 2), s((0, 1), (0, 1), 0)),
            ((1, 3), s((0, 1), (1, 3), 3)),
            ((2, 3), s((0, 1), (-1, 3), 3)),
            ((1, 4), s((1, 1), (0, 1), 0)),
            ((3, 4), s((-1, 1), (0, 1), 0)),
            ((1, 6), s((0, 1), (1, 1), 3)),
            ((5, 6), s((0, 1), (-1, 1), 3)),
            ((1, 8), s((1, 1), (1, 1), 2)),
            ((3, 8), s((-1, 1), (1, 1), 2)),
            ((5, 8), s((1, 1), (-1, 1), 2)),
            ((7, 8), s((-1, 1), (-1, 1), 2)),
            ((1, 12), s((2, 1), (1, 1), 3)),
            ((5, 12), s((2, 1), (-1, 1), 3)),
            ((7, 12), s((-2, 1), (1, 1), 3)),
            ((11, 12), s((-2, 1), (-1, 1), 3)),
        ];
        entries
            .into_iter()
            .map(|((n, d), c)| (PiRational::new(n, d).expect("in range"), c))
            .collect()
    })
}

/// The π-rational value of an exact angle, when its cotangent is one of
/// the quadratic cotangents of multiples of π/8 or π/12.
pub fn pi_label(key: &ExactAngleKey<Scalar>) -> Option<PiRational> {
    let cot = key.dot().try_div(key.cross()).ok()?;
    cot_table()
        .iter()
        .find(|(_, c)| cot.try_sub(c).is_ok_and(|diff| diff.is_zero()))
        .map(|(p, _)| *p)
}

/// Tuning for the numeric path of a census.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CensusOptions {
    pub schedule: PrecisionSchedule,
}

/// Distinct-angle census with the default precision schedule.
pub fn census(cfg: &Configuration, mode: CensusMode) -> Result<CensusReport, CensusError> {
    census_with(cfg, mode, &CensusOptions::default())
}

pub fn census_with(cfg: &Configuration, mode: CensusMode, opts: &CensusOptions) -> Result<CensusReport, CensusError> {
    if let Some(points) = cfg.quadratic_points() {
        return Ok(census_quadratic(&points, mode)?);
    }
    match &cfg.points {
        ConfigPoints::Cyclic(c) => Ok(census_concyclic(c, mode)),
        ConfigPoints::Numeric(p) => {
            Ok(match expected_for(cfg, mode) {
                Some(expected) => match certify_census(p, mode, &opts.schedule, &expected)? {
                    (_, MatchOutcome::Certified(r)) => r,
                    (raw, MatchOutcome::Mismatch(_)) => raw,
                },
                None => cluster_census(p, mode, &opts.schedule)?,
            })
        }
        ConfigPoints::Quadratic { .. } => unreachable!("quadratic points are always available"),
    }
}

/// Declared values as certification targets for `mode`, when the
/// declaration covers that mode.
pub fn expected_for(cfg: &Configuration, mode: CensusMode) -> Option<Vec<ExpectedAngle>> {
    let mut out: Vec<ExpectedAngle> = cfg.declared.as_ref()?.iter().map(|p| ExpectedAngle::Pi(*p)).collect();
    if mode.includes_zero()
        && cfg.declared_zero? {
            out.insert(0, ExpectedAngle::Pi(PiRational::ZERO));
        }
    Some(out)
}

fn census_quadratic(points: &[QuadPoint], mode: CensusMode) -> Result<CensusReport, KernelError> {
    let ec = census_exact(points)?;
    let mut values = Vec::new();
    let mut witnesses = Vec::new();
    if mode.includes_zero() {
        if let Some(w) = ec.zero {
            values.push(AngleValue::Zero);
            witnesses.push(w);
        }
    }
    for (k, w) in ec.keys {
        values.push(match pi_label(&k) {
            Some(p) => AngleValue::Pi(p),
            None => AngleValue::Key(k),
        });
        witnesses.push(w);
    }
    Ok(CensusReport {
        mode,
        count: CensusCount::Exact(values.len()),
        values,
        witnesses,
        certification: Certification::Exact,
        precision_bits: None,
    })
}

fn census_concyclic(c: &CyclicConfig, mode: CensusMode) -> CensusReport {
    let pts = c.points();
    let index = |p: CyclicPoint| pts.iter().position(|&q| q == p).expect("witness is a member");
    let found = census_cyclic_witnessed(c, mode);
    let values = found
        .iter()
        .map(|w| if w.value.is_zero() { AngleValue::Zero } else { AngleValue::Pi(w.value) })
        .collect::<Vec<_>>();
    let witnesses = found.iter().map(|w| w.witness.map(index)).collect();
    CensusReport {
        mode,
        count: CensusCount::Exact(values.len()),
        values,
        witnesses,
        certification: Certification::Exact,
        precision_bits: None,
    }
}

/// Whether two census values denote the same angle. Numeric clusters
/// compare by label, or by overlap when unlabelled.
pub fn same_angle(a: &AngleValue, b: &AngleValue) -> bool {
    if let (Some(x), Some(y)) = (a.pi_rational(), b.pi_rational()) {
        return x == y;
    }
    match (a, b) {
        (AngleValue::Key(x), AngleValue::Key(y)) => {
            crate::exact::key_compare(x, y).is_ok_and(|o| o == Ordering::Equal)
        }
        (AngleValue::Interval { cluster: x, .. }, AngleValue::Interval { cluster: y, .. }) => {
            x.angle.overlaps(&y.angle)
        }
        _ => false,
    }
}

/// Monotonicity of the census under taking subsets: every angle of
/// `small` also occurs in `large`.
pub fn angle_set_subset(small: &Configuration, large: &Configuration) -> Result<bool, CensusError> {
    if !points_subset(small, large) {
        return Err(CensusError::NotASubset);
    }
    let a = census(small, CensusMode::ExcludeZero)?;
    let b = census(large, CensusMode::ExcludeZero)?;
    Ok(a.values.iter().all(|v| b.values.iter().any(|w| same_angle(v, w))))
}

fn points_subset(small: &Configuration, large: &Configuration) -> bool {
    match (&small.points, &large.points) {
        (ConfigPoints::Cyclic(s), ConfigPoints::Cyclic(l)) => {
            s.n() == l.n()
                && (!s.include_center() || l.include_center())
                && s.vertices().iter().all(|v| l.vertices().contains(v))
        }
        (ConfigPoints::Numeric(s), ConfigPoints::Numeric(l)) => s.iter().all(|p| l.contains(p)),
        _ => match (small.quadratic_points(), large.quadratic_points()) {
            (Some(s), Some(l)) => s.iter().all(|p| l.contains(p)),
            _ => false,
        },
    }
}

/// The three convex quadrilaterals with at most three distinct angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[allow(non_camel_case_types)]
pub enum QuadFamily {
    /// A rectangle.
    Rectangle_1a,
    /// A rhombus made of two equilateral triangles sharing an edge.
    TwinEquilateral_1b,
    /// Four vertices of a regular pentagon.
    PentagonMinusVertex_1c,
    MoreThanThree,
}

impl fmt::Display for QuadFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadFamily::Rectangle_1a => "rectangle",
            QuadFamily::TwinEquilateral_1b => "twin equilateral rhombus",
            QuadFamily::PentagonMinusVertex_1c => "pentagon minus a vertex",
            QuadFamily::MoreThanThree => "more than three angles",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadClassification {
    pub family: QuadFamily,
    /// Vertex indices in counter-clockwise hull order.
    pub hull: [usize; 4],
    pub census: CensusReport,
    pub diagnostics: Vec<String>,
}

/// The hull order of four points in strictly convex position.
fn convex_order(geo: &Geometry<'_>, idx: [usize; 4]) -> Result<Option<[usize; 4]>, CensusError> {
    let [a, b, c, d] = idx;
    for order in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
        let mut orients = Vec::with_capacity(4);
        for i in 0..4 {
            let o = geo
                .orient(order[i], order[(i + 1) % 4], order[(i + 2) % 4])
                .ok_or_else(|| CensusError::Undecidable("orientation of a hull triple".into()))?;
            orients.push(o);
        }
        if orients.iter().all(|&o| o == Orientation::CounterClockwise) {
            return Ok(Some(order));
        }
        if orients.iter().all(|&o| o == Orientation::Clockwise) {
            return Ok(Some([order[3], order[2], order[1], order[0]]));
        }
    }
    Ok(None)
}

/// Which of the three few-angle families a convex quadrilateral belongs to.
pub fn classify_convex_quad(quad: &Configuration) -> Result<QuadFamily, CensusError> {
    Ok(classify_convex_quad_detailed(quad)?.family)
}

pub fn classify_convex_quad_detailed(quad: &Configuration) -> Result<QuadClassification, CensusError> {
    if quad.len() != 4 {
        return Err(CensusError::WrongPointCount { expected: 4, got: quad.len() });
    }
    let geo = Geometry::of(quad, 512);
    let hull = convex_order(&geo, [0, 1, 2, 3])?.ok_or(CensusError::NotConvex)?;
    let report = census(quad, CensusMode::ExcludeZero)?;
    let mut diagnostics = Vec::new();
    let done = |family, diagnostics| Ok(QuadClassification { family, hull, census: report.clone(), diagnostics });
    let Some(count) = report.count.exact() else {
        diagnostics.push(format!("census unresolved: {}", report.count));
        return done(QuadFamily::MoreThanThree, diagnostics);
    };
    if count > 3 {
        return done(QuadFamily::MoreThanThree, diagnostics);
    }
    let h = |i: usize| hull[i % 4];
    let corner = |i: usize, v: PiRational| geo.angle_is(h(i + 3), h(i), h(i + 1), v);
    let side = |i: usize| (h(i), h(i + 1));
    let values: Option<Vec<PiRational>> = report.pi_values();
    let pr = |n, d| PiRational::new(n, d).expect("in range");

    if (0..4).all(|i| corner(i, pr(1, 2))) {
        return done(QuadFamily::Rectangle_1a, diagnostics);
    }
    let twin = [pr(1, 6), pr(1, 3), pr(2, 3)];
    if values.as_deref() == Some(&twin[..]) {
        let sides_equal = (1..4).all(|i| geo.same_length(side(0).0, side(0).1, side(i).0, side(i).1));
        let alternating = (0..2).any(|s| (0..4).all(|i| corner(i + s, if i % 2 == 0 { pr(1, 3) } else { pr(2, 3) })));
        if sides_equal && alternating {
            return done(QuadFamily::TwinEquilateral_1b, diagnostics);
        }
        diagnostics.push(format!("angle set matches the rhombus but sides equal: {sides_equal}, corners: {alternating}"));
    }
    let penta = [pr(1, 5), pr(2, 5), pr(3, 5)];
    if values.as_deref() == Some(&penta[..]) {
        // corners 3π/5, 3π/5, 2π/5, 2π/5 starting at s; three equal sides
        // around the two wide corners
        let fits = (0..4).any(|s| {
            let wide = corner(s, pr(3, 5)) && corner(s + 1, pr(3, 5));
            let narrow = corner(s + 2, pr(2, 5)) && corner(s + 3, pr(2, 5));
            let (a, b) = side(s + 3);
            let sides = geo.same_length(a, b, side(s).0, side(s).1)
                && geo.same_length(a, b, side(s + 1).0, side(s + 1).1);
            wide && narrow && sides
        });
        if fits {
            return done(QuadFamily::PentagonMinusVertex_1c, diagnostics);
        }
        diagnostics.push("angle set matches the pentagon family but corners or sides do not".into());
    }
    let detail = format!("{} with no matching family {:?}", report.summary(), diagnostics);
    if geo.is_exact() {
        Err(CensusError::LemmaViolation(detail))
    } else {
        diagnostics.push(detail);
        done(QuadFamily::MoreThanThree, diagnostics)
    }
}

/// Five-point configurations without a convex quadrilateral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[allow(non_camel_case_types)]
pub enum HullClass {
    /// Both inner points on one edge of the hull triangle.
    Class_2a,
    /// One inner point on an edge, the other on the segment from it to
    /// the opposite vertex.
    Class_2b,
    /// Both inner points interior and collinear with a hull vertex.
    Class_2c,
    HasConvexQuad,
    NotTriangularHull,
}

fn strictly_inside(geo: &Geometry<'_>, p: usize, [a, b, c]: [usize; 3]) -> Result<bool, CensusError> {
    let undecided = || CensusError::Undecidable("orientation against a triangle edge".into());
    let o1 = geo.orient(a, b, p).ok_or_else(undecided)?;
    let o2 = geo.orient(b, c, p).ok_or_else(undecided)?;
    let o3 = geo.orient(c, a, p).ok_or_else(undecided)?;
    Ok(o1 != Orientation::Collinear && o1 == o2 && o2 == o3)
}

fn between(geo: &Geometry<'_>, a: usize, p: usize, b: usize) -> Result<bool, CensusError> {
    geo.between(a, p, b).ok_or_else(|| CensusError::Undecidable("collinearity".into()))
}

pub fn hull_classify(cfg: &Configuration) -> Result<HullClass, CensusError> {
    if cfg.len() != 5 {
        return Err(CensusError::WrongPointCount { expected: 5, got: cfg.len() });
    }
    let geo = Geometry::of(cfg, 512);
    for skip in 0..5 {
        let idx: Vec<usize> = (0..5).filter(|&i| i != skip).collect();
        let four = [idx[0], idx[1], idx[2], idx[3]];
        if convex_order(&geo, four)?.is_some() {
            return Ok(HullClass::HasConvexQuad);
        }
    }
    let mut hull = Vec::new();
    for p in 0..5 {
        let others: Vec<usize> = (0..5).filter(|&i| i != p).collect();
        let mut extreme = true;
        for i in 0..4 {
            for j in i + 1..4 {
                if between(&geo, others[i], p, others[j])? {
                    extreme = false;
                }
                for k in j + 1..4 {
                    if strictly_inside(&geo, p, [others[i], others[j], others[k]])? {
                        extreme = false;
                    }
                }
            }
        }
        if extreme {
            hull.push(p);
        }
    }
    if hull.len() != 3 {
        return Ok(HullClass::NotTriangularHull);
    }
    let tri = [hull[0], hull[1], hull[2]];
    let inner: Vec<usize> = (0..5).filter(|i| !hull.contains(i)).collect();
    let edge_of = |p: usize| -> Result<Option<usize>, CensusError> {
        for e in 0..3 {
            if between(&geo, tri[e], p, tri[(e + 1) % 3])? {
                return Ok(Some(e));
            }
        }
        Ok(None)
    };
    let (d, e) = (inner[0], inner[1]);
    match (edge_of(d)?, edge_of(e)?) {
        (Some(x), Some(y)) if x == y => Ok(HullClass::Class_2a),
        (Some(x), None) | (None, Some(x)) => {
            let (on_edge, interior) = if edge_of(d)?.is_some() { (d, e) } else { (e, d) };
            let opposite = tri[(x + 2) % 3];
            if between(&geo, on_edge, interior, opposite)? {
                Ok(HullClass::Class_2b)
            } else {
                Err(CensusError::LemmaViolation("edge point and interior point in general position".into()))
            }
        }
        (None, None) => {
            for &v in &tri {
                let o = geo.orient(v, d, e).ok_or_else(|| CensusError::Undecidable("collinearity".into()))?;
                if o == Orientation::Collinear {
                    return Ok(HullClass::Class_2c);
                }
            }
            Err(CensusError::LemmaViolation("two interior points not aligned with a vertex".into()))
        }
        _ => Err(CensusError::LemmaViolation("inner points on different edges".into())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InteriorOutcome {
    /// At most three angles: the triangle is equilateral and the point is
    /// its center.
    CenterOfEquilateral { census: CensusReport },
    Violation { count: usize },
}

/// A triangle plus a point strictly inside it has at most three distinct
/// angles only for the center of an equilateral triangle.
pub fn verify_interior_lemma(tri: &[QuadPoint; 3], d: &QuadPoint) -> Result<InteriorOutcome, CensusError> {
    let o = [
        orientation(&tri[0], &tri[1], d),
        orientation(&tri[1], &tri[2], d),
        orientation(&tri[2], &tri[0], d),
    ];
    if o[0] == Orientation::Collinear || o[0] != o[1] || o[1] != o[2] {
        return Err(CensusError::NotInterior);
    }
    let mut pts = tri.to_vec();
    pts.push(d.clone());
    let report = census(&Configuration::quadratic(pts)?, CensusMode::ExcludeZero)?;
    let count = report.count.exact().expect("exact census");
    if count > 3 {
        return Ok(InteriorOutcome::Violation { count });
    }
    let l = |i: usize, j: usize| tri[i].sub(&tri[j]).norm2();
    let equilateral = l(0, 1) == l(1, 2) && l(1, 2) == l(2, 0);
    let three = Scalar::integer(3);
    let centroid = Point::new(
        (tri[0].x.clone() + tri[1].x.clone() + tri[2].x.clone()) / three.clone(),
        (tri[0].y.clone() + tri[1].y.clone() + tri[2].y.clone()) / three,
    );
    if equilateral && &centroid == d {
        Ok(InteriorOutcome::CenterOfEquilateral { census: report })
    } else {
        Err(CensusError::LemmaViolation(format!("{} for a non-central interior point", report.summary())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Expr;

    fn q(x: Scalar, y: Scalar) -> QuadPoint {
        Point::new(x, y)
    }

    fn r3(a: i64, b: i64, c: i64) -> Scalar {
        // a + (b/c)·√3
        Scalar::new(rat(a, 1), rat(b, c), 3).unwrap()
    }

    fn pr(n: i64, d: i64) -> PiRational {
        PiRational::new(n, d).unwrap()
    }

    #[test]
    fn square_with_center() {
        let cfg = Configuration::rational(&[(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)]);
        let r = census(&cfg, CensusMode::ExcludeZero).unwrap();
        assert_eq!(r.pi_values(), Some(vec![pr(1, 4), pr(1, 2)]));
        let r = census(&cfg, CensusMode::IncludeZero).unwrap();
        assert_eq!(r.count, CensusCount::Exact(3));
        assert!(r.values[0].is_zero());
    }

    #[test]
    fn witnesses_realise_their_values() {
        let cfg = Configuration::rational(&[(0, 0), (3, 0), (1, 2), (5, 4)]);
        let r = census(&cfg, CensusMode::ExcludeZero).unwrap();
        let pts = cfg.quadratic_points().unwrap();
        for (v, w) in r.values.iter().zip(&r.witnesses) {
            let AngleKind::Proper(k) = angle_key(&pts[w[0]], &pts[w[1]], &pts[w[2]]).unwrap() else { panic!() };
            assert!(same_angle(v, &AngleValue::Key(k.clone())) || pi_label(&k) == v.pi_rational());
        }
    }

    #[test]
    fn numeric_entries_fold_to_exact() {
        let pts = vec![
            NumericPoint::new(Expr::int(0), Expr::int(0)),
            NumericPoint::new(Expr::int(1), Expr::int(0)),
            NumericPoint::new("1/2".parse().unwrap(), "sqrt(3)/2".parse().unwrap()),
        ];
        let r = census(&Configuration::numeric(pts).unwrap(), CensusMode::ExcludeZero).unwrap();
        assert_eq!(r.certification, Certification::Exact);
        assert_eq!(r.pi_values(), Some(vec![pr(1, 3)]));
    }

    #[test]
    fn cyclic_pentagon() {
        let cfg = Configuration::cyclic(CyclicConfig::full(5, false).unwrap()).unwrap();
        let r = census(&cfg, CensusMode::ExcludeZero).unwrap();
        assert_eq!(r.pi_values(), Some(vec![pr(1, 5), pr(2, 5), pr(3, 5)]));
    }

    #[test]
    fn validation() {
        let c = |p: &[(i64, i64)]| {
            let pts = p.iter().map(|&(x, y)| q(Scalar::integer(x), Scalar::integer(y))).collect();
            Configuration::quadratic(pts)
        };
        assert_eq!(c(&[(0, 0), (1, 1)]), Err(CensusError::TooFewPoints(2)));
        assert_eq!(c(&[(0, 0), (1, 1), (2, 2)]), Err(CensusError::AllCollinear));
        assert_eq!(c(&[(0, 0), (1, 1), (0, 0)]), Err(CensusError::RepeatedPoints(0, 2)));
    }

    #[test]
    fn cot_table_matches_angles() {
        for (p, c) in cot_table() {
            assert!((c.approx() - (p.to_f64()).tan().recip()).abs() < 1e-12, "{p}");
        }
    }

    #[test]
    fn quad_families() {
        let rect = Configuration::rational(&[(0, 0), (3, 0), (0, 1), (3, 1)]);
        assert_eq!(classify_convex_quad(&rect), Ok(QuadFamily::Rectangle_1a));

        let rhombus = Configuration::quadratic(vec![
            q(r3(0, 0, 1), r3(0, 0, 1)),
            q(r3(2, 0, 1), r3(0, 0, 1)),
            q(r3(3, 0, 1), r3(0, 1, 1)),
            q(r3(1, 0, 1), r3(0, 1, 1)),
        ])
        .unwrap();
        assert_eq!(classify_convex_quad(&rhombus), Ok(QuadFamily::TwinEquilateral_1b));

        let four = Configuration::cyclic(CyclicConfig::new(5, [0, 1, 2, 3], false).unwrap()).unwrap();
        assert_eq!(classify_convex_quad(&four), Ok(QuadFamily::PentagonMinusVertex_1c));

        let kite = Configuration::rational(&[(0, 0), (2, 1), (0, 3), (-2, 1)]);
        assert_eq!(classify_convex_quad(&kite), Ok(QuadFamily::MoreThanThree));

        let dart = Configuration::rational(&[(0, 0), (4, 0), (2, 1), (2, 4)]);
        assert_eq!(classify_convex_quad(&dart), Err(CensusError::NotConvex));
    }

    #[test]
    fn numeric_pentagon_quad() {
        let v = |k: i64| NumericPoint::polar(Expr::int(1), 2 * k, 5);
        let cfg = Configuration::numeric(vec![v(0), v(2), v(1), v(3)])
            .unwrap()
            .with_declared(vec![pr(1, 5), pr(2, 5), pr(3, 5)]);
        let c = classify_convex_quad_detailed(&cfg).unwrap();
        assert_eq!(c.family, QuadFamily::PentagonMinusVertex_1c);
        assert_eq!(c.census.certification, Certification::CertifiedNumeric);

        // without a declaration equal angles stay unresolved
        let bare = Configuration::numeric(vec![v(0), v(1), v(2), v(3)]).unwrap();
        let c = classify_convex_quad_detailed(&bare).unwrap();
        assert_eq!(c.family, QuadFamily::MoreThanThree);
        assert!(!c.diagnostics.is_empty());
    }

    #[test]
    fn hull_classes() {
        let a = Configuration::rational(&[(0, 0), (4, 0), (0, 4), (1, 0), (2, 0)]);
        assert_eq!(hull_classify(&a), Ok(HullClass::Class_2a));
        let b = Configuration::rational(&[(0, 0), (4, 0), (2, 4), (2, 0), (2, 1)]);
        assert_eq!(hull_classify(&b), Ok(HullClass::Class_2b));
        let c = Configuration::rational(&[(0, 0), (6, 0), (0, 6), (1, 1), (2, 2)]);
        assert_eq!(hull_classify(&c), Ok(HullClass::Class_2c));
        let pent = Configuration::cyclic(CyclicConfig::full(5, false).unwrap()).unwrap();
        assert_eq!(hull_classify(&pent), Ok(HullClass::HasConvexQuad));
    }

    #[test]
    fn interior_point_lemma() {
        let tri = [q(r3(0, 0, 1), r3(0, 0, 1)), q(r3(2, 0, 1), r3(0, 0, 1)), q(r3(1, 0, 1), r3(0, 1, 1))];
        let center = q(r3(1, 0, 1), r3(0, 1, 3));
        assert!(matches!(
            verify_interior_lemma(&tri, &center),
            Ok(InteriorOutcome::CenterOfEquilateral { .. })
        ));
        let off = q(r3(1, 0, 1), Scalar::rational(rat(1, 2)));
        assert!(matches!(verify_interior_lemma(&tri, &off), Ok(InteriorOutcome::Violation { count }) if count > 3));
        let outside = q(r3(5, 0, 1), r3(0, 0, 1));
        assert_eq!(verify_interior_lemma(&tri, &outside), Err(CensusError::NotInterior));
    }

    #[test]
    fn subsets_lose_angles_only() {
        let big = Configuration::cyclic(CyclicConfig::full(8, true).unwrap()).unwrap();
        let small = Configuration::cyclic(CyclicConfig::new(8, [0, 3, 5], true).unwrap()).unwrap();
        assert_eq!(angle_set_subset(&small, &big), Ok(true));
        assert_eq!(angle_set_subset(&big, &small), Err(CensusError::NotASubset));
    }
}
