//! Named configurations with their expected censuses, the lower-bound
//! family, and the table of known bounds on the maximum point count.

use crate::angle::{CensusMode, PiRational};
use crate::census::{census_with, CensusError, CensusOptions, Configuration};
use crate::cyclic::CyclicConfig;
use crate::exact::Point;
use crate::numeric::{Expr, NumericPoint, PrecisionSchedule};
use crate::quadratic::Scalar;
use crate::report::{CensusReport, Certification};
use crate::scalar::{rat, rat_int};
use crate::QuadPoint;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("bad parameter for `{name}`: {msg}")]
    BadParameter { name: String, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    /// Canonical name including parameters, e.g. `lb:5`.
    pub name: String,
    pub params: Vec<String>,
    pub config: Configuration,
    /// Expected number of distinct angles, zero excluded.
    pub declared_count: usize,
    /// Expected values, when they are all rational multiples of π.
    pub declared: Option<Vec<PiRational>>,
    pub note: &'static str,
}

/// Names without parameters, in listing order.
pub const FIXED_NAMES: &[&str] = &[
    "equilateral",
    "square",
    "square_center",
    "rhombus_1b",
    "pentagon_minus_vertex_1c",
    "pentagon",
    "equilateral_center",
    "right_isosceles",
    "right_isosceles_plus_x1",
    "right_isosceles_plus_x2",
    "right_isosceles_plus_x3",
    "right_isosceles_plus_x4",
    "fig3_quad_with_diagonal_point",
    "fig3_quad_with_ray_intersection",
    "fig3_fan_2a",
];

/// Parameterised names, with the arguments shown by `names()`.
pub const PARAM_NAMES: &[(&str, &str)] = &[("rectangle", "w,h"), ("ngon", "n"), ("ngon_center", "n"), ("lb", "k")];

/// Entries checked by `verify all`.
pub fn all() -> Vec<CatalogEntry> {
    let mut names: Vec<String> = FIXED_NAMES.iter().map(|s| s.to_string()).collect();
    names.extend(["rectangle:2,1", "ngon:6", "ngon_center:6", "ngon_center:5"].map(String::from));
    names.extend((1..=5).map(|k| format!("lb:{k}")));
    names.iter().map(|n| get(n).expect("built-in names resolve")).collect()
}

/// The five optimal three-angle configurations.
pub const THREE_ANGLE_OPTIMA: [&str; 5] = [
    "square_center",
    "pentagon",
    "fig3_quad_with_diagonal_point",
    "fig3_quad_with_ray_intersection",
    "fig3_fan_2a",
];

fn pr(n: i64, d: i64) -> PiRational {
    PiRational::new(n, d).expect("valid π fraction")
}

fn qp(x: Scalar, y: Scalar) -> QuadPoint {
    Point::new(x, y)
}

/// `a + b·√3`.
fn s3(a: BigRational, b: BigRational) -> Scalar {
    Scalar::new(a, b, 3).expect("3 is square-free")
}

fn int(n: i64) -> Scalar {
    Scalar::integer(n)
}

pub fn equilateral_points() -> Vec<QuadPoint> {
    vec![
        qp(int(0), int(0)),
        qp(int(2), int(0)),
        qp(int(1), s3(rat_int(0), rat_int(1))),
    ]
}

pub fn right_isosceles_points() -> Vec<QuadPoint> {
    vec![qp(int(0), int(0)), qp(int(1), int(0)), qp(int(0), int(1))]
}

/// The four points addable to the right isosceles triangle with apex at the
/// origin: the square corner, the hypotenuse midpoint, and the two
/// reflections of the legs through the apex.
pub fn right_isosceles_extensions() -> [QuadPoint; 4] {
    let h = Scalar::rational(rat(1, 2));
    [
        qp(int(1), int(1)),
        qp(h.clone(), h),
        qp(int(-1), int(0)),
        qp(int(0), int(-1)),
    ]
}

fn pentagon_vertex(k: i64) -> NumericPoint {
    NumericPoint::polar(Expr::int(1), 2 * k, 5)
}

/// `(3 ± √5) / 2`.
fn golden_radius(sign: i64) -> Expr {
    Expr::ratio(3, 2).add(Expr::ratio(sign, 2).mul(Expr::int(5).sqrt()))
}

/// Crossing of the diagonals `V0V2` and `V1V3` of the unit pentagon.
fn diagonal_crossing() -> NumericPoint {
    NumericPoint::polar(golden_radius(-1), 3, 5)
}

/// Meeting point of the extended sides `V0V1` and `V3V2`.
fn side_extension_meet() -> NumericPoint {
    NumericPoint::polar(golden_radius(1), 3, 5)
}

/// Crossing of the diagonals `V0V2` and `V1V4`.
fn second_crossing() -> NumericPoint {
    NumericPoint::polar(golden_radius(-1), 1, 5)
}

fn bad(name: &str, msg: impl Into<String>) -> CatalogError {
    CatalogError::BadParameter { name: name.to_string(), msg: msg.into() }
}

/// Splits `name:a,b` or `name(a,b)` into the name and its arguments.
fn split_name(desc: &str) -> (String, Vec<String>) {
    let desc = desc.trim();
    let (name, rest) = match desc.find([':', '(']) {
        Some(i) => (&desc[..i], desc[i + 1..].trim_end_matches(')')),
        None => (desc, ""),
    };
    let args = rest.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
    (name.trim().to_string(), args)
}

fn int_arg(name: &str, args: &[String], min: u32) -> Result<u32, CatalogError> {
    let [a] = args else {
        return Err(bad(name, "expected one integer argument"));
    };
    let v: u32 = a.parse().map_err(|_| bad(name, format!("`{a}` is not a non-negative integer")))?;
    if v < min {
        return Err(bad(name, format!("must be at least {min}")));
    }
    Ok(v)
}

fn entry(
    name: String,
    params: Vec<String>,
    config: Configuration,
    declared: Option<Vec<PiRational>>,
    declared_count: usize,
    note: &'static str,
) -> CatalogEntry {
    let config = match &declared {
        Some(d) => config.with_declared(d.clone()),
        None => config,
    };
    let config = config.with_name(name.clone());
    CatalogEntry { name, params, config, declared_count, declared, note }
}

fn known(name: &str, config: Configuration, declared: Vec<PiRational>, note: &'static str) -> CatalogEntry {
    let n = declared.len();
    entry(name.to_string(), Vec::new(), config, Some(declared), n, note)
}

/// `{jπ/n : 1 ≤ j ≤ n-2}`.
fn multiples(n: i64) -> Vec<PiRational> {
    (1..=n - 2).map(|j| pr(j, n)).collect()
}

/// Looks up a catalog entry by name, with parameters as `name:args` or
/// `name(args)`.
pub fn get(desc: &str) -> Result<CatalogEntry, CatalogError> {
    let (name, args) = split_name(desc);
    let fixed = |cfg: Result<Configuration, CensusError>| cfg.expect("catalog geometry is valid");
    let penta = [pr(1, 5), pr(2, 5), pr(3, 5)];
    let quarter = vec![pr(1, 4), pr(1, 2)];
    let twin = vec![pr(1, 6), pr(1, 3), pr(2, 3)];
    if !args.is_empty() && FIXED_NAMES.contains(&name.as_str()) {
        return Err(bad(&name, "takes no parameters"));
    }
    let quad = |pts: Vec<QuadPoint>| fixed(Configuration::quadratic(pts));
    let pentagon_with = |extra: Vec<NumericPoint>, base: &[i64]| {
        let mut pts: Vec<NumericPoint> = base.iter().map(|&k| pentagon_vertex(k)).collect();
        pts.extend(extra);
        fixed(Configuration::numeric(pts)).with_declared_zero(true)
    };
    Ok(match name.as_str() {
        "equilateral" => known(&name, quad(equilateral_points()), vec![pr(1, 3)], "unique one-angle maximum"),
        "square" => known(
            &name,
            Configuration::rational(&[(0, 0), (1, 0), (1, 1), (0, 1)]),
            quarter,
            "unique two-angle maximum once zero counts",
        ),
        "square_center" => known(
            &name,
            Configuration::rational(&[(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)]),
            quarter,
            "unique two-angle maximum; one of the three-angle maxima",
        ),
        "rhombus_1b" => known(
            &name,
            quad(vec![
                qp(int(0), int(0)),
                qp(int(2), int(0)),
                qp(int(3), s3(rat_int(0), rat_int(1))),
                qp(int(1), s3(rat_int(0), rat_int(1))),
            ]),
            twin,
            "convex quadrilateral family: two equilateral triangles sharing an edge",
        ),
        "pentagon_minus_vertex_1c" => known(
            &name,
            fixed(Configuration::cyclic(CyclicConfig::new(5, [0, 1, 2, 3], false).expect("valid"))),
            penta.to_vec(),
            "convex quadrilateral family: four vertices of a regular pentagon",
        ),
        "pentagon" => known(
            &name,
            fixed(Configuration::cyclic(CyclicConfig::full(5, false).expect("valid"))),
            penta.to_vec(),
            "three-angle maximum: the regular pentagon",
        ),
        "equilateral_center" => {
            let mut pts = equilateral_points();
            pts.push(qp(int(1), s3(rat_int(0), rat(1, 3))));
            known(&name, quad(pts), twin, "the only triangle with an interior point and three angles")
        }
        "right_isosceles" => {
            known(&name, quad(right_isosceles_points()), quarter, "base of the two-angle extension casework")
        }
        "right_isosceles_plus_x1" | "right_isosceles_plus_x2" | "right_isosceles_plus_x3"
        | "right_isosceles_plus_x4" => {
            let i = name.as_bytes()[name.len() - 1] - b'1';
            let mut pts = right_isosceles_points();
            pts.push(right_isosceles_extensions()[i as usize].clone());
            known(&name, quad(pts), quarter, "right isosceles triangle with one addable point")
        }
        "fig3_quad_with_diagonal_point" => known(
            &name,
            pentagon_with(vec![diagonal_crossing()], &[0, 1, 2, 3]),
            penta.to_vec(),
            "pentagon-minus-vertex quadrilateral plus its diagonal crossing",
        ),
        "fig3_quad_with_ray_intersection" => known(
            &name,
            pentagon_with(vec![side_extension_meet()], &[0, 1, 2, 3]),
            penta.to_vec(),
            "pentagon-minus-vertex quadrilateral plus the meeting point of two extended sides",
        ),
        "fig3_fan_2a" => known(
            &name,
            pentagon_with(vec![second_crossing(), diagonal_crossing()], &[0, 1, 2]),
            penta.to_vec(),
            "triangular hull with two points on one edge",
        ),
        "rectangle" => {
            let [w, h] = args.as_slice() else {
                return Err(bad(&name, "expected two arguments w,h"));
            };
            let parse = |s: &str| {
                crate::quadratic::parse_rational(s)
                    .filter(|r| r > &rat_int(0))
                    .ok_or_else(|| bad(&name, format!("`{s}` is not a positive rational")))
            };
            let (w, h) = (Scalar::rational(parse(w)?), Scalar::rational(parse(h)?));
            let z = int(0);
            let cfg = quad(vec![
                qp(z.clone(), z.clone()),
                qp(w.clone(), z.clone()),
                qp(w.clone(), h.clone()),
                qp(z, h.clone()),
            ]);
            let (declared, count) = if w == h { (Some(quarter), 2) } else { (None, 3) };
            entry(format!("rectangle:{},{}", args[0], args[1]), args.clone(), cfg, declared, count, "rectangle family")
        }
        "ngon" => {
            let n = int_arg(&name, &args, 3)?;
            let cfg = fixed(Configuration::cyclic(CyclicConfig::full(n, false).expect("n ≥ 3")));
            let d = multiples(n.into());
            let count = d.len();
            entry(format!("ngon:{n}"), args, cfg, Some(d), count, "regular polygon")
        }
        "ngon_center" => {
            let n = int_arg(&name, &args, 3)?;
            let cfg = fixed(Configuration::cyclic(CyclicConfig::full(n, true).expect("n ≥ 3")));
            let (d, count) = if n % 2 == 0 {
                let d = multiples(n.into());
                let c = d.len();
                (Some(d), c)
            } else {
                (Some(odd_center_census(n.into())), odd_center_census(n.into()).len())
            };
            entry(format!("ngon_center:{n}"), args, cfg, d, count, "regular polygon with its center")
        }
        "lb" => {
            let k = int_arg(&name, &args, 1)?;
            let cfg = lower_bound_config(k).with_name(format!("lb:{k}"));
            let d = multiples(2 * i64::from(k) + 2);
            let count = d.len();
            entry(format!("lb:{k}"), args, cfg, Some(d), count, "lower-bound family")
        }
        _ => return Err(CatalogError::UnknownName(name)),
    })
}

/// For odd `n` the center adds half-multiples: `jπ/n` for `1 ≤ j ≤ n-2`,
/// central angles `2jπ/n < π`, and base angles `π/2 - jπ/n`.
fn odd_center_census(n: i64) -> Vec<PiRational> {
    let mut v = multiples(n);
    v.extend((1..).map(|j| 2 * j).take_while(|&m| m < n).map(|m| pr(m, n)));
    v.extend((1..).map(|j| n - 2 * j).take_while(|&m| m > 0).map(|m| pr(m, 2 * n)));
    v.sort();
    v.dedup();
    v
}

/// The regular `(2k+2)`-gon with its center: `2k+3` points, `2k` angles.
pub fn lower_bound_config(k: u32) -> Configuration {
    assert!(k >= 1, "the lower-bound family starts at k = 1");
    let cfg = CyclicConfig::full(2 * k + 2, true).expect("at least four vertices");
    Configuration::cyclic(cfg).expect("a polygon with its center is valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoundsResult {
    pub k: u32,
    pub lower: u64,
    pub upper: u64,
    pub exact: Option<u64>,
}

/// Known bounds on the largest non-collinear set with at most `k` angles:
/// `k + 2` from the pentagon-type constructions, `2j + 3` for `k ∈ {2j,
/// 2j+1}` from the lower-bound family, and `6k` above.
pub fn bounds(k: u32) -> Option<BoundsResult> {
    if k == 0 {
        return None;
    }
    let k64 = u64::from(k);
    let parity = 2 * (k64 / 2) + 3;
    let exact = match k {
        1 => Some(3),
        2 | 3 => Some(5),
        _ => None,
    };
    Some(BoundsResult { k, lower: parity.max(k64 + 2), upper: 6 * k64, exact })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOutcome {
    pub name: String,
    pub report: Result<CensusReport, CensusError>,
    pub passed: bool,
    pub detail: String,
}

/// Precision used when certifying numeric entries.
pub fn verify_schedule() -> PrecisionSchedule {
    PrecisionSchedule::new(256, 2048)
}

/// Re-censuses an entry and compares the result with its declaration.
pub fn verify_entry(e: &CatalogEntry) -> VerifyOutcome {
    let opts = CensusOptions { schedule: verify_schedule() };
    let report = census_with(&e.config, CensusMode::ExcludeZero, &opts);
    let (passed, detail) = match &report {
        Err(err) => (false, err.to_string()),
        Ok(r) => check(e, r),
    };
    VerifyOutcome { name: e.name.clone(), report, passed, detail }
}

fn check(e: &CatalogEntry, r: &CensusReport) -> (bool, String) {
    if r.certification == Certification::Unresolved {
        return (false, format!("census unresolved: {}", r.count));
    }
    if r.count.exact() != Some(e.declared_count) {
        return (false, format!("expected {} angles, found {}", e.declared_count, r.count));
    }
    if let Some(d) = &e.declared {
        if r.pi_values().as_ref() != Some(d) {
            let want: Vec<String> = d.iter().map(|p| p.to_string()).collect();
            return (false, format!("expected {{{}}}, found {}", want.join(", "), r.summary()));
        }
    }
    (true, r.summary())
}
