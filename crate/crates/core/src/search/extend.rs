use super::SearchError;
use crate::angle::{CensusMode, PiRational};
use crate::census::{census, ConfigPoints, Configuration};
use crate::cyclic::CyclicConfig;
use crate::exact::{angle_f, Point};
use crate::numeric::{Expr, NumericPoint};
use crate::quadratic::Scalar;
use crate::report::{CensusReport, Certification};
use crate::scalar::rat;
use crate::{FloatPoint, QuadPoint};
use rayon::prelude::*;
use std::f64::consts::PI;
use num_traits::{One, Zero};
use std::fmt;

/// Square sampling grid for candidate points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtensionGrid {
    pub center: (f64, f64),
    pub half_width: f64,
    pub step: f64,
}

impl ExtensionGrid {
    /// A box three times the base diameter across, centered on the base
    /// centroid, with 600 steps per side.
    pub fn default_for(base: &Configuration) -> ExtensionGrid {
        let pts = base.points_f64();
        let n = pts.len() as f64;
        let center = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let diam = diameter(&pts);
        ExtensionGrid { center, half_width: 1.5 * diam, step: diam / 200.0 }
    }

    fn points(&self) -> Vec<(f64, f64)> {
        let m = (self.half_width / self.step).floor() as i64;
        (-m..=m)
            .flat_map(|i| (-m..=m).map(move |j| (i, j)))
            .map(|(i, j)| (self.center.0 + i as f64 * self.step, self.center.1 + j as f64 * self.step))
            .collect()
    }
}

fn diameter(pts: &[(f64, f64)]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            d = d.max((p.0 - q.0).hypot(p.1 - q.1));
        }
    }
    d
}

/// An exact representation recovered from a refined float point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Snapped {
    Cartesian(QuadPoint),
    /// `r·(cos θ, sin θ)` with `θ = num/den·π`, `0 ≤ θ < 2π`.
    Polar { r: Scalar, num: i64, den: i64 },
}

impl Snapped {
    pub fn to_numeric(&self) -> NumericPoint {
        match self {
            Snapped::Cartesian(p) => NumericPoint::from_scalars(&p.x, &p.y),
            Snapped::Polar { r, num, den } => NumericPoint::polar(Expr::from_scalar(r), *num, *den),
        }
    }

    pub fn approx(&self) -> (f64, f64) {
        self.to_numeric().approx()
    }
}

impl fmt::Display for Snapped {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Snapped::Cartesian(p) => write!(f, "({}, {})", p.x, p.y),
            Snapped::Polar { r, num, den } => {
                let theta = PiRational::new(*num, *den).map(|t| t.to_string()).unwrap_or(format!("{num}π/{den}"));
                write!(f, "{r} at {theta}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointStatus {
    Exact,
    CertifiedNumeric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedPoint {
    pub point: Snapped,
    pub approx: (f64, f64),
    pub status: PointStatus,
    /// Census of the base with this point added.
    pub census: CensusReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionResult {
    pub k: usize,
    pub base_census: CensusReport,
    pub grid: ExtensionGrid,
    pub grid_hits: usize,
    pub certified: Vec<CertifiedPoint>,
    /// Refined points that did not snap or did not certify.
    pub uncertified: Vec<(f64, f64)>,
    /// `compatible[i][j]`: the base with points `i` and `j` stays within `k`.
    pub compatible: Vec<Vec<bool>>,
    /// Largest sets of certified points that can all be added together.
    pub max_compatible_sets: Vec<Vec<usize>>,
}

impl ExtensionResult {
    /// The base extended by the certified points `idx`.
    pub fn extended(&self, base: &Configuration, idx: &[usize]) -> Option<Configuration> {
        let extra: Vec<Snapped> = idx.iter().map(|&i| self.certified[i].point.clone()).collect();
        extended(base, &extra, self.base_census.pi_values())
    }
}

/// Angles of all triples with `p` as one of the three points.
fn new_angles(base: &[FloatPoint], p: &FloatPoint, out: &mut Vec<f64>) {
    out.clear();
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            out.push(angle_f(&base[i], p, &base[j]));
            out.push(angle_f(p, &base[i], &base[j]));
            out.push(angle_f(p, &base[j], &base[i]));
        }
    }
}

/// Targets every new angle may land on: the base values and the two
/// uncounted degenerate angles.
struct Targets {
    values: Vec<f64>,
    slack: usize,
}

impl Targets {
    fn nearest(&self, t: f64) -> (f64, f64) {
        let mut best = (f64::INFINITY, 0.0);
        for &v in &self.values {
            let d = (t - v).abs();
            if d < best.0 {
                best = (d, v);
            }
        }
        best
    }

    /// Angles further than `tol` from every target, grouped by gaps above
    /// `2·tol`; returns the number of groups.
    fn free_groups(&self, angles: &[f64], tol: f64) -> usize {
        let mut free: Vec<f64> = angles.iter().copied().filter(|&t| self.nearest(t).0 > tol).collect();
        free.sort_by(f64::total_cmp);
        let mut groups = 0;
        let mut start = f64::NEG_INFINITY;
        for t in free {
            if t - start > 2.0 * tol {
                groups += 1;
                start = t;
            }
        }
        groups
    }

    /// Residual of each angle against its target; free angles are pulled
    /// towards the mean of their group.
    fn residuals(&self, angles: &[f64], capture: f64, out: &mut Vec<f64>) {
        out.clear();
        let mut free: Vec<(f64, usize)> = Vec::new();
        for (i, &t) in angles.iter().enumerate() {
            let (d, v) = self.nearest(t);
            if d <= capture || self.slack == 0 {
                out.push(t - v);
            } else {
                out.push(0.0);
                free.push((t, i));
            }
        }
        free.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut groups: Vec<&[(f64, usize)]> = Vec::new();
        let mut g = 0;
        while g < free.len() {
            let mut e = g + 1;
            while e < free.len() && free[e].0 - free[e - 1].0 < capture {
                e += 1;
            }
            groups.push(&free[g..e]);
            g = e;
        }
        // only `slack` fresh values are allowed; the largest groups get them
        groups.sort_by_key(|grp| std::cmp::Reverse(grp.len()));
        for (n, grp) in groups.iter().enumerate() {
            let mean = grp.iter().map(|f| f.0).sum::<f64>() / grp.len() as f64;
            for &(t, i) in grp.iter() {
                out[i] = if n < self.slack { t - mean } else { t - self.nearest(t).1 };
            }
        }
    }
}

/// Levenberg-Marquardt on the angle residuals, with central differences.
fn refine(base: &[FloatPoint], targets: &Targets, start: (f64, f64), scale: f64, tol: f64) -> Option<(f64, f64)> {
    let mut p = start;
    let mut angles = Vec::new();
    let mut r = Vec::new();
    let mut rp = Vec::new();
    let mut rm = Vec::new();
    let eval = |q: (f64, f64), capture: f64, angles: &mut Vec<f64>, out: &mut Vec<f64>| {
        new_angles(base, &Point::new(q.0, q.1), angles);
        targets.residuals(angles, capture, out);
    };
    let capture = 0.05;
    let mut lambda = 1e-3;
    for _ in 0..100 {
        eval(p, capture, &mut angles, &mut r);
        let err = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if err < tol {
            return Some(p);
        }
        let h = 1e-7 * scale;
        let mut jac = [vec![0.0; r.len()], vec![0.0; r.len()]];
        for (axis, col) in jac.iter_mut().enumerate() {
            let shift = |s: f64| if axis == 0 { (p.0 + s, p.1) } else { (p.0, p.1 + s) };
            eval(shift(h), capture, &mut angles, &mut rp);
            eval(shift(-h), capture, &mut angles, &mut rm);
            for i in 0..r.len() {
                col[i] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let (a11, a12, a22) = (dot(&jac[0], &jac[0]), dot(&jac[0], &jac[1]), dot(&jac[1], &jac[1]));
        let (g1, g2) = (dot(&jac[0], &r), dot(&jac[1], &r));
        let cost = dot(&r, &r);
        let mut improved = false;
        for _ in 0..20 {
            let (b11, b22) = (a11 * (1.0 + lambda), a22 * (1.0 + lambda));
            let det = b11 * b22 - a12 * a12;
            if det.abs() < 1e-300 {
                lambda *= 10.0;
                continue;
            }
            let dx = -(b22 * g1 - a12 * g2) / det;
            let dy = -(b11 * g2 - a12 * g1) / det;
            let q = (p.0 + dx, p.1 + dy);
            eval(q, capture, &mut angles, &mut rp);
            if dot(&rp, &rp) < cost {
                p = q;
                lambda = (lambda / 10.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            return None;
        }
    }
    None
}

/// Best rational approximation with denominator at most `max_den`.
fn snap_rational(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() < tol {
            return Some((h1, k1));
        }
        let frac = v - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    None
}

/// `x ≈ a + b·√d` with small denominators.
fn snap_quadratic(x: f64, fields: &[u64], tol: f64) -> Option<Scalar> {
    if let Some((p, q)) = snap_rational(x, 64, tol) {
        return Some(Scalar::rational(rat(p, q)));
    }
    for &d in fields {
        let root = (d as f64).sqrt();
        for q in 1..=12i64 {
            for j in -48 * q..=48 * q {
                if j == 0 || num_integer::gcd(j, q) != 1 {
                    continue;
                }
                let b = j as f64 / q as f64;
                if let Some((p, s)) = snap_rational(x - b * root, 64, tol) {
                    return Scalar::new(rat(p, s), rat(j, q), d).ok();
                }
            }
        }
    }
    None
}

fn snap(p: (f64, f64), base: &Configuration, tol: f64) -> Option<Snapped> {
    let base_field = match base.points() {
        ConfigPoints::Quadratic { d, .. } if *d != 0 => vec![*d],
        _ => Vec::new(),
    };
    let mut fields = base_field.clone();
    fields.extend([2u64, 3, 5].into_iter().filter(|d| !base_field.contains(d)));
    let cartesian = || {
        let x = snap_quadratic(p.0, &fields, tol)?;
        let y = snap_quadratic(p.1, &fields, tol)?;
        (x.d() == 0 || y.d() == 0 || x.d() == y.d()).then(|| Snapped::Cartesian(Point::new(x, y)))
    };
    let polar = || {
        let ConfigPoints::Cyclic(c) = base.points() else {
            return None;
        };
        let r = p.0.hypot(p.1);
        if r < tol {
            return Some(Snapped::Cartesian(Point::new(Scalar::integer(0), Scalar::integer(0))));
        }
        let den = 2 * i64::from(c.n());
        let turns = p.1.atan2(p.0).rem_euclid(2.0 * PI) / PI * den as f64;
        let num = turns.round();
        if (turns - num).abs() > tol * den as f64 {
            return None;
        }
        let rs = snap_quadratic(r, &[5, 2, 3], tol)?;
        let g = num_integer::gcd(num as i64, den);
        Some(Snapped::Polar { r: rs, num: (num as i64 % (2 * den)) / g, den: den / g })
    };
    match base.points() {
        ConfigPoints::Cyclic(_) => polar().or_else(cartesian),
        _ => cartesian(),
    }
}

/// The base with extra points, in the most exact domain available.
fn extended(base: &Configuration, extra: &[Snapped], declared: Option<Vec<PiRational>>) -> Option<Configuration> {
    if let Some(mut pts) = base.quadratic_points() {
        let cart: Option<Vec<QuadPoint>> = extra
            .iter()
            .map(|s| match s {
                Snapped::Cartesian(p) => Some(p.clone()),
                Snapped::Polar { .. } => None,
            })
            .collect();
        if let Some(c) = cart {
            pts.extend(c);
            if let Ok(cfg) = Configuration::quadratic(pts) {
                return Some(cfg);
            }
        }
    }
    if let ConfigPoints::Cyclic(c) = base.points() {
        let mut verts = c.vertices().to_vec();
        let mut center = c.include_center();
        let mut all_cyclic = true;
        for s in extra {
            match s {
                Snapped::Cartesian(p) if p.x.is_zero() && p.y.is_zero() && !center => center = true,
                Snapped::Polar { r, num, den } if r.is_one() && (num * i64::from(c.n())) % (2 * den) == 0 => {
                    let v = (num * i64::from(c.n()) / (2 * den)) as u32;
                    if verts.contains(&v) {
                        return None;
                    }
                    verts.push(v);
                }
                _ => all_cyclic = false,
            }
        }
        if all_cyclic {
            return CyclicConfig::new(c.n(), verts, center).ok().and_then(|cfg| Configuration::cyclic(cfg).ok());
        }
    }
    let mut pts = base.numeric_points();
    pts.extend(extra.iter().map(Snapped::to_numeric));
    let cfg = Configuration::numeric(pts).ok()?;
    Some(match declared {
        Some(d) => cfg.with_declared(d),
        None => cfg,
    })
}

/// Exact or certified census of the base plus `extra`, when it stays within `k`.
fn certify(base: &Configuration, extra: &[Snapped], base_census: &CensusReport, k: usize) -> Option<CensusReport> {
    let cfg = extended(base, extra, base_census.pi_values())?;
    let r = census(&cfg, CensusMode::ExcludeZero).ok()?;
    if r.certification == Certification::Unresolved {
        return None;
    }
    (r.count.exact()? <= k).then_some(r)
}

/// Points that can join `base` without raising its census above `k`.
///
/// Grid points whose new angles all sit near the base angles (allowing
/// `k - census(base)` fresh values) are refined until every new angle is
/// within `refine_tol` of its target, snapped to an exact form and
/// re-censused. Only points that pass the exact or certified census are
/// reported as certified.
pub fn extend_search(
    base: &Configuration,
    k: usize,
    grid: &ExtensionGrid,
    refine_tol: f64,
    certify_points: bool,
) -> Result<ExtensionResult, SearchError> {
    let base_census = census(base, CensusMode::ExcludeZero)?;
    let base_count = base_census.count.max();
    if base_count > k {
        return Err(SearchError::BaseCensusExceedsK { census: base_census.count.to_string(), k });
    }
    let base_f: Vec<FloatPoint> = base.points_f64().into_iter().map(|(x, y)| Point::new(x, y)).collect();
    let mut values: Vec<f64> = base_census.values.iter().map(|v| v.approx_radians()).collect();
    values.extend([0.0, PI]);
    let targets = Targets { values, slack: k - base_count };
    let diam = diameter(&base.points_f64());
    let min_dist = |p: (f64, f64)| base_f.iter().map(|q| (q.x - p.0).hypot(q.y - p.1)).fold(f64::INFINITY, f64::min);

    let hits: Vec<(f64, f64)> = grid
        .points()
        .into_par_iter()
        .filter_map(|p| {
            let d = min_dist(p);
            if d < 2.0 * grid.step {
                return None;
            }
            let tol = (2.0 * grid.step / d).min(0.2);
            let mut angles = Vec::new();
            new_angles(&base_f, &Point::new(p.0, p.1), &mut angles);
            (targets.free_groups(&angles, tol) <= targets.slack).then_some(p)
        })
        .collect();
    let grid_hits = hits.len();

    let mut refined: Vec<(f64, f64)> = hits
        .par_iter()
        .filter_map(|&p| refine(&base_f, &targets, p, diam, refine_tol))
        .filter(|&p| min_dist(p) > 1e-6 * diam)
        .collect();
    refined.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut unique: Vec<(f64, f64)> = Vec::new();
    for p in refined {
        if !unique.iter().any(|q| (q.0 - p.0).hypot(q.1 - p.1) < 1e-7 * diam) {
            unique.push(p);
        }
    }

    let mut certified: Vec<CertifiedPoint> = Vec::new();
    let mut uncertified = Vec::new();
    let outcomes: Vec<((f64, f64), Option<(Snapped, CensusReport)>)> = unique
        .par_iter()
        .map(|&p| {
            let found = certify_points
                .then(|| snap(p, base, 1e-9 * diam.max(1.0)))
                .flatten()
                .and_then(|s| certify(base, std::slice::from_ref(&s), &base_census, k).map(|r| (s, r)));
            (p, found)
        })
        .collect();
    for (p, found) in outcomes {
        match found {
            Some((s, r)) if !certified.iter().any(|c| c.point == s) => {
                let status = if r.certification == Certification::Exact {
                    PointStatus::Exact
                } else {
                    PointStatus::CertifiedNumeric
                };
                certified.push(CertifiedPoint { approx: s.approx(), point: s, status, census: r });
            }
            Some(_) => {}
            None => uncertified.push(p),
        }
    }
    certified.sort_by(|a, b| a.approx.0.total_cmp(&b.approx.0).then(a.approx.1.total_cmp(&b.approx.1)));

    let m = certified.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let ok: Vec<bool> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let extra = [certified[i].point.clone(), certified[j].point.clone()];
            certify(base, &extra, &base_census, k).is_some()
        })
        .collect();
    let mut compatible = vec![vec![false; m]; m];
    for (&(i, j), &c) in pairs.iter().zip(&ok) {
        compatible[i][j] = c;
        compatible[j][i] = c;
    }
    let max_compatible_sets = max_sets(base, &certified, &compatible, &base_census, k);

    Ok(ExtensionResult {
        k,
        base_census,
        grid: *grid,
        grid_hits,
        certified,
        uncertified,
        compatible,
        max_compatible_sets,
    })
}

/// Largest sets that are pairwise compatible and certified as a whole.
fn max_sets(
    base: &Configuration,
    pts: &[CertifiedPoint],
    compatible: &[Vec<bool>],
    base_census: &CensusReport,
    k: usize,
) -> Vec<Vec<usize>> {
    let m = pts.len();
    assert!(m <= 24, "too many certified points for exhaustive set search");
    for size in (1..=m).rev() {
        let found: Vec<Vec<usize>> = (0u32..1 << m)
            .filter(|s| s.count_ones() as usize == size)
            .map(|s| (0..m).filter(|i| s >> i & 1 == 1).collect::<Vec<usize>>())
            .filter(|set| set.iter().all(|&i| set.iter().all(|&j| i == j || compatible[i][j])))
            .filter(|set| {
                set.len() <= 2 || {
                    let extra: Vec<Snapped> = set.iter().map(|&i| pts[i].point.clone()).collect();
                    certify(base, &extra, base_census, k).is_some()
                }
            })
            .collect();
        if !found.is_empty() {
            return found;
        }
    }
    Vec::new()
}
