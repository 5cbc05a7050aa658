//! Interval clustering of all angles of a point set.

use super::{legs, BigInterval, Expr, NumericError, NumericPoint, PrecisionSchedule, WORK_GUARD};
use crate::angle::{CensusMode, PiRational};
use crate::report::{AngleValue, CensusCount, CensusReport, Certification, ClusterKind, NumericCluster};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Proper,
    /// Cross product not separated from zero; dot product sign known.
    NearZero,
    NearPi,
    /// Neither product separated from zero: the legs are too short to tell.
    Undecided,
}

#[derive(Clone, Debug)]
struct TripleState {
    triple: [usize; 3],
    shape: Shape,
    cos: Option<BigInterval>,
}

fn evaluate(points: &[(BigInterval, BigInterval)], t: [usize; 3]) -> (Shape, BigInterval) {
    let [a, b, c] = t;
    let ux = points[a].0.sub(&points[b].0);
    let uy = points[a].1.sub(&points[b].1);
    let vx = points[c].0.sub(&points[b].0);
    let vy = points[c].1.sub(&points[b].1);
    let cross = ux.mul(&vy).sub(&uy.mul(&vx));
    let dot = ux.mul(&vx).add(&uy.mul(&vy));
    let n2 = ux.square().add(&uy.square()).mul(&vx.square().add(&vy.square()));
    let one = BigInterval::from_int(1, ux.prec());
    let cos = match n2.sqrt().and_then(|n| dot.div(&n)) {
        Ok(c) => c.clamp(-1, 1),
        Err(_) => one.neg().hull(&one),
    };
    let shape = if !cross.contains_zero() {
        Shape::Proper
    } else if dot.is_positive() {
        Shape::NearZero
    } else if dot.is_negative() {
        Shape::NearPi
    } else {
        Shape::Undecided
    };
    (shape, cos)
}

struct Component {
    members: Vec<usize>,
    hull: BigInterval,
}

/// Groups overlapping cosine intervals; members keep ascending index order.
fn components(states: &[TripleState]) -> Vec<Component> {
    let mut order: Vec<usize> = (0..states.len()).collect();
    let cos = |i: usize| states[i].cos.as_ref().expect("evaluated");
    order.sort_by(|&i, &j| cos(i).lo_rational().cmp(&cos(j).lo_rational()).then(i.cmp(&j)));
    let mut out: Vec<Component> = Vec::new();
    for i in order {
        let iv = cos(i);
        match out.last_mut() {
            Some(c) if c.hull.overlaps(iv) => {
                c.hull = c.hull.hull(iv);
                c.members.push(i);
            }
            _ => out.push(Component { members: vec![i], hull: iv.clone() }),
        }
    }
    for c in &mut out {
        c.members.sort_unstable();
    }
    out
}

/// Distinct-angle census of numeric points by interval clustering.
///
/// Every angle is enclosed at the schedule's starting precision; clusters
/// that still hold more than one triple, or any triple that cannot be
/// separated from a degenerate one, are refined at doubled precision until
/// the cap. The count is a range whenever some cluster stays ambiguous.
pub fn cluster_census(
    points: &[NumericPoint],
    mode: CensusMode,
    schedule: &PrecisionSchedule,
) -> Result<CensusReport, NumericError> {
    refine(points, mode, schedule, None)
}

/// Lowest precision at which a match against declared values is accepted.
pub const MIN_CERTIFY_BITS: u32 = 256;

/// [`cluster_census`] followed by [`match_expected`], stopping at the first
/// level of at least [`MIN_CERTIFY_BITS`] where the match succeeds. Equal
/// angles never separate, so waiting for the cap would only burn time.
/// Returns the raw census at the stopping level and the match outcome.
pub fn certify_census(
    points: &[NumericPoint],
    mode: CensusMode,
    schedule: &PrecisionSchedule,
    expected: &[ExpectedAngle],
) -> Result<(CensusReport, MatchOutcome), NumericError> {
    let floor = MIN_CERTIFY_BITS.min(schedule.cap);
    let mut certified = None;
    let mut check = |r: &CensusReport| {
        if r.precision_bits.is_some_and(|p| p < floor) {
            return false;
        }
        match match_expected(r, expected) {
            MatchOutcome::Certified(c) => {
                certified = Some(c);
                true
            }
            MatchOutcome::Mismatch(_) => false,
        }
    };
    let raw = refine(points, mode, schedule, Some(&mut check))?;
    let outcome = match certified {
        Some(c) => MatchOutcome::Certified(c),
        None => match_expected(&raw, expected),
    };
    Ok((raw, outcome))
}

/// The refinement loop. `stop`, when given, sees the summary after every level at which
/// no triple is left undecided, and ends the loop by returning `true`.
fn refine(
    points: &[NumericPoint],
    mode: CensusMode,
    schedule: &PrecisionSchedule,
    mut stop: Option<&mut dyn FnMut(&CensusReport) -> bool>,
) -> Result<CensusReport, NumericError> {
    let n = points.len();
    if n < 3 {
        return Err(NumericError::TooFewPoints(n));
    }
    let mut states = Vec::new();
    for b in 0..n {
        for a in 0..n {
            for c in a + 1..n {
                if a != b && c != b {
                    states.push(TripleState { triple: [a, b, c], shape: Shape::Undecided, cos: None });
                }
            }
        }
    }
    let mut active: Vec<usize> = (0..states.len()).collect();
    let mut final_prec = schedule.start;
    let mut comps = Vec::new();
    for prec in schedule.levels() {
        final_prec = prec;
        let wp = prec + WORK_GUARD;
        let coords = points.iter().map(|p| p.eval(wp)).collect::<Result<Vec<_>, _>>()?;
        let fresh: Vec<(Shape, BigInterval)> = active
            .par_iter()
            .map(|&i| {
                let (shape, cos) = evaluate(&coords, states[i].triple);
                (shape, cos.with_prec(prec).widen(2))
            })
            .collect();
        for (&i, (shape, cos)) in active.iter().zip(fresh) {
            let s = &mut states[i];
            s.cos = Some(match &s.cos {
                Some(prev) => prev.with_prec(prec).intersect(&cos).unwrap_or(cos),
                None => cos,
            });
            s.shape = shape;
        }
        comps = components(&states);
        active = comps
            .iter()
            .filter(|c| c.members.len() > 1 || states[c.members[0]].shape != Shape::Proper)
            .flat_map(|c| c.members.iter().copied())
            .collect();
        if active.is_empty() {
            break;
        }
        if let Some(stop) = stop.as_mut() {
            if !active.iter().any(|&i| states[i].shape == Shape::Undecided) {
                let summary = summarise(&states, &comps, mode, prec);
                if stop(&summary) {
                    return Ok(summary);
                }
            }
        }
    }
    if let Some(&i) = active.iter().find(|&&i| states[i].shape == Shape::Undecided) {
        let [a, b, c] = states[i].triple;
        let far = points_far(points, a, b, c, final_prec);
        return Err(NumericError::CoincidentPoints(b, far));
    }
    Ok(summarise(&states, &comps, mode, final_prec))
}

/// The endpoint of an undecided triple whose distance to the vertex could
/// not be separated from zero.
fn points_far(points: &[NumericPoint], a: usize, b: usize, c: usize, prec: u32) -> usize {
    let wp = prec + WORK_GUARD;
    let near = |i: usize| -> bool {
        let Ok([ux, uy, _, _]) = legs(&points[i], &points[b], &points[b], wp) else {
            return true;
        };
        ux.square().add(&uy.square()).contains_zero()
    };
    if near(a) {
        a
    } else {
        c
    }
}

fn summarise(states: &[TripleState], comps: &[Component], mode: CensusMode, prec: u32) -> CensusReport {
    let mut clusters: Vec<(NumericCluster, [usize; 3])> = Vec::new();
    let (mut min, mut max) = (0usize, 0usize);
    for comp in comps {
        let proper = comp.members.iter().filter(|&&i| states[i].shape == Shape::Proper).count();
        let boundary = comp.members.len() - proper;
        let near_zero = comp.members.iter().any(|&i| states[i].shape == Shape::NearZero);
        let near_pi = comp.members.iter().any(|&i| states[i].shape == Shape::NearPi);
        let kind = if near_zero {
            ClusterKind::NearZero
        } else if near_pi {
            ClusterKind::NearPi
        } else {
            ClusterKind::Interior
        };
        let (lo, hi) = match kind {
            ClusterKind::Interior => (1, proper),
            ClusterKind::NearZero if mode.includes_zero() => (1, proper + boundary),
            _ => (usize::from(proper > 0), proper + boundary),
        };
        min += lo;
        max += hi;
        if hi == 0 {
            continue;
        }
        let witness = comp
            .members
            .iter()
            .copied()
            .find(|&i| states[i].shape == Shape::Proper)
            .unwrap_or(comp.members[0]);
        let angle = comp.hull.acos();
        clusters.push((
            NumericCluster { kind, angle, cos: comp.hull.clone(), proper, boundary },
            states[witness].triple,
        ));
    }
    // descending cosine is ascending angle
    clusters.sort_by(|x, y| y.0.cos.lo_rational().cmp(&x.0.cos.lo_rational()));
    let exact = min == max;
    let (values, witnesses) = clusters
        .into_iter()
        .map(|(cluster, t)| (AngleValue::Interval { cluster, label: None }, t))
        .unzip();
    CensusReport {
        mode,
        count: if exact { CensusCount::Exact(min) } else { CensusCount::Range { min, max } },
        values,
        witnesses,
        certification: if exact { Certification::CertifiedNumeric } else { Certification::Unresolved },
        precision_bits: Some(prec),
    }
}

/// A declared exact angle to certify a numeric census against.
#[derive(Clone, Debug, PartialEq)]
pub enum ExpectedAngle {
    Pi(PiRational),
    /// The angle with cotangent `dot / cross`, `cross > 0`.
    Cot { dot: Expr, cross: Expr },
}

impl ExpectedAngle {
    fn is_zero(&self) -> bool {
        matches!(self, ExpectedAngle::Pi(p) if p.is_zero())
    }

    fn cos_interval(&self, prec: u32) -> BigInterval {
        let wp = prec + WORK_GUARD;
        let v = match self {
            ExpectedAngle::Pi(p) if p.is_zero() => BigInterval::from_int(1, wp),
            ExpectedAngle::Pi(p) if p.is_straight() => BigInterval::from_int(-1, wp),
            ExpectedAngle::Pi(p) => {
                let q = BigRational::new(BigInt::from(p.num()), BigInt::from(p.den()));
                BigInterval::pi(wp).mul(&BigInterval::from_rational(&q, wp)).cos()
            }
            ExpectedAngle::Cot { dot, cross } => {
                let t = dot.eval(wp).expect("declared cotangent evaluates");
                let c = cross.eval(wp).expect("declared cotangent evaluates");
                let r = t.square().add(&c.square()).sqrt().expect("sum of squares");
                t.div(&r).expect("cross is nonzero").clamp(-1, 1)
            }
        };
        v.with_prec(prec).widen(2)
    }

    fn label(&self) -> Option<PiRational> {
        match self {
            ExpectedAngle::Pi(p) => Some(*p),
            ExpectedAngle::Cot { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatchOutcome {
    /// The census with every value labelled and an exact count.
    Certified(CensusReport),
    Mismatch(String),
}

impl MatchOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, MatchOutcome::Certified(_))
    }
}

/// Certifies a numeric census against declared values.
///
/// Each expected value must fall in exactly one cluster. Interior clusters
/// must receive exactly one value. A boundary cluster receives the zero
/// angle (when counted) and at most the one proper value its certified
/// members require; its remaining members are read as the degenerate angle
/// they could not be separated from.
pub fn match_expected(report: &CensusReport, expected: &[ExpectedAngle]) -> MatchOutcome {
    let prec = report.precision_bits.unwrap_or(128);
    let mut exp: Vec<(usize, &ExpectedAngle, BigInterval)> = Vec::new();
    for (i, e) in expected.iter().enumerate() {
        if matches!(e, ExpectedAngle::Pi(p) if p.is_straight()) {
            return MatchOutcome::Mismatch("π is never part of a census".into());
        }
        if e.is_zero() && !report.mode.includes_zero() {
            return MatchOutcome::Mismatch("zero angle declared outside include-zero mode".into());
        }
        exp.push((i, e, e.cos_interval(prec)));
    }
    for (i, x) in exp.iter().enumerate() {
        for y in &exp[i + 1..] {
            if x.2.overlaps(&y.2) {
                return MatchOutcome::Mismatch(format!(
                    "declared values {} and {} are not separated at {prec} bits",
                    x.0, y.0
                ));
            }
        }
    }
    let mut owner: Vec<Option<usize>> = vec![None; exp.len()];
    let mut values = Vec::new();
    let mut witnesses = Vec::new();
    for (ci, v) in report.values.iter().enumerate() {
        let AngleValue::Interval { cluster, .. } = v else {
            return MatchOutcome::Mismatch("report is not a numeric census".into());
        };
        let hits: Vec<usize> = (0..exp.len()).filter(|&k| cluster.cos.overlaps(&exp[k].2)).collect();
        for &k in &hits {
            if let Some(prev) = owner[k] {
                return MatchOutcome::Mismatch(format!("declared value {k} falls in clusters {prev} and {ci}"));
            }
            owner[k] = Some(ci);
        }
        let zero_hits = hits.iter().filter(|&&k| exp[k].1.is_zero()).count();
        let proper_hits = hits.len() - zero_hits;
        let need_proper = usize::from(cluster.proper > 0);
        let ok = match cluster.kind {
            ClusterKind::Interior => hits.len() == 1,
            ClusterKind::NearZero if report.mode.includes_zero() => zero_hits == 1 && proper_hits == need_proper,
            _ => zero_hits == 0 && proper_hits == need_proper,
        };
        if !ok {
            return MatchOutcome::Mismatch(format!(
                "cluster {ci} ({:?}, {} members, angle ≈ {:.12}) matches {} declared values",
                cluster.kind,
                cluster.members(),
                cluster.angle.mid_f64(),
                hits.len()
            ));
        }
        for &k in &hits {
            values.push((k, cluster.clone(), report.witnesses[ci]));
        }
    }
    if let Some(k) = owner.iter().position(|o| o.is_none()) {
        return MatchOutcome::Mismatch(format!("declared value {k} matches no cluster"));
    }
    values.sort_by(|x, y| match (exp[x.0].1.is_zero(), exp[y.0].1.is_zero()) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => y.1.cos.lo_rational().cmp(&x.1.cos.lo_rational()),
    });
    let count = values.len();
    let mut out_values = Vec::with_capacity(count);
    for (k, cluster, w) in values {
        let label = exp[k].1.label();
        out_values.push(if exp[k].1.is_zero() {
            AngleValue::Zero
        } else {
            AngleValue::Interval { cluster, label }
        });
        witnesses.push(w);
    }
    MatchOutcome::Certified(CensusReport {
        mode: report.mode,
        count: CensusCount::Exact(count),
        values: out_values,
        witnesses,
        certification: Certification::CertifiedNumeric,
        precision_bits: report.precision_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(&str, &str)]) -> Vec<NumericPoint> {
        v.iter().map(|(x, y)| NumericPoint::new(x.parse().unwrap(), y.parse().unwrap())).collect()
    }

    fn pr(n: i64, d: i64) -> ExpectedAngle {
        ExpectedAngle::Pi(PiRational::new(n, d).unwrap())
    }

    fn quick() -> PrecisionSchedule {
        PrecisionSchedule::new(128, 512)
    }

    #[test]
    fn scalene_triangle_is_certified_without_declaration() {
        let p = pts(&[("0", "0"), ("3", "0"), ("0", "1")]);
        let r = cluster_census(&p, CensusMode::ExcludeZero, &quick()).unwrap();
        assert_eq!(r.count, CensusCount::Exact(3));
        assert_eq!(r.certification, Certification::CertifiedNumeric);
        assert_eq!(r.precision_bits, Some(128));
    }

    #[test]
    fn square_center_matches_declared_values() {
        let p = pts(&[("0", "0"), ("1", "0"), ("1", "1"), ("0", "1"), ("0.5", "0.5")]);
        let r = cluster_census(&p, CensusMode::ExcludeZero, &quick()).unwrap();
        assert_eq!(r.count.min(), 2);
        assert_eq!(r.certification, Certification::Unresolved);
        let MatchOutcome::Certified(c) = match_expected(&r, &[pr(1, 4), pr(1, 2)]) else {
            panic!("square+center should certify");
        };
        assert_eq!(c.count, CensusCount::Exact(2));
        assert!(!match_expected(&r, &[pr(1, 4), pr(1, 3)]).is_certified());
        let z = cluster_census(&p, CensusMode::IncludeZero, &quick()).unwrap();
        let MatchOutcome::Certified(c) = match_expected(&z, &[pr(0, 1), pr(1, 4), pr(1, 2)]) else {
            panic!("include-zero census should certify");
        };
        assert_eq!(c.count, CensusCount::Exact(3));
        assert!(c.values[0].is_zero());
        assert!(!match_expected(&z, &[pr(1, 4), pr(1, 2)]).is_certified());
    }

    #[test]
    fn certification_stops_at_the_floor() {
        let p = pts(&[("0", "0"), ("1", "0"), ("1", "1"), ("0", "1"), ("0.5", "0.5")]);
        let (raw, out) =
            certify_census(&p, CensusMode::ExcludeZero, &PrecisionSchedule::default(), &[pr(1, 4), pr(1, 2)]).unwrap();
        assert_eq!(raw.precision_bits, Some(MIN_CERTIFY_BITS));
        assert!(out.is_certified());
        let (raw, out) =
            certify_census(&p, CensusMode::ExcludeZero, &PrecisionSchedule::new(128, 1024), &[pr(1, 4)]).unwrap();
        assert_eq!(raw.precision_bits, Some(1024));
        assert!(!out.is_certified());
    }

    #[test]
    fn adversarial_pair_stays_unresolved() {
        let p = pts(&[("0", "0"), ("2", "0"), ("1 + 2^-5000 * cos(1/7 pi)", "1")]);
        let r = cluster_census(&p, CensusMode::ExcludeZero, &PrecisionSchedule::default()).unwrap();
        assert_eq!(r.count, CensusCount::Range { min: 2, max: 3 });
        assert_eq!(r.certification, Certification::Unresolved);
    }

    #[test]
    fn too_few_points() {
        let p = pts(&[("0", "0"), ("1", "0")]);
        assert_eq!(
            cluster_census(&p, CensusMode::ExcludeZero, &quick()).unwrap_err(),
            NumericError::TooFewPoints(2)
        );
    }
}
