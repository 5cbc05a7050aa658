use crate::census::QuadFamily;
use crate::exact::{angle_f, orientation_f, Point};
use crate::FloatPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FalsifyOptions {
    pub trials: usize,
    pub seed: u64,
    /// Angles closer than this count as equal; family distances must stay
    /// below it.
    pub tol: f64,
    /// Objective evaluations per trial.
    pub max_evals: usize,
}

impl FalsifyOptions {
    pub fn new(trials: usize, seed: u64) -> FalsifyOptions {
        FalsifyOptions { trials, seed, tol: 1e-6, max_evals: 3000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TrialOutcome {
    /// Converged to at most three angles, within `distance` of `family`.
    Family { family: QuadFamily, distance: f64 },
    /// The optimiser stopped with four or more distinct angles.
    StaysAbove { distinct: usize },
    /// The quadrilateral collapsed, lost convexity, or grew a side over
    /// 200 times shorter than another.
    Degenerate,
    /// At most three angles but far from every family.
    Counterexample { points: [(f64, f64); 4], angles: Vec<f64>, distance: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FalsificationReport {
    pub options: FalsifyOptions,
    pub rectangles: usize,
    pub twin_equilateral: usize,
    pub pentagon_minus_vertex: usize,
    pub stays_above: usize,
    pub degenerate: usize,
    /// Trial index and outcome of every counterexample candidate.
    pub counterexamples: Vec<(usize, TrialOutcome)>,
}

/// `A = (0,0)`, `B = (1,0)`, and `C`, `D` from the parameters.
fn quad(x: &[f64; 4]) -> [FloatPoint; 4] {
    [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(x[0], x[1]), Point::new(x[2], x[3])]
}

/// The twelve vertex angles, sorted.
fn angles(q: &[FloatPoint; 4]) -> Vec<f64> {
    let mut out = Vec::with_capacity(12);
    for b in 0..4 {
        let o: Vec<usize> = (0..4).filter(|&i| i != b).collect();
        out.push(angle_f(&q[o[0]], &q[b], &q[o[1]]));
        out.push(angle_f(&q[o[0]], &q[b], &q[o[2]]));
        out.push(angle_f(&q[o[1]], &q[b], &q[o[2]]));
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Smallest normalised corner turn; positive for a counter-clockwise
/// convex quadrilateral.
fn convexity(q: &[FloatPoint; 4]) -> f64 {
    (0..4)
        .map(|i| {
            let (a, b, c) = (&q[i], &q[(i + 1) % 4], &q[(i + 2) % 4]);
            let la = (b.x - a.x).hypot(b.y - a.y);
            let lc = (c.x - b.x).hypot(c.y - b.y);
            orientation_f(a, b, c) / (la * lc)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Optimal split of sorted values into at most three runs: the summed
/// squared deviation and the two cut points.
fn three_means(t: &[f64]) -> (f64, usize, usize) {
    let n = t.len();
    let mut s = vec![0.0; n + 1];
    let mut s2 = vec![0.0; n + 1];
    for i in 0..n {
        s[i + 1] = s[i] + t[i];
        s2[i + 1] = s2[i] + t[i] * t[i];
    }
    let cost = |i: usize, j: usize| {
        if j <= i {
            0.0
        } else {
            let m = (j - i) as f64;
            (s2[j] - s2[i]) - (s[j] - s[i]).powi(2) / m
        }
    };
    let mut best = (f64::INFINITY, 0, 0);
    for a in 1..n {
        for b in a..n {
            let c = cost(0, a) + cost(a, b) + cost(b, n);
            if c < best.0 {
                best = (c, a, b);
            }
        }
    }
    best
}

/// Shortest over longest side.
fn side_ratio(q: &[FloatPoint; 4]) -> f64 {
    let sides: Vec<f64> = (0..4).map(|i| (q[(i + 1) % 4].x - q[i].x).hypot(q[(i + 1) % 4].y - q[i].y)).collect();
    sides.iter().copied().fold(f64::INFINITY, f64::min) / sides.iter().copied().fold(0.0, f64::max)
}

fn objective(x: &[f64; 4]) -> f64 {
    let q = quad(x);
    let conv = convexity(&q);
    let ratio = side_ratio(&q);
    let mut penalty = if conv < 1e-3 { 10.0 * (1e-3 - conv) + 1.0 } else { 0.0 };
    if ratio < 0.01 {
        penalty += 10.0 * (0.01 - ratio) + 1.0;
    }
    three_means(&angles(&q)).0 + penalty
}

fn nelder_mead(start: [f64; 4], step: f64, max_evals: usize) -> [f64; 4] {
    let mut simplex: Vec<([f64; 4], f64)> = (0..5)
        .map(|i| {
            let mut v = start;
            if i > 0 {
                v[i - 1] += step;
            }
            (v, objective(&v))
        })
        .collect();
    let mut evals = 5;
    let lerp = |a: &[f64; 4], b: &[f64; 4], t: f64| {
        let mut o = [0.0; 4];
        for i in 0..4 {
            o[i] = a[i] + t * (b[i] - a[i]);
        }
        o
    };
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[4].1 - simplex[0].1 < 1e-18 {
            break;
        }
        let mut centroid = [0.0; 4];
        for (v, _) in &simplex[..4] {
            for i in 0..4 {
                centroid[i] += v[i] / 4.0;
            }
        }
        let worst = simplex[4].0;
        let refl = lerp(&centroid, &worst, -1.0);
        let fr = objective(&refl);
        evals += 1;
        if fr < simplex[0].1 {
            let exp = lerp(&centroid, &worst, -2.0);
            let fe = objective(&exp);
            evals += 1;
            simplex[4] = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < simplex[3].1 {
            simplex[4] = (refl, fr);
        } else {
            let con = lerp(&centroid, &worst, 0.5);
            let fc = objective(&con);
            evals += 1;
            if fc < simplex[4].1 {
                simplex[4] = (con, fc);
            } else {
                let best = simplex[0].0;
                for s in simplex.iter_mut().skip(1) {
                    s.0 = lerp(&best, &s.0, 0.5);
                    s.1 = objective(&s.0);
                }
                evals += 4;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0].0
}

/// Gauss-Newton on `θᵢ - mean(run)` with the runs fixed, to reach machine
/// precision once the optimiser has found the right grouping.
fn polish(mut x: [f64; 4]) -> [f64; 4] {
    let residuals = |x: &[f64; 4], cuts: (usize, usize)| {
        let t = angles(&quad(x));
        let mut r = Vec::with_capacity(12);
        for (i, j) in [(0, cuts.0), (cuts.0, cuts.1), (cuts.1, 12)] {
            if j > i {
                let m = t[i..j].iter().sum::<f64>() / (j - i) as f64;
                r.extend(t[i..j].iter().map(|v| v - m));
            }
        }
        r
    };
    for _ in 0..30 {
        let (_, a, b) = three_means(&angles(&quad(&x)));
        let r = residuals(&x, (a, b));
        if r.iter().all(|v| v.abs() < 1e-14) {
            break;
        }
        let h = 1e-7;
        let mut jac = vec![[0.0; 4]; r.len()];
        for k in 0..4 {
            let (mut xp, mut xm) = (x, x);
            xp[k] += h;
            xm[k] -= h;
            let (rp, rm) = (residuals(&xp, (a, b)), residuals(&xm, (a, b)));
            for i in 0..r.len() {
                jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        // normal equations, 4×4, with a small ridge for rank deficiency
        let mut m = [[0.0; 5]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = jac.iter().map(|row| row[i] * row[j]).sum::<f64>();
            }
            m[i][i] += 1e-12;
            m[i][4] = -jac.iter().zip(&r).map(|(row, v)| row[i] * v).sum::<f64>();
        }
        let Some(dx) = solve4(m) else { break };
        let mut next = x;
        for i in 0..4 {
            next[i] += dx[i];
        }
        let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
        if norm(&residuals(&next, (a, b))) >= norm(&r) {
            break;
        }
        x = next;
    }
    x
}

fn solve4(mut m: [[f64; 5]; 4]) -> Option<[f64; 4]> {
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        for r in 0..4 {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..5 {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    Some([m[0][4] / m[0][0], m[1][4] / m[1][1], m[2][4] / m[2][2], m[3][4] / m[3][3]])
}

/// Residual of the best similarity (reflections allowed) taking `t` onto
/// `q` under the given correspondence, relative to the spread of `q`.
fn fit(q: &[(f64, f64); 4], t: &[(f64, f64); 4]) -> f64 {
    let mean = |p: &[(f64, f64); 4]| (p.iter().map(|v| v.0).sum::<f64>() / 4.0, p.iter().map(|v| v.1).sum::<f64>() / 4.0);
    let (qm, tm) = (mean(q), mean(t));
    let qc: Vec<(f64, f64)> = q.iter().map(|v| (v.0 - qm.0, v.1 - qm.1)).collect();
    let spread: f64 = qc.iter().map(|v| v.0 * v.0 + v.1 * v.1).sum();
    let mut best = f64::INFINITY;
    for mirror in [false, true] {
        let tc: Vec<(f64, f64)> =
            t.iter().map(|v| (v.0 - tm.0, if mirror { tm.1 - v.1 } else { v.1 - tm.1 })).collect();
        let tt: f64 = tc.iter().map(|v| v.0 * v.0 + v.1 * v.1).sum();
        // α = Σ conj(t)·q / Σ |t|²
        let (re, im) = tc.iter().zip(&qc).fold((0.0, 0.0), |(re, im), (a, b)| {
            (re + a.0 * b.0 + a.1 * b.1, im + a.0 * b.1 - a.1 * b.0)
        });
        let (ar, ai) = (re / tt, im / tt);
        let resid: f64 = tc
            .iter()
            .zip(&qc)
            .map(|(a, b)| (b.0 - (ar * a.0 - ai * a.1)).powi(2) + (b.1 - (ar * a.1 + ai * a.0)).powi(2))
            .sum();
        best = best.min((resid / spread).sqrt());
    }
    best
}

/// Best fit over all vertex correspondences.
fn template_distance(q: &[(f64, f64); 4], t: &[(f64, f64); 4]) -> f64 {
    let mut best = f64::INFINITY;
    for perm in PERMS {
        let pt = [t[perm[0]], t[perm[1]], t[perm[2]], t[perm[3]]];
        best = best.min(fit(q, &pt));
    }
    best
}

const PERMS: [[usize; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
    [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
    [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

fn rectangle(aspect: f64) -> [(f64, f64); 4] {
    [(0.0, 0.0), (1.0, 0.0), (1.0, aspect), (0.0, aspect)]
}

/// Normalised distance from a quadrilateral to the nearest few-angle
/// family, up to similarity and reflection.
pub fn family_distance(q: &[(f64, f64); 4]) -> (QuadFamily, f64) {
    let s3 = 3f64.sqrt();
    let twin = [(0.0, 0.0), (2.0, 0.0), (3.0, s3), (1.0, s3)];
    let penta: Vec<(f64, f64)> = (0..4).map(|k| ((2.0 * PI * k as f64 / 5.0).cos(), (2.0 * PI * k as f64 / 5.0).sin())).collect();
    let penta = [penta[0], penta[1], penta[2], penta[3]];

    // the best aspect ratio: coarse scan in log space, then golden section
    let rect = |la: f64| template_distance(q, &rectangle(la.exp()));
    let (mut lo, mut hi) = (-8.0f64, 8.0f64);
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..=160 {
        let la = lo + (hi - lo) * i as f64 / 160.0;
        let d = rect(la);
        if d < best.0 {
            best = (d, la);
        }
    }
    (lo, hi) = (best.1 - 0.1, best.1 + 0.1);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let (a, b) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if rect(a) < rect(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let candidates = [
        (QuadFamily::Rectangle_1a, rect((lo + hi) / 2.0).min(best.0)),
        (QuadFamily::TwinEquilateral_1b, template_distance(q, &twin)),
        (QuadFamily::PentagonMinusVertex_1c, template_distance(q, &penta)),
    ];
    candidates.into_iter().min_by(|a, b| a.1.total_cmp(&b.1)).expect("three families")
}

fn distinct(sorted: &[f64], tol: f64) -> usize {
    let mut n = 0;
    let mut last = f64::NEG_INFINITY;
    for &t in sorted {
        if t - last > tol {
            n += 1;
        }
        last = t;
    }
    n
}

fn trial(opts: &FalsifyOptions, index: usize) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(index as u64);
    let start = loop {
        let x = [rng.gen_range(-1.5..2.5), rng.gen_range(0.05..2.5), rng.gen_range(-1.5..2.5), rng.gen_range(0.05..2.5)];
        if convexity(&quad(&x)) > 0.05 {
            break x;
        }
    };
    let x = polish(nelder_mead(start, 0.2, opts.max_evals));
    let q = quad(&x);
    if !x.iter().all(|v| v.is_finite()) || convexity(&q) < 1e-4 || side_ratio(&q) < 5e-3 {
        return TrialOutcome::Degenerate;
    }
    let t = angles(&q);
    let count = distinct(&t, opts.tol);
    if count > 3 {
        return TrialOutcome::StaysAbove { distinct: count };
    }
    let pts = [(q[0].x, q[0].y), (q[1].x, q[1].y), (q[2].x, q[2].y), (q[3].x, q[3].y)];
    let (family, distance) = family_distance(&pts);
    if distance <= opts.tol {
        TrialOutcome::Family { family, distance }
    } else {
        TrialOutcome::Counterexample { points: pts, angles: t, distance }
    }
}

/// Pushes random convex quadrilaterals towards three angles and checks
/// every convergent against the three families. Each trial draws from its
/// own stream of the seeded generator, so results do not depend on the
/// number of threads.
pub fn falsify_quad_lemma(opts: &FalsifyOptions) -> FalsificationReport {
    let outcomes: Vec<TrialOutcome> = (0..opts.trials).into_par_iter().map(|i| trial(opts, i)).collect();
    let mut report = FalsificationReport {
        options: *opts,
        rectangles: 0,
        twin_equilateral: 0,
        pentagon_minus_vertex: 0,
        stays_above: 0,
        degenerate: 0,
        counterexamples: Vec::new(),
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            TrialOutcome::Family { family: QuadFamily::Rectangle_1a, .. } => report.rectangles += 1,
            TrialOutcome::Family { family: QuadFamily::TwinEquilateral_1b, .. } => report.twin_equilateral += 1,
            TrialOutcome::Family { family: QuadFamily::PentagonMinusVertex_1c, .. } => {
                report.pentagon_minus_vertex += 1
            }
            TrialOutcome::Family { .. } => unreachable!("distances are only measured to the three families"),
            TrialOutcome::StaysAbove { .. } => report.stays_above += 1,
            TrialOutcome::Degenerate => report.degenerate += 1,
            c @ TrialOutcome::Counterexample { .. } => report.counterexamples.push((i, c)),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_members_have_zero_distance() {
        let (f, d) = family_distance(&[(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (0.0, 1.0)]);
        assert_eq!(f, QuadFamily::Rectangle_1a);
        assert!(d < 1e-9);
        let s3 = 3f64.sqrt();
        let (f, d) = family_distance(&[(5.0, 5.0), (5.0, 7.0), (5.0 - s3, 8.0), (5.0 - s3, 6.0)]);
        assert_eq!(f, QuadFamily::TwinEquilateral_1b);
        assert!(d < 1e-9);
        let (_, d) = family_distance(&[(0.0, 0.0), (5.0, 0.0), (4.0, 3.0), (1.0, 2.0)]);
        assert!(d > 1e-2);
    }

    #[test]
    fn three_means_splits_runs() {
        let (c, a, b) = three_means(&[1.0, 1.0, 2.0, 2.0, 2.0, 5.0]);
        assert!(c < 1e-12);
        assert_eq!((a, b), (2, 5));
    }

    #[test]
    fn small_run_is_reproducible() {
        let o = FalsifyOptions::new(40, 7);
        let a = falsify_quad_lemma(&o);
        assert_eq!(a, falsify_quad_lemma(&o));
        assert!(a.counterexamples.is_empty(), "{:?}", a.counterexamples);
    }
}
