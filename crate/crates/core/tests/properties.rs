use anglekit::angle::{CensusMode, PiRational};
use anglekit::census::{
    angle_set_subset, census, classify_convex_quad, verify_interior_lemma, Configuration, InteriorOutcome, QuadFamily,
};
use anglekit::cyclic::{cyclic_angle, CyclicConfig, CyclicPoint};
use anglekit::exact::{apply_similarity, orientation, Orientation, Point, Similarity};
use anglekit::quadratic::Scalar;
use anglekit::scalar::rat;
use anglekit::QuadPoint;
use proptest::prelude::*;

fn int_points(max: i64, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::btree_set((-max..=max, -max..=max), len).prop_map(|s| s.into_iter().collect())
}

fn config(pts: &[(i64, i64)]) -> Option<Configuration> {
    let pts = pts.iter().map(|&(x, y)| Point::new(Scalar::integer(x), Scalar::integer(y))).collect();
    Configuration::quadratic(pts).ok()
}

/// Float brute force with a tolerance far below the smallest gap between
/// distinct angles on a small integer grid.
fn brute_force(pts: &[(i64, i64)], mode: CensusMode) -> usize {
    let mut angles = Vec::new();
    for b in 0..pts.len() {
        for a in 0..pts.len() {
            for c in a + 1..pts.len() {
                if a == b || c == b {
                    continue;
                }
                let (ux, uy) = ((pts[a].0 - pts[b].0) as f64, (pts[a].1 - pts[b].1) as f64);
                let (vx, vy) = ((pts[c].0 - pts[b].0) as f64, (pts[c].1 - pts[b].1) as f64);
                let t = (ux * vy - uy * vx).abs().atan2(ux * vx + uy * vy);
                let straight = (t - std::f64::consts::PI).abs() < 1e-12;
                let zero = t.abs() < 1e-12;
                if straight || (zero && !mode.includes_zero()) {
                    continue;
                }
                angles.push(t);
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
    angles.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn census_matches_brute_force(pts in int_points(6, 3..8)) {
        if let Some(cfg) = config(&pts) {
            for mode in [CensusMode::ExcludeZero, CensusMode::IncludeZero] {
                let r = census(&cfg, mode).unwrap();
                prop_assert_eq!(r.count.exact(), Some(brute_force(&pts, mode)));
                prop_assert_eq!(r.values.len(), r.witnesses.len());
            }
        }
    }

    #[test]
    fn similarity_keeps_the_census(pts in int_points(5, 3..7), a in 1i64..4, b in -3i64..4, s in 1i64..5, tx in -3i64..4) {
        // rotation by a Pythagorean-style rational (cos, sin) pair
        let n2 = a * a + b * b;
        let sim = Similarity::new(
            (rat(a * a - b * b, n2), rat(2 * a * b, n2)),
            rat(s, 2),
            (rat(tx, 1), rat(1, 3)),
        ).unwrap();
        if let Some(cfg) = config(&pts) {
            let moved: Vec<QuadPoint> = apply_similarity(&cfg.quadratic_points().unwrap(), &sim);
            let moved = Configuration::quadratic(moved).unwrap();
            let (r1, r2) = (census(&cfg, CensusMode::IncludeZero).unwrap(), census(&moved, CensusMode::IncludeZero).unwrap());
            prop_assert_eq!(r1.count, r2.count);
            let approx = |r: &anglekit::report::CensusReport| r.values.iter().map(|v| v.approx_radians()).collect::<Vec<_>>();
            for (x, y) in approx(&r1).iter().zip(approx(&r2)) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn subsets_only_lose_angles(pts in int_points(5, 4..8), drop in 0usize..8) {
        if let Some(cfg) = config(&pts) {
            let keep: Vec<usize> = (0..pts.len()).filter(|&i| i != drop % pts.len()).collect();
            if let Ok(small) = cfg.subset(&keep) {
                prop_assert_eq!(angle_set_subset(&small, &cfg), Ok(true));
            }
        }
    }

    #[test]
    fn zero_adds_at_most_one(pts in int_points(4, 3..8)) {
        if let Some(cfg) = config(&pts) {
            let without = census(&cfg, CensusMode::ExcludeZero).unwrap().count.exact().unwrap();
            let with = census(&cfg, CensusMode::IncludeZero).unwrap().count.exact().unwrap();
            prop_assert!(with == without || with == without + 1);
        }
    }

    #[test]
    fn cyclic_triangles_sum_to_pi(n in 3u32..30, a in 0u32..30, b in 0u32..30, c in 0u32..30, center in any::<bool>()) {
        let (a, b) = (a % n, b % n);
        let c = if center { CyclicPoint::Center } else { CyclicPoint::Vertex(c % n) };
        let (pa, pb) = (CyclicPoint::Vertex(a), CyclicPoint::Vertex(b));
        if a != b && c != pa && c != pb {
            let angles = [cyclic_angle(pb, pa, c, n), cyclic_angle(pa, pb, c, n), cyclic_angle(pa, c, pb, n)];
            if angles.iter().all(|x| x.is_ok()) {
                let sum = angles.iter().map(|x| x.unwrap()).try_fold(PiRational::ZERO, |s, x| s.checked_add(&x));
                prop_assert_eq!(sum, Some(PiRational::PI));
            }
        }
    }

    #[test]
    fn classifier_never_reports_a_family_above_three(pts in int_points(6, 4..5)) {
        if let Some(cfg) = config(&pts) {
            if let Ok(family) = classify_convex_quad(&cfg) {
                let count = census(&cfg, CensusMode::ExcludeZero).unwrap().count.exact().unwrap();
                prop_assert_eq!(family == QuadFamily::MoreThanThree, count > 3);
            }
        }
    }

    #[test]
    fn interior_points_of_right_triangles_add_angles(x in 1i64..20, y in 1i64..20) {
        // strictly inside the triangle (0,0), (24,0), (0,24)
        prop_assume!(x + y < 24);
        let tri = [(0, 0), (24, 0), (0, 24)].map(|(a, b)| Point::new(Scalar::integer(a), Scalar::integer(b)));
        let d = Point::new(Scalar::integer(x), Scalar::integer(y));
        let violated = matches!(verify_interior_lemma(&tri, &d), Ok(InteriorOutcome::Violation { count }) if count >= 4);
        prop_assert!(violated);
    }
}

#[test]
fn orientation_of_cyclic_points_matches_coordinates() {
    let cfg = CyclicConfig::full(7, true).unwrap();
    let f = cfg.coordinates_f64();
    let p: Vec<QuadPoint> = f
        .iter()
        .map(|&(x, y)| Point::new(Scalar::rational(rat((x * 1e6) as i64, 1)), Scalar::rational(rat((y * 1e6) as i64, 1))))
        .collect();
    let o = orientation(&p[0], &p[1], &p[7]);
    assert_eq!(o, Orientation::CounterClockwise);
}
