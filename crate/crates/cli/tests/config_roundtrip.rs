use anglekit::angle::PiRational;
use anglekit::census::Configuration;
use anglekit::cyclic::CyclicConfig;
use anglekit::exact::Point;
use anglekit::numeric::{Expr, NumericPoint};
use anglekit::scalar::rat;
use anglekit::Scalar;
use anglekit_cli::config::{parse_config, ConfigFile};
use proptest::prelude::*;

fn round_trip(cfg: &Configuration) -> Configuration {
    parse_config(&ConfigFile::from_configuration(cfg).to_json()).unwrap()
}

fn declared() -> impl Strategy<Value = Vec<PiRational>> {
    prop::collection::vec((1i64..12, 2i64..13), 0..4)
        .prop_map(|v| v.into_iter().filter_map(|(p, q)| PiRational::new(p % q, q).ok()).filter(|p| p.is_proper()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn quadratic_configs(d in prop::sample::select(vec![0u64, 2, 3, 5, 7]),
                         coords in prop::collection::vec((-9i64..10, 1i64..7, -9i64..10, -9i64..10, 1i64..7, -9i64..10), 3..7),
                         decl in declared(), zero in any::<Option<bool>>()) {
        let s = |a, den, b| if d == 0 { Scalar::rational(rat(a, den)) } else { Scalar::new(rat(a, den), rat(b, den), d).unwrap() };
        let pts = coords.iter().map(|&(a, da, b, c, dc, e)| Point::new(s(a, da, b), s(c, dc, e))).collect();
        if let Ok(mut cfg) = Configuration::quadratic(pts) {
            cfg = cfg.with_name("random").with_declared(decl);
            if let Some(z) = zero {
                cfg = cfg.with_declared_zero(z);
            }
            prop_assert_eq!(round_trip(&cfg), cfg);
        }
    }

    #[test]
    fn numeric_configs(polar in prop::collection::vec((1i64..9, 1i64..5, -20i64..20, 1i64..13), 3..6)) {
        let pts = polar
            .iter()
            .map(|&(r, s, t, q)| NumericPoint::polar(Expr::ratio(r, s).add(Expr::int(2).sqrt()), t, q))
            .collect();
        if let Ok(cfg) = Configuration::numeric(pts) {
            prop_assert_eq!(round_trip(&cfg), cfg);
        }
    }

    #[test]
    fn cyclic_configs(n in 3u32..30, verts in prop::collection::btree_set(0u32..30, 2..8), center in any::<bool>()) {
        let verts: Vec<u32> = verts.into_iter().filter(|&v| v < n).collect();
        if let Ok(c) = CyclicConfig::new(n, verts, center) {
            if let Ok(cfg) = Configuration::cyclic(c) {
                prop_assert_eq!(round_trip(&cfg), cfg);
            }
        }
    }
}
