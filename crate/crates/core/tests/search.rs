use anglekit::catalog;
use anglekit::census::Configuration;
use anglekit::exact::is_similar;
use anglekit::search::*;

fn extend(name: &str, k: usize) -> (Configuration, ExtensionResult) {
    let e = catalog::get(name).unwrap();
    let grid = ExtensionGrid::default_for(&e.config);
    let r = extend_search(&e.config, k, &grid, 1e-12, true).unwrap();
    (e.config, r)
}

#[test]
fn right_isosceles_takes_four_points_two_at_a_time() {
    let (base, r) = extend("right_isosceles", 2);
    assert_eq!(r.certified.len(), 4);
    let found: Vec<String> = r.certified.iter().map(|c| c.point.to_string()).collect();
    for x in catalog::right_isosceles_extensions() {
        assert!(found.contains(&format!("({}, {})", x.x, x.y)), "{found:?}");
    }
    assert!(r.max_compatible_sets.iter().all(|s| s.len() == 2));
    assert_eq!(r.max_compatible_sets.len(), 2);
    let square_center = catalog::get("square_center").unwrap().config.quadratic_points().unwrap();
    for set in &r.max_compatible_sets {
        let cfg = r.extended(&base, set).unwrap();
        assert!(is_similar(&cfg.quadratic_points().unwrap(), &square_center));
    }
}

#[test]
fn equilateral_and_rhombus_take_nothing() {
    assert!(extend("equilateral", 2).1.certified.is_empty());
    assert!(extend("rhombus_1b", 3).1.certified.is_empty());
}

#[test]
fn pentagon_quad_takes_three_incompatible_points() {
    let (_, r) = extend("pentagon_minus_vertex_1c", 3);
    assert_eq!(r.certified.len(), 3);
    assert!(r.max_compatible_sets.iter().all(|s| s.len() == 1));
    for i in 0..3 {
        for j in 0..3 {
            assert!(!r.compatible[i][j]);
        }
    }
}

#[test]
fn base_over_budget_is_rejected() {
    let e = catalog::get("pentagon").unwrap();
    let grid = ExtensionGrid::default_for(&e.config);
    assert!(matches!(
        extend_search(&e.config, 2, &grid, 1e-12, true),
        Err(SearchError::BaseCensusExceedsK { .. })
    ));
}

#[test]
fn lower_bound_family_is_rediscovered() {
    for k in 1..=4usize {
        let r = subset_search(&SearchUniverse::ngon_center(2 * k as u32 + 2), 2 * k).unwrap();
        assert!(r.best_size >= 2 * k + 3);
    }
}

#[test]
fn pruned_search_matches_exhaustive_oracle() {
    let universes = [
        SearchUniverse::ngon_center(8),
        SearchUniverse::Cyclic { n: 9, include_center: false },
        SearchUniverse::Grid { width: 4, height: 3 },
    ];
    for u in &universes {
        for k in 1..=4 {
            let (best, canon) = exhaustive_best(u, k).unwrap();
            let r = subset_search(u, k).unwrap();
            assert_eq!(r.best_size, best, "{u} k={k}");
            let ours: Vec<Vec<usize>> = r.witnesses.iter().map(|w| w.indices.clone()).collect();
            assert_eq!(ours, canon, "{u} k={k}");
        }
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let s = subset_search(&SearchUniverse::ngon_center(9), 3).unwrap();
            let f = falsify_quad_lemma(&FalsifyOptions::new(30, 11));
            (s, f)
        })
    };
    let one = run(1);
    assert_eq!(one, run(2));
    assert_eq!(one, run(8));
}
