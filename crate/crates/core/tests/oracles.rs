mod common;

use laminar::analysis::{fixed_cutpoint_search, is_outward_edge, omega_limit, FixedSearch, Seed};
use laminar::circle::Precision;
use laminar::dendrite::{build_dendrite, TreeMap};
use laminar::lamination::{check_axioms, Lamination, StoredClass};
use laminar::markov::{fixed_points, random_interval_map, random_star_map, MarkovTreeMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn stored_classes_are_pairwise_unlinked_by_brute_force() {
    for lam in [common::misiurewicz(7), common::chebyshev(6)] {
        assert!(check_axioms(&lam).violations.is_empty());
        assert_eq!(common::linked_pairs(&lam), Vec::<(usize, usize)>::new());
    }
}

#[test]
fn brute_force_linkage_catches_a_crossing() {
    let stored = |s: &str| StoredClass {
        class: common::class(s),
        depth: 0,
    };
    let lam = Lamination::from_parts(2, 0, vec![stored("{1/4,3/4}"), stored("{0,1/2}")], vec![0, 1])
        .unwrap();
    assert_eq!(common::linked_pairs(&lam), vec![(0, 1)]);
    assert!(!check_axioms(&lam).passed);
}

#[test]
fn tree_edges_are_the_separation_edges() {
    for lam in [common::misiurewicz(5), common::chebyshev(5)] {
        let d = build_dendrite(&lam).unwrap();
        let tree: std::collections::BTreeSet<_> = d
            .tree()
            .edges()
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        assert_eq!(tree, common::separation_edges(&d));
    }
}

#[test]
fn exact_limit_sets_match_long_iteration() {
    let lam = common::misiurewicz(6);
    let mut checked = 0;
    for id in 0..lam.len() {
        let c = lam.class(id).clone();
        let Ok(records) = omega_limit(&lam, &Seed::Exact(c.clone()), 100, Precision::default())
        else {
            continue;
        };
        let targets: std::collections::BTreeSet<_> =
            records.into_iter().map(|r| r.target).collect();
        assert_eq!(targets, common::cycle_by_iteration(&c, 2, 10_000), "seed {c}");
        checked += 1;
    }
    assert!(checked > lam.len() / 2, "{checked} of {}", lam.len());
}

#[test]
fn exact_fixed_points_match_branch_and_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut compared = 0;
    while compared < 20 {
        let f = random_interval_map(&mut rng, 5, 2);
        let g = common::FloatGraph::of(&f);
        for p in 1..=4 {
            let Some(exact) = common::exact_roots(&f, p) else {
                continue;
            };
            if let Err(e) = common::roots_agree(&exact, &g.roots(p), 1e-9) {
                panic!("{e} for p = {p} on\n{}", laminar::markov::write_markov_toml(&f));
            }
        }
        compared += 1;
    }
}

fn outward_edges_carry_fixed_points(f: &MarkovTreeMap) {
    let fix = fixed_points(f);
    for (e, &(a, b)) in f.edges().iter().enumerate() {
        if is_outward_edge(f, a, b) {
            assert!(fix.meets_edge_interior(e), "outward edge ({a}, {b}) has no interior fixed point");
        }
    }
    let all: Vec<usize> = (0..f.tree().len()).collect();
    match fixed_cutpoint_search(&all, f).unwrap() {
        FixedSearch::Fixed { vertex, .. } => assert_eq!(f.image(vertex), Some(vertex)),
        FixedSearch::BelowDepth { edge: (a, b) } => {
            let e = f.edges().iter().position(|&x| x == (a, b) || x == (b, a)).unwrap();
            assert!(fix.meets_edge_interior(e));
        }
        FixedSearch::NotFound { frontier } => {
            // every fixed point then sits inside an edge whose endpoints trade sides
            assert!(frontier.is_empty());
            assert!(!fix.points.is_empty() || !fix.segments.is_empty());
            for q in &fix.points {
                let laminar::markov::Point::Edge(e, _) = q else {
                    panic!("fixed vertex {q} missed");
                };
                let (a, b) = f.edges()[*e];
                let (fa, fb) = (f.image(a).unwrap(), f.image(b).unwrap());
                assert!(!f.tree().separates(a, fa, b) && !f.tree().separates(b, fb, a));
            }
        }
    }
}

#[test]
fn outward_edges_have_interior_fixed_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        outward_edges_carry_fixed_points(&random_interval_map(&mut rng, 6, 3));
        outward_edges_carry_fixed_points(&random_star_map(&mut rng, 4));
    }
}
