mod common;

use common::{is_chain, point_sets};
use esz_core::chains::{largest_convex_subset, longest_cap, longest_cup, oracle_max, Target};
use esz_core::geometry::{in_convex_position, orientation, shear_distinct_x, validate};
use esz_core::partition::{
    check_cap_extension, check_cap_extension_exhaustive, recursive_bound_check, split_upper_lower, BoundOutcome, Side,
};
use esz_core::{bounds, Point, PointSet};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn detectors_match_enumeration(set in point_sets(10)) {
        for (target, got) in [
            (Target::Cup, longest_cup(&set).0),
            (Target::Cap, longest_cap(&set).0),
            (Target::Convex, largest_convex_subset(&set).0),
        ] {
            prop_assert_eq!(got, oracle_max(&set, target, 10).unwrap().0);
        }
    }

    #[test]
    fn witnesses_are_valid(set in point_sets(14)) {
        let cup = longest_cup(&set).1;
        prop_assert!(is_chain(&set.coords(&cup.indices), true));
        let cap = longest_cap(&set).1;
        prop_assert!(is_chain(&set.coords(&cap.indices), false));
        let convex = largest_convex_subset(&set).1;
        prop_assert!(in_convex_position(&set.coords(&convex.indices)));
    }

    #[test]
    fn reflection_swaps_cups_and_caps(set in point_sets(14)) {
        let mirrored = set.reflect_y();
        prop_assert_eq!(longest_cup(&set).0, longest_cap(&mirrored).0);
        prop_assert_eq!(longest_cap(&set).0, longest_cup(&mirrored).0);
        prop_assert_eq!(largest_convex_subset(&set).0, largest_convex_subset(&mirrored).0);
    }

    #[test]
    fn adding_a_point_never_shrinks(set in point_sets(12), extra in (-60i64..60, -60i64..60)) {
        let mut pts = set.points().to_vec();
        pts.push(Point::from_ints(extra.0, extra.1));
        let grown = PointSet::new(pts);
        prop_assume!(validate(&grown).is_ok());
        prop_assert!(longest_cup(&grown).0 >= longest_cup(&set).0);
        prop_assert!(longest_cap(&grown).0 >= longest_cap(&set).0);
        prop_assert!(largest_convex_subset(&grown).0 >= largest_convex_subset(&set).0);
    }

    #[test]
    fn shear_keeps_orientations(raw in prop::collection::vec((-20i64..20, -20i64..20), 3..10)) {
        let set = PointSet::new(raw.iter().map(|&(x, y)| Point::from_ints(x, y)).collect());
        let mut unique = set.points().to_vec();
        unique.dedup();
        let set = PointSet::new(unique);
        prop_assume!(esz_core::geometry::check_general_position(&set).is_ok());
        let (sheared, _) = shear_distinct_x(&set);
        prop_assert!(sheared.has_distinct_x());
        prop_assert_eq!(sheared.len(), set.len());
        prop_assert_eq!(largest_convex_subset(&sheared).0, largest_convex_subset(&set).0);
        // With distinct x the shear keeps the point order, so indices correspond.
        if set.has_distinct_x() {
            prop_assert_eq!(longest_cup(&sheared).0, longest_cup(&set).0);
            prop_assert_eq!(longest_cap(&sheared).0, longest_cap(&set).0);
            for i in 0..set.len() {
                for j in i + 1..set.len() {
                    for k in j + 1..set.len() {
                        prop_assert_eq!(
                            orientation(set.point(i), set.point(j), set.point(k)),
                            orientation(sheared.point(i), sheared.point(j), sheared.point(k))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn partition_covers_every_point_once(set in point_sets(14)) {
        let part = split_upper_lower(&set);
        let mut all: Vec<usize> = part.upper.iter().chain(&part.lower).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..set.len()).collect::<Vec<_>>());
        if !set.is_empty() {
            prop_assert_eq!(part.side_of(0), Some(Side::Upper));
        }
        if set.len() >= 2 {
            prop_assert_eq!(part.side_of(set.len() - 1), Some(Side::Lower));
        }
    }

    #[test]
    fn caps_and_cups_extend_across_the_split(set in point_sets(11)) {
        let part = split_upper_lower(&set);
        prop_assert!(check_cap_extension(&set, &part).is_empty());
        prop_assert!(check_cap_extension_exhaustive(&set, &part).unwrap().is_empty());
    }

    #[test]
    fn recursive_search_finds_a_valid_structure(set in point_sets(12), n in 3usize..6, m in 3usize..6) {
        let search = recursive_bound_check(&set, n, m).unwrap();
        let bound = bounds::f_cupcap_small(n, m);
        match search.outcome {
            BoundOutcome::BelowBound => prop_assert!(set.len() <= bound),
            BoundOutcome::FoundCup(c) => {
                prop_assert!(set.len() > bound);
                prop_assert_eq!(c.len(), n);
                prop_assert!(is_chain(&set.coords(&c.indices), true));
            }
            BoundOutcome::FoundCap(c) => {
                prop_assert!(set.len() > bound);
                prop_assert_eq!(c.len(), m);
                prop_assert!(is_chain(&set.coords(&c.indices), false));
            }
        }
    }
}

#[test]
fn pigeonhole_over_random_sets() {
    for (n, m) in [(4usize, 4usize), (4, 5), (5, 4), (5, 5), (6, 4)] {
        let size = bounds::f_cupcap_small(n, m) + 1;
        for seed in 0..100 {
            let set = esz_core::constructions::random_points(size, seed);
            match recursive_bound_check(&set, n, m).unwrap().outcome {
                BoundOutcome::FoundCup(c) => assert!(is_chain(&set.coords(&c.indices), true) && c.len() == n),
                BoundOutcome::FoundCap(c) => assert!(is_chain(&set.coords(&c.indices), false) && c.len() == m),
                BoundOutcome::BelowBound => panic!("size {size} is above f({n},{m})"),
            }
        }
    }
}

#[test]
fn extension_holds_on_constructions() {
    for n in 3..=7 {
        for m in 3..=7 {
            let set = esz_core::constructions::cupcap_extremal(n, m).unwrap();
            assert!(check_cap_extension(&set, &split_upper_lower(&set)).is_empty(), "({n},{m})");
        }
    }
}
