mod common;

use common::is_chain;
use esz_core::chains::{largest_convex_subset, longest_cap, longest_cup};
use esz_core::constructions::{cupcap_extremal, random_free, random_points, FreeSampler};
use esz_core::good_points::{
    analyze_three_outcomes, certify_adversarially, check_certificate, count_property_r, find_good_point,
    find_good_point_m4, has_property_r, refute_corrupted, replay_trial, OutcomeKind, ThreeOutcome,
};
use esz_core::{Error, Point, PointSet};
use itertools::Itertools;

/// Points that start a `len`-cap, by enumerating subsets.
fn brute_property_r(set: &PointSet, len: usize) -> usize {
    (0..set.len())
        .filter(|&s| {
            (s + 1..set.len())
                .combinations(len - 1)
                .any(|rest| {
                    let mut idx = vec![s];
                    idx.extend(rest);
                    is_chain(&set.coords(&idx), false)
                })
        })
        .count()
}

#[test]
fn property_r_count_matches_enumeration() {
    let set = cupcap_extremal(5, 5).unwrap();
    assert_eq!(count_property_r(&set, 5), brute_property_r(&set, 4));
    assert_eq!(count_property_r(&set, 4), brute_property_r(&set, 3));
}

#[test]
fn rightmost_point_has_no_property_r() {
    let set = random_points(9, 3);
    for l in 3..6 {
        assert!(!has_property_r(&set, set.len() - 1, l).0);
    }
}

#[test]
fn general_finder_delegates_for_l_four() {
    let batch = random_free(5, 4, 9, 10, 21, FreeSampler::Structured).unwrap();
    for set in &batch.sets {
        assert_eq!(find_good_point(set, 5, 4).unwrap(), find_good_point_m4(set, 5).unwrap());
    }
}

#[test]
fn four_five_certificates() {
    let batch = random_free(4, 5, 9, 30, 5, FreeSampler::Structured).unwrap();
    for set in &batch.sets {
        let cert = find_good_point(set, 4, 5).unwrap();
        check_certificate(set, &cert).unwrap();
        assert_eq!(cert.property_r_witness.len(), 4);
        assert!(has_property_r(set, cert.s, 5).0);
    }
}

#[test]
fn five_five_certificates_survive() {
    let batch = random_free(5, 5, 16, 8, 13, FreeSampler::Structured).unwrap();
    for set in &batch.sets {
        let cert = find_good_point(set, 5, 5).unwrap();
        check_certificate(set, &cert).unwrap();
        assert!(has_property_r(set, cert.s, 5).0);
        let report = certify_adversarially(set, &cert, 6, 200, 3).unwrap();
        assert_eq!(report.refutations().count(), 0);
    }
}

#[test]
fn not_free_is_rejected() {
    let set = cupcap_extremal(6, 4).unwrap();
    assert!(matches!(find_good_point(&set, 5, 5), Err(Error::FreenessViolated { .. })));
}

#[test]
fn refutations_replay_exactly() {
    let batch = random_free(5, 4, 8, 10, 2, FreeSampler::Structured).unwrap();
    let (set, cert, n, s, outcome) = batch
        .sets
        .into_iter()
        .find_map(|set| {
            let cert = find_good_point_m4(&set, 5).unwrap();
            let n = largest_convex_subset(&set).0 + 1;
            let (s, o) = refute_corrupted(&set, &cert, n, 500, 4).unwrap()?;
            Some((set, cert, n, s, o))
        })
        .expect("some corrupted certificate is refuted");
    let mut corrupted = cert.clone();
    corrupted.s = s;
    assert_eq!(outcome.kind, OutcomeKind::Refuted);
    assert_eq!(replay_trial(&set, &corrupted, n, 4, outcome.trial), Some(outcome.clone()));
    assert!(outcome.adjoined.len() <= n - 2);
    assert_eq!(outcome.cup.len(), n - 1);
    assert!(is_chain(&outcome.cup, true));
}

#[test]
fn outcomes_carry_valid_witnesses() {
    let set = random_free(6, 4, 13, 1, 9, FreeSampler::Structured).unwrap().sets.remove(0);
    let cert = find_good_point_m4(&set, 6).unwrap();
    let report = certify_adversarially(&set, &cert, 7, 300, 10).unwrap();
    assert!(report.exhausted.is_empty());
    for o in &report.outcomes {
        assert!(is_chain(&o.cup, true));
        assert_eq!(&o.cup[0], set.point(cert.s));
        let in_s = |p: &Point| set.iter().any(|q| q == p);
        assert!(!in_s(o.cup.last().unwrap()));
        match o.kind {
            OutcomeKind::LCapTwoRightmostInS => {
                assert_eq!(o.witness.len(), 4);
                assert!(is_chain(&o.witness, false));
                assert!(o.witness[2..].iter().all(in_s));
            }
            OutcomeKind::MCupTwoLeftmostInS => {
                assert_eq!(o.witness.len(), 6);
                assert!(is_chain(&o.witness, true));
                assert!(o.witness[..2].iter().all(in_s));
            }
            OutcomeKind::ConvexNGon => {
                assert_eq!(o.witness.len(), 7);
                assert!(esz_core::geometry::in_convex_position(&o.witness));
            }
            OutcomeKind::Refuted => panic!("refuted at trial {}", o.trial),
        }
    }
}

#[test]
fn planted_cup_is_found() {
    let mut pts: Vec<Point> = (0..6).map(|i| Point::from_ints(i * 1000, i * i * 1000)).collect();
    pts.extend(random_points(26, 1).into_points().into_iter().map(|p| Point::new(p.x + esz_core::geometry::int(7_000), p.y)));
    let set = PointSet::new(pts);
    match analyze_three_outcomes(&set, 6).unwrap() {
        ThreeOutcome::NCup(c) => assert!(is_chain(&set.coords(&c.indices), true) && c.len() == 6),
        other => panic!("expected a 6-cup, got {other:?}"),
    }
}

#[test]
fn three_outcomes_for_seven() {
    assert_eq!(esz_core::good_points::three_outcome_threshold(7).unwrap(), 113.into());
    for seed in 0..10 {
        let set = random_points(113, seed);
        match analyze_three_outcomes(&set, 7).unwrap() {
            ThreeOutcome::NCup(c) => assert!(c.len() == 7 && longest_cup(&set).0 >= 7),
            ThreeOutcome::NMinus1Cap(c) => assert!(c.len() == 6 && longest_cap(&set).0 >= 6),
            ThreeOutcome::ConvexNGon(w) => assert!(esz_core::geometry::in_convex_position(&set.coords(&w.indices))),
            ThreeOutcome::BelowThreshold { .. } => panic!("113 points meet the threshold"),
        }
    }
}
