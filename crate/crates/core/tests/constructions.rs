use esz_core::chains::{largest_convex_subset, longest_cap, longest_cup, oracle_max, Target};
use esz_core::constructions::{
    cupcap_extremal, cupcap_extremal_random, es_lower_bound, random_free, random_points, tightness_probe,
    FreeSampler, GeneratorSpec,
};
use esz_core::geometry::validate;
use esz_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `C(a, b)` by the multiplicative formula on `u128`.
fn choose(a: usize, b: usize) -> usize {
    (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i + 1) as u128) as usize
}

#[test]
fn extremal_sizes_up_to_eight() {
    for n in 3..=8 {
        for m in 3..=8 {
            let set = cupcap_extremal(n, m).unwrap();
            assert_eq!(set.len(), choose(m + n - 4, n - 2), "({n},{m})");
        }
    }
}

#[test]
fn randomized_extremal_sets_are_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..30 {
        for (n, m) in [(4, 4), (5, 4), (4, 6), (5, 5), (6, 5)] {
            let set = cupcap_extremal_random(n, m, &mut rng).unwrap();
            validate(&set).unwrap();
            assert!(longest_cup(&set).0 < n && longest_cap(&set).0 < m);
        }
    }
}

#[test]
fn extremal_sets_are_tight() {
    for (n, m) in [(4, 4), (5, 4), (4, 5), (5, 5)] {
        let set = cupcap_extremal(n, m).unwrap();
        assert!(tightness_probe(&set, n, m, 50, 3));
    }
}

#[test]
fn small_extremal_sets_agree_with_enumeration() {
    for (n, m) in [(4, 4), (5, 4), (4, 5), (4, 6), (6, 4)] {
        let set = cupcap_extremal(n, m).unwrap();
        assert_eq!(oracle_max(&set, Target::Cup, 16).unwrap().0, n - 1);
        assert_eq!(oracle_max(&set, Target::Cap, 16).unwrap().0, m - 1);
    }
}

#[test]
fn lower_bound_seven() {
    let set = es_lower_bound(7).unwrap();
    assert_eq!(set.len(), 32);
    assert_eq!(largest_convex_subset(&set).0, 6);
}

#[test]
fn random_points_stay_on_the_grid() {
    let set = random_points(200, 9);
    validate(&set).unwrap();
    assert!(set.iter().all(|p| p.x.is_integer() && p.y.is_integer()));
    let coords = esz_core::constructions::integer_coords(&set).unwrap();
    assert!(coords.iter().all(|&(x, y)| (0..=1_000_000).contains(&x) && (0..=1_000_000).contains(&y)));
}

#[test]
fn free_sampler_modes() {
    let uniform = random_free(5, 4, 8, 3, 1, FreeSampler::Uniform).unwrap();
    assert!(uniform.acceptance_rate > 0.0 && uniform.acceptance_rate <= 1.0);
    let structured = random_free(6, 4, 15, 5, 1, FreeSampler::Structured).unwrap();
    for set in &structured.sets {
        assert_eq!(set.len(), 15);
        assert!(longest_cup(set).0 < 6 && longest_cap(set).0 < 4);
    }
    assert!(matches!(
        random_free(6, 4, 16, 1, 1, FreeSampler::Structured),
        Err(Error::InfeasibleSize { max, .. }) if max == "15"
    ));
}

#[test]
fn generator_specs_replay() {
    let spec = GeneratorSpec::RandomFree { n_cup: 5, m_cap: 4, size: 9, count: 3, seed: 4, sampler: FreeSampler::Structured };
    assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
    assert_eq!(spec.header(), vec!["generator: random_free n_cup=5 m_cap=4 size=9 count=3 seed=4 sampler=structured".to_string()]);
    let es = GeneratorSpec::EsLowerBound { n: 5 }.generate().unwrap();
    assert_eq!(es[0].len(), 8);
}
