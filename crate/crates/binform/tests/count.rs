//! Census contracts: agreement with the classical quadratic class count,
//! the first totally real cubic classes, congruence restrictions, and the
//! exhaustive cross-check of the targeted enumeration.

use binform::count::{
    brute_force_classes, congruence_density, count_series, enumerate_classes, gauss_class_count,
    gauss_class_numbers, log_grid, reducible_statistics, CongruenceSpec, CUBIC_INVARIANT_RATIO,
};
use binform::form::Form;
use binform::reduce::canonical_representative;
use proptest::prelude::*;

#[test]
fn quad_census_matches_the_classical_count() {
    for cap in [127.0, 400.0, 1000.0] {
        let report = count_series(2, 1, &[cap], None).unwrap();
        let row = &report.rows[0];
        assert_eq!(row.classes, gauss_class_count(cap), "cap {cap}");
        assert_eq!(
            row.reducible_classes, 0,
            "definite quadratics are never reducible over the rationals"
        );
    }
}

#[test]
fn quad_histogram_is_consistent_with_the_count() {
    let hist = gauss_class_numbers(800);
    assert_eq!(hist.len(), 801);
    for (d, h) in hist.iter().enumerate() {
        assert!(
            *h == 0 || d % 4 == 0 || d % 4 == 3,
            "|disc| = {d} is impossible for an integral quadratic"
        );
    }
    for cap in [100usize, 500, 800] {
        let partial: u64 = hist[..=cap].iter().sum();
        assert_eq!(2 * partial, gauss_class_count(cap as f64));
    }
}

#[test]
fn first_totally_real_cubic_classes_form_a_mirror_pair() {
    assert!(enumerate_classes(3, 0, 10.7, None).unwrap().is_empty());

    let records = enumerate_classes(3, 0, 10.8, None).unwrap();
    assert_eq!(records.len(), 2, "exactly one mirror pair below 10.8");
    let expected_theta = CUBIC_INVARIANT_RATIO * 49f64.sqrt();
    for rec in &records {
        let disc = rec.canonical.discriminant().unwrap();
        assert_eq!(disc, 49i64.into(), "first classes come from discriminant 49");
        assert!((rec.theta - expected_theta).abs() < 1e-12 * expected_theta);
        assert!(rec.boundary, "the cyclic class sits at the corner");
        assert_eq!(rec.stabilizer_order, 3, "cyclic symmetry of order three");
    }
    assert_ne!(records[0].canonical, records[1].canonical);

    // The two classes are swapped by reversing the variables, a
    // substitution of determinant -1 that no unimodular map reproduces.
    let mut reversed: Vec<i64> = records[0].canonical.coeffs_i64().unwrap();
    reversed.reverse();
    let mirrored = canonical_representative(&Form::from_i64(&reversed).unwrap()).unwrap();
    assert_eq!(mirrored.canonical, records[1].canonical);

    let four = enumerate_classes(3, 0, 13.9, None).unwrap();
    assert_eq!(four.len(), 4, "discriminant 81 adds the second mirror pair");
}

#[test]
fn count_series_is_monotone_in_the_cap() {
    let grid = log_grid(50.0, 800.0, 8);
    let report = count_series(3, 0, &grid, None).unwrap();
    assert_eq!(report.rows.len(), grid.len());
    for pair in report.rows.windows(2) {
        assert!(pair[0].x < pair[1].x);
        assert!(pair[0].classes <= pair[1].classes);
        assert!(pair[0].reducible_classes <= pair[1].reducible_classes);
    }
    assert!(report.rows.last().unwrap().classes > 0);
    assert!(report.rows.iter().all(|r| r.restricted_classes.is_none()));
}

#[test]
fn congruence_restriction_never_exceeds_the_full_count() {
    let spec = CongruenceSpec::coefficient_condition(3, 2, 0, 1).unwrap();
    assert_eq!(spec.residue_count(), 8, "half of the 16 tuples modulo 2");
    // An odd leading coefficient is not preserved by coordinate changes:
    // the density is only defined on the orbit closure (the tuples whose
    // form takes an odd value somewhere, 14 of the 16), and the census
    // closes the residue set itself before filtering.
    assert!(congruence_density(&spec).is_err());
    let closed = spec.closure().unwrap();
    assert!(closed.is_closed());
    assert_eq!(closed.residue_count(), 14);
    assert_eq!(
        congruence_density(&closed).unwrap(),
        num_rational::Ratio::new(7u64, 8u64)
    );
    let report = count_series(3, 0, &[400.0], Some(&spec)).unwrap();
    let row = &report.rows[0];
    let restricted = row.restricted_classes.expect("restriction requested");
    assert!(restricted <= row.classes);
    assert!(restricted > 0, "odd-leading classes exist below 400");
    let cong = report.congruence.expect("restriction reported");
    assert_eq!(cong.modulus, 2);
    assert_eq!(cong.given_residues, 8);
    assert_eq!(cong.closed_residues, 14);
    assert_eq!(cong.density, num_rational::Ratio::new(7u64, 8u64));
}

#[test]
fn exhaustive_search_agrees_with_the_targeted_census() {
    let quad = brute_force_classes(2, 1, 150.0, 40).unwrap();
    assert_eq!(quad.len() as u64, gauss_class_count(150.0));

    let cubic = brute_force_classes(3, 0, 100.0, 16).unwrap();
    let fast = enumerate_classes(3, 0, 100.0, None).unwrap();
    assert_eq!(cubic.len(), fast.len());
}

#[test]
fn reducible_share_declines_with_the_cap() {
    let shares = reducible_statistics(3, 0, &[100.0, 1000.0]).unwrap();
    assert_eq!(shares.len(), 2);
    let lo = shares[0].ratio().expect("classes exist at 100");
    let hi = shares[1].ratio().expect("classes exist at 1000");
    assert!(lo > 0.0 && hi > 0.0);
    assert!(hi < lo, "reducible share must shrink: {lo} -> {hi}");
}

#[test]
fn log_grid_covers_the_requested_range() {
    let grid = log_grid(50.0, 800.0, 8);
    assert_eq!(grid.len(), 8);
    assert!((grid[0] - 50.0).abs() < 1e-9);
    assert!((grid[7] - 800.0).abs() < 1e-9);
    assert!(grid.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(log_grid(50.0, 800.0, 1), vec![800.0]);
}

proptest! {
    #[test]
    fn histogram_prefixes_match_the_count(cap in 3.0f64..1500.0) {
        let hist = gauss_class_numbers(cap.floor() as i64);
        let total: u64 = hist.iter().sum();
        prop_assert_eq!(2 * total, gauss_class_count(cap));
    }

    #[test]
    fn classical_count_is_monotone(lo in 3.0f64..1500.0, step in 0.0f64..500.0) {
        prop_assert!(gauss_class_count(lo) <= gauss_class_count(lo + step));
    }
}
