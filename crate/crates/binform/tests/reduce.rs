//! Contracts of the reduction layer: the transported form is the one the
//! returned map produces, canonical representatives are class functions
//! and idempotent, quadratic canonicals agree with classical reduction,
//! and stabilizers are genuine symmetries with the classical orders.

use binform::factor::is_irreducible;
use binform::form::Form;
use binform::matrix::UnimodularMap;
use binform::reduce::{canonical_representative, reduce_form, stabilizer};
use num_traits::Zero;

fn form(coeffs: &[i64]) -> Form {
    Form::from_i64(coeffs).expect("valid test form")
}

fn probe_words() -> Vec<UnimodularMap> {
    vec![
        UnimodularMap::translation(1),
        UnimodularMap::translation(-1),
        UnimodularMap::s(),
        UnimodularMap::s().compose(&UnimodularMap::translation(2)),
        UnimodularMap::neg_identity(),
    ]
}

#[test]
fn reduction_returns_the_map_it_applied() {
    for coeffs in [
        vec![1i64, 1, -2, -1],
        vec![5, -4, -4, -11],
        vec![2, -1, 4],
        vec![11, 7, 3],
        vec![1, 0, 0, 0, 2],
    ] {
        let f = form(&coeffs);
        let r = reduce_form(&f).expect("stable form");
        assert_eq!(r.reduced, f.act(&r.gamma), "transport mismatch on {coeffs:?}");
        assert!(
            r.point.in_fundamental_domain(1e-7),
            "representative point ({}, {}) left the domain on {coeffs:?}",
            r.point.t,
            r.point.u
        );
    }
}

#[test]
fn cubic_canonicals_are_class_functions_and_idempotent() {
    let words = probe_words();
    let mut classes = 0u32;
    for a in 1i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                for d in -2i64..=2 {
                    let f = form(&[a, b, c, d]);
                    if f.discriminant().unwrap().is_zero() || !is_irreducible(&f).unwrap() {
                        continue;
                    }
                    let rec = canonical_representative(&f).expect("irreducible cubic");
                    let again = canonical_representative(&rec.canonical).unwrap();
                    assert_eq!(
                        again.canonical, rec.canonical,
                        "canonical of ({a},{b},{c},{d}) is not a fixed point"
                    );
                    for g in &words {
                        let moved = canonical_representative(&f.act(g)).unwrap();
                        assert_eq!(
                            moved.canonical, rec.canonical,
                            "canonical of ({a},{b},{c},{d}) changed under {g:?}"
                        );
                    }
                    classes += 1;
                }
            }
        }
    }
    assert!(classes > 100, "sweep too small: {classes}");
}

#[test]
fn quadratic_canonicals_match_classical_reduction() {
    let words = probe_words();
    let mut classes = 0u32;
    for a in 1i64..=4 {
        for b in -4i64..=4 {
            for c in 1i64..=4 {
                if b * b - 4 * a * c >= 0 {
                    continue;
                }
                let f = form(&[a, b, c]);
                let rec = canonical_representative(&f).unwrap();
                let canon = rec.canonical.coeffs_i64().unwrap();
                let (ra, rb, rc) = reduce_triple(a, b, c);
                assert_eq!(
                    (canon[0], canon[1].abs(), canon[2]),
                    (ra, rb.abs(), rc),
                    "canonical of ({a},{b},{c}) disagrees with classical reduction"
                );
                assert_eq!(
                    rec.canonical.discriminant().unwrap(),
                    f.discriminant().unwrap()
                );
                for g in &words {
                    let moved = canonical_representative(&f.act(g)).unwrap();
                    assert_eq!(moved.canonical, rec.canonical);
                }
                classes += 1;
            }
        }
    }
    assert!(classes > 40, "sweep too small: {classes}");
}

/// Textbook reduction loop on positive-definite integer triples.
fn reduce_triple(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
    assert!(a > 0 && b * b - 4 * a * c < 0);
    loop {
        // Translate: bring b into (-a, a].
        let t = (a - b).div_euclid(2 * a);
        let nb = b + 2 * a * t;
        let nc = a * t * t + b * t + c;
        b = nb;
        c = nc;
        if a > c {
            // Swap the outer coefficients and flip the middle sign.
            let (na, nb, nc) = (c, -b, a);
            a = na;
            b = nb;
            c = nc;
            continue;
        }
        break;
    }
    if a == c && b < 0 {
        b = -b;
    }
    if b == -a {
        b = a;
    }
    (a, b, c)
}

#[test]
fn stabilizers_fix_the_form_and_have_classical_orders() {
    let square = form(&[1, 0, 1]);
    let hexagonal = form(&[1, 1, 1]);
    let generic = form(&[2, 1, 3]);
    for (f, order) in [(&square, 4), (&hexagonal, 6), (&generic, 2)] {
        let stab = stabilizer(f).expect("definite quadratic");
        assert_eq!(stab.len(), order, "stabilizer order of {f}");
        for g in &stab {
            assert_eq!(&f.act(g), f, "claimed stabilizer element moves {f}");
        }
        assert!(
            stab.contains(&UnimodularMap::identity()),
            "stabilizer must contain the identity"
        );
    }
}

#[test]
fn odd_degree_stabilizers_exclude_the_central_flip() {
    // -I negates an odd-degree form, so it can never stabilize one; any
    // symmetries that remain must have odd order.
    for coeffs in [vec![1i64, 1, -2, -1], vec![1, 0, -3, 1], vec![2, 1, -5, -2]] {
        let f = form(&coeffs);
        let stab = stabilizer(&f).expect("stable cubic");
        assert!(
            !stab.contains(&UnimodularMap::neg_identity()),
            "-I cannot fix the odd-degree form {coeffs:?}"
        );
        for g in &stab {
            assert_eq!(f.act(g), f);
        }
        assert!(stab.len() % 2 == 1, "odd-degree stabilizer has odd order");
    }
}

#[test]
fn corner_classes_are_flagged_as_boundary() {
    for coeffs in [vec![1i64, 0, 1], vec![1, 1, 1]] {
        let rec = canonical_representative(&form(&coeffs)).unwrap();
        assert!(
            rec.boundary,
            "{coeffs:?} sits at a corner of the domain and must be flagged"
        );
    }
}

#[test]
fn unstable_input_is_rejected_not_mangled() {
    // x^2 y vanishes at infinity in every unimodular image's chart once
    // the leading coefficient is zero; reduction must refuse it.
    let f = form(&[0, 1, 0]);
    assert!(reduce_form(&f).is_err());
    assert!(f.leading().is_zero());
}
