//! Exact-arithmetic contracts of the integer layer: parsing, display,
//! unimodular substitution, and the classical quantities it preserves.

use binform::form::{parse_form, Form, ParsedForm};
use binform::matrix::UnimodularMap;
use binform::sturm::{real_root_count, signature};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn form(coeffs: &[i64]) -> Form {
    Form::from_i64(coeffs).expect("valid test form")
}

#[test]
fn parse_classifies_integer_and_real_input() {
    match parse_form("1,4,5").expect("integer parse") {
        ParsedForm::Int(f) => assert_eq!(f.coeffs_i64(), Some(vec![1, 4, 5])),
        ParsedForm::Real(_) => panic!("integer list parsed as real"),
    }
    match parse_form(" 2 , -1 , 0 , 7 ").expect("whitespace parse") {
        ParsedForm::Int(f) => assert_eq!(f.coeffs_i64(), Some(vec![2, -1, 0, 7])),
        ParsedForm::Real(_) => panic!("integer list parsed as real"),
    }
    match parse_form("1.0,-0.5,0.25").expect("real parse") {
        ParsedForm::Real(f) => assert_eq!(f.coeffs(), &[1.0, -0.5, 0.25]),
        ParsedForm::Int(_) => panic!("decimal list parsed as integer"),
    }
    assert!(parse_form("").is_err());
    assert!(parse_form("1,,2").is_err());
    assert!(parse_form("1,x,2").is_err());
}

#[test]
fn display_round_trips_through_parse() {
    for coeffs in [
        vec![1i64, 0, -3, 0],
        vec![2, -1, 4],
        vec![-5, 3, 3, -5],
        vec![1, 2, 3, 4, 5],
    ] {
        let f = form(&coeffs);
        let back: Form = f.to_string().parse().expect("display output parses");
        assert_eq!(back, f, "display/parse round trip changed the form");
    }
}

#[test]
fn from_i64_round_trips_through_coeffs_i64() {
    let f = form(&[3, -7, 0, 11]);
    assert_eq!(f.coeffs_i64(), Some(vec![3, -7, 0, 11]));
    assert_eq!(f.degree(), 3);
    assert_eq!(f.leading(), &BigInt::from(3));
}

#[test]
fn content_ignores_sign_and_zero_entries() {
    assert_eq!(form(&[4, 0, -6]).content(), BigInt::from(2));
    assert_eq!(form(&[-9, -3, -6, 0]).content(), BigInt::from(3));
    assert_eq!(form(&[1, 2, 3]).content(), BigInt::from(1));
}

#[test]
fn substitution_respects_identity_and_inverse() {
    let f = form(&[1, 1, -2, -1]);
    assert_eq!(f.act(&UnimodularMap::identity()), f);
    for g in [
        UnimodularMap::translation(3),
        UnimodularMap::s(),
        UnimodularMap::new(2, 1, 1, 1),
        UnimodularMap::new(5, 3, 3, 2),
    ] {
        assert_eq!(f.act(&g).act(&g.inverse()), f, "inverse action must undo {g:?}");
    }
}

#[test]
fn negating_both_variables_scales_by_parity() {
    let neg = UnimodularMap::neg_identity();
    let even = form(&[2, -1, 3]);
    assert_eq!(even.act(&neg), even);
    let odd = form(&[1, 1, -2, -1]);
    let flipped: Vec<i64> = odd
        .coeffs_i64()
        .expect("small coefficients")
        .iter()
        .map(|c| -c)
        .collect();
    assert_eq!(odd.act(&neg), form(&flipped));
}

#[test]
fn matrix_algebra_identities() {
    let s = UnimodularMap::s();
    assert_eq!(s.entries(), [[0, -1], [1, 0]]);
    assert_eq!(s.compose(&s), UnimodularMap::neg_identity());
    assert_eq!(s.pow(4), UnimodularMap::identity());
    assert_eq!(
        UnimodularMap::translation(1).pow(5),
        UnimodularMap::translation(5)
    );
    let g = UnimodularMap::new(5, 3, 3, 2);
    assert_eq!(g.compose(&g.inverse()), UnimodularMap::identity());
    assert_eq!(g.inverse().compose(&g), UnimodularMap::identity());
    assert!(UnimodularMap::try_new(1, 0, 0, 2).is_none(), "determinant 2");
    assert!(UnimodularMap::try_new(2, 1, 1, 1).is_some(), "determinant 1");
}

#[test]
fn real_root_counts_match_known_forms() {
    assert_eq!(real_root_count(&form(&[1, 0, 1])).unwrap(), 0);
    assert_eq!(real_root_count(&form(&[1, 0, -2])).unwrap(), 2);
    assert_eq!(real_root_count(&form(&[1, 0, -3, 0])).unwrap(), 3);
    assert_eq!(real_root_count(&form(&[1, 0, 0, 1])).unwrap(), 1);
    assert_eq!(signature(&form(&[1, 1, 1])).unwrap(), (0, 1));
    assert_eq!(signature(&form(&[1, 1, -2, -1])).unwrap(), (3, 0));
    assert_eq!(signature(&form(&[1, 0, 0, 0, 1])).unwrap(), (0, 2));
    // A repeated root is reported, not silently merged.
    assert!(real_root_count(&form(&[1, 2, 1])).is_err());
}

/// Random word in the standard generators, kept short so coefficients
/// stay small enough for fast exact arithmetic.
fn word_strategy() -> impl Strategy<Value = UnimodularMap> {
    prop::collection::vec((0..3u8, -3i64..=3), 0..5).prop_map(|moves| {
        let mut g = UnimodularMap::identity();
        for (kind, k) in moves {
            let step = match kind {
                0 => UnimodularMap::translation(k),
                1 => UnimodularMap::s(),
                _ => UnimodularMap::neg_identity(),
            };
            g = step.compose(&g);
        }
        g
    })
}

fn coeff_strategy(degree: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..=20, degree + 1)
        .prop_filter("leading coefficient must not vanish", |c| c[0] != 0)
}

proptest! {
    #[test]
    fn action_composes_contravariantly(
        coeffs in (2usize..=4).prop_flat_map(coeff_strategy),
        a in word_strategy(),
        b in word_strategy(),
    ) {
        let f = form(&coeffs);
        prop_assert_eq!(f.act(&a).act(&b), f.act(&b.compose(&a)));
    }

    #[test]
    fn substitution_matches_direct_evaluation(
        coeffs in (2usize..=4).prop_flat_map(coeff_strategy),
        g in word_strategy(),
        x in -5i64..=5,
        y in -5i64..=5,
    ) {
        let f = form(&coeffs);
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        let sub_x = BigInt::from(g.a()) * &x + BigInt::from(g.c()) * &y;
        let sub_y = BigInt::from(g.b()) * &x + BigInt::from(g.d()) * &y;
        prop_assert_eq!(f.act(&g).evaluate(&x, &y), f.evaluate(&sub_x, &sub_y));
    }

    #[test]
    fn discriminant_and_content_are_class_functions(
        coeffs in (2usize..=4).prop_flat_map(coeff_strategy),
        g in word_strategy(),
    ) {
        let f = form(&coeffs);
        let image = f.act(&g);
        prop_assert_eq!(image.content(), f.content());
        // The discriminant is computed through the dehomogenized
        // polynomial, so it needs the image to keep its full degree.
        prop_assume!(!image.leading().is_zero());
        prop_assert_eq!(image.discriminant().unwrap(), f.discriminant().unwrap());
    }

    #[test]
    fn real_root_count_is_a_class_function(
        coeffs in (2usize..=4).prop_flat_map(coeff_strategy),
        g in word_strategy(),
    ) {
        let f = form(&coeffs);
        prop_assume!(!f.discriminant().unwrap().is_zero());
        let image = f.act(&g);
        // The image can vanish at infinity when f has a rational root that
        // g moves there; the count is only defined off that locus.
        prop_assume!(!image.leading().is_zero());
        prop_assert_eq!(
            real_root_count(&image).unwrap(),
            real_root_count(&f).unwrap()
        );
    }
}
