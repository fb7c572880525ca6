//! Exact real-root counting by Sturm sequences.
//!
//! Floating-point root finding settles the signature of well-separated
//! forms, but near the boundary between signatures it cannot certify the
//! count. This module computes the number of distinct real roots of the
//! dehomogenization `f(x, 1)` exactly, over rational arithmetic, and
//! derives the signature `(r, k)`: `r` real roots and `k` conjugate pairs,
//! with `r + 2k = n` for squarefree forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::form::Form;

/// Number of distinct real roots of `f(x, 1)`, requiring a nonzero leading
/// coefficient. Repeated roots are reported as [`Error::Degenerate`]
/// rather than silently collapsed.
pub fn real_root_count(f: &Form) -> Result<usize> {
    if f.leading().is_zero() {
        return Err(Error::LeadingZero);
    }
    let p: Vec<BigRational> = f
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let n = p.len() - 1;
    if n == 0 {
        return Ok(0);
    }
    let dp: Vec<BigRational> = (0..n)
        .map(|i| &p[i] * BigRational::from_integer(BigInt::from(n - i)))
        .collect();

    // Sturm chain: p0 = p, p1 = p', p_{i+1} = -rem(p_{i-1}, p_i).
    let mut chain: Vec<Vec<BigRational>> = vec![p, dp];
    loop {
        let len = chain.len();
        let r = poly_rem(&chain[len - 2], &chain[len - 1]);
        match r {
            None => break,
            Some(mut r) => {
                for c in r.iter_mut() {
                    *c = -c.clone();
                }
                chain.push(r);
            }
        }
    }

    // The last element of the chain is (up to sign) the gcd of p and p';
    // a nonconstant gcd means a repeated root.
    let last = chain.last().expect("chain is nonempty");
    if last.len() > 1 {
        return Err(Error::Degenerate { separation: 0.0 });
    }

    // Sign variations at -infinity minus sign variations at +infinity.
    let sign_at = |poly: &[BigRational], at_minus_inf: bool| -> i32 {
        let lead = &poly[0];
        let mut s = if lead.is_positive() { 1 } else { -1 };
        if at_minus_inf && (poly.len() - 1) % 2 == 1 {
            s = -s;
        }
        s
    };
    let variations = |at_minus_inf: bool| -> usize {
        let signs: Vec<i32> = chain.iter().map(|p| sign_at(p, at_minus_inf)).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    Ok(variations(true) - variations(false))
}

/// Signature `(r, k)` of a squarefree form with nonzero leading
/// coefficient: `r` real roots and `k` conjugate pairs of `f(x, 1)`.
pub fn signature(f: &Form) -> Result<(usize, usize)> {
    let r = real_root_count(f)?;
    let n = f.degree();
    debug_assert!((n - r).is_multiple_of(2));
    Ok((r, (n - r) / 2))
}

/// Remainder of polynomial division, or `None` when it is zero.
/// Coefficient vectors are leading-first; the divisor is nonzero.
fn poly_rem(num: &[BigRational], den: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut rem: Vec<BigRational> = num.to_vec();
    while rem.len() >= den.len() {
        // Subtract (lead(rem)/lead(den)) * x^k * den; the leading term
        // cancels exactly.
        let factor = &rem[0] / &den[0];
        let scaled: Vec<BigRational> = den.iter().map(|d| &factor * d).collect();
        for (r, s) in rem.iter_mut().zip(scaled.iter()) {
            *r = &*r - s;
        }
        debug_assert!(rem[0].is_zero());
        rem.remove(0);
        while !rem.is_empty() && rem[0].is_zero() {
            rem.remove(0);
        }
        if rem.is_empty() {
            return None;
        }
    }
    Some(rem)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(v: &[i64]) -> Form {
        Form::from_i64(v).expect("valid form")
    }

    #[test]
    fn counts_match_known_forms() {
        assert_eq!(signature(&form(&[1, 0, -1, 0])).expect("sig"), (3, 0));
        assert_eq!(signature(&form(&[1, 0, 1])).expect("sig"), (0, 1));
        assert_eq!(signature(&form(&[1, 0, -2])).expect("sig"), (2, 0));
        // x^5 - x y^4 = x(x-y)(x+y)(x^2+y^2)
        assert_eq!(signature(&form(&[1, 0, 0, 0, -1, 0])).expect("sig"), (3, 1));
        // (x^2-3y^2)(x^2+y^2)
        assert_eq!(signature(&form(&[1, 0, -2, 0, -3])).expect("sig"), (2, 1));
        // x^4 + y^4
        assert_eq!(signature(&form(&[1, 0, 0, 0, 1])).expect("sig"), (0, 2));
    }

    #[test]
    fn cyclic_cubic_is_totally_real() {
        assert_eq!(signature(&form(&[1, 1, -2, -1])).expect("sig"), (3, 0));
    }

    #[test]
    fn repeated_roots_detected() {
        assert!(matches!(
            real_root_count(&form(&[1, 2, 1])),
            Err(Error::Degenerate { .. })
        ));
        assert!(matches!(
            real_root_count(&form(&[1, 0, 0, 0])),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn leading_zero_rejected() {
        assert_eq!(
            real_root_count(&form(&[0, 1, 1])).unwrap_err(),
            Error::LeadingZero
        );
    }

    #[test]
    fn agrees_with_float_roots_on_samples() {
        let samples: [&[i64]; 5] = [
            &[1, 3, -2, -1],
            &[2, 0, 0, 3],
            &[1, -1, -1, 1, 1],
            &[3, 1, 4, 1, 5],
            &[1, 0, -7, 0, 2, 0, 1],
        ];
        for s in samples {
            let f = form(s);
            let exact = signature(&f).expect("sig");
            let float = crate::roots::roots(&f.to_real()).expect("roots").signature();
            assert_eq!(exact, float, "{f}");
        }
    }
}
