//! Irreducibility of integer binary forms over the rationals.
//!
//! A binary form factors over Q exactly as its dehomogenization does, with
//! one extra case: a vanishing leading coefficient means `y` divides the
//! form. The test here is exact:
//!
//! * degree-one factors are found by the rational root theorem;
//! * higher-degree factors are found by finite interpolation: a factor `g`
//!   of `f` satisfies `g(p) | f(p)` at every integer `p`, so candidate
//!   factors of degree `e` are interpolated through divisor choices of
//!   `e + 1` sample values and checked by exact division.
//!
//! Content is ignored throughout (units of Q are irrelevant to
//! irreducibility); degree-one forms count as irreducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::form::Form;

/// Cap on divisor combinations explored per factor degree, to keep the
/// exact test from exploding on adversarial inputs. Exceeding it is an
/// error, never a wrong answer.
const COMBINATION_CAP: u64 = 8_000_000;

/// Whether the form is irreducible over Q (as a binary form, content
/// ignored).
pub fn is_irreducible(f: &Form) -> Result<bool> {
    let n = f.degree();
    if n == 1 {
        return Ok(true);
    }
    if f.leading().is_zero() {
        // y divides f, leaving a cofactor of positive degree.
        return Ok(false);
    }

    // Primitive dehomogenization p(x) = f(x, 1) / content.
    let content = f.content();
    let p: Vec<BigInt> = f.coeffs().iter().map(|c| c / &content).collect();

    if p[n].is_zero() {
        return Ok(false); // x divides
    }

    // Degree-one factors: a rational root p/q needs p | constant term and
    // q | leading term.
    if has_rational_root(&p)? {
        return Ok(false);
    }

    // Degree e factors, 2 <= e <= n/2, by interpolation through divisors
    // of sample values.
    for e in 2..=(n / 2) {
        if has_factor_of_degree(&p, e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rational root test on a primitive polynomial with nonzero ends.
fn has_rational_root(p: &[BigInt]) -> Result<bool> {
    let n = p.len() - 1;
    let too_large = || {
        Error::InvalidSpec("coefficients too large for the exact factor search".into())
    };
    let lead_divs = positive_divisors(&p[0]).ok_or_else(too_large)?;
    let const_divs = positive_divisors(&p[n]).ok_or_else(too_large)?;
    for q in &lead_divs {
        for r in &const_divs {
            if r.gcd(q) != BigInt::one() {
                continue;
            }
            for sign in [1i64, -1] {
                // p(r/q) = 0 iff the homogeneous value at (sign*r, q) is 0.
                let num = r * BigInt::from(sign);
                if horner_homogeneous(p, &num, q).is_zero() {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// The homogeneous value `sum p_i x^(n-i) y^i` at integer `(x, y)`.
fn horner_homogeneous(p: &[BigInt], x: &BigInt, y: &BigInt) -> BigInt {
    let n = p.len() - 1;
    let mut acc = BigInt::zero();
    let mut ypow = BigInt::one();
    for (i, c) in p.iter().enumerate() {
        acc = acc * x + c * &ypow;
        if i < n {
            ypow *= y;
        }
    }
    acc
}

/// Looks for a degree-`e` factor of the primitive polynomial `p` (which
/// has no rational roots at this point).
fn has_factor_of_degree(p: &[BigInt], e: usize) -> Result<bool> {
    // Sample points with the fewest divisors keep the search small; points
    // whose values are too large to factor are skipped.
    let mut scored: Vec<(usize, BigInt, Vec<BigInt>)> = Vec::new();
    for pt in (-6i64..=6).map(BigInt::from) {
        let v = eval_int(p, &pt);
        if v.is_zero() {
            return Ok(true); // integer root; cannot happen after the root test
        }
        if let Some(d) = positive_divisors(&v) {
            scored.push((d.len(), pt, d));
        }
    }
    if scored.len() < e + 1 {
        return Err(Error::InvalidSpec(
            "coefficients too large for the exact factor search".into(),
        ));
    }
    scored.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    scored.truncate(e + 1);
    let points: Vec<BigInt> = scored.iter().map(|(_, pt, _)| pt.clone()).collect();

    let divisor_lists: Vec<Vec<BigInt>> = scored
        .into_iter()
        .map(|(_, _, ds)| {
            let negs: Vec<BigInt> = ds.iter().map(|d| -d).collect();
            let mut all = ds;
            all.extend(negs);
            all
        })
        .collect();

    // The first coordinate's sign can be fixed: g and -g divide together.
    let mut sizes: Vec<u64> = divisor_lists.iter().map(|d| d.len() as u64).collect();
    sizes[0] /= 2;
    let total: u64 = sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s))
        .ok_or_else(|| Error::InvalidSpec("factor search space overflow".into()))?;
    if total > COMBINATION_CAP {
        return Err(Error::InvalidSpec(format!(
            "irreducibility certificate would need {total} interpolations"
        )));
    }

    let mut choice = vec![0usize; e + 1];
    loop {
        let values: Vec<BigInt> = (0..=e)
            .map(|i| divisor_lists[i][choice[i]].clone())
            .collect();
        if let Some(g) = interpolate_integer(&points, &values, e) {
            if divides(p, &g) {
                return Ok(true);
            }
        }

        // Advance the mixed-radix counter; the first digit only runs over
        // the positive divisors.
        let mut i = e;
        loop {
            choice[i] += 1;
            let limit = if i == 0 {
                divisor_lists[0].len() / 2
            } else {
                divisor_lists[i].len()
            };
            if choice[i] < limit {
                break;
            }
            choice[i] = 0;
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
        }
    }
}

/// Lagrange interpolation through `(points[i], values[i])`; returns the
/// coefficients (leading first) when the result is an integer polynomial
/// of degree exactly `e`, else `None`.
fn interpolate_integer(points: &[BigInt], values: &[BigInt], e: usize) -> Option<Vec<BigInt>> {
    let m = points.len();
    // Accumulate sum_i values[i] * prod_{j != i} (x - x_j) / (x_i - x_j)
    // over rationals, leading-first with fixed length m.
    let mut acc = vec![BigRational::zero(); m];
    for i in 0..m {
        let mut num = vec![BigRational::one()]; // polynomial 1
        let mut den = BigRational::one();
        for j in 0..m {
            if i == j {
                continue;
            }
            num = poly_mul_linear(&num, &points[j]);
            den *= BigRational::from_integer(&points[i] - &points[j]);
        }
        let scale = BigRational::from_integer(values[i].clone()) / den;
        let offset = m - num.len();
        for (k, c) in num.iter().enumerate() {
            acc[offset + k] += c * &scale;
        }
    }
    while acc.len() > 1 && acc[0].is_zero() {
        acc.remove(0);
    }
    if acc.len() != e + 1 {
        return None;
    }
    let mut out = Vec::with_capacity(acc.len());
    for c in acc {
        if !c.is_integer() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(out)
}

/// Multiplies the polynomial by `(x - root)`.
fn poly_mul_linear(p: &[BigRational], root: &BigInt) -> Vec<BigRational> {
    let r = BigRational::from_integer(root.clone());
    let mut out = vec![BigRational::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i] += c;
        out[i + 1] -= c * &r;
    }
    out
}

/// Exact divisibility of integer polynomials (leading-first vectors).
fn divides(p: &[BigInt], g: &[BigInt]) -> bool {
    if g.len() < 2 || g.len() > p.len() || g[0].is_zero() {
        return false;
    }
    let mut rem: Vec<BigRational> = p
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let den: Vec<BigRational> = g
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    while rem.len() >= den.len() {
        let factor = &rem[0] / &den[0];
        let scaled: Vec<BigRational> = den.iter().map(|d| &factor * d).collect();
        for (r, s) in rem.iter_mut().zip(scaled.iter()) {
            *r = &*r - s;
        }
        rem.remove(0);
    }
    rem.iter().all(|c| c.is_zero())
}

/// Evaluates an integer polynomial (leading-first) at an integer.
fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p {
        acc = acc * x + c;
    }
    acc
}

/// Positive divisors of `|v|` in ascending order, or `None` when `|v|` is
/// too large to factor by trial division in reasonable time. The caller
/// must treat `None` as "cannot certify", never as "no divisors".
fn positive_divisors(v: &BigInt) -> Option<Vec<BigInt>> {
    const TRIAL_DIVISION_CAP: u64 = 1_000_000_000_000;
    let a64 = v.abs().to_u64().filter(|&a| a <= TRIAL_DIVISION_CAP)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= a64 {
        if a64 % d == 0 {
            small.push(BigInt::from(d));
            if d != a64 / d {
                large.push(BigInt::from(a64 / d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(v: &[i64]) -> Form {
        Form::from_i64(v).expect("valid form")
    }

    #[test]
    fn linear_and_leading_zero() {
        assert!(is_irreducible(&form(&[2, 3])).expect("ok"));
        assert!(!is_irreducible(&form(&[0, 1, 1])).expect("ok"));
    }

    #[test]
    fn known_irreducibles() {
        // No rational roots, degree <= 3 so that settles it.
        assert!(is_irreducible(&form(&[1, 0, 1])).expect("ok"));
        assert!(is_irreducible(&form(&[1, 1, -2, -1])).expect("ok"));
        assert!(is_irreducible(&form(&[1, 0, -2])).expect("ok"));
        // Eisenstein at 2.
        assert!(is_irreducible(&form(&[1, 0, 0, 0, 2])).expect("ok"));
        // x^4 + y^4 and x^4 + x y^3 + y^4.
        assert!(is_irreducible(&form(&[1, 0, 0, 0, 1])).expect("ok"));
        assert!(is_irreducible(&form(&[1, 0, 0, 1, 1])).expect("ok"));
    }

    #[test]
    fn known_reducibles() {
        assert!(!is_irreducible(&form(&[1, 0, -1, 0])).expect("ok"));
        assert!(!is_irreducible(&form(&[1, 0, -2, 0, 1])).expect("ok")); // (x^2-xy-y^2)(x^2+xy-y^2)
        assert!(!is_irreducible(&form(&[1, 1, 1, 1])).expect("ok")); // (x+y)(x^2+y^2)
        // (x^2+y^2)^2: repeated quadratic factor.
        assert!(!is_irreducible(&form(&[1, 0, 2, 0, 1])).expect("ok"));
        // Quadratic-pair product with no rational roots:
        // (x^2+xy+y^2)(x^2-xy+3y^2)
        let prod = form(&[1, 0, 3, 2, 3]);
        assert!(!is_irreducible(&prod).expect("ok"));
    }

    #[test]
    fn content_does_not_matter() {
        assert!(is_irreducible(&form(&[6, 0, 6])).expect("ok"));
    }

    #[test]
    fn products_are_detected() {
        // Multiply small irreducible pairs and check detection; exercises
        // the interpolation path for degrees 4..6.
        let pairs: [(&[i64], &[i64]); 3] = [
            (&[1, 1, 2], &[1, -1, 3]),
            (&[1, 0, 1], &[1, 1, -1, 1]),
            (&[1, 1, -2, -1], &[1, 1, 2, 1]),
        ];
        for (a, b) in pairs {
            let fa = form(a);
            let fb = form(b);
            let mut prod = vec![0i64; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    prod[i + j] += x * y;
                }
            }
            let fp = form(&prod);
            assert!(is_irreducible(&fa).expect("ok"), "{fa}");
            assert!(is_irreducible(&fb).expect("ok"), "{fb}");
            assert!(!is_irreducible(&fp).expect("ok"), "{fp}");
        }
    }
}
