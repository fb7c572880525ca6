//! Binary forms with integer or floating-point coefficients.
//!
//! A binary form of degree `n` is written
//!
//! ```text
//! f(x, y) = a0 x^n + a1 x^(n-1) y + ... + a(n-1) x y^(n-1) + an y^n
//! ```
//!
//! and stored as the coefficient vector `[a0, ..., an]`. [`Form`] keeps
//! exact integer coefficients (`BigInt`, so substitutions never overflow);
//! [`RealForm`] keeps `f64` coefficients and is the input type of the
//! numerical minimization routines.
//!
//! The group SL2(Z) acts by substitution: for `g = [[a, b], [c, d]]`,
//!
//! ```text
//! (g . f)(x, y) = f(a x + c y, b x + d y),
//! ```
//!
//! a left action that preserves degree, content, discriminant, and the
//! number of real roots.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::UnimodularMap;

/// Shared Display body for the two coefficient containers.
macro_rules! fmt_coeff_list {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            for (i, c) in self.coeffs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            Ok(())
        }
    };
}

/// Binomial coefficient as a `BigInt`; exact for all small arguments used
/// by degree-at-most-moderate forms.
pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::from(1);
    for i in 0..k {
        num *= BigInt::from(n - i);
        num /= BigInt::from(i + 1); // exact at every step for this order
    }
    num
}

/// A binary form with exact integer coefficients `[a0, ..., an]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    coeffs: Vec<BigInt>,
}

impl Form {
    /// Builds a form from `[a0, ..., an]`; requires degree at least one,
    /// i.e. two or more coefficients, and a nonzero coefficient somewhere.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidSpec(
                "a binary form needs at least two coefficients".into(),
            ));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidSpec("the zero form is not allowed".into()));
        }
        Ok(Form { coeffs })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Form::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Degree `n` (one less than the number of stored coefficients).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients `[a0, ..., an]`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Leading coefficient `a0` (of `x^n`).
    pub fn leading(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// Coefficients as `i64`, when they all fit.
    pub fn coeffs_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    /// Floating-point copy of the form.
    pub fn to_real(&self) -> RealForm {
        RealForm {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
                .collect(),
        }
    }

    /// Greatest common divisor of the coefficients (positive).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// `f(x, y)` at an integer point.
    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        // Horner in x with an accumulated power of y.
        let mut acc = BigInt::zero();
        let mut ypow = BigInt::from(1);
        let n = self.degree();
        // sum a_i x^(n-i) y^i: evaluate as (((a0 x + a1 y) x + a2 y^2) x + ...)
        // by tracking the y power separately.
        for (i, a) in self.coeffs.iter().enumerate() {
            acc = acc * x + a * &ypow;
            if i < n {
                ypow *= y;
            }
        }
        acc
    }

    /// The substituted form `(g . f)(x, y) = f(a x + c y, b x + d y)`.
    pub fn act(&self, g: &UnimodularMap) -> Form {
        let n = self.degree();
        let a = BigInt::from(g.a());
        let b = BigInt::from(g.b());
        let c = BigInt::from(g.c());
        let d = BigInt::from(g.d());

        // Powers of the four entries up to n.
        let pows = |base: &BigInt| -> Vec<BigInt> {
            let mut v = Vec::with_capacity(n + 1);
            v.push(BigInt::from(1));
            for _ in 0..n {
                let last = v.last().expect("nonempty").clone();
                v.push(last * base);
            }
            v
        };
        let (pa, pb, pc, pd) = (pows(&a), pows(&b), pows(&c), pows(&d));

        let mut out = vec![BigInt::zero(); n + 1];
        for (i, ai) in self.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            // (a x + c y)^(n-i) * (b x + d y)^i, expanded term by term.
            for p in 0..=(n - i) {
                let left = binomial(n - i, p) * &pa[p] * &pc[n - i - p];
                for q in 0..=i {
                    let right = binomial(i, q) * &pb[q] * &pd[i - q];
                    let xdeg = p + q;
                    out[n - xdeg] += ai * &left * right;
                }
            }
        }
        Form { coeffs: out }
    }

    /// Discriminant of the dehomogenization `f(x, 1)`, normalized so that
    /// a quadratic `a x^2 + b x y + c y^2` has discriminant `b^2 - 4 a c`.
    /// Requires a nonzero leading coefficient.
    pub fn discriminant(&self) -> Result<BigInt> {
        if self.leading().is_zero() {
            return Err(Error::LeadingZero);
        }
        let n = self.degree();
        if n < 2 {
            return Err(Error::InvalidSpec(
                "discriminant needs degree at least two".into(),
            ));
        }
        // Resultant of f(x,1) and its x-derivative via the Sylvester matrix.
        let p: Vec<BigInt> = self.coeffs.clone();
        let dp: Vec<BigInt> = (0..n)
            .map(|i| &p[i] * BigInt::from(n - i))
            .collect();
        let res = resultant(&p, &dp);
        let sign = if (n * (n - 1) / 2).is_multiple_of(2) {
            BigInt::from(1)
        } else {
            BigInt::from(-1)
        };
        let (q, r) = (sign * res).div_rem(self.leading());
        debug_assert!(r.is_zero(), "discriminant division is exact");
        Ok(q)
    }
}

/// Resultant of two integer polynomials given by coefficient vectors in
/// descending order (leading first), via a fraction-free determinant of the
/// Sylvester matrix.
fn resultant(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let n = p.len() - 1;
    let m = q.len() - 1;
    let size = n + m;
    if size == 0 {
        return BigInt::from(1);
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for r in 0..m {
        for (j, c) in p.iter().enumerate() {
            mat[r][r + j] = c.clone();
        }
    }
    for r in 0..n {
        for (j, c) in q.iter().enumerate() {
            mat[m + r][r + j] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

/// Fraction-free Gaussian elimination; exact over the integers.
fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let size = m.len();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..size - 1 {
        if m[k][k].is_zero() {
            match (k + 1..size).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division is exact");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[size - 1][size - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{self}]")
    }
}

/// Displays as the comma-separated coefficient list accepted by `parse`.
impl fmt::Display for Form {
    fmt_coeff_list!();
}

impl FromStr for Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_form(s)? {
            ParsedForm::Int(f) => Ok(f),
            ParsedForm::Real(_) => Err(Error::Parse(
                "expected integer coefficients, found a decimal point".into(),
            )),
        }
    }
}

/// A binary form with `f64` coefficients.
#[derive(Clone, PartialEq)]
pub struct RealForm {
    coeffs: Vec<f64>,
}

impl RealForm {
    /// Builds a form from `[a0, ..., an]`; requires at least two finite
    /// coefficients.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidSpec(
                "a binary form needs at least two coefficients".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parse("coefficients must be finite".into()));
        }
        Ok(RealForm { coeffs })
    }

    /// Degree `n`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients `[a0, ..., an]`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Leading coefficient `a0`.
    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    /// `f(x, y)` at a real point.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let n = self.degree();
        let mut acc = 0.0;
        let mut ypow = 1.0;
        for (i, a) in self.coeffs.iter().enumerate() {
            acc = acc * x + a * ypow;
            if i < n {
                ypow *= y;
            }
        }
        acc
    }

    /// The substituted form `(g . f)(x, y) = f(a x + c y, b x + d y)`,
    /// computed in floating point.
    pub fn act(&self, g: &UnimodularMap) -> RealForm {
        let n = self.degree();
        let (a, b, c, d) = (g.a() as f64, g.b() as f64, g.c() as f64, g.d() as f64);
        let pows = |base: f64| -> Vec<f64> {
            let mut v = Vec::with_capacity(n + 1);
            v.push(1.0);
            for k in 0..n {
                v.push(v[k] * base);
            }
            v
        };
        let (pa, pb, pc, pd) = (pows(a), pows(b), pows(c), pows(d));
        let mut out = vec![0.0; n + 1];
        for (i, &ai) in self.coeffs.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            for p in 0..=(n - i) {
                let left = binomial(n - i, p).to_f64().expect("small binomial")
                    * pa[p]
                    * pc[n - i - p];
                for q in 0..=i {
                    let right = binomial(i, q).to_f64().expect("small binomial")
                        * pb[q]
                        * pd[i - q];
                    out[n - p - q] += ai * left * right;
                }
            }
        }
        RealForm { coeffs: out }
    }
}

impl fmt::Debug for RealForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealForm[{self}]")
    }
}

impl fmt::Display for RealForm {
    fmt_coeff_list!();
}

/// Result of parsing user-supplied coefficients: exact when every token is
/// an integer, floating point as soon as one token has a decimal point or
/// exponent.
#[derive(Debug, Clone)]
pub enum ParsedForm {
    Int(Form),
    Real(RealForm),
}

/// Parses a comma-separated coefficient list such as `1,4,5` or
/// `1.0,-0.5,0.25`. Whitespace around entries is ignored.
pub fn parse_form(s: &str) -> Result<ParsedForm> {
    let tokens: Vec<&str> = s.split(',').map(str::trim).collect();
    if tokens.iter().any(|t| t.is_empty()) {
        return Err(Error::Parse(format!("empty coefficient in '{s}'")));
    }
    if tokens.len() < 2 {
        return Err(Error::Parse(format!(
            "need at least two coefficients, got '{s}'"
        )));
    }
    let ints: Option<Vec<BigInt>> = tokens.iter().map(|t| BigInt::from_str(t).ok()).collect();
    if let Some(coeffs) = ints {
        return Form::new(coeffs).map(ParsedForm::Int);
    }
    let mut reals = Vec::with_capacity(tokens.len());
    for t in &tokens {
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => reals.push(v),
            _ => {
                return Err(Error::Parse(format!("bad coefficient '{t}'")));
            }
        }
    }
    RealForm::new(reals).map(ParsedForm::Real)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(v: &[i64]) -> Form {
        Form::from_i64(v).expect("valid form")
    }

    #[test]
    fn parse_roundtrip() {
        let f: Form = "1, -4, 5".parse().expect("parses");
        assert_eq!(f.to_string(), "1,-4,5");
        assert!(matches!(
            parse_form("1.5,2,3").expect("parses"),
            ParsedForm::Real(_)
        ));
        assert!(parse_form("1,").is_err());
        assert!(parse_form("5").is_err());
        assert!(parse_form("1,two,3").is_err());
    }

    #[test]
    fn substitution_examples() {
        // Inversion swaps the variables up to sign.
        let f = form(&[1, 4, 5]);
        let s = UnimodularMap::s();
        assert_eq!(f.act(&s), form(&[5, -4, 1]));

        // The map with half-plane action w -> w + 2 turns x^2+4xy+5y^2,
        // whose marked point is -2+i, into x^2+y^2, marked at i.
        let g = UnimodularMap::new(1, 0, -2, 1);
        assert_eq!(f.act(&g), form(&[1, 0, 1]));

        // Unit upper translation on a cubic.
        let u = UnimodularMap::u();
        let c = form(&[1, 0, -1, 0]); // x^3 - x y^2
        let img = c.act(&u); // f(x + y, y)
        assert_eq!(img, form(&[1, 3, 2, 0]));
    }

    #[test]
    fn action_composes() {
        // Substitution is a right action: acting by g1 then g2 equals
        // acting by the product g2 * g1.
        let f = form(&[2, -1, 3, 7]);
        let g1 = UnimodularMap::new(2, 1, 1, 1);
        let g2 = UnimodularMap::new(1, -2, 0, 1);
        assert_eq!(f.act(&g1).act(&g2), f.act(&g2.compose(&g1)));
        assert_ne!(f.act(&g1).act(&g2), f.act(&g1.compose(&g2)));
    }

    #[test]
    fn action_preserves_content_and_discriminant() {
        let f = form(&[2, 4, 6]);
        let g = UnimodularMap::new(3, 2, 4, 3);
        let img = f.act(&g);
        assert_eq!(f.content(), img.content());
        assert_eq!(
            f.discriminant().expect("disc"),
            img.discriminant().expect("disc")
        );
    }

    #[test]
    fn discriminant_cases() {
        // Quadratic convention: b^2 - 4 a c.
        assert_eq!(
            form(&[3, 5, -7]).discriminant().expect("disc"),
            BigInt::from(25 + 84)
        );
        // x^3 - x y^2 dehomogenizes to x^3 - x with discriminant 4.
        assert_eq!(
            form(&[1, 0, -1, 0]).discriminant().expect("disc"),
            BigInt::from(4)
        );
        // x^4 + y^4: discriminant of x^4 + 1 is 4^4 = 256.
        assert_eq!(
            form(&[1, 0, 0, 0, 1]).discriminant().expect("disc"),
            BigInt::from(256)
        );
        // Repeated root => zero.
        assert_eq!(
            form(&[1, 2, 1]).discriminant().expect("disc"),
            BigInt::zero()
        );
        assert_eq!(form(&[0, 1, 1]).discriminant(), Err(Error::LeadingZero));
    }

    #[test]
    fn evaluate_matches_expansion() {
        let f = form(&[1, -2, 0, 5]);
        let v = f.evaluate(&BigInt::from(3), &BigInt::from(-2));
        // 27 - 2*9*(-2) + 5*(-8) = 27 + 36 - 40 = 23
        assert_eq!(v, BigInt::from(23));
    }

    #[test]
    fn real_act_matches_integer_act() {
        let f = form(&[1, -3, 2, 9, -1]);
        let g = UnimodularMap::new(2, 3, 1, 2);
        let exact = f.act(&g).to_real();
        let float = f.to_real().act(&g);
        for (a, b) in exact.coeffs().iter().zip(float.coeffs()) {
            assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }
}
