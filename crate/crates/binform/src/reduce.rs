//! Reduction of forms into the fundamental domain, canonical class
//! representatives, and stabilizers.
//!
//! A form is *reduced* when its representative point `z(f)` lies in the
//! closed standard fundamental domain `|t| <= 1/2, |z| >= 1` of SL2(Z).
//! Because `z` moves equivariantly (`z(g . f)` is the half-plane image of
//! `z(f)` under `g`), reducing a form means walking its point into the
//! domain with translations `w -> w + k` and inversions `w -> -1/w` while
//! accumulating the matrix.
//!
//! Every class of forms with nonzero invariant contains finitely many
//! reduced members: generically two (`f` and `-f` via `-identity`) in odd
//! degree and one in even degree, more when `z(f)` lands on the domain
//! boundary. The *canonical representative* resolves this by listing all
//! reduced members reachable by boundary moves and picking the least in a
//! fixed coefficient order, giving a well-defined bijection between
//! classes and canonical forms — the backbone of exact class counting.
//!
//! For quadratics the representative point of a definite form is the usual
//! half-plane root, and for totally real cubics it is the root of the
//! (positive definite) Hessian; both give exact integer reduction tests
//! used by the enumeration fast paths below.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::form::{Form, RealForm};
use crate::julia::{self, HalfPlanePoint, MinimizeParams};
use crate::matrix::UnimodularMap;
use crate::roots;

/// Default tolerance for boundary classification and the reduced test.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

/// Tolerance used when collecting the reduced members of a class by
/// floating point; wide enough to never drop a genuine boundary twin.
const CLOSURE_TOL: f64 = 1e-7;

/// Outcome of reducing a form: the matrix, the reduced form, the reduced
/// representative point, and whether that point lies within tolerance of
/// the domain boundary (where reduced representatives are not unique).
#[derive(Debug, Clone)]
pub struct Reduction<F> {
    pub gamma: UnimodularMap,
    pub reduced: F,
    pub point: HalfPlanePoint,
    pub boundary: bool,
}

/// A class described by its canonical representative.
#[derive(Debug, Clone)]
pub struct ClassRecord {
    /// The least reduced member of the class in the coefficient order
    /// (absolute value first, negative before positive).
    pub canonical: Form,
    /// The invariant of the class.
    pub theta: f64,
    /// Representative point of the canonical form.
    pub point: HalfPlanePoint,
    /// Number of SL2(Z) matrices fixing the form (always a multiple of 1
    /// counting the identity; includes `-identity` in even degree).
    pub stabilizer_order: usize,
    /// Whether the representative point is within tolerance of the domain
    /// boundary.
    pub boundary: bool,
}

/// Walks a half-plane point into the closed fundamental domain, returning
/// the accumulated matrix and the final point. The matrix `g` satisfies:
/// the final point is the half-plane image of `w` under `g`.
pub fn reduce_point(w: Complex64) -> Result<(UnimodularMap, Complex64)> {
    if !(w.im > 0.0) || !w.is_finite() {
        return Err(Error::InvalidSpec(
            "point to reduce must lie in the open upper half plane".into(),
        ));
    }
    let mut z = w;
    let mut g = UnimodularMap::identity();
    for _ in 0..10_000 {
        let k = z.re.round();
        if k != 0.0 {
            if k.abs() > 9e15 {
                return Err(Error::InvalidSpec("point too far out to reduce".into()));
            }
            z.re -= k;
            g = UnimodularMap::translation(-(k as i64)).compose(&g);
        }
        if z.norm_sqr() < 1.0 - 1e-15 {
            z = -1.0 / z;
            g = UnimodularMap::s().compose(&g);
        } else {
            return Ok((g, z));
        }
    }
    Err(Error::NoConvergence {
        iterations: 10_000,
        gradient_norm: f64::NAN,
        last_point: (z.re, z.im),
    })
}

fn boundary_flag(p: HalfPlanePoint, tol: f64) -> bool {
    (p.t.abs() - 0.5).abs() <= tol || (p.t * p.t + p.u * p.u - 1.0).abs() <= tol
}

/// Reduces an integer form: finds `g` such that `f.act(g)` is reduced.
pub fn reduce_form(f: &Form) -> Result<Reduction<Form>> {
    if f.leading().is_zero() {
        return Err(Error::ReducibleAtInfinity);
    }
    let rs = roots::roots(&f.to_real())?;
    let mo = julia::representative_point(&rs, &MinimizeParams::default())?;
    let (gamma, z) = reduce_point(mo.point.to_complex())?;
    let point = HalfPlanePoint::from_complex(z);
    Ok(Reduction {
        gamma,
        reduced: f.act(&gamma),
        point,
        boundary: boundary_flag(point, DEFAULT_BOUNDARY_TOL),
    })
}

/// Reduces a real form (same transport, floating-point output form).
pub fn reduce_real(f: &RealForm) -> Result<Reduction<RealForm>> {
    if f.leading() == 0.0 {
        return Err(Error::ReducibleAtInfinity);
    }
    let rs = roots::roots(f)?;
    let mo = julia::representative_point(&rs, &MinimizeParams::default())?;
    let (gamma, z) = reduce_point(mo.point.to_complex())?;
    let point = HalfPlanePoint::from_complex(z);
    Ok(Reduction {
        gamma,
        reduced: f.act(&gamma),
        point,
        boundary: boundary_flag(point, DEFAULT_BOUNDARY_TOL),
    })
}

/// Whether `z(f)` lies in the closed fundamental domain, within `tol`.
/// Exact integer tests are used for definite quadratics and totally real
/// cubics with machine-sized coefficients; everything else goes through
/// the minimizer.
pub fn is_reduced(f: &Form, tol: f64) -> Result<bool> {
    if f.leading().is_zero() {
        return Err(Error::ReducibleAtInfinity);
    }
    if let Some(c) = f.coeffs_i64() {
        if f.degree() == 2 {
            if f.discriminant()?.is_negative() {
                return Ok(quad_is_reduced(c[0], c[1], c[2]));
            }
            return Err(Error::NotStable {
                detail: "a quadratic with a real root has no interior minimum".into(),
            });
        }
        if f.degree() == 3 && !f.discriminant()?.is_zero() {
            let (p, q, r) = hessian3(c[0], c[1], c[2], c[3]);
            if p > 0 && 4 * p * r - q * q > 0 {
                // Definite Hessian (three real roots): the exact test.
                return Ok(q.abs() <= p && p <= r);
            }
            // One real root: the Hessian is indefinite — `p` alone can
            // still be positive — and carries no exact test; fall through
            // to the numeric route.
        }
    }
    let rs = roots::roots(&f.to_real())?;
    let mo = julia::representative_point(&rs, &MinimizeParams::default())?;
    Ok(mo.point.in_fundamental_domain(tol))
}

/// Coefficient order used to pick canonical representatives: compare
/// entrywise by absolute value, breaking ties with negative before
/// positive.
fn canonical_less(a: &Form, b: &Form) -> bool {
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        let (ax, ay) = (x.abs(), y.abs());
        if ax != ay {
            return ax < ay;
        }
        let (sx, sy) = (x.is_positive(), y.is_positive());
        if sx != sy {
            return !sx; // negative (or zero) before positive
        }
    }
    false
}

/// All reduced members of the class of an already-reduced form, found by
/// closing under the boundary moves: translations by ±1, inversion, and
/// minus the identity.
fn reduced_closure(start: &Form) -> Result<Vec<Form>> {
    let gens = [
        UnimodularMap::translation(1),
        UnimodularMap::translation(-1),
        UnimodularMap::s(),
        UnimodularMap::neg_identity(),
    ];
    // The seed is checked like every other candidate: a reducer landing a
    // hair outside the domain (transport error on an ill-conditioned
    // input) must not smuggle an unreduced form into the closure, or the
    // canonical pick would depend on the route taken to reach the class.
    let mut seen: Vec<Form> = Vec::new();
    if member_is_reduced(start)? {
        seen.push(start.clone());
    }
    let mut frontier: Vec<Form> = vec![start.clone()];
    while let Some(f) = frontier.pop() {
        for g in &gens {
            let img = f.act(g);
            if img == *start || seen.contains(&img) {
                continue;
            }
            if member_is_reduced(&img)? {
                seen.push(img.clone());
                frontier.push(img);
                if seen.len() > 64 {
                    return Err(Error::InvalidSpec(
                        "reduced closure did not stay finite; the form is \
                         likely degenerate"
                            .into(),
                    ));
                }
            }
        }
    }
    Ok(seen)
}

/// Reduced test used inside the closure: exact when possible, otherwise
/// floating point with a tolerance wide enough to keep boundary twins.
fn member_is_reduced(f: &Form) -> Result<bool> {
    if let Some(c) = f.coeffs_i64() {
        if f.degree() == 2 {
            return Ok(quad_is_reduced(c[0], c[1], c[2]));
        }
        if f.degree() == 3 {
            let (p, q, r) = hessian3(c[0], c[1], c[2], c[3]);
            // The exact Hessian test only applies when the Hessian is
            // definite (three real roots); `p > 0` alone does not imply
            // that, and one-real-root cubics must use the numeric route.
            if p > 0 && 4 * p * r - q * q > 0 {
                return Ok(cubic_is_reduced(c[0], c[1], c[2], c[3]));
            }
        }
    }
    let rs = match roots::roots(&f.to_real()) {
        Ok(rs) => rs,
        Err(Error::LeadingZero) => return Ok(false),
        Err(e) => return Err(e),
    };
    match julia::representative_point(&rs, &MinimizeParams::default()) {
        Ok(mo) => Ok(mo.point.in_fundamental_domain(CLOSURE_TOL)),
        Err(Error::NotStable { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Canonical representative of the class of `f`, with its invariant,
/// representative point, and stabilizer order.
pub fn canonical_representative(f: &Form) -> Result<ClassRecord> {
    let red = reduce_form(f)?;
    let members = reduced_closure(&red.reduced)?;
    // Classes of reducible forms can have reduced members with a zero
    // leading coefficient; representatives are always chosen with a
    // nonzero one, matching the enumeration convention.
    let canonical = members
        .into_iter()
        .filter(|m| !m.leading().is_zero())
        .reduce(|best, cand| if canonical_less(&cand, &best) { cand } else { best })
        .ok_or_else(|| Error::NotStable {
            detail: "no reduced member has a nonzero leading coefficient".into(),
        })?;

    let inv = julia::julia_invariant(&canonical.to_real())?;
    let stab = stabilizer_of_reduced(&canonical, inv.point);
    Ok(ClassRecord {
        theta: inv.theta,
        point: inv.point,
        boundary: boundary_flag(inv.point, DEFAULT_BOUNDARY_TOL),
        stabilizer_order: stab.len(),
        canonical,
    })
}

/// The subgroup of SL2(Z) fixing `f` under substitution. Finite for every
/// form handled here (stable forms have a point stabilizer in the compact
/// stabilizer of `z(f)`), and computed exactly: candidate elliptic
/// elements near the representative point are tested by exact integer
/// substitution.
pub fn stabilizer(f: &Form) -> Result<Vec<UnimodularMap>> {
    let red = reduce_form(f)?;
    let g0 = red.gamma;
    let g0i = g0.inverse();
    let mut out = Vec::new();
    for g in stabilizer_of_reduced(&red.reduced, red.point) {
        // Conjugate back: h fixes f exactly when g0 h g0^{-1} fixes the
        // reduced form.
        let h = g0i.compose(&g).compose(&g0);
        debug_assert_eq!(&f.act(&h), f);
        out.push(h);
    }
    out.sort_by_key(|m| m.entries());
    out.dedup();
    Ok(out)
}

/// Stabilizer of a reduced form, by exact testing of the finitely many
/// elliptic candidates near its representative point.
fn stabilizer_of_reduced(f: &Form, z: HalfPlanePoint) -> Vec<UnimodularMap> {
    let mut candidates: Vec<UnimodularMap> = vec![UnimodularMap::identity(), UnimodularMap::neg_identity()];

    let near = |t: f64, u: f64| -> bool {
        (z.t - t).abs() < 1e-4 && (z.u - u).abs() < 1e-4
    };
    let h = 3f64.sqrt() / 2.0;

    if near(0.0, 1.0) {
        // Order-four point i: powers of the inversion.
        let s = UnimodularMap::s();
        candidates.push(s);
        candidates.push(s.pow(3));
    }
    // u*s has order three; the full corner stabilizer in SL2(Z) is the
    // six signed powers.
    let us = UnimodularMap::u().compose(&UnimodularMap::s());
    let neg = UnimodularMap::neg_identity();
    if near(-0.5, h) {
        for k in 1..3 {
            let g = us.pow(k);
            candidates.push(neg.compose(&g));
            candidates.push(g);
        }
    }
    if near(0.5, h) {
        // The translate of the corner: conjugate the rotations by w -> w+1.
        let t = UnimodularMap::translation(1);
        let ti = t.inverse();
        for k in 1..3 {
            let g = t.compose(&us.pow(k)).compose(&ti);
            candidates.push(neg.compose(&g));
            candidates.push(g);
        }
    }

    let mut out: Vec<UnimodularMap> = candidates
        .into_iter()
        .filter(|g| &f.act(g) == f)
        .collect();
    out.sort_by_key(|m| m.entries());
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Exact integer fast paths for quadratics and cubics.
// ---------------------------------------------------------------------------

/// Exact reduced test for a definite quadratic `(a, b, c)`:
/// sign-normalized Gauss condition `|b| <= a <= c`.
pub(crate) fn quad_is_reduced(a: i64, b: i64, c: i64) -> bool {
    let (a, b, c) = if a < 0 { (-a, -b, -c) } else { (a, b, c) };
    let (a, b, c) = (a as i128, b as i128, c as i128);
    if a <= 0 || c <= 0 || b * b >= 4 * a * c {
        return false; // not definite
    }
    b.abs() <= a && a <= c
}

/// Hessian `(P, Q, R)` of the cubic `a x^3 + b x^2 y + c x y^2 + d y^3`:
/// `P = b^2 - 3 a c`, `Q = b c - 9 a d`, `R = c^2 - 3 b d`. Its
/// discriminant is `-3` times the cubic's; it is positive definite exactly
/// when the cubic has three distinct real roots, and then the cubic's
/// representative point is the Hessian's half-plane root.
pub(crate) fn hessian3(a: i64, b: i64, c: i64, d: i64) -> (i128, i128, i128) {
    let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
    (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
}

/// Exact reduced test for a totally real cubic: its Hessian is reduced as
/// a quadratic, in the closed sense `|Q| <= P <= R`.
pub(crate) fn cubic_is_reduced(a: i64, b: i64, c: i64, d: i64) -> bool {
    let (p, q, r) = hessian3(a, b, c, d);
    p > 0 && q.abs() <= p && p <= r
}

/// Substitution action on an `i64` quadratic, exact in `i128`.
pub(crate) fn act2(v: [i64; 3], g: &UnimodularMap) -> Option<[i64; 3]> {
    let (a, b, c) = (v[0] as i128, v[1] as i128, v[2] as i128);
    let (ga, gb, gc, gd) = (g.a() as i128, g.b() as i128, g.c() as i128, g.d() as i128);
    // f(ga x + gc y, gb x + gd y)
    let na = a * ga * ga + b * ga * gb + c * gb * gb;
    let nb = 2 * a * ga * gc + b * (ga * gd + gb * gc) + 2 * c * gb * gd;
    let nc = a * gc * gc + b * gc * gd + c * gd * gd;
    Some([
        i64::try_from(na).ok()?,
        i64::try_from(nb).ok()?,
        i64::try_from(nc).ok()?,
    ])
}

/// Substitution action on an `i64` cubic, exact in `i128`.
pub(crate) fn act3(v: [i64; 4], g: &UnimodularMap) -> Option<[i64; 4]> {
    let (a, b, c, d) = (v[0] as i128, v[1] as i128, v[2] as i128, v[3] as i128);
    let (p, q, r, s) = (g.a() as i128, g.b() as i128, g.c() as i128, g.d() as i128);
    // f(p x + r y, q x + s y) expanded monomial by monomial.
    let na = a * p * p * p + b * p * p * q + c * p * q * q + d * q * q * q;
    let nb = 3 * a * p * p * r
        + b * (p * p * s + 2 * p * q * r)
        + c * (q * q * r + 2 * p * q * s)
        + 3 * d * q * q * s;
    let nc = 3 * a * p * r * r
        + b * (r * r * q + 2 * p * r * s)
        + c * (s * s * p + 2 * q * r * s)
        + 3 * d * q * s * s;
    let nd = a * r * r * r + b * r * r * s + c * r * s * s + d * s * s * s;
    Some([
        i64::try_from(na).ok()?,
        i64::try_from(nb).ok()?,
        i64::try_from(nc).ok()?,
        i64::try_from(nd).ok()?,
    ])
}

/// Rounded division `q / d` for `d > 0`, ties toward positive infinity.
fn round_div(q: i128, d: i128) -> i128 {
    debug_assert!(d > 0);
    let f = q.div_euclid(d);
    let r = q - f * d;
    if 2 * r >= d {
        f + 1
    } else {
        f
    }
}

/// Gauss-reduces a totally real cubic through its Hessian: returns the
/// matrix and the reduced cubic. `None` when the Hessian is not positive
/// definite (not three real roots) or an intermediate overflows.
pub(crate) fn cubic_reduce_exact(v: [i64; 4]) -> Option<(UnimodularMap, [i64; 4])> {
    let (mut p, mut q, mut r) = hessian3(v[0], v[1], v[2], v[3]);
    if p <= 0 || q * q >= 4 * p * r {
        return None;
    }
    let mut g = UnimodularMap::identity();
    for _ in 0..20_000 {
        if q.abs() <= p && p <= r {
            let out = act3(v, &g)?;
            return Some((g, out));
        }
        let k = round_div(q, 2 * p);
        if k != 0 {
            // Translation w -> w + k on the half plane; on (p, q, r):
            // q -= 2 p k, r adjusts accordingly.
            let step = UnimodularMap::translation(i64::try_from(k).ok()?);
            r = r - q * k + p * k * k;
            q -= 2 * p * k;
            g = step.compose(&g);
        }
        if r < p {
            std::mem::swap(&mut p, &mut r);
            q = -q;
            g = UnimodularMap::s().compose(&g);
        }
    }
    None
}

/// Gauss-reduces a definite quadratic `(a, b, c)`: returns the matrix and
/// the reduced triple (same sign as the input). `None` when the input is
/// not definite or an intermediate overflows.
pub(crate) fn quad_reduce_exact(v: [i64; 3]) -> Option<(UnimodularMap, [i64; 3])> {
    let neg = v[0] < 0;
    let w = if neg { [-v[0], -v[1], -v[2]] } else { v };
    let (mut a, mut b, mut c) = (w[0] as i128, w[1] as i128, w[2] as i128);
    if a <= 0 || b * b >= 4 * a * c {
        return None;
    }
    let mut g = UnimodularMap::identity();
    for _ in 0..20_000 {
        if b.abs() <= a && a <= c {
            let out = act2(v, &g)?;
            return Some((g, out));
        }
        let k = round_div(b, 2 * a);
        if k != 0 {
            // x -> x - k y: b -= 2 a k, c adjusts accordingly.
            let step = UnimodularMap::translation(i64::try_from(k).ok()?);
            c = c - b * k + a * k * k;
            b -= 2 * a * k;
            g = step.compose(&g);
        }
        if c < a {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            g = UnimodularMap::s().compose(&g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn form(v: &[i64]) -> Form {
        Form::from_i64(v).expect("valid form")
    }

    #[test]
    fn reduce_point_examples() {
        let (g, z) = reduce_point(Complex64::new(-2.0, 1.0)).expect("reduces");
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(g, UnimodularMap::new(1, 0, -2, 1));

        // A point deep in a cusp neighborhood.
        let (_, z) = reduce_point(Complex64::new(0.37, 0.004)).expect("reduces");
        let p = HalfPlanePoint::from_complex(z);
        assert!(p.in_fundamental_domain(1e-9));
    }

    #[test]
    fn reduce_form_example() {
        let f = form(&[1, 4, 5]);
        let red = reduce_form(&f).expect("reduces");
        assert_eq!(red.reduced, form(&[1, 0, 1]));
        assert_eq!(red.gamma, UnimodularMap::new(1, 0, -2, 1));
        assert!((red.point.t - 0.0).abs() < 1e-10);
        assert!((red.point.u - 1.0).abs() < 1e-10);
        // Consistency: acting by gamma really produces the reduced form.
        assert_eq!(f.act(&red.gamma), red.reduced);
    }

    #[test]
    fn is_reduced_examples() {
        assert!(is_reduced(&form(&[1, 0, 1]), 1e-9).expect("ok"));
        assert!(is_reduced(&form(&[1, 1, 1]), 1e-9).expect("ok"));
        assert!(!is_reduced(&form(&[1, 4, 5]), 1e-9).expect("ok"));
        assert!(is_reduced(&form(&[1, 0, -3, 0]), 1e-9).expect("ok"));
        // x^3 - x y^2 has z = (0, 1/sqrt 3), below the unit circle.
        assert!(!is_reduced(&form(&[1, 0, -1, 0]), 1e-9).expect("ok"));
        assert_eq!(
            is_reduced(&form(&[0, 1, 1]), 1e-9).unwrap_err(),
            Error::ReducibleAtInfinity
        );
    }

    #[test]
    fn exact_and_float_reduced_tests_agree() {
        let gammas = [
            UnimodularMap::identity(),
            UnimodularMap::new(1, 0, -2, 1),
            UnimodularMap::new(2, 1, 1, 1),
            UnimodularMap::new(0, -1, 1, 3),
        ];
        let cubics = [[1i64, 0, -3, 0], [1, 1, -2, -1], [1, -1, -4, 1], [2, 1, -5, -1]];
        for v in cubics {
            let f = form(&v);
            if f.discriminant().expect("disc") <= BigInt::from(0) {
                continue;
            }
            for g in &gammas {
                let img = f.act(g);
                let c = img.coeffs_i64().expect("small");
                if c[0] == 0 {
                    // The float route needs f(x, 1) to keep full degree.
                    continue;
                }
                let exact = cubic_is_reduced(c[0], c[1], c[2], c[3]);
                // Numeric route: representative point of the image form.
                let rs = roots::roots(&img.to_real()).expect("roots");
                let mo = julia::representative_point(&rs, &MinimizeParams::default())
                    .expect("minimizer");
                let float = mo.point.in_fundamental_domain(1e-7);
                assert_eq!(exact, float, "{img}");
            }
        }
    }

    #[test]
    fn canonical_is_scramble_invariant() {
        let f = form(&[1, 1, -2, -1]);
        let base = canonical_representative(&f).expect("canonical");
        for g in [
            UnimodularMap::new(1, 0, 3, 1),
            UnimodularMap::new(2, 1, 1, 1),
            UnimodularMap::new(5, 2, 2, 1),
            UnimodularMap::new(0, -1, 1, -4),
        ] {
            let scrambled = f.act(&g);
            let c = canonical_representative(&scrambled).expect("canonical");
            assert_eq!(c.canonical, base.canonical, "scramble {g:?}");
            assert!((c.theta - base.theta).abs() < 1e-8 * base.theta);
        }
    }

    #[test]
    fn canonical_merges_sign_pair_in_odd_degree() {
        let f = form(&[1, 0, -3, 0]);
        let neg = form(&[-1, 0, 3, 0]);
        let a = canonical_representative(&f).expect("canonical");
        let b = canonical_representative(&neg).expect("canonical");
        assert_eq!(a.canonical, b.canonical);
    }

    #[test]
    fn canonical_keeps_signs_apart_in_even_degree() {
        let f = form(&[1, 0, 1]);
        let neg = form(&[-1, 0, -1]);
        let a = canonical_representative(&f).expect("canonical");
        let b = canonical_representative(&neg).expect("canonical");
        assert_ne!(a.canonical, b.canonical);
    }

    #[test]
    fn stabilizer_orders() {
        // Generic cubic: only the identity (minus identity negates).
        assert_eq!(stabilizer(&form(&[1, 0, -3, 0])).expect("stab").len(), 1);
        // Cyclic cubic: rotation of order three at the corner point.
        assert_eq!(stabilizer(&form(&[1, 1, -2, -1])).expect("stab").len(), 3);
        // x^2 + y^2: +-identity and +-inversion.
        assert_eq!(stabilizer(&form(&[1, 0, 1])).expect("stab").len(), 4);
        // x^2 + x y + y^2: the corner rotations, six matrices.
        assert_eq!(stabilizer(&form(&[1, 1, 1])).expect("stab").len(), 6);
        // Generic definite quadratic: just +-identity.
        assert_eq!(stabilizer(&form(&[2, 1, 3])).expect("stab").len(), 2);
    }

    #[test]
    fn stabilizer_matches_brute_force_on_small_matrices() {
        for v in [[1i64, 0, 1], [1, 1, 1], [2, 1, 3]] {
            let f = form(&v);
            let fast = stabilizer(&f).expect("stab");
            let mut brute = Vec::new();
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    for c in -3i64..=3 {
                        for d in -3i64..=3 {
                            if let Some(g) = UnimodularMap::try_new(a, b, c, d) {
                                if f.act(&g) == f {
                                    brute.push(g);
                                }
                            }
                        }
                    }
                }
            }
            brute.sort_by_key(|m| m.entries());
            assert_eq!(fast, brute, "{f}");
        }
    }

    #[test]
    fn cubic_exact_reduction_matches_float_route() {
        let f = [1i64, -6, 2, 3];
        let ff = form(&f);
        if ff.discriminant().expect("disc") > BigInt::from(0) {
            let (g, reduced) = cubic_reduce_exact(f).expect("reduces");
            assert!(cubic_is_reduced(reduced[0], reduced[1], reduced[2], reduced[3]));
            assert_eq!(ff.act(&g), form(&reduced));
        }
        // A pre-scrambled totally real cubic.
        let base = form(&[1, 1, -2, -1]);
        let scr = base.act(&UnimodularMap::new(7, 2, 3, 1));
        let v: [i64; 4] = scr.coeffs_i64().expect("fits").try_into().expect("len");
        let (g, reduced) = cubic_reduce_exact(v).expect("reduces");
        assert!(cubic_is_reduced(reduced[0], reduced[1], reduced[2], reduced[3]));
        assert_eq!(scr.act(&g), form(&reduced));
    }

    #[test]
    fn quad_reduced_test_cases() {
        assert!(quad_is_reduced(1, 0, 1));
        assert!(quad_is_reduced(1, 1, 1));
        assert!(quad_is_reduced(-1, 0, -1)); // negative definite mirror
        assert!(!quad_is_reduced(1, 4, 5));
        assert!(!quad_is_reduced(1, 0, -1)); // indefinite
        assert!(!quad_is_reduced(3, 1, 2)); // a > c
    }

    #[test]
    fn quad_exact_reduction_matches_float_route() {
        let (g, reduced) = quad_reduce_exact([1, 4, 5]).expect("reduces");
        assert_eq!(reduced, [1, 0, 1]);
        assert_eq!(form(&[1, 4, 5]).act(&g), form(&[1, 0, 1]));
        // The negative-definite mirror reduces with the same matrix.
        let (gn, red_neg) = quad_reduce_exact([-1, -4, -5]).expect("reduces");
        assert_eq!(red_neg, [-1, 0, -1]);
        assert_eq!(gn.entries(), g.entries());

        // A scrambled definite quadratic round-trips through the action.
        let base = form(&[3, 1, 5]);
        let scr = base.act(&UnimodularMap::new(4, 1, 3, 1));
        let v: [i64; 3] = scr.coeffs_i64().expect("fits").try_into().expect("len");
        let (gs, red) = quad_reduce_exact(v).expect("reduces");
        assert!(quad_is_reduced(red[0], red[1], red[2]));
        assert_eq!(scr.act(&gs), form(&red));
        assert!(quad_reduce_exact([1, 0, -1]).is_none()); // indefinite
    }
}
