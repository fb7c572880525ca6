//! Integer 2x2 matrices of determinant one and their actions.
//!
//! A [`UnimodularMap`] is an element of SL2(Z). It acts on a binary form by
//! linear substitution of the variables (see `Form::act`), on the roots of
//! the dehomogenized polynomial by a Mobius map, and on the upper half plane
//! by the inverse Mobius map; the three actions are compatible, which is
//! what makes reduction by moving a marked point into a fundamental domain
//! work.
//!
//! Conventions used throughout the crate, for `g = [[a, b], [c, d]]`:
//!
//! * substitution: `(g . f)(x, y) = f(a x + c y, b x + d y)`;
//! * root image: a root `beta` of `g . f` satisfies
//!   `moebius(g, beta) = (a beta + c) / (b beta + d)`, which is a root of
//!   `f`;
//! * half-plane action: marked points move by
//!   `half_plane(g, w) = (d w - c) / (-b w + a)`, the Mobius map of the
//!   inverse matrix, so that the marked point of `g . f` is the image of
//!   the marked point of `f`.
//!
//! With these conventions `half_plane(g1 * g2, w) =
//! half_plane(g1, half_plane(g2, w))`: accumulating reduction steps means
//! multiplying new step matrices on the left.

use num_complex::Complex64;

/// An element of SL2(Z), stored row-major as `[[a, b], [c, d]]`.
///
/// Entries are `i64`; compositions are computed in `i128` and panic if a
/// resulting entry leaves the `i64` range (far beyond anything produced by
/// reduction, whose matrix entries are bounded by the coefficient size).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnimodularMap {
    m: [[i64; 2]; 2],
}

impl UnimodularMap {
    /// Builds `[[a, b], [c, d]]`, panicking unless `a d - b c = 1`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::try_new(a, b, c, d).unwrap_or_else(|| {
            panic!("matrix [[{a}, {b}], [{c}, {d}]] does not have determinant 1")
        })
    }

    /// Builds `[[a, b], [c, d]]` if the determinant is one.
    pub fn try_new(a: i64, b: i64, c: i64, d: i64) -> Option<Self> {
        let det = (a as i128) * (d as i128) - (b as i128) * (c as i128);
        if det == 1 {
            Some(UnimodularMap { m: [[a, b], [c, d]] })
        } else {
            None
        }
    }

    /// The identity map.
    pub fn identity() -> Self {
        UnimodularMap { m: [[1, 0], [0, 1]] }
    }

    /// Minus the identity; acts trivially on even-degree forms and by
    /// negation on odd-degree forms.
    pub fn neg_identity() -> Self {
        UnimodularMap { m: [[-1, 0], [0, -1]] }
    }

    /// The inversion `s = [[0, -1], [1, 0]]`; on the half plane it sends
    /// `w` to `-1/w`.
    pub fn s() -> Self {
        UnimodularMap { m: [[0, -1], [1, 0]] }
    }

    /// The translation step whose half-plane action is `w -> w - 1`.
    pub fn u() -> Self {
        UnimodularMap { m: [[1, 0], [1, 1]] }
    }

    /// The map whose half-plane action is `w -> w + k`.
    pub fn translation(k: i64) -> Self {
        UnimodularMap { m: [[1, 0], [-k, 1]] }
    }

    /// Row-major entries `[[a, b], [c, d]]`.
    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.m
    }

    #[inline]
    pub fn a(&self) -> i64 {
        self.m[0][0]
    }

    #[inline]
    pub fn b(&self) -> i64 {
        self.m[0][1]
    }

    #[inline]
    pub fn c(&self) -> i64 {
        self.m[1][0]
    }

    #[inline]
    pub fn d(&self) -> i64 {
        self.m[1][1]
    }

    /// The inverse `[[d, -b], [-c, a]]`.
    pub fn inverse(&self) -> Self {
        UnimodularMap {
            m: [[self.d(), -self.b()], [-self.c(), self.a()]],
        }
    }

    /// Matrix product `self * other`, with overflow checks.
    pub fn compose(&self, other: &Self) -> Self {
        let p = |i: usize, j: usize| -> i64 {
            let v = (self.m[i][0] as i128) * (other.m[0][j] as i128)
                + (self.m[i][1] as i128) * (other.m[1][j] as i128);
            i64::try_from(v).expect("matrix entry overflow in composition")
        };
        UnimodularMap {
            m: [[p(0, 0), p(0, 1)], [p(1, 0), p(1, 1)]],
        }
    }

    /// `self` raised to a (possibly negative) integer power.
    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut out = Self::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    /// The Mobius map `w -> (a w + c) / (b w + d)` that sends roots of
    /// `self . f` to roots of `f`.
    pub fn moebius(&self, w: Complex64) -> Complex64 {
        let a = self.a() as f64;
        let b = self.b() as f64;
        let c = self.c() as f64;
        let d = self.d() as f64;
        (a * w + c) / (b * w + d)
    }

    /// The half-plane action `w -> (d w - c) / (-b w + a)`. Preserves the
    /// upper half plane and satisfies
    /// `half_plane(g1 * g2, w) = half_plane(g1, half_plane(g2, w))`.
    pub fn half_plane(&self, w: Complex64) -> Complex64 {
        self.inverse().moebius(w)
    }

    /// Largest absolute value of an entry; useful as a crude size measure.
    pub fn max_entry(&self) -> i64 {
        self.m
            .iter()
            .flatten()
            .map(|e| e.abs())
            .max()
            .expect("two-by-two matrix has entries")
    }
}

impl std::fmt::Debug for UnimodularMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a(),
            self.b(),
            self.c(),
            self.d()
        )
    }
}

impl std::fmt::Display for UnimodularMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn generator_relations() {
        let s = UnimodularMap::s();
        assert_eq!(s.compose(&s), UnimodularMap::neg_identity());
        // u*s has trace -1, hence order three.
        let us = UnimodularMap::u().compose(&s);
        assert_eq!(us.pow(3), UnimodularMap::identity());
        // s*u^-1 has trace +1, hence order six.
        let g = s.compose(&UnimodularMap::u().inverse());
        assert_eq!(g.pow(3), UnimodularMap::neg_identity());
        assert_eq!(g.pow(6), UnimodularMap::identity());
    }

    #[test]
    fn inverse_cancels() {
        let g = UnimodularMap::new(3, 2, 4, 3);
        assert_eq!(g.compose(&g.inverse()), UnimodularMap::identity());
        assert_eq!(g.inverse().compose(&g), UnimodularMap::identity());
    }

    #[test]
    fn half_plane_generators() {
        let w = Complex64::new(0.3, 1.7);
        let u = UnimodularMap::u();
        assert!(close(u.half_plane(w), w - 1.0));
        assert!(close(
            UnimodularMap::translation(5).half_plane(w),
            w + 5.0
        ));
        let s = UnimodularMap::s();
        assert!(close(s.half_plane(w), -1.0 / w));
    }

    #[test]
    fn half_plane_is_left_action() {
        let g1 = UnimodularMap::new(2, 1, 1, 1);
        let g2 = UnimodularMap::new(1, -3, 0, 1);
        let w = Complex64::new(-0.4, 0.9);
        let lhs = g1.compose(&g2).half_plane(w);
        let rhs = g1.half_plane(g2.half_plane(w));
        assert!(close(lhs, rhs));
    }

    #[test]
    fn half_plane_preserves_upper_half_plane() {
        let g = UnimodularMap::new(5, 3, 3, 2);
        let w = Complex64::new(0.125, 0.01);
        assert!(g.half_plane(w).im > 0.0);
    }

    #[test]
    fn rotation_fixes_corner() {
        // u * s has order three on the half plane and fixes the corner
        // (-1/2, sqrt(3)/2) of the standard fundamental domain.
        let us = UnimodularMap::u().compose(&UnimodularMap::s());
        let rho = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        assert!(close(us.half_plane(rho), rho));
    }
}
