//! A-priori coefficient boxes for reduced forms of bounded invariant.
//!
//! Everything here follows from three elementary facts about the minimizer
//! `z0 = (t0, u0)` of a reduced form `f` (so `z0` lies in the standard
//! fundamental domain) with roots `alpha_j` and `theta = theta(f)`:
//!
//! 1. The stationarity condition in `u` reads
//!    `sum_j u0^2 / D_j = n / 2` with
//!    `D_j = (t0 - Re alpha_j)^2 + (Im alpha_j)^2 + u0^2`.
//!    By the arithmetic-geometric mean inequality,
//!    `prod_j D_j >= (2 u0^2)^n`, and since `u0 >= sqrt(3)/2` in the
//!    fundamental domain,
//!
//!    ```text
//!    theta = a0^2 prod_j D_j / u0^n >= a0^2 (2 u0)^n >= a0^2 3^(n/2),
//!    ```
//!
//!    giving `a0^2 <= theta / 3^(n/2)` (sharp: the quadratic
//!    `a x^2 + a x y + a y^2` attains it), and read the other way,
//!    `u0^n <= theta / (2^n a0^2)`.
//!
//! 2. For `z0` in the fundamental domain,
//!    `D_j >= |alpha_j|^2 - |Re alpha_j| + |z0|^2 >= (|alpha_j|^2 + 1)/2`.
//!    Isolating one root and applying the mean inequality to the others
//!    (their stationarity sum is at most `n/2`) gives
//!
//!    ```text
//!    |alpha_i|^2 + 1 <= c(n) * theta / a0^2,
//!    c(n) = 3 n^(n-1) / ((n-1)^(n-1) 3^(n/2)),
//!    ```
//!
//!    a root radius once `a0` is fixed.
//!
//! 3. Coefficients are `a_k = ± a0 e_k(alpha)`; Cauchy-Schwarz over the
//!    `binom(n, k)` monomials of `e_k` and
//!    `prod_j (1 + |alpha_j|^2) <= prod_j 2 D_j <= theta^2 / a0^4`
//!    (combining 1 and 2) give
//!
//!    ```text
//!    |a_k| <= |a0| binom(n,k) r^k      (r the root radius), and
//!    |a_k| <= sqrt(binom(n,k)) theta / |a0|.
//!    ```
//!
//! The box used everywhere is the minimum of the two: the first is tight
//! for small `|a0|`, the second caps the blow-up of `r^k` as `a0 -> 0`.
//! These bounds hold for every reduced form with `theta(f) <= X`; they are
//! deliberately not tight, and enumeration re-tests every candidate
//! exactly.

use crate::error::{Error, Result};

/// Coefficient windows for reduced forms of degree `n` with invariant at
/// most `x`.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationBounds {
    n: usize,
    x: f64,
}

/// Binomial coefficient as f64, exact for the small arguments used here.
fn binom_f(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut v = 1.0;
    for i in 0..k {
        v = v * ((n - i) as f64) / ((i + 1) as f64);
    }
    v
}

impl EnumerationBounds {
    pub fn new(n: usize, x: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec("bounds need degree at least two".into()));
        }
        if !(x > 0.0) {
            return Err(Error::InvalidSpec("invariant bound must be positive".into()));
        }
        Ok(EnumerationBounds { n, x })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// The constant `c(n)` of the root-radius bound.
    pub fn root_constant(&self) -> f64 {
        let n = self.n as f64;
        3.0 * n.powi(self.n as i32 - 1)
            / ((n - 1.0).powi(self.n as i32 - 1) * 3f64.powf(n / 2.0))
    }

    /// Largest possible `|a0|` of a reduced form with invariant <= x.
    pub fn a0_max(&self) -> i64 {
        let v = (self.x / 3f64.powf(self.n as f64 / 2.0)).sqrt();
        (v + 1e-9).floor() as i64
    }

    /// Radius bound on every root of a reduced form with leading
    /// coefficient `a0`: from `|alpha|^2 + 1 <= c(n) x / a0^2`.
    pub fn root_radius(&self, a0: i64) -> f64 {
        debug_assert!(a0 != 0);
        let a2 = (a0 as f64) * (a0 as f64);
        (self.root_constant() * self.x / a2 - 1.0).max(0.0).sqrt()
    }

    /// Bound on `|a_k|` (1 <= k <= n) with leading coefficient `a0`.
    pub fn coeff_bound(&self, k: usize, a0: i64) -> i64 {
        (self.coeff_bound_real(k, a0.unsigned_abs() as f64) + 1e-9).floor() as i64
    }

    /// Real-valued version of [`coeff_bound`] used by the sampling code.
    pub fn coeff_bound_real(&self, k: usize, a0_abs: f64) -> f64 {
        debug_assert!((1..=self.n).contains(&k) && a0_abs > 0.0);
        let c = binom_f(self.n, k);
        let r2 = (self.root_constant() * self.x / (a0_abs * a0_abs) - 1.0).max(0.0);
        let power = a0_abs * c * r2.powf(k as f64 / 2.0);
        let product = c.sqrt() * self.x / a0_abs;
        power.min(product)
    }

    /// Upper bound of `coeff_bound_real(k, ·)` over `a0_abs` in
    /// `[lo, hi]`, used for per-stratum sampling boxes. Each of the two
    /// branches is bounded by its monotone envelope: the power branch by
    /// `hi * binom * r(lo)^k`, the product branch by its value at `lo`.
    pub fn stratum_coeff_sup(&self, k: usize, lo: f64, hi: f64) -> f64 {
        debug_assert!(0.0 < lo && lo <= hi);
        let c = binom_f(self.n, k);
        let r2 = (self.root_constant() * self.x / (lo * lo) - 1.0).max(0.0);
        let power = hi * c * r2.powf(k as f64 / 2.0);
        let product = c.sqrt() * self.x / lo;
        power.min(product)
    }

    /// The full coefficient box `[coeff_bound(1), ..., coeff_bound(n)]`.
    pub fn coeff_box(&self, a0: i64) -> Vec<i64> {
        (1..=self.n).map(|k| self.coeff_bound(k, a0)).collect()
    }

    /// Whether an integer coefficient vector `[a0, ..., an]` lies inside
    /// the box (a necessary condition for being reduced with invariant
    /// <= x; never sufficient).
    pub fn contains(&self, coeffs: &[i64]) -> bool {
        debug_assert_eq!(coeffs.len(), self.n + 1);
        let a0 = coeffs[0];
        if a0 == 0 || a0.abs() > self.a0_max() {
            return false;
        }
        (1..=self.n).all(|k| coeffs[k].abs() <= self.coeff_bound(k, a0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bounds_are_sharp_enough() {
        // theta = |b^2 - 4ac| for definite quadratics; x = 12 admits
        // a x^2 + a x y + a y^2 with a = 2 (theta = 3 a^2 = 12).
        let b = EnumerationBounds::new(2, 12.0).expect("bounds");
        assert_eq!(b.a0_max(), 2);
        assert!(b.contains(&[2, 2, 2]));
        assert!(b.contains(&[1, 0, 1]));
        assert!(b.contains(&[1, 1, 3])); // theta = 11
    }

    #[test]
    fn cubic_bounds_contain_known_reduced_forms() {
        // x^3 - 3 x y^2 is reduced with theta = 16: roots 0, +-sqrt(3).
        let b = EnumerationBounds::new(3, 16.5).expect("bounds");
        assert!(b.contains(&[1, 0, -3, 0]));
        let r = b.root_radius(1);
        assert!(r * r >= 3.0, "radius bound {r} must cover sqrt(3)");
        // The cyclic cubic x^3 + x^2 y - 2 x y^2 - y^3 has theta ~ 10.8.
        assert!(b.contains(&[1, 1, -2, -1]));
    }

    #[test]
    fn constants_match_hand_values() {
        let b2 = EnumerationBounds::new(2, 1.0).expect("bounds");
        assert!((b2.root_constant() - 2.0).abs() < 1e-12);
        let b3 = EnumerationBounds::new(3, 1.0).expect("bounds");
        assert!((b3.root_constant() - 27.0 / (4.0 * 27f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn stratum_sup_dominates_pointwise_values() {
        let b = EnumerationBounds::new(3, 500.0).expect("bounds");
        for k in 1..=3 {
            let (lo, hi) = (1.0, 2.0);
            let sup = b.stratum_coeff_sup(k, lo, hi);
            for i in 0..=20 {
                let a = lo + (hi - lo) * (i as f64) / 20.0;
                assert!(b.coeff_bound_real(k, a) <= sup + 1e-9);
            }
        }
    }

    #[test]
    fn degenerate_parameters_rejected() {
        assert!(EnumerationBounds::new(1, 10.0).is_err());
        assert!(EnumerationBounds::new(3, 0.0).is_err());
    }
}
