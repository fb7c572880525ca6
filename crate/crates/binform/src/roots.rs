//! Simultaneous root finding for real polynomials.
//!
//! The solver is the Aberth-Ehrlich iteration: all roots are tracked at
//! once, each receiving a Newton step corrected for the repulsion of the
//! other iterates. It is quadratically convergent near simple roots and
//! needs no per-degree special cases, so every degree goes through the same
//! code path and the accuracy model is uniform.
//!
//! Forms with genuinely repeated (or nearly repeated) roots are outside the
//! scope of the invariant theory implemented here; they are reported as
//! [`Error::Degenerate`] rather than returned with low accuracy.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::form::RealForm;

/// Relative root separation below which a polynomial is treated as having
/// a repeated root.
pub const DEGENERATE_SEPARATION: f64 = 1e-8;

/// Convergence threshold for the simultaneous iteration, relative to the
/// root inclusion radius.
const STEP_TOLERANCE: f64 = 1e-14;

/// Backward-error threshold for accepting a computed root.
const RESIDUAL_TOLERANCE: f64 = 1e-10;

const MAX_ITERATIONS: u32 = 300;

/// The roots of a dehomogenized form, with conjugate symmetry enforced.
#[derive(Debug, Clone)]
pub struct RootSet {
    /// All `n` complex roots, sorted by real part, then imaginary part.
    /// Real roots have imaginary part exactly zero.
    pub roots: Vec<Complex64>,
    /// Cauchy inclusion radius `1 + max |a_i / a_0|` used for scaling.
    pub radius: f64,
    /// Number of roots on the real axis.
    pub real_count: usize,
}

impl RootSet {
    /// Signature `(r, k)`: `r` real roots and `k` conjugate pairs.
    pub fn signature(&self) -> (usize, usize) {
        (self.real_count, (self.roots.len() - self.real_count) / 2)
    }

    /// Smallest pairwise distance between distinct roots.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                best = best.min((self.roots[i] - self.roots[j]).norm());
            }
        }
        best
    }
}

/// Roots of `f(x, 1)` for a form with nonzero leading coefficient.
pub fn roots(f: &RealForm) -> Result<RootSet> {
    roots_of(f.coeffs())
}

/// As [`roots`], taking the raw coefficient slice `[a0, ..., an]`.
pub fn roots_of(coeffs: &[f64]) -> Result<RootSet> {
    let n = coeffs.len() - 1;
    if coeffs[0] == 0.0 {
        return Err(Error::LeadingZero);
    }
    if n < 1 {
        return Err(Error::InvalidSpec("degree must be at least one".into()));
    }

    let radius = 1.0
        + coeffs[1..]
            .iter()
            .map(|c| (c / coeffs[0]).abs())
            .fold(0.0, f64::max);

    // Starting points on the inclusion circle, rotated off the axes so a
    // symmetric root configuration cannot trap the iteration.
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.7;
            radius * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() == 0.0 {
                // Stationary point of p: nudge off it instead of dividing.
                Complex64::new(1e-8 * radius, 1e-8 * radius)
            } else {
                p / dp
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    repulsion += 1.0 / (z[i] - z[j]);
                }
            }
            let denom = 1.0 - w * repulsion;
            let step = if denom.norm() > 1e-12 { w / denom } else { w };
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < STEP_TOLERANCE * radius {
            break;
        }
    }
    // The step-size break above is only a cheap early exit. Near clustered
    // roots the sweep can stagnate at the rounding floor without ever
    // passing an absolute step test, yet the iterates are already as good
    // as the arithmetic allows; acceptance is therefore decided below by
    // backward error after polishing, not by how the sweep stopped.

    // A couple of plain Newton steps to polish each root independently.
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = eval_with_derivative(coeffs, *zi);
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }

    // Repeated roots are outside the supported domain.
    let mut min_sep = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            min_sep = min_sep.min((z[i] - z[j]).norm());
        }
    }
    if n > 1 && min_sep < DEGENERATE_SEPARATION * radius {
        return Err(Error::Degenerate {
            separation: min_sep / radius,
        });
    }

    // Backward error check: |p(z)| should be tiny against the coefficient
    // magnitude at that point.
    for &zi in &z {
        let (p, _) = eval_with_derivative(coeffs, zi);
        let m = zi.norm().max(1.0);
        let mut scale = 0.0;
        let mut mp = 1.0;
        for c in coeffs.iter().rev() {
            scale += c.abs() * mp;
            mp *= m;
        }
        if p.norm() > RESIDUAL_TOLERANCE * scale {
            return Err(Error::NoConvergence {
                iterations,
                gradient_norm: p.norm() / scale,
                last_point: (zi.re, zi.im),
            });
        }
    }

    // Any root this close to the axis has no conjugate partner (that would
    // have tripped the separation check), so it is genuinely real.
    let snap = 0.5 * DEGENERATE_SEPARATION * radius;
    for zi in z.iter_mut() {
        if zi.im.abs() <= snap {
            zi.im = 0.0;
        }
    }

    symmetrize_pairs(&mut z);

    z.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite roots compare")
    });
    let real_count = z.iter().filter(|r| r.im == 0.0).count();
    Ok(RootSet {
        roots: z,
        radius,
        real_count,
    })
}

/// Averages each root with the conjugate of its partner so the returned set
/// is exactly closed under conjugation.
fn symmetrize_pairs(z: &mut [Complex64]) {
    let upper: Vec<usize> = (0..z.len()).filter(|&i| z[i].im > 0.0).collect();
    let lower: Vec<usize> = (0..z.len()).filter(|&i| z[i].im < 0.0).collect();
    if upper.len() != lower.len() {
        return; // noise defeated the pairing; leave the roots as computed
    }
    let mut used = vec![false; lower.len()];
    for &i in &upper {
        let mut best: Option<(usize, f64)> = None;
        for (t, &j) in lower.iter().enumerate() {
            if used[t] {
                continue;
            }
            let d = (z[i] - z[j].conj()).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((t, d));
            }
        }
        if let Some((t, _)) = best {
            used[t] = true;
            let avg = 0.5 * (z[i] + z[lower[t]].conj());
            z[i] = avg;
            z[lower[t]] = avg.conj();
        }
    }
}

/// Horner evaluation of the polynomial and its derivative.
#[inline]
fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_form(v: &[f64]) -> RealForm {
        RealForm::new(v.to_vec()).expect("valid form")
    }

    #[test]
    fn quadratic_conjugate_pair() {
        // x^2 + 4x + 5 has roots -2 +/- i.
        let r = roots(&real_form(&[1.0, 4.0, 5.0])).expect("roots");
        assert_eq!(r.signature(), (0, 1));
        assert!((r.roots[0] - Complex64::new(-2.0, -1.0)).norm() < 1e-12);
        assert!((r.roots[1] - Complex64::new(-2.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn cubic_three_real() {
        // x^3 - x = x(x-1)(x+1).
        let r = roots(&real_form(&[1.0, 0.0, -1.0, 0.0])).expect("roots");
        assert_eq!(r.signature(), (3, 0));
        let expect = [-1.0, 0.0, 1.0];
        for (root, want) in r.roots.iter().zip(expect) {
            assert!((root - Complex64::new(want, 0.0)).norm() < 1e-12);
            assert_eq!(root.im, 0.0);
        }
    }

    #[test]
    fn sextic_mixed_signature() {
        // (x^2+1)(x^2+4)(x-3)(x+2) has two real roots and two pairs.
        // Expanded: (x^4+5x^2+4)(x^2-x-6)
        let c = [1.0, -1.0, -1.0, -5.0, -26.0, -4.0, -24.0];
        let r = roots_of(&c).expect("roots");
        assert_eq!(r.signature(), (2, 2));
        let imags: Vec<f64> = r.roots.iter().map(|z| z.im).filter(|i| *i > 0.0).collect();
        let mut sorted = imags.clone();
        sorted.sort_by(f64::total_cmp);
        assert!((sorted[0] - 1.0).abs() < 1e-10);
        assert!((sorted[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn repeated_root_is_degenerate() {
        let err = roots(&real_form(&[1.0, 2.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::Degenerate { .. }));
    }

    #[test]
    fn leading_zero_rejected() {
        assert_eq!(
            roots(&real_form(&[0.0, 1.0, 1.0])).unwrap_err(),
            Error::LeadingZero
        );
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        let r = roots_of(&[2.0, 1.0, 3.0, -1.0, 5.0]).expect("roots");
        for z in &r.roots {
            if z.im != 0.0 {
                assert!(r.roots.iter().any(|w| *w == z.conj()));
            }
        }
    }

    #[test]
    fn scaled_coefficients_keep_roots() {
        let a = roots_of(&[1.0, -2.0, 2.0, 7.0]).expect("roots");
        let b = roots_of(&[10.0, -20.0, 20.0, 70.0]).expect("roots");
        for (x, y) in a.roots.iter().zip(&b.roots) {
            assert!((x - y).norm() < 1e-10);
        }
    }
}
