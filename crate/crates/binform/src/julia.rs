//! The Julia invariant: a hyperbolic minimization attached to a binary form.
//!
//! For a degree-`n` form `f` with nonzero leading coefficient and roots
//! `alpha_1, ..., alpha_n` (listed with conjugates), define for a point
//! `z = t + i u` of the upper half plane
//!
//! ```text
//! phi_f(z) = a0^2 * prod_j ((t - Re alpha_j)^2 + (Im alpha_j)^2 + u^2) / u^n.
//! ```
//!
//! Each factor is `|z - alpha_j| * |z - conj(alpha_j)|` combined, so
//! `phi_f` is invariant under simultaneously mapping the roots and `z` by a
//! real Mobius transformation of determinant one. When no real point (and
//! not infinity) carries half the root mass, `phi_f` is strictly convex in
//! the hyperbolic sense and attains a unique interior minimum.
//!
//! * the minimum value is the invariant `theta(f)`;
//! * the minimizer `z(f)` is the *representative point* of the form, and
//!   moves equivariantly under the SL2(Z) substitution action — that is the
//!   basis of reduction (see the `reduce` module);
//! * the positive quadratic with root `z(f)`, scaled to discriminant `-4`
//!   — concretely `(1/u, -2t/u, (t^2 + u^2)/u)` — is the quadratic
//!   covariant of `f`.
//!
//! A dual description, used as an independent cross-check: by the
//! arithmetic-geometric mean inequality, for positive weights `s_j`,
//!
//! ```text
//! prod_j D_j(z)  =  min over s of  (sum_j s_j D_j(z))^n / (n^n prod_j s_j),
//! ```
//!
//! and `sum_j s_j D_j(z) = Q_s(t) + u^2 sum_j s_j` where
//! `Q_s(x) = sum_j s_j (x - alpha_j)(x - conj alpha_j)` is a real positive
//! quadratic. Minimizing over `z` first gives `sqrt(|disc Q_s|)`, so
//!
//! ```text
//! theta(f) = min over s of a0^2 |disc Q_s|^(n/2) / (n^n prod_j s_j),
//! ```
//!
//! a finite-dimensional convex problem over the weights solved by
//! [`theta_via_weights`]. The two routes share no code and agree to high
//! accuracy, which is one of the standing self-checks of the crate.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::form::RealForm;
use crate::roots::{self, RootSet};

/// Default gradient-norm tolerance for declaring the minimizer converged.
pub const DEFAULT_GRAD_TOL: f64 = 1e-10;

/// Iteration cap for the damped Newton minimization.
pub const MAX_NEWTON_ITERATIONS: u32 = 200;

/// Iteration cap for the weight-space descent.
const MAX_WEIGHT_ITERATIONS: u32 = 20_000;

/// A point `t + i u` of the upper half plane, `u > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub t: f64,
    pub u: f64,
}

impl HalfPlanePoint {
    pub fn new(t: f64, u: f64) -> Self {
        HalfPlanePoint { t, u }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.t, self.u)
    }

    /// Requires a point strictly above the real axis.
    pub fn from_complex(w: Complex64) -> Self {
        debug_assert!(w.im > 0.0, "half-plane point must have positive height");
        HalfPlanePoint { t: w.re, u: w.im }
    }

    /// Whether the point lies in the closed standard fundamental domain
    /// `|t| <= 1/2, t^2 + u^2 >= 1`, with a symmetric tolerance band.
    pub fn in_fundamental_domain(&self, tol: f64) -> bool {
        self.t.abs() <= 0.5 + tol && self.t * self.t + self.u * self.u >= 1.0 - tol
    }

    /// Hyperbolic distance to another point.
    pub fn distance(&self, other: &HalfPlanePoint) -> f64 {
        let dt = self.t - other.t;
        let du = self.u - other.u;
        let q = (dt * dt + du * du) / (2.0 * self.u * other.u);
        (1.0 + q + (q * (q + 2.0)).sqrt()).ln()
    }
}

/// Tuning knobs for the minimization.
#[derive(Debug, Clone, Copy)]
pub struct MinimizeParams {
    /// Stop once the gradient of the log objective is below this.
    pub grad_tol: f64,
    /// Give up (with diagnostics) after this many Newton iterations.
    pub max_iterations: u32,
}

impl Default for MinimizeParams {
    fn default() -> Self {
        MinimizeParams {
            grad_tol: DEFAULT_GRAD_TOL,
            max_iterations: MAX_NEWTON_ITERATIONS,
        }
    }
}

/// Converged output of the half-plane minimization.
#[derive(Debug, Clone, Copy)]
pub struct MinimizerOutcome {
    pub point: HalfPlanePoint,
    pub iterations: u32,
    pub gradient_norm: f64,
}

/// Invariant, representative point, and covariant of a form.
#[derive(Debug, Clone)]
pub struct JuliaResult {
    /// The minimum value `theta(f)`.
    pub theta: f64,
    /// The minimizing point `z(f)`.
    pub point: HalfPlanePoint,
    /// The quadratic covariant `(1/u, -2t/u, (t^2+u^2)/u)`: the positive
    /// real quadratic with root `z(f)` scaled to discriminant `-1` ... see
    /// [`covariant_quadratic`].
    pub covariant: [f64; 3],
    /// Newton iterations spent.
    pub iterations: u32,
    /// Final gradient norm of the log objective.
    pub gradient_norm: f64,
}

/// Value of `phi_f` at a given point, from precomputed roots.
pub fn objective(a0: f64, rs: &RootSet, p: HalfPlanePoint) -> f64 {
    let n = rs.roots.len() as i32;
    let mut prod = a0 * a0;
    for r in &rs.roots {
        let dt = p.t - r.re;
        prod *= dt * dt + r.im * r.im + p.u * p.u;
    }
    prod / p.u.powi(n)
}

/// Log of the objective, dropping the constant `2 ln |a0|`: the function
/// the Newton iteration actually minimizes.
fn log_objective(rs: &RootSet, t: f64, u: f64) -> f64 {
    let n = rs.roots.len() as f64;
    let mut acc = -n * u.ln();
    for r in &rs.roots {
        let dt = t - r.re;
        acc += (dt * dt + r.im * r.im + u * u).ln();
    }
    acc
}

/// Gradient and Hessian of the log objective.
fn derivatives(rs: &RootSet, t: f64, u: f64) -> ([f64; 2], [f64; 3]) {
    let n = rs.roots.len() as f64;
    let (mut gt, mut gu) = (0.0, 0.0);
    let (mut htt, mut htu, mut huu) = (0.0, 0.0, 0.0);
    for r in &rs.roots {
        let dt = t - r.re;
        let d = dt * dt + r.im * r.im + u * u;
        let d2 = d * d;
        gt += 2.0 * dt / d;
        gu += 2.0 * u / d;
        htt += 2.0 / d - 4.0 * dt * dt / d2;
        htu += -4.0 * dt * u / d2;
        huu += 2.0 / d - 4.0 * u * u / d2;
    }
    gu -= n / u;
    huu += n / (u * u);
    ([gt, gu], [htt, htu, huu])
}

/// Checks that no real point carries root mass `n/2` or more. Roots are
/// pairwise separated here (the root finder rejects repeated roots), so
/// every real root carries mass exactly one and the only failing case is a
/// quadratic with real roots.
fn check_stable(rs: &RootSet) -> Result<()> {
    let n = rs.roots.len();
    if n < 2 {
        return Err(Error::InvalidSpec(
            "the invariant needs degree at least two".into(),
        ));
    }
    if n == 2 && rs.real_count > 0 {
        return Err(Error::NotStable {
            detail: "a quadratic with a real root has no interior minimum".into(),
        });
    }
    Ok(())
}

/// Minimizes `phi_f` by damped Newton iteration with a backtracking line
/// search, starting from the root barycenter.
pub fn representative_point(rs: &RootSet, params: &MinimizeParams) -> Result<MinimizerOutcome> {
    check_stable(rs)?;

    // Robust starting point: the log-sum objective is insensitive to a
    // distant outlier root, so the initial height must be too. The
    // median real part and the median deviation track the dominant
    // cluster; for a single conjugate pair this is already the exact
    // minimum.
    let median = |xs: &mut Vec<f64>| -> f64 {
        xs.sort_unstable_by(f64::total_cmp);
        let m = xs.len() / 2;
        if xs.len() % 2 == 1 {
            xs[m]
        } else {
            0.5 * (xs[m - 1] + xs[m])
        }
    };
    let mut res: Vec<f64> = rs.roots.iter().map(|r| r.re).collect();
    let t0 = median(&mut res);
    let mut devs: Vec<f64> = rs
        .roots
        .iter()
        .map(|r| (r.re - t0).abs().max(r.im.abs()))
        .collect();
    let mut t = t0;
    let mut u = median(&mut devs).max(1e-3 * (1.0 + t0.abs()));

    let mut value = log_objective(rs, t, u);
    for iter in 1..=params.max_iterations {
        let (grad, hess) = derivatives(rs, t, u);
        let gnorm = (grad[0] * grad[0] + grad[1] * grad[1]).sqrt();
        if gnorm <= params.grad_tol {
            return Ok(MinimizerOutcome {
                point: HalfPlanePoint::new(t, u),
                iterations: iter - 1,
                gradient_norm: gnorm,
            });
        }

        let [htt, htu, huu] = hess;
        let det = htt * huu - htu * htu;
        let newton = det > 0.0 && htt > 0.0;
        let (mut dt, mut du) = if newton {
            // Newton direction on the positive definite Hessian.
            let d = (
                -(huu * grad[0] - htu * grad[1]) / det,
                -(htt * grad[1] - htu * grad[0]) / det,
            );
            // Predicted decrease for the full step. Once it falls below
            // the floating-point resolution of the objective no line
            // search can register progress: the iterate already sits at
            // the attainable minimum, even if the (tiny but nonzero)
            // gradient never reaches `grad_tol`.
            let predicted = -(grad[0] * d.0 + grad[1] * d.1);
            if predicted.abs() <= 8.0 * f64::EPSILON * (1.0 + value.abs()) {
                return Ok(MinimizerOutcome {
                    point: HalfPlanePoint::new(t, u),
                    iterations: iter,
                    gradient_norm: gnorm,
                });
            }
            d
        } else {
            // Fall back to steepest descent scaled to the local height.
            let s = u / (gnorm + 1.0);
            (-grad[0] * s, -grad[1] * s)
        };

        // Keep the iterate strictly inside the half plane.
        while u + du <= 0.25 * u {
            dt *= 0.5;
            du *= 0.5;
        }

        // Backtracking line search on the sufficient-decrease condition.
        let slope = grad[0] * dt + grad[1] * du;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let (nt, nu) = (t + lambda * dt, u + lambda * du);
            if nu > 0.0 {
                let nv = log_objective(rs, nt, nu);
                if nv <= value + 1e-4 * lambda * slope {
                    t = nt;
                    u = nu;
                    value = nv;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            // The step is numerically exhausted; report the state honestly.
            return Err(Error::NoConvergence {
                iterations: iter,
                gradient_norm: gnorm,
                last_point: (t, u),
            });
        }
    }

    let (grad, _) = derivatives(rs, t, u);
    let gnorm = (grad[0] * grad[0] + grad[1] * grad[1]).sqrt();
    if gnorm <= params.grad_tol {
        return Ok(MinimizerOutcome {
            point: HalfPlanePoint::new(t, u),
            iterations: params.max_iterations,
            gradient_norm: gnorm,
        });
    }
    Err(Error::NoConvergence {
        iterations: params.max_iterations,
        gradient_norm: gnorm,
        last_point: (t, u),
    })
}

/// Invariant, representative point, and covariant of a real form, with
/// default tolerances.
pub fn julia_invariant(f: &RealForm) -> Result<JuliaResult> {
    invariant_of(f.coeffs(), &MinimizeParams::default())
}

/// As [`julia_invariant`] with explicit parameters.
pub fn julia_invariant_with(f: &RealForm, params: &MinimizeParams) -> Result<JuliaResult> {
    invariant_of(f.coeffs(), params)
}

/// Slice-based entry point used by the enumeration hot paths.
pub fn invariant_of(coeffs: &[f64], params: &MinimizeParams) -> Result<JuliaResult> {
    let rs = roots::roots_of(coeffs)?;
    let outcome = representative_point(&rs, params)?;
    let p = outcome.point;
    let theta = objective(coeffs[0], &rs, p);
    Ok(JuliaResult {
        theta,
        point: p,
        covariant: covariant_at(p),
        iterations: outcome.iterations,
        gradient_norm: outcome.gradient_norm,
    })
}

/// The quadratic covariant `(A, B, C)` determined by the representative
/// point: the unique positive quadratic `A x^2 + B x y + C y^2` with root
/// `z(f)` normalized so that `B^2 - 4 A C = -4`, i.e.
/// `(1/u, -2t/u, (t^2 + u^2)/u)`.
pub fn covariant_at(p: HalfPlanePoint) -> [f64; 3] {
    [
        1.0 / p.u,
        -2.0 * p.t / p.u,
        (p.t * p.t + p.u * p.u) / p.u,
    ]
}

/// The quadratic covariant of a form (see [`covariant_at`]).
pub fn covariant_quadratic(f: &RealForm) -> Result<[f64; 3]> {
    Ok(julia_invariant(f)?.covariant)
}

/// Value of `phi_f` at the distinguished point `i`, which simplifies to
/// `a0^2 prod_j (|alpha_j|^2 + 1)`; no minimization involved.
pub fn julia_at_i(f: &RealForm) -> Result<f64> {
    let rs = roots::roots(f)?;
    let mut v = f.leading() * f.leading();
    for r in &rs.roots {
        v *= r.norm_sqr() + 1.0;
    }
    Ok(v)
}

/// Residuals of the first-order conditions for `i` to be the minimizer:
/// returns `(sum_j 1/(|a_j|^2+1) - n/2, sum_j -a_j/(|a_j|^2+1))` with the
/// complex second component as `(re, im)`. Both vanish exactly when
/// `z(f) = i`.
pub fn centered_conditions(f: &RealForm) -> Result<(f64, (f64, f64))> {
    let rs = roots::roots(f)?;
    let n = rs.roots.len() as f64;
    let mut mass = 0.0;
    let mut moment = Complex64::new(0.0, 0.0);
    for r in &rs.roots {
        let w = 1.0 / (r.norm_sqr() + 1.0);
        mass += w;
        moment -= r * w;
    }
    Ok((mass - n / 2.0, (moment.re, moment.im)))
}

/// Computes `theta(f)` through the dual weight problem described in the
/// module docs: minimize `a0^2 |disc Q_s|^(n/2) / (n^n prod s_j)` over
/// positive weights `s`, one per root. Returns the minimum and the optimal
/// weights normalized to product one (ordered like the sorted roots).
///
/// This shares no iteration code with [`julia_invariant`] and serves as an
/// independent check of it.
pub fn theta_via_weights(f: &RealForm) -> Result<(f64, Vec<f64>)> {
    let rs = roots::roots(f)?;
    check_stable(&rs)?;
    let n = rs.roots.len();
    let nf = n as f64;

    // Work in x_j = ln s_j. The objective
    //     W(x) = (n/2) ln |disc Q_s| - sum_j x_j
    // is invariant under adding a constant to all x_j, smooth, and bounded
    // below exactly when the form is stable.
    let a: Vec<f64> = rs.roots.iter().map(|r| r.re).collect();
    let m: Vec<f64> = rs.roots.iter().map(|r| r.norm_sqr()).collect();

    let qd = |s: &[f64]| -> (f64, f64, f64, f64) {
        // Q_s = A x^2 + B x + C; returns (A, B, C, disc).
        let mut aa = 0.0;
        let mut bb = 0.0;
        let mut cc = 0.0;
        for j in 0..n {
            aa += s[j];
            bb -= 2.0 * s[j] * a[j];
            cc += s[j] * m[j];
        }
        (aa, bb, cc, bb * bb - 4.0 * aa * cc)
    };

    let w_value = |x: &[f64], s: &[f64]| -> f64 {
        let (_, _, _, d) = qd(s);
        0.5 * nf * (-d).ln() - x.iter().sum::<f64>()
    };

    let mut x = vec![0.0; n];
    let mut s = vec![1.0; n];
    let mut grad = vec![0.0; n];
    let mut prev_x: Vec<f64> = Vec::new();
    let mut prev_g: Vec<f64> = Vec::new();
    let mut value = w_value(&x, &s);
    let mut gnorm = f64::INFINITY;
    let mut iterations = 0;

    while iterations < MAX_WEIGHT_ITERATIONS {
        iterations += 1;
        let (aa, bb, cc, d) = qd(&s);
        // d < 0 for a stable configuration; the guard keeps the log valid
        // if the line search ever lands on a boundary configuration.
        if d >= 0.0 {
            return Err(Error::NotStable {
                detail: "degenerate weighted quadratic encountered".into(),
            });
        }
        for j in 0..n {
            let dd = 2.0 * bb * (-2.0 * a[j]) - 4.0 * (cc + aa * m[j]);
            grad[j] = 0.5 * nf * dd / d * s[j] - 1.0;
        }
        gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm <= 1e-11 * nf {
            break;
        }

        // Barzilai-Borwein step with a halving safeguard.
        let mut step = 0.05;
        if !prev_x.is_empty() {
            let mut num = 0.0;
            let mut den = 0.0;
            for j in 0..n {
                let dx = x[j] - prev_x[j];
                let dg = grad[j] - prev_g[j];
                num += dx * dg;
                den += dg * dg;
            }
            if den > 0.0 && num.abs() > 0.0 {
                step = (num / den).abs().clamp(1e-6, 10.0);
            }
        }
        prev_x = x.clone();
        prev_g = grad.clone();

        let mut accepted = false;
        for _ in 0..50 {
            let nx: Vec<f64> = (0..n).map(|j| x[j] - step * grad[j]).collect();
            let ns: Vec<f64> = nx.iter().map(|v| v.exp()).collect();
            let (_, _, _, nd) = qd(&ns);
            if nd < 0.0 {
                let nv = w_value(&nx, &ns);
                if nv <= value + 1e-12 * value.abs().max(1.0) {
                    x = nx;
                    s = ns;
                    value = nv;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break; // stationary to machine precision
        }
    }

    let (_, _, _, d) = qd(&s);
    if d >= 0.0 || !(gnorm <= 1e-6 * nf) {
        return Err(Error::NoConvergence {
            iterations,
            gradient_norm: gnorm,
            last_point: (0.0, 0.0),
        });
    }

    let a0 = f.leading();
    let prod: f64 = s.iter().product();
    let theta = a0 * a0 * (-d).powf(nf / 2.0) / (nf.powi(n as i32) * prod);

    // Normalize the reported weights to product one.
    let shift = x.iter().sum::<f64>() / nf;
    let weights: Vec<f64> = x.iter().map(|v| (v - shift).exp()).collect();
    Ok((theta, weights))
}
