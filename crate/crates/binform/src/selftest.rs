//! Built-in acceptance checks exercising the whole pipeline at desk scale.
//!
//! Ten named checks, each with pinned tolerances and a wall-clock budget,
//! covering: the closed forms of the invariant for definite quadratics
//! and totally real cubics, agreement of the census with the classical
//! reduced-forms count, growth exponents and leading constants of the
//! counting function, invariance and reduction consistency, coefficient
//! bounds, reducible shares, congruence-restricted densities, the
//! volume-versus-count comparison, and exhaustive cross-checks of the
//! fast enumeration lanes.
//!
//! The same checks back the `selftest` CLI subcommand and the acceptance
//! integration test; each returns a pass/fail verdict with a one-line
//! numeric summary and named metrics for downstream assertions.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::count::{
    self, count_series, gauss_class_count, log_grid, CongruenceSpec, CountReport,
    CUBIC_INVARIANT_RATIO,
};
use crate::error::Result;
use crate::form::{Form, RealForm};
use crate::julia::{self, MinimizeParams};
use crate::matrix::UnimodularMap;
use crate::reduce;
use crate::volume;

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    /// 1-based position in the suite.
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// One-line numeric summary of what was measured.
    pub detail: String,
    /// Named measurements for downstream assertions and reports.
    pub metrics: Vec<(&'static str, f64)>,
    pub seconds: f64,
}

/// Results of the full suite.
#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub results: Vec<CriterionResult>,
    pub all_passed: bool,
}

// Pinned tolerances and budgets. Budgets are generous for a single
// desktop core; exceeding one fails the check.
const QUAD_CASES: usize = 1000;
const QUAD_REL_TOL: f64 = 1e-8;
const QUAD_BUDGET_S: f64 = 10.0;
const CENSUS_MAX: i64 = 1000;
const CENSUS_BUDGET_S: f64 = 60.0;
const GROWTH_LO: f64 = 100.0;
const GROWTH_HI: f64 = 10_000.0;
const GROWTH_POINTS: usize = 12;
const SLOPE_TOL: f64 = 0.1;
const CHAT_REL_SPREAD: f64 = 0.10;
const GROWTH_BUDGET_S: f64 = 1800.0;
const SUITE_PAIRS: usize = 500;
const SUITE_INV_REL_TOL: f64 = 1e-8;
const SUITE_HOM_REL_TOL: f64 = 1e-10;
const SUITE_KEY_CASES: usize = 200;
const SUITE_TWO_PATH_CASES: usize = 100;
const SUITE_TWO_PATH_REL_TOL: f64 = 1e-6;
const SUITE_BUDGET_S: f64 = 120.0;
const CUBIC_CASES: usize = 200;
const CUBIC_RATIO_TOL: f64 = 1e-6;
const CUBIC_BUDGET_S: f64 = 30.0;
const BOUNDS_BUDGET_S: f64 = 10.0;
const SHARE_BUDGET_S: f64 = 10.0;
const MOD2_REL_WINDOW: f64 = 0.05;
const MOD2_BUDGET_S: f64 = 10.0;
const COMPARE_CAP: f64 = 1000.0;
const COMPARE_SAMPLES: u64 = 50_000_000;
const COMPARE_REL_WINDOW: f64 = 0.10;
const COMPARE_BUDGET_S: f64 = 600.0;
const EXACT_QUAD_CAP: f64 = 1000.0;
const EXACT_CUBIC_CAP: f64 = 200.0;
const EXACT_BUDGET_S: f64 = 600.0;

type CheckOutput = Result<(bool, String, Vec<(&'static str, f64)>)>;

fn timed<F>(id: usize, name: &'static str, budget_s: f64, f: F) -> CriterionResult
where
    F: FnOnce() -> CheckOutput,
{
    let t = Instant::now();
    let (mut passed, mut detail, metrics) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}"), Vec::new()),
    };
    let seconds = t.elapsed().as_secs_f64();
    if seconds > budget_s {
        passed = false;
        detail = format!("{detail}; exceeded the {budget_s:.0}s budget");
    }
    CriterionResult {
        id,
        name,
        passed,
        detail,
        metrics,
        seconds,
    }
}

/// Runs the whole suite. `seed` feeds every randomized check, so a fixed
/// seed reproduces the report bit for bit.
pub fn run_selftest(seed: u64) -> SelftestReport {
    run_selftest_with(seed, |_| {})
}

/// As [`run_selftest`], invoking `observe` on each result as the check
/// finishes (for progress reporting during the long checks).
pub fn run_selftest_with<F>(seed: u64, mut observe: F) -> SelftestReport
where
    F: FnMut(&CriterionResult),
{
    let mut results: Vec<CriterionResult> = Vec::with_capacity(10);
    let mut push = |results: &mut Vec<CriterionResult>, r: CriterionResult| {
        observe(&r);
        results.push(r);
    };
    push(
        &mut results,
        timed(
            1,
            "quadratic invariant equals |discriminant|",
            QUAD_BUDGET_S,
            || quadratic_closed_form(seed),
        ),
    );

    let mut quad_series: Option<CountReport> = None;
    push(
        &mut results,
        timed(
        2,
        "census matches the classical reduced-forms count",
        CENSUS_BUDGET_S,
        || {
            let grid: Vec<f64> = (1..=CENSUS_MAX).map(|k| k as f64).collect();
            let rep = count_series(2, 1, &grid, None)?;
            let out = classical_census_check(&rep);
            quad_series = Some(rep);
            out
        },
        ),
    );

    let mut quad_growth: Option<CountReport> = None;
    let mut cubic_growth: Option<CountReport> = None;
    push(
        &mut results,
        timed(
        3,
        "growth exponents and leading-constant stability",
        GROWTH_BUDGET_S,
        || {
            let grid = log_grid(GROWTH_LO, GROWTH_HI, GROWTH_POINTS);
            let qrep = count_series(2, 1, &grid, None)?;
            let mut cubic_grid = grid.clone();
            cubic_grid.push(1000.0);
            let spec = CongruenceSpec::coefficient_condition(3, 2, 3, 0)?;
            let crep = count_series(3, 0, &cubic_grid, Some(&spec))?;
            let out = growth_check(&qrep, &crep);
            quad_growth = Some(qrep);
            cubic_growth = Some(crep);
            out
        },
        ),
    );

    push(
        &mut results,
        timed(
        4,
        "invariance, homogeneity, and reduction consistency",
        SUITE_BUDGET_S,
        || invariance_suite(seed),
        ),
    );
    push(
        &mut results,
        timed(
        5,
        "cubic invariant proportional to sqrt(disc)",
        CUBIC_BUDGET_S,
        || cubic_ratio_check(seed),
        ),
    );
    push(
        &mut results,
        timed(
        6,
        "every enumerated class obeys the coefficient bounds",
        BOUNDS_BUDGET_S,
        || bounds_check(&quad_series, &quad_growth, &cubic_growth),
        ),
    );
    push(
        &mut results,
        timed(
        7,
        "reducible classes become negligible",
        SHARE_BUDGET_S,
        || reducible_share_check(&cubic_growth),
        ),
    );
    push(
        &mut results,
        timed(
        8,
        "restricted counts track the residue density",
        MOD2_BUDGET_S,
        || congruence_check(&cubic_growth),
        ),
    );
    push(
        &mut results,
        timed(
        9,
        "class counts track region volume",
        COMPARE_BUDGET_S,
        || volume_comparison(seed),
        ),
    );
    push(
        &mut results,
        timed(
        10,
        "fast enumeration matches exhaustive search",
        EXACT_BUDGET_S,
        exhaustive_cross_check,
        ),
    );

    let all_passed = results.iter().all(|r| r.passed);
    SelftestReport {
        results,
        all_passed,
    }
}

/// Two-sided relative deviation `|a/b - 1|` guarded against `b == 0`.
fn rel_dev(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (a / b - 1.0).abs()
    }
}

fn quadratic_closed_form(seed: u64) -> CheckOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA1);
    let params = MinimizeParams::default();
    let mut worst = 0.0f64;
    let mut done = 0usize;
    while done < QUAD_CASES {
        let a = rng.gen_range(-50i64..=50);
        let b = rng.gen_range(-50i64..=50);
        let c = rng.gen_range(-50i64..=50);
        let disc = b * b - 4 * a * c;
        if a == 0 || disc >= 0 {
            continue;
        }
        let jr = julia::invariant_of(&[a as f64, b as f64, c as f64], &params)?;
        let expect = disc.unsigned_abs() as f64;
        worst = worst.max(rel_dev(jr.theta, expect));
        done += 1;
    }
    Ok((
        worst <= QUAD_REL_TOL,
        format!(
            "worst relative error {worst:.2e} over {QUAD_CASES} definite quadratics \
             with |coefficients| <= 50 (tolerance {QUAD_REL_TOL:.0e})"
        ),
        vec![("worst_rel_error", worst)],
    ))
}

fn classical_census_check(rep: &CountReport) -> CheckOutput {
    let mut mismatches = 0u64;
    let mut first = None;
    for row in &rep.rows {
        let expect = gauss_class_count(row.x);
        let total = row.classes + row.reducible_classes;
        if total != expect {
            mismatches += 1;
            if first.is_none() {
                first = Some((row.x, total, expect));
            }
        }
    }
    let detail = match first {
        None => format!(
            "all {} integer caps up to {} agree exactly (final count {})",
            rep.rows.len(),
            CENSUS_MAX,
            rep.rows.last().map(|r| r.classes).unwrap_or(0)
        ),
        Some((x, got, want)) => format!(
            "{mismatches} caps disagree; first at cap {x}: counted {got}, classical {want}"
        ),
    };
    Ok((
        mismatches == 0,
        detail,
        vec![("mismatched_caps", mismatches as f64)],
    ))
}

/// Slope of the top-half-decade fit and the relative spread of the
/// leading constant over the same caps.
fn growth_stats(rep: &CountReport, exponent: f64) -> (Option<f64>, f64) {
    let hi = rep.rows.last().map(|r| r.x).unwrap_or(0.0);
    let cutoff = hi / 10f64.sqrt() * (1.0 - 1e-9);
    let mut cmin = f64::INFINITY;
    let mut cmax = 0.0f64;
    for row in rep.rows.iter().filter(|r| r.x >= cutoff) {
        let c = row.classes as f64 / row.x.powf(exponent);
        cmin = cmin.min(c);
        cmax = cmax.max(c);
    }
    let spread = if cmin > 0.0 && cmin.is_finite() {
        cmax / cmin - 1.0
    } else {
        f64::INFINITY
    };
    (rep.slope, spread)
}

fn growth_check(qrep: &CountReport, crep: &CountReport) -> CheckOutput {
    let (qslope, qspread) = growth_stats(qrep, 1.5);
    let (cslope, cspread) = growth_stats(crep, 2.0);
    let qs = qslope.unwrap_or(f64::NAN);
    let cs = cslope.unwrap_or(f64::NAN);
    let ok = (qs - 1.5).abs() <= SLOPE_TOL
        && (cs - 2.0).abs() <= SLOPE_TOL
        && qspread < CHAT_REL_SPREAD
        && cspread < CHAT_REL_SPREAD;
    Ok((
        ok,
        format!(
            "degree 2 slope {qs:.3} (want 1.5 +- {SLOPE_TOL}), constant spread {:.1}%; \
             degree 3 slope {cs:.3} (want 2.0 +- {SLOPE_TOL}), constant spread {:.1}% \
             over caps in [{GROWTH_LO:.0}, {GROWTH_HI:.0}]",
            qspread * 100.0,
            cspread * 100.0
        ),
        vec![
            ("quad_slope", qs),
            ("quad_constant_spread", qspread),
            ("cubic_slope", cs),
            ("cubic_constant_spread", cspread),
        ],
    ))
}

/// Draws a random integral form of degree 2..=4 for which reduction
/// succeeds (nondegenerate, stable, definite when quadratic).
fn random_stable_form(rng: &mut ChaCha8Rng) -> Result<Form> {
    for _ in 0..10_000 {
        let n = rng.gen_range(2usize..=4);
        let mut coeffs: Vec<i64> = (0..=n).map(|_| rng.gen_range(-12i64..=12)).collect();
        if coeffs[0] == 0 {
            coeffs[0] = 1 + rng.gen_range(0i64..=11);
        }
        if n == 2 && coeffs[1] * coeffs[1] - 4 * coeffs[0] * coeffs[2] >= 0 {
            continue;
        }
        let f = Form::from_i64(&coeffs)?;
        // Only irreducible forms enter the class-invariant checks: every
        // member of an irreducible class has a nonzero leading coefficient
        // (a vanishing one would exhibit a rational linear factor), so the
        // canonical representative is always defined for them.
        if !crate::factor::is_irreducible(&f)? {
            continue;
        }
        if reduce::reduce_form(&f).is_ok() {
            return Ok(f);
        }
    }
    Err(crate::error::Error::InvalidSpec(
        "could not sample a stable integral form".into(),
    ))
}

/// First-order bound on the relative error of the computed invariant of
/// `f`, given its minimizing point and a per-coefficient absolute error
/// `coeff_err` carried by the stored coefficients themselves. Each root
/// carries a backward error of about `(eps * S(alpha) + coeff_err *
/// P(|alpha|)) / |f'(alpha)|` (`S` the evaluation scale at the root, `P`
/// the power sum), and the invariant's log responds to a shift of root
/// `alpha` at rate `2 / |z - alpha|`. Unimodular substitutions readily
/// compress roots into clusters, pull the point toward the real axis, and
/// build image coefficients out of heavily canceling terms, so an image
/// form can be far worse conditioned than its source; pairs whose bound is
/// not comfortably below the comparison tolerance are re-sampled.
fn invariant_error_bound(f: &RealForm, point: julia::HalfPlanePoint, coeff_err: f64) -> f64 {
    let rs = match crate::roots::roots(f) {
        Ok(rs) => rs,
        Err(_) => return f64::INFINITY,
    };
    let c = f.coeffs();
    let z0 = num_complex::Complex64::new(point.t, point.u);
    let mut total = 0.0f64;
    for &z in &rs.roots {
        let m = z.norm();
        let mut scale = 0.0;
        let mut pmass = 0.0;
        let mut mp = 1.0;
        for cj in c.iter().rev() {
            scale += cj.abs() * mp;
            pmass += mp;
            mp *= m;
        }
        pmass += mp;
        let mut dp = num_complex::Complex64::new(0.0, 0.0);
        let mut pv = num_complex::Complex64::new(0.0, 0.0);
        for &cj in c.iter() {
            dp = dp * z + pv;
            pv = pv * z + cj;
        }
        let dpn = dp.norm();
        let dist = (z0 - z).norm();
        if !(dpn > 0.0 && dist > 0.0) {
            return f64::INFINITY;
        }
        total += 2.0 * (f64::EPSILON * scale + coeff_err * pmass) / dpn / dist;
    }
    total
}

/// Per-coefficient absolute rounding error of `f.act(g)` in doubles: every
/// image coefficient is a sum of terms bounded in total mass by
/// `sum_i |c_i| (|a|+|c|)^(n-i) (|b|+|d|)^i`, each rounding at most once.
fn act_coeff_err(f: &RealForm, g: &UnimodularMap) -> f64 {
    let n = f.degree();
    let ac = (g.a().abs() + g.c().abs()) as f64;
    let bd = (g.b().abs() + g.d().abs()) as f64;
    let mut w = 0.0f64;
    for (i, cj) in f.coeffs().iter().enumerate() {
        w += cj.abs() * ac.powi((n - i) as i32) * bd.powi(i as i32);
    }
    ((n + 1) * (n + 1)) as f64 * f64::EPSILON * w
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> UnimodularMap {
    let mut g = UnimodularMap::translation(rng.gen_range(-3i64..=3));
    for _ in 0..rng.gen_range(1usize..=3) {
        g = g.compose(&UnimodularMap::s());
        g = g.compose(&UnimodularMap::translation(rng.gen_range(-3i64..=3)));
    }
    g
}

fn invariance_suite(seed: u64) -> CheckOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB2);
    let params = MinimizeParams::default();
    let mut fails: Vec<String> = Vec::new();

    // Invariance of theta under the unimodular action, real coefficients.
    let mut worst_inv = 0.0f64;
    let mut done = 0;
    let mut attempts = 0;
    while done < SUITE_PAIRS && attempts < 40 * SUITE_PAIRS {
        attempts += 1;
        let n = rng.gen_range(2usize..=6);
        let mut coeffs: Vec<f64> = (0..=n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        if coeffs[0].abs() < 0.3 {
            coeffs[0] = 0.3 + rng.gen_range(0.0..2.7);
        }
        let g = random_unimodular(&mut rng);
        let f = match RealForm::new(coeffs) {
            Ok(f) => f,
            Err(_) => continue,
        };
        let image = f.act(&g);
        let (r1, r2) = match (
            julia::julia_invariant_with(&f, &params),
            julia::julia_invariant_with(&image, &params),
        ) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        if invariant_error_bound(&f, r1.point, 0.0) > 2e-9
            || invariant_error_bound(&image, r2.point, act_coeff_err(&f, &g)) > 2e-9
        {
            continue;
        }
        worst_inv = worst_inv.max(rel_dev(r2.theta, r1.theta));
        done += 1;
    }
    if done < SUITE_PAIRS {
        fails.push(format!("only {done}/{SUITE_PAIRS} invariance pairs sampled"));
    } else if worst_inv > SUITE_INV_REL_TOL {
        fails.push(format!(
            "invariance deviation {worst_inv:.2e} > {SUITE_INV_REL_TOL:.0e}"
        ));
    }

    // Homogeneity: theta(s f) = s^2 theta(f).
    let mut worst_hom = 0.0f64;
    let mut done_hom = 0;
    while done_hom < 100 {
        let n = rng.gen_range(2usize..=5);
        let mut coeffs: Vec<f64> = (0..=n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        if coeffs[0].abs() < 0.3 {
            coeffs[0] = 1.0;
        }
        let s = rng.gen_range(0.5..2.0);
        let scaled: Vec<f64> = coeffs.iter().map(|c| s * c).collect();
        let (t1, t2) = match (
            julia::invariant_of(&coeffs, &params),
            julia::invariant_of(&scaled, &params),
        ) {
            (Ok(a), Ok(b)) => (a.theta, b.theta),
            _ => continue,
        };
        worst_hom = worst_hom.max(rel_dev(t2, s * s * t1));
        done_hom += 1;
    }
    if worst_hom > SUITE_HOM_REL_TOL {
        fails.push(format!(
            "homogeneity deviation {worst_hom:.2e} > {SUITE_HOM_REL_TOL:.0e}"
        ));
    }

    // Reduction is idempotent and the canonical key is a class invariant.
    let mut key_mismatch = 0;
    let mut idem_fail = 0;
    for _ in 0..SUITE_KEY_CASES {
        let f = random_stable_form(&mut rng)?;
        let g = random_unimodular(&mut rng);
        let scrambled = f.act(&g);
        let run = || -> Result<(bool, bool)> {
            let r1 = reduce::canonical_representative(&f)?;
            let idem_ok = reduce::is_reduced(&r1.canonical, 1e-7)?
                && reduce::canonical_representative(&r1.canonical)?.canonical.coeffs()
                    == r1.canonical.coeffs();
            let r3 = reduce::canonical_representative(&scrambled)?;
            Ok((idem_ok, r3.canonical.coeffs() == r1.canonical.coeffs()))
        };
        match run() {
            Ok((idem_ok, key_ok)) => {
                if !idem_ok {
                    idem_fail += 1;
                }
                if !key_ok {
                    key_mismatch += 1;
                }
            }
            Err(e) => fails.push(format!(
                "canonical pass failed on {:?} scrambled to {:?}: {e}",
                f.coeffs_i64(),
                scrambled.coeffs_i64()
            )),
        }
    }
    if idem_fail > 0 {
        fails.push(format!("{idem_fail} idempotence failures"));
    }
    if key_mismatch > 0 {
        fails.push(format!(
            "{key_mismatch}/{SUITE_KEY_CASES} canonical keys changed under the action"
        ));
    }

    // The minimization route and the reduction route agree on theta.
    let mut worst_two = 0.0f64;
    for _ in 0..SUITE_TWO_PATH_CASES {
        let f = random_stable_form(&mut rng)?;
        let coeffs: Vec<f64> = f
            .coeffs_i64()
            .expect("sampled coefficients fit i64")
            .iter()
            .map(|&c| c as f64)
            .collect();
        match reduce::canonical_representative(&f)
            .and_then(|rec| julia::invariant_of(&coeffs, &params).map(|jr| (rec, jr)))
        {
            Ok((rec, jr)) => worst_two = worst_two.max(rel_dev(rec.theta, jr.theta)),
            Err(e) => fails.push(format!(
                "two-route pass failed on {:?}: {e}",
                f.coeffs_i64()
            )),
        }
    }
    if worst_two > SUITE_TWO_PATH_REL_TOL {
        fails.push(format!(
            "two-route theta deviation {worst_two:.2e} > {SUITE_TWO_PATH_REL_TOL:.0e}"
        ));
    }

    let metrics = vec![
        ("worst_invariance", worst_inv),
        ("worst_homogeneity", worst_hom),
        ("key_mismatches", key_mismatch as f64),
        ("worst_two_route", worst_two),
    ];
    if fails.is_empty() {
        Ok((
            true,
            format!(
                "invariance {worst_inv:.1e} over {SUITE_PAIRS} pairs, homogeneity \
                 {worst_hom:.1e}, {SUITE_KEY_CASES} canonical keys stable, \
                 two-route theta {worst_two:.1e}"
            ),
            metrics,
        ))
    } else {
        Ok((false, fails.join("; "), metrics))
    }
}

fn cubic_ratio_check(seed: u64) -> CheckOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC3);
    let params = MinimizeParams::default();
    let mut rmin = f64::INFINITY;
    let mut rmax = 0.0f64;
    let mut done = 0;
    while done < CUBIC_CASES {
        // Build a totally real cubic from three separated roots.
        let mut r = [0.0f64; 3];
        for v in &mut r {
            *v = rng.gen_range(-2.0..2.0);
        }
        r.sort_by(f64::total_cmp);
        if r[1] - r[0] < 0.05 || r[2] - r[1] < 0.05 {
            continue;
        }
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let a = sign * rng.gen_range(0.3..3.0);
        let e1 = r[0] + r[1] + r[2];
        let e2 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        let e3 = r[0] * r[1] * r[2];
        let coeffs = [a, -a * e1, a * e2, -a * e3];
        let [ca, cb, cc, cd] = coeffs;
        let disc = 18.0 * ca * cb * cc * cd - 4.0 * cb.powi(3) * cd + cb * cb * cc * cc
            - 4.0 * ca * cc.powi(3)
            - 27.0 * ca * ca * cd * cd;
        if disc <= 0.0 {
            continue;
        }
        let jr = julia::invariant_of(&coeffs, &params)?;
        let ratio = jr.theta / disc.sqrt();
        rmin = rmin.min(ratio);
        rmax = rmax.max(ratio);
        done += 1;
    }
    let spread = rmax - rmin;
    let off = (rmin - CUBIC_INVARIANT_RATIO)
        .abs()
        .max((rmax - CUBIC_INVARIANT_RATIO).abs());
    Ok((
        spread < CUBIC_RATIO_TOL && off <= CUBIC_RATIO_TOL,
        format!(
            "theta/sqrt(disc) in [{rmin:.9}, {rmax:.9}] over {CUBIC_CASES} totally real \
             cubics; target {CUBIC_INVARIANT_RATIO:.9} +- {CUBIC_RATIO_TOL:.0e}"
        ),
        vec![("ratio_spread", spread), ("ratio_offset", off)],
    ))
}

fn bounds_check(
    quad_series: &Option<CountReport>,
    quad_growth: &Option<CountReport>,
    cubic_growth: &Option<CountReport>,
) -> CheckOutput {
    let mut violations = 0u64;
    let mut skipped = 0u64;
    let mut classes = 0u64;
    let mut sources = 0;
    for rep in [quad_series, quad_growth, cubic_growth].into_iter().flatten() {
        sources += 1;
        violations += rep.stats.bound_violations;
        skipped += rep.stats.skipped;
        if let Some(last) = rep.rows.last() {
            classes += last.classes + last.reducible_classes;
        }
    }
    if sources < 3 {
        return Ok((
            false,
            "prerequisite census runs unavailable".into(),
            Vec::new(),
        ));
    }
    Ok((
        violations == 0 && skipped == 0,
        format!(
            "{violations} bound violations and {skipped} undecided forms across \
             {classes} enumerated classes in three census runs"
        ),
        vec![("bound_violations", violations as f64)],
    ))
}

fn find_row(rep: &CountReport, x: f64) -> Option<(u64, u64)> {
    rep.rows
        .iter()
        .find(|r| (r.x - x).abs() < 1e-6)
        .map(|r| (r.classes, r.reducible_classes))
}

fn reducible_share_check(cubic_growth: &Option<CountReport>) -> CheckOutput {
    let rep = match cubic_growth {
        Some(r) => r,
        None => {
            return Ok((
                false,
                "prerequisite census run unavailable".into(),
                Vec::new(),
            ))
        }
    };
    let mut shares = Vec::new();
    for x in [100.0, 1000.0, 10_000.0] {
        match find_row(rep, x) {
            Some((irr, red)) if irr > 0 => shares.push(red as f64 / irr as f64),
            _ => {
                return Ok((
                    false,
                    format!("no classes found at cap {x}"),
                    Vec::new(),
                ))
            }
        }
    }
    let ok = shares[0] > shares[1] && shares[1] > shares[2];
    Ok((
        ok,
        format!(
            "reducible/irreducible share {:.4} -> {:.4} -> {:.4} at caps 100, 1000, 10000",
            shares[0], shares[1], shares[2]
        ),
        vec![
            ("share_100", shares[0]),
            ("share_1000", shares[1]),
            ("share_10000", shares[2]),
        ],
    ))
}

fn congruence_check(cubic_growth: &Option<CountReport>) -> CheckOutput {
    let rep = match cubic_growth {
        Some(r) => r,
        None => {
            return Ok((
                false,
                "prerequisite census run unavailable".into(),
                Vec::new(),
            ))
        }
    };
    let cong = match &rep.congruence {
        Some(c) => c,
        None => {
            return Ok((
                false,
                "census carried no congruence data".into(),
                Vec::new(),
            ))
        }
    };
    let density = *cong.density.numer() as f64 / *cong.density.denom() as f64;
    let ratio = match cong.ratio_at_max {
        Some(r) => r,
        None => {
            return Ok((
                false,
                "no restricted share at the top cap".into(),
                Vec::new(),
            ))
        }
    };
    let dev = rel_dev(ratio, density);
    Ok((
        dev <= MOD2_REL_WINDOW,
        format!(
            "restricted share {ratio:.4} vs orbit-closure density {density:.4} \
             (deviation {:.1}%, window {:.0}%; {} residues closed to {})",
            dev * 100.0,
            MOD2_REL_WINDOW * 100.0,
            cong.given_residues,
            cong.closed_residues
        ),
        vec![("restricted_share", ratio), ("density", density)],
    ))
}

fn volume_comparison(seed: u64) -> CheckOutput {
    let mut fails = Vec::new();
    let mut metrics = Vec::new();
    let mut details = Vec::new();
    for (i, (n, p, ratio_key, se_key, dev_key)) in [
        (2usize, 1usize, "quad_ratio", "quad_se", "quad_dev"),
        (3, 0, "cubic_ratio", "cubic_se", "cubic_dev"),
    ]
    .into_iter()
    .enumerate()
    {
        let cmp = volume::compare_with_count(n, p, COMPARE_CAP, COMPARE_SAMPLES, seed ^ (i as u64))?;
        let window = COMPARE_REL_WINDOW.max(3.0 * cmp.ratio_standard_error);
        if cmp.deviation > window {
            fails.push(format!(
                "degree {n}: index-weighted ratio {:.3} off by {:.3} (window {:.3})",
                cmp.ratio, cmp.deviation, window
            ));
        }
        if cmp.estimate.audit_failures > 0 {
            fails.push(format!(
                "degree {n}: {} volume audit failures",
                cmp.estimate.audit_failures
            ));
        }
        details.push(format!(
            "degree {n}: {} classes x index {} vs volume {:.1} -> ratio {:.3} +- {:.3}",
            cmp.classes,
            cmp.stabilizer_index,
            cmp.estimate.volume,
            cmp.ratio,
            cmp.ratio_standard_error
        ));
        metrics.push((ratio_key, cmp.ratio));
        metrics.push((se_key, cmp.ratio_standard_error));
        metrics.push((dev_key, cmp.deviation));
    }
    Ok((fails.is_empty(), {
        let d = details.join("; ");
        if fails.is_empty() {
            d
        } else {
            format!("{}; {}", fails.join("; "), d)
        }
    }, metrics))
}

fn canonical_key_set(records: &[reduce::ClassRecord]) -> (BTreeSet<Vec<i64>>, i64) {
    let mut set = BTreeSet::new();
    let mut hmax = 0i64;
    for rec in records {
        let v = rec
            .canonical
            .coeffs_i64()
            .expect("canonical coefficients fit i64");
        for &c in &v {
            hmax = hmax.max(c.abs());
        }
        set.insert(v);
    }
    (set, hmax)
}

fn exhaustive_cross_check() -> CheckOutput {
    let quad = count::enumerate_classes(2, 1, EXACT_QUAD_CAP, None)?;
    let (quad_set, quad_h) = canonical_key_set(&quad);
    let quad_brute = count::brute_force_classes(2, 1, EXACT_QUAD_CAP, quad_h)?;
    let quad_ok = quad_set == quad_brute;

    let cubic = count::enumerate_classes(3, 0, EXACT_CUBIC_CAP, None)?;
    let (cubic_set, cubic_h) = canonical_key_set(&cubic);
    let cubic_brute = count::brute_force_classes(3, 0, EXACT_CUBIC_CAP, cubic_h)?;
    let cubic_ok = cubic_set == cubic_brute;

    let mut detail = format!(
        "degree 2 cap {EXACT_QUAD_CAP:.0}: {} classes vs {} exhaustive (box {quad_h}); \
         degree 3 cap {EXACT_CUBIC_CAP:.0}: {} classes vs {} exhaustive (box {cubic_h})",
        quad_set.len(),
        quad_brute.len(),
        cubic_set.len(),
        cubic_brute.len()
    );
    if !quad_ok || !cubic_ok {
        let qd = quad_set.symmetric_difference(&quad_brute).count();
        let cd = cubic_set.symmetric_difference(&cubic_brute).count();
        detail = format!("{detail}; symmetric differences {qd} and {cd}");
    }
    Ok((
        quad_ok && cubic_ok,
        detail,
        vec![
            ("quad_classes", quad_set.len() as f64),
            ("cubic_classes", cubic_set.len() as f64),
        ],
    ))
}
