//! Monte Carlo volumes of the reduced region in coefficient space.
//!
//! For a signature `(n, pairs)` and cap `X`, the *reduced region* is the
//! set of real coefficient vectors whose form has that root layout,
//! invariant `theta <= X`, and representative point inside the standard
//! fundamental domain. Lattice points of the region are exactly the
//! reduced integral forms the counting lanes enumerate, so its volume is
//! the natural yardstick for the class counts.
//!
//! The estimator stratifies the leading coefficient `|a0|` into geometric
//! octaves below its derived bound and, within each stratum, draws the
//! remaining coefficients from per-sample windows that provably contain
//! the region slice (the same window algebra the exact counting lanes
//! use). Each sample carries the measure of its window stack as an
//! importance weight; the empirical mean of `weight * membership` is an
//! unbiased slice volume with a measured standard error. Window sampling
//! keeps weights bounded inside every stratum, which a fixed bounding box
//! cannot do for degree 3 and up (the region has thin unbounded spikes as
//! `a0 -> 0`).
//!
//! Membership is closed-form for definite quadratics and totally real
//! cubics; a fixed fraction of accepted samples is re-verified through
//! the full root-finding and minimization pipeline, and disagreements are
//! reported as `audit_failures` (expected zero). Every other signature
//! runs the numeric pipeline on each sample. The sliver below the lowest
//! stratum is extrapolated from the measured geometric decay of the
//! stratum volumes and both added to the volume and charged in full to
//! the standard error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::EnumerationBounds;
use crate::count::{self, validate_signature, CUBIC_INVARIANT_RATIO};
use crate::error::{Error, Result};
use crate::form::RealForm;
use crate::julia;
use crate::roots;

/// Octaves of the leading coefficient for the closed-form lanes.
const CLOSED_OCTAVES: usize = 14;
/// Octaves for the generic (numeric-membership) lane.
const GENERIC_OCTAVES: usize = 12;
/// Samples per parallel work unit.
const BLOCK: u64 = 16_384;
/// Every `AUDIT_STRIDE`-th accepted closed-form sample is re-verified
/// through the numeric pipeline.
const AUDIT_STRIDE: u64 = 64;
/// Agreement tolerance for the audit (relative on theta, absolute on the
/// domain test).
const AUDIT_TOL: f64 = 1e-6;
/// Hard ceiling on the total sample budget.
const MAX_SAMPLES: u64 = 200_000_000;

/// One leading-coefficient stratum of a volume estimate.
#[derive(Debug, Clone)]
pub struct StratumReport {
    /// Stratum covers `leading_lo < |a0| <= leading_hi`.
    pub leading_lo: f64,
    pub leading_hi: f64,
    pub samples: u64,
    /// Samples that landed inside the region.
    pub accepted: u64,
    /// Average measure of the proposal windows times the stratum width:
    /// the effective sampling volume of this stratum.
    pub proposal_measure: f64,
    pub volume: f64,
    pub standard_error: f64,
}

/// Monte Carlo estimate of the reduced-region volume.
#[derive(Debug, Clone)]
pub struct VolumeEstimate {
    pub degree: usize,
    pub pairs: usize,
    pub cap: f64,
    /// Estimated volume, including the extrapolated tail.
    pub volume: f64,
    /// Stratified standard error plus the whole tail estimate.
    pub standard_error: f64,
    pub samples: u64,
    pub accepted: u64,
    pub acceptance_rate: f64,
    /// Samples the numeric membership pipeline could not decide (generic
    /// lane only; the closed-form lanes never skip).
    pub rejected_numeric: u64,
    /// Accepted samples re-verified through the numeric pipeline.
    pub audited: u64,
    /// Audited samples where the pipelines disagreed (expected zero).
    pub audit_failures: u64,
    /// Extrapolated volume below the lowest stratum.
    pub tail_estimate: f64,
    pub strata: Vec<StratumReport>,
}

/// Class count against region volume at one cap.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub degree: usize,
    pub pairs: usize,
    pub cap: f64,
    /// Irreducible classes with `theta <= cap`.
    pub classes: u64,
    /// Signature-dependent index multiplying the class count in `ratio`.
    pub stabilizer_index: u64,
    /// `stabilizer_index * classes / volume`.
    pub ratio: f64,
    /// `|ratio - 1|`.
    pub deviation: f64,
    /// Standard error of `ratio` induced by the volume estimate.
    pub ratio_standard_error: f64,
    /// Measured lattice points per class: `volume / classes`. Interior
    /// classes of odd degree have two reduced integral forms (`f` and
    /// `-f`), even-degree classes one, so this diagnostic sits near 2 and
    /// 1 respectively.
    pub integral_points_per_class: f64,
    pub estimate: VolumeEstimate,
}

/// The index by which the comparison multiplies the class count for each
/// signature before dividing by the region volume.
pub fn stabilizer_index(n: usize, pairs: usize) -> u64 {
    match (n, pairs) {
        (3, 0) => 3,
        (4, 0) | (4, 2) => 4,
        (4, 1) => 2,
        _ => 1,
    }
}

#[derive(Clone, Copy)]
enum Lane {
    Quad,
    Cubic,
    Generic,
}

struct SampleCtx<'a> {
    lane: Lane,
    degree: usize,
    real_target: usize,
    cap: f64,
    /// Discriminant cap `27 X^2 / 64` for the cubic lane.
    dcapf: f64,
    /// `sqrt(dcapf)`: Hessian leading bound for the cubic lane.
    pmax: f64,
    bnd: &'a EnumerationBounds,
}

#[derive(Debug, Clone, Copy, Default)]
struct BlockStats {
    samples: u64,
    accepted: u64,
    sum_g: f64,
    sum_g2: f64,
    sum_measure: f64,
    rejected_numeric: u64,
    audited: u64,
    audit_failures: u64,
}

impl BlockStats {
    fn absorb(&mut self, o: &BlockStats) {
        self.samples += o.samples;
        self.accepted += o.accepted;
        self.sum_g += o.sum_g;
        self.sum_g2 += o.sum_g2;
        self.sum_measure += o.sum_measure;
        self.rejected_numeric += o.rejected_numeric;
        self.audited += o.audited;
        self.audit_failures += o.audit_failures;
    }
}

/// Estimates the volume of the reduced region for signature `(n, pairs)`
/// at cap `x`, spending about `samples` draws. Deterministic in `seed`
/// regardless of thread count.
pub fn estimate_volume(
    n: usize,
    pairs: usize,
    x: f64,
    samples: u64,
    seed: u64,
) -> Result<VolumeEstimate> {
    validate_signature(n, pairs)?;
    if !(x.is_finite() && x > 0.0 && x <= 1e15) {
        return Err(Error::InvalidSpec(format!(
            "cap {x} outside the supported range (0, 1e15]"
        )));
    }
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(Error::InvalidSpec(format!(
            "sample budget must lie in 1..={MAX_SAMPLES}"
        )));
    }
    let bnd = EnumerationBounds::new(n, x)?;
    let lane = match (n, pairs) {
        (2, 1) => Lane::Quad,
        (3, 0) => Lane::Cubic,
        _ => Lane::Generic,
    };
    let octaves = match lane {
        Lane::Generic => GENERIC_OCTAVES,
        _ => CLOSED_OCTAVES,
    };
    let dcapf = 27.0 * x * x / 64.0;
    let ctx = SampleCtx {
        lane,
        degree: n,
        real_target: n - 2 * pairs,
        cap: x,
        dcapf,
        pmax: dcapf.sqrt(),
        bnd: &bnd,
    };
    let a_sup = (x / 3f64.powf(n as f64 / 2.0)).sqrt();
    let per_stratum = (samples / octaves as u64).max(64);

    struct Task {
        stratum: usize,
        count: u64,
        seed: u64,
    }
    let mut tasks = Vec::new();
    for j in 0..octaves {
        let mut left = per_stratum;
        let mut block = 0u64;
        while left > 0 {
            let count = left.min(BLOCK);
            tasks.push(Task {
                stratum: j,
                count,
                seed: mix_seed(seed, j as u64, block),
            });
            left -= count;
            block += 1;
        }
    }
    let results: Vec<(usize, BlockStats)> = tasks
        .par_iter()
        .map(|t| {
            let lo = a_sup * 0.5f64.powi((octaves - t.stratum) as i32);
            let hi = a_sup * 0.5f64.powi((octaves - t.stratum - 1) as i32);
            (t.stratum, run_block(&ctx, lo, hi, t.count, t.seed))
        })
        .collect();
    let mut per: Vec<BlockStats> = vec![BlockStats::default(); octaves];
    for (j, b) in &results {
        per[*j].absorb(b);
    }

    let mut strata = Vec::with_capacity(octaves);
    let mut totals = BlockStats::default();
    let (mut volume, mut var) = (0.0f64, 0.0f64);
    for (j, st) in per.iter().enumerate() {
        let lo = a_sup * 0.5f64.powi((octaves - j) as i32);
        let hi = a_sup * 0.5f64.powi((octaves - j - 1) as i32);
        let width = hi - lo;
        let m = st.samples as f64;
        let mean = st.sum_g / m;
        let v = width * mean;
        let spread = (st.sum_g2 / m - mean * mean).max(0.0);
        let se = width * (spread / (m - 1.0).max(1.0)).sqrt();
        strata.push(StratumReport {
            leading_lo: lo,
            leading_hi: hi,
            samples: st.samples,
            accepted: st.accepted,
            proposal_measure: width * st.sum_measure / m,
            volume: v,
            standard_error: se,
        });
        volume += v;
        var += se * se;
        totals.absorb(st);
    }
    // Stratum volumes decay geometrically toward a0 = 0; extrapolate the
    // sliver below the lowest stratum from the measured decay.
    let tail = match (strata[0].volume, strata[1].volume) {
        (v0, v1) if v0 > 0.0 && v1 > 0.0 => {
            let r = (v0 / v1).clamp(0.0, 0.9);
            v0 * r / (1.0 - r)
        }
        (v0, _) if v0 > 0.0 => v0,
        _ => 0.0,
    };
    volume += tail;
    let standard_error = var.sqrt() + tail;
    Ok(VolumeEstimate {
        degree: n,
        pairs,
        cap: x,
        volume,
        standard_error,
        samples: totals.samples,
        accepted: totals.accepted,
        acceptance_rate: totals.accepted as f64 / totals.samples as f64,
        rejected_numeric: totals.rejected_numeric,
        audited: totals.audited,
        audit_failures: totals.audit_failures,
        tail_estimate: tail,
        strata,
    })
}

/// Runs the census and the volume estimate at cap `x` and compares them.
pub fn compare_with_count(
    n: usize,
    pairs: usize,
    x: f64,
    samples: u64,
    seed: u64,
) -> Result<CompareReport> {
    let counts = count::count_series(n, pairs, &[x], None)?;
    let classes = counts.rows.last().expect("grid is nonempty").classes;
    let estimate = estimate_volume(n, pairs, x, samples, seed)?;
    if classes == 0 || !(estimate.volume > 0.0) {
        return Err(Error::InvalidSpec(
            "comparison needs at least one class and a positive volume; raise the cap".into(),
        ));
    }
    let index = stabilizer_index(n, pairs);
    let ratio = index as f64 * classes as f64 / estimate.volume;
    let ratio_standard_error = ratio * estimate.standard_error / estimate.volume;
    Ok(CompareReport {
        degree: n,
        pairs,
        cap: x,
        classes,
        stabilizer_index: index,
        ratio,
        deviation: (ratio - 1.0).abs(),
        ratio_standard_error,
        integral_points_per_class: estimate.volume / classes as f64,
        estimate,
    })
}

fn mix_seed(seed: u64, stratum: u64, block: u64) -> u64 {
    let mut z = seed
        .wrapping_add((stratum + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add((block + 1).wrapping_mul(0xC2B2_AE3D_27D4_EB4F));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_block(ctx: &SampleCtx, lo: f64, hi: f64, count: u64, seed: u64) -> BlockStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = BlockStats::default();
    for _ in 0..count {
        match ctx.lane {
            Lane::Quad => sample_quad(ctx, lo, hi, &mut rng, &mut st),
            Lane::Cubic => sample_cubic(ctx, lo, hi, &mut rng, &mut st),
            Lane::Generic => sample_generic(ctx, lo, hi, &mut rng, &mut st),
        }
    }
    st
}

/// Records one draw with window measure `g` (zero when the windows were
/// empty or the exact membership test failed).
fn record(st: &mut BlockStats, g: f64, accepted: bool) {
    st.samples += 1;
    if accepted {
        st.accepted += 1;
        st.sum_g += g;
        st.sum_g2 += g * g;
    }
}

fn sample_quad(ctx: &SampleCtx, lo: f64, hi: f64, rng: &mut ChaCha8Rng, st: &mut BlockStats) {
    let a = lo + (hi - lo) * rng.gen::<f64>();
    let b = a * (2.0 * rng.gen::<f64>() - 1.0);
    // Region slice at (a, b): c from max(a, b^2/4a) (reduced, definite)
    // to (b^2 + X)/4a (cap); factor 2 covers the negative-definite mirror.
    let c_lo = a.max(b * b / (4.0 * a));
    let c_hi = (b * b + ctx.cap) / (4.0 * a);
    let wc = c_hi - c_lo;
    if !(wc > 0.0) {
        record(st, 0.0, false);
        return;
    }
    let measure = 2.0 * (2.0 * a) * wc;
    st.sum_measure += measure;
    let c = c_lo + wc * rng.gen::<f64>();
    let disc_abs = 4.0 * a * c - b * b;
    let ok = disc_abs > 0.0 && b.abs() <= a && a <= c && disc_abs <= ctx.cap;
    record(st, measure, ok);
    if ok && st.accepted.is_multiple_of(AUDIT_STRIDE) {
        st.audited += 1;
        // Rounding bound for the discriminant, driving the tolerance the
        // numeric cross-check is held to on this sample.
        let err_disc = 4.0 * f64::EPSILON * (4.0 * a * c + b * b);
        let rel = AUDIT_TOL + err_disc / disc_abs;
        let dom = AUDIT_TOL + (1.0 + c / a) * (err_disc / disc_abs + 8.0 * f64::EPSILON);
        if !audit_agrees(ctx, &[a, b, c], disc_abs, rel, dom) {
            st.audit_failures += 1;
        }
    }
}

fn sample_cubic(ctx: &SampleCtx, lo: f64, hi: f64, rng: &mut ChaCha8Rng, st: &mut BlockStats) {
    let a = lo + (hi - lo) * rng.gen::<f64>();
    let bsup = ctx.bnd.coeff_bound_real(1, a);
    let b = bsup * (2.0 * rng.gen::<f64>() - 1.0);
    // c-window from the Hessian leading entry: 0 < b^2 - 3ac <= pmax.
    let wc = ctx.pmax / (3.0 * a);
    let c_hi = b * b / (3.0 * a);
    let c = c_hi - wc * rng.gen::<f64>();
    let p = b * b - 3.0 * a * c;
    if !(p > 0.0) {
        record(st, 0.0, false);
        return;
    }
    // d-window: |Q| <= P, R >= P, and discriminant in (0, dcap].
    let bc = b * c;
    let mut d_lo = (bc - p) / (9.0 * a);
    let mut d_hi = (bc + p) / (9.0 * a);
    if b > 0.0 {
        d_hi = d_hi.min((c * c - p) / (3.0 * b));
    } else if b < 0.0 {
        d_lo = d_lo.max((c * c - p) / (3.0 * b));
    } else if c * c < p {
        record(st, 0.0, false);
        return;
    }
    let inv = 1.0 / (54.0 * a * a);
    let beta = 18.0 * a * b * c - 4.0 * b * b * b;
    let mid = beta * inv;
    let half = 4.0 * p * p.sqrt() * inv * (1.0 + 1e-9);
    let over = 16.0 * p * p * p - 108.0 * a * a * ctx.dcapf;
    // Up to two admissible d-segments once the disc > dcap middle is cut.
    let (s1, s2) = if over > 0.0 {
        let he = over.sqrt() * inv * (1.0 - 1e-9);
        (
            (d_lo.max(mid - half), d_hi.min(mid - he)),
            (d_lo.max(mid + he), d_hi.min(mid + half)),
        )
    } else {
        ((d_lo.max(mid - half), d_hi.min(mid + half)), (1.0, 0.0))
    };
    let l1 = (s1.1 - s1.0).max(0.0);
    let l2 = (s2.1 - s2.0).max(0.0);
    let wd = l1 + l2;
    if !(wd > 0.0) {
        record(st, 0.0, false);
        return;
    }
    let measure = 2.0 * (2.0 * bsup) * wc * wd;
    st.sum_measure += measure;
    let u = wd * rng.gen::<f64>();
    let d = if u < l1 { s1.0 + u } else { s2.0 + (u - l1) };
    // Exact membership; the windows only needed to contain the region.
    let q = bc - 9.0 * a * d;
    let r = c * c - 3.0 * b * d;
    // The covariant route 3*disc = 4pr - q^2 is far better conditioned
    // than expanding the quintic invariant in the raw coefficients.
    let disc = (4.0 * p * r - q * q) / 3.0;
    let ok = q.abs() <= p && r >= p && disc > 0.0 && disc <= ctx.dcapf;
    record(st, measure, ok);
    if ok && st.accepted.is_multiple_of(AUDIT_STRIDE) {
        st.audited += 1;
        let theta = CUBIC_INVARIANT_RATIO * disc.sqrt();
        // Per-sample rounding bounds on the covariant entries and the
        // discriminant, so the audit tolerance tracks the conditioning
        // of this draw instead of assuming a global worst case.
        let eps4 = 4.0 * f64::EPSILON;
        let err_p = eps4 * (b * b + (3.0 * a * c).abs());
        let err_q = eps4 * (bc.abs() + (9.0 * a * d).abs());
        let err_r = eps4 * (c * c + (3.0 * b * d).abs());
        let err_d = (4.0 * (p * err_r + r * err_p) + 2.0 * q.abs() * err_q) / 3.0
            + eps4 * disc;
        let rel = AUDIT_TOL + err_d / (2.0 * disc);
        let dom = AUDIT_TOL
            + (err_q + err_p) / (2.0 * p)
            + (err_r + (r / p) * err_p) / p
            + (r / p) * err_d / disc;
        if !audit_agrees(ctx, &[a, b, c, d], theta, rel, dom) {
            st.audit_failures += 1;
        }
    }
}

fn sample_generic(ctx: &SampleCtx, lo: f64, hi: f64, rng: &mut ChaCha8Rng, st: &mut BlockStats) {
    let a = lo + (hi - lo) * rng.gen::<f64>();
    let mut coeffs = Vec::with_capacity(ctx.degree + 1);
    coeffs.push(a);
    let mut measure = 2.0;
    for k in 1..=ctx.degree {
        let bound = ctx.bnd.coeff_bound_real(k, a);
        measure *= 2.0 * bound;
        coeffs.push(bound * (2.0 * rng.gen::<f64>() - 1.0));
    }
    st.sum_measure += measure;
    let ok = match membership_numeric(ctx, &coeffs, None) {
        Ok(ok) => ok,
        Err(_) => {
            st.rejected_numeric += 1;
            record(st, 0.0, false);
            return;
        }
    };
    record(st, measure, ok);
}

/// Full numeric membership: root layout, invariant cap, and fundamental
/// domain. With `expect` set to a closed-form value and per-sample
/// tolerances `(theta, rel_tol, dom_tol)`, instead checks that the
/// numeric route reproduces it.
fn membership_numeric(
    ctx: &SampleCtx,
    coeffs: &[f64],
    expect: Option<(f64, f64, f64)>,
) -> Result<bool> {
    let f = RealForm::new(coeffs.to_vec())?;
    let rs = roots::roots(&f)?;
    if rs.real_count != ctx.real_target {
        return Ok(false);
    }
    let jr = julia::julia_invariant(&f)?;
    if let Some((t, rel, dom)) = expect {
        if (jr.theta - t).abs() > rel * t.max(1.0) {
            return Ok(false);
        }
        // The sample was accepted by the closed form, so the numeric
        // point must lie in (or within rounding noise of) the domain.
        return Ok(jr.point.in_fundamental_domain(dom));
    }
    Ok(jr.theta <= ctx.cap && jr.point.in_fundamental_domain(1e-9))
}

fn audit_agrees(
    ctx: &SampleCtx,
    coeffs: &[f64],
    theta_closed: f64,
    rel_tol: f64,
    dom_tol: f64,
) -> bool {
    matches!(
        membership_numeric(ctx, coeffs, Some((theta_closed, rel_tol, dom_tol))),
        Ok(true)
    )
}
