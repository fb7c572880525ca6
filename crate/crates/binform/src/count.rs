//! Enumeration and counting of `SL2(Z)` classes of integral binary forms
//! with bounded invariant.
//!
//! The census `N(n, pairs, X)` counts `SL2(Z)` classes of irreducible
//! integral degree-`n` forms whose root multiset has `pairs` complex
//! conjugate pairs (and `n - 2 * pairs` real roots) and whose invariant
//! satisfies `theta <= X` (inclusive). Reducible classes are tallied in a
//! side series. Classes are counted through representatives with nonzero
//! leading coefficient; equivalence never changes the sign of a definite
//! quadratic, so a definite class and its negation count as two classes.
//!
//! Two signatures get exact integer lanes:
//!
//! * degree 2, one pair (definite quadratics): `theta = |disc|`, reduction
//!   is the classical `|b| <= a <= c`, and the cap is the exact window
//!   `|disc| <= floor(X)`;
//! * degree 3, no pairs (totally real cubics): `theta` is proportional to
//!   `sqrt(disc)` with ratio [`CUBIC_INVARIANT_RATIO`], the representative
//!   point is the root of the Hessian `(P, Q, R)`, reduction is
//!   `|Q| <= P <= R`, and the cap is the exact window `64 disc <= 27 X^2`.
//!
//! Every other signature runs through a bounded coefficient box and the
//! floating-point reduction pipeline. That lane is honest but only fit for
//! desk-scale caps, so it refuses boxes whose candidate count exceeds an
//! explicit budget instead of running forever.
//!
//! Duplicate suppression never stores the set of seen forms. A scanned
//! reduced form is counted exactly when it is the canonically smallest
//! reduced form of its class with positive leading coefficient, which the
//! fast lanes decide from the (tiny) closure of reduced class members.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rayon::prelude::*;

use crate::bounds::EnumerationBounds;
use crate::error::{Error, Result};
use crate::factor;
use crate::form::Form;
use crate::julia::HalfPlanePoint;
use crate::matrix::UnimodularMap;
use crate::reduce::{
    self, act2, act3, cubic_is_reduced, cubic_reduce_exact, hessian3, quad_is_reduced,
    quad_reduce_exact, ClassRecord,
};
use crate::roots;
use crate::sturm;

/// `theta / sqrt(disc)` for every totally real cubic: `8 sqrt(3) / 9`.
pub const CUBIC_INVARIANT_RATIO: f64 = 1.539_600_717_839_002;

/// Candidate budget for the generic (boxed) lane; boxes beyond this are
/// refused with an error instead of silently running for hours.
const GENERIC_BUDGET: u128 = 20_000_000;

/// Candidate budget for the generic brute-force lane.
const BRUTE_BUDGET: u128 = 30_000_000;

/// Residue tuples live in `(Z/m)^(n+1)`; the total space must stay small
/// enough for dense `u64` keys.
const RESIDUE_SPACE_CAP: u64 = 1 << 40;

/// Largest residue set a closure computation is allowed to grow.
const RESIDUE_SET_CAP: usize = 4_000_000;

/// Membership tolerance used when the generic lane asks whether a form is
/// reduced; boundary twins are all admitted and deduplicated afterwards.
const GENERIC_MEMBERSHIP_TOL: f64 = 1e-9;

/// One row of a counting report: cumulative class counts at cap `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRow {
    /// The cap (inclusive: classes with `theta <= x` are counted).
    pub x: f64,
    /// Irreducible classes with `theta <= x`.
    pub classes: u64,
    /// Reducible classes with `theta <= x` (side series).
    pub reducible_classes: u64,
    /// Irreducible classes also meeting the congruence restriction, when
    /// one was supplied.
    pub restricted_classes: Option<u64>,
}

/// Counters describing how an enumeration went.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    /// Candidate forms touched by the scan.
    pub candidates: u64,
    /// Reduced forms inside the cap (before duplicate suppression).
    pub reduced_forms: u64,
    /// Forms dropped because numerics failed on them; the exact lanes
    /// never skip, and a nonzero value flags the result as incomplete.
    pub skipped: u64,
    /// Counted classes violating the derived coefficient or root bounds.
    pub bound_violations: u64,
    /// Counted classes whose representative point lies on the boundary of
    /// the fundamental domain.
    pub boundary_classes: u64,
}

impl EnumerationStats {
    fn absorb(&mut self, o: &EnumerationStats) {
        self.candidates += o.candidates;
        self.reduced_forms += o.reduced_forms;
        self.skipped += o.skipped;
        self.bound_violations += o.bound_violations;
        self.boundary_classes += o.boundary_classes;
    }
}

/// Summary of a congruence restriction attached to a counting run.
#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub modulus: u64,
    /// Residue tuples supplied by the caller.
    pub given_residues: u64,
    /// Tuples after closing under coordinate changes; counting always uses
    /// the closure because membership is a class property only then.
    pub closed_residues: u64,
    /// Density of the closed residue set in `(Z/m)^(n+1)`.
    pub density: Ratio<u64>,
    /// Restricted over unrestricted count at the largest cap.
    pub ratio_at_max: Option<f64>,
}

/// Counting report over a grid of caps.
#[derive(Debug, Clone)]
pub struct CountReport {
    pub degree: usize,
    pub pairs: usize,
    pub rows: Vec<CountRow>,
    /// Least-squares slope of `ln N` against `ln X` over the top decade of
    /// the grid (`None` with fewer than two usable points).
    pub slope: Option<f64>,
    /// Mean of `N / X^((n+1)/2)` over the top decade of the grid.
    pub c_hat: Option<f64>,
    pub congruence: Option<CongruenceReport>,
    pub stats: EnumerationStats,
}

/// Irreducible versus reducible tallies at one cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducibleShare {
    pub x: f64,
    pub irreducible: u64,
    pub reducible: u64,
}

impl ReducibleShare {
    /// Reducible-to-irreducible ratio; `None` before the first
    /// irreducible class appears.
    pub fn ratio(&self) -> Option<f64> {
        (self.irreducible > 0).then(|| self.reducible as f64 / self.irreducible as f64)
    }
}

// ---------------------------------------------------------------------------
// Congruence restrictions
// ---------------------------------------------------------------------------

/// A set of coefficient residue tuples modulo `m` for degree-`n` forms.
///
/// Membership of a class is well defined only when the set is closed under
/// the coordinate-change action on residues; [`CongruenceSpec::closure`]
/// computes that closure and the counting entry points apply it
/// automatically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSpec {
    degree: usize,
    modulus: u64,
    keys: BTreeSet<u64>,
}

impl CongruenceSpec {
    /// Builds a residue set from explicit tuples `(c_0, ..., c_n)`.
    pub fn new<I>(degree: usize, modulus: u64, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        if degree < 2 {
            return Err(Error::InvalidSpec(
                "congruence restrictions need degree at least two".into(),
            ));
        }
        if modulus == 0 {
            return Err(Error::InvalidSpec("congruence modulus must be positive".into()));
        }
        let space = residue_space(degree, modulus)?;
        debug_assert!(space >= 1);
        let mut keys = BTreeSet::new();
        for t in tuples {
            if t.len() != degree + 1 {
                return Err(Error::InvalidSpec(format!(
                    "residue tuple has {} entries, expected {}",
                    t.len(),
                    degree + 1
                )));
            }
            keys.insert(encode_tuple(&t, modulus));
        }
        Ok(CongruenceSpec { degree, modulus, keys })
    }

    /// The residue set `{ coefficient at index = residue (mod modulus) }`.
    pub fn coefficient_condition(
        degree: usize,
        modulus: u64,
        index: usize,
        residue: u64,
    ) -> Result<Self> {
        if index > degree {
            return Err(Error::InvalidSpec(format!(
                "coefficient index {index} out of range for degree {degree}"
            )));
        }
        let space = residue_space(degree, modulus)?;
        let free = space / modulus;
        if free as usize > RESIDUE_SET_CAP {
            return Err(Error::InvalidSpec(
                "residue condition describes too many tuples to store".into(),
            ));
        }
        let r = residue % modulus;
        let mut tuple = vec![0u64; degree + 1];
        let mut keys = BTreeSet::new();
        loop {
            tuple[index] = r;
            keys.insert(encode_tuple(&tuple, modulus));
            // odometer over the free coordinates
            let mut i = 0;
            loop {
                if i == tuple.len() {
                    return Ok(CongruenceSpec { degree, modulus, keys });
                }
                if i == index {
                    i += 1;
                    continue;
                }
                tuple[i] += 1;
                if tuple[i] < modulus {
                    break;
                }
                tuple[i] = 0;
                i += 1;
            }
        }
    }

    /// Parses comma-separated residue tuples, one per line; `#` starts a
    /// comment and blank lines are ignored.
    pub fn parse_residues(degree: usize, modulus: u64, text: &str) -> Result<Self> {
        let mut tuples = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tuple = Vec::new();
            for tok in line.split(',') {
                let v: u64 = tok.trim().parse().map_err(|_| {
                    Error::Parse(format!(
                        "line {}: bad residue entry {:?}",
                        lineno + 1,
                        tok.trim()
                    ))
                })?;
                tuple.push(v % modulus);
            }
            tuples.push(tuple);
        }
        CongruenceSpec::new(degree, modulus, tuples)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of residue tuples in the set.
    pub fn residue_count(&self) -> u64 {
        self.keys.len() as u64
    }

    /// The tuples, decoded and sorted.
    pub fn tuples(&self) -> Vec<Vec<u64>> {
        self.keys
            .iter()
            .map(|&k| decode_tuple(k, self.degree, self.modulus))
            .collect()
    }

    /// Whether the set is stable under every coordinate change mod `m`.
    pub fn is_closed(&self) -> bool {
        let gens = generator_maps();
        self.keys.iter().all(|&k| {
            let t = decode_tuple(k, self.degree, self.modulus);
            gens.iter().all(|g| {
                let img = act_mod(&t, g, self.modulus);
                self.keys.contains(&encode_tuple(&img, self.modulus))
            })
        })
    }

    /// The smallest closed residue set containing this one.
    pub fn closure(&self) -> Result<CongruenceSpec> {
        let gens = generator_maps();
        let mut keys = self.keys.clone();
        let mut work: Vec<u64> = keys.iter().copied().collect();
        while let Some(k) = work.pop() {
            let t = decode_tuple(k, self.degree, self.modulus);
            for g in &gens {
                let img = act_mod(&t, g, self.modulus);
                let ik = encode_tuple(&img, self.modulus);
                if keys.insert(ik) {
                    if keys.len() > RESIDUE_SET_CAP {
                        return Err(Error::InvalidSpec(format!(
                            "residue closure exceeded {RESIDUE_SET_CAP} tuples"
                        )));
                    }
                    work.push(ik);
                }
            }
        }
        Ok(CongruenceSpec {
            degree: self.degree,
            modulus: self.modulus,
            keys,
        })
    }

    /// Density of the set in `(Z/m)^(n+1)`. Requires a closed set, since
    /// only closed sets define a class property.
    pub fn density(&self) -> Result<Ratio<u64>> {
        if !self.is_closed() {
            return Err(Error::InvalidSpec(
                "residue set is not closed under coordinate changes; take its closure first"
                    .into(),
            ));
        }
        let space = residue_space(self.degree, self.modulus)?;
        Ok(Ratio::new(self.keys.len() as u64, space))
    }

    /// Whether the coefficient vector lies in the residue set.
    pub fn contains_coeffs(&self, coeffs: &[i64]) -> bool {
        if coeffs.len() != self.degree + 1 {
            return false;
        }
        let m = self.modulus as i64;
        let mut key = 0u64;
        for &c in coeffs {
            key = key * self.modulus + c.rem_euclid(m) as u64;
        }
        self.keys.contains(&key)
    }
}

/// Density of a closed residue set; errors on a set that is not closed.
pub fn congruence_density(spec: &CongruenceSpec) -> Result<Ratio<u64>> {
    spec.density()
}

fn residue_space(degree: usize, modulus: u64) -> Result<u64> {
    let e = u32::try_from(degree + 1)
        .map_err(|_| Error::InvalidSpec("degree too large for residue keys".into()))?;
    match modulus.checked_pow(e) {
        Some(s) if s <= RESIDUE_SPACE_CAP => Ok(s),
        _ => Err(Error::InvalidSpec(format!(
            "residue space {modulus}^{e} is too large; keys must fit {RESIDUE_SPACE_CAP}"
        ))),
    }
}

fn encode_tuple(t: &[u64], m: u64) -> u64 {
    t.iter().fold(0u64, |k, &c| k * m + c % m)
}

fn decode_tuple(mut key: u64, degree: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; degree + 1];
    for slot in out.iter_mut().rev() {
        *slot = key % m;
        key /= m;
    }
    out
}

fn generator_maps() -> [UnimodularMap; 3] {
    [
        UnimodularMap::s(),
        UnimodularMap::translation(1),
        UnimodularMap::translation(-1),
    ]
}

/// Coefficients of `f(a x + c y, b x + d y)` modulo `m`, where `(a, b, c,
/// d)` are the entries of `g` reduced mod `m`.
fn act_mod(tuple: &[u64], g: &UnimodularMap, m: u64) -> Vec<u64> {
    let n = tuple.len() - 1;
    let mm = m as u128;
    let md = |v: i64| (v.rem_euclid(m as i64)) as u128;
    let (a, b, c, d) = (md(g.a()), md(g.b()), md(g.c()), md(g.d()));
    // pw1[t] = coefficients of (a x + c y)^t, pw2[t] of (b x + d y)^t.
    let mut pw1: Vec<Vec<u128>> = vec![vec![1]];
    let mut pw2: Vec<Vec<u128>> = vec![vec![1]];
    for t in 1..=n {
        let mut c1 = vec![0u128; t + 1];
        let mut c2 = vec![0u128; t + 1];
        for (j, (&v1, &v2)) in pw1[t - 1].iter().zip(&pw2[t - 1]).enumerate() {
            c1[j] = (c1[j] + v1 * a) % mm;
            c1[j + 1] = (c1[j + 1] + v1 * c) % mm;
            c2[j] = (c2[j] + v2 * b) % mm;
            c2[j + 1] = (c2[j + 1] + v2 * d) % mm;
        }
        pw1.push(c1);
        pw2.push(c2);
    }
    let mut out = vec![0u128; n + 1];
    for (i, &coef) in tuple.iter().enumerate() {
        if coef == 0 {
            continue;
        }
        for (j1, &v1) in pw1[n - i].iter().enumerate() {
            for (j2, &v2) in pw2[i].iter().enumerate() {
                out[j1 + j2] = (out[j1 + j2] + coef as u128 * v1 % mm * v2) % mm;
            }
        }
    }
    out.into_iter().map(|v| v as u64).collect()
}

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

/// Enumerates the irreducible classes with `theta <= x`, one record per
/// class, in a deterministic order. With a congruence restriction, only
/// classes meeting it are yielded. Errors rather than materializing
/// millions of records; use [`count_series`] for large caps.
pub fn enumerate_classes(
    n: usize,
    pairs: usize,
    x: f64,
    spec: Option<&CongruenceSpec>,
) -> Result<Vec<ClassRecord>> {
    validate_signature(n, pairs)?;
    if (n, pairs) == (3, 0) && x > 2_500.0 {
        return Err(Error::InvalidSpec(
            "cubic caps above 2500 produce too many records to collect; use count_series".into(),
        ));
    }
    if (n, pairs) == (2, 1) && x > 10_000.0 {
        return Err(Error::InvalidSpec(
            "quadratic caps above 10000 produce too many records to collect; use count_series"
                .into(),
        ));
    }
    let grid = prepare_grid(&[x])?;
    let closed = close_spec(n, spec)?;
    let out = run_census(n, pairs, &grid, closed.as_ref(), true)?;
    Ok(out.records)
}

/// Counts classes at every cap in `grid` (deduplicated and sorted
/// internally) and fits the growth of the top decade.
pub fn count_series(
    n: usize,
    pairs: usize,
    grid: &[f64],
    spec: Option<&CongruenceSpec>,
) -> Result<CountReport> {
    validate_signature(n, pairs)?;
    let g = prepare_grid(grid)?;
    let closed = close_spec(n, spec)?;
    let out = run_census(n, pairs, &g, closed.as_ref(), false)?;
    let mut rows = Vec::with_capacity(g.len());
    let (mut ci, mut cr, mut cs) = (0u64, 0u64, 0u64);
    for (i, &x) in g.iter().enumerate() {
        ci += out.irr[i];
        cr += out.red[i];
        cs += out.res[i];
        rows.push(CountRow {
            x,
            classes: ci,
            reducible_classes: cr,
            restricted_classes: closed.as_ref().map(|_| cs),
        });
    }
    let (slope, c_hat) = fit_top_decade(&rows, n);
    let congruence = match (&closed, spec) {
        (Some(cl), Some(orig)) => {
            let last = rows.last().expect("grid is nonempty");
            Some(CongruenceReport {
                modulus: cl.modulus(),
                given_residues: orig.residue_count(),
                closed_residues: cl.residue_count(),
                density: cl.density()?,
                ratio_at_max: (last.classes > 0).then(|| {
                    last.restricted_classes.unwrap_or(0) as f64 / last.classes as f64
                }),
            })
        }
        _ => None,
    };
    Ok(CountReport {
        degree: n,
        pairs,
        rows,
        slope,
        c_hat,
        congruence,
        stats: out.stats,
    })
}

/// Irreducible/reducible tallies at each cap of `grid`.
pub fn reducible_statistics(n: usize, pairs: usize, grid: &[f64]) -> Result<Vec<ReducibleShare>> {
    let report = count_series(n, pairs, grid, None)?;
    Ok(report
        .rows
        .iter()
        .map(|r| ReducibleShare {
            x: r.x,
            irreducible: r.classes,
            reducible: r.reducible_classes,
        })
        .collect())
}

/// Independent cross-check: scans the full coefficient cube
/// `|coefficient| <= h` (nonzero leading coefficient), reduces every form
/// with the matching signature and `theta <= x`, and returns the set of
/// canonical representatives of the irreducible classes found.
///
/// The result equals [`enumerate_classes`] whenever `h` is large enough
/// that every class has a reduced member inside the cube; taking `h` as
/// the largest canonical coefficient reported by `enumerate_classes`
/// suffices.
pub fn brute_force_classes(
    n: usize,
    pairs: usize,
    x: f64,
    h: i64,
) -> Result<BTreeSet<Vec<i64>>> {
    validate_signature(n, pairs)?;
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidSpec("cap must be positive and finite".into()));
    }
    if h < 1 {
        return Err(Error::InvalidSpec("box half-width must be at least 1".into()));
    }
    match (n, pairs) {
        (2, 1) => brute_quad(x, h),
        (3, 0) => brute_cubic(x, h),
        _ => brute_generic(n, pairs, x, h),
    }
}

/// Number of classes of definite integral binary quadratics (both signs)
/// with `|disc| <= floor(x)`, counted through the classical reduced
/// triples `-a < b <= a <= c` (with `b >= 0` when `a = c`).
pub fn gauss_class_count(x: f64) -> u64 {
    if !(x.is_finite() && x >= 3.0) {
        return 0;
    }
    let cap = x.floor().min(9e15) as i64;
    let mut count = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= cap {
        for b in (-a + 1)..=a {
            let cmin = a.max(ceil_div((b * b + 1) as i128, (4 * a) as i128) as i64);
            let cmax = floor_div((b * b + cap) as i128, (4 * a) as i128) as i64;
            for c in cmin..=cmax {
                if a == c && b < 0 {
                    continue;
                }
                count += 1;
            }
        }
        a += 1;
    }
    2 * count
}

/// Histogram of positive-definite reduced triples by `|disc|` up to
/// `limit` (index `d` holds the count at `|disc| = d`); double it for the
/// census convention that counts both signs.
pub fn gauss_class_numbers(limit: i64) -> Vec<u64> {
    let cap = limit.max(0);
    let mut hist = vec![0u64; cap as usize + 1];
    let mut a = 1i64;
    while 3 * a * a <= cap {
        for b in (-a + 1)..=a {
            let cmin = a.max(ceil_div((b * b + 1) as i128, (4 * a) as i128) as i64);
            let cmax = floor_div((b * b + cap) as i128, (4 * a) as i128) as i64;
            for c in cmin..=cmax {
                if a == c && b < 0 {
                    continue;
                }
                hist[(4 * a * c - b * b) as usize] += 1;
            }
        }
        a += 1;
    }
    hist
}

/// Log-spaced grid of `points` caps from `lo` to `hi`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 || lo >= hi {
        return vec![hi];
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (llo + (lhi - llo) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

pub(crate) fn validate_signature(n: usize, pairs: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidSpec("census degree must be at least two".into()));
    }
    if pairs > n / 2 {
        return Err(Error::InvalidSpec(format!(
            "a degree-{n} form has at most {} conjugate root pairs",
            n / 2
        )));
    }
    if n == 2 && pairs == 0 {
        return Err(Error::InvalidSpec(
            "indefinite binary quadratics have no stable minimizer; signature (2, 0) is excluded"
                .into(),
        ));
    }
    Ok(())
}

fn prepare_grid(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::InvalidSpec("cap grid is empty".into()));
    }
    for &x in grid {
        if !x.is_finite() || x <= 0.0 || x > 1e15 {
            return Err(Error::InvalidSpec(format!(
                "cap {x} outside the supported range (0, 1e15]"
            )));
        }
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

fn close_spec(n: usize, spec: Option<&CongruenceSpec>) -> Result<Option<CongruenceSpec>> {
    match spec {
        None => Ok(None),
        Some(s) => {
            if s.degree() != n {
                return Err(Error::InvalidSpec(format!(
                    "congruence restriction is for degree {}, census is degree {n}",
                    s.degree()
                )));
            }
            Ok(Some(s.closure()?))
        }
    }
}

struct LaneOut {
    /// New irreducible classes first appearing at each grid index.
    irr: Vec<u64>,
    /// New reducible classes at each grid index.
    red: Vec<u64>,
    /// New irreducible classes meeting the congruence restriction.
    res: Vec<u64>,
    stats: EnumerationStats,
    records: Vec<ClassRecord>,
}

impl LaneOut {
    fn new(g: usize) -> Self {
        LaneOut {
            irr: vec![0; g],
            red: vec![0; g],
            res: vec![0; g],
            stats: EnumerationStats::default(),
            records: Vec::new(),
        }
    }

    fn absorb(&mut self, o: LaneOut) {
        for (a, b) in self.irr.iter_mut().zip(&o.irr) {
            *a += b;
        }
        for (a, b) in self.red.iter_mut().zip(&o.red) {
            *a += b;
        }
        for (a, b) in self.res.iter_mut().zip(&o.res) {
            *a += b;
        }
        self.stats.absorb(&o.stats);
        self.records.extend(o.records);
    }
}

fn run_census(
    n: usize,
    pairs: usize,
    grid: &[f64],
    spec: Option<&CongruenceSpec>,
    collect: bool,
) -> Result<LaneOut> {
    match (n, pairs) {
        (2, 1) => Ok(quad_core(grid, spec, collect)),
        (3, 0) => cubic_core(grid, spec, collect),
        _ => generic_core(n, pairs, grid, spec, collect),
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

/// The order the canonical representative minimizes: compare coefficients
/// by absolute value, ties broken negative before positive.
fn canon_cmp(a: &[i64], b: &[i64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.abs().cmp(&y.abs()) {
            Ordering::Equal => {}
            other => return other,
        }
        match x.cmp(y) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

fn neg3(v: &[i64; 3]) -> [i64; 3] {
    [-v[0], -v[1], -v[2]]
}

fn neg4(v: [i64; 4]) -> [i64; 4] {
    [-v[0], -v[1], -v[2], -v[3]]
}

fn floor_div(a: i128, d: i128) -> i128 {
    debug_assert!(d > 0);
    a.div_euclid(d)
}

fn ceil_div(a: i128, d: i128) -> i128 {
    debug_assert!(d > 0);
    -(-a).div_euclid(d)
}

fn isqrt_i128(v: i128) -> i128 {
    if v <= 0 {
        return 0;
    }
    let mut r = (v as f64).sqrt() as i128;
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    while r * r > v {
        r -= 1;
    }
    r
}

/// First grid index whose threshold admits `v`; thresholds ascend.
fn grid_index(thr: &[i128], v: i128) -> usize {
    let i = thr.partition_point(|&t| t < v);
    debug_assert!(i < thr.len());
    i.min(thr.len() - 1)
}

/// Audits the derived enumeration bounds on a counted class: leading
/// coefficient, per-coefficient box, and root radius.
fn bounds_audit(bnd: &EnumerationBounds, coeffs: &[i64], theta: f64, max_root_sq: f64) -> bool {
    let n = coeffs.len() - 1;
    let a0 = coeffs[0].unsigned_abs() as f64;
    let slack = 1.0 + 1e-9;
    if a0 * a0 * 3f64.powf(n as f64 / 2.0) > theta * slack + 1e-9 {
        return false;
    }
    for (k, &ck) in coeffs.iter().enumerate().skip(1) {
        if (ck.unsigned_abs() as f64) > bnd.coeff_bound_real(k, a0) * slack + 1e-6 {
            return false;
        }
    }
    (max_root_sq + 1.0) * a0 * a0 <= bnd.root_constant() * theta * slack + 1e-6
}

fn positive_divisors_i64(v: i64) -> Vec<i64> {
    let v = v.abs().max(1);
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            if d != v / d {
                out.push(v / d);
            }
        }
        d += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Definite quadratics: exact lane
// ---------------------------------------------------------------------------

/// Reduced class members of a reduced definite quadratic (same leading
/// sign): breadth-first closure under the coordinate-change generators.
fn quad_closure(v: [i64; 3]) -> Vec<[i64; 3]> {
    let gens = [
        UnimodularMap::translation(1),
        UnimodularMap::translation(-1),
        UnimodularMap::s(),
    ];
    let mut seen = vec![v];
    let mut i = 0;
    while i < seen.len() {
        let f = seen[i];
        i += 1;
        for g in &gens {
            if let Some(img) = act2(f, g) {
                if quad_is_reduced(img[0], img[1], img[2]) && !seen.contains(&img) {
                    seen.push(img);
                }
            }
        }
    }
    seen
}

fn quad_stabilizer_order(v: [i64; 3]) -> usize {
    let (a, b, c) = if v[0] < 0 {
        (-v[0], -v[1], -v[2])
    } else {
        (v[0], v[1], v[2])
    };
    if b == 0 && a == c {
        4
    } else if b.abs() == a && a == c {
        6
    } else {
        2
    }
}

fn quad_record(canonical: [i64; 3], dabs: i64, stab: usize, boundary: bool) -> ClassRecord {
    let t = -(canonical[1] as f64) / (2.0 * canonical[0] as f64);
    let u = (dabs as f64).sqrt() / (2.0 * canonical[0].abs() as f64);
    ClassRecord {
        canonical: Form::from_i64(&canonical).expect("nonzero leading coefficient"),
        theta: dabs as f64,
        point: HalfPlanePoint::new(t, u),
        stabilizer_order: stab,
        boundary,
    }
}

fn quad_core(grid: &[f64], spec: Option<&CongruenceSpec>, collect: bool) -> LaneOut {
    let thr: Vec<i128> = grid.iter().map(|&x| x.floor() as i128).collect();
    let dcap = *thr.last().expect("grid is nonempty") as i64;
    let mut out = LaneOut::new(grid.len());
    let amax = isqrt_i128((dcap / 3).max(0) as i128) as i64;
    for a in 1..=amax {
        for b in -a..=a {
            let b2 = b * b;
            let cmin = a.max(ceil_div((b2 + 1) as i128, (4 * a) as i128) as i64);
            let cmax = floor_div((b2 + dcap) as i128, (4 * a) as i128) as i64;
            for c in cmin..=cmax {
                out.stats.candidates += 1;
                quad_emit(&mut out, [a, b, c], 4 * a * c - b2, &thr, spec, collect);
            }
        }
    }
    out
}

fn quad_emit(
    out: &mut LaneOut,
    v: [i64; 3],
    dabs: i64,
    thr: &[i128],
    spec: Option<&CongruenceSpec>,
    collect: bool,
) {
    debug_assert!(quad_is_reduced(v[0], v[1], v[2]));
    out.stats.reduced_forms += 1;
    let boundary = v[1].abs() == v[0] || v[0] == v[2];
    let members: Vec<[i64; 3]> = if boundary {
        let ms = quad_closure(v);
        let mine = *ms
            .iter()
            .min_by(|x, y| canon_cmp(&x[..], &y[..]))
            .expect("closure contains the seed");
        if mine != v {
            return; // this class is counted at its canonical member
        }
        out.stats.boundary_classes += 2;
        ms
    } else {
        vec![v]
    };
    let canonical_pos = *members
        .iter()
        .min_by(|x, y| canon_cmp(&x[..], &y[..]))
        .expect("nonempty");
    let canonical_neg = members
        .iter()
        .map(neg3)
        .min_by(|x, y| canon_cmp(&x[..], &y[..]))
        .expect("nonempty");
    let stab = quad_stabilizer_order(v);
    let (a, b, c) = (v[0], v[1], v[2]);
    // Exact forms of the derived bounds: leading and root inequalities.
    if !(3 * a * a <= dabs && a * a + 2 * b * b <= 7 * a * c) {
        out.stats.bound_violations += 2;
    }
    let gi = grid_index(thr, dabs as i128);
    out.irr[gi] += 2; // definite quadratics are always irreducible over Q
    let pos_in = spec.is_none_or(|s| s.contains_coeffs(&v));
    let neg_in = spec.is_none_or(|s| s.contains_coeffs(&neg3(&v)));
    out.res[gi] += u64::from(pos_in) + u64::from(neg_in);
    if collect {
        if pos_in {
            out.records.push(quad_record(canonical_pos, dabs, stab, boundary));
        }
        if neg_in {
            out.records.push(quad_record(canonical_neg, dabs, stab, boundary));
        }
    }
}

// ---------------------------------------------------------------------------
// Totally real cubics: exact lane
// ---------------------------------------------------------------------------

/// Largest integer `d >= 0` with `64 d <= 27 x^2`; the exact integer form
/// of `theta <= x` for totally real cubics.
fn cubic_disc_cap(x: f64) -> i128 {
    if !(x > 0.0) {
        return 0;
    }
    let t = 27.0 * x * x;
    let mut d = (t / 64.0).floor() as i128;
    while 64.0 * ((d + 1) as f64) <= t {
        d += 1;
    }
    while d > 0 && 64.0 * (d as f64) > t {
        d -= 1;
    }
    d.max(0)
}

fn cubic_disc_i128(a: i64, b: i64, c: i64, d: i64) -> i128 {
    let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
    18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c
        - 27 * a * a * d * d
}

/// Visits every integer `d` in the padded solvability window of
/// `1 <= disc(a, b, c, d) <= dmax` intersected with `[dlo, dhi]`, calling
/// `visit(d, disc)` for the ones that pass the exact test. Window
/// endpoints come from the closed-form roots of the discriminant as a
/// quadratic polynomial in `d`; every candidate is re-verified in integer
/// arithmetic, so the floating-point endpoints only need to be within one
/// unit of the truth. Returns how many `d` values were touched.
fn scan_disc_window(
    a: i64,
    b: i64,
    c: i64,
    dlo: f64,
    dhi: f64,
    dmax: i128,
    mut visit: impl FnMut(i64, i128),
) -> u64 {
    let (a1, b1, c1) = (a as i128, b as i128, c as i128);
    let p = b1 * b1 - 3 * a1 * c1;
    // A positive discriminant forces a definite Hessian, hence p > 0.
    if p <= 0 || dmax < 1 {
        return 0;
    }
    let beta = 18 * a1 * b1 * c1 - 4 * b1 * b1 * b1;
    let gamma0 = b1 * b1 * c1 * c1 - 4 * a1 * c1 * c1 * c1;
    debug_assert_eq!(beta * beta + 108 * a1 * a1 * gamma0, 16 * p * p * p);
    let af = a as f64;
    let inv = 1.0 / (54.0 * af * af);
    let pf = p as f64;
    let mid = beta as f64 * inv;
    let half = 4.0 * pf * pf.sqrt() * inv;
    let lo = dlo.max(mid - half);
    let hi = dhi.min(mid + half);
    let seg_start = |v: f64| (v - 1.0).ceil() as i64;
    let seg_end = |v: f64| (v + 1.0).floor() as i64;
    let over = 16.0 * pf * pf * pf - 108.0 * af * af * (dmax as f64);
    let mut segs = [(1i64, 0i64); 2];
    if over > 0.0 {
        // The middle of the window has disc > dmax; cut it out, keeping
        // the two ends disjoint after padding.
        let he = over.sqrt() * inv;
        segs[0] = (seg_start(lo), seg_end(hi.min(mid - he)));
        segs[1] = (seg_start(lo.max(mid + he)).max(segs[0].1 + 1), seg_end(hi));
    } else {
        segs[0] = (seg_start(lo), seg_end(hi));
    }
    let mut touched = 0;
    for (s, e) in segs {
        for d in s..=e {
            touched += 1;
            let d1 = d as i128;
            let disc = beta * d1 + gamma0 - 27 * a1 * a1 * d1 * d1;
            if (1..=dmax).contains(&disc) {
                visit(d, disc);
            }
        }
    }
    touched
}

/// Reduced class members of a reduced totally real cubic, both leading
/// signs: breadth-first closure under the coordinate-change generators.
fn cubic_closure(v: [i64; 4]) -> Vec<[i64; 4]> {
    let gens = [
        UnimodularMap::translation(1),
        UnimodularMap::translation(-1),
        UnimodularMap::s(),
        UnimodularMap::neg_identity(),
    ];
    let mut seen = vec![v];
    let mut i = 0;
    while i < seen.len() {
        let f = seen[i];
        i += 1;
        for g in &gens {
            if let Some(img) = act3(f, g) {
                if cubic_is_reduced(img[0], img[1], img[2], img[3]) && !seen.contains(&img) {
                    seen.push(img);
                }
            }
        }
    }
    seen
}

/// Order of the rotation stabilizer at a corner of the fundamental
/// domain: 3 when one of the four order-3 integer rotations fixes the
/// form, 1 otherwise. (Odd-degree forms admit no order-2 stabilizers.)
fn cubic_corner_stabilizer(v: [i64; 4]) -> usize {
    let rots = [
        UnimodularMap::new(0, 1, -1, -1),
        UnimodularMap::new(0, -1, 1, -1),
        UnimodularMap::new(-1, 1, -1, 0),
        UnimodularMap::new(-1, -1, 1, 0),
    ];
    for g in &rots {
        if act3(v, g) == Some(v) {
            return 3;
        }
    }
    1
}

/// Three real roots of `a x^3 + b x^2 + c x + d` by the trigonometric
/// closed form plus two Newton polish steps each.
fn real_roots_cubic(v: [i64; 4]) -> [f64; 3] {
    let (a, b, c, d) = (v[0] as f64, v[1] as f64, v[2] as f64, v[3] as f64);
    let shift = -b / (3.0 * a);
    let p = (3.0 * a * c - b * b) / (3.0 * a * a);
    let q = (2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d) / (27.0 * a * a * a);
    if p >= 0.0 {
        // Cannot happen with three distinct real roots.
        return [shift; 3];
    }
    let mag = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
    let phi = arg.acos();
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut x = mag * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() + shift;
        for _ in 0..2 {
            let f = ((a * x + b) * x + c) * x + d;
            let df = (3.0 * a * x + 2.0 * b) * x + c;
            if df.abs() > 1e-300 {
                x -= f / df;
            }
        }
        *slot = x;
    }
    out
}

fn eval_cubic(v: [i64; 4], x: i64, y: i64) -> i128 {
    let (x, y) = (x as i128, y as i128);
    ((v[0] as i128 * x + v[1] as i128 * y) * x + v[2] as i128 * y * y) * x
        + v[3] as i128 * y * y * y
}

/// Exact irreducibility over `Q` for a totally real cubic: a cubic is
/// reducible exactly when it has a rational root `p/q` with `q` dividing
/// the leading coefficient; the float roots locate the only candidates
/// and integer evaluation settles each one.
fn cubic_irreducible(v: [i64; 4], rts: &[f64; 3], divisors: &[i64]) -> bool {
    for &alpha in rts {
        for &qd in divisors {
            let base = alpha * qd as f64;
            if !base.is_finite() {
                continue;
            }
            let base = base.round() as i64;
            for pp in [base - 1, base, base + 1] {
                if eval_cubic(v, pp, qd) == 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn cubic_record(canonical: [i64; 4], disc: i128, stab: usize, boundary: bool) -> ClassRecord {
    let (p, q, _r) = hessian3(canonical[0], canonical[1], canonical[2], canonical[3]);
    debug_assert!(p > 0);
    let t = -(q as f64) / (2.0 * p as f64);
    let u = (3.0 * disc as f64).sqrt() / (2.0 * p as f64);
    ClassRecord {
        canonical: Form::from_i64(&canonical).expect("nonzero leading coefficient"),
        theta: CUBIC_INVARIANT_RATIO * (disc as f64).sqrt(),
        point: HalfPlanePoint::new(t, u),
        stabilizer_order: stab,
        boundary,
    }
}

struct CubicCtx<'a> {
    bnd: &'a EnumerationBounds,
    thr: &'a [i128],
    dmax: i128,
    pmax: i128,
    spec: Option<&'a CongruenceSpec>,
    collect: bool,
}

fn cubic_core(grid: &[f64], spec: Option<&CongruenceSpec>, collect: bool) -> Result<LaneOut> {
    let xmax = *grid.last().expect("grid is nonempty");
    if xmax > 1.2e7 {
        return Err(Error::InvalidSpec(
            "cubic caps above 1.2e7 would overflow the exact window arithmetic".into(),
        ));
    }
    let bnd = EnumerationBounds::new(3, xmax)?;
    let thr: Vec<i128> = grid.iter().map(|&x| cubic_disc_cap(x)).collect();
    let dmax = *thr.last().expect("grid is nonempty");
    if dmax < 1 {
        return Ok(LaneOut::new(grid.len()));
    }
    // Exact leading-coefficient bound: 729 a^4 <= 64 disc_cap.
    let mut amax = (64.0 * dmax as f64 / 729.0).sqrt().sqrt() as i64;
    while 729 * (amax as i128 + 1).pow(4) <= 64 * dmax {
        amax += 1;
    }
    while amax > 0 && 729 * (amax as i128).pow(4) > 64 * dmax {
        amax -= 1;
    }
    let ctx = CubicCtx {
        bnd: &bnd,
        thr: &thr,
        dmax,
        pmax: isqrt_i128(dmax),
        spec,
        collect,
    };
    let avals: Vec<i64> = (1..=amax).collect();
    let slices: Vec<LaneOut> = avals.par_iter().map(|&a| cubic_slice(a, &ctx)).collect();
    let mut out = LaneOut::new(grid.len());
    for s in slices {
        out.absorb(s);
    }
    Ok(out)
}

/// Scans every reduced totally real cubic with leading coefficient `a`
/// and discriminant inside the cap. For reduced forms `1 <= P <= sqrt(D)`
/// pins the `c` range per `(a, b)`, and the `|Q| <= P`, `R >= P`, and
/// discriminant windows pin `d`; every candidate is verified exactly.
fn cubic_slice(a: i64, ctx: &CubicCtx) -> LaneOut {
    let mut out = LaneOut::new(ctx.thr.len());
    let divisors = positive_divisors_i64(a);
    // One beyond the derived box, so a float rounding slip in the bound
    // cannot drop a legitimate class; the exact window tests decide.
    let bmax = ctx.bnd.coeff_bound(1, a) + 1;
    let ccap = ctx.bnd.coeff_bound(2, a) + 1;
    let dcap_coeff = ctx.bnd.coeff_bound(3, a) + 1;
    let a1 = a as i128;
    for b in -bmax..=bmax {
        let b1 = b as i128;
        let b2 = b1 * b1;
        let clo = ceil_div(b2 - ctx.pmax, 3 * a1).max(-(ccap as i128));
        let chi = floor_div(b2 - 1, 3 * a1).min(ccap as i128);
        if clo > chi {
            continue;
        }
        for c in (clo as i64)..=(chi as i64) {
            let c1 = c as i128;
            let p = b2 - 3 * a1 * c1;
            debug_assert!(p >= 1 && p <= ctx.pmax);
            let pf = p as f64;
            // |Q| <= P window in d.
            let bcf = (b1 * c1) as f64;
            let mut lo = (bcf - pf) / (9.0 * a as f64);
            let mut hi = (bcf + pf) / (9.0 * a as f64);
            // R >= P halfline.
            let c2f = (c1 * c1) as f64;
            if b > 0 {
                hi = hi.min((c2f - pf) / (3.0 * b as f64));
            } else if b < 0 {
                lo = lo.max((c2f - pf) / (3.0 * b as f64));
            } else if c1 * c1 < p {
                continue;
            }
            lo = lo.max(-(dcap_coeff as f64));
            hi = hi.min(dcap_coeff as f64);
            let touched = scan_disc_window(a, b, c, lo, hi, ctx.dmax, |d, disc| {
                let d1 = d as i128;
                let q = b1 * c1 - 9 * a1 * d1;
                if q.abs() > p {
                    return;
                }
                let r = c1 * c1 - 3 * b1 * d1;
                if r < p {
                    return;
                }
                cubic_emit(ctx, &mut out, [a, b, c, d], p, q, r, disc, &divisors);
            });
            out.stats.candidates += touched;
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cubic_emit(
    ctx: &CubicCtx,
    out: &mut LaneOut,
    v: [i64; 4],
    p: i128,
    q: i128,
    r: i128,
    disc: i128,
    divisors: &[i64],
) {
    debug_assert!(cubic_is_reduced(v[0], v[1], v[2], v[3]));
    out.stats.reduced_forms += 1;
    let boundary = q.abs() == p || r == p;
    let canonical: [i64; 4];
    let stab: usize;
    if boundary {
        let members = cubic_closure(v);
        let mine = members
            .iter()
            .filter(|m| m[0] > 0)
            .min_by(|x, y| canon_cmp(&x[..], &y[..]))
            .copied()
            .expect("closure contains the seed");
        if mine != v {
            return; // counted at the canonical positive-leading member
        }
        canonical = *members
            .iter()
            .min_by(|x, y| canon_cmp(&x[..], &y[..]))
            .expect("nonempty");
        stab = if r == p && q.abs() == p {
            cubic_corner_stabilizer(v)
        } else {
            1
        };
        out.stats.boundary_classes += 1;
    } else {
        // Interior point: the only reduced members are v and -v, and the
        // sign tie-break makes the negative one canonical.
        canonical = neg4(v);
        stab = 1;
    }
    let theta = CUBIC_INVARIANT_RATIO * (disc as f64).sqrt();
    let rts = real_roots_cubic(v);
    let max_root_sq = rts.iter().fold(0.0f64, |m, t| m.max(t * t));
    if !bounds_audit(ctx.bnd, &v, theta, max_root_sq) {
        out.stats.bound_violations += 1;
    }
    let gi = grid_index(ctx.thr, disc);
    if cubic_irreducible(v, &rts, divisors) {
        out.irr[gi] += 1;
        let in_spec = ctx.spec.is_none_or(|s| s.contains_coeffs(&v));
        if in_spec {
            out.res[gi] += 1;
        }
        if ctx.collect && in_spec {
            out.records.push(cubic_record(canonical, disc, stab, boundary));
        }
    } else {
        out.red[gi] += 1;
    }
}

// ---------------------------------------------------------------------------
// Generic lane: bounded box + floating-point reduction
// ---------------------------------------------------------------------------

fn quartic_disc_i128(a: i64, b: i64, c: i64, d: i64, e: i64) -> i128 {
    let (a, b, c, d, e) = (a as i128, b as i128, c as i128, d as i128, e as i128);
    let i = 12 * a * e - 3 * b * d + c * c;
    let j = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * b * b * e - 2 * c * c * c;
    let num = 4 * i * i * i - j * j;
    debug_assert_eq!(num % 27, 0);
    num / 27
}

struct GenEntry {
    theta: f64,
    irreducible: bool,
    in_spec: bool,
    record: Option<ClassRecord>,
}

fn generic_core(
    n: usize,
    pairs: usize,
    grid: &[f64],
    spec: Option<&CongruenceSpec>,
    collect: bool,
) -> Result<LaneOut> {
    let xmax = *grid.last().expect("grid is nonempty");
    let bnd = EnumerationBounds::new(n, xmax)?;
    let amax = bnd.a0_max();
    let mut total: u128 = 0;
    for a0 in 1..=amax {
        let mut m: u128 = 1;
        for k in 1..=n {
            m = m.saturating_mul(2 * bnd.coeff_bound(k, a0).max(0) as u128 + 1);
        }
        total = total.saturating_add(m);
    }
    if n.is_multiple_of(2) {
        total = total.saturating_mul(2);
    }
    if total > GENERIC_BUDGET {
        return Err(Error::InvalidSpec(format!(
            "coefficient box holds about {total} candidates, beyond the {GENERIC_BUDGET} budget \
             of the generic lane; exact lanes exist only for definite quadratics and totally \
             real cubics, so lower the cap"
        )));
    }
    let mut out = LaneOut::new(grid.len());
    let mut classes: BTreeMap<Vec<i64>, GenEntry> = BTreeMap::new();
    let signs: &[i64] = if n.is_multiple_of(2) { &[1, -1] } else { &[1] };
    for &sgn in signs {
        for a0 in 1..=amax {
            let kb = bnd.coeff_box(a0);
            let mut cur: Vec<i64> = kb.iter().map(|&b| -b).collect();
            'odometer: loop {
                let mut v = Vec::with_capacity(n + 1);
                v.push(sgn * a0);
                v.extend_from_slice(&cur);
                out.stats.candidates += 1;
                generic_candidate(
                    n,
                    pairs,
                    &v,
                    xmax,
                    &bnd,
                    spec,
                    collect,
                    &mut classes,
                    &mut out.stats,
                )?;
                let mut i = n;
                loop {
                    if i == 0 {
                        break 'odometer;
                    }
                    cur[i - 1] += 1;
                    if cur[i - 1] <= kb[i - 1] {
                        break;
                    }
                    cur[i - 1] = -kb[i - 1];
                    i -= 1;
                }
            }
        }
    }
    for entry in classes.values() {
        let gi = grid.partition_point(|&x| x * (1.0 + 1e-9) < entry.theta);
        debug_assert!(gi < grid.len());
        let gi = gi.min(grid.len() - 1);
        if entry.irreducible {
            out.irr[gi] += 1;
            if entry.in_spec {
                out.res[gi] += 1;
            }
        } else {
            out.red[gi] += 1;
        }
    }
    out.records = classes.into_values().filter_map(|e| e.record).collect();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn generic_candidate(
    n: usize,
    pairs: usize,
    v: &[i64],
    xmax: f64,
    bnd: &EnumerationBounds,
    spec: Option<&CongruenceSpec>,
    collect: bool,
    classes: &mut BTreeMap<Vec<i64>, GenEntry>,
    stats: &mut EnumerationStats,
) -> Result<()> {
    // Exact signature screens: a cubic's root layout is decided by the
    // sign of its discriminant, a quartic's is narrowed by it.
    if n == 3 {
        let disc = cubic_disc_i128(v[0], v[1], v[2], v[3]);
        if disc == 0 || (disc > 0) != (pairs == 0) {
            return Ok(());
        }
    } else if n == 4 {
        let disc = quartic_disc_i128(v[0], v[1], v[2], v[3], v[4]);
        if disc == 0 || (disc < 0) != (pairs == 1) {
            return Ok(());
        }
    }
    let form = Form::from_i64(v)?;
    if n >= 4 {
        match sturm::signature(&form) {
            Ok((_, k)) if k == pairs => {}
            Ok(_) => return Ok(()),
            Err(Error::Degenerate { .. }) => return Ok(()),
            Err(e) => return Err(e),
        }
    }
    match reduce::is_reduced(&form, GENERIC_MEMBERSHIP_TOL) {
        Ok(true) => {}
        Ok(false) => return Ok(()),
        Err(Error::NoConvergence { .. }) | Err(Error::Degenerate { .. }) => {
            stats.skipped += 1;
            return Ok(());
        }
        Err(Error::NotStable { .. }) => return Ok(()),
        Err(e) => return Err(e),
    }
    stats.reduced_forms += 1;
    let rec = match reduce::canonical_representative(&form) {
        Ok(r) => r,
        Err(Error::NoConvergence { .. }) | Err(Error::Degenerate { .. }) => {
            stats.skipped += 1;
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    if rec.theta > xmax * (1.0 + 1e-9) {
        return Ok(());
    }
    let Some(key) = rec.canonical.coeffs_i64() else {
        stats.skipped += 1;
        return Ok(());
    };
    if classes.contains_key(&key) {
        return Ok(());
    }
    let irreducible = match factor::is_irreducible(&form) {
        Ok(b) => b,
        Err(_) => {
            // Could not certify either way; drop the form but say so.
            stats.skipped += 1;
            return Ok(());
        }
    };
    let in_spec = spec.is_none_or(|s| s.contains_coeffs(&key));
    let max_root_sq = roots::roots(&rec.canonical.to_real())
        .map(|rs| rs.roots.iter().fold(0.0f64, |m, z| m.max(z.norm_sqr())))
        .unwrap_or(0.0);
    if !bounds_audit(bnd, &key, rec.theta, max_root_sq) {
        stats.bound_violations += 1;
    }
    let record = (collect && irreducible && in_spec).then(|| rec.clone());
    classes.insert(
        key,
        GenEntry {
            theta: rec.theta,
            irreducible,
            in_spec,
            record,
        },
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// Brute force
// ---------------------------------------------------------------------------

fn brute_quad(x: f64, h: i64) -> Result<BTreeSet<Vec<i64>>> {
    let dcap = x.floor().min(9e15) as i64;
    let mut set = BTreeSet::new();
    // Negative-definite box forms are the negations of positive-definite
    // ones, so scanning a > 0 and inserting both signs covers the cube.
    for a in 1..=h {
        for b in -h..=h {
            let b2 = (b as i128) * (b as i128);
            let clo = ceil_div(b2 + 1, 4 * a as i128).max(1);
            let chi = floor_div(b2 + dcap as i128, 4 * a as i128).min(h as i128);
            for c in clo..=chi {
                let v = [a, b, c as i64];
                let (_, red) = quad_reduce_exact(v).ok_or_else(|| {
                    Error::InvalidSpec("exact reduction overflowed; shrink the box".into())
                })?;
                let members = quad_closure(red);
                let pos = members
                    .iter()
                    .min_by(|p, q| canon_cmp(&p[..], &q[..]))
                    .expect("nonempty");
                let neg = members
                    .iter()
                    .map(neg3)
                    .min_by(|p, q| canon_cmp(&p[..], &q[..]))
                    .expect("nonempty");
                set.insert(pos.to_vec());
                set.insert(neg.to_vec());
            }
        }
    }
    Ok(set)
}

fn brute_cubic(x: f64, h: i64) -> Result<BTreeSet<Vec<i64>>> {
    let dmax = cubic_disc_cap(x);
    let mut set = BTreeSet::new();
    if dmax < 1 {
        return Ok(set);
    }
    let mut overflow = false;
    // -f = f(-x, -y) in odd degree, so leading coefficients a < 0 give the
    // same classes as their negations; a > 0 covers the cube.
    for a in 1..=h {
        let divisors = positive_divisors_i64(a);
        for b in -h..=h {
            for c in -h..=h {
                scan_disc_window(a, b, c, -h as f64, h as f64, dmax, |d, _disc| {
                    let v = [a, b, c, d];
                    let Some((_, red)) = cubic_reduce_exact(v) else {
                        overflow = true;
                        return;
                    };
                    let members = cubic_closure(red);
                    let canonical = members
                        .iter()
                        .min_by(|p, q| canon_cmp(&p[..], &q[..]))
                        .expect("nonempty")
                        .to_vec();
                    if set.contains(&canonical) {
                        return;
                    }
                    let rts = real_roots_cubic(v);
                    if cubic_irreducible(v, &rts, &divisors) {
                        set.insert(canonical);
                    }
                });
            }
        }
    }
    if overflow {
        return Err(Error::InvalidSpec(
            "exact reduction overflowed; shrink the box".into(),
        ));
    }
    Ok(set)
}

fn brute_generic(n: usize, pairs: usize, x: f64, h: i64) -> Result<BTreeSet<Vec<i64>>> {
    let side = 2 * h as u128 + 1;
    let mut total: u128 = 1;
    for _ in 0..=n {
        total = total.saturating_mul(side);
    }
    if total > BRUTE_BUDGET {
        return Err(Error::InvalidSpec(format!(
            "brute-force cube holds {total} candidates, beyond the {BRUTE_BUDGET} budget"
        )));
    }
    let bnd = EnumerationBounds::new(n, x)?;
    let mut classes: BTreeMap<Vec<i64>, GenEntry> = BTreeMap::new();
    let mut stats = EnumerationStats::default();
    let mut v = vec![-h; n + 1];
    'odometer: loop {
        if v[0] != 0 {
            generic_candidate(n, pairs, &v, x, &bnd, None, false, &mut classes, &mut stats)?;
        }
        let mut i = n + 1;
        loop {
            if i == 0 {
                break 'odometer;
            }
            v[i - 1] += 1;
            if v[i - 1] <= h {
                break;
            }
            v[i - 1] = -h;
            i -= 1;
        }
    }
    Ok(classes
        .into_iter()
        .filter(|(_, e)| e.irreducible)
        .map(|(k, _)| k)
        .collect())
}

// ---------------------------------------------------------------------------
// Growth fit
// ---------------------------------------------------------------------------

fn fit_top_decade(rows: &[CountRow], n: usize) -> (Option<f64>, Option<f64>) {
    let Some(last) = rows.last() else {
        return (None, None);
    };
    let lo = last.x / 10.0 * (1.0 - 1e-9);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.classes > 0 && r.x >= lo)
        .map(|r| (r.x.ln(), (r.classes as f64).ln()))
        .collect();
    let c_hat = if pts.is_empty() {
        None
    } else {
        let e = (n as f64 + 1.0) / 2.0;
        let vals: Vec<f64> = rows
            .iter()
            .filter(|r| r.classes > 0 && r.x >= lo)
            .map(|r| r.classes as f64 / r.x.powf(e))
            .collect();
        Some(vals.iter().sum::<f64>() / vals.len() as f64)
    };
    if pts.len() < 2 {
        return (None, c_hat);
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx <= 0.0 {
        return (None, c_hat);
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (Some(sxy / sxx), c_hat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_signatures() {
        assert!(matches!(
            count_series(1, 0, &[10.0], None),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            count_series(2, 0, &[10.0], None),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            count_series(3, 2, &[10.0], None),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            count_series(3, 0, &[], None),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            count_series(3, 0, &[f64::NAN], None),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn definite_quadratic_census_at_four() {
        let recs = enumerate_classes(2, 1, 4.0, None).expect("census");
        assert_eq!(recs.len(), 4);
        let mut canon: Vec<Vec<i64>> = recs
            .iter()
            .map(|r| r.canonical.coeffs_i64().expect("small"))
            .collect();
        canon.sort();
        assert_eq!(
            canon,
            vec![
                vec![-1, -1, -1],
                vec![-1, 0, -1],
                vec![1, -1, 1],
                vec![1, 0, 1],
            ]
        );
        for r in &recs {
            let k = r.canonical.coeffs_i64().expect("small");
            if k[1] == 0 {
                assert_eq!(r.theta, 4.0);
                assert_eq!(r.stabilizer_order, 4);
            } else {
                assert_eq!(r.theta, 3.0);
                assert_eq!(r.stabilizer_order, 6);
            }
            assert!(r.boundary);
            assert!(r.point.u > 0.0);
        }
    }

    #[test]
    fn definite_quadratic_census_matches_reduced_triple_count() {
        let grid: Vec<f64> = (3..=300).map(|i| i as f64).collect();
        let report = count_series(2, 1, &grid, None).expect("census");
        let hist = gauss_class_numbers(300);
        let mut cum = 0u64;
        let mut by_cap = Vec::new();
        for (d, &h) in hist.iter().enumerate() {
            cum += h;
            if d >= 3 {
                by_cap.push(2 * cum);
            }
        }
        let got: Vec<u64> = report.rows.iter().map(|r| r.classes).collect();
        assert_eq!(got, by_cap);
        assert_eq!(report.stats.skipped, 0);
        assert_eq!(report.stats.bound_violations, 0);
        assert!(report.rows.iter().all(|r| r.reducible_classes == 0));
    }

    #[test]
    fn reduced_triple_histogram_frozen_values() {
        let hist = gauss_class_numbers(23);
        assert_eq!(hist[3], 1); // x^2 + xy + y^2
        assert_eq!(hist[4], 1); // x^2 + y^2
        assert_eq!(hist[7], 1);
        assert_eq!(hist[8], 1);
        assert_eq!(hist[11], 1);
        assert_eq!(hist[12], 2); // includes the imprimitive (2, 2, 2)
        assert_eq!(hist[23], 3); // (1, 1, 6), (2, 1, 3), (2, -1, 3)
        assert_eq!(gauss_class_count(4.0), 4);
        assert_eq!(gauss_class_count(2.9), 0);
    }

    #[test]
    fn totally_real_cubic_census_small_caps() {
        // No irreducible or counted reducible class exists below the
        // first cubic field discriminant.
        let r3 = count_series(3, 0, &[3.0], None).expect("census");
        assert_eq!(r3.rows[0].classes, 0);
        assert_eq!(r3.rows[0].reducible_classes, 0);

        // disc 49 (the cyclic field) appears at theta ~ 10.7772, as a
        // mirror pair of inequivalent classes sharing the discriminant.
        let below = count_series(3, 0, &[10.7], None).expect("census");
        assert_eq!(below.rows[0].classes, 0);
        let recs = enumerate_classes(3, 0, 10.8, None).expect("census");
        assert_eq!(recs.len(), 2);
        for rec in &recs {
            assert!((rec.theta - CUBIC_INVARIANT_RATIO * 7.0).abs() < 1e-12);
            assert_eq!(rec.stabilizer_order, 3);
            assert!(rec.boundary);
            assert_eq!(rec.canonical.coeffs_i64().expect("small")[0].abs(), 1);
        }
        assert_ne!(recs[0].canonical, recs[1].canonical);

        // x^3 - 3 x y^2 (disc 108) is the first counted reducible class.
        let red = count_series(3, 0, &[17.0], None).expect("census");
        assert!(red.rows[0].reducible_classes >= 1);
    }

    #[test]
    fn totally_real_cubic_matches_brute_force() {
        let recs = enumerate_classes(3, 0, 50.0, None).expect("census");
        assert!(!recs.is_empty());
        let fast: BTreeSet<Vec<i64>> = recs
            .iter()
            .map(|r| r.canonical.coeffs_i64().expect("small"))
            .collect();
        let h = fast
            .iter()
            .flat_map(|v| v.iter().map(|c| c.abs()))
            .max()
            .expect("nonempty");
        let brute = brute_force_classes(3, 0, 50.0, h).expect("brute");
        assert_eq!(fast, brute);
    }

    #[test]
    fn definite_quadratic_matches_brute_force() {
        let recs = enumerate_classes(2, 1, 60.0, None).expect("census");
        let fast: BTreeSet<Vec<i64>> = recs
            .iter()
            .map(|r| r.canonical.coeffs_i64().expect("small"))
            .collect();
        let h = fast
            .iter()
            .flat_map(|v| v.iter().map(|c| c.abs()))
            .max()
            .expect("nonempty");
        let brute = brute_force_classes(2, 1, 60.0, h).expect("brute");
        assert_eq!(fast, brute);
    }

    #[test]
    fn cubic_lane_consistent_with_float_reduction() {
        let recs = enumerate_classes(3, 0, 60.0, None).expect("census");
        assert!(!recs.is_empty());
        for rec in &recs {
            let round = reduce::canonical_representative(&rec.canonical).expect("reduce");
            assert_eq!(round.canonical, rec.canonical, "{}", rec.canonical);
            assert!(
                (round.theta - rec.theta).abs() <= 1e-8 * rec.theta,
                "theta mismatch on {}: {} vs {}",
                rec.canonical,
                round.theta,
                rec.theta
            );
            assert_eq!(round.stabilizer_order, rec.stabilizer_order, "{}", rec.canonical);
        }
    }

    #[test]
    fn mixed_cubic_census_agrees_with_brute_force() {
        let recs = enumerate_classes(3, 1, 12.0, None).expect("census");
        for rec in &recs {
            assert!(rec.theta <= 12.0 * (1.0 + 1e-9));
            let k = rec.canonical.coeffs_i64().expect("small");
            assert!(cubic_disc_i128(k[0], k[1], k[2], k[3]) < 0);
        }
        let fast: BTreeSet<Vec<i64>> = recs
            .iter()
            .map(|r| r.canonical.coeffs_i64().expect("small"))
            .collect();
        let h = fast
            .iter()
            .flat_map(|v| v.iter().map(|c| c.abs()))
            .max()
            .unwrap_or(4)
            .max(4);
        let brute = brute_force_classes(3, 1, 12.0, h).expect("brute");
        assert_eq!(fast, brute);
        // Determinism of the generic lane.
        let again = enumerate_classes(3, 1, 12.0, None).expect("census");
        assert_eq!(again.len(), recs.len());
        let one = count_series(3, 1, &[30.0], None).expect("census");
        assert!(one.rows[0].classes >= 1);
    }

    #[test]
    fn growth_exponent_definite_quadratics() {
        let grid = log_grid(100.0, 1000.0, 8);
        let report = count_series(2, 1, &grid, None).expect("census");
        let slope = report.slope.expect("enough points");
        assert!(
            (slope - 1.5).abs() < 0.15,
            "slope {slope} strays from 3/2"
        );
        assert!(report.c_hat.expect("follows slope") > 0.0);
    }

    #[test]
    fn congruence_closure_and_density() {
        let spec = CongruenceSpec::coefficient_condition(3, 2, 3, 0).expect("spec");
        assert_eq!(spec.residue_count(), 8);
        assert!(!spec.is_closed());
        assert!(matches!(spec.density(), Err(Error::InvalidSpec(_))));
        let closed = spec.closure().expect("closure");
        assert!(closed.is_closed());
        assert_eq!(closed.residue_count(), 14);
        assert_eq!(closed.density().expect("closed"), Ratio::new(7, 8));
        let missing: Vec<Vec<u64>> = (0..16u64)
            .map(|k| decode_tuple(k, 3, 2))
            .filter(|t| !closed.contains_coeffs(&t.iter().map(|&x| x as i64).collect::<Vec<_>>()))
            .collect();
        assert_eq!(missing, vec![vec![1, 0, 1, 1], vec![1, 1, 0, 1]]);
        // Idempotent and sign-robust.
        assert_eq!(closed.closure().expect("again"), closed);
        assert!(closed.contains_coeffs(&[-1, 2, -2, 2]));
    }

    #[test]
    fn congruence_restricted_series() {
        let spec = CongruenceSpec::coefficient_condition(3, 2, 3, 0).expect("spec");
        let report = count_series(3, 0, &[300.0], Some(&spec)).expect("census");
        let cong = report.congruence.expect("present");
        assert_eq!(cong.given_residues, 8);
        assert_eq!(cong.closed_residues, 14);
        assert_eq!(cong.density, Ratio::new(7, 8));
        let row = &report.rows[0];
        let restricted = row.restricted_classes.expect("present");
        assert!(restricted <= row.classes);
        let ratio = cong.ratio_at_max.expect("classes exist");
        assert!(
            (0.7..=1.0).contains(&ratio),
            "restricted share {ratio} out of range"
        );
    }

    #[test]
    fn congruence_parsing() {
        let spec = CongruenceSpec::parse_residues(2, 3, "0,1,2 # comment\n\n 1, 2, 0\n").expect("parse");
        assert_eq!(spec.residue_count(), 2);
        assert!(spec.contains_coeffs(&[3, 4, 2]));
        assert!(CongruenceSpec::parse_residues(2, 3, "0,x,2").is_err());
        assert!(CongruenceSpec::new(2, 3, vec![vec![0, 1]]).is_err());
        assert!(CongruenceSpec::new(2, 0, Vec::<Vec<u64>>::new()).is_err());
        assert!(residue_space(5, 100_000).is_err());
    }

    #[test]
    fn budget_and_cap_guards() {
        assert!(matches!(
            count_series(4, 1, &[10_000.0], None),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            enumerate_classes(3, 0, 5_000.0, None),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            brute_force_classes(4, 1, 100.0, 40),
            Err(Error::InvalidSpec(_))
        ));
        let wrong_degree = CongruenceSpec::coefficient_condition(4, 2, 0, 0).expect("spec");
        assert!(matches!(
            count_series(3, 0, &[100.0], Some(&wrong_degree)),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn reducible_share_declines() {
        let shares = reducible_statistics(3, 0, &[100.0, 1000.0]).expect("census");
        let r0 = shares[0].ratio().expect("classes exist");
        let r1 = shares[1].ratio().expect("classes exist");
        assert!(
            r1 < r0,
            "reducible share should fall: {r0} at 100, {r1} at 1000"
        );
    }

    #[test]
    fn no_bound_violations_at_desk_scale() {
        let cubic = count_series(3, 0, &[500.0], None).expect("census");
        assert_eq!(cubic.stats.bound_violations, 0);
        assert_eq!(cubic.stats.skipped, 0);
        assert!(cubic.stats.boundary_classes > 0);
        let quad = count_series(2, 1, &[500.0], None).expect("census");
        assert_eq!(quad.stats.bound_violations, 0);
        assert_eq!(quad.stats.skipped, 0);
    }

    #[test]
    fn log_grid_shape() {
        let g = log_grid(100.0, 10_000.0, 5);
        assert_eq!(g.len(), 5);
        assert!((g[0] - 100.0).abs() < 1e-9);
        assert!((g[4] - 10_000.0).abs() < 1e-6);
        assert!((g[2] - 1000.0).abs() < 1e-6);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn canonical_order_mirrors_reduction_tie_break() {
        assert_eq!(canon_cmp(&[0], &[-1]), Ordering::Less);
        assert_eq!(canon_cmp(&[-1], &[1]), Ordering::Less);
        assert_eq!(canon_cmp(&[1, -2], &[1, 2]), Ordering::Less);
        assert_eq!(canon_cmp(&[2, 0], &[-3, 5]), Ordering::Less);
        assert_eq!(canon_cmp(&[1, 2], &[1, 2]), Ordering::Equal);
    }
}
