//! Invariants, reduction, and class counting for binary forms.
//!
//! A binary form of degree `n`,
//!
//! ```text
//! f(x, y) = a0 x^n + a1 x^(n-1) y + ... + an y^n,
//! ```
//!
//! has a distinguished *representative point* `z(f)` in the upper half
//! plane: the minimizer of
//! `a0^2 prod_j ((t - Re alpha_j)^2 + (Im alpha_j)^2 + u^2) / u^n` over
//! `z = t + i u`, where `alpha_j` runs over the roots of `f(x, 1)`. The
//! minimum value `theta(f)` is an invariant of the real SL2 orbit of `f`;
//! the point `z(f)` moves equivariantly. For definite quadratics,
//! `theta = |b^2 - 4ac|` and `z` is the usual root in the half plane, so
//! the construction extends the classical reduction theory of quadratic
//! forms to every degree.
//!
//! On top of that invariant the crate builds:
//!
//! * [`julia`] — the minimization itself, the quadratic covariant, and an
//!   independent dual computation through root weights;
//! * [`reduce`] — moving `z(f)` into the standard fundamental domain with
//!   an explicit SL2(Z) matrix, canonical class representatives, and
//!   stabilizers;
//! * [`count`] — exact enumeration of integer equivalence classes with
//!   `theta <= X` by signature, growth-rate fits, and congruence filters;
//! * [`volume`] — Monte Carlo volumes of the matching regions in
//!   coefficient space, for comparing lattice counts against volume
//!   asymptotics;
//! * [`form`], [`matrix`], [`roots`], [`sturm`], [`factor`], [`bounds`] —
//!   the supporting exact and numerical machinery.
//!
//! Start with the runnable examples (`cargo run --release --example
//! invariant_tour`, then `class_census`, `growth_fit`, `volume_check`,
//! `congruence_sieve`, `reduce_orbit`), or the `binform` binary, which
//! exposes the same operations as subcommands.

// Negated float comparisons like `!(x > 0.0)` are NaN guards throughout
// the numeric code: they reject NaN along with the out-of-range values,
// which the "simpler" `x <= 0.0` would silently let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod count;
pub mod error;
pub mod factor;
pub mod form;
pub mod julia;
pub mod matrix;
pub mod reduce;
pub mod roots;
pub mod selftest;
pub mod sturm;
pub mod volume;

pub use count::{
    brute_force_classes, congruence_density, count_series, enumerate_classes, gauss_class_count,
    gauss_class_numbers, log_grid, reducible_statistics, CongruenceReport, CongruenceSpec,
    CountReport, CountRow, EnumerationStats, ReducibleShare, CUBIC_INVARIANT_RATIO,
};
pub use error::{Error, Result};
pub use form::{parse_form, Form, ParsedForm, RealForm};
pub use julia::{julia_invariant, HalfPlanePoint, JuliaResult};
pub use matrix::UnimodularMap;
pub use reduce::{canonical_representative, is_reduced, reduce_form, ClassRecord, Reduction};
pub use selftest::{run_selftest, run_selftest_with, CriterionResult, SelftestReport};
pub use volume::{
    compare_with_count, estimate_volume, stabilizer_index, CompareReport, StratumReport,
    VolumeEstimate,
};
