//! Command-line interface to the binary-forms toolkit.
//!
//! Seven subcommands expose the library end to end: `invariant`,
//! `reduce`, and `roots` operate on a single form given as a
//! comma-separated coefficient list; `count`, `volume`, and `compare`
//! work per signature `(degree, pairs)` and cap; `selftest` runs the
//! built-in acceptance checks. Reports go to stdout (or `--out`) as JSON
//! (17 significant digits) or CSV (12 significant digits); both are
//! byte-stable for fixed inputs and seed.
//!
//! Exit codes: 0 success; 1 bad input, bad specification, or IO failure
//! (and a failing selftest); 2 degenerate or unstable form (zero leading
//! coefficient, repeated roots, no stable minimum); 3 minimization did
//! not converge.

use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use binform::count::{count_series, log_grid, CongruenceSpec, CountReport};
use binform::error::{Error, Result};
use binform::form::{parse_form, ParsedForm};
use binform::julia::{self, MinimizeParams};
use binform::reduce;
use binform::roots;
use binform::selftest;
use binform::volume::{self, VolumeEstimate};

#[derive(Parser)]
#[command(
    name = "binform",
    version,
    about = "Invariants, reduction, and class counts for binary forms",
    propagate_version = true
)]
struct Cli {
    /// Gradient tolerance for the half-plane minimization.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_grad: f64,
    /// Tolerance when reporting fundamental-domain membership.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_boundary: f64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the randomized subcommands (volume, compare, selftest).
    #[arg(long, global = true, default_value_t = 17)]
    seed: u64,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariant theta, representative point, and quadratic covariant.
    Invariant {
        /// Coefficients `a0,...,an` (integers or decimals).
        #[arg(long)]
        form: String,
    },
    /// Reduce a form: canonical representative and reducing matrix.
    Reduce {
        /// Coefficients `a0,...,an` (integers or decimals).
        #[arg(long)]
        form: String,
    },
    /// Roots of f(x, 1) and the real/complex signature.
    Roots {
        /// Coefficients `a0,...,an` (integers or decimals).
        #[arg(long)]
        form: String,
    },
    /// Count equivalence classes with invariant at most each cap.
    Count {
        /// Degree of the forms.
        #[arg(long)]
        degree: usize,
        /// Complex-conjugate root pairs in the signature.
        #[arg(long)]
        pairs: usize,
        /// Largest invariant cap (required unless --caps is given).
        #[arg(long, required_unless_present = "caps")]
        x_max: Option<f64>,
        /// Smallest cap of the logarithmic grid.
        #[arg(long, default_value_t = 100.0)]
        x_min: f64,
        /// Number of caps on the logarithmic grid.
        #[arg(long, default_value_t = 8)]
        points: usize,
        /// Explicit comma-separated caps (overrides the grid flags).
        #[arg(long)]
        caps: Option<String>,
        /// Modulus for a congruence restriction on the coefficients.
        #[arg(long)]
        modulus: Option<u64>,
        /// Restrict one coefficient: `index:residue` (needs --modulus).
        #[arg(long)]
        coeff_residue: Option<String>,
        /// File of admissible residue tuples `a0,...,an`, one per line
        /// (needs --modulus).
        #[arg(long)]
        residues_file: Option<PathBuf>,
    },
    /// Monte Carlo volume of the bounded-invariant region.
    Volume {
        /// Degree of the forms.
        #[arg(long)]
        degree: usize,
        /// Complex-conjugate root pairs in the signature.
        #[arg(long)]
        pairs: usize,
        /// Invariant cap.
        #[arg(long)]
        x_max: f64,
        /// Total sample budget across all strata.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Compare the class count against the region volume at one cap.
    Compare {
        /// Degree of the forms.
        #[arg(long)]
        degree: usize,
        /// Complex-conjugate root pairs in the signature.
        #[arg(long)]
        pairs: usize,
        /// Invariant cap.
        #[arg(long)]
        x_max: f64,
        /// Total sample budget across all strata.
        #[arg(long, default_value_t = 1_200_000)]
        samples: u64,
    },
    /// Run the built-in acceptance checks (several minutes).
    Selftest,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(j) = cli.jobs {
        // Ignore failure: the global pool may already exist.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global();
    }
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("binform: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidSpec(_) | Error::Io(_) => 1,
        Error::LeadingZero
        | Error::Degenerate { .. }
        | Error::NotStable { .. }
        | Error::ReducibleAtInfinity => 2,
        Error::NoConvergence { .. } => 3,
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let report = match &cli.cmd {
        Cmd::Invariant { form } => cmd_invariant(cli, form)?,
        Cmd::Reduce { form } => cmd_reduce(cli, form)?,
        Cmd::Roots { form } => cmd_roots(cli, form)?,
        Cmd::Count {
            degree,
            pairs,
            x_max,
            x_min,
            points,
            caps,
            modulus,
            coeff_residue,
            residues_file,
        } => {
            let grid = match (caps, x_max) {
                (Some(list), _) => parse_caps(list)?,
                (None, Some(hi)) => log_grid(*x_min, *hi, *points),
                (None, None) => {
                    return Err(Error::InvalidSpec("count needs --x-max or --caps".into()))
                }
            };
            let spec = build_spec(*degree, *modulus, coeff_residue, residues_file)?;
            let rep = count_series(*degree, *pairs, &grid, spec.as_ref())?;
            render_count(cli.format, &rep)
        }
        Cmd::Volume {
            degree,
            pairs,
            x_max,
            samples,
        } => {
            let est = volume::estimate_volume(*degree, *pairs, *x_max, *samples, cli.seed)?;
            render_volume(cli.format, &est)
        }
        Cmd::Compare {
            degree,
            pairs,
            x_max,
            samples,
        } => {
            let cmp = volume::compare_with_count(*degree, *pairs, *x_max, *samples, cli.seed)?;
            render_compare(cli.format, &cmp)
        }
        Cmd::Selftest => {
            eprintln!("running the acceptance checks (the growth census takes longest)");
            let rep = selftest::run_selftest_with(cli.seed, |r| {
                eprintln!(
                    "criterion {:2}: {} - {} [{:.1}s]",
                    r.id,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.seconds
                );
            });
            write_out(cli, &render_selftest(cli.format, &rep))?;
            return Ok(if rep.all_passed { 0 } else { 1 });
        }
    };
    write_out(cli, &report)?;
    Ok(0)
}

fn write_out(cli: &Cli, s: &str) -> Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, s).map_err(Error::from),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------- forms

fn real_coeffs(text: &str) -> Result<Vec<f64>> {
    match parse_form(text)? {
        ParsedForm::Int(f) => Ok(f.to_real().coeffs().to_vec()),
        ParsedForm::Real(f) => Ok(f.coeffs().to_vec()),
    }
}

fn cmd_invariant(cli: &Cli, form: &str) -> Result<String> {
    let params = MinimizeParams {
        grad_tol: cli.tol_grad,
        ..Default::default()
    };
    let coeffs = real_coeffs(form)?;
    let jr = julia::invariant_of(&coeffs, &params)?;
    let in_domain = jr.point.in_fundamental_domain(cli.tol_boundary);
    Ok(match cli.format {
        Format::Json => {
            let mut s = String::from("{\n");
            s.push_str(&format!("  \"degree\": {},\n", coeffs.len() - 1));
            s.push_str(&format!(
                "  \"coefficients\": [{}],\n",
                join(coeffs.iter().map(|&c| jf(c)))
            ));
            s.push_str(&format!("  \"theta\": {},\n", jf(jr.theta)));
            s.push_str(&format!(
                "  \"point\": {{\"t\": {}, \"u\": {}}},\n",
                jf(jr.point.t),
                jf(jr.point.u)
            ));
            s.push_str(&format!(
                "  \"covariant\": [{}],\n",
                join(jr.covariant.iter().map(|&c| jf(c)))
            ));
            s.push_str(&format!("  \"iterations\": {},\n", jr.iterations));
            s.push_str(&format!(
                "  \"gradient_norm\": {},\n",
                jf(jr.gradient_norm)
            ));
            s.push_str(&format!("  \"in_fundamental_domain\": {in_domain}\n"));
            s.push_str("}\n");
            s
        }
        Format::Csv => {
            let mut s = String::from("key,value\n");
            s.push_str(&format!("degree,{}\n", coeffs.len() - 1));
            s.push_str(&format!(
                "coefficients,{}\n",
                csv_cell(&join_sep(coeffs.iter().map(|&c| cf(c)), " "))
            ));
            s.push_str(&format!("theta,{}\n", cf(jr.theta)));
            s.push_str(&format!("point_t,{}\n", cf(jr.point.t)));
            s.push_str(&format!("point_u,{}\n", cf(jr.point.u)));
            for (i, &c) in jr.covariant.iter().enumerate() {
                s.push_str(&format!("covariant_{i},{}\n", cf(c)));
            }
            s.push_str(&format!("iterations,{}\n", jr.iterations));
            s.push_str(&format!("gradient_norm,{}\n", cf(jr.gradient_norm)));
            s.push_str(&format!("in_fundamental_domain,{in_domain}\n"));
            s
        }
    })
}

fn cmd_reduce(cli: &Cli, form: &str) -> Result<String> {
    match parse_form(form)? {
        ParsedForm::Int(f) => {
            let red = reduce::reduce_form(&f)?;
            let rec = reduce::canonical_representative(&f)?;
            let input = join(f.coeffs().iter().map(|c| c.to_string()));
            let reduced = join(red.reduced.coeffs().iter().map(|c| c.to_string()));
            let canonical = join(rec.canonical.coeffs().iter().map(|c| c.to_string()));
            let g = red.gamma.entries();
            Ok(match cli.format {
                Format::Json => format!(
                    "{{\n  \"degree\": {},\n  \"input\": [{}],\n  \"reduced\": [{}],\n  \
                     \"transform\": [[{}, {}], [{}, {}]],\n  \"canonical\": [{}],\n  \
                     \"theta\": {},\n  \"point\": {{\"t\": {}, \"u\": {}}},\n  \
                     \"stabilizer_order\": {},\n  \"boundary\": {}\n}}\n",
                    f.degree(),
                    input,
                    reduced,
                    g[0][0],
                    g[0][1],
                    g[1][0],
                    g[1][1],
                    canonical,
                    jf(rec.theta),
                    jf(rec.point.t),
                    jf(rec.point.u),
                    rec.stabilizer_order,
                    rec.boundary
                ),
                Format::Csv => {
                    let mut s = String::from("key,value\n");
                    s.push_str(&format!("degree,{}\n", f.degree()));
                    s.push_str(&format!("input,{}\n", csv_cell(&input)));
                    s.push_str(&format!("reduced,{}\n", csv_cell(&reduced)));
                    s.push_str(&format!(
                        "transform,{}\n",
                        csv_cell(&format!(
                            "{} {} {} {}",
                            g[0][0], g[0][1], g[1][0], g[1][1]
                        ))
                    ));
                    s.push_str(&format!("canonical,{}\n", csv_cell(&canonical)));
                    s.push_str(&format!("theta,{}\n", cf(rec.theta)));
                    s.push_str(&format!("point_t,{}\n", cf(rec.point.t)));
                    s.push_str(&format!("point_u,{}\n", cf(rec.point.u)));
                    s.push_str(&format!("stabilizer_order,{}\n", rec.stabilizer_order));
                    s.push_str(&format!("boundary,{}\n", rec.boundary));
                    s
                }
            })
        }
        ParsedForm::Real(f) => {
            let red = reduce::reduce_real(&f)?;
            let g = red.gamma.entries();
            Ok(match cli.format {
                Format::Json => format!(
                    "{{\n  \"degree\": {},\n  \"input\": [{}],\n  \"reduced\": [{}],\n  \
                     \"transform\": [[{}, {}], [{}, {}]],\n  \"point\": {{\"t\": {}, \"u\": {}}},\n  \
                     \"boundary\": {}\n}}\n",
                    f.degree(),
                    join(f.coeffs().iter().map(|&c| jf(c))),
                    join(red.reduced.coeffs().iter().map(|&c| jf(c))),
                    g[0][0],
                    g[0][1],
                    g[1][0],
                    g[1][1],
                    jf(red.point.t),
                    jf(red.point.u),
                    red.boundary
                ),
                Format::Csv => {
                    let mut s = String::from("key,value\n");
                    s.push_str(&format!("degree,{}\n", f.degree()));
                    s.push_str(&format!(
                        "input,{}\n",
                        csv_cell(&join_sep(f.coeffs().iter().map(|&c| cf(c)), " "))
                    ));
                    s.push_str(&format!(
                        "reduced,{}\n",
                        csv_cell(&join_sep(red.reduced.coeffs().iter().map(|&c| cf(c)), " "))
                    ));
                    s.push_str(&format!(
                        "transform,{}\n",
                        csv_cell(&format!(
                            "{} {} {} {}",
                            g[0][0], g[0][1], g[1][0], g[1][1]
                        ))
                    ));
                    s.push_str(&format!("point_t,{}\n", cf(red.point.t)));
                    s.push_str(&format!("point_u,{}\n", cf(red.point.u)));
                    s.push_str(&format!("boundary,{}\n", red.boundary));
                    s
                }
            })
        }
    }
}

fn cmd_roots(cli: &Cli, form: &str) -> Result<String> {
    let coeffs = real_coeffs(form)?;
    let rs = roots::roots_of(&coeffs)?;
    let n = coeffs.len() - 1;
    Ok(match cli.format {
        Format::Json => {
            let mut s = String::from("{\n");
            s.push_str(&format!("  \"degree\": {n},\n"));
            s.push_str(&format!("  \"real_count\": {},\n", rs.real_count));
            s.push_str(&format!(
                "  \"conjugate_pairs\": {},\n",
                (n - rs.real_count) / 2
            ));
            s.push_str(&format!("  \"radius\": {},\n", jf(rs.radius)));
            s.push_str("  \"roots\": [\n");
            for (i, r) in rs.roots.iter().enumerate() {
                s.push_str(&format!(
                    "    {{\"re\": {}, \"im\": {}}}{}\n",
                    jf(r.re),
                    jf(r.im),
                    if i + 1 < rs.roots.len() { "," } else { "" }
                ));
            }
            s.push_str("  ]\n}\n");
            s
        }
        Format::Csv => {
            let mut s = String::from("re,im\n");
            for r in &rs.roots {
                s.push_str(&format!("{},{}\n", cf(r.re), cf(r.im)));
            }
            s
        }
    })
}

// ------------------------------------------------------------- counting

fn parse_caps(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(str::trim)
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad cap '{t}'")))
        })
        .collect()
}

fn build_spec(
    degree: usize,
    modulus: Option<u64>,
    coeff_residue: &Option<String>,
    residues_file: &Option<PathBuf>,
) -> Result<Option<CongruenceSpec>> {
    match (modulus, coeff_residue, residues_file) {
        (None, None, None) => Ok(None),
        (None, _, _) => Err(Error::InvalidSpec(
            "congruence restrictions need --modulus".into(),
        )),
        (Some(_), Some(_), Some(_)) => Err(Error::InvalidSpec(
            "give --coeff-residue or --residues-file, not both".into(),
        )),
        (Some(m), Some(cr), None) => {
            let (idx, res) = cr.split_once(':').ok_or_else(|| {
                Error::Parse(format!("expected index:residue, got '{cr}'"))
            })?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient index '{idx}'")))?;
            let res: u64 = res
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad residue '{res}'")))?;
            CongruenceSpec::coefficient_condition(degree, m, idx, res).map(Some)
        }
        (Some(m), None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            CongruenceSpec::parse_residues(degree, m, &text).map(Some)
        }
        (Some(_), None, None) => Err(Error::InvalidSpec(
            "--modulus needs --coeff-residue or --residues-file".into(),
        )),
    }
}

fn render_count(fmt: Format, rep: &CountReport) -> String {
    match fmt {
        Format::Json => {
            let mut s = String::from("{\n");
            s.push_str(&format!("  \"degree\": {},\n", rep.degree));
            s.push_str(&format!("  \"pairs\": {},\n", rep.pairs));
            s.push_str("  \"rows\": [\n");
            for (i, row) in rep.rows.iter().enumerate() {
                s.push_str(&format!(
                    "    {{\"x\": {}, \"classes\": {}, \"reducible_classes\": {}, \
                     \"restricted_classes\": {}}}{}\n",
                    jf(row.x),
                    row.classes,
                    row.reducible_classes,
                    row.restricted_classes
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "null".into()),
                    if i + 1 < rep.rows.len() { "," } else { "" }
                ));
            }
            s.push_str("  ],\n");
            s.push_str(&format!("  \"slope\": {},\n", jopt(rep.slope)));
            s.push_str(&format!("  \"c_hat\": {},\n", jopt(rep.c_hat)));
            match &rep.congruence {
                None => s.push_str("  \"congruence\": null,\n"),
                Some(c) => s.push_str(&format!(
                    "  \"congruence\": {{\"modulus\": {}, \"given_residues\": {}, \
                     \"closed_residues\": {}, \"density\": {}, \"ratio_at_max\": {}}},\n",
                    c.modulus,
                    c.given_residues,
                    c.closed_residues,
                    jf(*c.density.numer() as f64 / *c.density.denom() as f64),
                    jopt(c.ratio_at_max)
                )),
            }
            s.push_str(&format!(
                "  \"stats\": {{\"candidates\": {}, \"reduced_forms\": {}, \"skipped\": {}, \
                 \"bound_violations\": {}, \"boundary_classes\": {}}}\n",
                rep.stats.candidates,
                rep.stats.reduced_forms,
                rep.stats.skipped,
                rep.stats.bound_violations,
                rep.stats.boundary_classes
            ));
            s.push_str("}\n");
            s
        }
        Format::Csv => {
            let mut s = String::from("x,classes,reducible_classes,restricted_classes\n");
            for row in &rep.rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    cf(row.x),
                    row.classes,
                    row.reducible_classes,
                    row.restricted_classes
                        .map(|v| v.to_string())
                        .unwrap_or_default()
                ));
            }
            s
        }
    }
}

// --------------------------------------------------------------- volume

fn json_estimate(est: &VolumeEstimate, indent: usize) -> String {
    let pad = " ".repeat(indent);
    let mut s = format!("{pad}{{\n");
    s.push_str(&format!("{pad}  \"degree\": {},\n", est.degree));
    s.push_str(&format!("{pad}  \"pairs\": {},\n", est.pairs));
    s.push_str(&format!("{pad}  \"cap\": {},\n", jf(est.cap)));
    s.push_str(&format!("{pad}  \"volume\": {},\n", jf(est.volume)));
    s.push_str(&format!(
        "{pad}  \"standard_error\": {},\n",
        jf(est.standard_error)
    ));
    s.push_str(&format!("{pad}  \"samples\": {},\n", est.samples));
    s.push_str(&format!("{pad}  \"accepted\": {},\n", est.accepted));
    s.push_str(&format!(
        "{pad}  \"acceptance_rate\": {},\n",
        jf(est.acceptance_rate)
    ));
    s.push_str(&format!(
        "{pad}  \"rejected_numeric\": {},\n",
        est.rejected_numeric
    ));
    s.push_str(&format!("{pad}  \"audited\": {},\n", est.audited));
    s.push_str(&format!(
        "{pad}  \"audit_failures\": {},\n",
        est.audit_failures
    ));
    s.push_str(&format!(
        "{pad}  \"tail_estimate\": {},\n",
        jf(est.tail_estimate)
    ));
    s.push_str(&format!("{pad}  \"strata\": [\n"));
    for (i, st) in est.strata.iter().enumerate() {
        s.push_str(&format!(
            "{pad}    {{\"leading_lo\": {}, \"leading_hi\": {}, \"samples\": {}, \
             \"accepted\": {}, \"proposal_measure\": {}, \"volume\": {}, \
             \"standard_error\": {}}}{}\n",
            jf(st.leading_lo),
            jf(st.leading_hi),
            st.samples,
            st.accepted,
            jf(st.proposal_measure),
            jf(st.volume),
            jf(st.standard_error),
            if i + 1 < est.strata.len() { "," } else { "" }
        ));
    }
    s.push_str(&format!("{pad}  ]\n"));
    s.push_str(&format!("{pad}}}"));
    s
}

fn render_volume(fmt: Format, est: &VolumeEstimate) -> String {
    match fmt {
        Format::Json => {
            let mut s = json_estimate(est, 0);
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from(
                "kind,leading_lo,leading_hi,samples,accepted,proposal_measure,volume,standard_error\n",
            );
            for (i, st) in est.strata.iter().enumerate() {
                s.push_str(&format!(
                    "{i},{},{},{},{},{},{},{}\n",
                    cf(st.leading_lo),
                    cf(st.leading_hi),
                    st.samples,
                    st.accepted,
                    cf(st.proposal_measure),
                    cf(st.volume),
                    cf(st.standard_error)
                ));
            }
            s.push_str(&format!("tail,,,,,,{},\n", cf(est.tail_estimate)));
            s.push_str(&format!(
                "total,,,{},{},,{},{}\n",
                est.samples,
                est.accepted,
                cf(est.volume),
                cf(est.standard_error)
            ));
            s
        }
    }
}

fn render_compare(fmt: Format, cmp: &volume::CompareReport) -> String {
    match fmt {
        Format::Json => {
            let mut s = String::from("{\n");
            s.push_str(&format!("  \"degree\": {},\n", cmp.degree));
            s.push_str(&format!("  \"pairs\": {},\n", cmp.pairs));
            s.push_str(&format!("  \"cap\": {},\n", jf(cmp.cap)));
            s.push_str(&format!("  \"classes\": {},\n", cmp.classes));
            s.push_str(&format!(
                "  \"stabilizer_index\": {},\n",
                cmp.stabilizer_index
            ));
            s.push_str(&format!("  \"ratio\": {},\n", jf(cmp.ratio)));
            s.push_str(&format!("  \"deviation\": {},\n", jf(cmp.deviation)));
            s.push_str(&format!(
                "  \"ratio_standard_error\": {},\n",
                jf(cmp.ratio_standard_error)
            ));
            s.push_str(&format!(
                "  \"integral_points_per_class\": {},\n",
                jf(cmp.integral_points_per_class)
            ));
            s.push_str("  \"estimate\":\n");
            s.push_str(&json_estimate(&cmp.estimate, 2));
            s.push_str("\n}\n");
            s
        }
        Format::Csv => {
            let mut s = String::from(
                "degree,pairs,cap,classes,stabilizer_index,volume,volume_standard_error,\
                 ratio,ratio_standard_error,deviation,integral_points_per_class\n",
            );
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                cmp.degree,
                cmp.pairs,
                cf(cmp.cap),
                cmp.classes,
                cmp.stabilizer_index,
                cf(cmp.estimate.volume),
                cf(cmp.estimate.standard_error),
                cf(cmp.ratio),
                cf(cmp.ratio_standard_error),
                cf(cmp.deviation),
                cf(cmp.integral_points_per_class)
            ));
            s
        }
    }
}

fn render_selftest(fmt: Format, rep: &selftest::SelftestReport) -> String {
    match fmt {
        Format::Json => {
            let mut s = String::from("{\n");
            s.push_str(&format!("  \"all_passed\": {},\n", rep.all_passed));
            s.push_str("  \"results\": [\n");
            for (i, r) in rep.results.iter().enumerate() {
                let metrics = join(
                    r.metrics
                        .iter()
                        .map(|(k, v)| format!("{}: {}", jstr(k), jf(*v))),
                );
                s.push_str(&format!(
                    "    {{\"id\": {}, \"name\": {}, \"passed\": {}, \"seconds\": {}, \
                     \"detail\": {}, \"metrics\": {{{metrics}}}}}{}\n",
                    r.id,
                    jstr(r.name),
                    r.passed,
                    jf(r.seconds),
                    jstr(&r.detail),
                    if i + 1 < rep.results.len() { "," } else { "" }
                ));
            }
            s.push_str("  ]\n}\n");
            s
        }
        Format::Csv => {
            let mut s = String::from("id,name,passed,seconds,detail\n");
            for r in &rep.results {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.id,
                    csv_cell(r.name),
                    r.passed,
                    cf(r.seconds),
                    csv_cell(&r.detail)
                ));
            }
            s
        }
    }
}

// ----------------------------------------------------------- formatting

/// JSON float: 17 significant digits, exponent notation.
fn jf(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

fn jopt(v: Option<f64>) -> String {
    v.map(jf).unwrap_or_else(|| "null".into())
}

/// CSV float: 12 significant digits, exponent notation.
fn cf(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        String::new()
    }
}

fn jstr(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn csv_cell(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn join<I: Iterator<Item = String>>(it: I) -> String {
    join_sep(it, ", ")
}

fn join_sep<I: Iterator<Item = String>>(it: I, sep: &str) -> String {
    it.collect::<Vec<_>>().join(sep)
}
