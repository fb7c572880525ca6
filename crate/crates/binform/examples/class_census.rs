//! The class census at small caps: definite quadratics checked against
//! the classical reduced-triple count, and the first totally real cubic
//! classes listed one by one.
//!
//! Run with: cargo run --release --example class_census

use binform::count::{enumerate_classes, gauss_class_count, CUBIC_INVARIANT_RATIO};
use binform::error::Result;

fn main() -> Result<()> {
    println!("== definite quadratics: census vs classical count ==");
    for cap in [50.0, 200.0, 1000.0] {
        let records = enumerate_classes(2, 1, cap, None)?;
        let classical = gauss_class_count(cap);
        println!(
            "  |disc| <= {cap:6}: {:5} classes   (classical count {classical}, {})",
            records.len(),
            if records.len() as u64 == classical { "agree" } else { "MISMATCH" }
        );
    }

    println!("\n== the first definite quadratic classes ==");
    for rec in enumerate_classes(2, 1, 15.0, None)? {
        println!(
            "  {:12}  disc {:3}  theta {:7.3}  stab {}{}",
            rec.canonical.to_string(),
            rec.canonical.discriminant()?,
            rec.theta,
            rec.stabilizer_order,
            if rec.boundary { "  [boundary]" } else { "" }
        );
    }

    println!("\n== the first totally real cubic classes ==");
    println!("   (theta = (8*sqrt(3)/9) * sqrt(disc); the smallest disc is 49)");
    let cubics = enumerate_classes(3, 0, 25.0, None)?;
    for rec in &cubics {
        let disc = rec.canonical.discriminant()?;
        println!(
            "  {:18}  disc {:4}  theta {:8.4}  stab {}{}",
            rec.canonical.to_string(),
            disc,
            rec.theta,
            rec.stabilizer_order,
            if rec.boundary { "  [boundary]" } else { "" }
        );
    }
    println!(
        "\n  check: smallest theta = {:.9} vs ratio * sqrt(49) = {:.9}",
        cubics.iter().map(|r| r.theta).fold(f64::INFINITY, f64::min),
        CUBIC_INVARIANT_RATIO * 7.0
    );
    println!("  mirror pairs: reversing the variables (determinant -1) swaps the two");
    println!("  classes of each discriminant; no unimodular change does.");
    Ok(())
}
