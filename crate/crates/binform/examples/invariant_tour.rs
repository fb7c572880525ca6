//! A tour of the invariant: compute theta for forms of each signature,
//! check it against the closed-form answers where those exist, and show
//! the minimizing point and quadratic covariant that come with it.
//!
//! Run with: cargo run --release --example invariant_tour

use binform::count::CUBIC_INVARIANT_RATIO;
use binform::error::Result;
use binform::form::RealForm;
use binform::julia::{julia_at_i, julia_invariant, theta_via_weights};

fn show(label: &str, coeffs: &[f64]) -> Result<()> {
    let f = RealForm::new(coeffs.to_vec())?;
    let r = julia_invariant(&f)?;
    let (theta_w, _) = theta_via_weights(&f)?;
    println!("{label}");
    println!("  coefficients     {coeffs:?}");
    println!("  theta            {:.12}", r.theta);
    println!("  weight route     {:.12}", theta_w);
    println!("  minimizer (t,u)  ({:.9}, {:.9})", r.point.t, r.point.u);
    println!(
        "  covariant        [{:.6}, {:.6}, {:.6}]",
        r.covariant[0], r.covariant[1], r.covariant[2]
    );
    println!("  value at i       {:.12}", julia_at_i(&f)?);
    Ok(())
}

fn main() -> Result<()> {
    println!("== definite quadratic: theta equals |disc| ==");
    show("2x^2 - xy + 4y^2   (|disc| = 31)", &[2.0, -1.0, 4.0])?;

    println!("\n== totally real cubic: theta = (8*sqrt(3)/9) * sqrt(disc) ==");
    show("x^3 - 3xy^2        (disc 108, theta = 16 exactly)", &[1.0, 0.0, -3.0, 0.0])?;
    show("x^3 + x^2y - 2xy^2 - y^3  (disc 49)", &[1.0, 1.0, -2.0, -1.0])?;
    println!(
        "  ratio constant   {:.16}  (8*sqrt(3)/9 = {:.16})",
        julia_invariant(&RealForm::new(vec![1.0, 1.0, -2.0, -1.0])?)?.theta / 49f64.sqrt(),
        CUBIC_INVARIANT_RATIO
    );

    println!("\n== one real root: no closed form, the minimizer decides ==");
    show("5x^3 - 4x^2y - 4xy^2 - 11y^3", &[5.0, -4.0, -4.0, -11.0])?;

    println!("\n== quartic ==");
    show("x^4 + y^4", &[1.0, 0.0, 0.0, 0.0, 1.0])?;

    println!("\n== homogeneity: scaling coefficients by s scales theta by s^2 ==");
    let base = julia_invariant(&RealForm::new(vec![1.0, 1.0, -2.0, -1.0])?)?.theta;
    for s in [2.0, 10.0] {
        let scaled = julia_invariant(&RealForm::new(
            [1.0, 1.0, -2.0, -1.0].iter().map(|c| s * c).collect(),
        )?)?
        .theta;
        println!("  s = {s:4}: theta scales by {:.12} (expect {})", scaled / base, s * s);
    }
    Ok(())
}
