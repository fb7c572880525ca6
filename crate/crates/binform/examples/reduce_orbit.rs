//! Reduction in action: scramble a form through random unimodular
//! substitutions, watch its coefficients blow up, and verify that
//! reduction brings every scramble back to the same canonical
//! representative.
//!
//! Run with: cargo run --release --example reduce_orbit

use binform::error::Result;
use binform::form::Form;
use binform::matrix::UnimodularMap;
use binform::reduce::{canonical_representative, reduce_form, stabilizer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(rng: &mut ChaCha8Rng, steps: usize) -> UnimodularMap {
    let mut g = UnimodularMap::identity();
    for _ in 0..steps {
        let step = if rng.gen_bool(0.5) {
            UnimodularMap::translation(rng.gen_range(-3..=3))
        } else {
            UnimodularMap::s()
        };
        g = step.compose(&g);
    }
    g
}

fn main() -> Result<()> {
    let f = Form::from_i64(&[1, 1, -2, -1])?;
    let rec = canonical_representative(&f)?;
    println!("seed form    {f}");
    println!("canonical    {}", rec.canonical);
    println!("theta        {:.12}", rec.theta);
    println!("stabilizer   order {}", rec.stabilizer_order);
    println!("boundary     {}", rec.boundary);

    let stab = stabilizer(&f)?;
    println!("\nsymmetries of the seed form:");
    for g in &stab {
        println!("  {g:?}  ->  {}", f.act(g));
    }

    println!("\nscrambles return to the same canonical:");
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..8 {
        let g = random_word(&mut rng, 12);
        let scrambled = f.act(&g);
        let r = reduce_form(&scrambled)?;
        let back = canonical_representative(&scrambled)?;
        assert_eq!(back.canonical, rec.canonical, "canonical must not depend on the route");
        let max_coeff = scrambled
            .coeffs_i64()
            .map(|v| v.iter().map(|c| c.abs()).max().unwrap_or(0))
            .unwrap_or(i64::MAX);
        println!(
            "  trial {trial}: |coeffs| up to {max_coeff:>12}  ->  reduced {}  (matrix {:?})",
            r.reduced, r.gamma
        );
    }
    println!("\nall scrambles agreed on {}", rec.canonical);
    Ok(())
}
