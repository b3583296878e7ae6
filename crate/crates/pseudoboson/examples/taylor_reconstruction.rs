//! Reconstructing a function from its pairings with the ψ family:
//! `Σ ⟨ψ_n,f⟩·φ_n` recovers the Taylor series, with coefficients kept exact
//! whenever the provider's data is exact.
//!
//! ```bash
//! cargo run -p pseudoboson --example taylor_reconstruction
//! ```

use pseudoboson::expansion::taylor_reconstruct;
use pseudoboson::testfn::{make_exp, make_gaussian};
use pseudoboson::Prec;
use rug::Rational;

fn main() {
    let prec = Prec::default();

    // e^x: the pairing route lands exactly on 1/n!
    let rep = taylor_reconstruct(&make_exp(Rational::from(1)), 10, None, prec).unwrap();
    println!("reconstruction of e^x (coefficients are exact rationals):");
    for n in 0..=10usize {
        println!("  coeff of x^{n:<2} = {}", rep.series.coeff(n));
    }

    // e^{−x²/2} truncated at degree 8, with its sup error on [−1,1]
    let gauss = make_gaussian(Rational::from((1, 2))).unwrap();
    let rep = taylor_reconstruct(
        &gauss,
        8,
        Some((Rational::from(-1), Rational::from(1))),
        prec,
    )
    .unwrap();
    println!("\nreconstruction of e^(−x²/2) to degree 8:");
    for n in (0..=8usize).step_by(2) {
        println!("  coeff of x^{n} = {}", rep.series.coeff(n));
    }
    println!(
        "sup error on [−1, 1]: {}",
        rep.sup_error.unwrap().to_string_radix(10, Some(6))
    );
}
