//! The quasi-basis identity `⟨f,g⟩ = Σ ⟨f,φ_n⟩⟨ψ_n,g⟩` as a numerical scan:
//! geometric convergence, conditional convergence rescued by Euler
//! acceleration, and honest divergence for the reversed pair.
//!
//! ```bash
//! cargo run -p pseudoboson --example quasi_basis_scan
//! ```

use pseudoboson::expansion::{quasi_basis_scan, Acceleration, QuasiOrdering, Verdict};
use pseudoboson::testfn::make_gaussian;
use pseudoboson::Prec;
use rug::Rational;

fn describe(label: &str, rep: &pseudoboson::expansion::ConvergenceReport) {
    println!("{label}");
    println!("  reference = {} [{}]", rep.reference.to_string_digits(20), rep.reference_note);
    match &rep.verdict {
        Verdict::Converged { tol, at } => println!("  verdict: converged below {tol:.1e} from N = {at}"),
        Verdict::Diverging => println!("  verdict: diverging (monotone term growth detected)"),
        Verdict::Inconclusive => println!("  verdict: inconclusive at this truncation"),
    }
    for n in [10usize, 20, 40].into_iter().filter(|&n| n < rep.residuals.len()) {
        println!(
            "  residual at N={n:>3}: {}",
            rep.residuals[n].to_string_radix(10, Some(3))
        );
    }
    println!();
}

fn main() {
    let prec = Prec::default();
    let narrow = make_gaussian(Rational::from(1)).unwrap(); // e^{−x²}
    let wide = make_gaussian(Rational::from((1, 2))).unwrap(); // e^{−x²/2}

    // narrow against wide: terms shrink geometrically, the sum hits
    // √(2π/3) ≈ 1.4472025 to 1e−10 within sixty terms
    let rep = quasi_basis_scan(
        &narrow, &wide, QuasiOrdering::PhiPsi, 60, Acceleration::None, 1.4e-10, prec,
    )
    .unwrap();
    describe("f = e^(−x²), g = e^(−x²/2):", &rep);

    // the diagonal case is only conditionally convergent (terms ~ k^(−1/2));
    // Euler acceleration turns it into fast convergence to √π
    let rep = quasi_basis_scan(
        &wide, &wide, QuasiOrdering::PhiPsi, 400, Acceleration::Euler, 1e-6, prec,
    )
    .unwrap();
    describe("f = g = e^(−x²/2), Euler accelerated:", &rep);

    // reversing the roles makes the terms grow ~2^k/√k: the scan reports
    // divergence instead of looping
    let rep = quasi_basis_scan(
        &wide, &narrow, QuasiOrdering::PhiPsi, 80, Acceleration::None, 1e-10, prec,
    )
    .unwrap();
    describe("f = e^(−x²/2), g = e^(−x²):", &rep);

    // the machine-readable table behind the CLI's CSV output
    let rep = quasi_basis_scan(
        &narrow, &wide, QuasiOrdering::PhiPsi, 8, Acceleration::None, 1e-10, prec,
    )
    .unwrap();
    print!("{}", rep.to_csv());
}
