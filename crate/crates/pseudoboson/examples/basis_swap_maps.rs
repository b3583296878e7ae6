//! The maps S_φ and S_ψ: exact coefficient swaps on finite spans, the
//! intertwining identities they satisfy, and the moment-based extension that
//! reaches far beyond the spans (the indicator function is nowhere analytic
//! as a distribution input, yet its extension series converges everywhere).
//!
//! ```bash
//! cargo run -p pseudoboson --example basis_swap_maps
//! ```

use pseudoboson::families::{
    intertwine_residuals, s_phi_extend, s_phi_span, s_psi_span, BasisTag, FamilyIndexVector,
};
use pseudoboson::testfn::make_indicator;
use pseudoboson::{ExactScalar, Prec};
use rug::Rational;

fn main() {
    let prec = Prec::default();

    // S_φ(ψ_0 + 2ψ_3) = φ_0 + 2φ_3: a pure coefficient swap
    let v = FamilyIndexVector::new(
        BasisTag::Psi,
        [(0u32, ExactScalar::one()), (3, ExactScalar::from_int(2))],
    );
    let swapped = s_phi_span(&v).unwrap();
    println!("ψ-span {}  →  φ-span {}", v.to_distribution(), swapped.to_distribution());

    // the swaps invert each other on the spans
    let back = s_psi_span(&swapped).unwrap();
    println!("round trip recovers the span: {}", back == v);

    // wrong input basis is a reported error, not a silent retag
    println!("S_φ on a φ-span → {}", s_phi_span(&swapped).unwrap_err());

    // every applicable intertwining identity has an exactly-zero residual
    let span = FamilyIndexVector::new(
        BasisTag::Phi,
        [(0u32, ExactScalar::one()), (2, ExactScalar::i())],
    );
    println!("\nintertwining residuals on φ_0 + i·φ_2:");
    for r in intertwine_residuals(&span) {
        println!("  {:<24} residual = {}", r.id, r.residual);
    }

    // the moment extension of S_φ on the indicator of [0,1]:
    // α_n = 1/(n!(n+1)), and Σ α_n x^n converges for every radius
    let ind = make_indicator(Rational::new(), Rational::from(1)).unwrap();
    let rep = s_phi_extend(&ind, 12, prec).unwrap();
    println!("\nS_φ extension coefficients for the indicator of [0,1]:");
    for n in 0..=6usize {
        println!("  α_{n} = {}", rep.series.coeff(n));
    }
    println!("ratio-test diagnostics (tail ratio must stay below 1):");
    for d in rep.diagnostics.iter().filter(|d| d.radius % 3 == 1) {
        println!(
            "  R = {:>2}: max tail ratio {:.4}  convergent: {}",
            d.radius, d.max_tail_ratio, d.convergent
        );
    }
}
