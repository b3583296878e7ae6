//! The normalized families φ_n = x^n/√n! and ψ_n = (−1)^n δ^(n)/√n!:
//! ladder relations, number-operator eigenvalues, and exact biorthonormality
//! under the convolution pairing.
//!
//! ```bash
//! cargo run -p pseudoboson --example biorthogonal_families
//! ```

use pseudoboson::families::{apply_number, apply_number_dag, phi, psi};
use pseudoboson::pairing::pair;
use pseudoboson::{Atom, Prec};

fn main() {
    let prec = Prec::default();

    println!("φ_0 = {}   ψ_0 = {}", phi(0), psi(0));
    println!("φ_3 = {}", phi(3));
    println!("ψ_2 = {}", psi(2));

    // raising and lowering carry the √k factors exactly
    println!("\nb·φ_3  = {}   (√4·φ_4)", phi(3).apply_atom(Atom::B));
    println!("a·φ_3  = {}   (√3·φ_2)", phi(3).apply_atom(Atom::A));
    println!("a†·ψ_1 = {}   (√2·ψ_2)", psi(1).apply_atom(Atom::ADag));
    println!("a·φ_0  = {}", phi(0).apply_atom(Atom::A));

    // number operators: N φ_k = k φ_k and N† ψ_k = k ψ_k
    println!("\nN·φ_5  = {}", apply_number(&phi(5)));
    println!("N†·ψ_3 = {}", apply_number_dag(&psi(3)));
    // N itself is not diagonal on the ψ family: N ψ_0 = xδ' = −δ
    println!("N·ψ_0  = {}", apply_number(&psi(0)));

    // ⟨φ_n, ψ_m⟩ = δ_{n,m}, exactly, via (F̄∗G̃)(0)
    println!("\n⟨φ_n, ψ_m⟩ for n,m ≤ 6:");
    for n in 0..=6u32 {
        let row: Vec<String> = (0..=6u32)
            .map(|m| pair(&phi(n), &psi(m), prec).unwrap().value.to_string())
            .collect();
        println!("  n={n}: [{}]", row.join(", "));
    }

    // the pairing refuses genuinely divergent combinations
    let err = pair(&phi(1), &phi(1), prec).unwrap_err();
    println!("\n⟨φ_1, φ_1⟩ → {err}");
}
