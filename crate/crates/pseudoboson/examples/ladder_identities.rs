//! The four ladder atoms on the monomial/delta class, and the exact
//! commutation relation they satisfy everywhere on it.
//!
//! ```bash
//! cargo run -p pseudoboson --example ladder_identities
//! ```

use pseudoboson::{Atom, ExactScalar, OperatorWord, WeakDistribution};

fn main() {
    // x·δ^(3) = −3·δ^(2): multiplication lowers delta derivatives
    let d3 = WeakDistribution::delta_deriv(3, ExactScalar::one());
    println!("x · δ^(3)  =  {}", d3.apply_x());

    // differentiation raises them, and shifts monomials down
    println!("D(δ^(1))   =  {}", WeakDistribution::delta_deriv(1, ExactScalar::one()).apply_d());
    println!("D(x^3)     =  {}", WeakDistribution::monomial(3, ExactScalar::one()).apply_d());
    println!("x · δ      =  {}", WeakDistribution::dirac().apply_x());

    // the commutator [a,b] acts as the identity on every class member,
    // exactly — here on a mixed element with complex coefficients
    let f = WeakDistribution::monomial(2, ExactScalar::from_int(3))
        .try_add(&WeakDistribution::delta_deriv(
            1,
            ExactScalar::i().mul(&ExactScalar::from_int(2)),
        ))
        .unwrap();
    println!("\nF = {f}");
    println!("(ab − ba)F − F = {}", f.commutator_residual());

    // operator words compose right to left; a† = −a and b† = b on this class
    let word = OperatorWord::new([Atom::ADag, Atom::B, Atom::A]);
    println!("\n({word})x^4 = {}", word.apply(&WeakDistribution::monomial(4, ExactScalar::one())));

    // exact radical bookkeeping: scaling twice by √2 is exactly 2
    let x = WeakDistribution::monomial(1, ExactScalar::one());
    let root2 = ExactScalar::sqrt_uint(2);
    println!("\n√2·(√2·x) = {}", x.scale(&root2).scale(&root2));
    // ...while adding √2·x to √3·x has no exact representation
    let clash = x.scale(&root2).try_add(&x.scale(&ExactScalar::sqrt_uint(3)));
    println!("√2·x + √3·x → {}", clash.unwrap_err());

    // canonical JSON with rational components only
    let g = WeakDistribution::monomial(2, ExactScalar::from_i64_parts((1, 2), (0, 1)));
    println!("\nserialized: {}", g.to_json());
}
