//! Dual Taylor series: expanding by moments instead of derivatives gives
//! `Σ (−1)^n μ(n)/n!·δ^(n)`, a genuine distribution exactly when only
//! finitely many moments are nonzero.
//!
//! ```bash
//! cargo run -p pseudoboson --example dual_taylor_series
//! ```

use pseudoboson::expansion::{dual_taylor, MomentSequence};
use pseudoboson::numeric::Value;
use pseudoboson::pairing::pair_dist_fn;
use pseudoboson::testfn::make_gaussian;
use pseudoboson::{ExactScalar, Prec};
use rug::Rational;

fn main() {
    let prec = Prec::default();

    // μ = (1, 0, 2): three nonzero moments give a two-term delta combination
    let mu = MomentSequence::finite(vec![
        Value::Exact(ExactScalar::one()),
        Value::zero(),
        Value::Exact(ExactScalar::from_int(2)),
    ]);
    let series = dual_taylor(&mu, prec).unwrap();
    let dist = series.to_distribution().unwrap();
    println!("moments (1, 0, 2)  →  {dist}");

    // pairing the result against a Gaussian agrees with Σ μ_n·g^(n)(0)/n!
    let g = make_gaussian(Rational::from((1, 2))).unwrap();
    let via_dist = pair_dist_fn(&dist, &g, prec).unwrap();
    let mut direct = Value::zero();
    for (n, weight) in [(0u32, 1i64), (2, 2)] {
        let t = g.taylor(n).unwrap();
        direct = direct.add(
            &t.mul(&Value::Exact(ExactScalar::from_int(weight)), prec),
            prec,
        );
    }
    println!("⟨dual, e^(−x²/2)⟩ via pairing = {}", via_dist.value);
    println!("Σ μ_n·taylor_n directly       = {direct}");

    // an unbounded moment sequence does not define a distribution; the
    // constructor refuses rather than summing a divergent series
    let unbounded = MomentSequence::from_function_unbounded(&g, 10, prec).unwrap();
    println!("\nGaussian moments with no support bound → {}", dual_taylor(&unbounded, prec).unwrap_err());
}
