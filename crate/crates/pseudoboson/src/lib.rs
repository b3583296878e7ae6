//! Exact and high-precision calculus for pseudo-bosonic ladder operators on
//! the distribution class `span{x^n} ⊕ span{δ^(n)}`.
//!
//! The crate implements, as checkable computations:
//!
//! * exact arithmetic for complex rationals with square-root radicals and
//!   for the closed monomial/delta-derivative class ([`scalar`],
//!   [`distribution`]);
//! * the convolution pairing `⟨F,G⟩ = (F̄∗G̃)(0)` between class members and
//!   against test functions known through Taylor coefficients, moments and
//!   point evaluation ([`pairing`], [`testfn`]);
//! * the biorthogonal families `φ_n = x^n/√n!`, `ψ_n = (−1)^n δ^(n)/√n!`,
//!   their number operators and the basis-swap maps with all intertwining
//!   identities ([`families`]);
//! * Taylor reconstruction, dual Taylor series and the quasi-basis
//!   convergence engine with Euler acceleration ([`expansion`]);
//! * a two-mode truncated-Fock realization of the quantized damped/amplified
//!   oscillator pair with kernel scans and distributional-vacuum checks
//!   ([`bateman`]);
//! * identity check suites and a thin reporting CLI ([`check`], [`cli`]).
//!
//! Every runnable capability has a corresponding example under `examples/`.

pub mod bateman;
pub mod check;
pub mod cli;
pub mod distribution;
pub mod expansion;
pub mod families;
pub mod numeric;
pub mod pairing;
pub mod quad;
pub mod registry;
pub mod scalar;
pub mod testfn;

pub use distribution::{Atom, OperatorWord, WeakDistribution};
pub use numeric::{Cx, Prec, Value};
pub use scalar::ExactScalar;
