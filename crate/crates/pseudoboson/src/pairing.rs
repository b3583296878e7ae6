//! The convolution pairing `⟨F,G⟩ = (F̄∗G̃)(0)` on the monomial/delta class,
//! and its extension against test functions.
//!
//! The pairing is conjugate-linear in the first slot. On class members it is
//! the sesquilinear extension of `⟨x^n, δ^(m)⟩ = (−1)^n n! δ_{n,m}`, with the
//! swapped order defined by Hermitian symmetry. A poly×poly or delta×delta
//! contribution with nonzero coefficients on both sides has no value (the
//! convolution at 0 does not exist) and is reported as [`PairingError::Undefined`].
//!
//! Against a test function f the delta part pairs through Taylor data,
//! `⟨δ^(n), f⟩ = (−1)^n f^(n)(0)`, and the poly part through moments,
//! `⟨x^n, f⟩ = ∫xⁿ f`.

use std::fmt;

use thiserror::Error;

use crate::distribution::WeakDistribution;
use crate::numeric::{factorial, Prec, Value};
use crate::scalar::ExactScalar;
use crate::testfn::{Capability, CapabilityMissing, TestFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UndefinedKind {
    PolyPoly,
    DeltaDelta,
}

impl fmt::Display for UndefinedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UndefinedKind::PolyPoly => write!(f, "poly×poly"),
            UndefinedKind::DeltaDelta => write!(f, "delta×delta"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairingError {
    /// A same-type cross term with nonzero coefficients on both sides; the
    /// defining convolution does not exist there.
    #[error("pairing undefined: nonzero {kind} contribution at degrees ({left}, {right})")]
    Undefined {
        kind: UndefinedKind,
        left: u32,
        right: u32,
    },
    #[error(transparent)]
    CapabilityMissing(#[from] CapabilityMissing),
}

/// Result of a pairing. `exact` is set only when both arguments were exact
/// class members and the accumulated value stayed representable exactly.
#[derive(Debug, Clone)]
pub struct PairingValue {
    pub value: Value,
    pub exact: bool,
}

impl PairingValue {
    pub fn to_json(&self, digits: usize) -> serde_json::Value {
        serde_json::json!({
            "value": self.value.render(digits),
            "exact": self.exact,
        })
    }
}

/// `⟨F,G⟩` for two class members, conjugating the first argument's
/// coefficients. Exact.
pub fn pair(
    f: &WeakDistribution,
    g: &WeakDistribution,
    prec: Prec,
) -> Result<PairingValue, PairingError> {
    if f.has_poly_part() && g.has_poly_part() {
        return Err(PairingError::Undefined {
            kind: UndefinedKind::PolyPoly,
            left: f.max_poly_degree().unwrap(),
            right: g.max_poly_degree().unwrap(),
        });
    }
    if f.has_delta_part() && g.has_delta_part() {
        return Err(PairingError::Undefined {
            kind: UndefinedKind::DeltaDelta,
            left: f.max_delta_order().unwrap(),
            right: g.max_delta_order().unwrap(),
        });
    }
    let mut acc = Value::zero();
    // ⟨x^n, δ^(m)⟩ = (−1)^n n! δ_{n,m}
    for (n, cf) in f.poly_terms() {
        if let Some(cg) = g.delta_terms().find(|(m, _)| *m == n).map(|(_, c)| c) {
            let base = kernel_value(n);
            let term = Value::Exact(cf.conj().mul(cg).mul(&base));
            acc = acc.add(&term, prec);
        }
    }
    // ⟨δ^(m), x^n⟩ by Hermitian symmetry: conj((−1)^n n!) = (−1)^n n!
    for (m, cf) in f.delta_terms() {
        if let Some(cg) = g.poly_terms().find(|(n, _)| *n == m).map(|(_, c)| c) {
            let base = kernel_value(m);
            let term = Value::Exact(cf.conj().mul(cg).mul(&base));
            acc = acc.add(&term, prec);
        }
    }
    let exact = acc.is_exact();
    Ok(PairingValue { value: acc, exact })
}

/// `(−1)^n n!` as an exact scalar.
fn kernel_value(n: u32) -> ExactScalar {
    let mut f = factorial(n);
    if n % 2 == 1 {
        f = -f;
    }
    ExactScalar::from_rational(f)
}

/// `⟨F, f⟩` for a class member against a test function:
/// `Σ conj(c_δ(n))·(−1)^n n!·taylor_f(n) + Σ conj(c_x(k))·moment_f(k)`.
///
/// The result is never flagged `exact` (the right slot is not a class
/// member), but the carried [`Value`] stays exact when the provider's data
/// is exact.
pub fn pair_dist_fn(
    f: &WeakDistribution,
    g: &TestFunction,
    prec: Prec,
) -> Result<PairingValue, PairingError> {
    let mut acc = Value::zero();
    for (n, c) in f.delta_terms() {
        if !g.has_taylor() {
            return Err(g
                .missing(Capability::Taylor, format!("⟨δ^({n}), {}⟩", g.label()))
                .into());
        }
        // ⟨δ^(n), f⟩ = (−1)^n f^(n)(0) = (−1)^n n!·taylor(n)
        let t = g.taylor(n)?;
        let base = Value::Exact(kernel_value(n));
        let term = Value::Exact(c.conj()).mul(&base, prec).mul(&t, prec);
        acc = acc.add(&term, prec);
    }
    for (k, c) in f.poly_terms() {
        if !g.has_moments() {
            return Err(g
                .missing(Capability::Moments, format!("⟨x^{k}, {}⟩", g.label()))
                .into());
        }
        let m = g.moment(k, prec)?;
        let term = Value::Exact(c.conj()).mul(&m, prec);
        acc = acc.add(&term, prec);
    }
    Ok(PairingValue {
        value: acc,
        exact: false,
    })
}

/// `⟨f, F⟩` via Hermitian symmetry: `conj(⟨F, f⟩)`.
pub fn pair_fn_dist(
    f: &TestFunction,
    g: &WeakDistribution,
    prec: Prec,
) -> Result<PairingValue, PairingError> {
    let swapped = pair_dist_fn(g, f, prec)?;
    Ok(PairingValue {
        value: swapped.value.conj(),
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::numeric::Cx;
    use crate::testfn::{make_gaussian, make_indicator};
    use proptest::prelude::*;
    use rug::{Float, Rational};

    fn prec() -> Prec {
        Prec::default()
    }

    fn x_pow(n: u32) -> WeakDistribution {
        WeakDistribution::monomial(n, ExactScalar::one())
    }

    fn delta_n(n: u32) -> WeakDistribution {
        WeakDistribution::delta_deriv(n, ExactScalar::one())
    }

    #[test]
    fn biorthonormality_exact_to_thirty() {
        for n in 0..=30u32 {
            for m in 0..=30u32 {
                let v = pair(&families::phi(n), &families::psi(m), prec()).unwrap();
                assert!(v.exact);
                let expect = if n == m {
                    ExactScalar::one()
                } else {
                    ExactScalar::zero()
                };
                assert_eq!(v.value.as_exact().unwrap(), &expect, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn cross_degree_pairs_vanish() {
        let v = pair(&x_pow(2), &delta_n(1), prec()).unwrap();
        assert!(v.value.is_zero());
    }

    #[test]
    fn poly_poly_is_undefined() {
        let err = pair(&x_pow(1), &x_pow(1), prec()).unwrap_err();
        assert!(matches!(
            err,
            PairingError::Undefined {
                kind: UndefinedKind::PolyPoly,
                ..
            }
        ));
    }

    #[test]
    fn delta_delta_is_undefined() {
        assert!(pair(&delta_n(0), &delta_n(2), prec()).is_err());
    }

    #[test]
    fn mixed_arguments_are_undefined_against_any_same_type_part() {
        // stored coefficients are never zero, so any same-type overlap is a
        // nonzero contribution and the pairing is undefined
        let f = x_pow(1).try_add(&delta_n(1)).unwrap();
        assert!(pair(&f, &delta_n(2), prec()).is_err());
        assert!(pair(&f, &x_pow(2), prec()).is_err());
        // the zero distribution has no terms at all: defined, value 0
        let v = pair(&f, &WeakDistribution::zero(), prec()).unwrap();
        assert!(v.value.is_zero() && v.exact);
        // pure delta against mixed in the swapped order is equally undefined
        assert!(pair(&delta_n(0), &f, prec()).is_err());
    }

    #[test]
    fn hermitian_symmetry_on_exact_members() {
        let mut rng = {
            use rand::SeedableRng;
            rand_chacha::ChaCha8Rng::seed_from_u64(7)
        };
        for _ in 0..200 {
            // restrict to defined combinations: poly-only vs delta-only
            let f = random_poly_only(&mut rng);
            let g = random_delta_only(&mut rng);
            let fg = pair(&f, &g, prec()).unwrap();
            let gf = pair(&g, &f, prec()).unwrap();
            assert_eq!(
                fg.value.as_exact().unwrap(),
                &gf.value.as_exact().unwrap().conj()
            );
        }
    }

    fn random_poly_only(rng: &mut impl rand::Rng) -> WeakDistribution {
        let mut f = WeakDistribution::zero();
        for _ in 0..4 {
            let n = rng.random_range(0..20u32);
            let c = ExactScalar::from_i64_parts(
                (rng.random_range(-9i64..=9), rng.random_range(1i64..=5)),
                (rng.random_range(-9i64..=9), 1),
            );
            f = f.try_add(&WeakDistribution::monomial(n, c)).unwrap();
        }
        f
    }

    fn random_delta_only(rng: &mut impl rand::Rng) -> WeakDistribution {
        let mut f = WeakDistribution::zero();
        for _ in 0..4 {
            let n = rng.random_range(0..20u32);
            let c = ExactScalar::from_i64_parts(
                (rng.random_range(-9i64..=9), rng.random_range(1i64..=5)),
                (rng.random_range(-9i64..=9), 1),
            );
            f = f.try_add(&WeakDistribution::delta_deriv(n, c)).unwrap();
        }
        f
    }

    proptest! {
        #[test]
        fn sesquilinearity(re in -9i64..=9, im in -9i64..=9, den in 1i64..=4, n in 0u32..12) {
            let c = ExactScalar::from_i64_parts((re, den), (im, den));
            let f = x_pow(n);
            let g = delta_n(n);
            let base = pair(&f, &g, prec()).unwrap().value;
            let left = pair(&f.scale(&c), &g, prec()).unwrap().value;
            let right = pair(&f, &g.scale(&c), prec()).unwrap().value;
            // ⟨cF, G⟩ = conj(c)·⟨F,G⟩ and ⟨F, cG⟩ = c·⟨F,G⟩
            let expect_left = Value::Exact(c.conj()).mul(&base, prec());
            let expect_right = Value::Exact(c.clone()).mul(&base, prec());
            prop_assert_eq!(left.as_exact().unwrap(), expect_left.as_exact().unwrap());
            prop_assert_eq!(right.as_exact().unwrap(), expect_right.as_exact().unwrap());
        }
    }

    #[test]
    fn delta_against_function_is_point_evaluation() {
        let g = make_gaussian(Rational::from((1, 2))).unwrap();
        let v = pair_dist_fn(&delta_n(0), &g, prec()).unwrap();
        assert_eq!(v.value.as_exact().unwrap(), &ExactScalar::one());
        assert!(!v.exact);
    }

    #[test]
    fn psi_two_against_standard_gaussian() {
        // ⟨ψ_2, e^{−x²/2}⟩ = f''(0)/√2! = −1/√2
        let g = make_gaussian(Rational::from((1, 2))).unwrap();
        let v = pair_dist_fn(&families::psi(2), &g, prec()).unwrap();
        let exact = v.value.as_exact().unwrap();
        let minus_inv_sqrt2 = ExactScalar::sqrt_uint(2).inv().unwrap().neg();
        assert_eq!(exact, &minus_inv_sqrt2);
        // numeric confirmation by high-order finite differences of f at 0
        let fd = fd_derivative(|x| g.eval(x).unwrap(), 2);
        let got = v.value.to_cx(prec()).re.to_f64();
        assert!((fd / 2f64.sqrt() - got).abs() < 1e-10, "fd={fd} got={got}");
    }

    #[test]
    fn moment_pairing_matches_quadrature_value() {
        // ⟨x², e^{−x²}⟩ = √π/2
        let g = make_gaussian(Rational::from(1)).unwrap();
        let v = pair_dist_fn(&x_pow(2), &g, prec()).unwrap();
        let got = v.value.to_cx(prec()).re.to_f64();
        assert!((got - 0.886_226_925_452_758).abs() < 1e-12);
    }

    #[test]
    fn missing_capability_names_term() {
        let ind = make_indicator(Rational::new(), Rational::from(1)).unwrap();
        let err = pair_dist_fn(&delta_n(2), &ind, prec()).unwrap_err();
        match err {
            PairingError::CapabilityMissing(c) => {
                assert_eq!(c.capability, Capability::Taylor);
                assert!(c.term.contains("δ^(2)"), "term = {}", c.term);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn fn_dist_order_is_hermitian_mirror() {
        let g = make_gaussian(Rational::from(1)).unwrap();
        let f = delta_n(1).scale(&ExactScalar::i());
        let ab = pair_dist_fn(&f, &g, prec()).unwrap().value.to_cx(prec());
        let ba = pair_fn_dist(&g, &f, prec()).unwrap().value.to_cx(prec());
        assert!(ab.sub(&ba.conj()).abs().to_f64() < 1e-30);
    }

    /// Oracle for the `x·δ^(n) = −n·δ^(n−1)` rule: test both sides against
    /// Gaussian functions. The left side is `(−1)^n (x f)^(n)(0)` computed by
    /// finite differences; the right side goes through the pairing.
    #[test]
    fn apply_x_on_delta_oracle() {
        let g = make_gaussian(Rational::from((1, 2))).unwrap();
        for n in 1..=10u32 {
            let lhs_sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let xf = |x: &Float| {
                let v = g.eval(x).unwrap();
                v.scale(x)
            };
            let lhs = lhs_sign * fd_derivative(xf, n);
            let right = delta_n(n).apply_x();
            let rhs = pair_dist_fn(&right, &g, prec())
                .unwrap()
                .value
                .to_cx(prec())
                .re
                .to_f64();
            assert!((lhs - rhs).abs() < 1e-10, "n={n} lhs={lhs} rhs={rhs}");
        }
    }

    /// Plain central finite differences at a boosted working precision: the
    /// binomial stencil `h^{−n} Σ (−1)^k C(n,k) f((n/2−k)h)` with small h.
    fn fd_derivative(f: impl Fn(&Float) -> Cx, n: u32) -> f64 {
        let bits = Prec::from_digits(120).bits();
        let h = Float::with_val(bits, 1e-8);
        let mut acc = Float::with_val(bits, 0);
        let mut binom = Rational::from(1);
        for k in 0..=n {
            let node = Float::with_val(bits, f64::from(n) / 2.0 - f64::from(k)) * &h;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let w = Float::with_val(bits, &binom) * sign;
            acc += w * f(&node).re;
            binom *= Rational::from((i64::from(n) - i64::from(k), i64::from(k) + 1));
        }
        let mut hn = Float::with_val(bits, 1);
        for _ in 0..n {
            hn *= &h;
        }
        (acc / hn).to_f64()
    }
}
