//! Test functions known through three capabilities: Taylor coefficients at
//! zero, moments `∫xⁿf dx`, and pointwise evaluation.
//!
//! Each provider declares which capabilities it offers; consumers ask first
//! and get a [`CapabilityMissing`] error naming the missing capability and
//! the term that needed it. Providers keep their data exact wherever the
//! quantity is rational (Gaussian Taylor coefficients, indicator moments)
//! and fall back to high-precision floats where it is not (Gaussian moments
//! carry a √π).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rug::{Float, Rational};
use thiserror::Error;

use crate::numeric::{factorial, float_from_rational, float_pi, Cx, Prec, Value};
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capability {
    Taylor,
    Moments,
    Eval,
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capability::Taylor => write!(f, "taylor"),
            Capability::Moments => write!(f, "moments"),
            Capability::Eval => write!(f, "eval"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("test function '{function}' has no {capability} capability (needed for {term})")]
pub struct CapabilityMissing {
    pub function: String,
    pub capability: Capability,
    pub term: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TestFnError {
    #[error(transparent)]
    Capability(#[from] CapabilityMissing),
    #[error("invalid interval [{a}, {b}]: left endpoint must be smaller")]
    InvalidInterval { a: Rational, b: Rational },
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: Rational },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Caps {
    pub has_taylor: bool,
    pub has_moments: bool,
    pub has_eval: bool,
}

/// How the function behaves at infinity; used to pick quadrature domains.
#[derive(Debug, Clone, PartialEq)]
pub enum SupportHint {
    /// Dominated by `poly_degree`-growth times `e^{−alpha x²}`.
    GaussianDecay { alpha: f64, poly_degree: u32 },
    /// Supported on `[a, b]`.
    Compact { a: Rational, b: Rational },
    /// Grows (or decays) like `e^{rate·|x|}`; no Gaussian decay of its own.
    ExpGrowth { rate: f64 },
}

type TaylorFn = dyn Fn(u32) -> Value + Send + Sync;
type MomentFn = dyn Fn(u32, Prec) -> Value + Send + Sync;
type EvalFn = dyn Fn(&Float) -> Cx + Send + Sync;

/// A function addressed only through its declared capabilities.
#[derive(Clone)]
pub struct TestFunction {
    label: String,
    caps: Caps,
    support: SupportHint,
    taylor_fn: Option<Arc<TaylorFn>>,
    moment_fn: Option<Arc<MomentFn>>,
    eval_fn: Option<Arc<EvalFn>>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("label", &self.label)
            .field("caps", &self.caps)
            .field("support", &self.support)
            .finish()
    }
}

impl TestFunction {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn support(&self) -> &SupportHint {
        &self.support
    }

    pub fn has_taylor(&self) -> bool {
        self.caps.has_taylor
    }

    pub fn has_moments(&self) -> bool {
        self.caps.has_moments
    }

    pub fn has_eval(&self) -> bool {
        self.caps.has_eval
    }

    /// n-th Taylor coefficient of f at 0 (that is, `f^(n)(0)/n!`).
    pub fn taylor(&self, n: u32) -> Result<Value, CapabilityMissing> {
        match &self.taylor_fn {
            Some(t) => Ok(t(n)),
            None => Err(self.missing(Capability::Taylor, format!("taylor({n})"))),
        }
    }

    /// `∫ xⁿ f(x) dx`.
    pub fn moment(&self, n: u32, prec: Prec) -> Result<Value, CapabilityMissing> {
        match &self.moment_fn {
            Some(m) => Ok(m(n, prec)),
            None => Err(self.missing(Capability::Moments, format!("moment({n})"))),
        }
    }

    pub fn eval(&self, x: &Float) -> Result<Cx, CapabilityMissing> {
        match &self.eval_fn {
            Some(e) => Ok(e(x)),
            None => Err(self.missing(Capability::Eval, "eval(x)".to_string())),
        }
    }

    pub fn missing(&self, capability: Capability, term: String) -> CapabilityMissing {
        CapabilityMissing {
            function: self.label.clone(),
            capability,
            term,
        }
    }
}

fn exact_rational(q: Rational) -> Value {
    Value::Exact(ExactScalar::from_rational(q))
}

/// Taylor coefficient of `e^{−αx²}`: zero at odd orders, `(−α)^k/k!` at
/// order `2k`. Exact.
fn gaussian_taylor(alpha: &Rational, n: u32) -> Value {
    if n % 2 == 1 {
        return Value::zero();
    }
    let k = n / 2;
    let mut c = Rational::from(1) / factorial(k);
    for _ in 0..k {
        c *= -alpha.clone();
    }
    exact_rational(c)
}

/// `∫ xⁿ e^{−αx²} dx`: zero at odd orders; at order `2k` the closed form
/// `√(π/α)·(2k)!/(4^k k! α^k)`.
fn gaussian_moment(alpha: &Rational, n: u32, prec: Prec) -> Value {
    if n % 2 == 1 {
        return Value::zero();
    }
    let k = n / 2;
    let mut rat = factorial(2 * k) / factorial(k);
    for _ in 0..k {
        rat /= 4u32;
        rat /= alpha.clone();
    }
    let root = (float_pi(prec) / float_from_rational(alpha, prec)).sqrt();
    Value::Approx(Cx::real(float_from_rational(&rat, prec) * root))
}

fn gaussian_eval(alpha: &Rational, x: &Float) -> Cx {
    let ax2 = Float::with_val(x.prec(), x * x) * float_from_rational(alpha, Prec::from_bits(x.prec()));
    Cx::real((-ax2).exp())
}

/// `f(x) = e^{−αx²}`; all three capabilities.
pub fn make_gaussian(alpha: Rational) -> Result<TestFunction, TestFnError> {
    if alpha.cmp0() != Ordering::Greater {
        return Err(TestFnError::NonPositiveParameter {
            name: "alpha",
            value: alpha,
        });
    }
    let label = format!("gaussian:alpha={alpha}");
    let a_taylor = alpha.clone();
    let a_moment = alpha.clone();
    let a_eval = alpha.clone();
    let a_f64 = float_from_rational(&alpha, Prec::from_digits(40)).to_f64();
    Ok(TestFunction {
        label,
        caps: Caps {
            has_taylor: true,
            has_moments: true,
            has_eval: true,
        },
        support: SupportHint::GaussianDecay {
            alpha: a_f64,
            poly_degree: 0,
        },
        taylor_fn: Some(Arc::new(move |n| gaussian_taylor(&a_taylor, n))),
        moment_fn: Some(Arc::new(move |n, prec| gaussian_moment(&a_moment, n, prec))),
        eval_fn: Some(Arc::new(move |x| gaussian_eval(&a_eval, x))),
    })
}

/// `f(x) = p(x)·e^{−αx²}` for a rational-coefficient polynomial `p`
/// (coefficients in ascending degree order).
pub fn make_poly_gaussian(p: Vec<Rational>, alpha: Rational) -> Result<TestFunction, TestFnError> {
    if alpha.cmp0() != Ordering::Greater {
        return Err(TestFnError::NonPositiveParameter {
            name: "alpha",
            value: alpha,
        });
    }
    let poly: Vec<Rational> = {
        let mut v = p;
        while v.last().map(|c| c.cmp0() == Ordering::Equal).unwrap_or(false) {
            v.pop();
        }
        v
    };
    let degree = poly.len().saturating_sub(1) as u32;
    let label = format!("polygauss:{},alpha={alpha}", poly_label(&poly));
    let a_f64 = float_from_rational(&alpha, Prec::from_digits(40)).to_f64();
    let (pt, at) = (poly.clone(), alpha.clone());
    let (pm, am) = (poly.clone(), alpha.clone());
    let (pe, ae) = (poly, alpha);
    Ok(TestFunction {
        label,
        caps: Caps {
            has_taylor: true,
            has_moments: true,
            has_eval: true,
        },
        support: SupportHint::GaussianDecay {
            alpha: a_f64,
            poly_degree: degree,
        },
        taylor_fn: Some(Arc::new(move |n| {
            // (p·g) taylor_n = Σ_j p_j · g_taylor(n−j); all rational
            let mut acc = Rational::new();
            for (j, c) in pt.iter().enumerate() {
                let j = j as u32;
                if j > n || c.cmp0() == Ordering::Equal {
                    continue;
                }
                if let Value::Exact(s) = gaussian_taylor(&at, n - j) {
                    acc += Rational::from(s.re() * c);
                }
            }
            exact_rational(acc)
        })),
        moment_fn: Some(Arc::new(move |n, prec| {
            let mut acc = Value::zero();
            for (j, c) in pm.iter().enumerate() {
                if c.cmp0() == Ordering::Equal {
                    continue;
                }
                let m = gaussian_moment(&am, n + j as u32, prec);
                acc = acc.add(&m.mul(&exact_rational(c.clone()), prec), prec);
            }
            acc
        })),
        eval_fn: Some(Arc::new(move |x| {
            let mut acc = Float::with_val(x.prec(), 0);
            for c in pe.iter().rev() {
                acc = acc * x + float_from_rational(c, Prec::from_bits(x.prec()));
            }
            gaussian_eval(&ae, x).scale(&acc)
        })),
    })
}

/// Indicator of `[a, b]`: moments and evaluation only (it is not analytic).
pub fn make_indicator(a: Rational, b: Rational) -> Result<TestFunction, TestFnError> {
    if a >= b {
        return Err(TestFnError::InvalidInterval { a, b });
    }
    let label = format!("indicator:{a},{b}");
    let (am, bm) = (a.clone(), b.clone());
    let (ae, be) = (a.clone(), b.clone());
    Ok(TestFunction {
        label,
        caps: Caps {
            has_taylor: false,
            has_moments: true,
            has_eval: true,
        },
        support: SupportHint::Compact { a, b },
        taylor_fn: None,
        moment_fn: Some(Arc::new(move |n, _prec| {
            // ∫ₐᵇ xⁿ = (b^{n+1} − a^{n+1})/(n+1), exact
            let e = n + 1;
            let mut bp = Rational::from(1);
            let mut ap = Rational::from(1);
            for _ in 0..e {
                bp *= bm.clone();
                ap *= am.clone();
            }
            exact_rational((bp - ap) / Rational::from(e))
        })),
        eval_fn: Some(Arc::new(move |x| {
            let lo = float_from_rational(&ae, Prec::from_bits(x.prec()));
            let hi = float_from_rational(&be, Prec::from_bits(x.prec()));
            let inside = *x >= lo && *x <= hi;
            Cx::from_f64(if inside { 1.0 } else { 0.0 }, Prec::from_bits(x.prec()))
        })),
    })
}

/// `f(x) = e^{cx}`: Taylor and evaluation; no moments (the integrals
/// diverge).
pub fn make_exp(c: Rational) -> TestFunction {
    let label = if c == 1 {
        "exp".to_string()
    } else {
        format!("exp:c={c}")
    };
    let rate = float_from_rational(&c, Prec::from_digits(40)).to_f64().abs();
    let (ct, ce) = (c.clone(), c);
    TestFunction {
        label,
        caps: Caps {
            has_taylor: true,
            has_moments: false,
            has_eval: true,
        },
        support: SupportHint::ExpGrowth { rate },
        taylor_fn: Some(Arc::new(move |n| {
            let mut num = Rational::from(1);
            for _ in 0..n {
                num *= ct.clone();
            }
            exact_rational(num / factorial(n))
        })),
        moment_fn: None,
        eval_fn: Some(Arc::new(move |x| {
            let cx = Float::with_val(
                x.prec(),
                x * &float_from_rational(&ce, Prec::from_bits(x.prec())),
            );
            Cx::real(cx.exp())
        })),
    }
}

/// The zero function, with every capability.
pub fn make_zero() -> TestFunction {
    TestFunction {
        label: "zero".to_string(),
        caps: Caps {
            has_taylor: true,
            has_moments: true,
            has_eval: true,
        },
        support: SupportHint::Compact {
            a: Rational::new(),
            b: Rational::from(1),
        },
        taylor_fn: Some(Arc::new(|_| Value::zero())),
        moment_fn: Some(Arc::new(|_, _| Value::zero())),
        eval_fn: Some(Arc::new(|x| Cx::zero(Prec::from_bits(x.prec())))),
    }
}

fn poly_label(p: &[Rational]) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (j, c) in p.iter().enumerate() {
        if c.cmp0() == Ordering::Equal {
            continue;
        }
        let body = match j {
            0 => c.to_string(),
            1 if *c == 1 => "x".to_string(),
            1 => format!("{c}x"),
            _ if *c == 1 => format!("x^{j}"),
            _ => format!("{c}x^{j}"),
        };
        parts.push(body);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn indicator_moments_are_exact() {
        let f = make_indicator(q(0, 1), q(1, 1)).unwrap();
        let prec = Prec::default();
        let m0 = f.moment(0, prec).unwrap();
        let m3 = f.moment(3, prec).unwrap();
        assert_eq!(m0.as_exact().unwrap().re(), &q(1, 1));
        assert_eq!(m3.as_exact().unwrap().re(), &q(1, 4));
    }

    #[test]
    fn indicator_has_no_taylor() {
        let f = make_indicator(q(0, 1), q(1, 1)).unwrap();
        let err = f.taylor(0).unwrap_err();
        assert_eq!(err.capability, Capability::Taylor);
        assert!(err.function.contains("indicator"));
    }

    #[test]
    fn invalid_interval_rejected() {
        assert!(matches!(
            make_indicator(q(1, 1), q(0, 1)),
            Err(TestFnError::InvalidInterval { .. })
        ));
    }

    #[test]
    fn gaussian_taylor_is_exact() {
        let f = make_gaussian(q(1, 2)).unwrap();
        // coefficient of x^4 in e^{−x²/2}: (1/2)²/2! = 1/8
        let t4 = f.taylor(4).unwrap();
        assert_eq!(t4.as_exact().unwrap().re(), &q(1, 8));
        assert!(f.taylor(3).unwrap().is_zero());
    }

    #[test]
    fn gaussian_moment_matches_quadrature() {
        let prec = Prec::default();
        for alpha in [q(1, 2), q(1, 1), q(2, 1)] {
            let f = make_gaussian(alpha.clone()).unwrap();
            let af = float_from_rational(&alpha, prec).to_f64();
            for n in 0..=20u32 {
                let closed = f.moment(n, prec).unwrap().to_cx(prec);
                let numeric = quad::integrate_real_line(
                    |x: &Float| {
                        let mut xn = Float::with_val(x.prec(), 1);
                        for _ in 0..n {
                            xn *= x;
                        }
                        f.eval(x).unwrap().scale(&xn)
                    },
                    af,
                    n,
                    prec,
                    1e-25,
                );
                let diff = closed.sub(&numeric.value).abs().to_f64();
                assert!(diff < 1e-10, "alpha={alpha} n={n} diff={diff}");
            }
        }
    }

    #[test]
    fn poly_gaussian_combines_parts() {
        // (1 + x²)e^{−x²}: taylor_2 = 1·(−1) + 1·1 = 0
        let f = make_poly_gaussian(vec![q(1, 1), q(0, 1), q(1, 1)], q(1, 1)).unwrap();
        assert!(f.taylor(2).unwrap().is_zero());
        // moment_0 = ∫(1+x²)e^{−x²} = √π + √π/2 = (3/2)√π
        let prec = Prec::default();
        let m0 = f.moment(0, prec).unwrap().to_cx(prec);
        let expect = float_pi(prec).sqrt() * 1.5f64;
        assert!((m0.re - expect).abs().to_f64() < 1e-30);
    }

    #[test]
    fn exp_provider_lacks_moments() {
        let f = make_exp(q(1, 1));
        assert!(f.has_taylor() && !f.has_moments());
        assert_eq!(f.taylor(3).unwrap().as_exact().unwrap().re(), &q(1, 6));
        assert!(f.moment(0, Prec::default()).is_err());
    }
}
