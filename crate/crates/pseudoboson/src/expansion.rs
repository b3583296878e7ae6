//! Taylor reconstruction, dual Taylor series, and the quasi-basis
//! convergence engine.
//!
//! The quasi-basis identity expands `⟨f,g⟩` into either interleaved sum
//! `Σ ⟨f,φ_n⟩⟨ψ_n,g⟩` or `Σ ⟨f,ψ_n⟩⟨φ_n,g⟩`. Both collapse to products of
//! moments and Taylor coefficients; the scan builds the partial sums,
//! compares them against an independent quadrature reference, optionally
//! Euler-accelerates alternating tails, and reports a verdict. Divergence is
//! detected by monotone term growth and reported, not thrown: the expansion
//! ordering genuinely diverges for some argument pairs.

use std::collections::BTreeMap;

use rug::{Float, Rational};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::distribution::WeakDistribution;
use crate::numeric::{factorial, float_from_rational, Cx, PowerSeries, Prec, Value};
use crate::pairing::{self, PairingError};
use crate::quad;
use crate::scalar::ExactScalar;
use crate::testfn::{Capability, CapabilityMissing, SupportHint, TestFunction};

/// Consecutive strictly-increasing term magnitudes that trigger a diverging
/// verdict.
pub const DIVERGENCE_WINDOW: usize = 16;

/// Relative target for the quadrature reference value.
pub const REFERENCE_TARGET: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpansionError {
    #[error(transparent)]
    Capability(#[from] CapabilityMissing),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error("moment sequence has no finite support bound; the dual Taylor series does not define a distribution")]
    InfiniteMoments,
    #[error("delta series coefficient at order {order} is not exact")]
    NonExactCoefficient { order: u32 },
    #[error("reference integral not available: {reason}")]
    NotIntegrable { reason: String },
}

/// Which of the two interleaved quasi-basis sums to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiOrdering {
    /// `Σ ⟨f,φ_n⟩⟨ψ_n,g⟩`: needs moments of f and Taylor data of g.
    PhiPsi,
    /// `Σ ⟨f,ψ_n⟩⟨φ_n,g⟩`: needs Taylor data of f and moments of g.
    PsiPhi,
}

impl QuasiOrdering {
    pub fn as_str(self) -> &'static str {
        match self {
            QuasiOrdering::PhiPsi => "phi_psi",
            QuasiOrdering::PsiPhi => "psi_phi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceleration {
    None,
    Euler,
}

impl Acceleration {
    pub fn as_str(self) -> &'static str {
        match self {
            Acceleration::None => "none",
            Acceleration::Euler => "euler",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Converged { tol: f64, at: u32 },
    Diverging,
    Inconclusive,
}

impl Verdict {
    pub fn to_json(&self) -> Json {
        match self {
            Verdict::Converged { tol, at } => json!({
                "verdict": "converged", "tol": tol, "at": at,
            }),
            Verdict::Diverging => json!({ "verdict": "diverging" }),
            Verdict::Inconclusive => json!({ "verdict": "inconclusive" }),
        }
    }
}

/// Partial sums of one quasi-basis scan against its quadrature reference.
///
/// `partial_sums` holds the graded sequence: raw sums when no acceleration
/// was requested, Euler-accelerated estimates otherwise. Residuals are
/// absolute distances to the reference.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub ordering: QuasiOrdering,
    pub acceleration: Acceleration,
    pub terms: Vec<Cx>,
    pub partial_sums: Vec<Cx>,
    pub reference: Cx,
    pub reference_note: String,
    pub residuals: Vec<Float>,
    pub verdict: Verdict,
}

impl ConvergenceReport {
    pub fn to_json(&self, digits: usize) -> Json {
        json!({
            "ordering": self.ordering.as_str(),
            "acceleration": self.acceleration.as_str(),
            "reference": self.reference.to_json(digits),
            "reference_note": self.reference_note,
            "verdict": self.verdict.to_json(),
            "rows": self.partial_sums.iter().zip(&self.residuals).enumerate().map(|(n, (s, r))| {
                json!({
                    "n": n,
                    "partial_sum": s.to_json(digits),
                    "residual": r.to_string_radix(10, Some(6)),
                })
            }).collect::<Vec<_>>(),
        })
    }

    /// `(N, S_N, residual)` rows for external plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,S_N,residual\n");
        for (n, (s, r)) in self.partial_sums.iter().zip(&self.residuals).enumerate() {
            out.push_str(&format!(
                "{n},{},{}\n",
                s.re.to_string_radix(10, Some(20)),
                r.to_string_radix(10, Some(6))
            ));
        }
        out
    }
}

/// Moments `∫xⁿf dx` with an optional finiteness bound: `values(n) = 0` for
/// `n > support_bound` when the bound is set.
#[derive(Debug, Clone)]
pub struct MomentSequence {
    values: BTreeMap<u32, Value>,
    support_bound: Option<u32>,
}

impl MomentSequence {
    pub fn new(values: BTreeMap<u32, Value>, support_bound: Option<u32>) -> Self {
        let values = match support_bound {
            Some(bound) => values.into_iter().filter(|(n, _)| *n <= bound).collect(),
            None => values,
        };
        MomentSequence {
            values,
            support_bound,
        }
    }

    /// A finite list `(μ_0, …, μ_L)`; the bound is set to the last index.
    pub fn finite(values: Vec<Value>) -> Self {
        let bound = values.len().saturating_sub(1) as u32;
        MomentSequence {
            values: values
                .into_iter()
                .enumerate()
                .map(|(n, v)| (n as u32, v))
                .collect(),
            support_bound: Some(bound),
        }
    }

    /// Moments of a provider, explicitly without a support bound: feeding
    /// this into [`dual_taylor`] exercises the rejection path.
    pub fn from_function_unbounded(
        f: &TestFunction,
        up_to: u32,
        prec: Prec,
    ) -> Result<Self, CapabilityMissing> {
        let mut values = BTreeMap::new();
        for n in 0..=up_to {
            values.insert(n, f.moment(n, prec)?);
        }
        Ok(MomentSequence {
            values,
            support_bound: None,
        })
    }

    pub fn support_bound(&self) -> Option<u32> {
        self.support_bound
    }

    pub fn value(&self, n: u32) -> Value {
        self.values.get(&n).cloned().unwrap_or_else(Value::zero)
    }
}

/// Finite combination `Σ c_n δ^(n)` with exact-or-approx coefficients, the
/// output form of [`dual_taylor`].
#[derive(Debug, Clone)]
pub struct DeltaSeries {
    terms: BTreeMap<u32, Value>,
}

impl DeltaSeries {
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Value)> {
        self.terms.iter().map(|(&n, v)| (n, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Into the exact class; fails if any coefficient is a float.
    pub fn to_distribution(&self) -> Result<WeakDistribution, ExpansionError> {
        let mut acc = WeakDistribution::zero();
        for (&n, v) in &self.terms {
            match v.as_exact() {
                Some(s) => {
                    acc = acc
                        .try_add(&WeakDistribution::delta_deriv(n, s.clone()))
                        .expect("distinct orders cannot collide");
                }
                None => return Err(ExpansionError::NonExactCoefficient { order: n }),
            }
        }
        Ok(acc)
    }

    /// `⟨Σ c_n δ^(n), g⟩ = Σ conj(c_n)·(−1)^n n!·taylor_g(n)`, working for
    /// float coefficients too.
    pub fn pair_with_fn(&self, g: &TestFunction, prec: Prec) -> Result<Value, ExpansionError> {
        let mut acc = Value::zero();
        for (&n, c) in &self.terms {
            if !g.has_taylor() {
                return Err(g
                    .missing(Capability::Taylor, format!("⟨δ^({n}), {}⟩", g.label()))
                    .into());
            }
            let t = g.taylor(n)?;
            let mut base = factorial(n);
            if n % 2 == 1 {
                base = -base;
            }
            let term = c
                .conj()
                .mul(&Value::Exact(ExactScalar::from_rational(base)), prec)
                .mul(&t, prec);
            acc = acc.add(&term, prec);
        }
        Ok(acc)
    }

    pub fn to_json(&self, digits: usize) -> Json {
        Json::Array(
            self.terms
                .iter()
                .map(|(n, v)| json!({ "order": n, "coefficient": v.render(digits) }))
                .collect(),
        )
    }
}

/// `Σ_{n≤L} ((−1)^n μ(n)/n!)·δ^(n)` for a finitely-supported moment
/// sequence. An unbounded sequence is rejected: the series would not define
/// a distribution.
pub fn dual_taylor(mu: &MomentSequence, prec: Prec) -> Result<DeltaSeries, ExpansionError> {
    let Some(bound) = mu.support_bound() else {
        return Err(ExpansionError::InfiniteMoments);
    };
    let mut terms = BTreeMap::new();
    for n in 0..=bound {
        let v = mu.value(n);
        if v.is_zero() {
            continue;
        }
        let mut base = Rational::from(1) / factorial(n);
        if n % 2 == 1 {
            base = -base;
        }
        let coeff = v.mul(&Value::Exact(ExactScalar::from_rational(base)), prec);
        terms.insert(n, coeff);
    }
    Ok(DeltaSeries { terms })
}

#[derive(Debug, Clone)]
pub struct TaylorReport {
    pub series: PowerSeries,
    /// Sup error of the truncation on the requested interval, when the
    /// provider can be evaluated there.
    pub sup_error: Option<Float>,
    pub interval: Option<(Rational, Rational)>,
}

/// Degree-`n_max` truncation of `Σ ⟨ψ_n,f⟩·φ_n`, assembled strictly through
/// the pairing route (each coefficient is `⟨ψ_n,f⟩/√n!`, and the pairing
/// pulls `⟨δ^(n),f⟩` from the provider's Taylor data).
pub fn taylor_reconstruct(
    f: &TestFunction,
    n_max: u32,
    interval: Option<(Rational, Rational)>,
    prec: Prec,
) -> Result<TaylorReport, ExpansionError> {
    let mut coeffs = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let v = pairing::pair_dist_fn(&crate::families::psi(n), f, prec)?;
        // φ_n contributes x^n/√n!
        let norm = Value::Exact(ExactScalar::inv_sqrt_factorial(n));
        coeffs.push(v.value.mul(&norm, prec));
    }
    let series = PowerSeries::new(coeffs);
    let sup_error = match (&interval, f.has_eval()) {
        (Some((a, b)), true) => Some(sup_error_on_grid(f, &series, a, b, prec)?),
        _ => None,
    };
    Ok(TaylorReport {
        series,
        sup_error,
        interval,
    })
}

fn sup_error_on_grid(
    f: &TestFunction,
    series: &PowerSeries,
    a: &Rational,
    b: &Rational,
    prec: Prec,
) -> Result<Float, ExpansionError> {
    const GRID: u32 = 800;
    let p = prec.bits();
    let lo = float_from_rational(a, prec);
    let hi = float_from_rational(b, prec);
    let step = Float::with_val(p, &hi - &lo) / GRID;
    let mut worst = Float::with_val(p, 0);
    for i in 0..=GRID {
        let x = Float::with_val(p, &lo + &(Float::with_val(p, &step * i)));
        let fx = f.eval(&x)?;
        let px = series.eval(&x, prec);
        let err = fx.sub(&px).abs();
        if err > worst {
            worst = err;
        }
    }
    Ok(worst)
}

/// One quasi-basis scan: partial sums of the chosen interleaved sum,
/// quadrature reference, residuals and verdict. `tol` is the absolute
/// residual threshold for the converged verdict.
pub fn quasi_basis_scan(
    f: &TestFunction,
    g: &TestFunction,
    ordering: QuasiOrdering,
    n_max: u32,
    accel: Acceleration,
    tol: f64,
    prec: Prec,
) -> Result<ConvergenceReport, ExpansionError> {
    // capability preflight, naming the term that needs the data
    match ordering {
        QuasiOrdering::PhiPsi => {
            if !f.has_moments() {
                return Err(f
                    .missing(Capability::Moments, "⟨f,φ_n⟩ factors".to_string())
                    .into());
            }
            if !g.has_taylor() {
                return Err(g
                    .missing(Capability::Taylor, "⟨ψ_n,g⟩ factors".to_string())
                    .into());
            }
        }
        QuasiOrdering::PsiPhi => {
            if !f.has_taylor() {
                return Err(f
                    .missing(Capability::Taylor, "⟨f,ψ_n⟩ factors".to_string())
                    .into());
            }
            if !g.has_moments() {
                return Err(g
                    .missing(Capability::Moments, "⟨φ_n,g⟩ factors".to_string())
                    .into());
            }
        }
    }

    let (reference, reference_note) = reference_integral(f, g, prec)?;

    let mut terms = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let term = match ordering {
            // ⟨f,φ_n⟩⟨ψ_n,g⟩ = conj(moment_f(n))·taylor_g(n); the √n!
            // normalizations cancel between the two factors.
            QuasiOrdering::PhiPsi => {
                let m = f.moment(n, prec)?;
                let t = g.taylor(n)?;
                m.conj().mul(&t, prec)
            }
            // ⟨f,ψ_n⟩⟨φ_n,g⟩ = conj(taylor_f(n))·moment_g(n)
            QuasiOrdering::PsiPhi => {
                let t = f.taylor(n)?;
                let m = g.moment(n, prec)?;
                t.conj().mul(&m, prec)
            }
        };
        terms.push(term.to_cx(prec));
    }

    let raw_sums = running_sums(&terms, prec);
    let partial_sums = match accel {
        Acceleration::None => raw_sums,
        Acceleration::Euler => euler_graded(&terms, prec),
    };
    let residuals: Vec<Float> = partial_sums
        .iter()
        .map(|s| s.sub(&reference).abs())
        .collect();

    let verdict = if diverging(&terms) {
        Verdict::Diverging
    } else {
        match converged_at(&residuals, tol) {
            Some(at) => Verdict::Converged { tol, at },
            None => Verdict::Inconclusive,
        }
    };

    Ok(ConvergenceReport {
        ordering,
        acceleration: accel,
        terms,
        partial_sums,
        reference,
        reference_note,
        verdict,
        residuals,
    })
}

fn running_sums(terms: &[Cx], prec: Prec) -> Vec<Cx> {
    let mut acc = Cx::zero(prec);
    terms
        .iter()
        .map(|t| {
            acc = acc.add(t);
            acc.clone()
        })
        .collect()
}

/// Euler acceleration by repeated averaging of the partial sums of the
/// nonzero terms. Folding each new partial sum into the averaging triangle
/// and reading off its apex reproduces the Euler transform of an alternating
/// series; zero terms (odd orders of even integrands) are skipped so the
/// alternation is genuine.
fn euler_graded(terms: &[Cx], prec: Prec) -> Vec<Cx> {
    let mut row: Vec<Cx> = Vec::new();
    let mut acc = Cx::zero(prec);
    let mut out = Vec::with_capacity(terms.len());
    let half = Float::with_val(prec.bits(), 0.5);
    for t in terms {
        if !(t.re.is_zero() && t.im.is_zero()) {
            acc = acc.add(t);
            row.push(acc.clone());
            if row.len() >= 2 {
                for j in (0..row.len() - 1).rev() {
                    row[j] = row[j].add(&row[j + 1]).scale(&half);
                }
            }
        }
        out.push(row.first().cloned().unwrap_or_else(|| Cx::zero(prec)));
    }
    out
}

/// Monotone growth detector: a run of [`DIVERGENCE_WINDOW`] consecutive
/// strictly-increasing magnitudes among the nonzero terms.
fn diverging(terms: &[Cx]) -> bool {
    let mags: Vec<Float> = terms
        .iter()
        .filter(|t| !(t.re.is_zero() && t.im.is_zero()))
        .map(Cx::abs)
        .collect();
    let mut run = 0;
    for w in mags.windows(2) {
        if w[1] > w[0] {
            run += 1;
            if run >= DIVERGENCE_WINDOW {
                return true;
            }
        } else {
            run = 0;
        }
    }
    false
}

fn converged_at(residuals: &[Float], tol: f64) -> Option<u32> {
    let mut at = None;
    for (n, r) in residuals.iter().enumerate() {
        if r.to_f64() < tol {
            if at.is_none() {
                at = Some(n as u32);
            }
        } else {
            at = None;
        }
    }
    at
}

/// Independent reference: tanh-sinh quadrature of `∫ conj(f)·g` over a
/// domain chosen from the providers' support hints.
pub fn reference_integral(
    f: &TestFunction,
    g: &TestFunction,
    prec: Prec,
) -> Result<(Cx, String), ExpansionError> {
    if !f.has_eval() {
        return Err(f
            .missing(Capability::Eval, "reference quadrature ∫conj(f)·g".to_string())
            .into());
    }
    if !g.has_eval() {
        return Err(g
            .missing(Capability::Eval, "reference quadrature ∫conj(f)·g".to_string())
            .into());
    }
    let integrand = |x: &Float| f.eval(x).unwrap().conj().mul(&g.eval(x).unwrap());

    // Compact supports integrate over the (intersected) interval; otherwise
    // the combined Gaussian decay fixes a truncation radius.
    let compact = |h: &SupportHint| match h {
        SupportHint::Compact { a, b } => Some((a.clone(), b.clone())),
        _ => None,
    };
    if let Some((a, b)) = match (compact(f.support()), compact(g.support())) {
        (Some((fa, fb)), Some((ga, gb))) => Some((fa.max(ga), fb.min(gb))),
        (Some(i), None) | (None, Some(i)) => Some(i),
        (None, None) => None,
    } {
        if a >= b {
            let zero = Cx::zero(prec);
            return Ok((zero, "empty support intersection".to_string()));
        }
        let lo = float_from_rational(&a, prec);
        let hi = float_from_rational(&b, prec);
        let r = quad::integrate(integrand, &lo, &hi, prec, REFERENCE_TARGET);
        let note = format!("tanh-sinh quadrature of ∫conj(f)·g over [{a}, {b}]");
        return Ok((r.value, note));
    }

    let mut alpha = 0.0;
    let mut degree = 0u32;
    let mut rate = 0.0;
    for h in [f.support(), g.support()] {
        match h {
            SupportHint::GaussianDecay { alpha: a, poly_degree } => {
                alpha += a;
                degree += poly_degree;
            }
            SupportHint::ExpGrowth { rate: r } => rate += r,
            SupportHint::Compact { .. } => unreachable!("handled above"),
        }
    }
    if alpha <= 0.0 {
        return Err(ExpansionError::NotIntegrable {
            reason: "no Gaussian decay in either factor".to_string(),
        });
    }
    // solve α·R² − rate·R − degree·ln R ≥ thr by fixed point
    let thr = f64::from(prec.digits() + 12) * std::f64::consts::LN_10;
    let mut r: f64 = 10.0;
    for _ in 0..6 {
        r = ((thr + rate * r + f64::from(degree) * r.max(2.0).ln()) / alpha).sqrt();
    }
    let radius = Float::with_val(prec.bits(), r + 1.0);
    let lo = Float::with_val(prec.bits(), -&radius);
    let res = quad::integrate(integrand, &lo, &radius, prec, REFERENCE_TARGET);
    let note = format!(
        "tanh-sinh quadrature of ∫conj(f)·g over [−{r:.1}, {r:.1}] (Gaussian tail below precision floor)",
        r = r + 1.0
    );
    Ok((res.value, note))
}
