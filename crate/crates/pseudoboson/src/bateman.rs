//! Two-mode truncated-Fock realization of the quantized damped/amplified
//! oscillator pair.
//!
//! States `|n₁,n₂⟩` are kept up to a total-quanta cutoff `n₁+n₂ ≤ T`. Every
//! operator declares its degree (the largest total-quanta change one
//! application can make); on the safe subspace of states with total quanta
//! `≤ T − d` a truncated degree-d product agrees with the untruncated
//! algebra, so all identity checks restrict to safe columns. The
//! distributional vacua `δ(x₁−x₂)` and `δ(x₁+x₂)` are certified in position
//! representation through the adjoint pairing
//! `⟨A φ₀₀, f⟩ = ∫ (A†f)(x, x) dx`.

use std::cmp::Ordering as CmpOrdering;
use std::collections::BTreeMap;
use std::sync::Arc;

use rug::{Float, Rational};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::numeric::{float_from_rational, Cx, Prec};
use crate::quad;

/// Calibrated lower bound for the joint-kernel singular values: the scans at
/// desk-scale truncations sit in the 0.47–0.77 range, so a reading below 0.1
/// would signal an emerging joint kernel.
pub const KERNEL_SIGMA_THRESHOLD: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BatemanError {
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: Rational },
    #[error("ω² = k/m − γ²/4m² = {omega_sq} is not strictly positive; this regime needs different techniques")]
    NonOscillatory { omega_sq: Rational },
    #[error("truncation T = {t} too small, need T ≥ {min}")]
    TruncationTooSmall { t: u32, min: u32 },
    #[error("unsupported test function: {0}")]
    UnsupportedTestFunction(String),
}

/// Oscillator data `(m, γ, k)` with the derived frequency
/// `ω² = k/m − γ²/4m²`, which must be strictly positive. `γ = 0` is allowed
/// and reduces the pair to two decoupled modes. `ℏ = 1` throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct BatemanParams {
    m: Rational,
    gamma: Rational,
    k: Rational,
}

impl BatemanParams {
    pub fn new(m: Rational, gamma: Rational, k: Rational) -> Result<Self, BatemanError> {
        if m.cmp0() != CmpOrdering::Greater {
            return Err(BatemanError::NonPositiveParameter { name: "m", value: m });
        }
        if gamma.cmp0() == CmpOrdering::Less {
            return Err(BatemanError::NonPositiveParameter {
                name: "gamma",
                value: gamma,
            });
        }
        if k.cmp0() != CmpOrdering::Greater {
            return Err(BatemanError::NonPositiveParameter { name: "k", value: k });
        }
        let params = BatemanParams { m, gamma, k };
        let omega_sq = params.omega_sq();
        if omega_sq.cmp0() != CmpOrdering::Greater {
            return Err(BatemanError::NonOscillatory { omega_sq });
        }
        Ok(params)
    }

    pub fn m(&self) -> &Rational {
        &self.m
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    /// Exact `ω² = k/m − γ²/(4m²)`.
    pub fn omega_sq(&self) -> Rational {
        let km = Rational::from(&self.k / &self.m);
        let g2 = Rational::from(&self.gamma * &self.gamma);
        let m2 = Rational::from(&self.m * &self.m) * 4u32;
        km - g2 / m2
    }

    pub fn omega(&self, prec: Prec) -> Float {
        float_from_rational(&self.omega_sq(), prec).sqrt()
    }

    pub fn to_json(&self) -> Json {
        json!({
            "m": self.m.to_string(),
            "gamma": self.gamma.to_string(),
            "k": self.k.to_string(),
            "omega_sq": self.omega_sq().to_string(),
        })
    }
}

/// Enumeration of `|n₁,n₂⟩` with `n₁+n₂ ≤ T`, ordered by (total, n₁).
#[derive(Debug)]
pub struct FockBasis {
    trunc: u32,
    states: Vec<(u32, u32)>,
    index: BTreeMap<(u32, u32), usize>,
}

impl FockBasis {
    pub fn new(trunc: u32) -> Arc<Self> {
        let mut states = Vec::new();
        for total in 0..=trunc {
            for n1 in 0..=total {
                states.push((n1, total - n1));
            }
        }
        states.sort_by_key(|&(n1, n2)| (n1 + n2, n1));
        let index = states
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i))
            .collect::<BTreeMap<_, _>>();
        Arc::new(FockBasis {
            trunc,
            states,
            index,
        })
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[(u32, u32)] {
        &self.states
    }

    pub fn index_of(&self, state: (u32, u32)) -> Option<usize> {
        self.index.get(&state).copied()
    }

    pub fn total(&self, i: usize) -> u32 {
        let (n1, n2) = self.states[i];
        n1 + n2
    }

    /// Indices of states with total quanta `≤ t_max`.
    pub fn safe_indices(&self, t_max: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.total(i) <= t_max).collect()
    }
}

/// Dense operator on a truncated two-mode Fock space with a declared degree.
#[derive(Debug, Clone)]
pub struct FockOperator {
    basis: Arc<FockBasis>,
    degree: u32,
    data: Vec<Cx>,
}

impl FockOperator {
    pub fn zeros(basis: Arc<FockBasis>, degree: u32, prec: Prec) -> Self {
        let dim = basis.dim();
        FockOperator {
            basis,
            degree,
            data: vec![Cx::zero(prec); dim * dim],
        }
    }

    pub fn identity(basis: Arc<FockBasis>, prec: Prec) -> Self {
        let dim = basis.dim();
        let mut op = FockOperator::zeros(basis, 0, prec);
        for i in 0..dim {
            op.data[i * dim + i] = Cx::one(prec);
        }
        op
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn entry(&self, row: usize, col: usize) -> &Cx {
        &self.data[row * self.dim() + col]
    }

    fn entry_mut(&mut self, row: usize, col: usize) -> &mut Cx {
        let dim = self.dim();
        &mut self.data[row * dim + col]
    }

    pub fn add(&self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.dim(), rhs.dim());
        let mut out = self.clone();
        out.degree = self.degree.max(rhs.degree);
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, rhs: &FockOperator) -> FockOperator {
        self.add(&rhs.scale_f64(-1.0))
    }

    pub fn scale(&self, c: &Cx) -> FockOperator {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.mul(c);
        }
        out
    }

    pub fn scale_f64(&self, t: f64) -> FockOperator {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            let f = Float::with_val(a.re.prec(), t);
            *a = a.scale(&f);
        }
        out
    }

    /// Matrix product; degrees add. Zero rows of the left factor are skipped,
    /// which makes products of ladder-band matrices cheap.
    pub fn mul(&self, rhs: &FockOperator, prec: Prec) -> FockOperator {
        assert_eq!(self.dim(), rhs.dim());
        let dim = self.dim();
        let mut out = FockOperator::zeros(
            self.basis.clone(),
            (self.degree + rhs.degree).min(self.basis.trunc()),
            prec,
        );
        for i in 0..dim {
            for k in 0..dim {
                let a = self.entry(i, k);
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let b = rhs.entry(k, j);
                    if b.re.is_zero() && b.im.is_zero() {
                        continue;
                    }
                    let cur = out.entry(i, j).add(&a.mul(b));
                    *out.entry_mut(i, j) = cur;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> FockOperator {
        let dim = self.dim();
        let mut out = self.clone();
        for i in 0..dim {
            for j in 0..dim {
                out.data[j * dim + i] = self.entry(i, j).conj();
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &FockOperator, prec: Prec) -> FockOperator {
        self.mul(rhs, prec).sub(&rhs.mul(self, prec))
    }

    pub fn apply(&self, v: &[Cx], prec: Prec) -> Vec<Cx> {
        let dim = self.dim();
        assert_eq!(v.len(), dim);
        (0..dim)
            .map(|i| {
                let mut acc = Cx::zero(prec);
                for (j, x) in v.iter().enumerate() {
                    let a = self.entry(i, j);
                    if !(a.re.is_zero() && a.im.is_zero()) {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Largest |entry| over the whole matrix.
    pub fn max_abs(&self) -> Float {
        let mut worst = Float::with_val(53, 0);
        for a in &self.data {
            let m = a.abs();
            if m > worst {
                worst = m;
            }
        }
        worst
    }

    /// Largest |entry| over columns whose state has total quanta `≤ t_max`:
    /// the residual of an operator identity restricted to the safe subspace.
    pub fn max_abs_on_safe_columns(&self, t_max: u32) -> Float {
        let dim = self.dim();
        let mut worst = Float::with_val(53, 0);
        for j in 0..dim {
            if self.basis.total(j) > t_max {
                continue;
            }
            for i in 0..dim {
                let m = self.entry(i, j).abs();
                if m > worst {
                    worst = m;
                }
            }
        }
        worst
    }

    /// Largest |entry| between states whose totals differ by more than the
    /// declared degree; zero when the band declaration is honest.
    pub fn band_violation(&self) -> Float {
        let dim = self.dim();
        let mut worst = Float::with_val(53, 0);
        for i in 0..dim {
            for j in 0..dim {
                let gap = self.basis.total(i).abs_diff(self.basis.total(j));
                if gap > self.degree {
                    let m = self.entry(i, j).abs();
                    if m > worst {
                        worst = m;
                    }
                }
            }
        }
        worst
    }

    /// Real f64 image of the matrix; the pseudo-bosonic combinations are all
    /// real, so this is exact up to rounding.
    fn to_real_f64(&self) -> nalgebra::DMatrix<f64> {
        let dim = self.dim();
        nalgebra::DMatrix::from_fn(dim, dim, |i, j| self.entry(i, j).re.to_f64())
    }
}

/// `‖MM† − M†M‖_max`: zero exactly when the matrix is normal.
pub fn nonnormality(op: &FockOperator, prec: Prec) -> Float {
    let adj = op.adjoint();
    op.mul(&adj, prec).sub(&adj.mul(op, prec)).max_abs()
}

/// `‖M − M†‖_max`.
pub fn hermiticity_residual(op: &FockOperator) -> Float {
    op.sub(&op.adjoint()).max_abs()
}

/// Standard two-mode annihilation operators with `⟨n−1|a|n⟩ = √n`,
/// degree 1.
pub fn build_bosonic(trunc: u32, prec: Prec) -> Result<(FockOperator, FockOperator), BatemanError> {
    if trunc < 2 {
        return Err(BatemanError::TruncationTooSmall { t: trunc, min: 2 });
    }
    let basis = FockBasis::new(trunc);
    let mut a1 = FockOperator::zeros(basis.clone(), 1, prec);
    let mut a2 = FockOperator::zeros(basis.clone(), 1, prec);
    for (j, &(n1, n2)) in basis.states().iter().enumerate() {
        if n1 >= 1 {
            let i = basis.index_of((n1 - 1, n2)).unwrap();
            *a1.entry_mut(i, j) = Cx::real(Float::with_val(prec.bits(), n1).sqrt());
        }
        if n2 >= 1 {
            let i = basis.index_of((n1, n2 - 1)).unwrap();
            *a2.entry_mut(i, j) = Cx::real(Float::with_val(prec.bits(), n2).sqrt());
        }
    }
    Ok((a1, a2))
}

/// The pseudo-bosonic combinations
/// `A₁ = (a₁ − a₂†)/√2`, `A₂ = (−a₁† + a₂)/√2`,
/// `B₁ = (a₁† + a₂)/√2`, `B₂ = (a₁ + a₂†)/√2`,
/// each of degree 1, with `[A_j, B_k] = δ_{jk}` on the safe subspace and
/// `B_j ≠ A_j†`. The combinations are parameter-free; the oscillator data
/// enters only through the Hamiltonians and the position representation.
pub struct PbOperators {
    pub a1: FockOperator,
    pub a2: FockOperator,
    pub b1: FockOperator,
    pub b2: FockOperator,
}

pub fn build_pb(trunc: u32, prec: Prec) -> Result<PbOperators, BatemanError> {
    if trunc < 3 {
        return Err(BatemanError::TruncationTooSmall { t: trunc, min: 3 });
    }
    let (a1, a2) = build_bosonic(trunc, prec)?;
    let sqrt2_inv = Float::with_val(prec.bits(), 2).sqrt().recip();
    let scale = |op: &FockOperator| op.scale(&Cx::real(sqrt2_inv.clone()));
    let a1d = a1.adjoint();
    let a2d = a2.adjoint();
    Ok(PbOperators {
        a1: scale(&a1.sub(&a2d)),
        a2: scale(&a2.sub(&a1d)),
        b1: scale(&a1d.add(&a2)),
        b2: scale(&a1.add(&a2d)),
    })
}

/// Eq-56 form: `H = ω(a₁†a₁ − a₂†a₂) + (iγ/2m)(a₁a₂ − a₁†a₂†)`, degree 2.
pub fn hamiltonian_bosonic(
    params: &BatemanParams,
    trunc: u32,
    prec: Prec,
) -> Result<FockOperator, BatemanError> {
    if trunc < 4 {
        return Err(BatemanError::TruncationTooSmall { t: trunc, min: 4 });
    }
    let (a1, a2) = build_bosonic(trunc, prec)?;
    let a1d = a1.adjoint();
    let a2d = a2.adjoint();
    let omega = params.omega(prec);
    let number_part = a1d.mul(&a1, prec).sub(&a2d.mul(&a2, prec));
    let mixing = a1.mul(&a2, prec).sub(&a1d.mul(&a2d, prec));
    let gamma_over_2m =
        float_from_rational(params.gamma(), prec) / (float_from_rational(params.m(), prec) * 2u32);
    let i_coeff = Cx::new(Float::with_val(prec.bits(), 0), gamma_over_2m);
    Ok(number_part
        .scale(&Cx::real(omega))
        .add(&mixing.scale(&i_coeff)))
}

/// Eq-510 form: `H = ω(B₁A₁ − B₂A₂) + (iγ/2m)(B₁A₁ + B₂A₂ + 1)`, depending
/// only on the pseudo-bosonic number operators `N_j = B_jA_j`.
pub fn hamiltonian_pb(
    params: &BatemanParams,
    trunc: u32,
    prec: Prec,
) -> Result<FockOperator, BatemanError> {
    if trunc < 4 {
        return Err(BatemanError::TruncationTooSmall { t: trunc, min: 4 });
    }
    let pb = build_pb(trunc, prec)?;
    let n1 = pb.b1.mul(&pb.a1, prec);
    let n2 = pb.b2.mul(&pb.a2, prec);
    let omega = params.omega(prec);
    let eye = FockOperator::identity(pb.a1.basis().clone(), prec);
    let gamma_over_2m =
        float_from_rational(params.gamma(), prec) / (float_from_rational(params.m(), prec) * 2u32);
    let i_coeff = Cx::new(Float::with_val(prec.bits(), 0), gamma_over_2m);
    Ok(n1
        .sub(&n2)
        .scale(&Cx::real(omega))
        .add(&n1.add(&n2).add(&eye).scale(&i_coeff)))
}

/// Max |entry| of `H₅₆ − H₅₁₀` on safe columns (degree-2 products, so
/// `t_max = T − 2`).
pub fn hamiltonian_residual(
    params: &BatemanParams,
    trunc: u32,
    prec: Prec,
) -> Result<Float, BatemanError> {
    let h56 = hamiltonian_bosonic(params, trunc, prec)?;
    let h510 = hamiltonian_pb(params, trunc, prec)?;
    Ok(h56.sub(&h510).max_abs_on_safe_columns(trunc - 2))
}

/// One truncation row of the joint-kernel scan.
#[derive(Debug, Clone)]
pub struct KernelScanRow {
    pub trunc: u32,
    pub dim_safe: usize,
    /// Smallest singular value of the stacked `(A₁, A₂)` on the safe
    /// subspace.
    pub sigma_min_pair: f64,
    /// Same for the stacked `(B₁†, B₂†)`.
    pub sigma_min_bdag_pair: f64,
    /// Single-operator comparison: stacking only `A₁` has visibly smaller
    /// singular values (near-kernel directions exist for one operator alone).
    pub sigma_min_single_a1: f64,
}

impl KernelScanRow {
    pub fn to_json(&self) -> Json {
        json!({
            "T": self.trunc,
            "dim_safe": self.dim_safe,
            "sigma_min_pair": self.sigma_min_pair,
            "sigma_min_bdag_pair": self.sigma_min_bdag_pair,
            "sigma_min_single_a1": self.sigma_min_single_a1,
        })
    }
}

/// For each truncation, the smallest singular value of the stacked lowering
/// pair restricted to safe columns (`t_max = T − 1` for degree-1 operators).
/// A strictly positive floor across truncations witnesses the absence of a
/// joint kernel; the same scan for `(B₁†, B₂†)` covers the second family.
pub fn joint_kernel_scan(
    params: &BatemanParams,
    truncs: &[u32],
    prec: Prec,
) -> Result<Vec<KernelScanRow>, BatemanError> {
    let _ = params; // the combinations are parameter-free; params is kept for report context
    let mut rows = Vec::new();
    for &t in truncs {
        if t < 4 {
            return Err(BatemanError::TruncationTooSmall { t, min: 4 });
        }
        let pb = build_pb(t, prec)?;
        let basis = pb.a1.basis().clone();
        let safe = basis.safe_indices(t - 1);
        let a1 = pb.a1.to_real_f64();
        let a2 = pb.a2.to_real_f64();
        let b1d = pb.b1.adjoint().to_real_f64();
        let b2d = pb.b2.adjoint().to_real_f64();
        let sigma_min_pair = stacked_sigma_min(&[&a1, &a2], &safe);
        let sigma_min_bdag_pair = stacked_sigma_min(&[&b1d, &b2d], &safe);
        let sigma_min_single_a1 = stacked_sigma_min(&[&a1], &safe);
        rows.push(KernelScanRow {
            trunc: t,
            dim_safe: safe.len(),
            sigma_min_pair,
            sigma_min_bdag_pair,
            sigma_min_single_a1,
        });
    }
    Ok(rows)
}

fn stacked_sigma_min(blocks: &[&nalgebra::DMatrix<f64>], safe_cols: &[usize]) -> f64 {
    let dim = blocks[0].nrows();
    let rows = dim * blocks.len();
    let mut stacked = nalgebra::DMatrix::zeros(rows, safe_cols.len());
    for (bi, block) in blocks.iter().enumerate() {
        for (cj, &j) in safe_cols.iter().enumerate() {
            for i in 0..dim {
                stacked[(bi * dim + i, cj)] = block[(i, j)];
            }
        }
    }
    let svd = stacked.svd(false, false);
    svd.singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Polynomial in two variables with float coefficients, the envelope `p` of
/// a test function `p(x₁,x₂)·e^{−(x₁²+x₂²)/2}`.
#[derive(Debug, Clone, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), f64>,
}

impl Poly2 {
    pub fn monomial(i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((i, j), 1.0);
        Poly2 { terms }
    }

    pub fn constant() -> Self {
        Poly2::monomial(0, 0)
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|&(i, j)| i + j)
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, key: (u32, u32), c: f64) {
        let e = self.terms.entry(key).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&key);
        }
    }

    fn add(&self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&k, &c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }

    fn scale(&self, t: f64) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&k, &c)| (k, c * t)).collect(),
        }
    }

    fn mul_x(&self, axis: usize) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), &c)| {
                    if axis == 0 {
                        ((i + 1, j), c)
                    } else {
                        ((i, j + 1), c)
                    }
                })
                .collect(),
        }
    }

    fn diff(&self, axis: usize) -> Poly2 {
        let mut out = Poly2::default();
        for (&(i, j), &c) in &self.terms {
            if axis == 0 && i >= 1 {
                out.add_term((i - 1, j), c * f64::from(i));
            }
            if axis == 1 && j >= 1 {
                out.add_term((i, j - 1), c * f64::from(j));
            }
        }
        out
    }

    fn eval(&self, x1: &Float, x2: &Float, prec: Prec) -> Float {
        let p = prec.bits();
        let mut acc = Float::with_val(p, 0);
        for (&(i, j), &c) in &self.terms {
            let mut term = Float::with_val(p, c);
            for _ in 0..i {
                term *= x1;
            }
            for _ in 0..j {
                term *= x2;
            }
            acc += term;
        }
        acc
    }

    pub fn label(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(&(i, j), &c)| {
                let mut s = String::new();
                if c != 1.0 || (i == 0 && j == 0) {
                    s.push_str(&format!("{c}"));
                }
                if i > 0 {
                    s.push_str(&format!("x1^{i}"));
                }
                if j > 0 {
                    s.push_str(&format!("x2^{j}"));
                }
                s
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Which distributional vacuum to probe: `δ(x₁−x₂)` against the `A_j`, or
/// `δ(x₁+x₂)` against the `B_j†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VacuumKind {
    Phi00,
    Psi00,
}

impl VacuumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VacuumKind::Phi00 => "phi00",
            VacuumKind::Psi00 => "psi00",
        }
    }
}

/// Position-representation action of the relevant adjoint on the polynomial
/// envelope: with `G = e^{−(x₁²+x₂²)/2}` and `∂_k(pG) = (∂_k p − x_k p)G`,
/// `a_k = √(mω/2)·x_k + √(1/2mω)·∂_k` maps
/// `p ↦ c_x x_k p + c_d (∂_k p − x_k p)`.
fn adjoint_envelope(
    params: &BatemanParams,
    which: VacuumKind,
    j: usize,
    p: &Poly2,
    prec: Prec,
) -> Poly2 {
    let omega = params.omega(prec).to_f64();
    let m = float_from_rational(params.m(), prec).to_f64();
    let c_x = (m * omega / 2.0).sqrt();
    let c_d = (1.0 / (2.0 * m * omega)).sqrt();
    let lower = |axis: usize, p: &Poly2| {
        // a_k on the envelope
        p.mul_x(axis)
            .scale(c_x)
            .add(&p.diff(axis).add(&p.mul_x(axis).scale(-1.0)).scale(c_d))
    };
    let raise = |axis: usize, p: &Poly2| {
        // a_k† on the envelope
        p.mul_x(axis)
            .scale(c_x)
            .add(&p.diff(axis).add(&p.mul_x(axis).scale(-1.0)).scale(-c_d))
    };
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    match (which, j) {
        // A₁† = (a₁† − a₂)/√2
        (VacuumKind::Phi00, 1) => raise(0, p).add(&lower(1, p).scale(-1.0)).scale(inv_sqrt2),
        // A₂† = (−a₁ + a₂†)/√2
        (VacuumKind::Phi00, 2) => lower(0, p).scale(-1.0).add(&raise(1, p)).scale(inv_sqrt2),
        // B₁† = B₂ = (a₁ + a₂†)/√2
        (VacuumKind::Psi00, 1) => lower(0, p).add(&raise(1, p)).scale(inv_sqrt2),
        // B₂† = B₁ = (a₁† + a₂)/√2
        (VacuumKind::Psi00, 2) => raise(0, p).add(&lower(1, p)).scale(inv_sqrt2),
        _ => panic!("mode index must be 1 or 2"),
    }
}

/// `⟨A_j φ₀₀, f⟩` (or `⟨B_j† ψ₀₀, f⟩`) computed as the 1D integral of the
/// adjoint-transformed test function along the support line of the vacuum
/// candidate: the diagonal `x₂ = x₁` for `φ₀₀`, the anti-diagonal
/// `x₂ = −x₁` for `ψ₀₀`. An optional `shift` probes the perturbed candidate
/// `δ(x₁ − x₂ − ε)` (resp. `δ(x₁ + x₂ − ε)`).
pub fn weak_vacuum_residual(
    params: &BatemanParams,
    which: VacuumKind,
    j: usize,
    p: &Poly2,
    shift: Option<&Rational>,
    prec: Prec,
) -> Result<Float, BatemanError> {
    if p.degree() > 8 {
        return Err(BatemanError::UnsupportedTestFunction(format!(
            "polynomial degree {} exceeds 8",
            p.degree()
        )));
    }
    if j != 1 && j != 2 {
        return Err(BatemanError::UnsupportedTestFunction(format!(
            "mode index {j} must be 1 or 2"
        )));
    }
    let q = adjoint_envelope(params, which, j, p, prec);
    let eps = shift
        .map(|s| float_from_rational(s, prec))
        .unwrap_or_else(|| Float::with_val(prec.bits(), 0));
    let sign: f64 = match which {
        VacuumKind::Phi00 => 1.0,
        VacuumKind::Psi00 => -1.0,
    };
    let integrand = move |t: &Float| {
        let pb = t.prec();
        let x1 = Float::with_val(pb, t + &eps);
        let x2 = Float::with_val(pb, t * sign);
        let envelope = q.eval(&x1, &x2, Prec::from_bits(pb));
        let expo = (Float::with_val(pb, &x1 * &x1) + Float::with_val(pb, &x2 * &x2)) / 2u32;
        Cx::real(envelope * (-expo).exp())
    };
    // the exponent is −(t² + εt + ε²/2) along either line: unit Gaussian decay
    let r = quad::integrate_real_line(integrand, 1.0, p.degree() + 1, prec, 1e-25);
    Ok(r.value.abs())
}

/// The fixed battery of polynomial-Gaussian envelopes used by the vacuum
/// certification.
pub fn standard_battery() -> Vec<Poly2> {
    let m = Poly2::monomial;
    vec![
        Poly2::constant(),
        m(1, 0),
        m(0, 1),
        m(1, 1),
        m(2, 0),
        m(0, 2),
        m(2, 1),
        m(1, 2),
        m(3, 1),
        m(2, 2),
        m(4, 0),
        m(3, 3),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn prec() -> Prec {
        Prec::default()
    }

    fn standard_params() -> BatemanParams {
        BatemanParams::new(q(1, 1), q(1, 2), q(1, 1)).unwrap()
    }

    #[test]
    fn parameter_guard_rejects_overdamped() {
        // ω² = k/m − γ²/4m² ≤ 0: γ = 2, m = 1, k = 1 gives ω² = 0
        let err = BatemanParams::new(q(1, 1), q(2, 1), q(1, 1)).unwrap_err();
        assert!(matches!(err, BatemanError::NonOscillatory { .. }));
        let err = BatemanParams::new(q(1, 1), q(3, 1), q(1, 1)).unwrap_err();
        assert!(matches!(err, BatemanError::NonOscillatory { .. }));
        assert!(BatemanParams::new(q(-1, 1), q(1, 2), q(1, 1)).is_err());
    }

    #[test]
    fn ccr_on_safe_subspace() {
        let p = prec();
        for t in [4u32, 10, 16] {
            let (a1, a2) = build_bosonic(t, p).unwrap();
            let eye = FockOperator::identity(a1.basis().clone(), p);
            for (aj, ak, expect_id) in [
                (&a1, &a1, true),
                (&a1, &a2, false),
                (&a2, &a1, false),
                (&a2, &a2, true),
            ] {
                let mut c = aj.commutator(&ak.adjoint(), p);
                if expect_id {
                    c = c.sub(&eye);
                }
                let r = c.max_abs_on_safe_columns(t - 2).to_f64();
                assert!(r < 1e-12, "T={t} residual {r}");
            }
        }
    }

    #[test]
    fn bosonic_band_structure_and_entries() {
        let p = prec();
        let (a1, a2) = build_bosonic(6, p).unwrap();
        assert!(a1.band_violation().to_f64() == 0.0);
        // a1|0,n⟩ = 0
        let basis = a1.basis().clone();
        let j = basis.index_of((0, 3)).unwrap();
        for i in 0..basis.dim() {
            assert!(a1.entry(i, j).abs().to_f64() == 0.0);
        }
        // a2†|1,1⟩ = √2|1,2⟩
        let a2d = a2.adjoint();
        let j = basis.index_of((1, 1)).unwrap();
        let i = basis.index_of((1, 2)).unwrap();
        assert!((a2d.entry(i, j).re.to_f64() - 2f64.sqrt()).abs() < 1e-30);
    }

    #[test]
    fn pseudo_bosonic_relations() {
        let p = prec();
        let t = 8;
        let pb = build_pb(t, p).unwrap();
        let eye = FockOperator::identity(pb.a1.basis().clone(), p);
        let pairs: [(&FockOperator, &FockOperator, bool); 4] = [
            (&pb.a1, &pb.b1, true),
            (&pb.a1, &pb.b2, false),
            (&pb.a2, &pb.b1, false),
            (&pb.a2, &pb.b2, true),
        ];
        for (a, b, expect_id) in pairs {
            let mut c = a.commutator(b, p);
            if expect_id {
                c = c.sub(&eye);
            }
            let r = c.max_abs_on_safe_columns(t - 2).to_f64();
            assert!(r < 1e-12, "residual {r}");
        }
        // [A1,A2], [B1,B2] also vanish there
        for (x, y) in [(&pb.a1, &pb.a2), (&pb.b1, &pb.b2)] {
            let r = x.commutator(y, p).max_abs_on_safe_columns(t - 2).to_f64();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn b_is_not_a_dagger() {
        let pb = build_pb(6, prec()).unwrap();
        let gap = pb.b1.sub(&pb.a1.adjoint()).max_abs().to_f64();
        assert!(gap > 0.9, "max entry {gap}");
    }

    #[test]
    fn lowering_telescopes_on_diagonal_sums() {
        // A₁ Σ_{n≤N}|n,n⟩ = −√((N+1)/2)·|N,N+1⟩
        let p = prec();
        let t = 10;
        let pb = build_pb(t, p).unwrap();
        let basis = pb.a1.basis().clone();
        let n_top = 3u32;
        let mut v = vec![Cx::zero(p); basis.dim()];
        for n in 0..=n_top {
            v[basis.index_of((n, n)).unwrap()] = Cx::one(p);
        }
        let out = pb.a1.apply(&v, p);
        let target = basis.index_of((n_top, n_top + 1)).unwrap();
        let expect = -((f64::from(n_top) + 1.0) / 2.0).sqrt();
        for (i, c) in out.iter().enumerate() {
            let got = c.re.to_f64();
            if i == target {
                assert!((got - expect).abs() < 1e-25, "entry {got} vs {expect}");
            } else {
                assert!(got.abs() < 1e-25, "stray entry at {i}: {got}");
            }
        }
    }

    #[test]
    fn hamiltonian_forms_agree_on_safe_subspace() {
        let p = prec();
        let r = hamiltonian_residual(&standard_params(), 8, p).unwrap().to_f64();
        assert!(r < 1e-12, "residual {r}");
        // five fixed random-ish parameter triples with ω² > 0
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let mut tried = 0;
        while tried < 5 {
            let m = q(rng.random_range(1i64..=4), rng.random_range(1i64..=2));
            let k = q(rng.random_range(1i64..=4), rng.random_range(1i64..=2));
            let gamma = q(rng.random_range(0i64..=2), rng.random_range(1i64..=3));
            let Ok(params) = BatemanParams::new(m, gamma, k) else {
                continue;
            };
            tried += 1;
            let r = hamiltonian_residual(&params, 8, p).unwrap().to_f64();
            assert!(r < 1e-12, "residual {r} for {params:?}");
        }
    }

    #[test]
    fn undamped_hamiltonian_is_diagonal() {
        let p = prec();
        let params = BatemanParams::new(q(1, 1), q(0, 1), q(1, 1)).unwrap();
        let t = 6;
        let h = hamiltonian_bosonic(&params, t, p).unwrap();
        let basis = h.basis().clone();
        let omega = params.omega(p).to_f64();
        for j in 0..basis.dim() {
            let (n1, n2) = basis.states()[j];
            for i in 0..basis.dim() {
                let got = h.entry(i, j).abs().to_f64();
                if i == j {
                    let expect = omega * (f64::from(n1) - f64::from(n2));
                    assert!((h.entry(i, j).re.to_f64() - expect).abs() < 1e-25);
                } else {
                    assert!(got < 1e-25, "off-diagonal entry {got}");
                }
            }
        }
    }

    #[test]
    fn truncated_hamiltonian_is_hermitian_but_number_ops_are_not_normal() {
        // the iγ mixing term is i·(anti-Hermitian) = Hermitian, so the
        // truncated H is self-adjoint (and normal); the genuinely non-normal
        // objects are the pseudo number operators N_j = B_jA_j
        let p = prec();
        let params = standard_params();
        let h = hamiltonian_bosonic(&params, 8, p).unwrap();
        assert!(hermiticity_residual(&h).to_f64() < 1e-12);
        assert!(nonnormality(&h, p).to_f64() < 1e-12);
        let pb = build_pb(8, p).unwrap();
        let n1 = pb.b1.mul(&pb.a1, p);
        assert!(nonnormality(&n1, p).to_f64() > 0.5);
        assert!(hermiticity_residual(&n1).to_f64() > 0.5);
    }

    #[test]
    fn kernel_scan_stays_above_threshold() {
        let p = prec();
        let rows = joint_kernel_scan(&standard_params(), &[4, 6, 8, 10, 12], p).unwrap();
        // oracle values from an independent eigensolve: 0.7654, 0.6448,
        // 0.5679, 0.5134, 0.4721
        let expect = [0.765_367, 0.644_806, 0.567_933, 0.513_381, 0.472_066];
        for (row, e) in rows.iter().zip(expect) {
            assert!(
                row.sigma_min_pair > KERNEL_SIGMA_THRESHOLD,
                "T={} sigma {}",
                row.trunc,
                row.sigma_min_pair
            );
            assert!((row.sigma_min_pair - e).abs() < 1e-4, "T={}", row.trunc);
            assert!((row.sigma_min_bdag_pair - e).abs() < 1e-4);
            // a single operator alone has strictly smaller floor
            assert!(row.sigma_min_single_a1 < row.sigma_min_pair);
            assert!(row.sigma_min_single_a1 > 0.1);
        }
    }

    #[test]
    fn diagonal_sum_is_not_a_kernel_direction() {
        // ‖A₁ v‖ = 1/√2 for the normalized diagonal sum
        let p = prec();
        let t = 12;
        let pb = build_pb(t, p).unwrap();
        let basis = pb.a1.basis().clone();
        let n_top = (t - 1) / 2;
        let norm = 1.0 / (f64::from(n_top) + 1.0).sqrt();
        let mut v = vec![Cx::zero(p); basis.dim()];
        for n in 0..=n_top {
            v[basis.index_of((n, n)).unwrap()] = Cx::from_f64(norm, p);
        }
        let out = pb.a1.apply(&v, p);
        let norm_out: f64 = out.iter().map(|c| c.norm_sqr().to_f64()).sum::<f64>().sqrt();
        assert!((norm_out - 1.0 / 2f64.sqrt()).abs() < 1e-12, "{norm_out}");
    }

    #[test]
    fn vacuum_battery_annihilates_true_candidates() {
        let p = prec();
        let params = standard_params();
        for poly in standard_battery() {
            for which in [VacuumKind::Phi00, VacuumKind::Psi00] {
                for j in [1, 2] {
                    let r = weak_vacuum_residual(&params, which, j, &poly, None, p)
                        .unwrap()
                        .to_f64();
                    assert!(
                        r < 1e-10,
                        "which={which:?} j={j} p={} residual {r}",
                        poly.label()
                    );
                }
            }
        }
    }

    #[test]
    fn perturbed_candidate_fails_the_battery() {
        let p = prec();
        let params = standard_params();
        let eps = q(1, 10);
        let mut worst: f64 = 0.0;
        for poly in standard_battery() {
            for j in [1, 2] {
                let r = weak_vacuum_residual(&params, VacuumKind::Phi00, j, &poly, Some(&eps), p)
                    .unwrap()
                    .to_f64();
                worst = worst.max(r);
            }
        }
        // oracle: the constant envelope alone already gives ≈ 0.087
        assert!(worst > 1e-3, "max residual {worst}");
    }

    #[test]
    fn vacuum_rejects_high_degree() {
        let p = prec();
        let poly = Poly2::monomial(5, 4);
        assert!(matches!(
            weak_vacuum_residual(&standard_params(), VacuumKind::Phi00, 1, &poly, None, p),
            Err(BatemanError::UnsupportedTestFunction(_))
        ));
    }

    #[test]
    fn truncation_preconditions() {
        let p = prec();
        assert!(build_bosonic(1, p).is_err());
        assert!(build_pb(2, p).is_err());
        assert!(hamiltonian_bosonic(&standard_params(), 3, p).is_err());
    }
}
