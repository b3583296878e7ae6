//! The normalized biorthogonal families `φ_n = x^n/√n!` and
//! `ψ_n = (−1)^n δ^(n)/√n!`, their number operators, and the basis-swap maps
//! `S_φ`, `S_ψ` on finite spans together with the moment-based extension of
//! `S_φ` beyond them.
//!
//! Ladder structure: `b` and `a†` raise (`b φ_k = √(k+1) φ_{k+1}`,
//! `a† ψ_k = √(k+1) ψ_{k+1}`), `a` and `b†` lower, and the number operators
//! `N = ba`, `N† = a†b†` have `φ_k`, `ψ_k` as eigenvectors with eigenvalue k.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rug::Rational;
use thiserror::Error;

use crate::distribution::{Atom, WeakDistribution};
use crate::numeric::{factorial, PowerSeries, Prec, Value};
use crate::scalar::ExactScalar;
use crate::testfn::{Capability, CapabilityMissing, TestFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    Phi,
    Psi,
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisTag::Phi => write!(f, "phi"),
            BasisTag::Psi => write!(f, "psi"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("expected a {expected}-tagged span, got {found}")]
    WrongBasis { expected: BasisTag, found: BasisTag },
    #[error("distribution is not in the {basis} span: {reason}")]
    NotInSpan { basis: BasisTag, reason: String },
    #[error(transparent)]
    Capability(#[from] CapabilityMissing),
}

/// `φ_n`: the normalized monomial `x^n/√n!`.
pub fn phi(n: u32) -> WeakDistribution {
    WeakDistribution::monomial(n, ExactScalar::inv_sqrt_factorial(n))
}

/// `ψ_n`: the normalized delta derivative `(−1)^n δ^(n)/√n!`.
pub fn psi(n: u32) -> WeakDistribution {
    let c = ExactScalar::inv_sqrt_factorial(n).mul(&ExactScalar::alternating_sign(n));
    WeakDistribution::delta_deriv(n, c)
}

/// `N = ba = x̂D̂` applied exactly.
pub fn apply_number(f: &WeakDistribution) -> WeakDistribution {
    f.apply_d().apply_x()
}

/// `N† = a†b† = −D̂x̂` applied exactly.
pub fn apply_number_dag(f: &WeakDistribution) -> WeakDistribution {
    f.apply_x().apply_d().neg()
}

/// Finite span in one of the two families, stored by index coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyIndexVector {
    tag: BasisTag,
    coeffs: BTreeMap<u32, ExactScalar>,
}

impl FamilyIndexVector {
    pub fn new(tag: BasisTag, coeffs: impl IntoIterator<Item = (u32, ExactScalar)>) -> Self {
        let coeffs = coeffs
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect::<BTreeMap<_, _>>();
        FamilyIndexVector { tag, coeffs }
    }

    pub fn basis_member(tag: BasisTag, n: u32) -> Self {
        FamilyIndexVector::new(tag, [(n, ExactScalar::one())])
    }

    pub fn zero(tag: BasisTag) -> Self {
        FamilyIndexVector::new(tag, [])
    }

    pub fn tag(&self) -> BasisTag {
        self.tag
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &ExactScalar)> {
        self.coeffs.iter().map(|(&n, c)| (n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Expand into the distribution class. Exact: multiplies each coefficient
    /// by the family's per-index normalization.
    pub fn to_distribution(&self) -> WeakDistribution {
        let mut acc = WeakDistribution::zero();
        for (&k, c) in &self.coeffs {
            let member = match self.tag {
                BasisTag::Phi => phi(k),
                BasisTag::Psi => psi(k),
            };
            acc = acc
                .try_add(&member.scale(c))
                .expect("distinct indices cannot collide");
        }
        acc
    }

    /// Exact inverse of [`to_distribution`](Self::to_distribution): divides
    /// out the normalization per term. Fails if the distribution has a part
    /// outside the family's span.
    pub fn from_distribution(
        f: &WeakDistribution,
        tag: BasisTag,
    ) -> Result<Self, FamilyError> {
        match tag {
            BasisTag::Phi => {
                if f.has_delta_part() {
                    return Err(FamilyError::NotInSpan {
                        basis: tag,
                        reason: "has a delta part".to_string(),
                    });
                }
                let coeffs = f
                    .poly_terms()
                    .map(|(k, c)| (k, c.mul(&ExactScalar::sqrt_factorial(k))))
                    .collect::<Vec<_>>();
                Ok(FamilyIndexVector::new(tag, coeffs))
            }
            BasisTag::Psi => {
                if f.has_poly_part() {
                    return Err(FamilyError::NotInSpan {
                        basis: tag,
                        reason: "has a poly part".to_string(),
                    });
                }
                let coeffs = f
                    .delta_terms()
                    .map(|(k, c)| {
                        let factor =
                            ExactScalar::sqrt_factorial(k).mul(&ExactScalar::alternating_sign(k));
                        (k, c.mul(&factor))
                    })
                    .collect::<Vec<_>>();
                Ok(FamilyIndexVector::new(tag, coeffs))
            }
        }
    }

    /// Ladder action in the index representation. On φ-spans `b` raises with
    /// `√(k+1)` and `a` lowers with `√k`; on ψ-spans the daggered pair does.
    pub fn apply_atom(&self, atom: Atom) -> Self {
        let (raises, sign) = match (self.tag, atom) {
            // a† = −a and b† = b as operators; the family decides which of
            // the two directions an atom takes.
            (BasisTag::Phi, Atom::B) | (BasisTag::Phi, Atom::BDag) => (true, 1),
            (BasisTag::Phi, Atom::A) => (false, 1),
            (BasisTag::Phi, Atom::ADag) => (false, -1),
            (BasisTag::Psi, Atom::ADag) => (true, 1),
            (BasisTag::Psi, Atom::A) => (true, -1),
            (BasisTag::Psi, Atom::BDag) | (BasisTag::Psi, Atom::B) => (false, 1),
        };
        let mut out = BTreeMap::new();
        for (&k, c) in &self.coeffs {
            if raises {
                let factor = ExactScalar::sqrt_uint(u64::from(k) + 1);
                let mut coeff = c.mul(&factor);
                if sign < 0 {
                    coeff = coeff.neg();
                }
                out.insert(k + 1, coeff);
            } else {
                if k == 0 {
                    continue;
                }
                let factor = ExactScalar::sqrt_uint(u64::from(k));
                let mut coeff = c.mul(&factor);
                if sign < 0 {
                    coeff = coeff.neg();
                }
                out.insert(k - 1, coeff);
            }
        }
        FamilyIndexVector::new(self.tag, out)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        FamilyIndexVector::new(
            self.tag,
            self.coeffs.iter().map(|(&k, v)| (k, v.mul(c))),
        )
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, tag: BasisTag, max_index: u32, terms: usize) -> Self {
        let mut coeffs: BTreeMap<u32, ExactScalar> = BTreeMap::new();
        for _ in 0..terms {
            let k = rng.random_range(0..=max_index);
            let c = ExactScalar::from_i64_parts(
                (rng.random_range(-9i64..=9), rng.random_range(1i64..=6)),
                (rng.random_range(-9i64..=9), rng.random_range(1i64..=6)),
            );
            let merged = match coeffs.get(&k) {
                Some(prev) => prev.try_add(&c).expect("rational parts share radical 1"),
                None => c,
            };
            if merged.is_zero() {
                coeffs.remove(&k);
            } else {
                coeffs.insert(k, merged);
            }
        }
        FamilyIndexVector { tag, coeffs }
    }
}

/// `S_φ(Σ c_k ψ_k) = Σ c_k φ_k`: coefficient-preserving swap onto the φ
/// family. Input must be ψ-tagged.
pub fn s_phi_span(v: &FamilyIndexVector) -> Result<FamilyIndexVector, FamilyError> {
    if v.tag != BasisTag::Psi {
        return Err(FamilyError::WrongBasis {
            expected: BasisTag::Psi,
            found: v.tag,
        });
    }
    Ok(FamilyIndexVector {
        tag: BasisTag::Phi,
        coeffs: v.coeffs.clone(),
    })
}

/// `S_ψ(Σ c_k φ_k) = Σ c_k ψ_k`. Input must be φ-tagged.
pub fn s_psi_span(v: &FamilyIndexVector) -> Result<FamilyIndexVector, FamilyError> {
    if v.tag != BasisTag::Phi {
        return Err(FamilyError::WrongBasis {
            expected: BasisTag::Phi,
            found: v.tag,
        });
    }
    Ok(FamilyIndexVector {
        tag: BasisTag::Psi,
        coeffs: v.coeffs.clone(),
    })
}

/// `S_φ` on a distribution in the ψ span, going through the exact index
/// representation.
pub fn s_phi_on_distribution(f: &WeakDistribution) -> Result<WeakDistribution, FamilyError> {
    let v = FamilyIndexVector::from_distribution(f, BasisTag::Psi)?;
    Ok(s_phi_span(&v)?.to_distribution())
}

/// `S_ψ` on a distribution in the φ span.
pub fn s_psi_on_distribution(f: &WeakDistribution) -> Result<WeakDistribution, FamilyError> {
    let v = FamilyIndexVector::from_distribution(f, BasisTag::Phi)?;
    Ok(s_psi_span(&v)?.to_distribution())
}

/// One named intertwining residual; exactly zero when the identity holds.
#[derive(Debug, Clone)]
pub struct IntertwineResidual {
    pub id: &'static str,
    pub residual: WeakDistribution,
}

/// Residuals of the number-operator and ladder intertwining identities that
/// apply to the span's basis tag. Every residual must be exactly zero.
///
/// For `F ∈ L_φ`: `N† S_ψ F = S_ψ N F`, `a F = S_φ b† S_ψ F`,
/// `b F = S_φ a† S_ψ F`. For `G ∈ L_ψ`: `N S_φ G = S_φ N† G`,
/// `a† G = S_ψ b S_φ G`, `b† G = S_ψ a S_φ G`.
pub fn intertwine_residuals(v: &FamilyIndexVector) -> Vec<IntertwineResidual> {
    let dist = v.to_distribution();
    let sub = |lhs: &WeakDistribution, rhs: &WeakDistribution| {
        lhs.try_sub(rhs)
            .expect("both sides share per-degree radicals")
    };
    match v.tag {
        BasisTag::Phi => {
            let swapped = s_psi_span(v).expect("tag checked");
            let number = sub(
                &apply_number_dag(&swapped.to_distribution()),
                &s_psi_on_distribution(&apply_number(&dist)).expect("N preserves the span"),
            );
            let a_route = sub(
                &dist.apply_atom(Atom::A),
                &s_phi_span(&swapped.apply_atom(Atom::BDag))
                    .expect("tag preserved")
                    .to_distribution(),
            );
            let b_route = sub(
                &dist.apply_atom(Atom::B),
                &s_phi_span(&swapped.apply_atom(Atom::ADag))
                    .expect("tag preserved")
                    .to_distribution(),
            );
            vec![
                IntertwineResidual {
                    id: "number_dag_s_psi",
                    residual: number,
                },
                IntertwineResidual {
                    id: "a_via_s_phi_bdag_s_psi",
                    residual: a_route,
                },
                IntertwineResidual {
                    id: "b_via_s_phi_adag_s_psi",
                    residual: b_route,
                },
            ]
        }
        BasisTag::Psi => {
            let swapped = s_phi_span(v).expect("tag checked");
            let number = sub(
                &apply_number(&swapped.to_distribution()),
                &s_phi_on_distribution(&apply_number_dag(&dist)).expect("N† preserves the span"),
            );
            let adag_route = sub(
                &dist.apply_atom(Atom::ADag),
                &s_psi_span(&swapped.apply_atom(Atom::B))
                    .expect("tag preserved")
                    .to_distribution(),
            );
            let bdag_route = sub(
                &dist.apply_atom(Atom::BDag),
                &s_psi_span(&swapped.apply_atom(Atom::A))
                    .expect("tag preserved")
                    .to_distribution(),
            );
            vec![
                IntertwineResidual {
                    id: "number_s_phi",
                    residual: number,
                },
                IntertwineResidual {
                    id: "adag_via_s_psi_b_s_phi",
                    residual: adag_route,
                },
                IntertwineResidual {
                    id: "bdag_via_s_psi_a_s_phi",
                    residual: bdag_route,
                },
            ]
        }
    }
}

/// Convergence diagnostic for `Σ|α_n|R^n` at one radius.
#[derive(Debug, Clone)]
pub struct RadiusDiagnostic {
    pub radius: u32,
    /// Largest consecutive-term ratio over the tail of the series.
    pub max_tail_ratio: f64,
    pub convergent: bool,
}

#[derive(Debug, Clone)]
pub struct ExtensionReport {
    pub series: PowerSeries,
    pub diagnostics: Vec<RadiusDiagnostic>,
}

/// Moment-based extension of `S_φ`: `Σ_{n≤N} α_n x^n` with
/// `α_n = moment_f(n)/n!`. This realizes `S_φ` on inputs far outside the ψ
/// span whenever the coefficient series converges; the diagnostics carry a
/// numeric ratio test at integer radii up to 10.
pub fn s_phi_extend(
    f: &TestFunction,
    n_max: u32,
    prec: Prec,
) -> Result<ExtensionReport, FamilyError> {
    if !f.has_moments() {
        return Err(f
            .missing(Capability::Moments, "S_φ extension coefficients".to_string())
            .into());
    }
    let mut coeffs = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let m = f.moment(n, prec)?;
        let inv_fact = Value::Exact(ExactScalar::from_rational(
            Rational::from(1) / factorial(n),
        ));
        coeffs.push(m.mul(&inv_fact, prec));
    }
    let mags: Vec<f64> = coeffs
        .iter()
        .map(|c| c.to_cx(prec).abs().to_f64())
        .collect();
    let tail_start = (n_max as usize) / 2;
    let mut diagnostics = Vec::new();
    for radius in 1..=10u32 {
        let mut max_ratio: f64 = 0.0;
        for n in tail_start..mags.len().saturating_sub(1) {
            if mags[n] > 0.0 && mags[n + 1] > 0.0 {
                max_ratio = max_ratio.max(mags[n + 1] * f64::from(radius) / mags[n]);
            }
        }
        diagnostics.push(RadiusDiagnostic {
            radius,
            max_tail_ratio: max_ratio,
            convergent: max_ratio < 1.0,
        });
    }
    Ok(ExtensionReport {
        series: PowerSeries::new(coeffs),
        diagnostics,
    })
}
