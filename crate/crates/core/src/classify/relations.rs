//! Presentation data of a lattice `⟨α, β, γ, δ⟩` with `α = (0,e₁,0)`,
//! `β = (0,e₂,0)`, `γ = (1,0,0)` and `δ = (z₀,ξ₀,1)`.

use std::fmt;

use num_bigint::BigInt;

use crate::classify::lattice::LatticeSpec;
use crate::error::{OscError, Result};
use crate::group::{e1, e2, GroupElement, Osc};
use crate::scalar::{AngleBase, ExactScalar, Rational};

/// Exponents `(p, q, c)` of `α^p β^q γ^c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    pub alpha: BigInt,
    pub beta: BigInt,
    pub gamma: BigInt,
}

impl Word {
    pub fn new(alpha: i64, beta: i64, gamma: i64) -> Word {
        Word {
            alpha: alpha.into(),
            beta: beta.into(),
            gamma: gamma.into(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("a", &self.alpha), ("b", &self.beta), ("g", &self.gamma)] {
            if *e != BigInt::from(0) {
                parts.push(format!("{name}^{e}"));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    /// `c` with `αβα⁻¹β⁻¹ = γ^c`.
    pub commutator_exponent: BigInt,
    pub delta_alpha: Word,
    pub delta_beta: Word,
    /// Least `k ≥ 1` such that `δ^k` commutes with `α` and `β`, searched up
    /// to 12.
    pub central_power: Option<u64>,
    /// True when `λ` is a multiple of π, where `δ` need not give an
    /// O-lattice presentation.
    pub multiple_of_pi: bool,
}

/// Writes `(z, (p, q), 0) ∈ Γ_r` as `α^p β^q γ^c`, `c = z − rpq/2`.
pub fn gamma_word(g: &GroupElement, r: u64) -> Result<Word> {
    let fail = || OscError::Internal(format!("{g} is not in Gamma_{r}"));
    if g.t != 0 {
        return Err(fail());
    }
    let p = g.xi[0].to_integer().ok_or_else(fail)?;
    let q = g.xi[1].to_integer().ok_or_else(fail)?;
    let half_r = ExactScalar::from_rational(Rational::new(BigInt::from(r), BigInt::from(2)));
    let c = &g.z - half_r * ExactScalar::from_bigint(&p * &q);
    let c = c.to_integer().ok_or_else(fail)?;
    Ok(Word {
        alpha: p,
        beta: q,
        gamma: c,
    })
}

/// Evaluates `α^p β^q γ^c` in the group.
pub fn eval_word(group: &Osc, w: &Word) -> Result<GroupElement> {
    let to_i64 = |v: &BigInt| {
        i64::try_from(v).map_err(|_| OscError::Internal("word exponent overflow".into()))
    };
    let alpha = GroupElement::new(ExactScalar::zero(), e1(), 0);
    let beta = GroupElement::new(ExactScalar::zero(), e2(), 0);
    let gamma = GroupElement::central(ExactScalar::one());
    let a = group.pow(&alpha, to_i64(&w.alpha)?);
    let b = group.pow(&beta, to_i64(&w.beta)?);
    let c = group.pow(&gamma, to_i64(&w.gamma)?);
    Ok(group.multiply(&group.multiply(&a, &b), &c))
}

pub fn olattice_relations(spec: &LatticeSpec) -> Result<RelationReport> {
    spec.validate()?;
    let group = spec.group();
    let r = spec.r;
    let alpha = GroupElement::new(ExactScalar::zero(), e1(), 0);
    let beta = GroupElement::new(ExactScalar::zero(), e2(), 0);
    let delta = spec.delta();

    let comm = gamma_word(&group.commutator(&alpha, &beta), r)?;
    if comm.alpha != BigInt::from(0) || comm.beta != BigInt::from(0) {
        return Err(OscError::Internal(
            "commutator of alpha and beta is not central".into(),
        ));
    }
    if comm.gamma != BigInt::from(r) {
        return Err(OscError::Internal(format!(
            "[alpha, beta] = gamma^{} instead of gamma^{r}",
            comm.gamma
        )));
    }

    let mut words = Vec::new();
    for g in [&alpha, &beta] {
        let conj = group.conjugate(&delta, g);
        let w = gamma_word(&conj, r)?;
        if eval_word(&group, &w)? != conj {
            return Err(OscError::Internal(format!(
                "word {w} does not evaluate to {conj}"
            )));
        }
        words.push(w);
    }
    let delta_beta = words.pop().expect("two words");
    let delta_alpha = words.pop().expect("two words");

    let mut central_power = None;
    let mut power = GroupElement::identity();
    for k in 1..=12u64 {
        power = group.multiply(&power, &delta);
        if group.commutator(&power, &alpha).is_identity()
            && group.commutator(&power, &beta).is_identity()
        {
            central_power = Some(k);
            break;
        }
    }

    Ok(RelationReport {
        commutator_exponent: comm.gamma,
        delta_alpha,
        delta_beta,
        central_power,
        multiple_of_pi: spec.structure.lambda().base == AngleBase::Pi,
    })
}
