//! Deciding non-enlargeability of affine maximal monotone operators.
//!
//! A maximal monotone `T = T0 + t` (with `T0` a subspace) satisfies
//! `T^ε = T` for every `ε ≥ 0` exactly when `T0 = A^⊢` for a self-cancelling
//! `A`; the largest such `A` is `T0^⊢`. When that fails, `T0^⊢ ⊄ T0` and any
//! point of `T0^⊢ \ T0` lies in `ed(φ_T0) \ T0`, which yields an explicit
//! enlargement witness.

use crate::error::{Error, Result};
use crate::fitzpatrick::{
    effective_domain_fitz, in_enlargement_def, Fitzpatrick, GramData,
};
use crate::operator::{is_maximal_self_cancelling, is_self_cancelling, Operator};
use crate::relation::{canonicalize, duality, PairedPoint, Subspace};
use crate::scalar::Scalar;

/// Result of [`decide_non_enlargeable`].
#[derive(Clone, Debug)]
pub enum Verdict<S> {
    NonEnlargeable {
        /// Maximal self-cancelling `A` with `A^⊢` equal to the linear part.
        predual: Subspace<S>,
        base_point: PairedPoint<S>,
    },
    Enlargeable {
        witness: PairedPoint<S>,
        /// Smallest ε with the witness in `T^ε`.
        witness_eps: S,
        proof: Transcript<S>,
    },
}

/// Values at the witness backing an `Enlargeable` verdict.
#[derive(Clone, Debug)]
pub struct Transcript<S> {
    pub fitzpatrick: S,
    pub duality: S,
}

impl<S: Scalar> Verdict<S> {
    pub fn is_non_enlargeable(&self) -> bool {
        matches!(self, Verdict::NonEnlargeable { .. })
    }
}

/// Sign for which `±A^⊢` is monotone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
    Neither,
}

fn postcondition(check: impl FnOnce() -> bool, what: &str) -> Result<()> {
    if cfg!(feature = "postconditions") && !check() {
        return Err(Error::Invariant(what.to_string()));
    }
    Ok(())
}

fn require_maximal<S: Scalar>(l: &Subspace<S>) -> Result<()> {
    if Operator::Linear(l.clone()).is_maximal_monotone_linear()? {
        Ok(())
    } else {
        Err(Error::NotMaximalMonotone)
    }
}

/// `φ_T` vanishes on `T^⊢`: checked on each basis vector of `T^⊢` and on
/// the sum and alternating sum of the basis.
pub fn fitz_vanishes_on_dual<S: Scalar>(t: &Subspace<S>) -> Result<bool> {
    require_maximal(t)?;
    let fitz = Fitzpatrick::new(&Operator::Linear(t.clone()))?;
    let dual = t.vdash();
    let mut probes = dual.basis_points();
    let k = dual.dim();
    if k > 1 {
        probes.push(dual.combine(&vec![S::one(); k]));
        let alt: Vec<S> = (0..k)
            .map(|i| if i % 2 == 0 { S::one() } else { -S::one() })
            .collect();
        probes.push(dual.combine(&alt));
    }
    for p in &probes {
        match fitz.eval(p)? {
            crate::fitzpatrick::ExtReal::Finite(v) if v.negligible(p.norm().powi(2)) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// `T ∩ T^⊢`, the largest self-cancelling subspace of a maximal monotone `T`.
pub fn max_self_cancelling_part<S: Scalar>(t: &Subspace<S>) -> Result<Subspace<S>> {
    require_maximal(t)?;
    let part = t.intersect(&t.vdash())?;
    postcondition(|| is_self_cancelling(&part), "T ∩ T^⊢ must be self-cancelling")?;
    Ok(part)
}

/// `{w ∈ T : ⟨w, w*⟩ = 0}` for monotone `T`, computed from the kernel of
/// the restricted symmetric form rather than from `T^⊢`.
pub fn zero_duality_locus<S: Scalar>(t: &Subspace<S>) -> Result<Subspace<S>> {
    let gram = GramData::new(t);
    if !gram.is_psd() {
        return Err(Error::NotMonotone);
    }
    canonicalize(&gram.null_directions(), t.n())
}

/// Classifies a maximal monotone linear or affine operator.
pub fn decide_non_enlargeable<S: Scalar>(op: &Operator<S>) -> Result<Verdict<S>> {
    if !op.is_maximal_monotone_linear()? {
        return Err(Error::NotMaximalMonotone);
    }
    let t0 = op.linear_part().expect("checked above");
    let base = op.base_point().expect("checked above");
    let predual = t0.vdash();

    if is_self_cancelling(&predual) && predual.vdash() == *t0 {
        return Ok(Verdict::NonEnlargeable { predual, base_point: base });
    }

    let linear = Operator::Linear(t0.clone());
    let fitz = Fitzpatrick::new(&linear)?;
    let domain = effective_domain_fitz(t0)?;
    let candidate = predual
        .basis_points()
        .into_iter()
        .find(|w| !t0.member(w).unwrap_or(true))
        .or_else(|| {
            domain
                .basis_points()
                .into_iter()
                .find(|w| !t0.member(w).unwrap_or(true))
        });
    let w = candidate.ok_or_else(|| {
        Error::Invariant("ed(φ_T) = T but T^⊢ is not self-cancelling".into())
    })?;
    postcondition(|| domain.member(&w).unwrap_or(false), "witness must lie in ed(φ_T)")?;

    let phi = fitz
        .eval(&w)?
        .finite()
        .cloned()
        .ok_or_else(|| Error::Invariant("φ_T is infinite at the witness".into()))?;
    let eps = phi.clone() - duality(&w);
    let witness = w.add(&base)?;
    postcondition(
        || {
            eps.is_positive()
                && !op.contains_point(&witness).unwrap_or(true)
                && in_enlargement_def(op, &witness, &eps).unwrap_or(false)
        },
        "enlargement witness failed verification",
    )?;
    // The gap φ − ⟨·,·⟩ is translation invariant, so the transcript is
    // reported for the translated witness.
    let proof = Transcript {
        fitzpatrick: eps.clone() + duality(&witness),
        duality: duality(&witness),
    };
    Ok(Verdict::Enlargeable { witness, witness_eps: eps, proof })
}

/// `T = A^⊢ + t` for self-cancelling `A` with monotone `A^⊢`.
pub fn construct_from_self_cancelling<S: Scalar>(
    a: &Subspace<S>,
    t: &PairedPoint<S>,
) -> Result<Operator<S>> {
    if !is_self_cancelling(a) {
        return Err(Error::NotSelfCancelling);
    }
    let dual = a.vdash();
    if !Operator::Linear(dual.clone()).is_monotone() {
        return Err(Error::DualNotMonotone);
    }
    let op = Operator::affine(dual, t.clone())?;
    postcondition(
        || op.is_maximal_monotone_linear().unwrap_or(false),
        "monotone A^⊢ must be maximal monotone",
    )?;
    postcondition(
        || {
            decide_non_enlargeable(&op)
                .map(|v| v.is_non_enlargeable())
                .unwrap_or(false)
        },
        "A^⊢ + t must be non-enlargeable",
    )?;
    Ok(op)
}

/// Which of `A^⊢`, `−A^⊢` is monotone, without preconditions on `A`.
pub fn classify_dual_sign<S: Scalar>(a: &Subspace<S>) -> Sign {
    let dual = Operator::Linear(a.vdash());
    if dual.is_monotone() {
        Sign::Plus
    } else if dual.negate().is_monotone() {
        Sign::Minus
    } else {
        Sign::Neither
    }
}

/// Sign disambiguation for maximal self-cancelling `A`; `Neither` is an
/// invariant violation.
pub fn disambiguate_sign<S: Scalar>(a: &Subspace<S>) -> Result<Sign> {
    if !is_maximal_self_cancelling(a) {
        return Err(Error::NotMaximalSelfCancelling);
    }
    match classify_dual_sign(a) {
        Sign::Neither => Err(Error::Invariant(
            "neither A^⊢ nor -A^⊢ is monotone for maximal self-cancelling A".into(),
        )),
        s => Ok(s),
    }
}

/// Whether `A^⊢` is monotone for self-cancelling `A`; when it is, it must
/// also be maximal monotone.
pub fn monotone_dual_is_maximal<S: Scalar>(a: &Subspace<S>) -> Result<bool> {
    if !is_self_cancelling(a) {
        return Err(Error::NotSelfCancelling);
    }
    let dual = Operator::Linear(a.vdash());
    let monotone = dual.is_monotone();
    if monotone {
        postcondition(
            || dual.is_maximal_monotone_linear().unwrap_or(false),
            "monotone A^⊢ must have dimension n",
        )?;
    }
    Ok(monotone)
}
