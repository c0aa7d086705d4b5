//! Fitzpatrick functions and ε-enlargements of linear and affine relations.
//!
//! For a subspace with basis rows `b_i = (u_i | v_i)`, a graph point is
//! `Σ α_i b_i` and the Fitzpatrick integrand at `p` becomes
//! `cᵀα − αᵀ Ḡ α` with `c_i = pairing(p, b_i)` and
//! `Ḡ_ij = ½ pairing(b_i, b_j)`. When `Ḡ ⪰ 0` the supremum is
//! `¼ cᵀ Ḡ⁺ c` if `c ∈ range(Ḡ)` and `+∞` otherwise.
//!
//! For an affine relation `L + t`, substituting `y ↦ y + t` gives
//! `φ_{L+t}(p) = φ_L(p − t) + pairing(p, t) − ⟨t, t*⟩`.

mod quadratic;

pub use quadratic::{represents_check, QuadFunc};

use std::fmt;

use crate::error::{Error, Result};
use crate::operator::{FiniteSet, Operator};
use crate::relation::{duality, pairing, pairing_concat, swap_blocks, PairedPoint, Subspace};
use crate::scalar::{dot, norm_f64, Scalar};

/// Extended real value.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtReal<S> {
    Finite(S),
    PlusInf,
    MinusInf,
}

impl<S: Scalar> ExtReal<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        use ExtReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a.clone() + b.clone())),
            (PlusInf, MinusInf) | (MinusInf, PlusInf) => Err(Error::Indeterminate),
            (PlusInf, _) | (_, PlusInf) => Ok(PlusInf),
            (MinusInf, _) | (_, MinusInf) => Ok(MinusInf),
        }
    }

    pub fn add_finite(&self, v: &S) -> Self {
        match self {
            ExtReal::Finite(a) => ExtReal::Finite(a.clone() + v.clone()),
            other => other.clone(),
        }
    }

    /// `self <= bound` using the mode's tolerance.
    pub fn le_finite(&self, bound: &S) -> bool {
        match self {
            ExtReal::Finite(a) => a.tol_le(bound),
            ExtReal::PlusInf => false,
            ExtReal::MinusInf => true,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Finite(v) => v.to_f64(),
            ExtReal::PlusInf => f64::INFINITY,
            ExtReal::MinusInf => f64::NEG_INFINITY,
        }
    }
}

impl<S: Scalar> fmt::Display for ExtReal<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PlusInf => f.write_str("+inf"),
            ExtReal::MinusInf => f.write_str("-inf"),
        }
    }
}

/// Symmetrized Gram data of a subspace basis under the duality product.
#[derive(Clone, Debug)]
pub struct GramData<S> {
    n: usize,
    basis: Vec<Vec<S>>,
    gram: Vec<Vec<S>>,
}

impl<S: Scalar> GramData<S> {
    pub fn new(l: &Subspace<S>) -> Self {
        let n = l.n();
        let basis = l.basis().to_vec();
        let half = S::half();
        let gram = basis
            .iter()
            .map(|bi| {
                basis
                    .iter()
                    .map(|bj| half.clone() * pairing_concat(bi, bj, n))
                    .collect()
            })
            .collect();
        GramData { n, basis, gram }
    }

    pub fn gram(&self) -> &[Vec<S>] {
        &self.gram
    }

    pub fn is_psd(&self) -> bool {
        S::is_psd(&self.gram)
    }

    pub fn is_zero(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, g)| {
                g.negligible(norm_f64(&self.basis[i]) * norm_f64(&self.basis[j]))
            })
        })
    }

    /// `c_i = pairing(p, b_i)`.
    pub fn coefficients(&self, p: &PairedPoint<S>) -> Vec<S> {
        let v = p.to_concat();
        self.basis.iter().map(|b| pairing_concat(&v, b, self.n)).collect()
    }

    /// Basis of `ker Ḡ` as coefficient vectors.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        S::kernel(&self.gram, self.basis.len())
    }

    /// Points `Σ κ_i b_i` for `κ ∈ ker Ḡ`: the members of the relation that
    /// pair to zero with all of it.
    pub fn null_directions(&self) -> Vec<Vec<S>> {
        self.kernel()
            .iter()
            .map(|k| {
                let mut w = vec![S::zero(); 2 * self.n];
                for (ki, b) in k.iter().zip(&self.basis) {
                    for (wj, bj) in w.iter_mut().zip(b) {
                        *wj = wj.clone() + ki.clone() * bj.clone();
                    }
                }
                w
            })
            .collect()
    }

    /// `sup_α cᵀα − αᵀ Ḡ α` for `Ḡ ⪰ 0`.
    fn concave_sup(&self, c: &[S]) -> ExtReal<S> {
        if self.basis.is_empty() {
            return ExtReal::Finite(S::zero());
        }
        match S::solve_consistent(&self.gram, c) {
            Some(z) => ExtReal::Finite(dot(c, &z) / S::from_i64(4)),
            None => ExtReal::PlusInf,
        }
    }

    /// Maximizer of `cᵀα − αᵀ Ḡ α`, or `None` if the objective is unbounded
    /// along some direction of `ker Ḡ`.
    fn maximizer(&self, c: &[S]) -> Option<Vec<S>> {
        let scale = norm_f64(c);
        let unbounded = self
            .kernel()
            .iter()
            .any(|k| !dot(k, c).negligible(scale));
        if unbounded {
            return None;
        }
        if self.basis.is_empty() {
            return Some(Vec::new());
        }
        let half = S::half();
        S::solve_consistent(&self.gram, c).map(|z| z.into_iter().map(|v| v * half.clone()).collect())
    }
}

/// Fitzpatrick function of a monotone linear or affine relation.
#[derive(Clone, Debug)]
pub struct Fitzpatrick<S> {
    linear: Subspace<S>,
    translation: PairedPoint<S>,
    gram: GramData<S>,
}

impl<S: Scalar> Fitzpatrick<S> {
    pub fn new(op: &Operator<S>) -> Result<Self> {
        let linear = op
            .linear_part()
            .ok_or(Error::FiniteUnsupported("the closed-form Fitzpatrick function"))?
            .clone();
        let gram = GramData::new(&linear);
        if !gram.is_psd() {
            return Err(Error::NotMonotone);
        }
        Ok(Fitzpatrick {
            translation: op.base_point().expect("linear or affine"),
            linear,
            gram,
        })
    }

    pub fn gram(&self) -> &GramData<S> {
        &self.gram
    }

    fn check(&self, p: &PairedPoint<S>) -> Result<()> {
        if p.dim() != self.linear.n() {
            return Err(Error::DimensionMismatch {
                expected: self.linear.n(),
                found: p.dim(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, p: &PairedPoint<S>) -> Result<ExtReal<S>> {
        self.check(p)?;
        let t = &self.translation;
        let shifted = p.sub(t)?;
        let base = self.gram.concave_sup(&self.gram.coefficients(&shifted));
        Ok(base.add_finite(&(pairing(p, t)? - duality(t))))
    }

    /// `φ_T(p) − ⟨x, x*⟩`, the smallest ε with `p ∈ T^ε`.
    pub fn gap(&self, p: &PairedPoint<S>) -> Result<ExtReal<S>> {
        Ok(self.eval(p)?.add_finite(&-duality(p)))
    }

    /// A graph point minimizing `⟨x − y, x* − y*⟩`, or `None` when the
    /// infimum is `−∞`.
    pub fn worst_case_point(&self, p: &PairedPoint<S>) -> Result<Option<PairedPoint<S>>> {
        self.check(p)?;
        let shifted = p.sub(&self.translation)?;
        let c = self.gram.coefficients(&shifted);
        match self.gram.maximizer(&c) {
            Some(alpha) => Ok(Some(self.linear.combine(&alpha).add(&self.translation)?)),
            None => Ok(None),
        }
    }
}

fn check_eps<S: Scalar>(eps: &S) -> Result<()> {
    if eps.is_negative() {
        Err(Error::NegativeEpsilon)
    } else {
        Ok(())
    }
}

/// Supremum of the Fitzpatrick integrand over the given samples. A lower
/// bound on `φ_T(p)` for any `T` containing them.
pub fn fitz_finite<S: Scalar>(samples: &FiniteSet<S>, p: &PairedPoint<S>) -> Result<S> {
    let mut best: Option<S> = None;
    for y in samples.points() {
        let v = pairing(p, y)? - duality(y);
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best.ok_or(Error::EmptyOperator)
}

/// `φ_T(p)` for a monotone linear or affine `T`.
pub fn fitz_linear<S: Scalar>(op: &Operator<S>, p: &PairedPoint<S>) -> Result<ExtReal<S>> {
    Fitzpatrick::new(op)?.eval(p)
}

/// `ed(φ_T) = {p : c(p) ∈ range(Ḡ)}`, computed as the points that pair to
/// zero with every null direction of the Gram form.
pub fn effective_domain_fitz<S: Scalar>(l: &Subspace<S>) -> Result<Subspace<S>> {
    let gram = GramData::new(l);
    if !gram.is_psd() {
        return Err(Error::NotMonotone);
    }
    let n = l.n();
    let rows: Vec<Vec<S>> = gram
        .null_directions()
        .iter()
        .map(|w| swap_blocks(w, n))
        .collect();
    let basis = S::kernel(&rows, 2 * n);
    crate::relation::canonicalize(&basis, n)
}

/// Membership in `T^ε` straight from the definition: the inequality
/// `⟨x − y, x* − y*⟩ ≥ −ε` is checked at every sample, or at the graph point
/// where it is tightest.
pub fn in_enlargement_def<S: Scalar>(op: &Operator<S>, p: &PairedPoint<S>, eps: &S) -> Result<bool> {
    check_eps(eps)?;
    let neg_eps = -eps.clone();
    match op {
        Operator::Finite(f) => {
            for y in f.points() {
                if !neg_eps.tol_le(&duality(&p.sub(y)?)) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => match Fitzpatrick::new(op)?.worst_case_point(p)? {
            Some(y) => Ok(neg_eps.tol_le(&duality(&p.sub(&y)?))),
            None => Ok(false),
        },
    }
}

/// Membership in `T^ε` through `φ_T(p) ≤ ⟨x, x*⟩ + ε`. Finite samples are
/// rejected: their sampled φ underestimates and would admit false members.
pub fn in_enlargement_fitz<S: Scalar>(op: &Operator<S>, p: &PairedPoint<S>, eps: &S) -> Result<bool> {
    check_eps(eps)?;
    if matches!(op, Operator::Finite(_)) {
        return Err(Error::FiniteUnsupported("the Fitzpatrick enlargement test"));
    }
    Ok(Fitzpatrick::new(op)?.gap(p)?.le_finite(eps))
}
