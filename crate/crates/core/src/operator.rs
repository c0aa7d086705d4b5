//! Operator representations and their structural predicates.

use crate::error::{Error, Result};
use crate::fitzpatrick::GramData;
use crate::relation::{duality, PairedPoint, Subspace};
use crate::scalar::Scalar;

/// A non-empty, duplicate-free list of graph points.
#[derive(Clone, Debug)]
pub struct FiniteSet<S> {
    n: usize,
    points: Vec<PairedPoint<S>>,
}

impl<S: Scalar> FiniteSet<S> {
    pub fn new(points: Vec<PairedPoint<S>>) -> Result<Self> {
        let n = points.first().ok_or(Error::EmptyOperator)?.dim();
        let mut unique: Vec<PairedPoint<S>> = Vec::with_capacity(points.len());
        for p in points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
            }
            if !unique.iter().any(|q| q.approx_eq(&p)) {
                unique.push(p);
            }
        }
        Ok(FiniteSet { n, points: unique })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[PairedPoint<S>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// An affine relation `L + t`. The translation is stored as given; it is
/// never reduced modulo `L`.
#[derive(Clone, Debug)]
pub struct AffineRelation<S> {
    pub linear: Subspace<S>,
    pub translation: PairedPoint<S>,
}

/// A point-to-set operator `T ⊂ R^n × R^n`.
#[derive(Clone, Debug)]
pub enum Operator<S> {
    Finite(FiniteSet<S>),
    Linear(Subspace<S>),
    Affine(AffineRelation<S>),
}

impl<S: Scalar> Operator<S> {
    pub fn finite(points: Vec<PairedPoint<S>>) -> Result<Self> {
        FiniteSet::new(points).map(Operator::Finite)
    }

    /// Builds `L + t`, collapsing to [`Operator::Linear`] when `t` is zero.
    pub fn affine(linear: Subspace<S>, translation: PairedPoint<S>) -> Result<Self> {
        if translation.dim() != linear.n() {
            return Err(Error::DimensionMismatch {
                expected: linear.n(),
                found: translation.dim(),
            });
        }
        if translation.is_zero() {
            Ok(Operator::Linear(linear))
        } else {
            Ok(Operator::Affine(AffineRelation { linear, translation }))
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Operator::Finite(f) => f.n(),
            Operator::Linear(l) => l.n(),
            Operator::Affine(a) => a.linear.n(),
        }
    }

    /// The subspace parallel to a linear or affine operator.
    pub fn linear_part(&self) -> Option<&Subspace<S>> {
        match self {
            Operator::Finite(_) => None,
            Operator::Linear(l) => Some(l),
            Operator::Affine(a) => Some(&a.linear),
        }
    }

    /// Stored translation; the origin for linear operators.
    pub fn base_point(&self) -> Option<PairedPoint<S>> {
        match self {
            Operator::Finite(_) => None,
            Operator::Linear(l) => Some(PairedPoint::zero(l.n())),
            Operator::Affine(a) => Some(a.translation.clone()),
        }
    }

    pub fn contains_point(&self, p: &PairedPoint<S>) -> Result<bool> {
        match self {
            Operator::Finite(f) => Ok(f.points().iter().any(|q| q.approx_eq(p))),
            Operator::Linear(l) => l.member(p),
            Operator::Affine(a) => a.linear.member(&p.sub(&a.translation)?),
        }
    }

    pub fn is_monotone(&self) -> bool {
        match self {
            Operator::Finite(f) => {
                let pts = f.points();
                pts.iter().enumerate().all(|(i, p)| {
                    pts[i + 1..].iter().all(|q| {
                        let d = p.sub(q).expect("shared dimension");
                        (-duality(&d)).tol_le(&S::zero())
                    })
                })
            }
            // Translation cancels in differences.
            Operator::Linear(l) | Operator::Affine(AffineRelation { linear: l, .. }) => {
                GramData::new(l).is_psd()
            }
        }
    }

    /// Monotone and of dimension `n`. Finite operators are rejected.
    pub fn is_maximal_monotone_linear(&self) -> Result<bool> {
        let l = self
            .linear_part()
            .ok_or(Error::FiniteUnsupported("maximality testing"))?;
        Ok(l.dim() == l.n() && self.is_monotone())
    }

    /// `-T = {(x, -x*)}`.
    pub fn negate(&self) -> Self {
        match self {
            Operator::Finite(f) => Operator::Finite(FiniteSet {
                n: f.n,
                points: f.points.iter().map(PairedPoint::negate_dual).collect(),
            }),
            Operator::Linear(l) => Operator::Linear(l.negate()),
            Operator::Affine(a) => Operator::Affine(AffineRelation {
                linear: a.linear.negate(),
                translation: a.translation.negate_dual(),
            }),
        }
    }

    /// `T + p`.
    pub fn translate(&self, p: &PairedPoint<S>) -> Result<Self> {
        match self {
            Operator::Finite(f) => {
                let points = f
                    .points
                    .iter()
                    .map(|q| q.add(p))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Operator::Finite(FiniteSet { n: f.n, points }))
            }
            Operator::Linear(l) => Operator::affine(l.clone(), p.clone()),
            Operator::Affine(a) => Operator::affine(a.linear.clone(), a.translation.add(p)?),
        }
    }

    /// Set equality.
    pub fn same_set(&self, other: &Self) -> Result<bool> {
        match (self, other) {
            (Operator::Finite(a), Operator::Finite(b)) => Ok(a.len() == b.len()
                && a.points().iter().all(|p| b.points().iter().any(|q| q.approx_eq(p)))),
            (Operator::Finite(_), _) | (_, Operator::Finite(_)) => Ok(false),
            _ => {
                let (la, lb) = (self.linear_part().unwrap(), other.linear_part().unwrap());
                let ta = self.base_point().unwrap();
                let tb = other.base_point().unwrap();
                Ok(la.subspace_equal(lb)? && la.member(&ta.sub(&tb)?)?)
            }
        }
    }

    pub fn map_scalar<T: Scalar>(&self) -> Operator<T> {
        match self {
            Operator::Finite(f) => Operator::Finite(FiniteSet {
                n: f.n,
                points: f.points.iter().map(PairedPoint::map_scalar).collect(),
            }),
            Operator::Linear(l) => Operator::Linear(l.map_scalar()),
            Operator::Affine(a) => Operator::Affine(AffineRelation {
                linear: a.linear.map_scalar(),
                translation: a.translation.map_scalar(),
            }),
        }
    }
}

/// `L* = (-L)^⊢`; for the graph of a matrix this is the graph of its transpose.
pub fn adjoint<S: Scalar>(l: &Subspace<S>) -> Subspace<S> {
    l.negate().vdash()
}

/// `L = -L*`.
pub fn is_skew<S: Scalar>(l: &Subspace<S>) -> bool {
    *l == adjoint(l).negate()
}

/// The duality product vanishes on `A`. Checking the symmetric Gram matrix of
/// the basis suffices by polarization.
pub fn is_self_cancelling<S: Scalar>(a: &Subspace<S>) -> bool {
    GramData::new(a).is_zero()
}

/// Self-cancelling with `A^⊢ ⊂ A`.
pub fn is_maximal_self_cancelling<S: Scalar>(a: &Subspace<S>) -> bool {
    is_self_cancelling(a) && a.contains(&a.vdash()).unwrap_or(false)
}
