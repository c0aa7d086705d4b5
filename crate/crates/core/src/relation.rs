//! Points of `R^n × R^n`, the symmetric pairing, and subspaces of `R^{2n}`.
//!
//! A point `(x, x*)` is stored as the concatenation `(x | x*)` whenever it
//! enters subspace arithmetic. The ⊢-complement of `B` is the kernel of the
//! matrix whose rows are the basis rows of `B` with their two blocks swapped.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{dot, norm_f64, Scalar};

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairedPoint<S> {
    pub x: Vec<S>,
    pub xstar: Vec<S>,
}

impl<S: Scalar> PairedPoint<S> {
    pub fn new(x: Vec<S>, xstar: Vec<S>) -> Result<Self> {
        check_dim(x.len(), xstar.len())?;
        Ok(PairedPoint { x, xstar })
    }

    pub fn zero(n: usize) -> Self {
        PairedPoint {
            x: vec![S::zero(); n],
            xstar: vec![S::zero(); n],
        }
    }

    pub fn from_i64(x: &[i64], xstar: &[i64]) -> Result<Self> {
        Self::new(
            x.iter().map(|&v| S::from_i64(v)).collect(),
            xstar.iter().map(|&v| S::from_i64(v)).collect(),
        )
    }

    /// Splits a concatenated `(x | x*)` vector.
    pub fn from_concat(v: &[S], n: usize) -> Result<Self> {
        check_dim(2 * n, v.len())?;
        Ok(PairedPoint {
            x: v[..n].to_vec(),
            xstar: v[n..].to_vec(),
        })
    }

    pub fn to_concat(&self) -> Vec<S> {
        self.x.iter().chain(&self.xstar).cloned().collect()
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, s: &S) -> Self {
        PairedPoint {
            x: self.x.iter().map(|v| v.clone() * s.clone()).collect(),
            xstar: self.xstar.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    /// `(x, -x*)`.
    pub fn negate_dual(&self) -> Self {
        PairedPoint {
            x: self.x.clone(),
            xstar: self.xstar.iter().map(|v| -v.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().chain(&self.xstar).all(|v| v.negligible(1.0))
    }

    /// Coordinate-wise equality (exact) or closeness (float).
    pub fn approx_eq(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let scale = self.norm().max(other.norm());
        self.to_concat()
            .iter()
            .zip(other.to_concat())
            .all(|(a, b)| (a.clone() - b).negligible(scale))
    }

    pub fn norm(&self) -> f64 {
        norm_f64(&self.to_concat())
    }

    pub fn map_scalar<T: Scalar>(&self) -> PairedPoint<T> {
        PairedPoint {
            x: self.x.iter().map(|v| T::from_rational(&v.to_rational())).collect(),
            xstar: self.xstar.iter().map(|v| T::from_rational(&v.to_rational())).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        PairedPoint {
            x: self.x.iter().zip(&other.x).map(|(a, b)| f(a.clone(), b.clone())).collect(),
            xstar: self
                .xstar
                .iter()
                .zip(&other.xstar)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for PairedPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[S]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "(({}), ({}))", join(&self.x), join(&self.xstar))
    }
}

/// `⟨p.x, q.x*⟩ + ⟨q.x, p.x*⟩`.
pub fn pairing<S: Scalar>(p: &PairedPoint<S>, q: &PairedPoint<S>) -> Result<S> {
    check_dim(p.dim(), q.dim())?;
    Ok(dot(&p.x, &q.xstar) + dot(&q.x, &p.xstar))
}

/// The duality product `⟨x, x*⟩`.
pub fn duality<S: Scalar>(p: &PairedPoint<S>) -> S {
    dot(&p.x, &p.xstar)
}

/// Pairing on concatenated vectors of length `2n`.
pub(crate) fn pairing_concat<S: Scalar>(u: &[S], v: &[S], n: usize) -> S {
    dot(&u[..n], &v[n..]) + dot(&v[..n], &u[n..])
}

pub(crate) fn swap_blocks<S: Clone>(v: &[S], n: usize) -> Vec<S> {
    v[n..].iter().chain(&v[..n]).cloned().collect()
}

/// A linear subspace of `R^n × R^n` with a canonical basis.
///
/// Exact mode stores the reduced row echelon form; float mode stores an
/// orthonormal basis. Equality is set equality in both modes.
#[derive(Clone, Debug)]
pub struct Subspace<S> {
    n: usize,
    basis: Vec<Vec<S>>,
}

/// Span of `vectors` (each of length `2n`) in canonical form.
pub fn canonicalize<S: Scalar>(vectors: &[Vec<S>], n: usize) -> Result<Subspace<S>> {
    for v in vectors {
        check_dim(2 * n, v.len())?;
    }
    Ok(Subspace {
        n,
        basis: S::row_basis(vectors, 2 * n),
    })
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        let rows = (0..2 * n)
            .map(|i| (0..2 * n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect::<Vec<_>>();
        Subspace {
            n,
            basis: S::row_basis(&rows, 2 * n),
        }
    }

    pub fn span_points(points: &[PairedPoint<S>], n: usize) -> Result<Self> {
        let rows: Vec<Vec<S>> = points.iter().map(PairedPoint::to_concat).collect();
        canonicalize(&rows, n)
    }

    /// `{(x, M x)}` for a square matrix `M` given by rows.
    pub fn graph(m: &[Vec<S>]) -> Result<Self> {
        let n = m.len();
        let mut rows = Vec::with_capacity(n);
        for (i, row) in m.iter().enumerate() {
            check_dim(n, row.len())?;
            let mut v = vec![S::zero(); 2 * n];
            v[i] = S::one();
            for (j, mj) in m.iter().enumerate() {
                v[n + j] = mj[i].clone();
            }
            rows.push(v);
        }
        canonicalize(&rows, n)
    }

    pub fn graph_i64(m: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<S>> = m
            .iter()
            .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
            .collect();
        Self::graph(&rows)
    }

    /// `{0} × R^n`, the graph of the normal cone to the origin.
    pub fn vertical(n: usize) -> Self {
        let rows: Vec<Vec<S>> = (0..n)
            .map(|i| {
                let mut v = vec![S::zero(); 2 * n];
                v[n + i] = S::one();
                v
            })
            .collect();
        Subspace {
            n,
            basis: S::row_basis(&rows, 2 * n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Canonical basis rows, each `(x | x*)` of length `2n`.
    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn basis_points(&self) -> Vec<PairedPoint<S>> {
        self.basis
            .iter()
            .map(|v| PairedPoint::from_concat(v, self.n).expect("basis rows have length 2n"))
            .collect()
    }

    /// `B^⊢ = {q : pairing(p, q) = 0 for all p in B}`.
    pub fn vdash(&self) -> Self {
        let swapped: Vec<Vec<S>> = self.basis.iter().map(|v| swap_blocks(v, self.n)).collect();
        Subspace {
            n: self.n,
            basis: S::kernel(&swapped, 2 * self.n),
        }
    }

    /// Euclidean orthogonal complement in `R^{2n}`.
    fn orthogonal(&self) -> Self {
        Subspace {
            n: self.n,
            basis: S::kernel(&self.basis, 2 * self.n),
        }
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let mut rows = self.orthogonal().basis;
        rows.extend(other.orthogonal().basis);
        Ok(Subspace {
            n: self.n,
            basis: S::kernel(&rows, 2 * self.n),
        })
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let rows: Vec<Vec<S>> = self.basis.iter().chain(&other.basis).cloned().collect();
        canonicalize(&rows, self.n)
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        check_dim(self.n, other.n)?;
        Ok(other.basis.iter().all(|v| S::in_span(&self.basis, v)))
    }

    pub fn member(&self, p: &PairedPoint<S>) -> Result<bool> {
        check_dim(self.n, p.dim())?;
        Ok(S::in_span(&self.basis, &p.to_concat()))
    }

    pub fn member_concat(&self, v: &[S]) -> Result<bool> {
        check_dim(2 * self.n, v.len())?;
        Ok(S::in_span(&self.basis, v))
    }

    pub fn subspace_equal(&self, other: &Self) -> Result<bool> {
        check_dim(self.n, other.n)?;
        Ok(self.dim() == other.dim() && self.contains(other)?)
    }

    /// `{(x, -x*) : (x, x*) in self}`.
    pub fn negate(&self) -> Self {
        let rows: Vec<Vec<S>> = self
            .basis
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .map(|(i, c)| if i < self.n { c.clone() } else { -c.clone() })
                    .collect()
            })
            .collect();
        Subspace {
            n: self.n,
            basis: S::row_basis(&rows, 2 * self.n),
        }
    }

    /// Point of the subspace with the given basis coefficients.
    pub fn combine(&self, coeffs: &[S]) -> PairedPoint<S> {
        let mut v = vec![S::zero(); 2 * self.n];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (x, bi) in v.iter_mut().zip(b) {
                *x = x.clone() + c.clone() * bi.clone();
            }
        }
        PairedPoint::from_concat(&v, self.n).expect("length 2n")
    }

    pub fn map_scalar<T: Scalar>(&self) -> Subspace<T> {
        let rows: Vec<Vec<T>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|v| T::from_rational(&v.to_rational())).collect())
            .collect();
        Subspace {
            n: self.n,
            basis: T::row_basis(&rows, 2 * self.n),
        }
    }
}

impl<S: Scalar> PartialEq for Subspace<S> {
    fn eq(&self, other: &Self) -> bool {
        self.subspace_equal(other).unwrap_or(false)
    }
}
