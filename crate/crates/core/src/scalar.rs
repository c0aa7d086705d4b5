//! Arithmetic backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two backends are
//! provided: exact arbitrary-precision rationals ([`Rational`]) and `f64`
//! with a fixed relative tolerance ([`FLOAT_TOLERANCE`]) that drives every
//! rank and zero decision.
//!
//! The dense kernels (row space, kernel, span membership, PSD test,
//! consistent solve) are the only places where the two backends differ.
//! Exact mode uses Gauss-Jordan elimination and yields reduced row echelon
//! form, which is unique. Float mode uses the SVD and yields an orthonormal
//! basis, so equality of float subspaces must go through mutual containment.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use faer::{Mat, Side};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rational = BigRational;

/// Relative tolerance used by all float-mode rank and zero decisions.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Environment variable naming the default arithmetic mode (`exact` or `float`).
pub const ARITH_ENV_VAR: &str = "MONOTONE_ARITH";

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithMode {
    Exact,
    Float,
}

impl ArithMode {
    /// Reads [`ARITH_ENV_VAR`], falling back to `default` when unset.
    pub fn from_env_or(default: ArithMode) -> Result<ArithMode, Error> {
        match std::env::var(ARITH_ENV_VAR) {
            Ok(v) if !v.trim().is_empty() => v.parse(),
            _ => Ok(default),
        }
    }
}

impl FromStr for ArithMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" | "rational" => Ok(ArithMode::Exact),
            "float" | "f64" => Ok(ArithMode::Float),
            other => Err(Error::Parameter(format!(
                "unknown arithmetic mode '{other}' (expected 'exact' or 'float')"
            ))),
        }
    }
}

impl Display for ArithMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArithMode::Exact => f.write_str("exact"),
            ArithMode::Float => f.write_str("float"),
        }
    }
}

/// A real field element together with the dense linear algebra needed by
/// the subspace calculus.
///
/// Matrices are passed as row slices; `width` is the number of columns.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    const MODE: ArithMode;

    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Exact value of `self` (for floats, the binary expansion).
    fn to_rational(&self) -> Rational;
    fn to_f64(&self) -> f64;

    /// Zero test relative to `scale`. Exact mode ignores `scale`.
    fn negligible(&self, scale: f64) -> bool;

    /// `self <= other` up to the mode's tolerance, relative to the magnitudes involved.
    fn tol_le(&self, other: &Self) -> bool;

    /// Basis of the row space of `rows`, in canonical form.
    fn row_basis(rows: &[Vec<Self>], width: usize) -> Vec<Vec<Self>>;

    /// Canonical basis of `{v : rows · v = 0}`.
    fn kernel(rows: &[Vec<Self>], width: usize) -> Vec<Vec<Self>>;

    /// Whether `v` lies in the span of `basis`, which must be in the
    /// canonical form returned by [`Scalar::row_basis`].
    fn in_span(basis: &[Vec<Self>], v: &[Self]) -> bool;

    /// Positive semidefiniteness of a symmetric matrix.
    fn is_psd(sym: &[Vec<Self>]) -> bool;

    /// Some solution of `a · z = rhs`, or `None` when `rhs` is outside the range of `a`.
    /// Float mode returns the minimum-norm solution.
    fn solve_consistent(a: &[Vec<Self>], rhs: &[Self]) -> Option<Vec<Self>>;

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (u, v)| acc + u.clone() * v.clone())
}

pub fn norm_f64<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

/// Parses `"p/q"`, integers and decimals with optional exponent into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if negative { -value } else { value })
}

// ---------------------------------------------------------------------------
// Exact backend
// ---------------------------------------------------------------------------

/// Gauss-Jordan elimination. Returns the nonzero rows of the reduced row
/// echelon form and their pivot columns.
fn rref(mut m: Vec<Vec<Rational>>, width: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        if rank == m.len() {
            break;
        }
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    (m, pivots)
}

fn pivot_of(row: &[Rational]) -> Option<usize> {
    row.iter().position(|v| !v.is_zero())
}

impl Scalar for Rational {
    const MODE: ArithMode = ArithMode::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn tol_le(&self, other: &Self) -> bool {
        self <= other
    }

    fn row_basis(rows: &[Vec<Self>], width: usize) -> Vec<Vec<Self>> {
        rref(rows.to_vec(), width).0
    }

    fn kernel(rows: &[Vec<Self>], width: usize) -> Vec<Vec<Self>> {
        let (r, pivots) = rref(rows.to_vec(), width);
        let mut out = Vec::new();
        for free in (0..width).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); width];
            v[free] = Rational::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[free].clone();
            }
            out.push(v);
        }
        rref(out, width).0
    }

    fn in_span(basis: &[Vec<Self>], v: &[Self]) -> bool {
        let mut w = v.to_vec();
        for row in basis {
            let Some(pc) = pivot_of(row) else { continue };
            if w[pc].is_zero() {
                continue;
            }
            let factor = w[pc].clone() / row[pc].clone();
            for (x, b) in w.iter_mut().zip(row) {
                *x -= &factor * b;
            }
        }
        w.iter().all(Zero::is_zero)
    }

    fn is_psd(sym: &[Vec<Self>]) -> bool {
        // Symmetric elimination with diagonal pivots: a PSD matrix with a
        // zero diagonal entry must have the whole row zero.
        let mut m = sym.to_vec();
        let k = m.len();
        let mut active: Vec<usize> = (0..k).collect();
        loop {
            let Some(pos) = active.iter().position(|&i| !m[i][i].is_zero()) else {
                return active
                    .iter()
                    .all(|&i| active.iter().all(|&j| m[i][j].is_zero()));
            };
            let p = active.remove(pos);
            if m[p][p].is_negative() {
                return false;
            }
            let d = m[p][p].clone();
            for &i in &active {
                if m[i][p].is_zero() {
                    continue;
                }
                let f = m[i][p].clone() / d.clone();
                for &j in &active {
                    let delta = &f * &m[p][j];
                    m[i][j] -= delta;
                }
            }
        }
    }

    fn solve_consistent(a: &[Vec<Self>], rhs: &[Self]) -> Option<Vec<Self>> {
        let width = a.first().map_or(0, Vec::len);
        let aug: Vec<Vec<Rational>> = a
            .iter()
            .zip(rhs)
            .map(|(row, b)| {
                let mut r = row.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let (r, pivots) = rref(aug, width + 1);
        if pivots.last() == Some(&width) {
            return None;
        }
        let mut z = vec![Rational::zero(); width];
        for (row, &pc) in r.iter().zip(&pivots) {
            z[pc] = row[width].clone();
        }
        Some(z)
    }
}

// ---------------------------------------------------------------------------
// Float backend
// ---------------------------------------------------------------------------

fn to_mat(rows: &[Vec<f64>], width: usize) -> Mat<f64> {
    Mat::from_fn(rows.len(), width, |i, j| rows[i][j])
}

/// Full SVD as (U, singular values, V), with U and V square.
fn full_svd(m: &Mat<f64>) -> (Mat<f64>, Vec<f64>, Mat<f64>) {
    let svd = m.svd().expect("SVD converges on finite input");
    let d = svd.S().column_vector();
    let sv = (0..d.nrows()).map(|i| d[i]).collect();
    (svd.U().to_owned(), sv, svd.V().to_owned())
}

fn rank_threshold(singular_values: &[f64]) -> f64 {
    let smax = singular_values.iter().cloned().fold(0.0, f64::max);
    FLOAT_TOLERANCE * smax.max(1.0)
}

/// Right singular vectors split into (row space, kernel), with enough zero
/// padding that the kernel part is complete.
fn svd_split(rows: &[Vec<f64>], width: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut padded = rows.to_vec();
    while padded.len() < width {
        padded.push(vec![0.0; width]);
    }
    let (_, sv, v) = full_svd(&to_mat(&padded, width));
    let thr = rank_threshold(&sv);
    let mut range = Vec::new();
    let mut null = Vec::new();
    for (i, s) in sv.iter().enumerate() {
        let col: Vec<f64> = (0..width).map(|j| v[(j, i)]).collect();
        if *s > thr {
            range.push(col);
        } else {
            null.push(col);
        }
    }
    (range, null)
}

impl Scalar for f64 {
    const MODE: ArithMode = ArithMode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(Rational::zero)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_TOLERANCE * scale.abs().max(1.0)
    }

    fn tol_le(&self, other: &Self) -> bool {
        *self <= *other + FLOAT_TOLERANCE * self.abs().max(other.abs()).max(1.0)
    }

    fn row_basis(rows: &[Vec<Self>], width: usize) -> Vec<Vec<Self>> {
        if rows.is_empty() || width == 0 {
            return Vec::new();
        }
        svd_split(rows, width).0
    }

    fn kernel(rows: &[Vec<Self>], width: usize) -> Vec<Vec<Self>> {
        if rows.is_empty() {
            return (0..width)
                .map(|i| (0..width).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect();
        }
        svd_split(rows, width).1
    }

    fn in_span(basis: &[Vec<Self>], v: &[Self]) -> bool {
        let mut r = v.to_vec();
        for q in basis {
            let c = dot(q, v);
            for (x, b) in r.iter_mut().zip(q) {
                *x -= c * b;
            }
        }
        norm_f64(&r) <= FLOAT_TOLERANCE * norm_f64(v).max(1.0)
    }

    fn is_psd(sym: &[Vec<Self>]) -> bool {
        let k = sym.len();
        if k == 0 {
            return true;
        }
        let m = Mat::from_fn(k, k, |i, j| 0.5 * (sym[i][j] + sym[j][i]));
        let eig = m
            .self_adjoint_eigenvalues(Side::Lower)
            .expect("eigenvalues converge on finite input");
        let lmax = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let lmin = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        lmin >= -FLOAT_TOLERANCE * (1.0 + lmax)
    }

    fn solve_consistent(a: &[Vec<Self>], rhs: &[Self]) -> Option<Vec<Self>> {
        let rows = a.len();
        let width = a.first().map_or(0, Vec::len);
        if rows == 0 || width == 0 {
            return rhs
                .iter()
                .all(|v| v.negligible(1.0))
                .then(|| vec![0.0; width]);
        }
        let (u, sv, v) = full_svd(&to_mat(a, width));
        let thr = rank_threshold(&sv);
        // z = V Σ⁺ Uᵀ b
        let mut z = vec![0.0; width];
        for (i, s) in sv.iter().enumerate().filter(|(_, s)| **s > thr) {
            let ub: f64 = (0..rows).map(|r| u[(r, i)] * rhs[r]).sum();
            for (j, zj) in z.iter_mut().enumerate() {
                *zj += v[(j, i)] * ub / s;
            }
        }
        let residual = a
            .iter()
            .zip(rhs)
            .map(|(row, b)| (dot(row, &z) - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let bnorm = norm_f64(rhs);
        (residual <= FLOAT_TOLERANCE * (1.0 + bnorm)).then_some(z)
    }
}
