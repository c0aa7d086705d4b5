//! Seeded random instance families.
//!
//! Matrices are integer-valued so that every instance is exactly
//! representable in both arithmetic modes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operator::is_self_cancelling;
use crate::relation::{canonicalize, PairedPoint, Subspace};
use crate::scalar::{Rational, Scalar};

pub type IntMatrix = Vec<Vec<i64>>;

pub const MAX_N: usize = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_n(n: usize) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("n must be in 1..={MAX_N}, got {n}")))
    }
}

fn int_to<S: Scalar>(m: &[Vec<i64>]) -> Vec<Vec<S>> {
    m.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect()
}

/// Up to `width` random rows with entries in `[-3, 3]`.
pub fn random_int_rows(width: usize, seed: u64) -> IntMatrix {
    let mut r = rng(seed);
    let k = r.gen_range(0..=width);
    (0..k)
        .map(|_| (0..width).map(|_| r.gen_range(-3..=3)).collect())
        .collect()
}

/// `S = R − Rᵀ` with `R` strictly upper triangular, entries in `[-5, 5]`.
pub fn skew_matrix(n: usize, seed: u64) -> Result<IntMatrix> {
    check_n(n)?;
    let mut r = rng(seed);
    let mut s = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = r.gen_range(-5..=5);
            s[i][j] = v;
            s[j][i] = -v;
        }
    }
    Ok(s)
}

/// Graph of a random skew matrix.
pub fn gen_skew<S: Scalar>(n: usize, seed: u64) -> Result<Subspace<S>> {
    Subspace::graph_i64(&skew_matrix(n, seed)?)
}

/// `AᵀA` for a random nonzero integer `A` with between 1 and `n` rows, so
/// that rank-deficient matrices are common.
pub fn gen_psd(n: usize, seed: u64) -> Result<IntMatrix> {
    check_n(n)?;
    let mut r = rng(seed);
    let rows = r.gen_range(1..=n);
    let mut a: IntMatrix = (0..rows)
        .map(|_| (0..n).map(|_| r.gen_range(-2..=2)).collect())
        .collect();
    if a.iter().flatten().all(|&v| v == 0) {
        let j = r.gen_range(0..n);
        a[0][j] = 1;
    }
    Ok((0..n)
        .map(|i| (0..n).map(|j| a.iter().map(|row| row[i] * row[j]).sum()).collect())
        .collect())
}

/// `S + Q` with `S` skew and `Q` a nonzero PSD matrix.
pub fn gen_mixed(n: usize, seed: u64) -> Result<IntMatrix> {
    let s = skew_matrix(n, seed)?;
    let q = gen_psd(n, seed.wrapping_add(0x9e37_79b9))?;
    Ok(s.iter()
        .zip(&q)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
        .collect())
}

/// `{0} × R^n`.
pub fn gen_vertical<S: Scalar>(n: usize) -> Result<Subspace<S>> {
    check_n(n)?;
    Ok(Subspace::vertical(n))
}

fn independent_int_vectors(n: usize, k: usize, r: &mut ChaCha8Rng) -> IntMatrix {
    loop {
        let v: IntMatrix = (0..k)
            .map(|_| (0..n).map(|_| r.gen_range(-3..=3)).collect())
            .collect();
        if Rational::row_basis(&int_to::<Rational>(&v), n).len() == k {
            return v;
        }
    }
}

/// A `k`-dimensional restriction `{(x, Sx) : x ∈ V}` of a random skew graph.
pub fn gen_self_cancelling<S: Scalar>(n: usize, k: usize, seed: u64) -> Result<Subspace<S>> {
    check_n(n)?;
    if k > n {
        return Err(Error::Parameter(format!("k = {k} exceeds n = {n}")));
    }
    let s = skew_matrix(n, seed)?;
    let mut r = rng(seed ^ 0x5eed);
    let xs = independent_int_vectors(n, k, &mut r);
    let rows: Vec<Vec<S>> = xs
        .iter()
        .map(|x| {
            let sx = (0..n).map(|i| (0..n).map(|j| s[i][j] * x[j]).sum::<i64>());
            x.iter().copied().chain(sx).map(S::from_i64).collect()
        })
        .collect();
    let a = canonicalize(&rows, n)?;
    if !is_self_cancelling(&a) {
        return Err(Error::Invariant("generated subspace is not self-cancelling".into()));
    }
    Ok(a)
}

/// `{(v, Mv + w) : v ∈ V, w ∈ V^⊥}` with a random domain `V`; monotone and of
/// dimension `n` whenever `M` is monotone.
fn restricted_relation<S: Scalar>(m: &[Vec<i64>], d: usize, r: &mut ChaCha8Rng) -> Result<Subspace<S>> {
    let n = m.len();
    let vs = independent_int_vectors(n, d, r);
    let perp = Rational::kernel(&int_to::<Rational>(&vs), n);
    let mut rows: Vec<Vec<S>> = vs
        .iter()
        .map(|v| {
            let mv = (0..n).map(|i| (0..n).map(|j| m[i][j] * v[j]).sum::<i64>());
            v.iter().copied().chain(mv).map(S::from_i64).collect()
        })
        .collect();
    for w in perp {
        let mut row = vec![S::zero(); n];
        row.extend(w.iter().map(S::from_rational));
        rows.push(row);
    }
    canonicalize(&rows, n)
}

fn domain_dim(n: usize, r: &mut ChaCha8Rng) -> usize {
    if r.gen_bool(0.5) {
        n
    } else {
        r.gen_range(0..=n)
    }
}

/// Random maximal monotone linear relation, not necessarily a graph.
pub fn gen_maximal_monotone<S: Scalar>(n: usize, seed: u64) -> Result<Subspace<S>> {
    check_n(n)?;
    let mut r = rng(seed);
    let m = match r.gen_range(0..3) {
        0 => skew_matrix(n, seed)?,
        1 => gen_psd(n, seed)?,
        _ => gen_mixed(n, seed)?,
    };
    let d = domain_dim(n, &mut r);
    restricted_relation(&m, d, &mut r)
}

/// Random maximal self-cancelling (skew) relation `{(v, Sv + w)}`.
pub fn gen_skew_relation<S: Scalar>(n: usize, seed: u64) -> Result<Subspace<S>> {
    check_n(n)?;
    let mut r = rng(seed ^ 0xa11);
    let d = domain_dim(n, &mut r);
    restricted_relation(&skew_matrix(n, seed)?, d, &mut r)
}

/// Random monotone linear relation, possibly of dimension below `n`.
pub fn gen_monotone_linear<S: Scalar>(n: usize, seed: u64) -> Result<Subspace<S>> {
    let full = gen_maximal_monotone::<S>(n, seed)?;
    let mut r = rng(seed ^ 0xd1e);
    if r.gen_bool(0.5) {
        return Ok(full);
    }
    let keep = r.gen_range(0..full.dim().max(1));
    let pts = full.basis_points();
    let chosen: Vec<PairedPoint<S>> = pts
        .iter()
        .take(keep)
        .enumerate()
        .map(|(i, p)| {
            // Mix in the next basis vector so the restriction is not axis-aligned.
            match pts.get(i + keep) {
                Some(q) => p.add(&q.scale(&S::from_i64(r.gen_range(-2..=2)))).expect("same n"),
                None => p.clone(),
            }
        })
        .collect();
    Subspace::span_points(&chosen, n)
}

/// Mixture of unstructured and structured linear relations, used for
/// equivalence checks between structural predicates.
pub fn gen_linear_relation<S: Scalar>(n: usize, seed: u64) -> Result<Subspace<S>> {
    check_n(n)?;
    let mut r = rng(seed ^ 0x7e1a);
    match r.gen_range(0..6) {
        0 => {
            let rows = random_int_rows(2 * n, seed);
            canonicalize(&int_to::<S>(&rows), n)
        }
        1 => gen_skew_relation(n, seed),
        2 => gen_self_cancelling(n, r.gen_range(0..=n), seed),
        3 => gen_maximal_monotone(n, seed),
        4 => {
            // A skew relation plus one extra direction.
            let base = gen_skew_relation::<S>(n, seed)?;
            let extra: Vec<S> = (0..2 * n).map(|_| S::from_i64(r.gen_range(-2..=2))).collect();
            base.sum(&canonicalize(&[extra], n)?)
        }
        _ => Ok(gen_skew_relation::<S>(n, seed)?.negate()),
    }
}

/// Integer point with coordinates in `[-radius, radius]`.
pub fn gen_point<S: Scalar>(n: usize, seed: u64, radius: i64) -> PairedPoint<S> {
    let mut r = rng(seed);
    let mut draw = || (0..n).map(|_| S::from_i64(r.gen_range(-radius..=radius))).collect();
    PairedPoint { x: draw(), xstar: draw() }
}

/// Point with coordinates `k / denom`, `|k| ≤ radius · denom`.
pub fn gen_point_fine<S: Scalar>(n: usize, seed: u64, radius: i64, denom: i64) -> PairedPoint<S> {
    let mut r = rng(seed);
    let d = Rational::from_i64(denom);
    let mut draw = || {
        (0..n)
            .map(|_| S::from_rational(&(Rational::from_i64(r.gen_range(-radius * denom..=radius * denom)) / d.clone())))
            .collect()
    };
    PairedPoint { x: draw(), xstar: draw() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{is_maximal_self_cancelling, Operator};

    type Q = Rational;

    #[test]
    fn skew_family() {
        assert_eq!(skew_matrix(1, 3).unwrap(), vec![vec![0]]);
        let g = gen_skew::<Q>(1, 9).unwrap();
        assert_eq!(g, Subspace::graph_i64(&[vec![0]]).unwrap());
        for seed in 0..20 {
            let s = skew_matrix(4, seed).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(s[i][j], -s[j][i]);
                    assert!(s[i][j].abs() <= 5);
                }
            }
        }
        assert!(skew_matrix(0, 1).is_err());
        assert!(skew_matrix(9, 1).is_err());
    }

    #[test]
    fn psd_family() {
        for seed in 0..30 {
            let q = gen_psd(3, seed).unwrap();
            assert!(Q::is_psd(&int_to::<Q>(&q)));
            assert!(q.iter().flatten().any(|&v| v != 0));
        }
    }

    #[test]
    fn vertical_and_self_cancelling() {
        assert_eq!(gen_vertical::<Q>(2).unwrap(), Subspace::vertical(2));
        for seed in 0..20 {
            let a = gen_self_cancelling::<Q>(4, 2, seed).unwrap();
            assert_eq!(a.dim(), 2);
        }
        assert!(gen_self_cancelling::<Q>(2, 3, 0).is_err());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        assert_eq!(gen_mixed(5, 11).unwrap(), gen_mixed(5, 11).unwrap());
        let a = gen_maximal_monotone::<Q>(4, 5).unwrap();
        let b = gen_maximal_monotone::<Q>(4, 5).unwrap();
        assert_eq!(a.basis(), b.basis());
    }

    #[test]
    fn maximal_monotone_family_is_maximal() {
        for seed in 0..40 {
            let n = 1 + (seed as usize % 5);
            let t = gen_maximal_monotone::<Q>(n, seed).unwrap();
            assert!(Operator::Linear(t).is_maximal_monotone_linear().unwrap());
            let s = gen_skew_relation::<Q>(n, seed).unwrap();
            assert!(is_maximal_self_cancelling(&s));
            let m = gen_monotone_linear::<Q>(n, seed).unwrap();
            assert!(Operator::Linear(m).is_monotone());
        }
    }
}
