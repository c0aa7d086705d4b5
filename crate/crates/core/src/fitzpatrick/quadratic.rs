//! Convex quadratics `f(x) = ½ xᵀQx + bᵀx + c`: conjugates, the
//! Fenchel-Young function and the ε-subdifferential.

use super::ExtReal;
use crate::error::{Error, Result};
use crate::operator::{FiniteSet, Operator};
use crate::relation::{duality, PairedPoint, Subspace};
use crate::scalar::{dot, norm_f64, Scalar};

#[derive(Clone, Debug)]
pub struct QuadFunc<S> {
    q: Vec<Vec<S>>,
    b: Vec<S>,
    c: S,
}

impl<S: Scalar> QuadFunc<S> {
    pub fn new(q: Vec<Vec<S>>, b: Vec<S>, c: S) -> Result<Self> {
        let n = q.len();
        for row in &q {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
        }
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        let scale = q.iter().map(|r| norm_f64(r)).fold(0.0, f64::max);
        for i in 0..n {
            for j in 0..i {
                if !(q[i][j].clone() - q[j][i].clone()).negligible(scale) {
                    return Err(Error::NotPsd);
                }
            }
        }
        if !S::is_psd(&q) {
            return Err(Error::NotPsd);
        }
        Ok(QuadFunc { q, b, c })
    }

    /// `½‖x‖²` on `R^n`.
    pub fn half_norm_squared(n: usize) -> Self {
        let q = (0..n)
            .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
        QuadFunc { q, b: vec![S::zero(); n], c: S::zero() }
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn q(&self) -> &[Vec<S>] {
        &self.q
    }

    pub fn b(&self) -> &[S] {
        &self.b
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    fn apply_q(&self, x: &[S]) -> Vec<S> {
        self.q.iter().map(|row| dot(row, x)).collect()
    }

    pub fn eval(&self, x: &[S]) -> S {
        S::half() * dot(x, &self.apply_q(x)) + dot(&self.b, x) + self.c.clone()
    }

    pub fn gradient(&self, x: &[S]) -> Vec<S> {
        self.apply_q(x)
            .into_iter()
            .zip(&self.b)
            .map(|(a, b)| a + b.clone())
            .collect()
    }

    /// `f*(x*) = ½ (x*−b)ᵀ Q⁺ (x*−b) − c` when `x* − b ∈ range(Q)`, else `+∞`.
    pub fn conjugate_at(&self, xstar: &[S]) -> Result<ExtReal<S>> {
        if xstar.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: xstar.len() });
        }
        let d: Vec<S> = xstar.iter().zip(&self.b).map(|(s, b)| s.clone() - b.clone()).collect();
        if self.n() == 0 {
            return Ok(ExtReal::Finite(-self.c.clone()));
        }
        Ok(match S::solve_consistent(&self.q, &d) {
            Some(z) => ExtReal::Finite(S::half() * dot(&d, &z) - self.c.clone()),
            None => ExtReal::PlusInf,
        })
    }

    /// The conjugate as a quadratic; requires `Q` nonsingular.
    pub fn conjugate(&self) -> Result<Self> {
        let n = self.n();
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            let e: Vec<S> = (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect();
            cols.push(S::solve_consistent(&self.q, &e).ok_or(Error::Singular)?);
        }
        let half = S::half();
        let inv: Vec<Vec<S>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| half.clone() * (cols[j][i].clone() + cols[i][j].clone()))
                    .collect()
            })
            .collect();
        let inv_b: Vec<S> = inv.iter().map(|row| dot(row, &self.b)).collect();
        let c = S::half() * dot(&self.b, &inv_b) - self.c.clone();
        let b = inv_b.into_iter().map(|v| -v).collect();
        QuadFunc::new(inv, b, c)
    }

    /// `h_FY(x, x*) = f(x) + f*(x*)`.
    pub fn h_fy(&self, p: &PairedPoint<S>) -> Result<ExtReal<S>> {
        if p.dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: p.dim() });
        }
        ExtReal::Finite(self.eval(&p.x)).checked_add(&self.conjugate_at(&p.xstar)?)
    }

    /// `x* ∈ ∂_ε f(x)` via `h_FY(x, x*) ≤ ⟨x, x*⟩ + ε`.
    pub fn in_eps_subdifferential(&self, p: &PairedPoint<S>, eps: &S) -> Result<bool> {
        if eps.is_negative() {
            return Err(Error::NegativeEpsilon);
        }
        Ok(self.h_fy(p)?.le_finite(&(duality(p) + eps.clone())))
    }

    /// `∂f = {(x, Qx + b)}`.
    pub fn subdifferential(&self) -> Result<Operator<S>> {
        let graph = Subspace::graph(&self.q)?;
        Operator::affine(
            graph,
            PairedPoint::new(vec![S::zero(); self.n()], self.b.clone())?,
        )
    }
}

/// Necessary conditions for `h` to represent the sampled operator: `h ≥ ⟨·,·⟩`
/// on the grid and `h = ⟨·,·⟩` on every sample. Convexity and lower
/// semicontinuity are not checked.
pub fn represents_check<S, H>(h: H, samples: &FiniteSet<S>, grid: &[PairedPoint<S>]) -> bool
where
    S: Scalar,
    H: Fn(&PairedPoint<S>) -> ExtReal<S>,
{
    let bounded_below = grid.iter().all(|p| match h(p) {
        ExtReal::Finite(v) => duality(p).tol_le(&v),
        ExtReal::PlusInf => true,
        ExtReal::MinusInf => false,
    });
    let tight = samples.points().iter().all(|p| match h(p) {
        ExtReal::Finite(v) => {
            let d = duality(p);
            v.tol_le(&d) && d.tol_le(&v)
        }
        _ => false,
    });
    bounded_below && tight
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitzpatrick::{fitz_linear, in_enlargement_def};
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    fn frac(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    fn pt(x: &[Q], xs: &[Q]) -> PairedPoint<Q> {
        PairedPoint::new(x.to_vec(), xs.to_vec()).unwrap()
    }

    fn quad(qm: &[&[i64]], b: &[i64], c: i64) -> QuadFunc<Q> {
        QuadFunc::new(
            qm.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(),
            b.iter().map(|&v| q(v)).collect(),
            q(c),
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_psd_and_asymmetric() {
        assert_eq!(
            QuadFunc::new(vec![vec![q(-1)]], vec![q(0)], q(0)).unwrap_err(),
            Error::NotPsd
        );
        assert_eq!(
            QuadFunc::new(vec![vec![q(1), q(1)], vec![q(0), q(1)]], vec![q(0), q(0)], q(0))
                .unwrap_err(),
            Error::NotPsd
        );
    }

    #[test]
    fn conjugate_examples() {
        let f = QuadFunc::<Q>::half_norm_squared(1);
        for t in -4..=4 {
            assert_eq!(f.conjugate_at(&[q(t)]).unwrap(), ExtReal::Finite(frac(t * t, 2)));
        }
        let zero = quad(&[&[0]], &[0], 0);
        assert_eq!(zero.conjugate_at(&[q(0)]).unwrap(), ExtReal::Finite(q(0)));
        assert_eq!(zero.conjugate_at(&[q(3)]).unwrap(), ExtReal::PlusInf);
        let shifted = quad(&[&[1]], &[1], 0);
        for t in -4..=4 {
            assert_eq!(
                shifted.conjugate_at(&[q(t)]).unwrap(),
                ExtReal::Finite(frac((t - 1) * (t - 1), 2))
            );
        }
    }

    #[test]
    fn conjugate_involution() {
        let f = quad(&[&[2, 1], &[1, 3]], &[1, -2], 5);
        let ff = f.conjugate().unwrap().conjugate().unwrap();
        for x in [[0, 0], [1, -1], [3, 2]] {
            let x: Vec<Q> = x.iter().map(|&v| q(v)).collect();
            assert_eq!(ff.eval(&x), f.eval(&x));
        }
        assert_eq!(quad(&[&[1, 0], &[0, 0]], &[0, 0], 0).conjugate().unwrap_err(), Error::Singular);
    }

    #[test]
    fn h_fy_examples() {
        let f = QuadFunc::<Q>::half_norm_squared(1);
        assert_eq!(f.h_fy(&pt(&[q(1)], &[q(1)])).unwrap(), ExtReal::Finite(q(1)));
        assert_eq!(f.h_fy(&pt(&[q(1)], &[q(0)])).unwrap(), ExtReal::Finite(frac(1, 2)));
        let zero = quad(&[&[0]], &[0], 0);
        assert_eq!(zero.h_fy(&pt(&[q(4)], &[q(2)])).unwrap(), ExtReal::PlusInf);
    }

    #[test]
    fn eps_subdifferential_examples() {
        let f = QuadFunc::<Q>::half_norm_squared(1);
        // ½t² ≤ ½ ⇔ |t| ≤ 1
        for (t, expect) in [(frac(1, 1), true), (frac(-1, 1), true), (frac(11, 10), false)] {
            assert_eq!(
                f.in_eps_subdifferential(&pt(&[q(0)], &[t]), &frac(1, 2)).unwrap(),
                expect
            );
        }
        let g = quad(&[&[2, 1], &[1, 3]], &[1, -2], 5);
        let x = vec![q(1), q(-2)];
        let p = pt(&x, &g.gradient(&x));
        assert!(g.in_eps_subdifferential(&p, &q(0)).unwrap());
        assert!(!g.in_eps_subdifferential(&pt(&x, &[q(0), q(0)]), &q(0)).unwrap());
        assert_eq!(
            f.in_eps_subdifferential(&pt(&[q(0)], &[q(0)]), &q(-1)).unwrap_err(),
            Error::NegativeEpsilon
        );
    }

    #[test]
    fn eps_subdifferential_is_strictly_smaller_than_enlargement() {
        // ε = ¼: ∂_ε f(0) has radius √(1/2) ≈ 0.707, (∂f)^ε(0) has radius 1.
        let f = QuadFunc::<Q>::half_norm_squared(1);
        let t = f.subdifferential().unwrap();
        let eps = frac(1, 4);
        let gap_point = pt(&[q(0)], &[frac(9, 10)]);
        assert!(!f.in_eps_subdifferential(&gap_point, &eps).unwrap());
        assert!(in_enlargement_def(&t, &gap_point, &eps).unwrap());
        let inner = pt(&[q(0)], &[frac(7, 10)]);
        assert!(f.in_eps_subdifferential(&inner, &eps).unwrap());
        assert!(in_enlargement_def(&t, &inner, &eps).unwrap());
    }

    #[test]
    fn subdifferential_examples() {
        let f = QuadFunc::<Q>::half_norm_squared(1);
        let id = Operator::Linear(Subspace::graph_i64(&[vec![1]]).unwrap());
        assert!(f.subdifferential().unwrap().same_set(&id).unwrap());

        let d = quad(&[&[1, 0], &[0, 2]], &[0, 0], 0);
        let g = Operator::Linear(Subspace::graph_i64(&[vec![1, 0], vec![0, 2]]).unwrap());
        assert!(d.subdifferential().unwrap().same_set(&g).unwrap());

        let s = quad(&[&[1]], &[3], 0);
        let expect = id.translate(&pt(&[q(0)], &[q(3)])).unwrap();
        let sd = s.subdifferential().unwrap();
        assert!(sd.same_set(&expect).unwrap());
        assert!(sd.is_maximal_monotone_linear().unwrap());
    }

    #[test]
    fn represents_check_examples() {
        let f = QuadFunc::<Q>::half_norm_squared(1);
        let samples =
            FiniteSet::new((-3..=3).map(|y| pt(&[q(y)], &[q(y)])).collect()).unwrap();
        let grid: Vec<PairedPoint<Q>> = (-3..=3)
            .flat_map(|a| (-3..=3).map(move |b| (a, b)))
            .map(|(a, b)| pt(&[frac(a, 2)], &[frac(b, 2)]))
            .collect();
        assert!(represents_check(|p| f.h_fy(p).unwrap(), &samples, &grid));

        let t = Operator::Linear(Subspace::graph_i64(&[vec![1]]).unwrap());
        assert!(represents_check(|p| fitz_linear(&t, p).unwrap(), &samples, &grid));

        assert!(!represents_check(
            |p| ExtReal::Finite(duality(p) - q(1)),
            &samples,
            &grid
        ));
    }
}
