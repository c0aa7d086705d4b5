//! Brute-force oracles, independent of the closed forms they check.
//!
//! Both work in `f64` on an explicit parametrization of the relation and
//! never touch the Gram pseudo-inverse or the dimension criterion.

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::relation::PairedPoint;
use crate::scalar::Scalar;

/// Radii of the nested parameter boxes searched by [`oracle_fitz_sampled`].
pub const RADII: [f64; 3] = [1.0, 10.0, 100.0];

/// Van der Corput radical inverse of `index` in base `base`.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    out
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Point `index` of the Halton sequence in `[0, 1)^dim`.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    (0..dim).map(|d| radical_inverse(index, PRIMES[d])).collect()
}

struct Parametrized {
    n: usize,
    basis: Vec<Vec<f64>>,
    origin: Vec<f64>,
}

impl Parametrized {
    fn new<S: Scalar>(op: &Operator<S>) -> Result<Self> {
        let l = op
            .linear_part()
            .ok_or(Error::FiniteUnsupported("parametrized oracles"))?;
        let raw: Vec<Vec<f64>> = l
            .basis()
            .iter()
            .map(|r| r.iter().map(Scalar::to_f64).collect())
            .collect();
        Ok(Parametrized {
            n: l.n(),
            basis: orthonormalize(raw),
            origin: op
                .base_point()
                .expect("linear or affine")
                .to_concat()
                .iter()
                .map(Scalar::to_f64)
                .collect(),
        })
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn point(&self, alpha: &[f64]) -> Vec<f64> {
        let mut v = self.origin.clone();
        for (a, b) in alpha.iter().zip(&self.basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += a * bi;
            }
        }
        v
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass, so that the
/// parameter radius equals the distance from the base point.
fn orthonormalize(vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for _ in 0..2 {
            for q in &out {
                let c = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-12 {
            out.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `⟨x, y*⟩ + ⟨y, x*⟩ − ⟨y, y*⟩` on concatenated vectors.
fn fitz_integrand(p: &[f64], y: &[f64], n: usize) -> f64 {
    dot(&p[..n], &y[n..]) + dot(&y[..n], &p[n..]) - dot(&y[..n], &y[n..])
}

/// `⟨x − y, x* − y*⟩` on concatenated vectors.
fn monotone_gap(p: &[f64], y: &[f64], n: usize) -> f64 {
    (0..n).map(|i| (p[i] - y[i]) * (p[n + i] - y[n + i])).sum()
}

/// Outcome of [`oracle_fitz_sampled`].
#[derive(Clone, Debug)]
pub struct SampledSup {
    /// Best integrand value found over all radii.
    pub value: f64,
    /// Best value inside each box of [`RADII`].
    pub by_radius: Vec<f64>,
    /// The running maximum grows too fast across radii to be bounded.
    pub unbounded: bool,
}

/// Lower bound on `φ_T(p)` from quasi-random search of the Fitzpatrick
/// integrand over nested parameter boxes.
///
/// Each box gets a Halton sweep followed by a local search around the
/// incumbent whose box grows after an improving batch and shrinks otherwise.
pub fn oracle_fitz_sampled<S: Scalar>(op: &Operator<S>, p: &PairedPoint<S>, budget: usize) -> Result<SampledSup> {
    if budget == 0 {
        return Err(Error::Parameter("budget must be at least 1".into()));
    }
    let rel = Parametrized::new(op)?;
    let n = rel.n;
    let pv: Vec<f64> = p.to_concat().iter().map(Scalar::to_f64).collect();
    let k = rel.dim();
    let eval = |alpha: &[f64]| fitz_integrand(&pv, &rel.point(alpha), n);

    let mut best_alpha = vec![0.0; k];
    let mut best = eval(&best_alpha);
    let mut by_radius = Vec::with_capacity(RADII.len());
    let per_radius = (budget / RADII.len()).max(1);
    let sweep = per_radius / 2;
    let batch = 64usize;
    let mut index: u64 = 1;

    for &r in &RADII {
        if k > 0 {
            for _ in 0..sweep {
                let u = halton(index, k);
                index += 1;
                let alpha: Vec<f64> = u.iter().map(|v| (2.0 * v - 1.0) * r).collect();
                let val = eval(&alpha);
                if val > best {
                    best = val;
                    best_alpha = alpha;
                }
            }
            let mut half_width = r / 4.0;
            let mut remaining = per_radius - sweep;
            while remaining > 0 && half_width > 1e-13 * r {
                let m = batch.min(remaining);
                let mut improved = false;
                for _ in 0..m {
                    let u = halton(index, k);
                    index += 1;
                    let alpha: Vec<f64> = best_alpha
                        .iter()
                        .zip(&u)
                        .map(|(c, v)| (c + (2.0 * v - 1.0) * half_width).clamp(-r, r))
                        .collect();
                    let val = eval(&alpha);
                    if val > best {
                        best = val;
                        best_alpha = alpha;
                        improved = true;
                    }
                }
                remaining -= m;
                half_width = if improved { (half_width * 1.5).min(r) } else { half_width * 0.5 };
            }
        }
        by_radius.push(best);
    }

    // Linear growth along an unbounded direction multiplies the increment
    // by the radius ratio; bounded maxima stop increasing.
    let d1 = by_radius[1] - by_radius[0];
    let d2 = by_radius[2] - by_radius[1];
    let unbounded = d2 > 1e-6 * (1.0 + by_radius[1].abs()) && d2 > 5.0 * d1.max(0.0);
    Ok(SampledSup { value: best, by_radius, unbounded })
}

/// Brute-force maximality test for `n ≤ 2`: returns `false` iff some grid
/// point outside `T` stays monotonically related to every point of `T`.
///
/// Grid points are `grid_step`-spaced in `[-grid_radius, grid_radius]^{2n}`.
/// The relation is probed on a coarse parameter grid followed by a local
/// fine grid around the worst coarse point. A candidate only counts when its
/// worst sampled gap is at least `grid_step²`, which guards against
/// sampling that just misses a small violation.
pub fn oracle_maximality_search<S: Scalar>(op: &Operator<S>, grid_radius: f64, grid_step: f64) -> Result<bool> {
    let n = op.n();
    if n > 2 {
        return Err(Error::DimensionTooLarge { n, max: 2 });
    }
    if !(grid_step > 0.0 && grid_radius >= 0.0) {
        return Err(Error::Parameter("grid_step must be positive and grid_radius non-negative".into()));
    }
    let rel = Parametrized::new(op)?;
    let k = rel.dim();
    let margin = grid_step * grid_step;

    let coarse_radius = 4.0 * grid_radius.max(1.0);
    let coarse_step = grid_step / 2.0;
    // Probe points of T, nearest to the base point first so that violations
    // are usually found after a few evaluations.
    let mut coarse: Vec<(Vec<f64>, Vec<f64>)> = lattice(k, coarse_radius, coarse_step)
        .into_iter()
        .map(|a| {
            let y = rel.point(&a);
            (a, y)
        })
        .collect();
    coarse.sort_by(|a, b| dot(&a.0, &a.0).total_cmp(&dot(&b.0, &b.0)));
    let fine_offsets = lattice(k, coarse_step, coarse_step / 10.0);

    let member_of_t = |p: &[f64]| {
        let shifted: Vec<S> = p
            .iter()
            .zip(&rel.origin)
            .map(|(a, b)| S::from_rational(&crate::scalar::Rational::from_float(a - b).unwrap()))
            .collect();
        op.linear_part().unwrap().member_concat(&shifted).unwrap_or(false)
    };

    'candidates: for p in lattice(2 * n, grid_radius, grid_step) {
        let (mut worst, mut at) = (f64::INFINITY, 0);
        for (i, (_, y)) in coarse.iter().enumerate() {
            let g = monotone_gap(&p, y, n);
            if g < margin {
                continue 'candidates;
            }
            if g < worst {
                worst = g;
                at = i;
            }
        }
        if member_of_t(&p) {
            continue;
        }
        let centre = &coarse[at].0;
        for off in &fine_offsets {
            let a: Vec<f64> = centre.iter().zip(off).map(|(c, o)| c + o).collect();
            if monotone_gap(&p, &rel.point(&a), n) < margin {
                continue 'candidates;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// All points of `{-r, -r + h, ..., r}^dim`.
fn lattice(dim: usize, radius: f64, step: f64) -> Vec<Vec<f64>> {
    let m = (radius / step).round() as i64;
    let axis: Vec<f64> = (-m..=m).map(|i| i as f64 * step).collect();
    let mut out = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut q = prefix.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}
