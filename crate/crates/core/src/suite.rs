//! Seeded property suite over random instance families.
//!
//! Each property is checked on independent trials that run in parallel.
//! Per-trial seeds derive from the suite seed, so a fixed seed reproduces
//! the same report apart from timings.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::document::{emit_operator, parse_operator};
use crate::enlargeability::{
    classify_dual_sign, construct_from_self_cancelling, decide_non_enlargeable, disambiguate_sign,
    fitz_vanishes_on_dual, max_self_cancelling_part, monotone_dual_is_maximal, zero_duality_locus,
    Sign, Verdict,
};
use crate::error::{Error, Result};
use crate::fitzpatrick::{
    effective_domain_fitz, fitz_finite, fitz_linear, in_enlargement_def, in_enlargement_fitz,
    ExtReal, Fitzpatrick, QuadFunc,
};
use crate::generate::{
    gen_linear_relation, gen_maximal_monotone, gen_mixed, gen_monotone_linear, gen_point,
    gen_point_fine, gen_psd, gen_self_cancelling, gen_skew, gen_skew_relation, random_int_rows, rng,
    skew_matrix,
};
use crate::operator::{
    is_maximal_self_cancelling, is_skew, FiniteSet, Operator,
};
use crate::oracle::{oracle_fitz_sampled, oracle_maximality_search};
use crate::relation::{canonicalize, duality, pairing, PairedPoint, Subspace};
use crate::scalar::{ArithMode, Rational, Scalar};

pub const DEFAULT_TRIALS: usize = 200;
/// Largest `n` used by the suite; `n` cycles through `1..=SUITE_MAX_N`.
pub const SUITE_MAX_N: usize = 6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub mode: ArithMode,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { trials: DEFAULT_TRIALS, seed: 0, mode: ArithMode::Float }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// Trials at a tolerance boundary, excluded from `failures`.
    pub boundary: usize,
    pub first_counterexample: Option<String>,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub mode: ArithMode,
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<PropertyReport>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// Copy with all timing fields zeroed.
    pub fn without_timings(&self) -> SuiteReport {
        let mut r = self.clone();
        r.elapsed_ms = 0;
        for p in &mut r.properties {
            p.elapsed_ms = 0;
        }
        r
    }
}

/// Result of a single trial.
#[derive(Clone, Debug)]
pub enum Outcome {
    Pass,
    Boundary,
    Fail(String),
}

type Check = fn(usize, u64) -> Result<Outcome>;

/// A named property together with its trial schedule.
pub struct Property {
    pub name: &'static str,
    /// Fixed trial count; `None` uses the suite-wide count.
    pub trials: Option<usize>,
    pub max_n: usize,
    pub check: Check,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` of property `index`.
pub fn trial_seed(seed: u64, index: usize, trial: usize) -> u64 {
    splitmix(splitmix(seed ^ ((index as u64) << 40)) ^ trial as u64)
}

/// Runs one property and aggregates its trials.
pub fn run_property(prop: &Property, index: usize, trials: usize, seed: u64) -> PropertyReport {
    let start = Instant::now();
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let n = 1 + t % prop.max_n;
            let s = trial_seed(seed, index, t);
            match (prop.check)(n, s) {
                Ok(o) => o,
                Err(e) => Outcome::Fail(format!("error: {e}")),
            }
        })
        .collect();
    let mut failures = 0;
    let mut boundary = 0;
    let mut first = None;
    for (t, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass => {}
            Outcome::Boundary => boundary += 1,
            Outcome::Fail(msg) => {
                failures += 1;
                if first.is_none() {
                    let n = 1 + t % prop.max_n;
                    let s = trial_seed(seed, index, t);
                    first = Some(format!("trial {t} (n = {n}, seed = {s}): {msg}"));
                }
            }
        }
    }
    PropertyReport {
        name: prop.name.to_string(),
        trials,
        failures,
        boundary,
        first_counterexample: first,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// Runs every property in the configured arithmetic mode.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    match config.mode {
        ArithMode::Exact => run::<Rational>(config),
        ArithMode::Float => run::<f64>(config),
    }
}

fn run<S: Scalar>(config: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let properties: Vec<PropertyReport> = properties::<S>()
        .iter()
        .enumerate()
        .map(|(i, p)| run_property(p, i, p.trials.unwrap_or(config.trials), config.seed))
        .collect();
    SuiteReport {
        mode: S::MODE,
        seed: config.seed,
        passed: properties.iter().all(|p| p.failures == 0),
        properties,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// Re-runs one trial of the named property, e.g. to inspect a counterexample.
pub fn replay<S: Scalar>(name: &str, n: usize, seed: u64) -> Result<Outcome> {
    let prop = properties::<S>()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::Parameter(format!("unknown property '{name}'")))?;
    (prop.check)(n, seed)
}

fn prop(name: &'static str, check: Check) -> Property {
    Property { name, trials: None, max_n: SUITE_MAX_N, check }
}

/// The full property list for scalar type `S`.
pub fn properties<S: Scalar>() -> Vec<Property> {
    vec![
        prop("vdash_biduality", biduality::<S>),
        prop("vdash_dimension_law", dimension_law::<S>),
        prop("vdash_order_reversal", order_reversal::<S>),
        prop("pairing_polarization", polarization::<S>),
        prop("canonicalize_invariance", canonicalize_invariance::<S>),
        prop("self_cancelling_inside_dual", self_cancelling_inside_dual::<S>),
        prop("skew_iff_maximal_self_cancelling", skew_iff_msc::<S>),
        prop("vdash_commutes_with_negate", vdash_negate::<S>),
        prop("finite_samples_monotone", finite_samples_monotone::<S>),
        Property { name: "maximality_matches_oracle", trials: Some(100), max_n: 2, check: maximality_oracle::<S> },
        prop("enlargement_route_equivalence", route_equivalence::<S>),
        prop("fitzpatrick_above_duality", fitz_above_duality::<S>),
        prop("sampled_sup_below_closed_form", sampled_sup::<S>),
        prop("enlargement_translation_equivariance", membership_translation::<S>),
        prop("eps_subdifferential_inside_enlargement", eps_subdifferential::<S>),
        prop("quadratic_conjugate_involution", conjugate_involution::<S>),
        prop("enlargement_monotone_in_eps", eps_monotonicity::<S>),
        prop("decide_constructive", decide_constructive::<S>),
        prop("decide_negative", decide_negative::<S>),
        prop("decide_mixed", decide_mixed::<S>),
        prop("fitzpatrick_vanishes_on_dual", vanishes_on_dual::<S>),
        prop("self_cancelling_part_is_zero_duality_locus", zero_duality::<S>),
        prop("witness_soundness", witness_soundness::<S>),
        prop("verdict_translation_invariance", verdict_translation::<S>),
        prop("monotone_dual_is_maximal", monotone_dual::<S>),
        prop("sign_never_neither", sign_never_neither::<S>),
        prop("document_round_trip", document_round_trip::<S>),
        Property { name: "fitzpatrick_matches_sampled_oracle", trials: Some(50), max_n: 4, check: oracle_agreement::<S> },
        prop("effective_domain_identity", effective_domain_identity::<S>),
    ]
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<Outcome> {
    Ok(if ok { Outcome::Pass } else { Outcome::Fail(msg()) })
}

fn frac<S: Scalar>(a: i64, b: i64) -> S {
    S::from_rational(&Rational::new(a.into(), b.into()))
}

fn int_rows<S: Scalar>(m: &[Vec<i64>]) -> Vec<Vec<S>> {
    m.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect()
}

fn random_subspace<S: Scalar>(n: usize, seed: u64) -> Result<Subspace<S>> {
    canonicalize(&int_rows::<S>(&random_int_rows(2 * n, seed)), n)
}

/// A point of `l` with small integer coordinates in its basis.
fn point_in<S: Scalar>(l: &Subspace<S>, r: &mut impl Rng) -> PairedPoint<S> {
    let coeffs: Vec<S> = (0..l.dim()).map(|_| S::from_i64(r.gen_range(-3..=3))).collect();
    l.combine(&coeffs)
}

/// Graph point or a point of `ed(φ)` or an arbitrary point, in equal shares.
fn probe_point<S: Scalar>(l: &Subspace<S>, seed: u64) -> Result<PairedPoint<S>> {
    let mut r = rng(seed ^ 0x9b0e);
    Ok(match r.gen_range(0..3) {
        0 => point_in(l, &mut r),
        1 => point_in(&effective_domain_fitz(l)?, &mut r),
        _ => gen_point_fine(l.n(), seed, 3, 4),
    })
}

fn random_eps<S: Scalar>(r: &mut impl Rng) -> S {
    frac(r.gen_range(0..=80), 8)
}

/// Random monotone operator, affine half of the time.
fn monotone_operator<S: Scalar>(n: usize, seed: u64) -> Result<Operator<S>> {
    let l = gen_monotone_linear::<S>(n, seed)?;
    if rng(seed ^ 0xaff).gen_bool(0.5) {
        Operator::affine(l, gen_point(n, seed ^ 0x7, 3))
    } else {
        Ok(Operator::Linear(l))
    }
}

fn biduality<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let b = random_subspace::<S>(n, seed)?;
    ensure(b.vdash().vdash() == b, || format!("B = {:?}", b.basis()))
}

fn dimension_law<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let b = random_subspace::<S>(n, seed)?;
    let d = b.vdash().dim();
    ensure(b.dim() + d == 2 * n, || format!("dim B = {}, dim B^⊢ = {d}", b.dim()))
}

fn order_reversal<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let b = random_subspace::<S>(n, seed)?;
    let mut r = rng(seed ^ 0x0b);
    let keep: Vec<PairedPoint<S>> = (0..r.gen_range(0..=b.dim())).map(|_| point_in(&b, &mut r)).collect();
    let c = Subspace::span_points(&keep, n)?;
    if !b.contains(&c)? {
        return Ok(Outcome::Fail("C built inside B is not contained in B".into()));
    }
    ensure(c.vdash().contains(&b.vdash())?, || format!("B = {:?}, C = {:?}", b.basis(), c.basis()))
}

fn polarization<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let p = gen_point_fine::<S>(n, seed, 5, 3);
    let q = gen_point_fine::<S>(n, seed ^ 1, 5, 3);
    let s = gen_point_fine::<S>(n, seed ^ 2, 5, 3);
    let lam: S = frac(rng(seed).gen_range(-9..=9), 4);
    let scale = 1.0 + p.norm() * (q.norm() + s.norm()) * 4.0;
    let symmetric = (pairing(&p, &q)? - pairing(&q, &p)?).negligible(scale);
    let polar = (pairing(&p, &q)? - (duality(&p.add(&q)?) - duality(&p) - duality(&q))).negligible(scale);
    let bilinear = (pairing(&p.scale(&lam).add(&s)?, &q)?
        - (lam.clone() * pairing(&p, &q)? + pairing(&s, &q)?))
    .negligible(scale);
    ensure(symmetric && polar && bilinear, || format!("p = {p}, q = {q}, s = {s}"))
}

fn canonicalize_invariance<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let rows = int_rows::<S>(&random_int_rows(2 * n, seed));
    let b = canonicalize(&rows, n)?;
    let again = canonicalize(b.basis(), n)?;
    let mut r = rng(seed ^ 0xca);
    let mut shuffled: Vec<Vec<S>> = rows
        .iter()
        .map(|row| {
            let k: S = frac(r.gen_range(1..=7) * if r.gen_bool(0.5) { 1 } else { -1 }, r.gen_range(1..=5));
            row.iter().map(|v| v.clone() * k.clone()).collect()
        })
        .collect();
    shuffled.shuffle(&mut r);
    let c = canonicalize(&shuffled, n)?;
    let idempotent = match S::MODE {
        ArithMode::Exact => again.basis() == b.basis(),
        ArithMode::Float => again == b,
    };
    let invariant = match S::MODE {
        ArithMode::Exact => c.basis() == b.basis(),
        ArithMode::Float => c == b,
    };
    ensure(idempotent && invariant, || format!("rows = {rows:?}"))
}

fn self_cancelling_inside_dual<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let k = rng(seed).gen_range(0..=n);
    let a = gen_self_cancelling::<S>(n, k, seed)?;
    ensure(a.vdash().contains(&a)?, || format!("A = {:?}", a.basis()))
}

fn skew_iff_msc<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let l = gen_linear_relation::<S>(n, seed)?;
    let (a, b) = (is_skew(&l), is_maximal_self_cancelling(&l));
    ensure(a == b, || format!("is_skew = {a}, maximal self-cancelling = {b}, L = {:?}", l.basis()))
}

fn vdash_negate<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let l = random_subspace::<S>(n, seed)?;
    ensure(l.negate().vdash() == l.vdash().negate(), || format!("L = {:?}", l.basis()))
}

fn finite_samples_monotone<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let op = monotone_operator::<S>(n, seed)?;
    let l = op.linear_part().expect("linear");
    let base = op.base_point().expect("linear");
    let mut r = rng(seed ^ 0xf1);
    let pts = (0..8)
        .map(|_| point_in(l, &mut r).add(&base))
        .collect::<Result<Vec<_>>>()?;
    let finite = Operator::finite(pts)?;
    ensure(op.is_monotone() && finite.is_monotone(), || format!("T = {:?}", l.basis()))
}

fn maximality_oracle<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let l = gen_monotone_linear::<S>(n, seed)?;
    let op = Operator::Linear(l.clone());
    let criterion = op.is_maximal_monotone_linear()?;
    let oracle = oracle_maximality_search(&op, MAXIMALITY_GRID_RADIUS, 1.0)?;
    ensure(criterion == oracle, || {
        format!("dimension criterion {criterion}, oracle {oracle}, T = {:?}", l.basis())
    })
}

/// Compares the two membership routes; ties within tolerance are boundary cases.
fn routes_agree<S: Scalar>(op: &Operator<S>, p: &PairedPoint<S>, eps: &S) -> Result<Outcome> {
    let def = in_enlargement_def(op, p, eps)?;
    let fitz = in_enlargement_fitz(op, p, eps)?;
    if def == fitz {
        return Ok(Outcome::Pass);
    }
    if let ExtReal::Finite(g) = Fitzpatrick::new(op)?.gap(p)? {
        let scale = 1.0 + g.to_f64().abs() + eps.to_f64().abs() + p.norm().powi(2);
        if (g - eps.clone()).negligible(scale) {
            return Ok(Outcome::Boundary);
        }
    }
    Ok(Outcome::Fail(format!("definition route {def}, Fitzpatrick route {fitz}, p = {p}, ε = {eps}")))
}

fn route_equivalence<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let op = monotone_operator::<S>(n, seed)?;
    let p = probe_point(op.linear_part().unwrap(), seed)?.add(&op.base_point().unwrap())?;
    let eps = random_eps::<S>(&mut rng(seed ^ 0xe5));
    routes_agree(&op, &p, &eps)
}

fn fitz_above_duality<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let op = maximal_affine::<S>(n, seed)?;
    let p = probe_point(op.linear_part().unwrap(), seed)?.add(&op.base_point().unwrap())?;
    let member = op.contains_point(&p)?;
    match fitz_linear(&op, &p)? {
        ExtReal::Finite(v) => {
            let d = duality(&p);
            let scale = 1.0 + p.norm().powi(2);
            let above = d.tol_le(&v);
            let equal = (v.clone() - d.clone()).negligible(scale);
            ensure(above && (!member || equal), || format!("φ = {v}, ⟨x,x*⟩ = {d}, member = {member}, p = {p}"))
        }
        ExtReal::PlusInf => ensure(!member, || format!("φ = +∞ at member {p}")),
        ExtReal::MinusInf => Ok(Outcome::Fail("φ = −∞".into())),
    }
}

fn sampled_sup<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let op = monotone_operator::<S>(n, seed)?;
    let l = op.linear_part().unwrap().clone();
    let base = op.base_point().unwrap();
    let p = probe_point(&l, seed)?.add(&base)?;
    let closed = fitz_linear(&op, &p)?;
    let mut r = rng(seed ^ 0x55);
    let mut pts = vec![base.clone()];
    let mut prev: Option<S> = None;
    for _ in 0..4 {
        for _ in 0..4 {
            pts.push(point_in(&l, &mut r).add(&base)?);
        }
        let v = fitz_finite(&FiniteSet::new(pts.clone())?, &p)?;
        if let Some(c) = closed.finite() {
            if !v.tol_le(c) {
                return Ok(Outcome::Fail(format!("sampled {v} above closed form {c} at {p}")));
            }
        }
        if let Some(pv) = &prev {
            if !pv.tol_le(&v) {
                return Ok(Outcome::Fail(format!("sampled sup decreased from {pv} to {v}")));
            }
        }
        prev = Some(v);
    }
    Ok(Outcome::Pass)
}

fn membership_translation<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let op = monotone_operator::<S>(n, seed)?;
    let p = probe_point(op.linear_part().unwrap(), seed)?.add(&op.base_point().unwrap())?;
    let t = gen_point_fine::<S>(n, seed ^ 0x77, 4, 2);
    let eps = random_eps::<S>(&mut rng(seed ^ 0xe6));
    let a = in_enlargement_def(&op, &p, &eps)?;
    let b = in_enlargement_def(&op.translate(&t)?, &p.add(&t)?, &eps)?;
    let c = op.contains_point(&p)? == op.translate(&t)?.contains_point(&p.add(&t)?)?;
    if a == b && c {
        return Ok(Outcome::Pass);
    }
    if let ExtReal::Finite(g) = Fitzpatrick::new(&op)?.gap(&p)? {
        if (g - eps.clone()).negligible(1.0 + p.norm().powi(2) + t.norm().powi(2)) {
            return Ok(Outcome::Boundary);
        }
    }
    Ok(Outcome::Fail(format!("T: {a}, T + t: {b}, p = {p}, t = {t}, ε = {eps}")))
}

fn eps_subdifferential<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let f = QuadFunc::<S>::half_norm_squared(n);
    let sub = f.subdifferential()?;
    let p = gen_point_fine::<S>(n, seed, 2, 4);
    let mut r = rng(seed ^ 0xed);
    let eps = random_eps::<S>(&mut r);
    if f.in_eps_subdifferential(&p, &eps)? && !in_enlargement_def(&sub, &p, &eps)? {
        return Ok(Outcome::Fail(format!("p = {p} in ∂_ε f but not in (∂f)^ε, ε = {eps}")));
    }
    // With ε = s², x* = (3/2)s lies between √(2ε) and 2√ε.
    let s: S = frac(r.gen_range(1..=12), 4);
    let eps = s.clone() * s.clone();
    let mut xstar = vec![S::zero(); n];
    xstar[0] = frac::<S>(3, 2) * s;
    let w = PairedPoint::new(vec![S::zero(); n], xstar)?;
    let in_enl = in_enlargement_def(&sub, &w, &eps)?;
    let in_sub = f.in_eps_subdifferential(&w, &eps)?;
    ensure(in_enl && !in_sub, || format!("gap witness {w}: enlargement {in_enl}, ε-subdifferential {in_sub}"))
}

fn conjugate_involution<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let mut q = gen_psd(n, seed)?;
    for (i, row) in q.iter_mut().enumerate() {
        row[i] += 1;
    }
    let mut r = rng(seed ^ 0xc0);
    let b: Vec<S> = (0..n).map(|_| S::from_i64(r.gen_range(-3..=3))).collect();
    let f = QuadFunc::new(int_rows::<S>(&q), b, frac(r.gen_range(-6..=6), 2))?;
    let ff = f.conjugate()?.conjugate()?;
    for i in 0..5 {
        let x = gen_point_fine::<S>(n, seed ^ (i + 100), 3, 2).x;
        let (a, c) = (f.eval(&x), ff.eval(&x));
        let scale = 1.0 + a.to_f64().abs() * 1e3;
        if !(a.clone() - c.clone()).negligible(scale) {
            return Ok(Outcome::Fail(format!("f(x) = {a}, f**(x) = {c}")));
        }
    }
    Ok(Outcome::Pass)
}

fn eps_monotonicity<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let op = monotone_operator::<S>(n, seed)?;
    let p = probe_point(op.linear_part().unwrap(), seed)?.add(&op.base_point().unwrap())?;
    let mut r = rng(seed ^ 0xe7);
    let (e1, e2) = (random_eps::<S>(&mut r), random_eps::<S>(&mut r));
    let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
    if in_enlargement_def(&op, &p, &lo)? && !in_enlargement_def(&op, &p, &hi)? {
        return Ok(Outcome::Fail(format!("in T^{lo} but not T^{hi}: {p}")));
    }
    let m = Operator::Linear(gen_maximal_monotone::<S>(n, seed)?);
    let q = probe_point(m.linear_part().unwrap(), seed ^ 3)?;
    let zero = in_enlargement_def(&m, &q, &S::zero())?;
    let member = m.contains_point(&q)?;
    if zero != member {
        if let ExtReal::Finite(g) = Fitzpatrick::new(&m)?.gap(&q)? {
            if g.negligible(1.0 + q.norm().powi(2)) {
                return Ok(Outcome::Boundary);
            }
        }
    }
    ensure(zero == member, || format!("T^0 membership {zero}, T membership {member}, p = {q}"))
}

fn decide_constructive<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let a = gen_skew::<S>(n, seed)?;
    let t = gen_point::<S>(n, seed ^ 0x1, 5);
    let op = construct_from_self_cancelling(&a, &t)?;
    match decide_non_enlargeable(&op)? {
        Verdict::NonEnlargeable { predual, .. } => {
            ensure(predual == a, || format!("predual {:?} differs from graph(S) {:?}", predual.basis(), a.basis()))
        }
        v => Ok(Outcome::Fail(format!("skew graph classified as {v:?}"))),
    }
}

fn check_witness<S: Scalar>(op: &Operator<S>, v: &Verdict<S>) -> Result<Outcome> {
    match v {
        Verdict::Enlargeable { witness, witness_eps, .. } => {
            let def = in_enlargement_def(op, witness, witness_eps)?;
            let fitz = in_enlargement_fitz(op, witness, witness_eps)?;
            let member = op.contains_point(witness)?;
            ensure(def && fitz && !member && witness_eps.is_positive(), || {
                format!("witness {witness} (ε = {witness_eps}): def {def}, fitz {fitz}, member {member}")
            })
        }
        Verdict::NonEnlargeable { .. } => Ok(Outcome::Pass),
    }
}

fn decide_negative<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let q = gen_psd(n, seed)?;
    let op = Operator::Linear(Subspace::<S>::graph_i64(&q)?);
    let v = decide_non_enlargeable(&op)?;
    if v.is_non_enlargeable() {
        return Ok(Outcome::Fail(format!("graph(Q) non-enlargeable for Q = {q:?}")));
    }
    check_witness(&op, &v)
}

fn decide_mixed<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let m = gen_mixed(n, seed)?;
    let s = skew_matrix(n, seed)?;
    let q: Vec<Vec<i64>> = m.iter().zip(&s).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
    let t = Subspace::<S>::graph_i64(&m)?;
    let op = Operator::Linear(t.clone());
    if !op.is_maximal_monotone_linear()? {
        return Ok(Outcome::Fail(format!("graph(M) not maximal monotone, M = {m:?}")));
    }
    let v = decide_non_enlargeable(&op)?;
    if v.is_non_enlargeable() {
        return Ok(Outcome::Fail(format!("graph(M) non-enlargeable, M = {m:?}")));
    }
    let ker = S::kernel(&int_rows::<S>(&q), n);
    let rows: Vec<Vec<S>> = ker
        .iter()
        .map(|x| {
            let mx = m.iter().map(|row| row.iter().zip(x).fold(S::zero(), |acc, (a, b)| acc + S::from_i64(*a) * b.clone()));
            x.iter().cloned().chain(mx).collect()
        })
        .collect();
    let expect = canonicalize(&rows, n)?;
    let part = max_self_cancelling_part(&t)?;
    if part != expect {
        return Ok(Outcome::Fail(format!("T ∩ T^⊢ = {:?}, expected {:?}", part.basis(), expect.basis())));
    }
    check_witness(&op, &v)
}

fn vanishes_on_dual<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let t = gen_maximal_monotone::<S>(n, seed)?;
    ensure(fitz_vanishes_on_dual(&t)?, || format!("T = {:?}", t.basis()))
}

fn zero_duality<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let t = gen_maximal_monotone::<S>(n, seed)?;
    let part = max_self_cancelling_part(&t)?;
    let locus = zero_duality_locus(&t)?;
    if part != locus {
        return Ok(Outcome::Fail(format!("T ∩ T^⊢ = {:?}, zero-duality locus = {:?}", part.basis(), locus.basis())));
    }
    let pts = part.basis_points();
    for (i, b) in pts.iter().enumerate() {
        let scale = 1.0 + b.norm().powi(2);
        if !duality(b).negligible(scale) {
            return Ok(Outcome::Fail(format!("⟨b, b*⟩ ≠ 0 for {b}")));
        }
        for c in &pts[i + 1..] {
            if !pairing(b, c)?.negligible(1.0 + b.norm() * c.norm()) {
                return Ok(Outcome::Fail(format!("pairing({b}, {c}) ≠ 0")));
            }
        }
    }
    let mut r = rng(seed ^ 0x2d);
    for _ in 0..10 {
        let p = point_in(&t, &mut r);
        if duality(&p).negligible(1.0 + p.norm().powi(2)) && !part.member(&p)? {
            // In float mode a small but nonzero ⟨x, x*⟩ can pass the zero test.
            if S::MODE == ArithMode::Float && !duality(&p).is_zero() {
                return Ok(Outcome::Boundary);
            }
            return Ok(Outcome::Fail(format!("{p} ∈ T has zero duality but lies outside T ∩ T^⊢")));
        }
    }
    Ok(Outcome::Pass)
}

fn maximal_affine<S: Scalar>(n: usize, seed: u64) -> Result<Operator<S>> {
    let l = gen_maximal_monotone::<S>(n, seed)?;
    if rng(seed ^ 0xa2).gen_bool(0.5) {
        Operator::affine(l, gen_point(n, seed ^ 0x3, 3))
    } else {
        Ok(Operator::Linear(l))
    }
}

fn witness_soundness<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let op = maximal_affine::<S>(n, seed)?;
    let v = decide_non_enlargeable(&op)?;
    check_witness(&op, &v)
}

fn verdict_translation<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let op = maximal_affine::<S>(n, seed)?;
    let t = gen_point_fine::<S>(n, seed ^ 0x78, 4, 2);
    let moved = op.translate(&t)?;
    let (a, b) = (decide_non_enlargeable(&op)?, decide_non_enlargeable(&moved)?);
    match (&a, &b) {
        (Verdict::NonEnlargeable { predual: pa, .. }, Verdict::NonEnlargeable { predual: pb, .. }) => {
            ensure(pa == pb, || "pre-duals differ after translation".into())
        }
        (
            Verdict::Enlargeable { witness: wa, witness_eps: ea, .. },
            Verdict::Enlargeable { witness: wb, witness_eps: eb, .. },
        ) => {
            let shifted = wa.add(&t)?;
            let same_eps = (ea.clone() - eb.clone()).negligible(1.0 + ea.to_f64().abs());
            let exact_shift = match S::MODE {
                ArithMode::Exact => shifted == *wb,
                ArithMode::Float => shifted.approx_eq(wb),
            };
            ensure(exact_shift && same_eps, || format!("witness {wa} → {wb}, t = {t}, ε {ea} → {eb}"))
        }
        _ => Ok(Outcome::Fail(format!("verdict changed under translation by {t}"))),
    }
}

fn monotone_dual<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let mut r = rng(seed ^ 0x31);
    let a = if r.gen_bool(0.5) {
        gen_self_cancelling::<S>(n, r.gen_range(0..=n), seed)?
    } else {
        gen_skew_relation::<S>(n, seed)?
    };
    let monotone = monotone_dual_is_maximal(&a)?;
    let dim = a.vdash().dim();
    ensure(!monotone || dim == n, || format!("A^⊢ monotone with dimension {dim}, A = {:?}", a.basis()))
}

fn sign_never_neither<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let mut r = rng(seed ^ 0x51);
    let a = if r.gen_bool(0.5) {
        gen_skew_relation::<S>(n, seed)?
    } else {
        gen_linear_relation::<S>(n, seed)?
    };
    if !is_maximal_self_cancelling(&a) {
        let rejected = disambiguate_sign(&a) == Err(Error::NotMaximalSelfCancelling);
        return ensure(rejected, || "precondition not enforced".into());
    }
    match disambiguate_sign(&a) {
        Ok(Sign::Plus) | Ok(Sign::Minus) => {
            let s = classify_dual_sign(&a);
            ensure(s != Sign::Neither, || "classify_dual_sign disagrees".into())
        }
        Ok(Sign::Neither) => Ok(Outcome::Fail("Neither returned".into())),
        Err(e) => Ok(Outcome::Fail(format!("{e} for A = {:?}", a.basis()))),
    }
}

fn document_round_trip<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let mut r = rng(seed ^ 0xd0);
    let op: Operator<S> = match r.gen_range(0..3) {
        0 => Operator::finite((0..3).map(|i| gen_point_fine(n, seed ^ i, 3, 5)).collect())?,
        1 => Operator::Linear(gen_linear_relation(n, seed)?),
        _ => Operator::affine(gen_maximal_monotone(n, seed)?, gen_point_fine(n, seed ^ 9, 3, 7))?,
    };
    let text = emit_operator(&op);
    let back = parse_operator::<S>(&text)?.operator;
    let same = match (&op, &back) {
        (Operator::Linear(a), Operator::Linear(b)) if S::MODE == ArithMode::Exact => a.basis() == b.basis(),
        _ => op.same_set(&back)?,
    };
    ensure(same, || format!("document did not round-trip:\n{text}"))
}

/// Grid radius (step 1) of the brute-force maximality search.
pub const MAXIMALITY_GRID_RADIUS: f64 = 4.0;

/// Parameter radius within which a sampled-oracle instance counts as bounded.
pub const ORACLE_BOUNDED_RADIUS: f64 = 50.0;

/// Maximal monotone operator and a point of `ed(φ_T)` whose Fitzpatrick
/// maximizer lies within [`ORACLE_BOUNDED_RADIUS`] of the base point.
pub fn bounded_oracle_instance<S: Scalar>(n: usize, seed: u64) -> Result<(Operator<S>, PairedPoint<S>)> {
    for attempt in 0..64u64 {
        let s = seed ^ attempt.wrapping_mul(0x9e37_79b9);
        let op = maximal_affine::<S>(n, s)?;
        let l = op.linear_part().unwrap().clone();
        let base = op.base_point().unwrap();
        let mut r = rng(s ^ 0x0a);
        let p = point_in(&effective_domain_fitz(&l)?, &mut r).add(&base)?;
        if let Some(y) = Fitzpatrick::new(&op)?.worst_case_point(&p)? {
            if y.sub(&base)?.norm() <= ORACLE_BOUNDED_RADIUS {
                return Ok((op, p));
            }
        }
    }
    Err(Error::Parameter("no bounded instance found".into()))
}

fn oracle_agreement<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let (op, p) = bounded_oracle_instance::<S>(n, seed)?;
    let closed = fitz_linear(&op, &p)?;
    let Some(c) = closed.finite().map(Scalar::to_f64) else {
        return Ok(Outcome::Fail(format!("φ infinite on ed(φ) at {p}")));
    };
    let sampled = oracle_fitz_sampled(&op, &p, 100_000)?;
    let tol = 1e-4 * (1.0 + c.abs());
    ensure(sampled.value <= c + 1e-9 * (1.0 + c.abs()) && c - sampled.value <= tol && !sampled.unbounded, || {
        format!("closed form {c}, sampled {} (radii {:?}), p = {p}", sampled.value, sampled.by_radius)
    })
}

fn effective_domain_identity<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let t = gen_maximal_monotone::<S>(n, seed)?;
    let ed = effective_domain_fitz(&t)?;
    let alt = t.intersect(&t.vdash())?.vdash();
    if ed != alt {
        return Ok(Outcome::Fail(format!("ed(φ) = {:?}, (T ∩ T^⊢)^⊢ = {:?}", ed.basis(), alt.basis())));
    }
    let non_enlargeable = decide_non_enlargeable(&Operator::Linear(t.clone()))?.is_non_enlargeable();
    ensure(non_enlargeable == (ed == t), || format!("verdict {non_enlargeable} but ed(φ) = T is {}", ed == t))
}

pub fn property_names() -> Vec<&'static str> {
    properties::<f64>().iter().map(|p| p.name).collect()
}
