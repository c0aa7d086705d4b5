//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use monotone_core::generate::{
    gen_maximal_monotone, gen_monotone_linear, gen_point, gen_point_fine, gen_psd, rng,
    skew_matrix,
};
use monotone_core::oracle::oracle_fitz_sampled;
use monotone_core::suite::{bounded_oracle_instance, properties, run_property, SuiteReport};
use monotone_core::{
    decide_non_enlargeable, duality, ArithMode, effective_domain_fitz, fitz_linear, in_enlargement_def,
    in_enlargement_fitz, max_self_cancelling_part, zero_duality_locus, ExtReal, Fitzpatrick,
    Operator, PairedPoint, QuadFunc, Rational, Scalar, Subspace, Verdict, FLOAT_TOLERANCE,
};
use rand::Rng;

type Q = Rational;

struct Gate {
    failed: Vec<u32>,
}

impl Gate {
    fn record(&mut self, id: u32, title: &str, ok: bool, detail: String) {
        println!("criterion {id} [{}] {title}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id);
        }
    }
}

fn q(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn skew_instances(count: u64) -> impl Iterator<Item = (usize, u64)> {
    (0..count).map(|i| (1 + (i % 6) as usize, 1000 + i))
}

fn criterion_1(g: &mut Gate) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (n, seed) in skew_instances(200) {
        let s = skew_matrix(n, seed).unwrap();
        let a = Subspace::<Q>::graph_i64(&s).unwrap();
        let t = gen_point::<Q>(n, seed ^ 0xabc, 5);
        let op = Operator::affine(a.clone(), t).unwrap();
        match decide_non_enlargeable(&op) {
            Ok(Verdict::NonEnlargeable { predual, .. }) if predual.basis() == a.basis() => {}
            other => bad.push(format!("seed {seed}: {other:?}")),
        }
    }
    let el = start.elapsed();
    g.record(
        1,
        "skew graphs plus translations are non-enlargeable with pre-dual graph(S)",
        bad.is_empty() && el < Duration::from_secs(10),
        format!("200 instances, {} mismatches, {} (limit 10s){}", bad.len(), secs(el), first(&bad)),
    );
}

fn first(v: &[String]) -> String {
    v.first().map(|s| format!("; first: {s}")).unwrap_or_default()
}

fn criterion_2(g: &mut Gate) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for i in 0..200u64 {
        let n = 1 + (i % 6) as usize;
        let qm = gen_psd(n, 2000 + i).unwrap();
        let t = Subspace::<Q>::graph_i64(&qm).unwrap();
        let op = Operator::Linear(t.clone());
        match decide_non_enlargeable(&op) {
            Ok(Verdict::Enlargeable { witness, witness_eps, .. }) => {
                let def = in_enlargement_def(&op, &witness, &witness_eps).unwrap();
                let member = t.member(&witness).unwrap();
                // Independent spot check of the defining inequality on a
                // sample of graph points.
                let mut r = rng(i);
                let sampled_ok = (0..50).all(|_| {
                    let x: Vec<Q> = (0..n).map(|_| Q::from_i64(r.gen_range(-9..=9))).collect();
                    let y = t.combine(&x);
                    let d = duality(&witness.sub(&y).unwrap());
                    d >= -witness_eps.clone()
                });
                if !(def && !member && sampled_ok && witness_eps > Q::from_i64(0)) {
                    bad.push(format!("Q = {qm:?}: def {def}, member {member}, sampled {sampled_ok}"));
                }
            }
            other => bad.push(format!("Q = {qm:?}: {other:?}")),
        }
    }
    let el = start.elapsed();
    g.record(
        2,
        "graph(Q) with Q PSD nonzero is enlargeable with a verified witness",
        bad.is_empty() && el < Duration::from_secs(10),
        format!("200 instances, {} failures, {} (limit 10s){}", bad.len(), secs(el), first(&bad)),
    );
}

/// Random monotone linear or affine operator, point and ε ∈ [0, 10].
fn triple<S: Scalar>(i: u64) -> (Operator<S>, PairedPoint<S>, S) {
    let n = 1 + (i % 6) as usize;
    let seed = 3000 + i;
    let l = gen_monotone_linear::<S>(n, seed).unwrap();
    let mut r = rng(seed ^ 0x31);
    let base = if r.gen_bool(0.5) { gen_point::<S>(n, seed ^ 5, 3) } else { PairedPoint::zero(n) };
    let op = Operator::affine(l.clone(), base.clone()).unwrap();
    let eps = S::from_rational(&q(r.gen_range(0..=1000), 100));
    let coeffs = |dim: usize, r: &mut rand_chacha::ChaCha8Rng| -> Vec<S> {
        (0..dim).map(|_| S::from_rational(&q(r.gen_range(-12..=12), 4))).collect()
    };
    let p = match r.gen_range(0..3) {
        0 => gen_point_fine::<S>(n, seed ^ 9, 3, 4),
        1 => {
            let ed = effective_domain_fitz(&l).unwrap();
            ed.combine(&coeffs(ed.dim(), &mut r))
        }
        _ => {
            // A graph point pushed off T inside ed(φ).
            let ed = effective_domain_fitz(&l).unwrap();
            l.combine(&coeffs(l.dim(), &mut r)).add(&ed.combine(&coeffs(ed.dim(), &mut r)).scale(&S::from_rational(&q(1, 8)))).unwrap()
        }
    };
    (op, p.add(&base).unwrap(), eps)
}

#[derive(Default)]
struct RouteTally {
    disagreements: usize,
    boundary: usize,
    members: usize,
    first: Option<String>,
}

fn route_tally<S: Scalar>(count: u64) -> RouteTally {
    let mut t = RouteTally::default();
    for i in 0..count {
        let (op, p, eps) = triple::<S>(i);
        let def = in_enlargement_def(&op, &p, &eps).unwrap();
        let fitz = in_enlargement_fitz(&op, &p, &eps).unwrap();
        let gap = Fitzpatrick::new(&op).unwrap().gap(&p).unwrap();
        let at_boundary = match &gap {
            _ if S::MODE == ArithMode::Exact => false,
            ExtReal::Finite(v) => (v.to_f64() - eps.to_f64()).abs() <= FLOAT_TOLERANCE * (1.0 + eps.to_f64().abs()),
            _ => false,
        };
        if at_boundary {
            t.boundary += 1;
            continue;
        }
        if def {
            t.members += 1;
        }
        if def != fitz {
            t.disagreements += 1;
            t.first.get_or_insert(format!("triple {i}: def {def}, fitz {fitz}, gap {gap}, ε {eps}"));
        }
    }
    t
}

fn criterion_3(g: &mut Gate) {
    let float = route_tally::<f64>(1000);
    let exact = route_tally::<Q>(1000);
    let ok = float.disagreements == 0 && exact.disagreements == 0;
    g.record(
        3,
        "definition and Fitzpatrick membership routes agree",
        ok,
        format!(
            "float: 1000 triples, {} disagreements, {} boundary excluded, {} members; exact: 1000 triples, {} disagreements, {} boundary excluded, {} members{}",
            float.disagreements,
            float.boundary,
            float.members,
            exact.disagreements,
            exact.boundary,
            exact.members,
            float.first.or(exact.first).map(|s| format!("; first: {s}")).unwrap_or_default()
        ),
    );
}

fn criterion_4(g: &mut Gate) {
    let id_f = Operator::Linear(Subspace::<f64>::graph_i64(&[vec![1]]).unwrap());
    let id_q = Operator::Linear(Subspace::<Q>::graph_i64(&[vec![1]]).unwrap());
    let mut max_err = 0.0f64;
    let mut exact_ok = true;
    for i in -10..=10i64 {
        for j in -10..=10i64 {
            let (x, xs) = (q(i, 2), q(j, 2));
            let pq = PairedPoint::new(vec![x.clone()], vec![xs.clone()]).unwrap();
            let expect = (x.clone() + xs.clone()) * (x + xs) / Q::from_i64(4);
            exact_ok &= fitz_linear(&id_q, &pq).unwrap() == ExtReal::Finite(expect);
            let (xf, xsf) = (i as f64 / 2.0, j as f64 / 2.0);
            let pf = PairedPoint::new(vec![xf], vec![xsf]).unwrap();
            let v = fitz_linear(&id_f, &pf).unwrap().to_f64();
            max_err = max_err.max((v - 0.25 * (xf + xsf).powi(2)).abs());
        }
    }
    let mut oracle_err = 0.0f64;
    let mut oracle_bad = Vec::new();
    for i in 0..50u64 {
        let n = 1 + (i % 4) as usize;
        let (op, p) = bounded_oracle_instance::<f64>(n, 4000 + i).unwrap();
        let closed = fitz_linear(&op, &p).unwrap().to_f64();
        let s = oracle_fitz_sampled(&op, &p, 100_000).unwrap();
        let err = closed - s.value;
        oracle_err = oracle_err.max(err.abs());
        if !(err.abs() <= 1e-4 && s.value <= closed + 1e-9 * (1.0 + closed.abs()) && !s.unbounded) {
            oracle_bad.push(format!("instance {i}: closed {closed}, sampled {}", s.value));
        }
    }
    let ok = max_err <= 1e-12 && exact_ok && oracle_bad.is_empty();
    g.record(
        4,
        "closed-form Fitzpatrick anchor and sampled oracle",
        ok,
        format!(
            "21x21 grid: float max error {max_err:.2e} (limit 1e-12), exact {}; oracle on 50 bounded instances: max |closed - sampled| {oracle_err:.2e} (limit 1e-4){}",
            if exact_ok { "identical" } else { "MISMATCH" },
            first(&oracle_bad)
        ),
    );
}

fn criterion_5(g: &mut Gate) {
    let f = QuadFunc::<Q>::half_norm_squared(1);
    let sub = f.subdifferential().unwrap();
    let mut bad = Vec::new();
    let mut probes_total = 0;
    let mut gap_probes = 0;
    // ε = s² with s ∈ {1/2, 1, 2}; the enlargement radius 2s is rational.
    let cases: [(Q, Vec<Q>); 4] = [
        (q(1, 4), vec![q(0, 1), q(1, 2), q(-1, 2), q(7, 10), q(-7, 10), q(71, 100), q(9, 10), q(-1, 1), q(1, 1), q(101, 100)]),
        (q(1, 1), vec![q(0, 1), q(1, 1), q(-14, 10), q(141, 100), q(142, 100), q(-3, 2), q(19, 10), q(2, 1), q(-2, 1), q(201, 100)]),
        (q(4, 1), vec![q(0, 1), q(2, 1), q(-28, 10), q(283, 100), q(-283, 100), q(3, 1), q(39, 10), q(4, 1), q(-4, 1), q(401, 100)]),
        (q(1, 2), vec![q(6, 5), q(-6, 5), q(1, 1), q(-1, 1), q(141, 100), q(142, 100), q(0, 1), q(1, 2), q(-3, 2), q(7, 5)]),
    ];
    for (eps, probes) in &cases {
        for xs in probes {
            probes_total += 1;
            let p = PairedPoint::new(vec![Q::from_i64(0)], vec![xs.clone()]).unwrap();
            // x*² ≤ 2ε for the ε-subdifferential, x*² ≤ 4ε for the enlargement.
            let sq = xs.clone() * xs.clone();
            let want_sub = sq <= Q::from_i64(2) * eps.clone();
            let want_enl = sq <= Q::from_i64(4) * eps.clone();
            if want_enl && !want_sub {
                gap_probes += 1;
            }
            let got_sub = f.in_eps_subdifferential(&p, eps).unwrap();
            let got_enl = in_enlargement_def(&sub, &p, eps).unwrap();
            let got_enl_f = in_enlargement_fitz(&sub, &p, eps).unwrap();
            if got_sub != want_sub || got_enl != want_enl || got_enl_f != want_enl {
                bad.push(format!("ε = {eps}, x* = {xs}: sub {got_sub}/{want_sub}, enl {got_enl}/{want_enl}"));
            }
        }
    }
    g.record(
        5,
        "ε-subdifferential of ½x² strictly inside the enlargement of its gradient",
        bad.is_empty() && gap_probes >= 4,
        format!("{probes_total} exact probes over ε ∈ {{1/4, 1, 4, 1/2}}, {gap_probes} in the gap, {} wrong verdicts{}", bad.len(), first(&bad)),
    );
}

fn criterion_6(g: &mut Gate) {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for i in 0..200u64 {
        let n = 1 + (i % 6) as usize;
        let seed = 5000 + i;
        let tf = gen_maximal_monotone::<f64>(n, seed).unwrap();
        let fitz = Fitzpatrick::new(&Operator::Linear(tf.clone())).unwrap();
        for b in tf.vdash().basis_points() {
            match fitz.eval(&b).unwrap() {
                ExtReal::Finite(v) => worst = worst.max(v.abs()),
                other => bad.push(format!("seed {seed}: φ = {other} on T^⊢")),
            }
        }
        let tq = gen_maximal_monotone::<Q>(n, seed).unwrap();
        let fq = Fitzpatrick::new(&Operator::Linear(tq.clone())).unwrap();
        for b in tq.vdash().basis_points() {
            if fq.eval(&b).unwrap() != ExtReal::Finite(Q::from_i64(0)) {
                bad.push(format!("seed {seed}: exact φ ≠ 0 on T^⊢ at {b}"));
            }
        }
        let part = max_self_cancelling_part(&tq).unwrap();
        let locus = zero_duality_locus(&tq).unwrap();
        if part.basis() != locus.basis() {
            bad.push(format!("seed {seed}: T ∩ T^⊢ differs from the zero-duality locus"));
        }
    }
    g.record(
        6,
        "φ_T vanishes on T^⊢ and T ∩ T^⊢ is the zero-duality locus",
        bad.is_empty() && worst <= 1e-9,
        format!("200 maximal monotone relations, max |φ| on T^⊢ basis (float) {worst:.2e} (limit 1e-9), {} exact failures{}", bad.len(), first(&bad)),
    );
}

fn criterion_7(g: &mut Gate) {
    let names = [
        "self_cancelling_inside_dual",
        "monotone_dual_is_maximal",
        "sign_never_neither",
        "skew_iff_maximal_self_cancelling",
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (label, reports) in [
        ("float", run_named(&properties::<f64>(), &names)),
        ("exact", run_named(&properties::<Q>(), &names)),
    ] {
        for r in reports {
            ok &= r.failures == 0 && r.trials == 200;
            parts.push(format!("{label} {} {}/{}", r.name, r.trials - r.failures, r.trials));
        }
    }
    g.record(7, "self-cancelling, dual maximality, sign and skew property suites", ok, parts.join(", "));
}

fn run_named(props: &[monotone_core::suite::Property], names: &[&str]) -> Vec<monotone_core::suite::PropertyReport> {
    names
        .iter()
        .map(|name| {
            let (i, p) = props.iter().enumerate().find(|(_, p)| p.name == *name).expect("property exists");
            run_property(p, i, 200, 7)
        })
        .collect()
}

fn criterion_8(g: &mut Gate) {
    let mut bad = Vec::new();
    let mut checks = 0;
    let instances: Vec<Operator<Q>> = (0..20u64)
        .map(|i| {
            let n = 1 + (i % 4) as usize;
            let l = match i % 3 {
                0 => Subspace::graph_i64(&skew_matrix(n, 6000 + i).unwrap()).unwrap(),
                1 => Subspace::graph_i64(&gen_psd(n, 6000 + i).unwrap()).unwrap(),
                _ => gen_maximal_monotone(n, 6000 + i).unwrap(),
            };
            Operator::affine(l, gen_point(n, 6100 + i, 2)).unwrap()
        })
        .collect();
    for (k, op) in instances.iter().enumerate() {
        let n = op.n();
        let base = decide_non_enlargeable(op).unwrap();
        for j in 0..50u64 {
            let seed = 7000 + 100 * k as u64 + j;
            let t = gen_point_fine::<Q>(n, seed, 4, 3);
            let moved = op.translate(&t).unwrap();
            let v = decide_non_enlargeable(&moved).unwrap();
            let same = match (&base, &v) {
                (Verdict::NonEnlargeable { predual: a, .. }, Verdict::NonEnlargeable { predual: b, .. }) => a == b,
                (
                    Verdict::Enlargeable { witness: wa, witness_eps: ea, .. },
                    Verdict::Enlargeable { witness: wb, witness_eps: eb, .. },
                ) => wa.add(&t).unwrap() == *wb && ea == eb,
                _ => false,
            };
            let p = gen_point_fine::<Q>(n, seed ^ 1, 3, 2);
            let eps = q(rng(seed).gen_range(0..=40), 4);
            let mem = op.contains_point(&p).unwrap() == moved.contains_point(&p.add(&t).unwrap()).unwrap();
            let def = in_enlargement_def(op, &p, &eps).unwrap() == in_enlargement_def(&moved, &p.add(&t).unwrap(), &eps).unwrap();
            let fitz = in_enlargement_fitz(op, &p, &eps).unwrap() == in_enlargement_fitz(&moved, &p.add(&t).unwrap(), &eps).unwrap();
            checks += 1;
            if !(same && mem && def && fitz) {
                bad.push(format!("instance {k}, t = {t}: verdict {same}, member {mem}, def {def}, fitz {fitz}"));
            }
        }
    }
    g.record(
        8,
        "verdicts and memberships invariant under translation, witnesses shift by t",
        bad.is_empty(),
        format!("{} instances x 50 translations = {checks} exact checks, {} failures{}", instances.len(), bad.len(), first(&bad)),
    );
}

fn run_cli_suite(args: &[&str]) -> (bool, Duration, String) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_monotone"))
        .arg("suite")
        .args(args)
        .env_remove(monotone_core::ARITH_ENV_VAR)
        .output()
        .expect("run monotone binary");
    let el = start.elapsed();
    let code = out.status.code();
    let summary = match serde_json::from_slice::<SuiteReport>(&out.stdout) {
        Ok(r) => {
            let failing: Vec<&str> = r.properties.iter().filter(|p| p.failures > 0).map(|p| p.name.as_str()).collect();
            format!("{} properties, failing {:?}", r.properties.len(), failing)
        }
        Err(e) => format!("unparseable report: {e}"),
    };
    (code == Some(0), el, format!("exit {code:?}, {}, {summary}", secs(el)))
}

fn criterion_9(g: &mut Gate) {
    let (ok_f, el_f, msg_f) = run_cli_suite(&[]);
    let (ok_e, el_e, msg_e) = run_cli_suite(&["--exact"]);
    g.record(
        9,
        "full suite command, float < 60s and exact < 10min, exit 0",
        ok_f && ok_e && el_f < Duration::from_secs(60) && el_e < Duration::from_secs(600),
        format!("float: {msg_f}; exact: {msg_e}"),
    );
}

fn main() -> ExitCode {
    let mut g = Gate { failed: Vec::new() };
    criterion_1(&mut g);
    criterion_2(&mut g);
    criterion_3(&mut g);
    criterion_4(&mut g);
    criterion_5(&mut g);
    criterion_6(&mut g);
    criterion_7(&mut g);
    criterion_8(&mut g);
    criterion_9(&mut g);
    if g.failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {:?}", g.failed);
        ExitCode::FAILURE
    }
}
