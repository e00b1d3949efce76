//! Acceptance criteria. Every comparison is exact equality of normal forms
//! or Laurent polynomials. Each test writes one `criterion N ... PASS|FAIL`
//! line straight to stderr, so the lines show even when output is captured.

use std::io::Write;
use std::time::{Duration, Instant};

use heckelab::affine::{examples as affine_ex, AffineRootSystem};
use heckelab::bernstein::{examples as datum_ex, AffineHecke, BernsteinElt, LabelFunctions};
use heckelab::checks::{self, SweepOptions};
use heckelab::iwahori::ParameterFunction;
use heckelab::maps::classify::fixtures as rank_one;
use heckelab::maps::{
    a1_classify, params_from_p, refine_datum, refinement_report, A1Verdict, Comparison, ComparisonConfig,
    ParamDictionary, StandardBernstein,
};
use heckelab::quotient::{build_quotient, fixtures as quotient_fx, morris_datum};
use heckelab::{BasedRootDatum, Exec, Scalar, ValidationReport};

fn verdict(n: u32, what: &str, failures: &[String], start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    let mut failures = failures.to_vec();
    if elapsed > budget {
        failures.push(format!("took {elapsed:.2?}, budget {budget:?}"));
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "criterion {n} ({what}): {status} in {elapsed:.2?}"
    );
    for f in &failures {
        let _ = writeln!(std::io::stderr(), "    {f}");
    }
    assert!(failures.is_empty(), "criterion {n}: {failures:?}");
}

fn collect(label: &str, rep: &ValidationReport, out: &mut Vec<String>) {
    for c in rep.failures() {
        out.push(format!(
            "{label}: {} ({})",
            c.name,
            c.witness.as_deref().unwrap_or("")
        ));
    }
}

fn algebra(datum: BasedRootDatum, lambda: Vec<i32>, lambda_star: Vec<i32>) -> AffineHecke {
    AffineHecke::new(&datum, LabelFunctions { lambda, lambda_star }).expect("valid labels")
}

fn opts(samples: usize) -> SweepOptions {
    SweepOptions {
        seed: 0,
        samples,
        ..SweepOptions::default()
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn criterion_1_bernstein_associativity() {
    let start = Instant::now();
    let cases = [
        ("A1 equal", algebra(datum_ex::a1_odd(), vec![1], vec![1])),
        (
            "A1 equal, alpha in 2X",
            algebra(datum_ex::a1_even(), vec![1], vec![1]),
        ),
        (
            "A1 lambda=2 lambda*=1",
            algebra(datum_ex::a1_even(), vec![2], vec![1]),
        ),
        ("A2 equal", algebra(datum_ex::a2(), vec![1, 1], vec![1, 1])),
    ];
    let mut failures = Vec::new();
    for (label, alg) in &cases {
        let o = opts(200);
        assert!(o.shape.terms <= 6);
        match checks::associativity(alg, o, Exec::Parallel) {
            Ok(rep) => collect(label, &rep, &mut failures),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    verdict(
        1,
        "Bernstein associativity, 200 triples per algebra",
        &failures,
        start,
        secs(60),
    );
}

fn iso(sys: AffineRootSystem, q: &[i32]) -> StandardBernstein {
    let b = sys.basis_from_point(&affine_ex::alcove_point(&sys)).unwrap();
    let spd = sys
        .special_point_data(&b, &vec![heckelab::Rational::from_integer(0.into()); sys.dim])
        .unwrap();
    StandardBernstein::new(spd, ParameterFunction::from_exponents(q)).unwrap()
}

#[test]
fn criterion_2_standard_bernstein_isomorphism() {
    let start = Instant::now();
    let cases = [
        ("A1", iso(affine_ex::a1_tilde(), &[1, 1])),
        ("A1 unequal", iso(affine_ex::a1_tilde_split(), &[2, 1])),
        ("A2", iso(affine_ex::a2_tilde(), &[1, 1, 1])),
    ];
    let mut failures = Vec::new();
    for (label, sb) in &cases {
        match checks::iso_multiplicative(sb, 3, opts(100), Exec::Parallel) {
            Ok(rep) => collect(label, &rep, &mut failures),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
        match checks::iso_round_trip(sb, 6, Exec::Parallel) {
            Ok(rep) => collect(label, &rep, &mut failures),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    verdict(
        2,
        "isomorphism multiplicative on 100 pairs, round trip for l(w) <= 6",
        &failures,
        start,
        secs(60),
    );
}

#[test]
fn criterion_3_involution() {
    let start = Instant::now();
    let cases = [
        (
            "A1 lambda=2 lambda*=1",
            algebra(datum_ex::a1_even(), vec![2], vec![1]),
        ),
        ("A2", algebra(datum_ex::a2(), vec![1, 1], vec![1, 1])),
        ("C2 unequal", algebra(datum_ex::sp4(), vec![1, 2], vec![1, 1])),
    ];
    let mut failures = Vec::new();
    for (label, alg) in &cases {
        match checks::involution(alg, opts(200), Exec::Parallel) {
            Ok(rep) => {
                for i in 0..alg.simple_count() {
                    let name = format!("iota[T[s{}]]", i + 1);
                    if rep.get(&name).is_none() {
                        failures.push(format!("{label}: missing {name}"));
                    }
                }
                collect(label, &rep, &mut failures)
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    verdict(
        3,
        "iota involutive and multiplicative on 200 pairs, iota(T_s) symbolic",
        &failures,
        start,
        secs(120),
    );
}

#[test]
fn criterion_4_rank_one_classification() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let classify = |spec| a1_classify(&spec, Exec::Parallel).expect("well-formed spec");

    let h = rank_one::algebra(2, 1);
    let c = classify(rank_one::spec(&h, &h, rank_one::meta(0, 2), BernsteinElt::zero()));
    if c.verdict != (A1Verdict::ValidEven { k: 0 }) {
        failures.push(format!("k = 0 matched: {:?}", c.verdict));
    }

    let src = rank_one::algebra(1, 2);
    let tgt = rank_one::algebra(2, 1);
    let c = classify(rank_one::odd_spec(&src, &tgt));
    if c.verdict != (A1Verdict::ValidOdd { k: 1 }) {
        failures.push(format!("k = 1 swapped: {:?}", c.verdict));
    }
    // T_{s,0}^2 = (q0 - 1) T_{s,0} + q0
    let t0 = tgt.t_s0(0);
    let lhs = tgt.mul(&t0, &t0).unwrap();
    let rhs = t0.scale(&(tgt.q0(0) - Scalar::one())) + tgt.scalar(tgt.q0(0));
    if lhs != rhs {
        failures.push(format!(
            "T_(s,0)^2 - (q0 - 1)T_(s,0) - q0 = {}",
            tgt.render(&(lhs - rhs))
        ));
    }

    let eq = rank_one::algebra(1, 1);
    let half = rank_one::algebra_halvable(1);
    let bad = [
        ("n = 2", &eq, rank_one::meta(0, 4)),
        ("n = 3", &eq, rank_one::meta(0, 6)),
        ("k = 1/2", &half, rank_one::meta(1, 2)),
        ("n = 1/2", &half, rank_one::meta(0, 1)),
        ("n = 3/2", &half, rank_one::meta(0, 3)),
    ];
    for (label, target, meta) in bad {
        let c = classify(rank_one::spec(&eq, target, meta, BernsteinElt::zero()));
        match &c.verdict {
            A1Verdict::Invalid {
                constraint: Some(k), ..
            } if !k.passed && k.witness.is_some() => {}
            v => failures.push(format!("{label}: expected a violated constraint, got {v:?}")),
        }
    }
    verdict(
        4,
        "rank-one classification: even, odd and five invalid shapes",
        &failures,
        start,
        secs(30),
    );
}

#[test]
fn criterion_5_basis_algorithms() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (label, sys) in [("A2", affine_ex::a2_tilde()), ("C2", affine_ex::c2_tilde())] {
        let b = sys.basis_from_point(&affine_ex::alcove_point(&sys)).unwrap();
        match checks::basis_sweep(&sys, &b, 3, Exec::Parallel) {
            Ok(rep) => {
                for name in [
                    "basis-containing-J",
                    "extend-to-basis",
                    "extend-matches-enumeration",
                ] {
                    if rep.get(name).is_none() {
                        failures.push(format!("{label}: missing check {name}"));
                    }
                }
                collect(label, &rep, &mut failures)
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    verdict(
        5,
        "basis_containing and extend_to_basis over every chamber, window 3",
        &failures,
        start,
        secs(120),
    );
}

#[test]
fn criterion_6_quotient_layer() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let fixtures = quotient_fx::passing();
    if fixtures.len() < 5 {
        failures.push(format!("only {} fixtures", fixtures.len()));
    }
    let mut saw_empty_j = false;
    let mut saw_rank_one_from_a2 = false;
    for (label, sys, b, marked, e) in &fixtures {
        let (qs, rep) = match build_quotient(sys, b, marked, 3, Exec::Parallel) {
            Ok(x) => x,
            Err(err) => {
                failures.push(format!("{label}: {err}"));
                continue;
            }
        };
        for name in ["reduced", "injective", "v-action"] {
            if rep.get(name).is_none() {
                failures.push(format!("{label}: missing check {name}"));
            }
        }
        collect(label, &rep, &mut failures);
        if let Err(err) = morris_datum(&qs, marked, e) {
            failures.push(format!("{label}: datum: {err}"));
        }
        saw_empty_j |= marked.j.is_empty();
        saw_rank_one_from_a2 |= sys.families.len() == 6 && sys.dim == 2 && qs.dim() == 1;
    }
    if !saw_empty_j {
        failures.push("no fixture with J empty".into());
    }
    if !saw_rank_one_from_a2 {
        failures.push("no rank-one quotient of A2".into());
    }
    verdict(
        6,
        "quotient reduced, injective on positive roots, v[a,J] acts as reflections",
        &failures,
        start,
        secs(60),
    );
}

#[test]
fn criterion_7_refinement() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let labels = LabelFunctions {
        lambda: vec![2],
        lambda_star: vec![0],
    };
    let datum = datum_ex::a1_even();
    match refinement_report(&datum, &labels, 3, Exec::Parallel) {
        Ok(rep) => collect("relations", &rep, &mut failures),
        Err(e) => failures.push(e.to_string()),
    }
    // the cross relation computed on both sides: T_s theta_y in normal form
    let src = AffineHecke::new(&datum, labels.clone()).unwrap();
    let (rd, rl) = refine_datum(&datum, &labels).unwrap();
    let tgt = AffineHecke::new(&rd, rl).unwrap();
    for y in -4..=4 {
        let a = src.mul(&src.t_s(0), &src.theta(vec![y])).unwrap();
        let b = tgt.mul(&tgt.t_s(0), &tgt.theta(vec![y])).unwrap();
        if src.render(&a) != tgt.render(&b) {
            failures.push(format!("T_s th[{y}]: {} vs {}", src.render(&a), tgt.render(&b)));
        }
    }
    verdict(
        7,
        "refinement at lambda* = 0 preserves the Bernstein relation",
        &failures,
        start,
        secs(60),
    );
}

fn comparison_config(
    datum: BasedRootDatum,
    target: (Vec<i32>, Vec<i32>),
    source: (Vec<i32>, Vec<i32>),
    eps: Vec<bool>,
) -> ComparisonConfig {
    ComparisonConfig {
        target_datum: datum,
        target_labels: LabelFunctions {
            lambda: target.0,
            lambda_star: target.1,
        },
        source_labels: LabelFunctions {
            lambda: source.0,
            lambda_star: source.1,
        },
        eps,
    }
}

#[test]
fn criterion_8_comparison() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let good = [
        (
            "rank 1, eps 0",
            comparison_config(
                datum_ex::a1_even(),
                (vec![2], vec![1]),
                (vec![2], vec![1]),
                vec![false],
            ),
        ),
        (
            "rank 1, eps 1",
            comparison_config(
                datum_ex::a1_even(),
                (vec![2], vec![1]),
                (vec![1], vec![2]),
                vec![true],
            ),
        ),
        (
            "rank 2, eps 0",
            comparison_config(
                datum_ex::sp4(),
                (vec![1, 2], vec![1, 1]),
                (vec![1, 2], vec![1, 1]),
                vec![false, false],
            ),
        ),
        (
            "rank 2, eps 1",
            comparison_config(
                datum_ex::sp4(),
                (vec![1, 2], vec![1, 1]),
                (vec![1, 1], vec![1, 2]),
                vec![false, true],
            ),
        ),
    ];
    for (label, cfg) in &good {
        match Comparison::new(cfg).and_then(|c| c.report(2, Exec::Parallel)) {
            Ok(rep) => {
                if !rep.checks.iter().any(|c| c.name.starts_with("shadow[")) {
                    failures.push(format!("{label}: no theta shadow check"));
                }
                collect(label, &rep, &mut failures)
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    // one label off: the relations must break
    let perturbed = comparison_config(
        datum_ex::sp4(),
        (vec![1, 2], vec![1, 1]),
        (vec![1, 3], vec![1, 1]),
        vec![false, false],
    );
    let rep = Comparison::new_unchecked(&perturbed)
        .unwrap()
        .report(2, Exec::Parallel)
        .unwrap();
    if rep.all_passed() {
        failures.push("perturbed labels pass every relation".into());
    }
    if Comparison::new(&perturbed).is_ok() {
        failures.push("perturbed labels accepted".into());
    }
    verdict(
        8,
        "comparison homomorphism for eps in {0, 1}, perturbation fails",
        &failures,
        start,
        secs(60),
    );
}

#[test]
fn criterion_9_parameter_dictionary() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let q = Scalar::q_pow;
    let t = Scalar::t_pow;
    let cases = [
        (
            q(3),
            q(1),
            ParamDictionary::Unique {
                eps: 0,
                q_alpha: q(2),
                q_alpha_star: q(1),
            },
        ),
        (
            q(1),
            q(3),
            ParamDictionary::Unique {
                eps: 1,
                q_alpha: q(2),
                q_alpha_star: q(1),
            },
        ),
        (
            q(2),
            q(1),
            ParamDictionary::Unique {
                eps: 0,
                q_alpha: t(3),
                q_alpha_star: t(1),
            },
        ),
        (
            q(2),
            q(2),
            ParamDictionary::Ambiguous {
                eps: 0,
                candidates: vec![(q(2), Scalar::one()), (q(1), q(1))],
            },
        ),
    ];
    for (p, pp, want) in cases {
        match params_from_p(&p, &pp) {
            Ok(got) if got == want => {}
            other => failures.push(format!("p = {p}, p' = {pp}: {other:?}")),
        }
    }
    verdict(
        9,
        "parameter dictionary, all three cases",
        &failures,
        start,
        secs(10),
    );
}
