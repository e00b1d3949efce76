//! Verification suites. Each returns its checks and a JSON detail value;
//! the caller prefixes names with the suite and sorts.

use serde_json::{json, Value};

use heckelab::affine::{AffineBasis, AffineRootSystem};
use heckelab::bernstein::{AffineHecke, BernsteinElt};
use heckelab::checks::{self, SweepOptions};
use heckelab::iwahori::ParameterFunction;
use heckelab::maps::hom::DEFAULT_BOX;
use heckelab::maps::{
    a1_classify, params_from_p, refinement_report, verify_hom, A1Verdict, Comparison, ComparisonError,
    HomSpec, ParamDictionary, StandardBernstein,
};
use heckelab::quotient::{build_quotient, morris_datum, MarkedRoots, QuotientError, QuotientSystem};
use heckelab::{Check, Exec, ValidationReport};

use crate::config::{AffineSpec, Config, HomConfig};
use crate::CliError;

pub const SUITES: [&str; 6] = [
    "appendixA",
    "appendixB",
    "appendixC",
    "appendixD",
    "quotient",
    "comparison",
];

/// Knobs shared by every suite.
#[derive(Debug, Clone, Copy)]
pub struct Knobs {
    pub seed: u64,
    pub window: Option<i64>,
    pub max_terms: usize,
    pub samples: usize,
    pub exec: Exec,
}

impl Knobs {
    fn sweep(&self) -> SweepOptions {
        let mut opts = SweepOptions {
            seed: self.seed,
            samples: self.samples,
            ..SweepOptions::default()
        };
        opts.shape.terms = self.max_terms;
        opts
    }

    fn window(&self) -> i64 {
        self.window.unwrap_or(3)
    }
}

pub struct SuiteOutput {
    pub report: ValidationReport,
    pub details: Value,
}

fn algebra_err(kind: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Algebra(format!("{kind}: {e}"))
}

fn prefixed(rep: ValidationReport, prefix: &str) -> ValidationReport {
    ValidationReport {
        checks: rep
            .checks
            .into_iter()
            .map(|c| Check {
                name: format!("{prefix}/{}", c.name),
                ..c
            })
            .collect(),
    }
}

fn missing(section: &str, suite: &str) -> CliError {
    CliError::Config(format!("suite {suite} needs a `{section}` section"))
}

/// Whether `cfg` has the sections `suite` reads.
pub fn applicable(cfg: &Config, suite: &str) -> bool {
    match suite {
        "appendixA" => cfg.affine.is_some(),
        "appendixB" => cfg.algebra.is_given() || cfg.affine.is_some(),
        "appendixC" => cfg.algebra.is_given(),
        "appendixD" => cfg.hom.is_some(),
        "quotient" => cfg.affine.is_some() && cfg.quotient.is_some(),
        "comparison" => cfg.comparison.is_some(),
        _ => false,
    }
}

pub fn run(cfg: &Config, suite: &str, k: &Knobs) -> Result<SuiteOutput, CliError> {
    match suite {
        "appendixA" => appendix_a(cfg, k),
        "appendixB" => appendix_b(cfg, k),
        "appendixC" => appendix_c(cfg, k),
        "appendixD" => appendix_d(cfg, k),
        "quotient" => quotient(cfg, k),
        "comparison" => comparison(cfg, k),
        other => Err(CliError::Config(format!("unknown suite {other}"))),
    }
}

fn affine_setup(spec: &AffineSpec) -> Result<(AffineRootSystem, AffineBasis), CliError> {
    let sys = spec.system()?;
    let b = spec.basis(&sys)?;
    Ok((sys, b))
}

/// Axioms of the affine root system and the basis algorithms around every
/// chamber in the window.
fn appendix_a(cfg: &Config, k: &Knobs) -> Result<SuiteOutput, CliError> {
    let spec = cfg
        .affine
        .as_ref()
        .ok_or_else(|| missing("affine", "appendixA"))?;
    let (sys, b) = affine_setup(spec)?;
    let w = k.window();
    let mut rep = prefixed(
        sys.verify(w, k.exec).map_err(|e| algebra_err("AffineError", e))?,
        "axioms",
    );
    rep.extend(checks::basis_sweep(&sys, &b, w, k.exec).map_err(|e| algebra_err("AffineError", e))?);
    let details = json!({ "basis": b, "window": w });
    Ok(SuiteOutput { report: rep, details })
}

/// Associativity of the Bernstein presentation, refinement where some
/// `lambda*` vanishes, and the standard-to-Bernstein isomorphism.
fn appendix_b(cfg: &Config, k: &Knobs) -> Result<SuiteOutput, CliError> {
    if !applicable(cfg, "appendixB") {
        return Err(missing("datum", "appendixB"));
    }
    let mut rep = ValidationReport::default();
    let mut details = serde_json::Map::new();
    if cfg.algebra.is_given() {
        let alg = cfg.algebra.build()?;
        rep.extend(
            checks::associativity(&alg, k.sweep(), k.exec).map_err(|e| algebra_err("BernsteinError", e))?,
        );
        let labels = alg.labels();
        if labels.lambda_star.contains(&0) {
            let r = refinement_report(alg.datum(), labels, DEFAULT_BOX, k.exec)
                .map_err(|e| algebra_err("RefineError", e))?;
            rep.extend(prefixed(r, "refinement"));
        }
    }
    if let Some(spec) = &cfg.affine {
        let (sys, b) = affine_setup(spec)?;
        let e = spec.special_point()?;
        let spd = sys
            .special_point_data(&b, &e)
            .map_err(|e| algebra_err("AffineError", e))?;
        let q = ParameterFunction::from_exponents(
            &spec.parameters.clone().unwrap_or_else(|| vec![1; b.roots.len()]),
        );
        let iso = StandardBernstein::new(spd, q).map_err(|e| algebra_err("IsoError", e))?;
        let max_len = spec.max_length.unwrap_or(6);
        rep.extend(
            checks::iso_multiplicative(&iso, 3, k.sweep(), k.exec).map_err(|e| algebra_err("IsoError", e))?,
        );
        rep.extend(checks::iso_round_trip(&iso, max_len, k.exec).map_err(|e| algebra_err("IsoError", e))?);
        details.insert("labels".into(), json!(iso.bernstein.labels()));
        details.insert("datum".into(), json!(iso.bernstein.datum()));
    }
    Ok(SuiteOutput {
        report: rep,
        details: Value::Object(details),
    })
}

/// The involution, as random-sample checks and as a self-map whose images
/// satisfy every defining relation.
fn appendix_c(cfg: &Config, k: &Knobs) -> Result<SuiteOutput, CliError> {
    if !cfg.algebra.is_given() {
        return Err(missing("datum", "appendixC"));
    }
    let alg = cfg.algebra.build()?;
    let mut rep =
        checks::involution(&alg, k.sweep(), k.exec).map_err(|e| algebra_err("BernsteinError", e))?;
    let id = HomSpec::identity(&alg);
    let iota = |x: &BernsteinElt| alg.iota(x).map_err(|e| algebra_err("BernsteinError", e));
    let spec = HomSpec {
        t_images: id.t_images.iter().map(iota).collect::<Result<_, _>>()?,
        theta_images: id.theta_images.iter().map(iota).collect::<Result<_, _>>()?,
        ..id
    };
    rep.extend(prefixed(verify_hom(&spec, DEFAULT_BOX, k.exec), "iota-relations"));
    Ok(SuiteOutput {
        report: rep,
        details: json!({ "labels": alg.labels() }),
    })
}

fn hom_spec<'a>(h: &HomConfig, src: &'a AffineHecke, tgt: &'a AffineHecke) -> Result<HomSpec<'a>, CliError> {
    let image = |key: String| -> Result<BernsteinElt, CliError> {
        let text = h
            .images
            .get(&key)
            .ok_or_else(|| CliError::Config(format!("hom.images has no entry for {key}")))?;
        tgt.parse(text)
            .map_err(|e| CliError::Config(format!("image of {key}: {e}")))
    };
    let t_images = (1..=src.simple_count())
        .map(|i| image(format!("T[s{i}]")))
        .collect::<Result<_, _>>()?;
    let theta_images = (1..=src.rank_y())
        .map(|i| image(format!("th[e{i}]")))
        .collect::<Result<_, _>>()?;
    let expected = src.simple_count() + src.rank_y();
    if h.images.len() != expected {
        return Err(CliError::Config(format!(
            "hom.images should have {expected} entries, found {}",
            h.images.len()
        )));
    }
    Ok(HomSpec {
        source: src,
        target: tgt,
        t_images,
        theta_images,
        meta: h.meta.as_ref().map(|m| m.meta()).transpose()?,
    })
}

fn verdict_name(v: &A1Verdict) -> &'static str {
    match v {
        A1Verdict::ValidEven { .. } => "valid_even",
        A1Verdict::ValidOdd { .. } => "valid_odd",
        A1Verdict::Invalid { .. } => "invalid",
    }
}

/// Rank-one classification against the expected verdict, or a relation
/// check for plain image data, plus the parameter dictionary.
fn appendix_d(cfg: &Config, k: &Knobs) -> Result<SuiteOutput, CliError> {
    let h = cfg.hom.as_ref().ok_or_else(|| missing("hom", "appendixD"))?;
    let src = h.source.build()?;
    let tgt = h.target.build()?;
    let spec = hom_spec(h, &src, &tgt)?;
    let mut rep = ValidationReport::default();
    let mut details = serde_json::Map::new();
    if spec.meta.is_some() {
        let c = a1_classify(&spec, k.exec).map_err(|e| algebra_err("ClassifyError", e))?;
        let got = verdict_name(&c.verdict);
        let want = h.expect.as_deref().unwrap_or(got);
        if !["valid_even", "valid_odd", "invalid"].contains(&want) {
            return Err(CliError::Config(format!("unknown expected verdict {want:?}")));
        }
        let mismatch = (got != want).then(|| format!("expected {want}, classified as {got}"));
        rep.push(Check::from_witness("verdict", mismatch));
        match &c.verdict {
            A1Verdict::Invalid { constraint, relation } => {
                let named = constraint.is_some() || relation.is_some();
                rep.push(Check::from_witness(
                    "invalid-names-a-violation",
                    (!named).then(|| "no violated constraint or relation reported".to_string()),
                ));
            }
            _ => rep.extend(prefixed(c.normal_form.clone(), "normal-form")),
        }
        details.insert("classification".into(), json!(c));
    } else {
        let r = verify_hom(&spec, DEFAULT_BOX, k.exec);
        match h.expect.as_deref() {
            None | Some("homomorphism") => rep.extend(prefixed(r, "relations")),
            Some("invalid") => {
                let first = r.failures().next().map(|c| c.name.clone());
                rep.push(Check::from_witness(
                    "relations-fail-as-expected",
                    first.is_none().then(|| "every relation holds".to_string()),
                ));
                details.insert("violated".into(), json!(first));
            }
            Some(other) => {
                return Err(CliError::Config(format!(
                    "unknown expectation {other:?} without meta"
                )))
            }
        }
    }
    if let Some(d) = &h.dictionary {
        let (p, pp) = d.values()?;
        let dict = params_from_p(&p, &pp).map_err(|e| algebra_err("ClassifyError", e))?;
        if let Some(want) = d.expected()? {
            let got = match &dict {
                ParamDictionary::Unique {
                    q_alpha,
                    q_alpha_star,
                    ..
                } => vec![(q_alpha.clone(), q_alpha_star.clone())],
                ParamDictionary::Ambiguous { candidates, .. } => candidates.clone(),
            };
            rep.push(Check::from_witness(
                "dictionary",
                (got != want).then(|| format!("got {}", json!(dict))),
            ));
        }
        details.insert("dictionary".into(), json!(dict));
    }
    Ok(SuiteOutput {
        report: rep,
        details: Value::Object(details),
    })
}

/// The quotient system with its checks and, when they pass, the datum and
/// labels at `e`.
pub fn quotient_dump(cfg: &Config, k: &Knobs) -> Result<SuiteOutput, CliError> {
    let spec = cfg.affine.as_ref().ok_or_else(|| missing("affine", "quotient"))?;
    let qspec = cfg
        .quotient
        .as_ref()
        .ok_or_else(|| missing("quotient", "quotient"))?;
    let (sys, b) = affine_setup(spec)?;
    let (j, gamma) = (qspec.j()?, qspec.gamma()?);
    let e = qspec.e(sys.dim)?;
    let mut rep = ValidationReport::default();
    let built = MarkedRoots::new(&sys, &b, j, gamma)
        .and_then(|m| build_quotient(&sys, &b, &m, k.window(), k.exec).map(|q| (m, q)));
    let (marked, (qs, checks)) = match built {
        Ok(x) => x,
        Err(err) => {
            rep.push(Check::fail(
                "construction",
                format!("{}: {err}", error_name(&err)),
            ));
            return Ok(SuiteOutput {
                report: rep,
                details: json!({ "error": err.to_string() }),
            });
        }
    };
    rep.push(Check::pass("construction"));
    rep.extend(checks);
    let mut details = serde_json::Map::new();
    details.insert("quotient".into(), system_json(&qs));
    if rep.all_passed() {
        match morris_datum(&qs, &marked, &e) {
            Ok(md) => {
                rep.extend(prefixed(md.datum().check(), "datum"));
                let built = AffineHecke::new(md.datum(), md.labels.clone());
                rep.push(Check::from_witness("labels", built.err().map(|e| e.to_string())));
                details.insert(
                    "datum".into(),
                    json!({ "root_datum": md.datum(), "labels": md.labels, "simples": md.simples }),
                );
            }
            Err(err) => rep.push(Check::fail("datum", format!("{}: {err}", error_name(&err)))),
        }
    }
    Ok(SuiteOutput {
        report: rep,
        details: Value::Object(details),
    })
}

fn quotient(cfg: &Config, k: &Knobs) -> Result<SuiteOutput, CliError> {
    quotient_dump(cfg, k)
}

fn system_json(qs: &QuotientSystem) -> Value {
    let strs = |v: &[heckelab::Rational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>();
    json!({
        "dim": qs.dim(),
        "gamma_prime": qs.system,
        "basis": qs.basis,
        "J": qs.j,
        "origin": strs(&qs.origin),
        "frame": qs.frame.iter().map(|v| strs(v)).collect::<Vec<_>>(),
        "kernel": qs.kernel.iter().map(|v| strs(v)).collect::<Vec<_>>(),
    })
}

fn error_name(e: &QuotientError) -> &'static str {
    match e {
        QuotientError::InfiniteParabolic(_) => "InfiniteParabolic",
        QuotientError::NotInBasis(_) => "NotInBasis",
        QuotientError::NotExtendable(_) => "NotExtendable",
        QuotientError::BadParameter(_) => "BadParameter",
        QuotientError::BadFamily(_) => "BadFamily",
        QuotientError::NotInduced => "NotInduced",
        QuotientError::NotTranslation => "NotTranslation",
        QuotientError::NotInLattice => "NotInLattice",
        QuotientError::NoLift(_) => "NoLift",
        QuotientError::PStarMismatch { .. } => "PStarMismatch",
        QuotientError::EmptyFace => "EmptyFace",
        QuotientError::Affine(_) => "AffineError",
        QuotientError::Bernstein(_) => "BernsteinError",
    }
}

/// Label equations, then the relation checks; with failed equations the
/// relations are still evaluated so the report shows what breaks.
fn comparison(cfg: &Config, k: &Knobs) -> Result<SuiteOutput, CliError> {
    let spec = cfg
        .comparison
        .as_ref()
        .ok_or_else(|| missing("comparison", "comparison"))?;
    let c = spec.config()?;
    let mut rep = ValidationReport::default();
    let cmp = match Comparison::new(&c) {
        Ok(cmp) => {
            rep.push(Check::pass("preconditions"));
            cmp
        }
        Err(ComparisonError::PreconditionFailed(m)) => {
            rep.push(Check::fail("preconditions", m));
            Comparison::new_unchecked(&c).map_err(|e| algebra_err("ComparisonError", e))?
        }
        Err(e) => return Err(algebra_err("ComparisonError", e)),
    };
    rep.extend(
        cmp.report(DEFAULT_BOX, k.exec)
            .map_err(|e| algebra_err("ComparisonError", e))?,
    );
    Ok(SuiteOutput {
        report: rep,
        details: json!({ "source_labels": cmp.source.labels(), "target_labels": cmp.target.labels() }),
    })
}
