//! Rank-one classification of homomorphisms `I: H -> H'` of the shape
//! `I(T_s) = c' theta_{k a'^v} T_{s'} + b'`, `I(theta_{a^v}) = c theta_{n a'^v}`,
//! and the dictionary from the parameters `p_a`, `p'_a` to `q_alpha`,
//! `q_{alpha*}`.
//!
//! Necessary conditions come from comparing both sides of the image of the
//! cross relation as Laurent polynomials in `theta_{a'^v}` (or in
//! `theta_{a'^v/2}` for half-integral exponents). Where a proof would
//! specialize the variable at a root of unity, the corresponding identity
//! in the parameters is checked exactly in the coefficient ring.

use serde::Serialize;
use thiserror::Error;

use crate::bernstein::{AffineHecke, BernsteinElt};
use crate::maps::hom::{verify_hom, HomSpec, RankOneMeta, DEFAULT_BOX};
use crate::par::Exec;
use crate::report::{Check, ValidationReport};
use crate::scalar::Scalar;
use crate::theta;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("not a rank-one configuration: {0}")]
    NotRankOne(String),
    #[error("rank-one metadata (k, n, c, c') is missing")]
    MissingMeta,
    #[error("images do not have the declared shape: {0}")]
    MetaMismatch(String),
    #[error("bad parameter input: {0}")]
    BadInput(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum A1Verdict {
    /// `I(T_s) = theta_{k a'^v/2} T_{s'} theta_{-k a'^v/2}`, `q_1 = q'_1`, `q_0 = q'_0`.
    ValidEven { k: i64 },
    /// `I(T_s) = theta_{(k-1) a'^v/2} T_{s',0} theta_{-(k-1) a'^v/2}`, `q_1 = q'_0`, `q_0 = q'_1`.
    ValidOdd { k: i64 },
    Invalid {
        #[serde(skip_serializing_if = "Option::is_none")]
        constraint: Option<Check>,
        #[serde(skip_serializing_if = "Option::is_none")]
        relation: Option<Check>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: A1Verdict,
    /// Each displayed parameter identity, evaluated exactly.
    pub constraints: ValidationReport,
    /// Relation checks in the target, when the images are representable.
    pub relations: ValidationReport,
    /// Checks of the normalized form claimed by a valid verdict.
    pub normal_form: ValidationReport,
}

/// Parameters `q_1, q_0, q'_1, q'_0` and square roots.
struct Params {
    q1: Scalar,
    q0: Scalar,
    q1p: Scalar,
    q0p: Scalar,
}

impl Params {
    fn new(src: &AffineHecke, tgt: &AffineHecke) -> Self {
        Params {
            q1: src.q1(0),
            q0: src.q0(0),
            q1p: tgt.q1(0),
            q0p: tgt.q0(0),
        }
    }
}

fn half(l: i32) -> Scalar {
    Scalar::t_pow(l)
}

/// `q^{l/2}(q^{l*/2} - q^{-l*/2})`, the constant term of the source cross
/// relation at `y = a^v`.
fn sigma(l: i32, ls: i32) -> Scalar {
    half(l) * (half(ls) - half(-ls))
}

fn zero_check(name: &str, value: Scalar) -> Check {
    if value.is_zero() {
        Check::pass(name)
    } else {
        Check::fail(name, format!("left side minus right side = {value}"))
    }
}

/// The displayed parameter identities for the given `k`, `n` (doubled) and `c`, `c'`.
fn constraint_report(src: &AffineHecke, tgt: &AffineHecke, m: &RankOneMeta) -> ValidationReport {
    let p = Params::new(src, tgt);
    let (l, ls) = (src.labels().lambda[0], src.labels().lambda_star[0]);
    let (lp, lsp) = (tgt.labels().lambda[0], tgt.labels().lambda_star[0]);
    let one = Scalar::one();
    let c = &m.c;
    let cc = c * &m.c_prime;
    let q1m = &p.q1 - &one;
    let q1pm = &p.q1p - &one;
    let sig = sigma(l, ls);
    let sigp = sigma(lp, lsp);
    let positive = &q1m + &sig;
    let mut rep = ValidationReport::default();
    rep.push(zero_check("c^2 = 1", c * c - one.clone()));
    let (k2, n2) = (m.k2, m.n2);
    if n2 % 2 != 0 {
        if n2 > 1 {
            rep.push(zero_check(
                "half n > 1/2: (q1 - 1) + q1^(1/2)(q0^(1/2) - q0^(-1/2)) = 0",
                positive,
            ));
        } else if k2 % 2 == 0 {
            rep.push(zero_check(
                "n = 1/2, k integral: cc'(q1' - 1) = c(q1 - 1)",
                &cc * &q1pm - c * &q1m,
            ));
            rep.push(zero_check(
                "n = 1/2, k integral: q0^(1/2) - q0^(-1/2) = 0",
                half(ls) - half(-ls),
            ));
        } else {
            rep.push(zero_check(
                "n = 1/2, k half: cc'(q1' - 1) = q1^(1/2)(q0^(1/2) - q0^(-1/2))",
                &cc * &q1pm - sig,
            ));
            rep.push(zero_check("n = 1/2, k half: q1 - 1 = 0", q1m));
        }
    } else if k2 % 2 != 0 {
        rep.push(zero_check("k half, n integral: q1' - 1 = 0", q1pm));
    } else {
        let n = n2 / 2;
        let k = k2 / 2;
        if n >= 3 {
            rep.push(zero_check(
                "n >= 3: (q1 - 1) + q1^(1/2)(q0^(1/2) - q0^(-1/2)) = 0",
                positive,
            ));
        } else if n == 2 {
            rep.push(zero_check(
                "n = 2: -c(q1 - 1) + q1^(1/2)(q0^(1/2) - q0^(-1/2)) = 0",
                sig - c * &q1m,
            ));
            if k % 2 == 0 {
                rep.push(zero_check(
                    "n = 2, k even: q0'^(1/2) - q0'^(-1/2) = 0",
                    half(lsp) - half(-lsp),
                ));
            } else {
                rep.push(zero_check("n = 2, k odd: q1' - 1 = 0", q1pm));
            }
        } else if n == 1 {
            if k % 2 == 0 {
                rep.push(zero_check(
                    "n = 1, k even: cc'(q1' - 1) = c(q1 - 1)",
                    &cc * &q1pm - c * &q1m,
                ));
                rep.push(zero_check(
                    "n = 1, k even: cc' q1'^(1/2)(q0'^(1/2) - q0'^(-1/2)) = q1^(1/2)(q0^(1/2) - q0^(-1/2))",
                    &cc * &sigp - sig,
                ));
            } else {
                rep.push(zero_check(
                    "n = 1, k odd: cc'(q1' - 1) = q1^(1/2)(q0^(1/2) - q0^(-1/2))",
                    &cc * &q1pm - sig,
                ));
                rep.push(zero_check(
                    "n = 1, k odd: cc' q1'^(1/2)(q0'^(1/2) - q0'^(-1/2)) = c(q1 - 1)",
                    &cc * &sigp - c * &q1m,
                ));
            }
        } else {
            rep.push(Check::fail("n > 0", format!("n = {}", n2 as f64 / 2.0)));
        }
    }
    rep
}

/// `v / 2` when every entry is even.
fn halve(v: &[i64]) -> Option<Vec<i64>> {
    v.iter()
        .all(|x| x % 2 == 0)
        .then(|| v.iter().map(|x| x / 2).collect())
}

/// Classifies a rank-one homomorphism candidate.
pub fn a1_classify(spec: &HomSpec<'_>, exec: Exec) -> Result<Classification, ClassifyError> {
    let (src, tgt) = (spec.source, spec.target);
    let meta = spec.meta.as_ref().ok_or(ClassifyError::MissingMeta)?;
    if src.simple_count() != 1 || tgt.simple_count() != 1 {
        return Err(ClassifyError::NotRankOne(
            "both algebras need exactly one simple root".into(),
        ));
    }
    let av = src.datum().simple_coroot(0).to_vec();
    if src.rank_y() != 1 || av[0].abs() != 1 {
        return Err(ClassifyError::NotRankOne(
            "the source coroot must generate Y".into(),
        ));
    }
    let constraints = constraint_report(src, tgt, meta);
    let apv = tgt.datum().simple_coroot(0).to_vec();
    let half_apv = halve(&apv);
    let representable = (meta.k2 % 2 == 0 && meta.n2 % 2 == 0) || half_apv.is_some();
    let mut relations = ValidationReport::default();
    if !representable {
        relations.push(Check::fail(
            "half-integral exponent",
            format!("{} is not divisible by 2 in Y'", theta::render_y(&apv)),
        ));
    } else {
        let unit = half_apv.clone().unwrap_or_else(|| apv.clone());
        let mult = |twice: i64| {
            if half_apv.is_some() {
                theta::scale_vec(&unit, twice)
            } else {
                theta::scale_vec(&unit, twice / 2)
            }
        };
        // declared shape must match the images
        let theta_av = spec
            .image_theta(&av)
            .ok_or_else(|| ClassifyError::MetaMismatch("theta image not invertible".into()))?;
        let expect_theta = tgt.theta(mult(meta.n2)).scale(&meta.c);
        if theta_av != expect_theta {
            return Err(ClassifyError::MetaMismatch(format!(
                "I(th[a^v]) = {}, declared {}",
                tgt.render(&theta_av),
                tgt.render(&expect_theta)
            )));
        }
        let head = BernsteinElt::term((tgt.weyl().simple(0), mult(meta.k2)), meta.c_prime.clone());
        let b = &spec.t_images[0] - &head;
        if tgt.theta_part(&b).is_none() {
            return Err(ClassifyError::MetaMismatch(format!(
                "I(T[s1]) - c' th[k a'^v] T[s1] = {} is not in C[Y']",
                tgt.render(&b)
            )));
        }
        relations = verify_hom(spec, DEFAULT_BOX, exec);
    }
    let first_fail = |r: &ValidationReport| r.failures().next().cloned();
    let mut normal_form = ValidationReport::default();
    let verdict = if !constraints.all_passed() || !relations.all_passed() {
        A1Verdict::Invalid {
            constraint: first_fail(&constraints),
            relation: first_fail(&relations),
        }
    } else {
        let k2 = meta.k2;
        let k = k2 / 2;
        let conj = |shift2: i64, core: &BernsteinElt| -> Option<BernsteinElt> {
            let v = theta::scale_vec(&apv, shift2 / 2);
            let l = tgt.mul(&tgt.theta(v.clone()), core).ok()?;
            tgt.mul(&l, &tgt.theta(theta::neg_vec(&v))).ok()
        };
        let even = k % 2 == 0;
        let expect_t = if even {
            conj(k, &tgt.t_s(0))
        } else {
            conj(k - 1, &tgt.t_s0(0))
        };
        let t_ok = expect_t.as_ref() == Some(&spec.t_images[0]);
        normal_form.push(Check::from_witness(
            "I(T[s1]) normal form",
            (!t_ok).then(|| {
                format!(
                    "I(T[s1]) = {}, expected {}",
                    tgt.render(&spec.t_images[0]),
                    expect_t.map_or_else(|| "?".into(), |e| tgt.render(&e))
                )
            }),
        ));
        let th_ok = spec.image_theta(&av) == Some(tgt.theta(apv.clone()));
        normal_form.push(Check::from_witness(
            "I(th[a^v]) = th[a'^v]",
            (!th_ok).then(|| "c != 1 or n != 1".to_string()),
        ));
        let p = Params::new(src, tgt);
        let (a, b) = if even { (&p.q1p, &p.q0p) } else { (&p.q0p, &p.q1p) };
        normal_form.push(zero_check("q1 matches", &p.q1 - a));
        normal_form.push(zero_check("q0 matches", &p.q0 - b));
        if normal_form.all_passed() {
            if even {
                A1Verdict::ValidEven { k }
            } else {
                A1Verdict::ValidOdd { k }
            }
        } else {
            A1Verdict::Invalid {
                constraint: first_fail(&normal_form),
                relation: None,
            }
        }
    };
    Ok(Classification {
        verdict,
        constraints,
        relations,
        normal_form,
    })
}

/// Result of the parameter dictionary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ParamDictionary {
    Unique {
        eps: u8,
        q_alpha: Scalar,
        q_alpha_star: Scalar,
    },
    /// `p_a = p'_a`: `(p, 1)` or `(p^{1/2}, p^{1/2})`, with `eps = 0`.
    Ambiguous {
        eps: u8,
        candidates: Vec<(Scalar, Scalar)>,
    },
}

fn p_exponent(p: &Scalar) -> Result<i32, ClassifyError> {
    match p.as_monomial() {
        Some((c, k)) if *c == crate::scalar::rat(1) && k % 2 == 0 && k >= 2 => Ok(k / 2),
        _ => Err(ClassifyError::BadInput(format!("{p} is not q^m with m >= 1"))),
    }
}

/// `q_alpha = (p p')^{1/2}` and `q_{alpha*} = (p/p')^{1/2}` or its inverse.
pub fn params_from_p(p: &Scalar, p_prime: &Scalar) -> Result<ParamDictionary, ClassifyError> {
    let (m, mp) = (p_exponent(p)?, p_exponent(p_prime)?);
    Ok(match m.cmp(&mp) {
        std::cmp::Ordering::Greater => ParamDictionary::Unique {
            eps: 0,
            q_alpha: Scalar::t_pow(m + mp),
            q_alpha_star: Scalar::t_pow(m - mp),
        },
        std::cmp::Ordering::Less => ParamDictionary::Unique {
            eps: 1,
            q_alpha: Scalar::t_pow(m + mp),
            q_alpha_star: Scalar::t_pow(mp - m),
        },
        std::cmp::Ordering::Equal => ParamDictionary::Ambiguous {
            eps: 0,
            candidates: vec![
                (Scalar::t_pow(2 * m), Scalar::one()),
                (Scalar::t_pow(m), Scalar::t_pow(m)),
            ],
        },
    })
}

/// Ready-made rank-one configurations.
pub mod fixtures {
    use super::*;
    use crate::bernstein::examples::{a1_even, a1_odd};
    use crate::bernstein::LabelFunctions;

    pub fn algebra(lambda: i32, lambda_star: i32) -> AffineHecke {
        AffineHecke::new(
            &a1_even(),
            LabelFunctions {
                lambda: vec![lambda],
                lambda_star: vec![lambda_star],
            },
        )
        .expect("valid labels")
    }

    /// Target with `a'^v / 2` in `Y'`.
    pub fn algebra_halvable(lambda: i32) -> AffineHecke {
        AffineHecke::new(&a1_odd(), LabelFunctions::equal(vec![lambda])).expect("valid labels")
    }

    /// `I(T_s) = c' theta_{k a'^v} T_{s'} + b'`, `I(theta_{a^v}) = c theta_{n a'^v}`.
    pub fn spec<'a>(
        src: &'a AffineHecke,
        tgt: &'a AffineHecke,
        meta: RankOneMeta,
        b: BernsteinElt,
    ) -> HomSpec<'a> {
        let apv = tgt.datum().simple_coroot(0).to_vec();
        let scaled = |twice: i64| -> Vec<i64> {
            if twice % 2 == 0 {
                theta::scale_vec(&apv, twice / 2)
            } else {
                apv.iter().map(|x| x / 2 * twice).collect()
            }
        };
        let t = BernsteinElt::term((tgt.weyl().simple(0), scaled(meta.k2)), meta.c_prime.clone()) + b;
        let th = tgt.theta(scaled(meta.n2)).scale(&meta.c);
        HomSpec {
            source: src,
            target: tgt,
            t_images: vec![t],
            theta_images: vec![th],
            meta: Some(meta),
        }
    }

    pub fn meta(k2: i64, n2: i64) -> RankOneMeta {
        RankOneMeta {
            k2,
            n2,
            c: Scalar::one(),
            c_prime: Scalar::one(),
        }
    }

    /// The `k = 1` shape: `T_{s',0}` with swapped parameters.
    pub fn odd_spec<'a>(src: &'a AffineHecke, tgt: &'a AffineHecke) -> HomSpec<'a> {
        let (l, ls) = (tgt.labels().lambda[0], tgt.labels().lambda_star[0]);
        let cp = Scalar::t_pow(ls - l);
        let apv = tgt.datum().simple_coroot(0).to_vec();
        let b = tgt.theta(apv).scale(&(-(&cp * &(tgt.q1(0) - Scalar::one()))));
        let m = RankOneMeta {
            k2: 2,
            n2: 2,
            c: Scalar::one(),
            c_prime: cp,
        };
        spec(src, tgt, m, b)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn classify(spec: &HomSpec<'_>) -> Classification {
        a1_classify(spec, Exec::Sequential).unwrap()
    }

    #[test]
    fn k_zero_matched_is_even() {
        let h = algebra(2, 1);
        let c = classify(&spec(&h, &h, meta(0, 2), BernsteinElt::zero()));
        assert_eq!(c.verdict, A1Verdict::ValidEven { k: 0 });
        assert!(c.relations.all_passed());
    }

    #[test]
    fn k_two_conjugated_is_even() {
        let h = algebra(2, 1);
        // theta_{a} T theta_{-a} = theta_{2a} T_s + b'
        let conj = h
            .mul(&h.mul(&h.theta(vec![1]), &h.t_s(0)).unwrap(), &h.theta(vec![-1]))
            .unwrap();
        let b = &conj - &BernsteinElt::basis((h.weyl().simple(0), vec![2]));
        let c = classify(&spec(&h, &h, meta(4, 2), b));
        assert_eq!(c.verdict, A1Verdict::ValidEven { k: 2 });
    }

    #[test]
    fn k_one_swapped_is_odd() {
        let src = algebra(1, 2);
        let tgt = algebra(2, 1);
        let c = classify(&odd_spec(&src, &tgt));
        assert_eq!(c.verdict, A1Verdict::ValidOdd { k: 1 }, "{c:?}");
    }

    #[test]
    fn invalid_cases_name_a_constraint() {
        let h = algebra(1, 1);
        for m in [meta(0, 4), meta(0, 6)] {
            let c = classify(&spec(&h, &h, m, BernsteinElt::zero()));
            match c.verdict {
                A1Verdict::Invalid {
                    constraint: Some(k),
                    relation: Some(_),
                } => {
                    assert!(
                        k.name.starts_with("n = 2") || k.name.starts_with("n >= 3"),
                        "{}",
                        k.name
                    )
                }
                v => panic!("{v:?}"),
            }
        }
        let t = algebra_halvable(1);
        for m in [meta(1, 2), meta(0, 1), meta(0, 3), meta(1, 1)] {
            let c = classify(&spec(&h, &t, m, BernsteinElt::zero()));
            assert!(
                matches!(
                    c.verdict,
                    A1Verdict::Invalid {
                        constraint: Some(_),
                        ..
                    }
                ),
                "{c:?}"
            );
        }
    }

    #[test]
    fn dictionary_cases() {
        let q = Scalar::q_pow;
        assert_eq!(
            params_from_p(&q(2), &q(1)).unwrap(),
            ParamDictionary::Unique {
                eps: 0,
                q_alpha: Scalar::t_pow(3),
                q_alpha_star: Scalar::t_pow(1)
            }
        );
        assert_eq!(
            params_from_p(&q(1), &q(2)).unwrap(),
            ParamDictionary::Unique {
                eps: 1,
                q_alpha: Scalar::t_pow(3),
                q_alpha_star: Scalar::t_pow(1)
            }
        );
        assert_eq!(
            params_from_p(&q(1), &q(1)).unwrap(),
            ParamDictionary::Ambiguous {
                eps: 0,
                candidates: vec![(q(1), Scalar::one()), (Scalar::t_pow(1), Scalar::t_pow(1))]
            }
        );
        assert!(params_from_p(&Scalar::t_pow(1), &q(1)).is_err());
        assert!(params_from_p(&Scalar::one(), &q(1)).is_err());
    }
}
