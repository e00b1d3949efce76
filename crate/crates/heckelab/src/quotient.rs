//! Quotients of an affine root system by a face: longest elements of finite
//! parabolics, the elements `v[a, J]`, marked root sets with parameters,
//! the quotient system on `A^J / V^{J,Gamma}` and its finite root datum.
//!
//! Marked roots are given as arithmetic families so the set is infinite but
//! finitely described. Everything that is a claim about the set is checked
//! over a window of constant terms and reported, never assumed.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::affine::{
    AffineBasis, AffineError, AffineFn, AffineMap, AffineRootSystem, RootFamily, SpecialPointData,
};
use crate::bernstein::{BernsteinError, LabelFunctions};
use crate::linalg::{self, Matrix, Vector};
use crate::lp;
use crate::par::Exec;
use crate::report::{Check, ValidationReport};
use crate::rootdatum::BasedRootDatum;
use crate::scalar::{rat, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("parabolic subgroup generated by {0} is infinite")]
    InfiniteParabolic(String),
    #[error("{0} is not in the basis")]
    NotInBasis(String),
    #[error("no basis contains J together with {0}")]
    NotExtendable(String),
    #[error("marked parameter {0} is not q^m with m >= 1")]
    BadParameter(String),
    #[error("bad marked family: {0}")]
    BadFamily(String),
    #[error("transformation does not preserve the face and its quotient")]
    NotInduced,
    #[error("transformation is not a translation of the quotient")]
    NotTranslation,
    #[error("translation is not in the coroot lattice of the quotient datum")]
    NotInLattice,
    #[error("no positive marked root lies over {0}")]
    NoLift(String),
    #[error("supplied p* = {given} for {root} but the partner root carries {derived}")]
    PStarMismatch {
        root: String,
        given: String,
        derived: String,
    },
    #[error("face of the chamber cut out by J is empty")]
    EmptyFace,
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
}

/// `m` with `p = q^m`, `m >= 1`.
pub fn q_exponent(p: &Scalar) -> Result<i32, QuotientError> {
    p.t_exponent()
        .filter(|k| *k >= 2 && k % 2 == 0)
        .filter(|_| p.as_monomial().is_some_and(|(c, _)| *c == rat(1)))
        .map(|k| k / 2)
        .ok_or_else(|| QuotientError::BadParameter(p.to_string()))
}

/// One family `gradient . x + offset + period * Z` of marked roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedFamily {
    pub family: RootFamily,
    pub p: Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_star: Option<Scalar>,
}

/// `J` together with the marked set `Gamma` and its parameters.
#[derive(Debug, Clone)]
pub struct MarkedRoots {
    pub j: Vec<AffineFn>,
    pub gamma: Vec<MarkedFamily>,
}

impl MarkedRoots {
    /// Checks that `J` lies in `b`, that every family consists of roots
    /// independent of `DJ`, and that parameters are powers `q^m`, `m >= 1`.
    pub fn new(
        sys: &AffineRootSystem,
        b: &AffineBasis,
        j: Vec<AffineFn>,
        gamma: Vec<MarkedFamily>,
    ) -> Result<Self, QuotientError> {
        if let Some(bad) = j.iter().find(|a| b.position(a).is_none()) {
            return Err(QuotientError::NotInBasis(bad.to_string()));
        }
        let dj: Vec<Vector> = j.iter().map(|a| a.grad.clone()).collect();
        for m in &gamma {
            let f = &m.family;
            let Some(host) = sys.family_of(&f.root(0)) else {
                return Err(QuotientError::BadFamily(format!("{} is not a root", f.root(0))));
            };
            let ratio = &f.period / &sys.families[host].period;
            if !ratio.is_integer() {
                return Err(QuotientError::BadFamily(format!(
                    "period {} is not a multiple of the root period {}",
                    f.period, sys.families[host].period
                )));
            }
            let mut rows = dj.clone();
            rows.push(f.gradient.clone());
            if !linalg::independent(&rows) {
                return Err(QuotientError::BadFamily(format!(
                    "gradient of {} lies in the span of DJ",
                    f.root(0)
                )));
            }
            q_exponent(&m.p)?;
            if let Some(ps) = &m.p_star {
                q_exponent(ps)?;
            }
        }
        Ok(MarkedRoots { j, gamma })
    }

    /// Index of the marked family containing `a`.
    pub fn family_of(&self, a: &AffineFn) -> Option<usize> {
        self.gamma.iter().position(|m| m.family.contains(a))
    }

    pub fn p(&self, a: &AffineFn) -> Option<&Scalar> {
        self.family_of(a).map(|i| &self.gamma[i].p)
    }

    /// Marked roots with constant term in `[-window, window]`, tagged by family.
    pub fn roots_in_window(&self, window: i64) -> Vec<(AffineFn, usize)> {
        let w = rat(window);
        let mut out = Vec::new();
        for (i, m) in self.gamma.iter().enumerate() {
            let f = &m.family;
            let lo = ((-&w - &f.offset) / &f.period).ceil().to_integer();
            let hi = ((&w - &f.offset) / &f.period).floor().to_integer();
            let (Ok(lo), Ok(hi)) = (i64::try_from(lo), i64::try_from(hi)) else {
                continue;
            };
            out.extend((lo..=hi).map(|k| (f.root(k), i)));
        }
        out
    }
}

fn fmt_set(k: &[AffineFn]) -> String {
    let parts: Vec<String> = k.iter().map(|a| format!("[{a}]")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// The longest element `w_0(K)` of the parabolic subgroup generated by the
/// reflections in `K`, characterized by `w_0(K) K = -K`.
pub fn longest_in_parabolic(
    sys: &AffineRootSystem,
    b: &AffineBasis,
    k: &[AffineFn],
) -> Result<AffineMap, QuotientError> {
    if let Some(bad) = k.iter().find(|a| b.position(a).is_none()) {
        return Err(QuotientError::NotInBasis(bad.to_string()));
    }
    let grads: Vec<Vector> = k.iter().map(|a| a.grad.clone()).collect();
    if !grads.is_empty() && !linalg::independent(&grads) {
        return Err(QuotientError::InfiniteParabolic(fmt_set(k)));
    }
    let refl: Vec<AffineMap> = k.iter().map(|a| sys.reflection(a)).collect();
    let x = &b.witness;
    let mut w = AffineMap::identity(sys.dim);
    // right multiplication by s_c with w(c) > 0 raises the length by one
    while let Some(i) = (0..k.len()).find(|&i| w.act_fn(&k[i]).eval(x).is_positive()) {
        w = w.compose(&refl[i]);
    }
    let image: BTreeSet<AffineFn> = k.iter().map(|a| w.act_fn(a)).collect();
    let negated: BTreeSet<AffineFn> = k.iter().map(AffineFn::neg).collect();
    debug_assert_eq!(image, negated);
    Ok(w)
}

/// `v[a, J] = u t` with `u = w_0(J + a)` and `t = w_0(J)`, computed in a
/// basis containing `J` and `a`.
pub fn v_element(sys: &AffineRootSystem, j: &[AffineFn], a: &AffineFn) -> Result<AffineMap, QuotientError> {
    let mut ja = j.to_vec();
    ja.push(a.clone());
    let b = sys.extend_to_basis(&ja).map_err(|e| match e {
        AffineError::NoExtension { .. } | AffineError::DependentGradients => {
            QuotientError::NotExtendable(a.to_string())
        }
        other => other.into(),
    })?;
    let u = longest_in_parabolic(sys, &b, &ja)?;
    let t = longest_in_parabolic(sys, &b, j)?;
    Ok(u.compose(&t))
}

/// `Gamma'` on `A^J_Gamma`, in coordinates `u` with `x = origin + frame u`
/// where `frame` spans the orthogonal complement of `V^{J,Gamma}` in `V^J`.
#[derive(Debug, Clone)]
pub struct QuotientSystem {
    pub source: AffineRootSystem,
    pub source_basis: AffineBasis,
    pub j: Vec<AffineFn>,
    pub origin: Vector,
    pub frame: Vec<Vector>,
    /// Basis of `V^{J,Gamma}`.
    pub kernel: Vec<Vector>,
    pub system: AffineRootSystem,
    /// `B(J, Gamma)`, with a witness where every projected positive root is positive.
    pub basis: AffineBasis,
    gram_inv: Matrix,
}

impl QuotientSystem {
    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    /// `a + A'_J` as a function of `u`; its gradient is `D_J(a + A'_J)`.
    pub fn project_fn(&self, a: &AffineFn) -> AffineFn {
        let grad = self.frame.iter().map(|w| linalg::dot(&a.grad, w)).collect();
        AffineFn::new(grad, a.eval(&self.origin))
    }

    /// Coordinates of the image in `A^J_Gamma` of a point of `A^J`.
    pub fn project_point(&self, x: &[Rational]) -> Vector {
        let d = linalg::sub(x, &self.origin);
        self.project_vector(&d)
    }

    fn project_vector(&self, v: &[Rational]) -> Vector {
        let m = &self.source.inner;
        let rhs: Vector = self
            .frame
            .iter()
            .map(|w| linalg::dot(w, &linalg::mat_vec(m, v)))
            .collect();
        linalg::mat_vec(&self.gram_inv, &rhs)
    }

    pub fn on_face(&self, x: &[Rational]) -> bool {
        self.j.iter().all(|b| b.eval(x).is_zero())
    }

    /// Action on `A^J_Gamma` induced by a transformation of `A` that
    /// preserves `A^J` and `V^{J,Gamma}`.
    pub fn induced_action(&self, w: &AffineMap) -> Result<AffineMap, QuotientError> {
        if !self.on_face(&w.apply(&self.origin)) {
            return Err(QuotientError::NotInduced);
        }
        let vj = self.tangent_basis();
        for v in &vj {
            let img = linalg::mat_vec(&w.lin, v);
            if self.j.iter().any(|b| !linalg::dot(&b.grad, &img).is_zero()) {
                return Err(QuotientError::NotInduced);
            }
        }
        for z in &self.kernel {
            let img = linalg::mat_vec(&w.lin, z);
            if !linalg::is_zero(&self.project_vector(&img)) {
                return Err(QuotientError::NotInduced);
            }
        }
        let cols: Vec<Vector> = self
            .frame
            .iter()
            .map(|f| self.project_vector(&linalg::mat_vec(&w.lin, f)))
            .collect();
        Ok(AffineMap {
            lin: linalg::transpose(&cols),
            shift: self.project_point(&w.apply(&self.origin)),
        })
    }

    /// Basis of `V^J`.
    fn tangent_basis(&self) -> Vec<Vector> {
        let rows: Matrix = self.j.iter().map(|a| a.grad.clone()).collect();
        linalg::nullspace(&rows, self.source.dim)
    }

    /// Lifts a function on the quotient to the unique positive marked root
    /// over it, if one exists.
    pub fn lift(&self, marked: &MarkedRoots, a: &AffineFn) -> Option<AffineFn> {
        let x = &self.source_basis.witness;
        for m in &marked.gamma {
            let f = &m.family;
            let g: Vector = self.frame.iter().map(|w| linalg::dot(&f.gradient, w)).collect();
            if g != a.grad {
                continue;
            }
            let base = linalg::dot(&f.gradient, &self.origin) + &f.offset;
            let k = (&a.c - base) / &f.period;
            if !k.is_integer() {
                continue;
            }
            let root = AffineFn::new(f.gradient.clone(), &f.offset + &f.period * k);
            if root.eval(x).is_positive() {
                return Some(root);
            }
        }
        None
    }
}

/// Projects the marked set and reports the properties the quotient needs.
pub fn build_quotient(
    sys: &AffineRootSystem,
    b: &AffineBasis,
    marked: &MarkedRoots,
    window: i64,
    exec: Exec,
) -> Result<(QuotientSystem, ValidationReport), QuotientError> {
    if window < 2 {
        return Err(AffineError::BadWindow(window).into());
    }
    let n = sys.dim;
    let dj: Matrix = marked.j.iter().map(|a| a.grad.clone()).collect();
    let rhs: Vector = marked.j.iter().map(|a| -a.c.clone()).collect();
    let origin = if dj.is_empty() {
        linalg::zeros(n)
    } else {
        linalg::solve(&dj, &rhs).ok_or(AffineError::DependentGradients)?
    };
    let mut rows = dj.clone();
    rows.extend(marked.gamma.iter().map(|m| m.family.gradient.clone()));
    let kernel = linalg::nullspace(&rows, n);
    let mut perp_rows = dj.clone();
    perp_rows.extend(kernel.iter().map(|z| linalg::mat_vec(&sys.inner, z)));
    let frame = linalg::nullspace(&perp_rows, n);
    let gram: Matrix = frame
        .iter()
        .map(|a| {
            frame
                .iter()
                .map(|c| linalg::dot(a, &linalg::mat_vec(&sys.inner, c)))
                .collect()
        })
        .collect();
    let gram_inv = if frame.is_empty() {
        vec![]
    } else {
        linalg::inverse(&gram).expect("frame vectors are independent")
    };

    let proto = QuotientSystem {
        source: sys.clone(),
        source_basis: b.clone(),
        j: marked.j.clone(),
        origin,
        frame,
        kernel,
        system: AffineRootSystem::new(0, vec![], None)?,
        basis: AffineBasis {
            roots: vec![],
            witness: vec![],
        },
        gram_inv,
    };
    let mut families: Vec<RootFamily> = Vec::new();
    for m in &marked.gamma {
        let img = proto.project_fn(&m.family.root(0));
        let fam = RootFamily::new(img.grad, img.c, m.family.period.clone());
        if !families.contains(&fam) {
            families.push(fam);
        }
    }
    let system = AffineRootSystem::new(proto.dim(), families, Some(gram))?;

    // a point of the face of the chamber cut out by J, off the other walls
    let strict: Vec<(Vector, Rational)> = b
        .roots
        .iter()
        .filter(|r| !marked.j.contains(r))
        .map(|r| (r.grad.clone(), r.c.clone()))
        .collect();
    let equal: Vec<(Vector, Rational)> = marked.j.iter().map(|r| (r.grad.clone(), r.c.clone())).collect();
    let y = lp::strict_point(n, &strict, &equal).ok_or(QuotientError::EmptyFace)?;
    let basis = system.basis_from_point(&proto.project_point(&y))?;
    let qs = QuotientSystem {
        system,
        basis,
        ..proto
    };
    let report = quotient_report(&qs, marked, window, exec)?;
    Ok((qs, report))
}

fn first_witness(ws: Vec<Option<String>>) -> Option<String> {
    ws.into_iter().flatten().next()
}

fn quotient_report(
    qs: &QuotientSystem,
    marked: &MarkedRoots,
    window: i64,
    exec: Exec,
) -> Result<ValidationReport, QuotientError> {
    let sys = &qs.source;
    let roots = marked.roots_in_window(window);
    let mut rep = ValidationReport::default();

    let vs: Vec<Result<AffineMap, QuotientError>> = exec.map(&roots, |(a, _)| v_element(sys, &marked.j, a));
    let extendable = roots
        .iter()
        .zip(&vs)
        .find(|(_, v)| v.is_err())
        .map(|((a, _), _)| format!("no basis contains J and [{a}]"));
    rep.push(Check::from_witness("extendable", extendable));
    let gens: Vec<(&AffineFn, &AffineMap)> = roots
        .iter()
        .zip(&vs)
        .filter_map(|((a, _), v)| v.as_ref().ok().map(|v| (a, v)))
        .collect();

    let j_set: BTreeSet<AffineFn> = marked.j.iter().cloned().collect();
    let normalizes = gens.iter().find_map(|(a, v)| {
        let img: BTreeSet<AffineFn> = marked.j.iter().map(|b| v.act_fn(b)).collect();
        (img != j_set).then(|| {
            format!(
                "v[[{a}], J] moves J to {}",
                fmt_set(&img.into_iter().collect::<Vec<_>>())
            )
        })
    });
    rep.push(Check::from_witness("normalizes-J", normalizes));

    let orbit_ws: Vec<(Option<String>, Option<String>)> = exec.map(&gens, |(a, v)| {
        let mut stable = None;
        let mut constant = None;
        for (c, i) in &roots {
            let img = v.act_fn(c);
            match marked.family_of(&img) {
                None if stable.is_none() => {
                    stable = Some(format!("v[[{a}], J] maps [{c}] to [{img}] outside Gamma"));
                }
                Some(k) if constant.is_none() && marked.gamma[k].p != marked.gamma[*i].p => {
                    constant = Some(format!(
                        "v[[{a}], J] maps [{c}] (p = {}) to [{img}] (p = {})",
                        marked.gamma[*i].p, marked.gamma[k].p
                    ));
                }
                _ => {}
            }
        }
        (stable, constant)
    });
    let (stable, constant): (Vec<_>, Vec<_>) = orbit_ws.into_iter().unzip();
    rep.push(Check::from_witness("gamma-stable", first_witness(stable)));
    rep.push(Check::from_witness("p-constant", first_witness(constant)));

    rep.push(Check::from_witness("reduced", qs.system.non_reduced_witness()));

    let positive: Vec<&AffineFn> = roots
        .iter()
        .map(|(a, _)| a)
        .filter(|a| a.eval(&qs.source_basis.witness).is_positive())
        .collect();
    let mut injective = None;
    'outer: for (i, a1) in positive.iter().enumerate() {
        let p1 = qs.project_fn(a1);
        for a2 in &positive[i + 1..] {
            let p2 = qs.project_fn(a2);
            if proportional_positive(&p1, &p2) {
                injective = Some(format!("[{a1}] and [{a2}] both project to multiples of [{p1}]"));
                break 'outer;
            }
        }
    }
    rep.push(Check::from_witness("injective", injective));

    let action: Vec<Option<String>> = exec.map(&gens, |(a, v)| {
        let expected = qs.system.reflection(&qs.project_fn(a));
        match qs.induced_action(v) {
            Ok(m) if m == expected => None,
            Ok(_) => Some(format!(
                "v[[{a}], J] does not act as the reflection in [{}]",
                qs.project_fn(a)
            )),
            Err(_) => Some(format!("v[[{a}], J] does not preserve the face")),
        }
    });
    rep.push(Check::from_witness("v-action", first_witness(action)));

    for c in qs.system.verify(window, exec)?.checks {
        rep.push(Check {
            name: format!("axioms:{}", c.name),
            ..c
        });
    }
    Ok(rep)
}

/// `b = lambda a` with `lambda > 0`.
fn proportional_positive(a: &AffineFn, b: &AffineFn) -> bool {
    let Some(i) = a.grad.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let lambda = &b.grad[i] / &a.grad[i];
    lambda.is_positive() && linalg::scale(&a.grad, &lambda) == b.grad && &a.c * &lambda == b.c
}

/// A simple root of the quotient datum with the marked roots it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorrisSimple {
    /// The positive marked root `a` over the wall `a'` through `e`.
    pub root: AffineFn,
    pub projected: AffineFn,
    /// The positive marked root over `k_{a'} - a'`.
    pub partner: AffineFn,
    pub p: Scalar,
    pub p_star: Scalar,
}

/// The finite datum of `Gamma'` at `e` with labels from the parameters.
#[derive(Debug, Clone)]
pub struct MorrisDatum {
    pub spd: SpecialPointData,
    pub labels: LabelFunctions,
    /// Per simple root `r(a) = D_J(a')/k_{a'}`, in datum order.
    pub simples: Vec<MorrisSimple>,
}

impl MorrisDatum {
    pub fn datum(&self) -> &BasedRootDatum {
        &self.spd.datum
    }
}

/// Builds the datum at a special point `e` of `A^J` (given in the ambient
/// coordinates) with `lambda = log_q p_a` and `lambda* = log_q p'_a`.
pub fn morris_datum(
    qs: &QuotientSystem,
    marked: &MarkedRoots,
    e: &[Rational],
) -> Result<MorrisDatum, QuotientError> {
    if !qs.on_face(e) {
        return Err(AffineError::BadInput("special point must lie on the face A^J".into()).into());
    }
    let eu = qs.project_point(e);
    let spd = qs.system.special_point_data(&qs.basis, &eu)?;
    let mut simples = Vec::new();
    let mut lambda = Vec::new();
    let mut lambda_star = Vec::new();
    for &pos in &spd.basis_at_e {
        let projected = qs.basis.roots[pos].clone();
        let root = qs
            .lift(marked, &projected)
            .ok_or_else(|| QuotientError::NoLift(projected.to_string()))?;
        let k = spd.period(&projected);
        let partner_fn = projected.neg().plus_const(&k);
        let partner = qs
            .lift(marked, &partner_fn)
            .ok_or_else(|| QuotientError::NoLift(partner_fn.to_string()))?;
        let fam = marked.family_of(&root).expect("lifted roots are marked");
        let p = marked.gamma[fam].p.clone();
        let p_star = marked.p(&partner).expect("lifted roots are marked").clone();
        if let Some(given) = &marked.gamma[fam].p_star {
            if *given != p_star {
                return Err(QuotientError::PStarMismatch {
                    root: root.to_string(),
                    given: given.to_string(),
                    derived: p_star.to_string(),
                });
            }
        }
        lambda.push(q_exponent(&p)?);
        lambda_star.push(q_exponent(&p_star)?);
        simples.push(MorrisSimple {
            root,
            projected,
            partner,
            p,
            p_star,
        });
    }
    let labels = LabelFunctions { lambda, lambda_star };
    labels.validate(&spd.weyl)?;
    Ok(MorrisDatum { spd, labels, simples })
}

/// `v(t)` for a transformation acting on `A^J_Gamma` as a translation, in
/// coordinates of the coroot lattice of the quotient datum.
pub fn translation_vector(
    qs: &QuotientSystem,
    spd: &SpecialPointData,
    t: &AffineMap,
) -> Result<Vec<i64>, QuotientError> {
    let m = qs.induced_action(t)?;
    if !m.is_translation() {
        return Err(QuotientError::NotTranslation);
    }
    spd.y_coordinates(&m.shift).ok_or(QuotientError::NotInLattice)
}

/// Marked sets used in tests, fixtures and benches.
pub mod fixtures {
    use super::*;
    use crate::affine::examples;

    pub fn family(grad: &[i64], offset: i64, period: i64, p: i32) -> MarkedFamily {
        MarkedFamily {
            family: RootFamily::new(linalg::to_rat(grad), rat(offset), rat(period)),
            p: Scalar::q_pow(p),
            p_star: None,
        }
    }

    /// Every root of `sys` marked with `q^p`.
    pub fn whole(sys: &AffineRootSystem, p: i32) -> Vec<MarkedFamily> {
        sys.families
            .iter()
            .map(|f| MarkedFamily {
                family: f.clone(),
                p: Scalar::q_pow(p),
                p_star: None,
            })
            .collect()
    }

    pub fn fundamental(sys: &AffineRootSystem) -> AffineBasis {
        sys.basis_from_point(&examples::alcove_point(sys))
            .expect("alcove point is generic")
    }

    /// `C_2` tilde with `J = {e_1 - e_2}`: the long roots `2e_2 + 2Z` and
    /// `-2e_1 + 2Z`, with `q^p` on the classes through `0 mod 4` and
    /// `q^p_star` on the others.
    pub fn c2_face(p: i32, p_star: i32) -> (AffineRootSystem, AffineBasis, MarkedRoots) {
        let sys = examples::c2_tilde();
        let b = fundamental(&sys);
        let j = vec![AffineFn::new(linalg::to_rat(&[1, -1]), rat(0))];
        let gamma = vec![
            family(&[0, 2], 0, 4, p),
            family(&[-2, 0], 0, 4, p),
            family(&[0, 2], 2, 4, p_star),
            family(&[-2, 0], 2, 4, p_star),
        ];
        let m = MarkedRoots::new(&sys, &b, j, gamma).expect("valid marking");
        (sys, b, m)
    }

    /// `A_2` tilde with `J` empty and only `+-a_1 + Z` marked: the quotient
    /// by `ker a_1` is a line.
    pub fn a2_line(p: i32) -> (AffineRootSystem, AffineBasis, MarkedRoots) {
        let sys = examples::a2_tilde();
        let b = fundamental(&sys);
        let gamma = vec![family(&[1, 0], 0, 1, p), family(&[-1, 0], 0, 1, p)];
        let m = MarkedRoots::new(&sys, &b, vec![], gamma).expect("valid marking");
        (sys, b, m)
    }

    /// `A_1` tilde squared on the plane, with the second factor unmarked and
    /// `q^p`, `q^p_star` on the even and odd walls of the first.
    pub fn product_factor(p: i32, p_star: i32) -> (AffineRootSystem, AffineBasis, MarkedRoots) {
        let fams = [[1, 0], [-1, 0], [0, 1], [0, -1]]
            .iter()
            .map(|g| RootFamily::new(linalg::to_rat(g), rat(0), rat(1)))
            .collect();
        let sys = AffineRootSystem::new(2, fams, None).expect("valid");
        let x = vec![
            Rational::new(1.into(), 3.into()),
            Rational::new(1.into(), 5.into()),
        ];
        let b = sys.basis_from_point(&x).expect("generic point");
        let gamma = vec![
            family(&[1, 0], 0, 2, p),
            family(&[-1, 0], 0, 2, p),
            family(&[1, 0], 1, 2, p_star),
            family(&[-1, 0], 1, 2, p_star),
        ];
        let m = MarkedRoots::new(&sys, &b, vec![], gamma).expect("valid marking");
        (sys, b, m)
    }

    /// Named fixtures with a special point of the quotient, all expected to
    /// pass every quotient check.
    pub fn passing() -> Vec<(&'static str, AffineRootSystem, AffineBasis, MarkedRoots, Vector)> {
        let mut out = Vec::new();
        for (name, sys) in [
            ("a2-identity", examples::a2_tilde()),
            ("c2-identity", examples::c2_tilde()),
        ] {
            let b = fundamental(&sys);
            let m = MarkedRoots::new(&sys, &b, vec![], whole(&sys, 1)).expect("valid");
            let e = linalg::zeros(sys.dim);
            out.push((name, sys, b, m, e));
        }
        let sys = examples::a1_tilde_split();
        let b = fundamental(&sys);
        let gamma = vec![
            family(&[1], 0, 2, 2),
            family(&[-1], 0, 2, 2),
            family(&[1], 1, 2, 1),
            family(&[-1], 1, 2, 1),
        ];
        let m = MarkedRoots::new(&sys, &b, vec![], gamma).expect("valid");
        out.push(("a1-unequal", sys, b, m, linalg::zeros(1)));
        let (sys, b, m) = a2_line(2);
        out.push(("a2-line", sys, b, m, linalg::zeros(2)));
        let (sys, b, m) = c2_face(1, 3);
        out.push(("c2-face", sys, b, m, linalg::zeros(2)));
        let (sys, b, m) = product_factor(1, 2);
        out.push(("product-factor", sys, b, m, linalg::zeros(2)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::affine::examples::*;
    use crate::bernstein::AffineHecke;
    use crate::scalar::ratio;

    fn x(v: &[i64]) -> Vector {
        linalg::to_rat(v)
    }

    #[test]
    fn longest_elements() {
        let sys = a2_tilde();
        let b = fundamental(&sys);
        assert!(longest_in_parabolic(&sys, &b, &[]).unwrap().is_identity());
        let a = b.roots[0].clone();
        assert_eq!(
            longest_in_parabolic(&sys, &b, std::slice::from_ref(&a)).unwrap(),
            sys.reflection(&a)
        );
        let k: Vec<AffineFn> = b.roots.iter().filter(|r| r.c.is_zero()).cloned().collect();
        assert_eq!(k.len(), 2);
        let w0 = longest_in_parabolic(&sys, &b, &k).unwrap();
        let img: BTreeSet<AffineFn> = k.iter().map(|r| w0.act_fn(r)).collect();
        assert_eq!(img, k.iter().map(AffineFn::neg).collect());
        let cox = crate::affine::AffineCoxeter::new(sys.clone(), b.clone()).unwrap();
        assert_eq!(cox.length(&w0), 3);
        assert!(matches!(
            longest_in_parabolic(&sys, &b, &b.roots),
            Err(QuotientError::InfiniteParabolic(_))
        ));
    }

    #[test]
    fn v_elements() {
        let sys = a2_tilde();
        let b = fundamental(&sys);
        let a = b.roots[0].clone();
        assert_eq!(v_element(&sys, &[], &a).unwrap(), sys.reflection(&a));
        // in A_2 the element v[a_2, {a_1}] exchanges a_1 and a_2
        let k: Vec<AffineFn> = b.roots.iter().filter(|r| r.c.is_zero()).cloned().collect();
        let v = v_element(&sys, &k[..1], &k[1]).unwrap();
        assert_eq!(v.act_fn(&k[0]), k[1]);
        // C_2: w_0 = -1 so v[2e_2, {e_1 - e_2}] fixes J
        let (c2, _, m) = c2_face(1, 1);
        let v = v_element(&c2, &m.j, &AffineFn::new(x(&[0, 2]), rat(0))).unwrap();
        assert_eq!(v.act_fn(&m.j[0]), m.j[0]);
        // parallel to J
        let par = AffineFn::new(x(&[1, -1]), rat(1));
        assert!(matches!(
            v_element(&c2, &m.j, &par),
            Err(QuotientError::NotExtendable(_))
        ));
        // 2e_1 lies on the wrong side of J at every vertex
        let bad = AffineFn::new(x(&[2, 0]), rat(0));
        assert!(matches!(
            v_element(&c2, &m.j, &bad),
            Err(QuotientError::NotExtendable(_))
        ));
    }

    #[test]
    fn identity_quotient() {
        for sys in [a1_tilde(), a2_tilde(), c2_tilde()] {
            let b = fundamental(&sys);
            let m = MarkedRoots::new(&sys, &b, vec![], whole(&sys, 1)).unwrap();
            let (qs, rep) = build_quotient(&sys, &b, &m, 3, Exec::Parallel).unwrap();
            assert!(rep.all_passed(), "{rep:?}");
            assert_eq!(qs.system.families, sys.families);
            assert_eq!(qs.basis.key(), b.key());
            let md = morris_datum(&qs, &m, &linalg::zeros(sys.dim)).unwrap();
            assert!(md
                .labels
                .lambda
                .iter()
                .chain(&md.labels.lambda_star)
                .all(|&l| l == 1));
        }
    }

    #[test]
    fn rank_one_face_of_c2() {
        let (sys, b, m) = c2_face(1, 3);
        let (qs, rep) = build_quotient(&sys, &b, &m, 3, Exec::Sequential).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        assert_eq!(qs.dim(), 1);
        assert!(qs.kernel.is_empty());
        let md = morris_datum(&qs, &m, &x(&[0, 0])).unwrap();
        assert_eq!(md.labels.lambda, vec![1]);
        assert_eq!(md.labels.lambda_star, vec![3]);
        assert_eq!(md.simples[0].root, AffineFn::new(x(&[0, 2]), rat(0)));
        assert_eq!(md.simples[0].partner, AffineFn::new(x(&[-2, 0]), rat(2)));
        assert!(md.datum().root_in_2x(md.datum().basis[0]));

        // the two reflections compose to a simple coroot translation
        let v1 = v_element(&sys, &m.j, &md.simples[0].root).unwrap();
        let v2 = v_element(&sys, &m.j, &md.simples[0].partner).unwrap();
        let y = translation_vector(&qs, &md.spd, &v1.compose(&v2)).unwrap();
        assert!(y == vec![1] || y == vec![-1], "{y:?}");
        assert!(translation_vector(&qs, &md.spd, &AffineMap::identity(2)).unwrap() == vec![0]);
        assert_eq!(
            translation_vector(&qs, &md.spd, &v1),
            Err(QuotientError::NotTranslation)
        );
    }

    #[test]
    fn equal_and_swapped_parameters() {
        let (sys, b, m) = c2_face(2, 2);
        let (qs, _) = build_quotient(&sys, &b, &m, 3, Exec::Sequential).unwrap();
        let md = morris_datum(&qs, &m, &x(&[0, 0])).unwrap();
        assert_eq!((md.labels.lambda[0], md.labels.lambda_star[0]), (2, 2));
        // at the other end of the quotient alcove the roles swap
        let (sys, b, m) = c2_face(1, 3);
        let (qs, _) = build_quotient(&sys, &b, &m, 3, Exec::Sequential).unwrap();
        let far = morris_datum(&qs, &m, &x(&[1, 1])).unwrap();
        assert_eq!((far.labels.lambda[0], far.labels.lambda_star[0]), (3, 1));
        assert!(matches!(
            morris_datum(&qs, &m, &x(&[-1, -1])),
            Err(QuotientError::Affine(AffineError::NotInClosure(_)))
        ));
    }

    #[test]
    fn supplied_p_star_is_checked() {
        let (sys, b, mut m) = c2_face(1, 3);
        m.gamma[0].p_star = Some(Scalar::q_pow(3));
        let (qs, _) = build_quotient(&sys, &b, &m, 3, Exec::Sequential).unwrap();
        assert!(morris_datum(&qs, &m, &x(&[0, 0])).is_ok());
        m.gamma[0].p_star = Some(Scalar::q_pow(2));
        assert!(matches!(
            morris_datum(&qs, &m, &x(&[0, 0])),
            Err(QuotientError::PStarMismatch { .. })
        ));
    }

    #[test]
    fn missing_reflection_images_fail_closure() {
        let sys = a2_tilde();
        let b = fundamental(&sys);
        let gamma = vec![
            family(&[1, 0], 0, 1, 1),
            family(&[-1, 0], 0, 1, 1),
            family(&[0, 1], 0, 1, 1),
            family(&[0, -1], 0, 1, 1),
        ];
        let m = MarkedRoots::new(&sys, &b, vec![], gamma).unwrap();
        let (_, rep) = build_quotient(&sys, &b, &m, 3, Exec::Sequential).unwrap();
        assert!(!rep.passed("gamma-stable"));
        assert!(rep.get("gamma-stable").unwrap().witness.is_some());
        assert!(rep.failures().any(|c| c.name.starts_with("axioms:")));
    }

    #[test]
    fn non_invariant_parameters_fail() {
        let sys = a1_tilde_split();
        let b = fundamental(&sys);
        let gamma = vec![
            family(&[1], 0, 2, 1),
            family(&[-1], 0, 2, 2),
            family(&[1], 1, 2, 1),
            family(&[-1], 1, 2, 1),
        ];
        let m = MarkedRoots::new(&sys, &b, vec![], gamma).unwrap();
        let (_, rep) = build_quotient(&sys, &b, &m, 3, Exec::Sequential).unwrap();
        assert!(!rep.passed("p-constant"));
        assert!(rep.passed("gamma-stable"));
    }

    #[test]
    fn one_factor_of_a_product() {
        let (sys, b, m) = product_factor(1, 2);
        let (qs, rep) = build_quotient(&sys, &b, &m, 3, Exec::Sequential).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        assert_eq!(qs.dim(), 1);
        assert_eq!(qs.kernel.len(), 1);
        let md = morris_datum(&qs, &m, &x(&[0, 0])).unwrap();
        assert_eq!((md.labels.lambda[0], md.labels.lambda_star[0]), (1, 2));
        // the point must be special for the quotient, not for the source
        assert!(matches!(
            morris_datum(&qs, &m, &[ratio(1, 2), rat(0)]),
            Err(QuotientError::Affine(AffineError::NotSpecial(_)))
        ));
    }

    #[test]
    fn passing_fixtures() {
        for (name, sys, b, m, e) in passing() {
            let (qs, rep) = build_quotient(&sys, &b, &m, 3, Exec::Parallel).unwrap();
            assert!(rep.all_passed(), "{name}: {rep:?}");
            let md = morris_datum(&qs, &m, &e).unwrap_or_else(|err| panic!("{name}: {err}"));
            AffineHecke::new(md.datum(), md.labels.clone()).unwrap();
            // reflections square to the identity, and the action is multiplicative
            let vs: Vec<AffineMap> = m
                .roots_in_window(2)
                .iter()
                .map(|(a, _)| v_element(&sys, &m.j, a).unwrap())
                .collect();
            for v in &vs {
                assert!(qs.induced_action(&v.compose(v)).unwrap().is_identity());
            }
            for (v1, v2) in vs.iter().zip(vs.iter().skip(1)) {
                let lhs = qs.induced_action(&v1.compose(v2)).unwrap();
                let rhs = qs
                    .induced_action(v1)
                    .unwrap()
                    .compose(&qs.induced_action(v2).unwrap());
                assert_eq!(lhs, rhs, "{name}");
            }
        }
    }

    #[test]
    fn line_quotient_of_a2() {
        let (sys, b, m) = a2_line(2);
        let (qs, rep) = build_quotient(&sys, &b, &m, 3, Exec::Sequential).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        assert_eq!((qs.dim(), qs.kernel.len()), (1, 1));
        // the frame is orthogonal to ker a_1 for the Killing form
        let z = &qs.kernel[0];
        let w = &qs.frame[0];
        assert!(linalg::dot(w, &linalg::mat_vec(&sys.inner, z)).is_zero());
        let md = morris_datum(&qs, &m, &x(&[0, 0])).unwrap();
        assert_eq!(md.labels, LabelFunctions::equal(vec![2]));
        // scaling the inner product leaves the datum and labels alone
        let scaled: Matrix = sys.inner.iter().map(|r| linalg::scale(r, &rat(5))).collect();
        let sys5 = AffineRootSystem::new(2, sys.families.clone(), Some(scaled)).unwrap();
        let (qs5, rep5) = build_quotient(&sys5, &b, &m, 3, Exec::Sequential).unwrap();
        assert!(rep5.all_passed());
        let md5 = morris_datum(&qs5, &m, &x(&[0, 0])).unwrap();
        assert_eq!(md5.datum(), md.datum());
        assert_eq!(md5.labels, md.labels);
    }

    #[test]
    fn marked_input_validation() {
        let sys = a2_tilde();
        let b = fundamental(&sys);
        let bad_p = MarkedFamily {
            p: Scalar::one(),
            ..family(&[1, 0], 0, 1, 1)
        };
        assert!(matches!(
            MarkedRoots::new(&sys, &b, vec![], vec![bad_p]),
            Err(QuotientError::BadParameter(_))
        ));
        let off = family(&[1, 0], 0, 1, 1);
        let off = MarkedFamily {
            family: RootFamily::new(off.family.gradient, ratio(1, 2), rat(1)),
            ..off
        };
        assert!(matches!(
            MarkedRoots::new(&sys, &b, vec![], vec![off]),
            Err(QuotientError::BadFamily(_))
        ));
    }
}
