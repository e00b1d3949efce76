//! The isomorphism between the standard presentation of `H(W_aff, q)` and
//! the Bernstein presentation attached to a special point.
//!
//! A simple reflection `s_b` with `b(e) != 0` splits as `t_y u` with `u` in
//! the stabilizer of `e`. Lengths add in `t_y = s_b u^{-1}`, so
//! `T_{s_b} = T_{t_y} T_{u^{-1}}^{-1}` and `T_{t_y}` becomes
//! `q_{t_y}^{1/2} theta_y` for dominant `y`.

use thiserror::Error;

use crate::affine::{AffineError, AffineFn, AffineMap, AffineWeylElt, SpecialPointData};
use crate::bernstein::{AffineHecke, BernsteinElt, BernsteinError, LabelFunctions};
use crate::coxeter::{Coxeter, NamedAffine};
use crate::iwahori::{HeckeAlgebra, HeckeElt, HeckeError, ParameterFunction};
use crate::par::Exec;
use crate::rootdatum::{positive_coroot_sum, WeylElt};
use crate::scalar::{rat, Scalar, ScalarError};
use crate::theta;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("parameters do not match the special point: {0}")]
    ParameterMismatch(String),
    #[error("translation {y:?} is not length-additive with its finite part")]
    NotAdditive { y: Vec<i64> },
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Exponent `m` with `q_s = q^m`.
fn q_exponent(q: &Scalar) -> Result<i32, IsoError> {
    q.t_exponent()
        .filter(|k| k % 2 == 0 && q.as_monomial().is_some_and(|(c, _)| *c == rat(1)))
        .map(|k| k / 2)
        .ok_or_else(|| IsoError::ParameterMismatch(format!("{q} is not an integral power of q")))
}

/// Labels `lambda(Da/k_a) = log_q q_{s_a}` and `lambda*` read off the
/// reflection in `k_a - a` when `Da/k_a` lies in `2X`.
pub fn labels_from_special_point(
    spd: &SpecialPointData,
    group: &NamedAffine,
    q: &ParameterFunction,
) -> Result<LabelFunctions, IsoError> {
    let mut lambda = Vec::new();
    let mut lambda_star = Vec::new();
    for (i, &pos) in spd.basis_at_e.iter().enumerate() {
        let l = q_exponent(&q.values[pos])?;
        let ls = if spd.datum.root_in_2x(spd.datum.basis[i]) {
            let a = &spd.basis.roots[pos];
            let partner = AffineFn::new(a.grad.iter().map(|x| -x).collect(), spd.period(a));
            let refl = spd.system.reflection(&partner);
            let s = group.conjugate_simple(&refl).ok_or_else(|| {
                IsoError::ParameterMismatch(format!("{partner} is not conjugate to a simple root"))
            })?;
            q_exponent(&q.values[s])?
        } else {
            l
        };
        lambda.push(l);
        lambda_star.push(ls);
    }
    Ok(LabelFunctions { lambda, lambda_star })
}

/// Both presentations of one affine Hecke algebra, with the maps between them.
#[derive(Debug, Clone)]
pub struct StandardBernstein {
    pub spd: SpecialPointData,
    pub standard: HeckeAlgebra<NamedAffine>,
    pub bernstein: AffineHecke,
    /// Image of `T_{s_b}` for each basis position.
    images: Vec<BernsteinElt>,
}

impl StandardBernstein {
    pub fn new(spd: SpecialPointData, q: ParameterFunction) -> Result<Self, IsoError> {
        let group = NamedAffine::new(crate::affine::AffineCoxeter::new(
            spd.system.clone(),
            spd.basis.clone(),
        )?);
        let labels = labels_from_special_point(&spd, &group, &q)?;
        let standard = HeckeAlgebra::new(group, q)?;
        let bernstein = AffineHecke::new(&spd.datum, labels)?;
        let mut out = StandardBernstein {
            spd,
            standard,
            bernstein,
            images: Vec::new(),
        };
        out.images = (0..out.standard.group().rank())
            .map(|pos| out.generator_image(pos))
            .collect::<Result<_, _>>()?;
        Ok(out)
    }

    fn group(&self) -> &NamedAffine {
        self.standard.group()
    }

    /// `T_{t_y}` for a translation `y`.
    pub fn translation(&self, y: &[i64]) -> AffineMap {
        self.spd.translation_map(y)
    }

    /// Affine map of a finite Weyl element.
    pub fn finite_map(&self, w: WeylElt) -> AffineMap {
        self.spd.to_map(&AffineWeylElt {
            translation: vec![0; self.spd.datum.rank()],
            finite: w,
        })
    }

    fn generator_image(&self, pos: usize) -> Result<BernsteinElt, IsoError> {
        let b = &self.bernstein;
        if let Some(i) = self.spd.simple_index(pos) {
            return Ok(b.t_s(i));
        }
        let s = self.group().simple(pos);
        let split = self.spd.split(&s)?;
        let ty = self.translation(&split.translation);
        let lu = b.weyl().length(split.finite);
        if self.group().length(&ty) != 1 + lu {
            return Err(IsoError::NotAdditive { y: split.translation });
        }
        let coeff = self.standard.q_w(&ty).sqrt_monomial()?;
        let u_inv = b.weyl().inverse(split.finite);
        let tail = b.from_finite(&b.finite().t_w_inverse(&u_inv));
        let head = b.theta(split.translation).scale(&coeff);
        Ok(b.mul(&head, &tail)?)
    }

    /// Image of `T_w` for an affine Weyl element `w`.
    pub fn image_of_t_w(&self, w: &AffineMap) -> Result<BernsteinElt, IsoError> {
        let b = &self.bernstein;
        let mut acc = b.one();
        for &s in self.group().reduced_word(w).iter().rev() {
            acc = b.mul(&self.images[s], &acc)?;
        }
        Ok(acc)
    }

    pub fn to_bernstein(&self, x: &HeckeElt<AffineMap>) -> Result<BernsteinElt, IsoError> {
        self.to_bernstein_with(Exec::Sequential, x)
    }

    pub fn to_bernstein_with(&self, exec: Exec, x: &HeckeElt<AffineMap>) -> Result<BernsteinElt, IsoError> {
        let terms: Vec<(&AffineMap, &Scalar)> = x.iter().collect();
        let parts = exec.map(&terms, |(w, c)| self.image_of_t_w(w).map(|img| img.scale(c)));
        let mut out = BernsteinElt::zero();
        for p in parts {
            out.add_scaled(&p?, &Scalar::one());
        }
        Ok(out)
    }

    /// `y = y1 - y2` with `y1`, `y2` dominant and `y2 = N * 2rho^v`, `N`
    /// minimal.
    pub fn dominant_split(&self, y: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let d = &self.spd.datum;
        let rho2 = positive_coroot_sum(self.bernstein.weyl());
        let dominant = |v: &[i64]| (0..d.basis.len()).all(|i| d.pair(d.simple_root(i), v) >= 0);
        let mut n = 0;
        loop {
            let y2 = theta::scale_vec(&rho2, n);
            let y1 = theta::add_vec(y, &y2);
            if dominant(&y1) {
                return (y1, y2);
            }
            n += 1;
        }
    }

    /// `theta_y -> q_{y1}^{-1/2} q_{y2}^{1/2} T_{t_{y1}} T_{t_{y2}}^{-1}`.
    pub fn theta_to_standard(&self, y: &[i64]) -> Result<HeckeElt<AffineMap>, IsoError> {
        let h = &self.standard;
        let (y1, y2) = self.dominant_split(y);
        let (t1, t2) = (self.translation(&y1), self.translation(&y2));
        let c = h.q_w(&t1).sqrt_monomial()?.inverse_monomial()? * h.q_w(&t2).sqrt_monomial()?;
        Ok(h.mul(&h.t(t1), &h.t_w_inverse(&t2)).scale(&c))
    }

    pub fn to_standard(&self, x: &BernsteinElt) -> Result<HeckeElt<AffineMap>, IsoError> {
        let h = &self.standard;
        let mut out = HeckeElt::zero();
        for ((w, y), c) in x.iter() {
            let th = self.theta_to_standard(y)?;
            let tw = h.t(self.finite_map(*w));
            out.add_scaled(&h.mul(&th, &tw), c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::examples;
    use crate::affine::AffineRootSystem;

    fn setup(sys: AffineRootSystem, q: &[i32]) -> StandardBernstein {
        let b = sys.basis_from_point(&examples::alcove_point(&sys)).unwrap();
        let e = vec![rat(0); sys.dim];
        let spd = sys.special_point_data(&b, &e).unwrap();
        StandardBernstein::new(spd, ParameterFunction::from_exponents(q)).unwrap()
    }

    fn check_multiplicative(iso: &StandardBernstein, max_len: usize) {
        let elts = iso.standard.group().group.elements_up_to(max_len);
        for u in &elts {
            for v in &elts {
                let h = &iso.standard;
                let lhs = iso
                    .to_bernstein(&h.mul(&h.t(u.clone()), &h.t(v.clone())))
                    .unwrap();
                let rhs = iso
                    .bernstein
                    .mul(&iso.image_of_t_w(u).unwrap(), &iso.image_of_t_w(v).unwrap())
                    .unwrap();
                assert_eq!(
                    lhs,
                    rhs,
                    "{} * {}",
                    h.render(&h.t(u.clone())),
                    h.render(&h.t(v.clone()))
                );
            }
        }
    }

    #[test]
    fn a1_labels_and_generators() {
        let iso = setup(examples::a1_tilde_split(), &[1, 2]);
        let l = iso.bernstein.labels();
        // s0 = 1 - x carries q_{s0}, s1 = x carries q_{s1}
        assert_eq!(l.lambda, vec![2]);
        assert_eq!(l.lambda_star, vec![1]);
        let b = &iso.bernstein;
        assert_eq!(
            iso.image_of_t_w(&iso.standard.group().simple(1)).unwrap(),
            b.t_s(0)
        );
        check_multiplicative(&iso, 3);
    }

    #[test]
    fn a2_multiplicative_and_round_trip() {
        let iso = setup(examples::a2_tilde(), &[1, 1, 1]);
        check_multiplicative(&iso, 2);
        for w in iso.standard.group().group.elements_up_to(4) {
            let x = iso.standard.t(w);
            let back = iso.to_standard(&iso.to_bernstein(&x).unwrap()).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn dominant_translation_goes_to_theta() {
        let iso = setup(examples::c2_tilde(), &[1, 1, 2]);
        let (y1, _) = iso.dominant_split(&[-1, 0]);
        let t = iso.translation(&y1);
        let img = iso.image_of_t_w(&t).unwrap();
        let c = iso.standard.q_w(&t).sqrt_monomial().unwrap();
        assert_eq!(img, iso.bernstein.theta(y1).scale(&c));
        let x = iso.bernstein.theta(vec![1, -1]);
        assert_eq!(iso.to_bernstein(&iso.to_standard(&x).unwrap()).unwrap(), x);
    }
}
