//! Affine Hecke algebras in the Bernstein presentation. Elements are kept in
//! the normal form `sum_w c_w(theta) T_w` with the `theta` part on the left.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::Coxeter;
use crate::expr::{self, Evaluator, ExprError};
use crate::iwahori::{render_terms, HeckeAlgebra, HeckeElt, HeckeError, ParameterFunction};
use crate::lincomb::LinComb;
use crate::par::Exec;
use crate::rootdatum::{BasedRootDatum, RootDatumError, WeylElt, WeylGroup};
use crate::scalar::{Scalar, ScalarError};
use crate::theta::{self, Theta};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BernsteinError {
    #[error("invalid labels: {0}")]
    BadLabels(String),
    #[error("cross relation is not polynomial: {0}")]
    NonDivisible(#[from] ScalarError),
    #[error("element {0} is not invertible here")]
    NotInvertible(String),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

/// Exponents `lambda`, `lambda*` per simple root, in basis order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelFunctions {
    pub lambda: Vec<i32>,
    pub lambda_star: Vec<i32>,
}

impl LabelFunctions {
    pub fn equal(lambda: Vec<i32>) -> Self {
        LabelFunctions {
            lambda_star: lambda.clone(),
            lambda,
        }
    }

    /// Checks the label axioms against a Weyl group.
    pub fn validate(&self, weyl: &WeylGroup) -> Result<(), BernsteinError> {
        let datum = weyl.datum();
        let n = datum.basis.len();
        if self.lambda.len() != n || self.lambda_star.len() != n {
            return Err(BernsteinError::BadLabels(format!(
                "expected {n} labels, got {} and {}",
                self.lambda.len(),
                self.lambda_star.len()
            )));
        }
        for i in 0..n {
            if self.lambda[i] < 0 || self.lambda_star[i] < 0 {
                return Err(BernsteinError::BadLabels(format!(
                    "negative label at simple root {}",
                    i + 1
                )));
            }
            if self.lambda[i] != self.lambda_star[i] && !datum.root_in_2x(datum.basis[i]) {
                return Err(BernsteinError::BadLabels(format!(
                    "lambda != lambda* at simple root {} which is not in 2X",
                    i + 1
                )));
            }
            for j in i + 1..n {
                let differ = self.lambda[i] != self.lambda[j] || self.lambda_star[i] != self.lambda_star[j];
                if differ && weyl.associate(i, j) {
                    return Err(BernsteinError::BadLabels(format!(
                        "simple roots {} and {} are associate but carry different labels",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Normal-form element, keyed by `(w, y)` for the term `theta_y T_w`.
pub type BernsteinElt = LinComb<(WeylElt, Vec<i64>)>;

/// Handle for `H(R, lambda, lambda*, q)`.
#[derive(Debug, Clone)]
pub struct AffineHecke {
    finite: HeckeAlgebra<WeylGroup>,
    labels: LabelFunctions,
    /// `(q^lambda - 1) + theta_{-alpha^v}(q^{(lambda+lambda*)/2} - q^{(lambda-lambda*)/2})`.
    cross_factor: Vec<Theta>,
}

impl AffineHecke {
    pub fn new(datum: &BasedRootDatum, labels: LabelFunctions) -> Result<Self, BernsteinError> {
        let report = datum.check();
        if let Some(bad) = report.failures().next() {
            return Err(BernsteinError::RootDatum(RootDatumError::Invalid(format!(
                "{}: {}",
                bad.name,
                bad.witness.clone().unwrap_or_default()
            ))));
        }
        let weyl = WeylGroup::new(datum)?;
        labels.validate(&weyl)?;
        let params = ParameterFunction::new(labels.lambda.iter().map(|&l| Scalar::q_pow(l)).collect());
        let finite = HeckeAlgebra::new(weyl, params)?;
        let rank = datum.rank();
        let cross_factor = (0..datum.basis.len())
            .map(|i| {
                let (l, ls) = (labels.lambda[i], labels.lambda_star[i]);
                let mut p = theta::constant(rank, Scalar::q_pow(l) - Scalar::one());
                let diff = Scalar::t_pow(l + ls) - Scalar::t_pow(l - ls);
                p.add_term(theta::neg_vec(datum.simple_coroot(i)), diff);
                p
            })
            .collect();
        Ok(AffineHecke {
            finite,
            labels,
            cross_factor,
        })
    }

    pub fn datum(&self) -> &BasedRootDatum {
        self.finite.group().datum()
    }

    pub fn weyl(&self) -> &WeylGroup {
        self.finite.group()
    }

    pub fn finite(&self) -> &HeckeAlgebra<WeylGroup> {
        &self.finite
    }

    pub fn labels(&self) -> &LabelFunctions {
        &self.labels
    }

    pub fn rank_y(&self) -> usize {
        self.datum().rank()
    }

    pub fn simple_count(&self) -> usize {
        self.datum().basis.len()
    }

    /// `q_1 = q^{lambda}` at simple root `i`.
    pub fn q1(&self, i: usize) -> Scalar {
        Scalar::q_pow(self.labels.lambda[i])
    }

    /// `q_0 = q^{lambda*}` at simple root `i`.
    pub fn q0(&self, i: usize) -> Scalar {
        Scalar::q_pow(self.labels.lambda_star[i])
    }

    pub fn zero(&self) -> BernsteinElt {
        BernsteinElt::zero()
    }

    pub fn one(&self) -> BernsteinElt {
        self.scalar(Scalar::one())
    }

    pub fn scalar(&self, c: Scalar) -> BernsteinElt {
        LinComb::term((self.weyl().identity(), vec![0; self.rank_y()]), c)
    }

    pub fn theta(&self, y: Vec<i64>) -> BernsteinElt {
        LinComb::basis((self.weyl().identity(), y))
    }

    pub fn from_theta(&self, f: &Theta) -> BernsteinElt {
        let e = self.weyl().identity();
        f.map_keys(|y| (e, y.clone()))
    }

    pub fn t_w(&self, w: WeylElt) -> BernsteinElt {
        LinComb::basis((w, vec![0; self.rank_y()]))
    }

    pub fn t_s(&self, i: usize) -> BernsteinElt {
        self.t_w(self.weyl().simple(i))
    }

    pub fn from_finite(&self, x: &HeckeElt<WeylElt>) -> BernsteinElt {
        let zero = vec![0; self.rank_y()];
        x.map_keys(|w| (*w, zero.clone()))
    }

    /// `theta_y T_w` coefficient groups `w -> c_w`.
    pub fn group_by_w(x: &BernsteinElt) -> BTreeMap<WeylElt, Theta> {
        let mut out: BTreeMap<WeylElt, Theta> = BTreeMap::new();
        for ((w, y), c) in x.iter() {
            out.entry(*w).or_default().add_term(y.clone(), c.clone());
        }
        out
    }

    fn from_groups(groups: impl IntoIterator<Item = (WeylElt, Theta)>) -> BernsteinElt {
        let mut out = BernsteinElt::zero();
        for (w, f) in groups {
            for (y, c) in f.iter() {
                out.add_term((w, y.clone()), c.clone());
            }
        }
        out
    }

    /// The `theta` part when `x` lies in `C[Y]`.
    pub fn theta_part(&self, x: &BernsteinElt) -> Option<Theta> {
        let e = self.weyl().identity();
        x.keys()
            .all(|(w, _)| *w == e)
            .then(|| Self::group_by_w(x).remove(&e).unwrap_or_default())
    }

    /// `s_i(f)` acting on `Y`.
    pub fn reflect_theta(&self, i: usize, f: &Theta) -> Theta {
        let r = self.datum().basis[i];
        f.map_keys(|y| self.datum().reflect_y_by(r, y))
    }

    /// Right-hand side of the cross relation for `theta_y T_s`, as an
    /// element of `C[Y]`.
    pub fn cross_relation(&self, y: &[i64], i: usize) -> Result<Theta, BernsteinError> {
        let f = theta::theta(y.to_vec());
        let diff = &f - &self.reflect_theta(i, &f);
        self.cross_term(i, &diff)
    }

    /// `P_i * g / (1 - theta_{-2 alpha_i^v})`.
    fn cross_term(&self, i: usize, g: &Theta) -> Result<Theta, BernsteinError> {
        if g.is_zero() {
            return Ok(Theta::zero());
        }
        let num = theta::mul(&self.cross_factor[i], g);
        let v = theta::scale_vec(self.datum().simple_coroot(i), -2);
        Ok(theta::div_one_minus(&num, &v)?)
    }

    /// `T_s f = s(f) T_s + P (f - s f) / (1 - theta_{-2 alpha^v})`.
    fn t_s_times_theta(&self, i: usize, f: &Theta) -> Result<(Theta, Theta), BernsteinError> {
        let sf = self.reflect_theta(i, f);
        let rest = self.cross_term(i, &(f - &sf))?;
        Ok((sf, rest))
    }

    /// `T_s * x`.
    pub fn left_mul_simple(&self, i: usize, x: &BernsteinElt) -> Result<BernsteinElt, BernsteinError> {
        let weyl = self.weyl();
        let q = self.finite.q(i).clone();
        let qm1 = &q - &Scalar::one();
        let mut out: BTreeMap<WeylElt, Theta> = BTreeMap::new();
        for (w, f) in Self::group_by_w(x) {
            let (sf, rest) = self.t_s_times_theta(i, &f)?;
            let sw = weyl.left_mul(i, w);
            out.entry(w).or_default().add_scaled(&rest, &Scalar::one());
            if weyl.is_left_descent(i, w) {
                let e = out.entry(w).or_default();
                e.add_scaled(&sf, &qm1);
                out.entry(sw).or_default().add_scaled(&sf, &q);
            } else {
                out.entry(sw).or_default().add_scaled(&sf, &Scalar::one());
            }
        }
        Ok(Self::from_groups(out))
    }

    /// `T_w * x`.
    pub fn t_w_mul(&self, w: WeylElt, x: &BernsteinElt) -> Result<BernsteinElt, BernsteinError> {
        let mut acc = x.clone();
        for &s in self.weyl().reduced_word(w).iter().rev() {
            acc = self.left_mul_simple(s, &acc)?;
        }
        Ok(acc)
    }

    /// `f * x` for `f` in `C[Y]`.
    pub fn theta_mul(f: &Theta, x: &BernsteinElt) -> BernsteinElt {
        let mut out = BernsteinElt::zero();
        for (y1, c1) in f.iter() {
            for ((w, y2), c2) in x.iter() {
                out.add_term((*w, theta::add_vec(y1, y2)), c1 * c2);
            }
        }
        out
    }

    pub fn mul(&self, x: &BernsteinElt, y: &BernsteinElt) -> Result<BernsteinElt, BernsteinError> {
        self.mul_with(Exec::Sequential, x, y)
    }

    pub fn mul_with(
        &self,
        exec: Exec,
        x: &BernsteinElt,
        y: &BernsteinElt,
    ) -> Result<BernsteinElt, BernsteinError> {
        let groups: Vec<(WeylElt, Theta)> = Self::group_by_w(x).into_iter().collect();
        let parts = exec.map(&groups, |(w, f)| {
            self.t_w_mul(*w, y).map(|tw| Self::theta_mul(f, &tw))
        });
        let mut out = BernsteinElt::zero();
        for p in parts {
            out.add_scaled(&p?, &Scalar::one());
        }
        Ok(out)
    }

    /// Product of a sequence, left to right.
    pub fn product(&self, xs: &[&BernsteinElt]) -> Result<BernsteinElt, BernsteinError> {
        xs.iter().try_fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, x: &BernsteinElt, e: u32) -> Result<BernsteinElt, BernsteinError> {
        (0..e).try_fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    /// Inverse of `c theta_y T_w` with `c` a monomial.
    pub fn invert(&self, x: &BernsteinElt) -> Result<BernsteinElt, BernsteinError> {
        let not_inv = || BernsteinError::NotInvertible(self.render(x));
        let ((w, y), c) = x.as_single().ok_or_else(not_inv)?;
        let ci = c.inverse_monomial().map_err(|_| not_inv())?;
        let tw_inv = self.from_finite(&self.finite.t_w_inverse(w));
        let th = self.theta(theta::neg_vec(y));
        Ok(self.mul(&tw_inv, &th)?.scale(&ci))
    }

    /// The involution `theta_y -> theta_{-y}`, `T_s -> q_s - 1 - T_s`.
    pub fn iota(&self, x: &BernsteinElt) -> Result<BernsteinElt, BernsteinError> {
        let mut out = BernsteinElt::zero();
        for (w, f) in Self::group_by_w(x) {
            let fneg = f.map_keys(|y| theta::neg_vec(y));
            let tw = self.iota_t_w(w);
            out.add_scaled(&Self::theta_mul(&fneg, &self.from_finite(&tw)), &Scalar::one());
        }
        Ok(out)
    }

    /// `iota(T_w) = (-1)^{l(w)} q_w T_{w^{-1}}^{-1}` as a product over a
    /// reduced word.
    pub fn iota_t_w(&self, w: WeylElt) -> HeckeElt<WeylElt> {
        let fin = &self.finite;
        fin.group().reduced_word(w).iter().fold(fin.one(), |acc, &s| {
            let img = fin.scalar(fin.q(s) - &Scalar::one()) - fin.t_s(s);
            fin.mul(&acc, &img)
        })
    }

    /// `T_{s,0} = q_1^{-1/2} q_0^{1/2} (theta_{alpha^v} T_s - (q_1 - 1) theta_{alpha^v})`.
    pub fn t_s0(&self, i: usize) -> BernsteinElt {
        let (l, ls) = (self.labels.lambda[i], self.labels.lambda_star[i]);
        let pre = Scalar::t_pow(ls - l);
        let av = self.datum().simple_coroot(i).to_vec();
        let s = self.weyl().simple(i);
        let mut inner = BernsteinElt::basis((s, av.clone()));
        inner.add_term((self.weyl().identity(), av), Scalar::one() - self.q1(i));
        inner.scale(&pre)
    }

    /// Terms in descending order of `w`, then of `y`.
    pub fn render(&self, x: &BernsteinElt) -> String {
        let e = self.weyl().identity();
        let zero = vec![0; self.rank_y()];
        let terms = x.iter().rev().map(|((w, y), c)| {
            let mono = match (*w == e, *y == zero) {
                (true, _) => theta::render_y(y),
                (false, true) => format!("T[{}]", Coxeter::render(self.weyl(), w)),
                (false, false) => {
                    format!("{}*T[{}]", theta::render_y(y), Coxeter::render(self.weyl(), w))
                }
            };
            (mono, c)
        });
        render_terms(terms)
    }

    pub fn parse(&self, src: &str) -> Result<BernsteinElt, ExprError> {
        expr::evaluate(src, &BernsteinEval { alg: self })
    }
}

struct BernsteinEval<'a> {
    alg: &'a AffineHecke,
}

fn eval_err(e: BernsteinError) -> ExprError {
    ExprError::Eval(e.to_string())
}

impl Evaluator for BernsteinEval<'_> {
    type Value = BernsteinElt;

    fn scalar(&self, s: Scalar) -> BernsteinElt {
        self.alg.scalar(s)
    }

    fn generator(&self, kind: &str, body: &str) -> Result<BernsteinElt, ExprError> {
        match kind {
            "T" => self
                .alg
                .weyl()
                .parse_word(body)
                .map(|w| self.alg.t_w(w))
                .ok_or_else(|| ExprError::UnknownGenerator(format!("T[{body}]"))),
            "th" => {
                let y = expr::parse_int_list(body)?;
                if y.len() != self.alg.rank_y() {
                    return Err(ExprError::UnknownGenerator(format!(
                        "th[{body}] needs {} coordinates",
                        self.alg.rank_y()
                    )));
                }
                Ok(self.alg.theta(y))
            }
            "T0" => {
                let i = self.alg.weyl().parse_word(body).and_then(|w| {
                    let word = Coxeter::reduced_word(self.alg.weyl(), &w);
                    (word.len() == 1).then(|| word[0])
                });
                i.map(|i| self.alg.t_s0(i))
                    .ok_or_else(|| ExprError::UnknownGenerator(format!("T0[{body}]")))
            }
            _ => Err(ExprError::UnknownGenerator(format!("{kind}[{body}]"))),
        }
    }

    fn add(&self, a: BernsteinElt, b: BernsteinElt) -> Result<BernsteinElt, ExprError> {
        Ok(a + b)
    }

    fn mul(&self, a: BernsteinElt, b: BernsteinElt) -> Result<BernsteinElt, ExprError> {
        self.alg.mul(&a, &b).map_err(eval_err)
    }

    fn pow(&self, a: BernsteinElt, e: i32) -> Result<BernsteinElt, ExprError> {
        let base = if e < 0 {
            self.alg.invert(&a).map_err(eval_err)?
        } else {
            a
        };
        self.alg.pow(&base, e.unsigned_abs()).map_err(eval_err)
    }

    fn call(&self, name: &str, arg: BernsteinElt) -> Result<BernsteinElt, ExprError> {
        match name {
            "iota" => self.alg.iota(&arg).map_err(eval_err),
            _ => Err(ExprError::UnknownFunction(name.to_string())),
        }
    }
}

/// Standard data used across tests, benches and fixtures.
pub mod examples {
    use super::*;

    /// `X = Y = Z`, `alpha = 2`, `alpha^v = 1`: `alpha` lies in `2X`.
    pub fn a1_even() -> BasedRootDatum {
        BasedRootDatum {
            pairing: vec![vec![1]],
            roots: vec![vec![2], vec![-2]],
            coroots: vec![vec![1], vec![-1]],
            basis: vec![0],
        }
    }

    /// `X = Y = Z`, `alpha = 1`, `alpha^v = 2`.
    pub fn a1_odd() -> BasedRootDatum {
        BasedRootDatum {
            pairing: vec![vec![1]],
            roots: vec![vec![1], vec![-1]],
            coroots: vec![vec![2], vec![-2]],
            basis: vec![0],
        }
    }

    pub fn a2() -> BasedRootDatum {
        BasedRootDatum::from_cartan(&[vec![2, -1], vec![-1, 2]])
    }

    /// `C_2` on the coroot lattice; the long simple root is in `2X`.
    pub fn c2() -> BasedRootDatum {
        BasedRootDatum::from_cartan(&[vec![2, -1], vec![-2, 2]])
    }

    /// `X = Y = Z^2` with roots `+-e_1 +- e_2`, `+-2e_i`.
    pub fn sp4() -> BasedRootDatum {
        BasedRootDatum {
            pairing: vec![vec![1, 0], vec![0, 1]],
            roots: vec![
                vec![1, -1],
                vec![-1, 1],
                vec![1, 1],
                vec![-1, -1],
                vec![2, 0],
                vec![-2, 0],
                vec![0, 2],
                vec![0, -2],
            ],
            coroots: vec![
                vec![1, -1],
                vec![-1, 1],
                vec![1, 1],
                vec![-1, -1],
                vec![1, 0],
                vec![-1, 0],
                vec![0, 1],
                vec![0, -1],
            ],
            basis: vec![0, 6],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn alg(d: BasedRootDatum, l: Vec<i32>, ls: Vec<i32>) -> AffineHecke {
        AffineHecke::new(
            &d,
            LabelFunctions {
                lambda: l,
                lambda_star: ls,
            },
        )
        .unwrap()
    }

    #[test]
    fn label_validation() {
        assert!(AffineHecke::new(
            &a1_even(),
            LabelFunctions {
                lambda: vec![2],
                lambda_star: vec![1]
            }
        )
        .is_ok());
        assert!(matches!(
            AffineHecke::new(
                &a1_odd(),
                LabelFunctions {
                    lambda: vec![2],
                    lambda_star: vec![1]
                }
            ),
            Err(BernsteinError::BadLabels(_))
        ));
        assert!(matches!(
            AffineHecke::new(&a2(), LabelFunctions::equal(vec![1, 2])),
            Err(BernsteinError::BadLabels(_))
        ));
    }

    #[test]
    fn rank_one_cross_relation() {
        let h = alg(a1_even(), vec![2], vec![1]);
        let rhs = h.cross_relation(&[1], 0).unwrap();
        let mut expect = Theta::zero();
        expect.add_term(vec![1], Scalar::q_pow(2) - Scalar::one());
        expect.add_term(vec![0], Scalar::t_pow(3) - Scalar::t_pow(1));
        assert_eq!(rhs, expect);
        assert!(h.cross_relation(&[0], 0).unwrap().is_zero());
        // theta_{a} T_s - T_s theta_{-a} equals the same right-hand side
        let lhs =
            h.mul(&h.theta(vec![1]), &h.t_s(0)).unwrap() - h.mul(&h.t_s(0), &h.theta(vec![-1])).unwrap();
        assert_eq!(lhs, h.from_theta(&expect));
    }

    #[test]
    fn odd_pairing_division() {
        // <alpha, y> = 1 with lambda = lambda*: multiply back by (1 - theta_{-2a})
        let h = alg(a2(), vec![1, 1], vec![1, 1]);
        let y = vec![1, 0];
        let rhs = h.cross_relation(&y, 0).unwrap();
        let v = theta::scale_vec(h.datum().simple_coroot(0), -2);
        let back = &rhs - &theta::shift(&rhs, &v);
        let f = theta::theta(y.clone());
        let diff = &f - &h.reflect_theta(0, &f);
        assert_eq!(back, theta::mul(&h.cross_factor[0], &diff));
    }

    #[test]
    fn box_division_never_fails() {
        for h in [
            alg(a1_even(), vec![2], vec![1]),
            alg(a2(), vec![1, 1], vec![1, 1]),
            alg(c2(), vec![1, 3], vec![1, 3]),
            alg(sp4(), vec![1, 2], vec![1, 3]),
        ] {
            let n = h.rank_y();
            let mut ys: Vec<Vec<i64>> = vec![vec![]];
            for _ in 0..n {
                ys = ys
                    .into_iter()
                    .flat_map(|p| (-3..=3).map(move |v| [p.clone(), vec![v]].concat()))
                    .collect();
            }
            for y in &ys {
                for i in 0..h.simple_count() {
                    h.cross_relation(y, i).unwrap();
                }
            }
        }
    }

    #[test]
    fn products_and_rendering() {
        let h = alg(a1_even(), vec![1], vec![1]);
        let x = h.parse("th[1]*th[-1]").unwrap();
        assert_eq!(h.render(&x), "th[0]");
        let sq = h.parse("T[s1]*T[s1]").unwrap();
        assert_eq!(h.render(&sq), "(q^1 - 1)*T[s1] + q^1*th[0]");
        let z = h.parse("th[1]*T[s1] + q^(1/2)*th[0]").unwrap();
        assert_eq!(z.len(), 2);
    }

    #[test]
    fn orbit_sums_are_central() {
        let h = alg(c2(), vec![1, 2], vec![1, 2]);
        let w = h.weyl();
        for y in [vec![1, 0], vec![0, 1], vec![1, 1]] {
            let mut orbit: std::collections::BTreeSet<Vec<i64>> = Default::default();
            for u in w.elements() {
                orbit.insert(w.act_y(u, &y));
            }
            let z: BernsteinElt = orbit
                .into_iter()
                .map(|v| ((w.identity(), v), Scalar::one()))
                .collect();
            for i in 0..2 {
                let t = h.t_s(i);
                assert_eq!(h.mul(&z, &t).unwrap(), h.mul(&t, &z).unwrap());
            }
        }
    }

    #[test]
    fn zero_labels_give_group_algebra() {
        let h = alg(c2(), vec![0, 0], vec![0, 0]);
        let w = h.weyl();
        for u in w.elements() {
            for y in [vec![1, 0], vec![0, -1]] {
                let lhs = h.mul(&h.t_w(u), &h.theta(y.clone())).unwrap();
                let expect = BernsteinElt::basis((u, w.act_y(u, &y)));
                assert_eq!(lhs, expect);
            }
        }
    }

    #[test]
    fn t_s0_quadratic() {
        let h = alg(a1_even(), vec![3], vec![1]);
        let t0 = h.t_s0(0);
        let q0 = h.q0(0);
        let sq = h.mul(&t0, &t0).unwrap();
        let expect = t0.scale(&(&q0 - &Scalar::one())) + h.scalar(q0);
        assert_eq!(sq, expect);
        // T_{s,0} = -q_1^{-1/2} q_0^{1/2} iota(theta_{-alpha^v} T_s)
        let th = h.theta(vec![-1]);
        let via_iota = h.iota(&h.mul(&th, &h.t_s(0)).unwrap()).unwrap();
        let pre = -Scalar::t_pow(h.labels().lambda_star[0] - h.labels().lambda[0]);
        assert_eq!(t0, via_iota.scale(&pre));
    }

    fn arb_elt(rank: usize, order: usize) -> impl Strategy<Value = BernsteinElt> {
        prop::collection::vec(
            (
                0..order,
                prop::collection::vec(-2i64..3, rank),
                -2i64..3,
                -2i32..3,
            ),
            0..4,
        )
        .prop_map(|v| {
            v.into_iter()
                .map(|(w, y, c, k)| ((WeylElt(w), y), Scalar::monomial(rat(c), k)))
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn associative_sp4(x in arb_elt(2, 8), y in arb_elt(2, 8), z in arb_elt(2, 8)) {
            let h = alg(sp4(), vec![1, 2], vec![1, 1]);
            let l = h.mul(&h.mul(&x, &y).unwrap(), &z).unwrap();
            let r = h.mul(&x, &h.mul(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn iota_is_involutive_and_multiplicative(x in arb_elt(2, 6), y in arb_elt(2, 6)) {
            let h = alg(a2(), vec![1, 1], vec![1, 1]);
            prop_assert_eq!(h.iota(&h.iota(&x).unwrap()).unwrap(), x.clone());
            let lhs = h.iota(&h.mul(&x, &y).unwrap()).unwrap();
            let rhs = h.mul(&h.iota(&x).unwrap(), &h.iota(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
