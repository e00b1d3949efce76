//! Iwahori-Hecke algebras `H(W, q)` with unequal parameters in the standard
//! basis `{T_w}`.

use thiserror::Error;

use crate::coxeter::Coxeter;
use crate::expr::{self, Evaluator, ExprError};
use crate::lincomb::LinComb;
use crate::par::Exec;
use crate::scalar::{rat, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("parameters differ on conjugate generators {s1} and {s2}: {q1} vs {q2}")]
    BadParameters {
        s1: String,
        s2: String,
        q1: String,
        q2: String,
    },
    #[error("parameter for {0} must be an even power of t with coefficient 1")]
    NotMonomial(String),
    #[error("expected {expected} parameters, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("element {0} is not invertible here")]
    NotInvertible(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub type HeckeElt<E> = LinComb<E>;

/// `q_s` for each simple reflection, indexed like the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterFunction {
    pub values: Vec<Scalar>,
}

impl ParameterFunction {
    pub fn new(values: Vec<Scalar>) -> Self {
        ParameterFunction { values }
    }

    /// `q^{lambda_s}` from integer exponents.
    pub fn from_exponents(lambdas: &[i32]) -> Self {
        ParameterFunction {
            values: lambdas.iter().map(|&l| Scalar::q_pow(l)).collect(),
        }
    }

    /// Checks conjugation invariance against `group`.
    pub fn validate<C: Coxeter>(&self, group: &C) -> Result<(), HeckeError> {
        if self.values.len() != group.rank() {
            return Err(HeckeError::WrongCount {
                expected: group.rank(),
                got: self.values.len(),
            });
        }
        for (s, q) in self.values.iter().enumerate() {
            let ok = q
                .as_monomial()
                .is_some_and(|(c, k)| *c == rat(1) && k % 2 == 0 && k >= 0);
            if !ok {
                return Err(HeckeError::NotMonomial(group.generator_name(s)));
            }
        }
        let classes = group.conjugacy_classes();
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                if classes[i] == classes[j] && self.values[i] != self.values[j] {
                    return Err(HeckeError::BadParameters {
                        s1: group.generator_name(i),
                        s2: group.generator_name(j),
                        q1: self.values[i].to_string(),
                        q2: self.values[j].to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Handle for `H(W, q)`.
#[derive(Debug, Clone)]
pub struct HeckeAlgebra<C: Coxeter> {
    group: C,
    params: ParameterFunction,
}

impl<C: Coxeter> HeckeAlgebra<C> {
    pub fn new(group: C, params: ParameterFunction) -> Result<Self, HeckeError> {
        params.validate(&group)?;
        Ok(HeckeAlgebra { group, params })
    }

    pub fn group(&self) -> &C {
        &self.group
    }

    pub fn params(&self) -> &ParameterFunction {
        &self.params
    }

    pub fn q(&self, s: usize) -> &Scalar {
        &self.params.values[s]
    }

    /// `q_w = q_{s_1} ... q_{s_r}` along a reduced word.
    pub fn q_w(&self, w: &C::Elt) -> Scalar {
        self.group
            .reduced_word(w)
            .iter()
            .fold(Scalar::one(), |acc, &s| &acc * self.q(s))
    }

    pub fn one(&self) -> HeckeElt<C::Elt> {
        LinComb::basis(self.group.identity())
    }

    pub fn scalar(&self, c: Scalar) -> HeckeElt<C::Elt> {
        LinComb::term(self.group.identity(), c)
    }

    pub fn t(&self, w: C::Elt) -> HeckeElt<C::Elt> {
        LinComb::basis(w)
    }

    pub fn t_s(&self, s: usize) -> HeckeElt<C::Elt> {
        LinComb::basis(self.group.simple(s))
    }

    /// `T_s * x`.
    pub fn left_mul_simple(&self, s: usize, x: &HeckeElt<C::Elt>) -> HeckeElt<C::Elt> {
        let q = self.q(s);
        let qm1 = q - &Scalar::one();
        let mut out = LinComb::zero();
        for (w, c) in x.iter() {
            let sw = self.group.left_mul(s, w);
            if self.group.is_left_descent(s, w) {
                out.add_term(w.clone(), c * &qm1);
                out.add_term(sw, c * q);
            } else {
                out.add_term(sw, c.clone());
            }
        }
        out
    }

    /// `T_w * x`.
    pub fn t_w_mul(&self, w: &C::Elt, x: &HeckeElt<C::Elt>) -> HeckeElt<C::Elt> {
        self.group
            .reduced_word(w)
            .iter()
            .rev()
            .fold(x.clone(), |acc, &s| self.left_mul_simple(s, &acc))
    }

    pub fn mul(&self, x: &HeckeElt<C::Elt>, y: &HeckeElt<C::Elt>) -> HeckeElt<C::Elt> {
        self.mul_with(Exec::Sequential, x, y)
    }

    pub fn mul_with(&self, exec: Exec, x: &HeckeElt<C::Elt>, y: &HeckeElt<C::Elt>) -> HeckeElt<C::Elt> {
        let terms: Vec<(&C::Elt, &Scalar)> = x.iter().collect();
        let parts = exec.map(&terms, |(w, c)| self.t_w_mul(w, y).scale(c));
        parts.into_iter().fold(LinComb::zero(), |acc, p| acc + p)
    }

    /// `T_s^{-1} = q_s^{-1} T_s - (1 - q_s^{-1})`.
    pub fn t_inverse(&self, s: usize) -> HeckeElt<C::Elt> {
        let qi = self.q(s).inverse_monomial().expect("parameters are monomials");
        let mut out = self.t_s(s).scale(&qi);
        out.add_term(self.group.identity(), &qi - &Scalar::one());
        out
    }

    /// `T_w^{-1} = T_{s_r}^{-1} ... T_{s_1}^{-1}`.
    pub fn t_w_inverse(&self, w: &C::Elt) -> HeckeElt<C::Elt> {
        self.group
            .reduced_word(w)
            .iter()
            .fold(self.one(), |acc, &s| self.mul(&self.t_inverse(s), &acc))
    }

    pub fn pow(&self, x: &HeckeElt<C::Elt>, e: u32) -> HeckeElt<C::Elt> {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    /// Inverse of `c T_w` for a monomial `c`.
    pub fn invert(&self, x: &HeckeElt<C::Elt>) -> Result<HeckeElt<C::Elt>, HeckeError> {
        let (w, c) = x
            .as_single()
            .ok_or_else(|| HeckeError::NotInvertible(self.render(x)))?;
        let ci = c
            .inverse_monomial()
            .map_err(|_| HeckeError::NotInvertible(self.render(x)))?;
        Ok(self.t_w_inverse(w).scale(&ci))
    }

    /// Terms in descending order of (length, reduced word).
    pub fn render(&self, x: &HeckeElt<C::Elt>) -> String {
        let mut terms: Vec<((usize, Vec<usize>), String, &Scalar)> = x
            .iter()
            .map(|(w, c)| (self.group.order_key(w), format!("T[{}]", self.group.render(w)), c))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        render_terms(terms.into_iter().map(|(_, m, c)| (m, c)))
    }

    pub fn parse(&self, src: &str) -> Result<HeckeElt<C::Elt>, ExprError> {
        expr::evaluate(src, &HeckeEval { alg: self })
    }
}

/// Joins `coefficient*monomial` pairs as `c1*m1 + c2*m2 - m3`.
pub fn render_terms<'a>(terms: impl Iterator<Item = (String, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (i, (mono, c)) in terms.enumerate() {
        let mut coeff = c.clone();
        let negative = c.terms().last().is_some_and(|(_, v)| *v < rat(0)) && !c.needs_parens();
        if negative {
            coeff = -coeff;
        }
        let sep = match (i, negative) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        out.push_str(sep);
        if coeff.is_one() {
            out.push_str(&mono);
        } else if coeff.needs_parens() {
            out.push_str(&format!("({coeff})*{mono}"));
        } else {
            out.push_str(&format!("{coeff}*{mono}"));
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

struct HeckeEval<'a, C: Coxeter> {
    alg: &'a HeckeAlgebra<C>,
}

impl<C: Coxeter> Evaluator for HeckeEval<'_, C> {
    type Value = HeckeElt<C::Elt>;

    fn scalar(&self, s: Scalar) -> Self::Value {
        self.alg.scalar(s)
    }

    fn generator(&self, kind: &str, body: &str) -> Result<Self::Value, ExprError> {
        if kind != "T" {
            return Err(ExprError::UnknownGenerator(format!("{kind}[{body}]")));
        }
        self.alg
            .group
            .parse_word(body)
            .map(|w| self.alg.t(w))
            .ok_or_else(|| ExprError::UnknownGenerator(format!("T[{body}]")))
    }

    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ExprError> {
        Ok(a + b)
    }

    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ExprError> {
        Ok(self.alg.mul(&a, &b))
    }

    fn pow(&self, a: Self::Value, e: i32) -> Result<Self::Value, ExprError> {
        let base = if e < 0 {
            self.alg
                .invert(&a)
                .map_err(|err| ExprError::Eval(err.to_string()))?
        } else {
            a
        };
        Ok(self.alg.pow(&base, e.unsigned_abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{examples, AffineCoxeter};
    use crate::coxeter::NamedAffine;
    use crate::rootdatum::{BasedRootDatum, WeylGroup};
    use proptest::prelude::*;

    fn a2() -> WeylGroup {
        WeylGroup::new(&BasedRootDatum::from_cartan(&[vec![2, -1], vec![-1, 2]])).unwrap()
    }

    fn c2() -> WeylGroup {
        WeylGroup::new(&BasedRootDatum::from_cartan(&[vec![2, -1], vec![-2, 2]])).unwrap()
    }

    fn a1_affine(q0: i32, q1: i32) -> HeckeAlgebra<NamedAffine> {
        let sys = examples::a1_tilde();
        let b = sys.basis_from_point(&examples::alcove_point(&sys)).unwrap();
        let g = NamedAffine::new(AffineCoxeter::new(sys, b).unwrap());
        HeckeAlgebra::new(g, ParameterFunction::from_exponents(&[q0, q1])).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(HeckeAlgebra::new(a2(), ParameterFunction::from_exponents(&[1, 1])).is_ok());
        assert!(HeckeAlgebra::new(c2(), ParameterFunction::from_exponents(&[1, 2])).is_ok());
        let err = HeckeAlgebra::new(a2(), ParameterFunction::from_exponents(&[1, 2])).unwrap_err();
        assert!(matches!(err, HeckeError::BadParameters { .. }));
    }

    #[test]
    fn quadratic_relation() {
        let h = HeckeAlgebra::new(c2(), ParameterFunction::from_exponents(&[1, 2])).unwrap();
        for s in 0..2 {
            let ts = h.t_s(s);
            let sq = h.mul(&ts, &ts);
            let q = h.q(s).clone();
            let expect = ts.scale(&(&q - &Scalar::one())) + h.scalar(q);
            assert_eq!(sq, expect);
            assert_eq!(h.mul(&ts, &h.t_inverse(s)), h.one());
        }
        assert_eq!(
            h.render(&h.mul(&h.t_s(0), &h.t_s(0))),
            "(q^1 - 1)*T[s1] + q^1*T[e]"
        );
    }

    #[test]
    fn affine_length_additive() {
        let h = a1_affine(1, 2);
        let x = h.parse("T[s0]*T[s1]*T[s0]").unwrap();
        assert_eq!(h.render(&x), "T[s0s1s0]");
        let w = h.group().from_word(&[0, 1, 0]);
        assert_eq!(h.q_w(&w), Scalar::q_pow(4));
    }

    #[test]
    fn degenerate_parameters_give_group_algebra() {
        let h = HeckeAlgebra::new(a2(), ParameterFunction::from_exponents(&[0, 0])).unwrap();
        assert_eq!(h.t_inverse(0), h.t_s(0));
        let g = h.group();
        for a in g.elements() {
            for b in g.elements() {
                let prod = h.mul(&h.t(a), &h.t(b));
                assert_eq!(prod, h.t(Coxeter::mul(g, &a, &b)));
            }
        }
    }

    #[test]
    fn inverse_of_q_one_is_self() {
        let h = HeckeAlgebra::new(c2(), ParameterFunction::from_exponents(&[1, 1])).unwrap();
        let expect = h.parse("q^-1*T[s1] - (1 - q^-1)").unwrap();
        assert_eq!(h.t_inverse(0), expect);
    }

    fn arb_elt(n: usize) -> impl Strategy<Value = HeckeElt<crate::WeylElt>> {
        prop::collection::vec((0..n, -2i64..3, -2i32..3), 0..5).prop_map(|v| {
            v.into_iter()
                .map(|(w, c, k)| (crate::WeylElt(w), Scalar::monomial(rat(c), k)))
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn associativity_c2(x in arb_elt(8), y in arb_elt(8), z in arb_elt(8)) {
            let h = HeckeAlgebra::new(c2(), ParameterFunction::from_exponents(&[1, 2])).unwrap();
            prop_assert_eq!(h.mul(&h.mul(&x, &y), &z), h.mul(&x, &h.mul(&y, &z)));
        }

        #[test]
        fn q_multiplicative_on_length_additive(a in 0usize..8, b in 0usize..8) {
            let h = HeckeAlgebra::new(c2(), ParameterFunction::from_exponents(&[1, 2])).unwrap();
            let g = h.group();
            let (a, b) = (crate::WeylElt(a), crate::WeylElt(b));
            let ab = Coxeter::mul(g, &a, &b);
            if g.length(ab) == g.length(a) + g.length(b) {
                prop_assert_eq!(h.q_w(&ab), &h.q_w(&a) * &h.q_w(&b));
            }
        }
    }
}
