//! The group algebra `C[Y]` with basis `theta_y`, and exact division by
//! `1 - theta_v`.

use std::collections::BTreeMap;

use crate::lincomb::LinComb;
use crate::scalar::{Scalar, ScalarError};

pub type Theta = LinComb<Vec<i64>>;

pub fn theta(y: Vec<i64>) -> Theta {
    LinComb::basis(y)
}

pub fn constant(rank: usize, c: Scalar) -> Theta {
    LinComb::term(vec![0; rank], c)
}

pub fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn neg_vec(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

pub fn scale_vec(a: &[i64], k: i64) -> Vec<i64> {
    a.iter().map(|x| x * k).collect()
}

pub fn mul(a: &Theta, b: &Theta) -> Theta {
    let mut out = Theta::zero();
    for (y1, c1) in a.iter() {
        for (y2, c2) in b.iter() {
            out.add_term(add_vec(y1, y2), c1 * c2);
        }
    }
    out
}

/// `theta_v * f`.
pub fn shift(f: &Theta, v: &[i64]) -> Theta {
    f.map_keys(|y| add_vec(y, v))
}

/// `f / (1 - theta_v)`, exact or `NonDivisible`.
///
/// Along each line `y + Zv` the quotient is the running sum of `f` in the
/// direction of `v`; it has finite support iff every line sums to zero.
pub fn div_one_minus(f: &Theta, v: &[i64]) -> Result<Theta, ScalarError> {
    let Some(i) = v.iter().position(|&x| x != 0) else {
        return Err(ScalarError::DivByZero);
    };
    let vi = v[i];
    let mut lines: BTreeMap<Vec<i64>, BTreeMap<i64, Scalar>> = BTreeMap::new();
    for (y, c) in f.iter() {
        let k = y[i].div_euclid(vi);
        let rep: Vec<i64> = y.iter().zip(v).map(|(a, b)| a - k * b).collect();
        lines.entry(rep).or_default().insert(k, c.clone());
    }
    let mut out = Theta::zero();
    for (rep, terms) in lines {
        let lo = *terms.keys().next().expect("nonempty line");
        let hi = *terms.keys().next_back().expect("nonempty line");
        let mut acc = Scalar::zero();
        for k in lo..=hi {
            if let Some(c) = terms.get(&k) {
                acc += c;
            }
            if k < hi {
                let y: Vec<i64> = rep.iter().zip(v).map(|(a, b)| a + k * b).collect();
                out.add_term(y, acc.clone());
            }
        }
        if !acc.is_zero() {
            return Err(ScalarError::NonDivisible {
                num: render(f),
                den: format!("1 - {}", render_y(v)),
            });
        }
    }
    Ok(out)
}

/// `th[1,-1]`.
pub fn render_y(y: &[i64]) -> String {
    let parts: Vec<String> = y.iter().map(ToString::to_string).collect();
    format!("th[{}]", parts.join(","))
}

/// Terms in descending lexicographic order of `y`.
pub fn render(f: &Theta) -> String {
    crate::iwahori::render_terms(f.iter().rev().map(|(y, c)| (render_y(y), c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_theta() -> impl Strategy<Value = Theta> {
        prop::collection::vec((-3i64..4, -3i64..4, -3i64..4, -2i32..3), 0..6).prop_map(|v| {
            v.into_iter()
                .map(|(a, b, c, k)| (vec![a, b], Scalar::monomial(crate::scalar::rat(c), k)))
                .collect()
        })
    }

    #[test]
    fn geometric_division() {
        // (1 - theta_{3v}) / (1 - theta_v) = 1 + theta_v + theta_{2v}
        let v = vec![1, -1];
        let f = constant(2, Scalar::one()) - theta(scale_vec(&v, 3));
        let g = div_one_minus(&f, &v).unwrap();
        let expect = constant(2, Scalar::one()) + theta(v.clone()) + theta(scale_vec(&v, 2));
        assert_eq!(g, expect);
        let bad = constant(2, Scalar::one());
        assert!(matches!(
            div_one_minus(&bad, &v),
            Err(ScalarError::NonDivisible { .. })
        ));
    }

    proptest! {
        #[test]
        fn division_inverts_multiplication(g in arb_theta(), a in -2i64..3, b in -2i64..3) {
            prop_assume!(a != 0 || b != 0);
            let v = vec![a, b];
            let f = &g - &shift(&g, &v);
            prop_assert_eq!(div_one_minus(&f, &v).unwrap(), g);
        }

        #[test]
        fn product_commutes(f in arb_theta(), g in arb_theta()) {
            prop_assert_eq!(mul(&f, &g), mul(&g, &f));
        }
    }
}
