//! Based root data on `Z^n` with an explicit pairing, and their finite Weyl
//! groups.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::report::{Check, ValidationReport};

/// Default cap on enumerated Weyl group size.
pub const DEFAULT_WEYL_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootDatumError {
    #[error("{0:?} is not a root")]
    UnknownRoot(Vec<i64>),
    #[error("Weyl group exceeds {cap} elements")]
    Budget { cap: usize },
    #[error("element is not in the Weyl group")]
    NotInGroup,
    #[error("invalid root datum: {0}")]
    Invalid(String),
}

/// `(X, R, Y, R^v, Delta)` with `X = Y = Z^n` and `<x, y> = x^T P y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasedRootDatum {
    pub pairing: Vec<Vec<i64>>,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    /// Indices into `roots` of the simple roots.
    pub basis: Vec<usize>,
}

/// Which lattice a vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

impl BasedRootDatum {
    pub fn rank(&self) -> usize {
        self.pairing.len()
    }

    /// The datum with `X = Y = Z^0` and no roots.
    pub fn trivial(rank: usize) -> Self {
        BasedRootDatum {
            pairing: (0..rank)
                .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
                .collect(),
            roots: vec![],
            coroots: vec![],
            basis: vec![],
        }
    }

    /// Datum with `Y` the coroot lattice (basis the simple coroots) and `X`
    /// its dual, from `cartan[i][j] = <alpha_j, alpha_i^v>`.
    pub fn from_cartan(cartan: &[Vec<i64>]) -> Self {
        let n = cartan.len();
        let simple_roots: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| cartan[i][j]).collect()).collect();
        let simple_coroots: Vec<Vec<i64>> = (0..n)
            .map(|j| (0..n).map(|i| i64::from(i == j)).collect())
            .collect();
        let pairing = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut roots: Vec<Vec<i64>> = Vec::new();
        let mut coroots: Vec<Vec<i64>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut queue: VecDeque<(Vec<i64>, Vec<i64>)> = simple_roots
            .iter()
            .cloned()
            .zip(simple_coroots.iter().cloned())
            .collect();
        while let Some((r, c)) = queue.pop_front() {
            if !seen.insert(r.clone()) {
                continue;
            }
            for i in 0..n {
                // s_i(x) = x - <x, alpha_i^v> alpha_i, s_i(y) = y - <alpha_i, y> alpha_i^v
                let xr = r[i];
                let nr: Vec<i64> = (0..n).map(|k| r[k] - xr * simple_roots[i][k]).collect();
                let ac: i64 = (0..n).map(|k| simple_roots[i][k] * c[k]).sum();
                let nc: Vec<i64> = (0..n).map(|k| c[k] - ac * simple_coroots[i][k]).collect();
                if !seen.contains(&nr) {
                    queue.push_back((nr, nc));
                }
            }
            roots.push(r);
            coroots.push(c);
        }
        let basis = simple_roots
            .iter()
            .map(|a| roots.iter().position(|r| r == a).expect("simple root present"))
            .collect();
        BasedRootDatum {
            pairing,
            roots,
            coroots,
            basis,
        }
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * self.pairing[i][j] * yj;
            }
        }
        s
    }

    pub fn root_index(&self, alpha: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == alpha)
    }

    pub fn coroot_index(&self, alpha_v: &[i64]) -> Option<usize> {
        self.coroots.iter().position(|r| r == alpha_v)
    }

    pub fn simple_root(&self, i: usize) -> &[i64] {
        &self.roots[self.basis[i]]
    }

    pub fn simple_coroot(&self, i: usize) -> &[i64] {
        &self.coroots[self.basis[i]]
    }

    /// `s_alpha(x) = x - <x, alpha^v> alpha` for the root with index `r`.
    pub fn reflect_x_by(&self, r: usize, x: &[i64]) -> Vec<i64> {
        let c = self.pair(x, &self.coroots[r]);
        x.iter().zip(&self.roots[r]).map(|(a, b)| a - c * b).collect()
    }

    /// `s_alpha(y) = y - <alpha, y> alpha^v` for the root with index `r`.
    pub fn reflect_y_by(&self, r: usize, y: &[i64]) -> Vec<i64> {
        let c = self.pair(&self.roots[r], y);
        y.iter().zip(&self.coroots[r]).map(|(a, b)| a - c * b).collect()
    }

    /// Reflection in the root `alpha` applied to `v` on the given side.
    pub fn reflect(&self, alpha: &[i64], v: &[i64], side: Side) -> Result<Vec<i64>, RootDatumError> {
        let r = self
            .root_index(alpha)
            .ok_or_else(|| RootDatumError::UnknownRoot(alpha.to_vec()))?;
        Ok(match side {
            Side::X => self.reflect_x_by(r, v),
            Side::Y => self.reflect_y_by(r, v),
        })
    }

    /// Coordinates of a root in the simple roots, if integral.
    pub fn simple_coordinates(&self, x: &[i64]) -> Option<Vec<i64>> {
        if self.basis.is_empty() {
            return if x.iter().all(|v| *v == 0) {
                Some(vec![])
            } else {
                None
            };
        }
        let a: Matrix = (0..self.rank())
            .map(|k| {
                self.basis
                    .iter()
                    .map(|&b| linalg::to_rat(&[self.roots[b][k]])[0].clone())
                    .collect()
            })
            .collect();
        let sol = linalg::solve(&a, &linalg::to_rat(x))?;
        if !linalg::is_zero(&linalg::sub(&linalg::mat_vec(&a, &sol), &linalg::to_rat(x))) {
            return None;
        }
        sol.iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_positive_root(&self, r: usize) -> bool {
        self.simple_coordinates(&self.roots[r])
            .is_some_and(|c| c.iter().all(|v| *v >= 0))
    }

    /// True when `alpha / 2` lies in `X`.
    pub fn root_in_2x(&self, r: usize) -> bool {
        self.roots[r].iter().all(|v| v % 2 == 0)
    }

    /// True when `<alpha, beta^v>` is even for every root `beta`: the simple
    /// root of an `A_1` factor or a long root of a `C_n` factor.
    pub fn pairs_evenly(&self, r: usize) -> bool {
        self.coroots.iter().all(|c| self.pair(&self.roots[r], c) % 2 == 0)
    }

    /// Same lattices and pairing, opposite basis `-Delta`.
    pub fn with_opposite_basis(&self) -> Result<Self, RootDatumError> {
        let basis = self
            .basis
            .iter()
            .map(|&b| {
                let neg: Vec<i64> = self.roots[b].iter().map(|v| -v).collect();
                self.root_index(&neg).ok_or(RootDatumError::UnknownRoot(neg))
            })
            .collect::<Result<_, _>>()?;
        Ok(BasedRootDatum {
            basis,
            ..self.clone()
        })
    }

    /// Connected components of the Dynkin diagram, as lists of basis positions.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.basis.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![];
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(i) = stack.pop() {
                members.push(i);
                for j in 0..n {
                    if comp[j] == usize::MAX && self.pair(self.simple_root(i), self.simple_coroot(j)) != 0 {
                        comp[j] = id;
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Checks every axiom and reports each one separately.
    pub fn check(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let n = self.rank();
        let shape_ok = n > 0 && self.pairing.iter().all(|r| r.len() == n);
        let dims_ok = self.roots.iter().all(|r| r.len() == n) && self.coroots.iter().all(|r| r.len() == n);
        rep.push(if shape_ok && dims_ok {
            Check::pass("shape")
        } else {
            Check::fail("shape", "pairing not square or vector length mismatch")
        });
        if !(shape_ok && dims_ok) {
            return rep;
        }
        let p: Matrix = self.pairing.iter().map(|r| linalg::to_rat(r)).collect();
        let det = linalg::determinant(&p);
        rep.push(if det.abs().is_one() {
            Check::pass("pairing-perfect")
        } else {
            Check::fail("pairing-perfect", format!("det = {det}"))
        });
        rep.push(if self.roots.len() == self.coroots.len() {
            Check::pass("root-coroot-bijection")
        } else {
            Check::fail(
                "root-coroot-bijection",
                format!("{} roots, {} coroots", self.roots.len(), self.coroots.len()),
            )
        });
        let m = self.roots.len().min(self.coroots.len());
        let dup = (0..m)
            .find(|&i| (0..i).any(|j| self.roots[i] == self.roots[j] || self.coroots[i] == self.coroots[j]));
        rep.push(Check::from_witness(
            "distinct",
            dup.map(|i| format!("{:?}", self.roots[i])),
        ));
        let bad = (0..m).find(|&i| self.pair(&self.roots[i], &self.coroots[i]) != 2);
        rep.push(Check::from_witness(
            "pairing-normalization",
            bad.map(|i| format!("{:?}", self.roots[i])),
        ));
        let mut stab = None;
        'outer: for a in 0..m {
            for b in 0..m {
                let rx = self.reflect_x_by(a, &self.roots[b]);
                let ry = self.reflect_y_by(a, &self.coroots[b]);
                match self.root_index(&rx) {
                    Some(k) if self.coroots[k] == ry => {}
                    _ => {
                        stab = Some(format!("s_{:?} applied to {:?}", self.roots[a], self.roots[b]));
                        break 'outer;
                    }
                }
            }
        }
        rep.push(Check::from_witness("reflection-stability", stab));
        let nonred = self.roots.iter().find(|r| {
            let d: Vec<i64> = r.iter().map(|v| 2 * v).collect();
            self.root_index(&d).is_some()
        });
        rep.push(Check::from_witness(
            "reduced",
            nonred.map(|r| format!("{r:?} and its double")),
        ));
        let basis_ok = self.basis.iter().all(|&b| b < self.roots.len());
        let indep = basis_ok
            && linalg::independent(
                &self
                    .basis
                    .iter()
                    .map(|&b| linalg::to_rat(&self.roots[b]))
                    .collect::<Vec<_>>(),
            );
        rep.push(if indep {
            Check::pass("basis-independent")
        } else {
            Check::fail("basis-independent", format!("{:?}", self.basis))
        });
        if indep {
            let bad = self.roots.iter().find(|r| match self.simple_coordinates(r) {
                Some(c) => !(c.iter().all(|v| *v >= 0) || c.iter().all(|v| *v <= 0)),
                None => true,
            });
            rep.push(Check::from_witness(
                "basis-integrality",
                bad.map(|r| format!("{r:?}")),
            ));
        }
        rep
    }
}

/// Handle for an element of an enumerated Weyl group; ordered by length,
/// then by reduced word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt(pub usize);

#[derive(Debug, Clone)]
struct ElementData {
    y_mat: Vec<i64>,
    x_mat: Vec<i64>,
    length: usize,
    word: Vec<usize>,
}

/// The finite Weyl group `W_0` of a datum, fully enumerated.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    datum: BasedRootDatum,
    elements: Vec<ElementData>,
    index: HashMap<Vec<i64>, usize>,
    left: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    positive: Vec<bool>,
}

fn mat_apply(m: &[i64], v: &[i64]) -> Vec<i64> {
    let n = v.len();
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum())
        .collect()
}

fn mat_compose(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

impl WeylGroup {
    pub fn new(datum: &BasedRootDatum) -> Result<Self, RootDatumError> {
        Self::with_cap(datum, DEFAULT_WEYL_CAP)
    }

    pub fn with_cap(datum: &BasedRootDatum, cap: usize) -> Result<Self, RootDatumError> {
        let n = datum.rank();
        let unit = |j: usize| -> Vec<i64> { (0..n).map(|i| i64::from(i == j)).collect() };
        let mat_of = |f: &dyn Fn(&[i64]) -> Vec<i64>| -> Vec<i64> {
            let cols: Vec<Vec<i64>> = (0..n).map(|j| f(&unit(j))).collect();
            (0..n * n).map(|k| cols[k % n][k / n]).collect()
        };
        let gens_y: Vec<Vec<i64>> = datum
            .basis
            .iter()
            .map(|&b| mat_of(&|v| datum.reflect_y_by(b, v)))
            .collect();
        let gens_x: Vec<Vec<i64>> = datum
            .basis
            .iter()
            .map(|&b| mat_of(&|v| datum.reflect_x_by(b, v)))
            .collect();
        let id = mat_of(&|v| v.to_vec());

        let mut mats: Vec<(Vec<i64>, Vec<i64>)> = vec![(id.clone(), id)];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        index.insert(mats[0].0.clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for s in 0..gens_y.len() {
                let y = mat_compose(&gens_y[s], &mats[w].0, n);
                if index.contains_key(&y) {
                    continue;
                }
                if mats.len() >= cap {
                    return Err(RootDatumError::Budget { cap });
                }
                let x = mat_compose(&gens_x[s], &mats[w].1, n);
                index.insert(y.clone(), mats.len());
                queue.push_back(mats.len());
                mats.push((y, x));
            }
        }

        let positive: Vec<bool> = (0..datum.roots.len())
            .map(|r| datum.is_positive_root(r))
            .collect();
        let length_of = |x_mat: &[i64]| -> usize {
            (0..datum.roots.len())
                .filter(|&r| positive[r])
                .filter(|&r| {
                    let img = mat_apply(x_mat, &datum.roots[r]);
                    datum.root_index(&img).is_some_and(|k| !positive[k])
                })
                .count()
        };
        let lengths: Vec<usize> = mats.iter().map(|(_, x)| length_of(x)).collect();
        let left_raw: Vec<Vec<usize>> = (0..gens_y.len())
            .map(|s| {
                mats.iter()
                    .map(|(y, _)| index[&mat_compose(&gens_y[s], y, n)])
                    .collect()
            })
            .collect();
        let mut by_len: Vec<usize> = (0..mats.len()).collect();
        by_len.sort_by_key(|&w| lengths[w]);
        let mut words: Vec<Vec<usize>> = vec![vec![]; mats.len()];
        for &w in &by_len {
            if lengths[w] == 0 {
                continue;
            }
            let s = (0..gens_y.len())
                .find(|&s| lengths[left_raw[s][w]] < lengths[w])
                .expect("nonidentity element has a left descent");
            let mut word = vec![s];
            word.extend_from_slice(&words[left_raw[s][w]]);
            words[w] = word;
        }
        let mut order: Vec<usize> = (0..mats.len()).collect();
        order.sort_by(|&a, &b| (lengths[a], &words[a]).cmp(&(lengths[b], &words[b])));
        let mut new_of = vec![0; mats.len()];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        let elements: Vec<ElementData> = order
            .iter()
            .map(|&old| ElementData {
                y_mat: mats[old].0.clone(),
                x_mat: mats[old].1.clone(),
                length: lengths[old],
                word: words[old].clone(),
            })
            .collect();
        let index: HashMap<Vec<i64>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.y_mat.clone(), i))
            .collect();
        let left: Vec<Vec<usize>> = left_raw
            .iter()
            .map(|row| {
                let mut out = vec![0; row.len()];
                for (old, &img) in row.iter().enumerate() {
                    out[new_of[old]] = new_of[img];
                }
                out
            })
            .collect();
        let mut group = WeylGroup {
            datum: datum.clone(),
            elements,
            index,
            left,
            inverse: vec![],
            positive,
        };
        group.inverse = (0..group.elements.len())
            .map(|w| {
                let word: Vec<usize> = group.elements[w].word.iter().rev().copied().collect();
                group.from_word(&word).0
            })
            .collect();
        Ok(group)
    }

    pub fn datum(&self) -> &BasedRootDatum {
        &self.datum
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.basis.len()
    }

    pub fn identity(&self) -> WeylElt {
        WeylElt(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = WeylElt> {
        (0..self.elements.len()).map(WeylElt)
    }

    pub fn simple(&self, s: usize) -> WeylElt {
        WeylElt(self.left[s][0])
    }

    pub fn length(&self, w: WeylElt) -> usize {
        self.elements[w.0].length
    }

    /// Reduced word, choosing the smallest left descent at each step.
    pub fn reduced_word(&self, w: WeylElt) -> &[usize] {
        &self.elements[w.0].word
    }

    pub fn y_matrix(&self, w: WeylElt) -> &[i64] {
        &self.elements[w.0].y_mat
    }

    pub fn x_matrix(&self, w: WeylElt) -> &[i64] {
        &self.elements[w.0].x_mat
    }

    /// Looks up the element acting on `Y` by the row-major matrix `m`.
    pub fn from_y_matrix(&self, m: &[i64]) -> Result<WeylElt, RootDatumError> {
        self.index
            .get(m)
            .map(|&i| WeylElt(i))
            .ok_or(RootDatumError::NotInGroup)
    }

    /// `s * w`.
    pub fn left_mul(&self, s: usize, w: WeylElt) -> WeylElt {
        WeylElt(self.left[s][w.0])
    }

    pub fn is_left_descent(&self, s: usize, w: WeylElt) -> bool {
        self.length(self.left_mul(s, w)) < self.length(w)
    }

    pub fn inverse(&self, w: WeylElt) -> WeylElt {
        WeylElt(self.inverse[w.0])
    }

    pub fn from_word(&self, word: &[usize]) -> WeylElt {
        word.iter()
            .rev()
            .fold(self.identity(), |acc, &s| self.left_mul(s, acc))
    }

    pub fn mul(&self, a: WeylElt, b: WeylElt) -> WeylElt {
        self.reduced_word(a)
            .iter()
            .rev()
            .fold(b, |acc, &s| self.left_mul(s, acc))
    }

    pub fn act_y(&self, w: WeylElt, y: &[i64]) -> Vec<i64> {
        mat_apply(self.y_matrix(w), y)
    }

    pub fn act_x(&self, w: WeylElt, x: &[i64]) -> Vec<i64> {
        mat_apply(self.x_matrix(w), x)
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.datum.roots.len()).filter(|&r| self.positive[r])
    }

    pub fn is_positive(&self, r: usize) -> bool {
        self.positive[r]
    }

    /// The reflection `s_alpha` for the root with index `r`.
    pub fn reflection(&self, r: usize) -> WeylElt {
        let n = self.datum.rank();
        let mut m = vec![0; n * n];
        for j in 0..n {
            let e: Vec<i64> = (0..n).map(|i| i64::from(i == j)).collect();
            let img = self.datum.reflect_y_by(r, &e);
            for i in 0..n {
                m[i * n + j] = img[i];
            }
        }
        self.from_y_matrix(&m).expect("root reflections lie in W_0")
    }

    pub fn longest(&self) -> WeylElt {
        WeylElt(self.elements.len() - 1)
    }

    /// Simple positions `i, j` with `w(alpha_i) = alpha_j` for some `w`.
    pub fn associate(&self, i: usize, j: usize) -> bool {
        let a = self.datum.simple_root(i).to_vec();
        let b = self.datum.simple_root(j);
        self.elements().any(|w| self.act_x(w, &a) == b)
    }

    /// Order of `s_i s_j`.
    pub fn coxeter_order(&self, i: usize, j: usize) -> usize {
        let st = self.mul(self.simple(i), self.simple(j));
        let mut w = st;
        let mut k = 1;
        while w != self.identity() {
            w = self.mul(w, st);
            k += 1;
        }
        k
    }

    /// Positive root `sum_i c_i alpha_i` of maximal height in a component.
    pub fn highest_root(&self, component: &[usize]) -> Option<usize> {
        self.positive_roots()
            .filter_map(|r| {
                let c = self.datum.simple_coordinates(&self.datum.roots[r])?;
                let inside = c
                    .iter()
                    .enumerate()
                    .all(|(i, v)| *v == 0 || component.contains(&i));
                inside.then(|| (c.iter().sum::<i64>(), r))
            })
            .max()
            .map(|(_, r)| r)
    }
}

/// Sum of the positive coroots; dominant for every simple root.
pub fn positive_coroot_sum(group: &WeylGroup) -> Vec<i64> {
    let n = group.datum.rank();
    let mut v = vec![0; n];
    for r in group.positive_roots() {
        for (a, b) in v.iter_mut().zip(&group.datum.coroots[r]) {
            *a += b;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> BasedRootDatum {
        BasedRootDatum {
            pairing: vec![vec![1]],
            roots: vec![vec![2], vec![-2]],
            coroots: vec![vec![1], vec![-1]],
            basis: vec![0],
        }
    }

    fn a2() -> BasedRootDatum {
        BasedRootDatum::from_cartan(&[vec![2, -1], vec![-1, 2]])
    }

    fn c2() -> BasedRootDatum {
        BasedRootDatum::from_cartan(&[vec![2, -2], vec![-1, 2]])
    }

    #[test]
    fn checks_pass_on_standard_data() {
        assert!(a1().check().all_passed());
        assert!(a2().check().all_passed());
        let c = c2();
        assert_eq!(c.roots.len(), 8);
        assert!(c.check().all_passed(), "{:?}", c.check());
    }

    #[test]
    fn normalization_failure_has_witness() {
        let bad = BasedRootDatum {
            coroots: vec![vec![1], vec![-1]],
            roots: vec![vec![1], vec![-1]],
            ..a1()
        };
        let rep = bad.check();
        let c = rep.get("pairing-normalization").unwrap();
        assert!(!c.passed);
        assert_eq!(c.witness.as_deref(), Some("[1]"));
    }

    #[test]
    fn reflections() {
        let d = a1();
        assert_eq!(d.reflect(&[2], &[1], Side::Y).unwrap(), vec![-1]);
        assert_eq!(d.reflect(&[2], &[0], Side::Y).unwrap(), vec![0]);
        assert_eq!(
            d.reflect(&[3], &[0], Side::Y),
            Err(RootDatumError::UnknownRoot(vec![3]))
        );
        let c = c2();
        let alpha = c.simple_root(0).to_vec();
        let beta = c.simple_root(1).to_vec();
        // <beta, alpha^v> = -2 by the Cartan matrix
        let expect: Vec<i64> = beta.iter().zip(&alpha).map(|(b, a)| b + 2 * a).collect();
        assert_eq!(c.reflect(&alpha, &beta, Side::X).unwrap(), expect);
    }

    /// Brute-force closure of generator matrices, independent of the BFS above.
    fn closure_size(d: &BasedRootDatum) -> usize {
        let g = WeylGroup::new(d).unwrap();
        let gens: Vec<Vec<i64>> = (0..d.basis.len())
            .map(|s| g.y_matrix(g.simple(s)).to_vec())
            .collect();
        let n = d.rank();
        let mut set = std::collections::BTreeSet::new();
        let id: Vec<i64> = (0..n * n).map(|k| i64::from(k % (n + 1) == 0)).collect();
        set.insert(id);
        loop {
            let cur: Vec<Vec<i64>> = set.iter().cloned().collect();
            let before = set.len();
            for a in &cur {
                for b in &gens {
                    set.insert(mat_compose(a, b, n));
                }
            }
            if set.len() == before {
                return set.len();
            }
        }
    }

    #[test]
    fn enumeration_sizes() {
        let g = WeylGroup::new(&a2()).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(closure_size(&a2()), 6);
        assert_eq!(g.length(g.longest()), 3);
        let g = WeylGroup::new(&c2()).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(closure_size(&c2()), 8);
        assert_eq!(g.length(g.longest()), 4);
        let g = WeylGroup::new(&BasedRootDatum::trivial(1)).unwrap();
        assert_eq!(g.order(), 1);
        assert!(matches!(
            WeylGroup::with_cap(&c2(), 5),
            Err(RootDatumError::Budget { cap: 5 })
        ));
    }

    #[test]
    fn reduced_words() {
        let g = WeylGroup::new(&a2()).unwrap();
        assert!(g.reduced_word(g.identity()).is_empty());
        assert_eq!(g.reduced_word(g.simple(1)), &[1]);
        let w0 = g.longest();
        let word = g.reduced_word(w0).to_vec();
        assert_eq!(word.len(), 3);
        // all length-3 words whose product is w0
        let mut hits = 0;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    if g.from_word(&[a, b, c]) == w0 {
                        hits += 1;
                    }
                }
            }
        }
        assert_eq!(hits, 2);
        assert_eq!(word, vec![0, 1, 0]);
    }

    #[test]
    fn group_properties() {
        for d in [a1(), a2(), c2()] {
            let g = WeylGroup::new(&d).unwrap();
            for w in g.elements() {
                for s in 0..d.basis.len() {
                    let l = g.length(g.left_mul(s, w)) as i64 - g.length(w) as i64;
                    assert!(l == 1 || l == -1);
                    let ws = g.mul(w, g.simple(s));
                    let l = g.length(ws) as i64 - g.length(w) as i64;
                    assert!(l == 1 || l == -1);
                }
                assert_eq!(g.mul(w, g.inverse(w)), g.identity());
                for r in 0..d.roots.len() {
                    let img = g.act_x(w, &d.roots[r]);
                    assert!(d.root_index(&img).is_some());
                }
            }
            for r in 0..d.roots.len() {
                let s = g.reflection(r);
                assert_eq!(g.mul(s, s), g.identity());
            }
        }
    }

    #[test]
    fn coxeter_data() {
        let g = WeylGroup::new(&c2()).unwrap();
        assert_eq!(g.coxeter_order(0, 1), 4);
        assert!(!g.associate(0, 1));
        let g = WeylGroup::new(&a2()).unwrap();
        assert_eq!(g.coxeter_order(0, 1), 3);
        assert!(g.associate(0, 1));
        let d = c2();
        let long = d.basis[1];
        assert!(d.pairs_evenly(long));
        assert!(!d.pairs_evenly(d.basis[0]));
        assert!(a1().pairs_evenly(0));
    }
}
