//! Common interface for the finite Weyl groups and affine Weyl groups used
//! as index sets of Iwahori-Hecke algebras.

use std::fmt::Debug;
use std::hash::Hash;

use crate::affine::{AffineCoxeter, AffineMap};
use crate::rootdatum::{WeylElt, WeylGroup};

pub trait Coxeter: Sync + Send {
    type Elt: Clone + Ord + Hash + Debug + Send + Sync;

    fn rank(&self) -> usize;
    fn identity(&self) -> Self::Elt;
    /// `s * w`.
    fn left_mul(&self, s: usize, w: &Self::Elt) -> Self::Elt;
    fn is_left_descent(&self, s: usize, w: &Self::Elt) -> bool;
    fn length(&self, w: &Self::Elt) -> usize;
    /// Reduced word using the smallest left descent at each step.
    fn reduced_word(&self, w: &Self::Elt) -> Vec<usize>;
    /// Order of `s_i s_j`, `None` when infinite.
    fn coxeter_order(&self, i: usize, j: usize) -> Option<usize>;
    /// Name of the `s`-th generator in expressions, e.g. `s1`.
    fn generator_name(&self, s: usize) -> String;

    fn simple(&self, s: usize) -> Self::Elt {
        self.left_mul(s, &self.identity())
    }

    fn from_word(&self, word: &[usize]) -> Self::Elt {
        word.iter()
            .rev()
            .fold(self.identity(), |acc, &s| self.left_mul(s, &acc))
    }

    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        self.reduced_word(a)
            .iter()
            .rev()
            .fold(b.clone(), |acc, &s| self.left_mul(s, &acc))
    }

    fn inverse(&self, w: &Self::Elt) -> Self::Elt {
        let mut word = self.reduced_word(w);
        word.reverse();
        self.from_word(&word)
    }

    /// `s1s0s1`, or `e` for the identity.
    fn render(&self, w: &Self::Elt) -> String {
        let word = self.reduced_word(w);
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter().map(|&s| self.generator_name(s)).collect()
        }
    }

    /// Sort key: length, then reduced word.
    fn order_key(&self, w: &Self::Elt) -> (usize, Vec<usize>) {
        let word = self.reduced_word(w);
        (word.len(), word)
    }

    /// Parses `e`, `s1s0` or `s1 s0` into an element.
    fn parse_word(&self, body: &str) -> Option<Self::Elt> {
        let body = body.trim();
        if body == "e" {
            return Some(self.identity());
        }
        let mut word = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            rest = rest.trim_start_matches([' ', ',', '*']);
            if rest.is_empty() {
                break;
            }
            let tail = rest.strip_prefix('s')?;
            let digits = tail.len() - tail.trim_start_matches(|c: char| c.is_ascii_digit()).len();
            if digits == 0 {
                return None;
            }
            let name = format!("s{}", &tail[..digits]);
            word.push((0..self.rank()).find(|&s| self.generator_name(s) == name)?);
            rest = &tail[digits..];
        }
        Some(self.from_word(&word))
    }

    /// Classes of simple reflections under conjugation: `s_i ~ s_j` exactly
    /// when they are joined by a path of odd Coxeter orders.
    fn conjugacy_classes(&self) -> Vec<usize> {
        let n = self.rank();
        let mut class: Vec<usize> = (0..n).collect();
        fn find(c: &mut [usize], i: usize) -> usize {
            if c[i] != i {
                let r = find(c, c[i]);
                c[i] = r;
            }
            c[i]
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.coxeter_order(i, j).is_some_and(|m| m % 2 == 1) {
                    let (a, b) = (find(&mut class, i), find(&mut class, j));
                    class[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|i| find(&mut class, i)).collect()
    }

    /// A simple reflection conjugate to the reflection `r`.
    fn conjugate_simple(&self, r: &Self::Elt) -> Option<usize> {
        let mut cur = r.clone();
        loop {
            let word = self.reduced_word(&cur);
            if word.len() == 1 {
                return Some(word[0]);
            }
            if word.len() % 2 == 0 {
                return None;
            }
            let len = word.len();
            let next = (0..self.rank()).find_map(|s| {
                let c = self.left_mul(s, &self.mul(&cur, &self.simple(s)));
                (self.length(&c) + 2 == len).then_some(c)
            })?;
            cur = next;
        }
    }
}

impl Coxeter for WeylGroup {
    type Elt = WeylElt;

    fn rank(&self) -> usize {
        self.datum().basis.len()
    }

    fn identity(&self) -> WeylElt {
        WeylGroup::identity(self)
    }

    fn left_mul(&self, s: usize, w: &WeylElt) -> WeylElt {
        WeylGroup::left_mul(self, s, *w)
    }

    fn is_left_descent(&self, s: usize, w: &WeylElt) -> bool {
        WeylGroup::is_left_descent(self, s, *w)
    }

    fn length(&self, w: &WeylElt) -> usize {
        WeylGroup::length(self, *w)
    }

    fn reduced_word(&self, w: &WeylElt) -> Vec<usize> {
        WeylGroup::reduced_word(self, *w).to_vec()
    }

    fn coxeter_order(&self, i: usize, j: usize) -> Option<usize> {
        Some(WeylGroup::coxeter_order(self, i, j))
    }

    fn generator_name(&self, s: usize) -> String {
        format!("s{}", s + 1)
    }

    fn simple(&self, s: usize) -> WeylElt {
        WeylGroup::simple(self, s)
    }

    fn mul(&self, a: &WeylElt, b: &WeylElt) -> WeylElt {
        WeylGroup::mul(self, *a, *b)
    }

    fn inverse(&self, w: &WeylElt) -> WeylElt {
        WeylGroup::inverse(self, *w)
    }
}

/// Generators of an affine Weyl group with chosen names.
#[derive(Debug, Clone)]
pub struct NamedAffine {
    pub group: AffineCoxeter,
    pub names: Vec<String>,
}

impl NamedAffine {
    /// Names `s0, s1, ...` in basis order.
    pub fn new(group: AffineCoxeter) -> Self {
        let names = (0..group.rank()).map(|i| format!("s{i}")).collect();
        NamedAffine { group, names }
    }

    pub fn with_names(group: AffineCoxeter, names: Vec<String>) -> Self {
        NamedAffine { group, names }
    }
}

impl Coxeter for NamedAffine {
    type Elt = AffineMap;

    fn rank(&self) -> usize {
        self.group.rank()
    }

    fn identity(&self) -> AffineMap {
        self.group.identity()
    }

    fn left_mul(&self, s: usize, w: &AffineMap) -> AffineMap {
        self.group.left_mul(s, w)
    }

    fn is_left_descent(&self, s: usize, w: &AffineMap) -> bool {
        self.group.is_left_descent(s, w)
    }

    fn length(&self, w: &AffineMap) -> usize {
        self.group.length(w)
    }

    fn reduced_word(&self, w: &AffineMap) -> Vec<usize> {
        self.group.reduced_word(w)
    }

    fn coxeter_order(&self, i: usize, j: usize) -> Option<usize> {
        self.group.coxeter_order(i, j)
    }

    fn generator_name(&self, s: usize) -> String {
        self.names[s].clone()
    }

    fn mul(&self, a: &AffineMap, b: &AffineMap) -> AffineMap {
        a.compose(b)
    }

    fn inverse(&self, w: &AffineMap) -> AffineMap {
        w.inverse()
    }
}
