//! Seeded samplers for randomized checks. The same seed always yields the
//! same elements, on every platform and in both execution modes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bernstein::{AffineHecke, BernsteinElt};
use crate::iwahori::HeckeElt;
use crate::lincomb::LinComb;
use crate::scalar::{rat, Scalar};

/// Bounds on sampled elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    /// Upper bound on the number of terms.
    pub terms: usize,
    /// Bound on each coordinate of a `theta` exponent.
    pub theta_bound: i64,
    /// Bound on the `t`-degree of each coefficient.
    pub degree: i32,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            terms: 6,
            theta_bound: 2,
            degree: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A nonzero `c t^k` with `|c| <= 3`, `|k| <= degree`.
    pub fn monomial(&mut self, degree: i32) -> Scalar {
        let mut c = 0;
        while c == 0 {
            c = self.rng.gen_range(-3i64..=3);
        }
        Scalar::monomial(rat(c), self.rng.gen_range(-degree..=degree))
    }

    /// Sum of one or two monomials.
    pub fn scalar(&mut self, degree: i32) -> Scalar {
        let mut s = self.monomial(degree);
        if self.rng.gen_bool(0.5) {
            s = s + self.monomial(degree);
        }
        s
    }

    /// A nonzero element with between 1 and `shape.terms` terms.
    pub fn bernstein(&mut self, alg: &AffineHecke, shape: Shape) -> BernsteinElt {
        let elts: Vec<_> = alg.weyl().elements().collect();
        loop {
            let n = self.rng.gen_range(1..=shape.terms.max(1));
            let mut x = LinComb::zero();
            for _ in 0..n {
                let w = *elts.choose(&mut self.rng).expect("groups are nonempty");
                let y: Vec<i64> = (0..alg.rank_y())
                    .map(|_| self.rng.gen_range(-shape.theta_bound..=shape.theta_bound))
                    .collect();
                x.add_term((w, y), self.monomial(shape.degree));
            }
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// A nonzero combination of basis elements drawn from `pool`.
    pub fn combination<K: Ord + Clone>(&mut self, pool: &[K], shape: Shape) -> HeckeElt<K> {
        loop {
            let n = self.rng.gen_range(1..=shape.terms.max(1));
            let mut x = LinComb::zero();
            for _ in 0..n {
                let k = pool.choose(&mut self.rng).expect("pool is nonempty").clone();
                x.add_term(k, self.monomial(shape.degree));
            }
            if !x.is_zero() {
                return x;
            }
        }
    }
}
