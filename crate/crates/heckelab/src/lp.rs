//! Exact two-phase simplex over the rationals (Bland's rule).
//!
//! Used for chamber-wall redundancy and relative-interior points, where the
//! problems have a handful of variables and floating point would be wrong.

use num_traits::{Signed, Zero};

use crate::linalg::{dot, Vector};
use crate::scalar::{rat, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Optimal { x: Vector, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                *x -= &f * y;
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj` over columns flagged in `allowed`; false if unbounded.
    fn run(&mut self, obj: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..obj.len()).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let reduced = self
                    .basis
                    .iter()
                    .enumerate()
                    .fold(obj[j].clone(), |acc, (i, &b)| acc - &obj[b] * &self.rows[i][j]);
                reduced.is_positive()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c);
        }
    }
}

/// Maximizes `c . x` over free `x` subject to `a . x <= b` rows and
/// `e . x = f` rows.
pub fn maximize(c: &[Rational], le: &[(Vector, Rational)], eq: &[(Vector, Rational)]) -> LpResult {
    let n = c.len();
    let m_le = le.len();
    let m = m_le + eq.len();
    let art0 = 2 * n + m_le;
    let total = art0 + m;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (a, b)) in le
        .iter()
        .map(|(a, b)| (a, b))
        .chain(eq.iter().map(|(a, b)| (a, b)))
        .enumerate()
    {
        let mut row = vec![Rational::zero(); total];
        for j in 0..n {
            row[j] = a[j].clone();
            row[n + j] = -a[j].clone();
        }
        if i < m_le {
            row[2 * n + i] = rat(1);
        }
        let mut b = b.clone();
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
        }
        row[art0 + i] = rat(1);
        rows.push(row);
        rhs.push(b);
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: (art0..total).collect(),
    };

    let mut phase1 = vec![Rational::zero(); total];
    for x in phase1[art0..].iter_mut() {
        *x = rat(-1);
    }
    let all = vec![true; total];
    tab.run(&phase1, &all);
    let infeasibility = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(b, _)| **b >= art0)
        .fold(Rational::zero(), |acc, (_, v)| acc + v);
    if infeasibility.is_positive() {
        return LpResult::Infeasible;
    }
    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= art0 {
            match (0..art0).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.rhs.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut obj = vec![Rational::zero(); total];
    for j in 0..n {
        obj[j] = c[j].clone();
        obj[n + j] = -c[j].clone();
    }
    let allowed: Vec<bool> = (0..total).map(|j| j < art0).collect();
    if !tab.run(&obj, &allowed) {
        return LpResult::Unbounded;
    }
    let mut z = vec![Rational::zero(); total];
    for (i, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.rhs[i].clone();
    }
    let x: Vector = (0..n).map(|j| &z[j] - &z[n + j]).collect();
    let value = dot(c, &x);
    LpResult::Optimal { x, value }
}

/// A point with `g . x + c > 0` for every strict row and `h . x + d = 0`
/// for every equality row, or `None` if the open region is empty.
pub fn strict_point(
    dim: usize,
    strict: &[(Vector, Rational)],
    equal: &[(Vector, Rational)],
) -> Option<Vector> {
    // variables (x, delta): maximize delta with g.x + c >= delta, delta <= 1
    let mut le: Vec<(Vector, Rational)> = strict
        .iter()
        .map(|(g, c)| {
            let mut row: Vector = g.iter().map(|v| -v.clone()).collect();
            row.push(rat(1));
            (row, c.clone())
        })
        .collect();
    let mut cap = vec![Rational::zero(); dim];
    cap.push(rat(1));
    le.push((cap, rat(1)));
    let eq: Vec<(Vector, Rational)> = equal
        .iter()
        .map(|(h, d)| {
            let mut row = h.clone();
            row.push(Rational::zero());
            (row, -d.clone())
        })
        .collect();
    let mut obj = vec![Rational::zero(); dim];
    obj.push(rat(1));
    match maximize(&obj, &le, &eq) {
        LpResult::Optimal { x, value } if value.is_positive() => Some(x[..dim].to_vec()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_rat;
    use crate::scalar::ratio;

    #[test]
    fn small_maximization() {
        // max x + y with x <= 2, y <= 3, x + y <= 4
        let res = maximize(
            &to_rat(&[1, 1]),
            &[
                (to_rat(&[1, 0]), rat(2)),
                (to_rat(&[0, 1]), rat(3)),
                (to_rat(&[1, 1]), rat(4)),
            ],
            &[],
        );
        match res {
            LpResult::Optimal { value, .. } => assert_eq!(value, rat(4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let res = maximize(
            &to_rat(&[1]),
            &[(to_rat(&[1]), rat(1)), (to_rat(&[-1]), rat(-2))],
            &[],
        );
        assert_eq!(res, LpResult::Infeasible);
        assert_eq!(maximize(&to_rat(&[1]), &[], &[]), LpResult::Unbounded);
    }

    #[test]
    fn strict_points() {
        // 0 < x < 1/2 on the line y = x
        let p = strict_point(
            2,
            &[(to_rat(&[1, 0]), rat(0)), (to_rat(&[-1, 0]), ratio(1, 2))],
            &[(to_rat(&[1, -1]), rat(0))],
        )
        .unwrap();
        assert!(p[0] > rat(0) && p[0] < ratio(1, 2) && p[0] == p[1]);
        // x > 0 and -x > 0 is empty
        assert!(strict_point(1, &[(to_rat(&[1]), rat(0)), (to_rat(&[-1]), rat(0))], &[]).is_none());
    }
}
