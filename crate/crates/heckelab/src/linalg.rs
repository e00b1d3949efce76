//! Small dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::scalar::{rat, Rational};

pub type Vector = Vec<Rational>;
pub type Matrix = Vec<Vec<Rational>>;

pub fn to_rat(v: &[i64]) -> Vector {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn zeros(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], c: &Rational) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

/// `v^T m`, i.e. the row vector `v` times `m`.
pub fn vec_mat(v: &[Rational], m: &Matrix) -> Vector {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| {
            v.iter()
                .zip(m)
                .fold(Rational::zero(), |acc, (x, row)| acc + x * &row[j])
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Rows linearly independent.
pub fn independent(rows: &[Vector]) -> bool {
    rank(&rows.to_vec()) == rows.len()
}

/// Some solution of `a x = b`, free variables set to zero.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vector> {
    let cols = a.first().map_or(0, Vec::len);
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = zeros(cols);
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = red[i][cols].clone();
    }
    Some(x)
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace(a: &Matrix, cols: usize) -> Vec<Vector> {
    if a.is_empty() {
        return identity(cols);
    }
    let (red, pivots) = rref(a);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = zeros(cols);
            v[free] = rat(1);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -red[i][free].clone();
            }
            v
        })
        .collect()
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(a: &Matrix) -> Rational {
    let mut m = a.clone();
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            let pivot_row = m[c].clone();
            for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Orthonormal-free Gram-Schmidt: an orthogonal basis of the span of `vs`
/// with respect to the form `g`.
pub fn orthogonal_basis(vs: &[Vector], g: &Matrix) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let uu = dot(u, &mat_vec(g, u));
            let c = dot(&w, &mat_vec(g, u)) / uu;
            w = sub(&w, &scale(u, &c));
        }
        if !is_zero(&w) {
            out.push(w);
        }
    }
    out
}

/// True when `g` is symmetric positive definite (Sylvester's criterion).
pub fn positive_definite(g: &Matrix) -> bool {
    let n = g.len();
    if g.iter().any(|r| r.len() != n) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if g[i][j] != g[j][i] {
                return false;
            }
        }
    }
    (1..=n).all(|k| {
        let minor: Matrix = g[..k].iter().map(|r| r[..k].to_vec()).collect();
        determinant(&minor) > Rational::zero()
    })
}
