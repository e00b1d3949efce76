//! Affine root systems presented by finitely many arithmetic families, their
//! chambers and bases, special points, and the affine Weyl group acting by
//! rational affine maps.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Matrix, Vector};
use crate::lp::{self, LpResult};
use crate::par::Exec;
use crate::report::{Check, ValidationReport};
use crate::rootdatum::{BasedRootDatum, RootDatumError, WeylElt, WeylGroup};
use crate::scalar::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("verification window must be at least 2, got {0}")]
    BadWindow(i64),
    #[error("point lies on the hyperplane of {0}")]
    OnWall(String),
    #[error("gradients are linearly dependent")]
    DependentGradients,
    #[error("point is not special: no root through it with gradient {0}")]
    NotSpecial(String),
    #[error("point is not in the closed chamber: {0} is negative there")]
    NotInClosure(String),
    #[error("transformation is not in the affine Weyl group")]
    NotInGroup,
    #[error("no basis contains the given roots; missing {missing:?}")]
    NoExtension { missing: Vec<String> },
    #[error("system is not reduced: {0}")]
    NonReduced(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
}

/// `floor(a)` for a rational.
pub(crate) fn floor(a: &Rational) -> Rational {
    a.floor()
}

/// `x mod p` in `[0, p)` for rationals.
fn rem_euclid(x: &Rational, p: &Rational) -> Rational {
    x - p * floor(&(x / p))
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// The affine function `x -> grad . x + c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffineFn {
    #[serde(serialize_with = "ser_vec")]
    pub grad: Vector,
    #[serde(serialize_with = "ser_rat")]
    pub c: Rational,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

impl AffineFn {
    pub fn new(grad: Vector, c: Rational) -> Self {
        AffineFn { grad, c }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        linalg::dot(&self.grad, x) + &self.c
    }

    pub fn neg(&self) -> AffineFn {
        AffineFn::new(linalg::scale(&self.grad, &rat(-1)), -self.c.clone())
    }

    pub fn plus_const(&self, l: &Rational) -> AffineFn {
        AffineFn::new(self.grad.clone(), &self.c + l)
    }

    pub fn add(&self, o: &AffineFn) -> AffineFn {
        AffineFn::new(linalg::add(&self.grad, &o.grad), &self.c + &o.c)
    }

    pub fn scale(&self, k: &Rational) -> AffineFn {
        AffineFn::new(linalg::scale(&self.grad, k), &self.c * k)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && linalg::is_zero(&self.grad)
    }
}

impl fmt::Display for AffineFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.x + {}", fmt_vec(&self.grad), self.c)
    }
}

/// `x -> lin . x + shift`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    pub lin: Matrix,
    pub shift: Vector,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap {
            lin: linalg::identity(n),
            shift: linalg::zeros(n),
        }
    }

    pub fn translation(v: Vector) -> Self {
        AffineMap {
            lin: linalg::identity(v.len()),
            shift: v,
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn apply(&self, x: &[Rational]) -> Vector {
        linalg::add(&linalg::mat_vec(&self.lin, x), &self.shift)
    }

    /// `self o other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            lin: linalg::mat_mul(&self.lin, &other.lin),
            shift: self.apply(&other.shift),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = linalg::inverse(&self.lin).expect("affine Weyl elements are invertible");
        let shift = linalg::scale(&linalg::mat_vec(&inv, &self.shift), &rat(-1));
        AffineMap { lin: inv, shift }
    }

    /// `(w f)(x) = f(w^{-1} x)`.
    pub fn act_fn(&self, f: &AffineFn) -> AffineFn {
        let inv = self.inverse();
        let grad = linalg::vec_mat(&f.grad, &inv.lin);
        let c = linalg::dot(&f.grad, &inv.shift) + &f.c;
        AffineFn::new(grad, c)
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineMap::identity(self.dim())
    }

    pub fn is_translation(&self) -> bool {
        self.lin == linalg::identity(self.dim())
    }
}

/// The roots `gradient . x + offset + period * m` for all integers `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RootFamily {
    #[serde(serialize_with = "ser_vec")]
    pub gradient: Vector,
    #[serde(serialize_with = "ser_rat")]
    pub offset: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub period: Rational,
}

impl RootFamily {
    pub fn new(gradient: Vector, offset: Rational, period: Rational) -> Self {
        let offset = rem_euclid(&offset, &period);
        RootFamily {
            gradient,
            offset,
            period,
        }
    }

    pub fn root(&self, m: i64) -> AffineFn {
        AffineFn::new(self.gradient.clone(), &self.offset + &self.period * rat(m))
    }

    pub fn contains(&self, f: &AffineFn) -> bool {
        f.grad == self.gradient && ((&f.c - &self.offset) / &self.period).is_integer()
    }

    /// Index `m` of the root vanishing at `x`, if any.
    pub fn vanishing_at(&self, x: &[Rational]) -> Option<AffineFn> {
        let v = linalg::dot(&self.gradient, x) + &self.offset;
        let m = -v / &self.period;
        m.is_integer()
            .then(|| AffineFn::new(self.gradient.clone(), &self.offset + &self.period * m))
    }

    /// Root of the family with the least positive value at `x`.
    fn least_positive_at(&self, x: &[Rational]) -> Result<AffineFn, AffineFn> {
        let v = linalg::dot(&self.gradient, x) + &self.offset;
        let t = -v / &self.period;
        if t.is_integer() {
            return Err(AffineFn::new(
                self.gradient.clone(),
                &self.offset + &self.period * t,
            ));
        }
        let m = floor(&t) + rat(1);
        Ok(AffineFn::new(
            self.gradient.clone(),
            &self.offset + &self.period * m,
        ))
    }

    /// Least nonzero absolute value of a root of the family at `x`.
    fn least_nonzero_at(&self, x: &[Rational]) -> Rational {
        let v = linalg::dot(&self.gradient, x) + &self.offset;
        let r = rem_euclid(&v, &self.period);
        if r.is_zero() {
            self.period.clone()
        } else {
            let other = &self.period - &r;
            r.min(other)
        }
    }
}

/// An affine root system on `E = Q^dim`, with a `W_0`-invariant inner
/// product on the translations `V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineRootSystem {
    pub dim: usize,
    pub families: Vec<RootFamily>,
    #[serde(skip)]
    pub inner: Matrix,
    #[serde(skip)]
    inner_inv: Matrix,
}

/// Chamber walls oriented positively, with a point of the open chamber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineBasis {
    pub roots: Vec<AffineFn>,
    #[serde(serialize_with = "ser_vec")]
    pub witness: Vector,
}

impl AffineBasis {
    pub fn position(&self, f: &AffineFn) -> Option<usize> {
        self.roots.iter().position(|r| r == f)
    }

    /// Canonical key for comparing bases as sets.
    pub fn key(&self) -> BTreeSet<AffineFn> {
        self.roots.iter().cloned().collect()
    }
}

impl AffineRootSystem {
    /// Builds a system; the inner product defaults to the identity.
    pub fn new(dim: usize, families: Vec<RootFamily>, inner: Option<Matrix>) -> Result<Self, AffineError> {
        let inner = inner.unwrap_or_else(|| linalg::identity(dim));
        if inner.len() != dim || !linalg::positive_definite(&inner) {
            return Err(AffineError::BadInput(
                "inner product must be a symmetric positive definite dim x dim matrix".into(),
            ));
        }
        for f in &families {
            if f.gradient.len() != dim || linalg::is_zero(&f.gradient) || !f.period.is_positive() {
                return Err(AffineError::BadInput(format!(
                    "bad family gradient {} period {}",
                    fmt_vec(&f.gradient),
                    f.period
                )));
            }
        }
        let inner_inv = if dim == 0 {
            vec![]
        } else {
            linalg::inverse(&inner).expect("definite forms are invertible")
        };
        Ok(AffineRootSystem {
            dim,
            families,
            inner,
            inner_inv,
        })
    }

    /// Families `+-(e_i - e_j) + Z` of type `A_{n}` tilde in the plane
    /// `sum x_i = 0`, in coordinates `(x_1, ..., x_n)` with `x_{n+1} = -sum`.
    pub fn from_finite(datum_roots: &[Vector], inner: Option<Matrix>) -> Result<Self, AffineError> {
        let dim = datum_roots.first().map_or(0, Vec::len);
        let fams = datum_roots
            .iter()
            .map(|g| RootFamily::new(g.clone(), rat(0), rat(1)))
            .collect();
        Self::new(dim, fams, inner)
    }

    /// `(Da)^v = 2 G^{-1} g / (g^T G^{-1} g)`.
    pub fn coroot_vector(&self, grad: &[Rational]) -> Vector {
        let gi = linalg::mat_vec(&self.inner_inv, grad);
        let norm = linalg::dot(grad, &gi);
        linalg::scale(&gi, &(rat(2) / norm))
    }

    /// Dual inner product of two gradients.
    pub fn dual_inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        linalg::dot(a, &linalg::mat_vec(&self.inner_inv, b))
    }

    /// `s_a(x) = x - a(x) (Da)^v`.
    pub fn reflection(&self, a: &AffineFn) -> AffineMap {
        let cv = self.coroot_vector(&a.grad);
        let mut lin = linalg::identity(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                lin[i][j] -= &cv[i] * &a.grad[j];
            }
        }
        AffineMap {
            lin,
            shift: linalg::scale(&cv, &-a.c.clone()),
        }
    }

    /// `s_a(f) = f - <Df, (Da)^v> a`.
    pub fn reflect_fn(&self, a: &AffineFn, f: &AffineFn) -> AffineFn {
        let k = linalg::dot(&f.grad, &self.coroot_vector(&a.grad));
        f.add(&a.scale(&-k))
    }

    pub fn family_of(&self, f: &AffineFn) -> Option<usize> {
        self.families.iter().position(|fam| fam.contains(f))
    }

    pub fn contains(&self, f: &AffineFn) -> bool {
        self.family_of(f).is_some()
    }

    /// All roots whose constant term lies in `[-window, window]`.
    pub fn roots_in_window(&self, window: i64) -> Vec<AffineFn> {
        let w = rat(window);
        let mut out = Vec::new();
        for fam in &self.families {
            let lo = ((-&w - &fam.offset) / &fam.period).ceil();
            let hi = ((&w - &fam.offset) / &fam.period).floor();
            let (Some(lo), Some(hi)) = (lo.to_integer().to_i64(), hi.to_integer().to_i64()) else {
                continue;
            };
            for m in lo..=hi {
                out.push(fam.root(m));
            }
        }
        out
    }

    /// Distinct gradients.
    pub fn gradients(&self) -> Vec<Vector> {
        let set: BTreeSet<Vector> = self.families.iter().map(|f| f.gradient.clone()).collect();
        set.into_iter().collect()
    }

    /// Smallest positive `l` with `a + l` a root.
    pub fn period_of(&self, a: &AffineFn) -> Rational {
        self.families
            .iter()
            .filter(|f| f.gradient == a.grad)
            .map(|f| {
                let r = rem_euclid(&(&f.offset - &a.c), &f.period);
                if r.is_zero() {
                    f.period.clone()
                } else {
                    r
                }
            })
            .min()
            .expect("root belongs to some family")
    }

    /// Witness of a root `a` with `lambda * a` a root for `lambda != +-1`.
    pub fn non_reduced_witness(&self) -> Option<String> {
        for f1 in &self.families {
            for f2 in &self.families {
                let Some(lambda) = proportionality(&f1.gradient, &f2.gradient) else {
                    continue;
                };
                if lambda.abs().is_one() {
                    continue;
                }
                // lambda (o1 + p1 m) = o2 + p2 n for integers m, n
                if let Some(m) = solve_two_progressions(
                    &(&lambda * &f1.offset),
                    &(&lambda * &f1.period),
                    &f2.offset,
                    &f2.period,
                ) {
                    let a = f1.root(m);
                    return Some(format!("{a} and {} times it", lambda));
                }
            }
        }
        None
    }

    /// Reflection-closure over all pairs in the window.
    fn closure_witness(&self, window: i64, exec: Exec) -> Option<String> {
        let roots = self.roots_in_window(window);
        let hits = exec.map(&roots, |a| {
            roots.iter().find_map(|b| {
                let img = self.reflect_fn(a, b);
                (!self.contains(&img)).then(|| format!("s_[{a}]([{b}]) = [{img}]"))
            })
        });
        hits.into_iter().flatten().next()
    }

    /// Checks the axioms over roots with constant term in `[-window, window]`.
    pub fn verify(&self, window: i64, exec: Exec) -> Result<ValidationReport, AffineError> {
        if window < 2 {
            return Err(AffineError::BadWindow(window));
        }
        let mut rep = ValidationReport::default();
        rep.push(Check::pass("inner-product-definite"));
        let grads = self.gradients();
        let mut inv = None;
        'inv: for g in &grads {
            let s = self.reflection(&AffineFn::new(g.clone(), rat(0)));
            let lhs = linalg::mat_mul(&linalg::transpose(&s.lin), &linalg::mat_mul(&self.inner, &s.lin));
            if lhs != self.inner {
                inv = Some(format!("reflection in {}", fmt_vec(g)));
                break 'inv;
            }
        }
        rep.push(Check::from_witness("inner-product-invariant", inv));
        let mut grad_witness = None;
        'grad: for g in &grads {
            let cv = self.coroot_vector(g);
            for h in &grads {
                let k = linalg::dot(h, &cv);
                if !k.is_integer() {
                    grad_witness = Some(format!("<{}, {}^v> = {k}", fmt_vec(h), fmt_vec(g)));
                    break 'grad;
                }
                let img = linalg::sub(h, &linalg::scale(g, &k));
                if !grads.contains(&img) {
                    grad_witness = Some(format!("s_{}({}) missing", fmt_vec(g), fmt_vec(h)));
                    break 'grad;
                }
            }
        }
        rep.push(Check::from_witness("gradient-root-system", grad_witness));
        rep.push(Check::from_witness(
            "reflection-closure",
            self.closure_witness(window, exec),
        ));
        rep.push(Check::from_witness(
            "period-lattice",
            self.period_lattice_witness(window),
        ));
        let mut overlap = None;
        for (i, f1) in self.families.iter().enumerate() {
            for f2 in &self.families[i + 1..] {
                if f1.gradient == f2.gradient
                    && solve_two_progressions(&f1.offset, &f1.period, &f2.offset, &f2.period).is_some()
                {
                    overlap = Some(format!("families sharing {}", f1.root(0)));
                }
            }
        }
        rep.push(Check::from_witness("families-disjoint", overlap));
        Ok(rep)
    }

    fn period_lattice_witness(&self, window: i64) -> Option<String> {
        let w = rat(window);
        for a in self.roots_in_window(window) {
            let k = self.period_of(&a);
            for f in self.families.iter().filter(|f| f.gradient == a.grad) {
                // shifts l = f.offset - a.c + f.period * m within the window
                let base = &f.offset - &a.c;
                let lo = ((-&w - &base) / &f.period).ceil();
                let hi = ((&w - &base) / &f.period).floor();
                let mut m = lo;
                while m <= hi {
                    let l = &base + &f.period * &m;
                    if !(&l / &k).is_integer() {
                        return Some(format!("[{a}] + {l} is a root but k = {k}"));
                    }
                    m += rat(1);
                }
            }
            let mut j = -(&w / &k).floor();
            while &j * &k <= w {
                let l = &j * &k;
                if !self.contains(&a.plus_const(&l)) {
                    return Some(format!("[{a}] + {l} is not a root but k = {k}"));
                }
                j += rat(1);
            }
        }
        None
    }

    /// Walls of the chamber containing `x`, oriented positively at `x`.
    pub fn basis_from_point(&self, x: &[Rational]) -> Result<AffineBasis, AffineError> {
        let mut cands: Vec<AffineFn> = Vec::new();
        for fam in &self.families {
            match fam.least_positive_at(x) {
                Ok(a) => cands.push(a),
                Err(a) => return Err(AffineError::OnWall(a.to_string())),
            }
        }
        // one candidate per hyperplane direction: the closest, then indivisible
        let mut best: Vec<(AffineFn, Rational)> = Vec::new();
        for a in cands {
            let unit = normalize_direction(&a.grad);
            let scale = (&a.grad.iter().find(|v| !v.is_zero()).cloned().unwrap() / &unit.1).abs();
            let dist = a.eval(x) / &scale;
            match best
                .iter_mut()
                .find(|(b, _)| normalize_direction(&b.grad).0 == unit.0)
            {
                None => best.push((a, dist)),
                Some(slot) => {
                    let slot_scale = &slot.0.grad.iter().find(|v| !v.is_zero()).cloned().unwrap() / &unit.1;
                    if dist < slot.1 || (dist == slot.1 && scale.abs() < slot_scale.abs()) {
                        *slot = (a, dist);
                    }
                }
            }
        }
        let cands: Vec<AffineFn> = best.into_iter().map(|(a, _)| a).collect();
        let mut walls: Vec<AffineFn> = Vec::new();
        for (j, a) in cands.iter().enumerate() {
            // a is a wall iff the other constraints allow a(y) < 0
            let mut le: Vec<(Vector, Rational)> = cands
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, b)| (linalg::scale(&b.grad, &rat(-1)), b.c.clone()))
                .collect();
            le.push((linalg::scale(&a.grad, &rat(-1)), &a.c + rat(1)));
            let obj = linalg::scale(&a.grad, &rat(-1));
            let wall = match lp::maximize(&obj, &le, &[]) {
                LpResult::Optimal { value, .. } => value > a.c,
                LpResult::Unbounded => true,
                LpResult::Infeasible => false,
            };
            if wall {
                walls.push(a.clone());
            }
        }
        walls.sort_by(|a, b| b.c.cmp(&a.c).then_with(|| b.grad.cmp(&a.grad)));
        Ok(AffineBasis {
            roots: walls,
            witness: x.to_vec(),
        })
    }

    /// Whether `B` is exactly the wall set of the chamber of its witness.
    pub fn is_basis(&self, b: &AffineBasis) -> bool {
        match self.basis_from_point(&b.witness) {
            Ok(found) => found.key() == b.key() && b.roots.iter().all(|r| self.contains(r)),
            Err(_) => false,
        }
    }

    /// Subsystem of roots with gradient in the span of `DJ`, on `E_J`.
    pub fn restrict_to(&self, j: &[AffineFn]) -> Result<Restriction, AffineError> {
        let grads: Vec<Vector> = j.iter().map(|a| a.grad.clone()).collect();
        if !grads.is_empty() && !linalg::independent(&grads) {
            return Err(AffineError::DependentGradients);
        }
        let k = grads.len();
        let gram: Matrix = grads
            .iter()
            .map(|a| grads.iter().map(|b| self.dual_inner(a, b)).collect())
            .collect();
        let inner = if k == 0 {
            vec![]
        } else {
            linalg::inverse(&gram).expect("independent gradients have invertible Gram matrix")
        };
        let span_t = linalg::transpose(&grads);
        let mut families = Vec::new();
        for fam in &self.families {
            if k == 0 {
                break;
            }
            if let Some(coeffs) = linalg::solve(&span_t, &fam.gradient) {
                if linalg::mat_vec(&span_t, &coeffs) == fam.gradient {
                    families.push(RootFamily::new(coeffs, fam.offset.clone(), fam.period.clone()));
                }
            }
        }
        let system = AffineRootSystem::new(k, families, Some(inner))?;
        Ok(Restriction {
            system,
            gradients: grads,
        })
    }

    /// A basis of the restriction to `J` whose walls include `J`.
    pub fn basis_containing(
        &self,
        b: &AffineBasis,
        j: &[AffineFn],
    ) -> Result<(Restriction, AffineBasis), AffineError> {
        if let Some(bad) = j.iter().find(|a| b.position(a).is_none()) {
            return Err(AffineError::BadInput(format!("{bad} is not in the basis")));
        }
        let res = self.restrict_to(j)?;
        let k = j.len();
        // x_J: b(x) = 0 for b in J, i.e. u_b = -c_b
        let x_j: Vector = j.iter().map(|a| -a.c.clone()).collect();
        let d: Vector = vec![rat(1); k];
        let eps = perturbation(&res.system, &x_j, &d);
        let y = linalg::add(&x_j, &linalg::scale(&d, &eps));
        let basis = res.system.basis_from_point(&y)?;
        let projected: Vec<AffineFn> = j.iter().map(|a| res.project_fn(a).expect("in span")).collect();
        let missing: Vec<String> = projected
            .iter()
            .filter(|a| basis.position(a).is_none())
            .map(ToString::to_string)
            .collect();
        if !missing.is_empty() {
            return Err(AffineError::NoExtension { missing });
        }
        Ok((res, basis))
    }

    /// A basis of the whole system containing `J'`, if one exists.
    pub fn extend_to_basis(&self, jp: &[AffineFn]) -> Result<AffineBasis, AffineError> {
        let grads: Vec<Vector> = jp.iter().map(|a| a.grad.clone()).collect();
        if !grads.is_empty() && !linalg::independent(&grads) {
            return Err(AffineError::DependentGradients);
        }
        if let Some(bad) = jp.iter().find(|a| !self.contains(a)) {
            return Err(AffineError::BadInput(format!("{bad} is not a root")));
        }
        let rhs: Vector = jp.iter().map(|a| -a.c.clone()).collect();
        let x0 = if jp.is_empty() {
            linalg::zeros(self.dim)
        } else {
            linalg::solve(&grads, &rhs).ok_or(AffineError::DependentGradients)?
        };
        let null = linalg::nullspace(&grads, self.dim);
        let x = self.generic_point(&x0, &null)?;
        let ones = vec![rat(1); jp.len()];
        let d = if jp.is_empty() {
            linalg::zeros(self.dim)
        } else {
            linalg::solve(&grads, &ones).ok_or(AffineError::DependentGradients)?
        };
        let eps = perturbation(self, &x, &d);
        let y = linalg::add(&x, &linalg::scale(&d, &eps));
        let basis = match self.basis_from_point(&y) {
            Ok(b) => b,
            Err(AffineError::OnWall(_)) => {
                return Err(AffineError::NoExtension {
                    missing: jp.iter().map(ToString::to_string).collect(),
                })
            }
            Err(e) => return Err(e),
        };
        let missing: Vec<String> = jp
            .iter()
            .filter(|a| basis.position(a).is_none())
            .map(ToString::to_string)
            .collect();
        if missing.is_empty() {
            Ok(basis)
        } else {
            Err(AffineError::NoExtension { missing })
        }
    }

    /// A point `x0 + N r` avoiding every hyperplane that does not contain
    /// the affine subspace `x0 + span(N)`.
    fn generic_point(&self, x0: &[Rational], null: &[Vector]) -> Result<Vector, AffineError> {
        const PRIMES: [i64; 8] = [7, 11, 13, 17, 19, 23, 29, 31];
        for attempt in 0..200i64 {
            let mut x = x0.to_vec();
            for (i, v) in null.iter().enumerate() {
                let r = Rational::new(
                    (1 + attempt + i as i64).into(),
                    (PRIMES[i % PRIMES.len()] * (1 + attempt / 8)).into(),
                );
                x = linalg::add(&x, &linalg::scale(v, &r));
            }
            let clash = self.families.iter().any(|fam| {
                let varies = null.iter().any(|v| !linalg::dot(&fam.gradient, v).is_zero());
                varies && fam.vanishing_at(&x).is_some()
            });
            if !clash {
                return Ok(x);
            }
        }
        Err(AffineError::BadInput("no generic point found".into()))
    }

    /// Chambers reachable by wall crossings whose walls all have constant
    /// term in `[-window, window]`.
    pub fn enumerate_bases(&self, start: &AffineBasis, window: i64) -> Vec<AffineBasis> {
        let w = rat(window);
        let inside = |b: &AffineBasis| b.roots.iter().all(|r| r.c.abs() <= w);
        let mut seen: BTreeSet<BTreeSet<AffineFn>> = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        if inside(start) {
            seen.insert(start.key());
            queue.push_back(start.clone());
        }
        while let Some(b) = queue.pop_front() {
            for wall in &b.roots {
                let s = self.reflection(wall);
                let mut roots: Vec<AffineFn> = b.roots.iter().map(|r| s.act_fn(r)).collect();
                roots.sort_by(|a, b| b.c.cmp(&a.c).then_with(|| b.grad.cmp(&a.grad)));
                let nb = AffineBasis {
                    roots,
                    witness: s.apply(&b.witness),
                };
                if inside(&nb) && seen.insert(nb.key()) {
                    queue.push_back(nb);
                }
            }
            out.push(b);
        }
        out
    }

    /// Finite root datum at a special point `e` in the closed chamber of `b`.
    pub fn special_point_data(
        &self,
        b: &AffineBasis,
        e: &[Rational],
    ) -> Result<SpecialPointData, AffineError> {
        if let Some(neg) = b.roots.iter().find(|r| r.eval(e).is_negative()) {
            return Err(AffineError::NotInClosure(neg.to_string()));
        }
        let roots_at_e: Vec<AffineFn> = self.families.iter().filter_map(|f| f.vanishing_at(e)).collect();
        for g in self.gradients() {
            let dir = normalize_direction(&g).0;
            if !roots_at_e.iter().any(|a| normalize_direction(&a.grad).0 == dir) {
                return Err(AffineError::NotSpecial(fmt_vec(&g)));
            }
        }
        let basis_at_e: Vec<usize> = (0..b.roots.len())
            .filter(|&i| b.roots[i].eval(e).is_zero())
            .collect();
        let others: Vec<usize> = (0..b.roots.len()).filter(|i| !basis_at_e.contains(i)).collect();
        // R = {Da / k_a}, R^v = {k_a (Da)^v}
        let mut r_pairs: Vec<(Vector, Vector)> = Vec::new();
        for a in &roots_at_e {
            let k = self.period_of(a);
            let root = linalg::scale(&a.grad, &k.recip());
            let coroot = linalg::scale(&self.coroot_vector(&a.grad), &k);
            if !r_pairs.iter().any(|(r, _)| *r == root) {
                r_pairs.push((root, coroot));
            }
        }
        let simple_roots: Vec<Vector> = basis_at_e
            .iter()
            .map(|&i| {
                let a = &b.roots[i];
                linalg::scale(&a.grad, &self.period_of(a).recip())
            })
            .collect();
        let simple_coroots: Vec<Vector> = basis_at_e
            .iter()
            .map(|&i| {
                let a = &b.roots[i];
                linalg::scale(&self.coroot_vector(&a.grad), &self.period_of(a))
            })
            .collect();
        let rank = simple_roots.len();
        let cols = linalg::transpose(&simple_coroots);
        let to_int = |v: &Vector| -> Result<Vec<i64>, AffineError> {
            v.iter()
                .map(|c| {
                    c.is_integer()
                        .then(|| c.to_integer().to_i64())
                        .flatten()
                        .ok_or_else(|| AffineError::BadInput(format!("non-integral coordinate {c}")))
                })
                .collect()
        };
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for (root, coroot) in &r_pairs {
            let x: Vector = simple_coroots.iter().map(|cv| linalg::dot(root, cv)).collect();
            let y = if rank == 0 {
                vec![]
            } else {
                linalg::solve(&cols, coroot).ok_or(AffineError::NotInGroup)?
            };
            roots.push(to_int(&x)?);
            coroots.push(to_int(&y)?);
        }
        let basis = simple_roots
            .iter()
            .map(|s| {
                r_pairs
                    .iter()
                    .position(|(r, _)| r == s)
                    .expect("simple roots vanish at e")
            })
            .collect();
        let datum = BasedRootDatum {
            pairing: (0..rank)
                .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
                .collect(),
            roots,
            coroots,
            basis,
        };
        let weyl = WeylGroup::new(&datum)?;
        let spd = SpecialPointData {
            system: self.clone(),
            basis: b.clone(),
            e: e.to_vec(),
            roots_at_e,
            basis_at_e,
            others,
            simple_coroots,
            datum,
            weyl,
        };
        Ok(spd)
    }
}

/// Direction class of a nonzero vector up to positive scaling, and the
/// first nonzero entry used to normalize it.
fn normalize_direction(v: &[Rational]) -> (Vector, Rational) {
    let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(|| rat(1));
    let s = lead.abs();
    (linalg::scale(v, &s.recip()), s)
}

/// `Some(lambda)` with `b = lambda a`.
fn proportionality(a: &[Rational], b: &[Rational]) -> Option<Rational> {
    let i = a.iter().position(|x| !x.is_zero())?;
    let lambda = &b[i] / &a[i];
    (linalg::scale(a, &lambda) == b).then_some(lambda)
}

/// Some `m` with `o1 + p1 m in o2 + p2 Z`, or `None`.
fn solve_two_progressions(o1: &Rational, p1: &Rational, o2: &Rational, p2: &Rational) -> Option<i64> {
    // scale to integers: p1 m - p2 n = o2 - o1
    let den = [o1, p1, o2, p2]
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let to_int = |r: &Rational| (r * Rational::from_integer(den.clone())).to_integer();
    let (a, b, c) = (to_int(p1), to_int(p2), to_int(o2) - to_int(o1));
    let g = a.gcd(&b);
    if g.is_zero() || !(&c % &g).is_zero() {
        return None;
    }
    // m = (c/g) * inv(a/g) mod (b/g)
    let ext = (a.clone() / &g).extended_gcd(&(b.clone() / &g));
    let modulus = (b / &g).abs();
    let m = ((c / &g) * ext.x).mod_floor(&modulus);
    m.to_i64()
}

/// `eps` with `|eps * Da(d)| < |a(x)|` for every root not vanishing at `x`.
fn perturbation(sys: &AffineRootSystem, x: &[Rational], d: &[Rational]) -> Rational {
    let half = Rational::new(1.into(), 2.into());
    sys.families
        .iter()
        .map(|f| {
            let slope = linalg::dot(&f.gradient, d).abs();
            f.least_nonzero_at(x) / slope.max(rat(1))
        })
        .min()
        .map_or(half.clone(), |m| m * half)
}

/// The system `(Phi)_J` in coordinates `u_b = Db(x)`, `b in J`.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub system: AffineRootSystem,
    pub gradients: Vec<Vector>,
}

impl Restriction {
    pub fn project_point(&self, x: &[Rational]) -> Vector {
        self.gradients.iter().map(|g| linalg::dot(g, x)).collect()
    }

    /// Coordinates of a root whose gradient lies in the span of `DJ`.
    pub fn project_fn(&self, a: &AffineFn) -> Option<AffineFn> {
        if self.gradients.is_empty() {
            return linalg::is_zero(&a.grad).then(|| AffineFn::new(vec![], a.c.clone()));
        }
        let t = linalg::transpose(&self.gradients);
        let coeffs = linalg::solve(&t, &a.grad)?;
        (linalg::mat_vec(&t, &coeffs) == a.grad).then(|| AffineFn::new(coeffs, a.c.clone()))
    }

    pub fn lift_fn(&self, a: &AffineFn) -> AffineFn {
        let dim = self.gradients.first().map_or(0, Vec::len);
        let grad = a
            .grad
            .iter()
            .zip(&self.gradients)
            .fold(linalg::zeros(dim), |acc, (c, g)| {
                linalg::add(&acc, &linalg::scale(g, c))
            });
        AffineFn::new(grad, a.c.clone())
    }
}

/// Data attached to a special point `e` of the closed fundamental chamber.
#[derive(Debug, Clone)]
pub struct SpecialPointData {
    pub system: AffineRootSystem,
    pub basis: AffineBasis,
    pub e: Vector,
    pub roots_at_e: Vec<AffineFn>,
    /// Positions in `basis` of the walls through `e`, in datum simple order.
    pub basis_at_e: Vec<usize>,
    /// Positions in `basis` of the remaining walls.
    pub others: Vec<usize>,
    /// `k_a (Da)^v` for the simple roots, as vectors in `V`.
    pub simple_coroots: Vec<Vector>,
    pub datum: BasedRootDatum,
    pub weyl: WeylGroup,
}

/// Element of `ZR^v x| W_0`: translation by `translation` after `finite`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineWeylElt {
    pub translation: Vec<i64>,
    pub finite: WeylElt,
}

impl SpecialPointData {
    /// Period `k_a` of a basis root.
    pub fn period(&self, a: &AffineFn) -> Rational {
        self.system.period_of(a)
    }

    /// Coroot-lattice coordinates of a vector of `V`.
    pub fn y_coordinates(&self, v: &[Rational]) -> Option<Vec<i64>> {
        if self.simple_coroots.is_empty() {
            return linalg::is_zero(v).then(Vec::new);
        }
        let cols = linalg::transpose(&self.simple_coroots);
        let sol = linalg::solve(&cols, v)?;
        if linalg::mat_vec(&cols, &sol) != v {
            return None;
        }
        sol.iter()
            .map(|c| c.is_integer().then(|| c.to_integer().to_i64()).flatten())
            .collect()
    }

    pub fn y_to_vector(&self, y: &[i64]) -> Vector {
        y.iter()
            .zip(&self.simple_coroots)
            .fold(linalg::zeros(self.system.dim), |acc, (c, v)| {
                linalg::add(&acc, &linalg::scale(v, &rat(*c)))
            })
    }

    /// Linear action on `V` of a finite Weyl element.
    pub fn finite_matrix(&self, w: WeylElt) -> Matrix {
        let mut m = linalg::identity(self.system.dim);
        for &s in self.weyl.reduced_word(w) {
            let a = &self.basis.roots[self.basis_at_e[s]];
            let lin = self.system.reflection(&AffineFn::new(a.grad.clone(), rat(0))).lin;
            m = linalg::mat_mul(&m, &lin);
        }
        m
    }

    /// Splits `w` as translation after an element fixing `e`.
    pub fn split(&self, w: &AffineMap) -> Result<AffineWeylElt, AffineError> {
        let tau = linalg::sub(&w.apply(&self.e), &self.e);
        let translation = self.y_coordinates(&tau).ok_or(AffineError::NotInGroup)?;
        let rank = self.simple_coroots.len();
        let mut ymat = vec![0i64; rank * rank];
        for (j, cv) in self.simple_coroots.iter().enumerate() {
            let img = linalg::mat_vec(&w.lin, cv);
            let coords = self.y_coordinates(&img).ok_or(AffineError::NotInGroup)?;
            for i in 0..rank {
                ymat[i * rank + j] = coords[i];
            }
        }
        let finite = self
            .weyl
            .from_y_matrix(&ymat)
            .map_err(|_| AffineError::NotInGroup)?;
        let elt = AffineWeylElt { translation, finite };
        if self.to_map(&elt) != *w {
            return Err(AffineError::NotInGroup);
        }
        Ok(elt)
    }

    /// `x -> e + w(x - e) + tau`.
    pub fn to_map(&self, elt: &AffineWeylElt) -> AffineMap {
        let lin = self.finite_matrix(elt.finite);
        let tau = self.y_to_vector(&elt.translation);
        let shift = linalg::add(&linalg::sub(&self.e, &linalg::mat_vec(&lin, &self.e)), &tau);
        AffineMap { lin, shift }
    }

    /// Product in `ZR^v x| W_0`.
    pub fn compose(&self, a: &AffineWeylElt, b: &AffineWeylElt) -> AffineWeylElt {
        let moved = self.weyl.act_y(a.finite, &b.translation);
        AffineWeylElt {
            translation: a.translation.iter().zip(&moved).map(|(x, y)| x + y).collect(),
            finite: self.weyl.mul(a.finite, b.finite),
        }
    }

    /// Translation by `y` as an affine map.
    pub fn translation_map(&self, y: &[i64]) -> AffineMap {
        AffineMap::translation(self.y_to_vector(y))
    }

    /// Datum simple index for a basis position in `B_e`.
    pub fn simple_index(&self, pos: usize) -> Option<usize> {
        self.basis_at_e.iter().position(|&p| p == pos)
    }
}

/// Affine Weyl group of a reduced system with a fixed fundamental chamber.
#[derive(Debug, Clone)]
pub struct AffineCoxeter {
    pub system: AffineRootSystem,
    pub basis: AffineBasis,
    reflections: Vec<AffineMap>,
}

impl AffineCoxeter {
    pub fn new(system: AffineRootSystem, basis: AffineBasis) -> Result<Self, AffineError> {
        if let Some(w) = system.non_reduced_witness() {
            return Err(AffineError::NonReduced(w));
        }
        if !system.is_basis(&basis) {
            return Err(AffineError::BadInput("not a chamber basis".into()));
        }
        let reflections = basis.roots.iter().map(|b| system.reflection(b)).collect();
        Ok(AffineCoxeter {
            system,
            basis,
            reflections,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.roots.len()
    }

    pub fn identity(&self) -> AffineMap {
        AffineMap::identity(self.system.dim)
    }

    pub fn simple(&self, s: usize) -> &AffineMap {
        &self.reflections[s]
    }

    pub fn left_mul(&self, s: usize, w: &AffineMap) -> AffineMap {
        self.reflections[s].compose(w)
    }

    pub fn is_left_descent(&self, s: usize, w: &AffineMap) -> bool {
        self.basis.roots[s]
            .eval(&w.apply(&self.basis.witness))
            .is_negative()
    }

    /// Number of hyperplanes separating the chamber from its image.
    pub fn length(&self, w: &AffineMap) -> usize {
        let x = &self.basis.witness;
        let wx = w.apply(x);
        let mut total = 0usize;
        for f in &self.system.families {
            let v0 = -(linalg::dot(&f.gradient, x) + &f.offset) / &f.period;
            let u0 = -(linalg::dot(&f.gradient, &wx) + &f.offset) / &f.period;
            // integers m with v0 < m < u0
            let count = u0.ceil() - v0.floor() - rat(1);
            if count.is_positive() {
                total += count.to_integer().to_usize().expect("small length");
            }
        }
        total
    }

    /// Reduced word choosing the smallest left descent at each step.
    pub fn reduced_word(&self, w: &AffineMap) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        while let Some(s) = (0..self.rank()).find(|&s| self.is_left_descent(s, &cur)) {
            word.push(s);
            cur = self.left_mul(s, &cur);
        }
        word
    }

    pub fn from_word(&self, word: &[usize]) -> AffineMap {
        word.iter()
            .rev()
            .fold(self.identity(), |acc, &s| self.left_mul(s, &acc))
    }

    /// Whether `w` maps roots to roots and the chamber to a chamber.
    pub fn contains(&self, w: &AffineMap) -> bool {
        let img = AffineBasis {
            roots: self.basis.roots.iter().map(|r| w.act_fn(r)).collect(),
            witness: w.apply(&self.basis.witness),
        };
        self.system.is_basis(&img) && self.from_word(&self.reduced_word(w)) == *w
    }

    /// Order of `s_i s_j`, or `None` if infinite.
    pub fn coxeter_order(&self, i: usize, j: usize) -> Option<usize> {
        let st = self.reflections[i].compose(&self.reflections[j]);
        let mut w = st.clone();
        for k in 1..=12 {
            if w.is_identity() {
                return Some(k);
            }
            w = w.compose(&st);
        }
        None
    }

    /// All elements of length at most `max_len`, by breadth-first search.
    pub fn elements_up_to(&self, max_len: usize) -> Vec<AffineMap> {
        let mut layers: Vec<Vec<AffineMap>> = vec![vec![self.identity()]];
        let mut seen: BTreeSet<AffineMap> = BTreeSet::from([self.identity()]);
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in layers.last().expect("nonempty") {
                for s in 0..self.rank() {
                    let v = self.left_mul(s, w);
                    if seen.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
            layers.push(next);
        }
        layers.into_iter().flatten().collect()
    }
}

/// Indexed positions of parallel classes, for reports.
pub fn gradient_classes(sys: &AffineRootSystem) -> BTreeMap<Vector, Vec<usize>> {
    let mut out: BTreeMap<Vector, Vec<usize>> = BTreeMap::new();
    for (i, f) in sys.families.iter().enumerate() {
        out.entry(normalize_direction(&f.gradient).0).or_default().push(i);
    }
    out
}

/// Standard examples used in tests, benches and fixtures.
pub mod examples {
    use super::*;

    fn fams(grads: &[&[i64]], period: i64) -> Vec<RootFamily> {
        grads
            .iter()
            .map(|g| RootFamily::new(linalg::to_rat(g), rat(0), rat(period)))
            .collect()
    }

    /// `+-alpha + Z` on the line, `alpha(x) = x`.
    pub fn a1_tilde() -> AffineRootSystem {
        AffineRootSystem::new(1, fams(&[&[1], &[-1]], 1), None).expect("valid")
    }

    /// `+-alpha + 2Z` and `+-alpha + 1 + 2Z`: the same roots as `a1_tilde`
    /// split into two families, so they can carry different parameters.
    pub fn a1_tilde_split() -> AffineRootSystem {
        let mut f = fams(&[&[1], &[-1]], 2);
        f.push(RootFamily::new(linalg::to_rat(&[1]), rat(1), rat(2)));
        f.push(RootFamily::new(linalg::to_rat(&[-1]), rat(1), rat(2)));
        AffineRootSystem::new(1, f, None).expect("valid")
    }

    /// Type `A_2` tilde in coordinates `(x_1 - x_2, x_2 - x_3)` dual basis:
    /// gradients are the roots of `A_2` written in the simple-root basis,
    /// with the Killing form as inner product.
    pub fn a2_tilde() -> AffineRootSystem {
        let g: Vec<Vec<Rational>> = vec![linalg::to_rat(&[2, 1]), linalg::to_rat(&[1, 2])];
        let inner = g.iter().map(|r| r.iter().map(|v| v / rat(3)).collect()).collect();
        AffineRootSystem::new(
            2,
            fams(&[&[1, 0], &[0, 1], &[1, 1], &[-1, 0], &[0, -1], &[-1, -1]], 1),
            Some(inner),
        )
        .expect("valid")
    }

    /// Type `C_2` tilde on `Q^2`: `+-e_i +- e_j + Z` and `+-2e_i + 2Z`.
    pub fn c2_tilde() -> AffineRootSystem {
        let mut f = fams(&[&[1, -1], &[-1, 1], &[1, 1], &[-1, -1]], 1);
        f.extend(fams(&[&[2, 0], &[-2, 0], &[0, 2], &[0, -2]], 2));
        AffineRootSystem::new(2, f, None).expect("valid")
    }

    /// A point in the fundamental alcove of each example.
    pub fn alcove_point(sys: &AffineRootSystem) -> Vector {
        match sys.dim {
            1 => vec![Rational::new(1.into(), 3.into())],
            _ if sys.families.len() == 6 => vec![
                Rational::new(1.into(), 6.into()),
                Rational::new(1.into(), 7.into()),
            ],
            _ => vec![
                Rational::new(3.into(), 7.into()),
                Rational::new(1.into(), 7.into()),
            ],
        }
    }
}
