//! Homomorphisms between affine Hecke algebras given by generator images,
//! and a checker for the defining relations of the source.

use crate::bernstein::{AffineHecke, BernsteinElt};
use crate::coxeter::Coxeter;
use crate::par::Exec;
use crate::report::{Check, ValidationReport};
use crate::scalar::Scalar;
use crate::theta::{self, Theta};

/// Rank-one shape data: `I(T_s) = c' theta_{k a'^v} T_{s'} + b'` and
/// `I(theta_{a^v}) = c theta_{n a'^v}`, with `k`, `n` stored doubled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneMeta {
    pub k2: i64,
    pub n2: i64,
    pub c: Scalar,
    pub c_prime: Scalar,
}

/// A candidate homomorphism `source -> target`.
#[derive(Debug, Clone)]
pub struct HomSpec<'a> {
    pub source: &'a AffineHecke,
    pub target: &'a AffineHecke,
    /// Images of `T_{s_i}` in simple order.
    pub t_images: Vec<BernsteinElt>,
    /// Images of `theta_{e_i}` for the standard basis of `Y`.
    pub theta_images: Vec<BernsteinElt>,
    pub meta: Option<RankOneMeta>,
}

/// How many cross relations to check: `y` ranges over `[-bound, bound]^n`.
/// Bound 1 already covers `+-e_i`, which generate `Y`.
pub const DEFAULT_BOX: i64 = 1;

impl<'a> HomSpec<'a> {
    /// The identity of `alg`.
    pub fn identity(alg: &'a AffineHecke) -> Self {
        let n = alg.rank_y();
        HomSpec {
            source: alg,
            target: alg,
            t_images: (0..alg.simple_count()).map(|i| alg.t_s(i)).collect(),
            theta_images: (0..n).map(|i| alg.theta(unit(n, i, 1))).collect(),
            meta: None,
        }
    }

    /// `(c_i, z_i)` with `I(theta_{e_i}) = c_i theta_{z_i}`, when every
    /// image is such a monomial.
    pub fn theta_monomials(&self) -> Option<Vec<(Scalar, Vec<i64>)>> {
        let e = self.target.weyl().identity();
        self.theta_images
            .iter()
            .map(|img| {
                let ((w, z), c) = img.as_single()?;
                c.inverse_monomial().ok()?;
                (*w == e).then(|| (c.clone(), z.clone()))
            })
            .collect()
    }

    /// `I(theta_y)`; requires monomial theta images.
    pub fn image_theta(&self, y: &[i64]) -> Option<BernsteinElt> {
        let monos = self.theta_monomials()?;
        let mut c = Scalar::one();
        let mut z = vec![0; self.target.rank_y()];
        for (yi, (ci, zi)) in y.iter().zip(&monos) {
            c = &c * &ci.pow(i32::try_from(*yi).ok()?).ok()?;
            z = theta::add_vec(&z, &theta::scale_vec(zi, *yi));
        }
        Some(self.target.theta(z).scale(&c))
    }

    /// `I(f)` for `f` in `C[Y]`.
    pub fn image_theta_poly(&self, f: &Theta) -> Option<BernsteinElt> {
        let mut out = BernsteinElt::zero();
        for (y, c) in f.iter() {
            out.add_scaled(&self.image_theta(y)?, c);
        }
        Some(out)
    }

    /// `I(theta_y T_w)` summed over `x`.
    pub fn apply(&self, x: &BernsteinElt) -> Option<BernsteinElt> {
        let t = self.target;
        let mut out = BernsteinElt::zero();
        for ((w, y), c) in x.iter() {
            let mut img = self.image_theta(y)?;
            for &s in self.source.weyl().reduced_word(*w) {
                img = t.mul(&img, &self.t_images[s]).ok()?;
            }
            out.add_scaled(&img, c);
        }
        Some(out)
    }
}

fn unit(n: usize, i: usize, v: i64) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = v;
    e
}

/// Every vector of `[-bound, bound]^n` other than zero.
pub fn box_vectors(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| (-bound..=bound).map(move |v| [p.clone(), vec![v]].concat()))
            .collect();
    }
    out.retain(|v| v.iter().any(|&x| x != 0));
    out
}

enum Task {
    Quadratic(usize),
    Braid(usize, usize, usize),
    Cross(Vec<i64>, usize),
}

/// Checks the image of every defining relation of the source presentation.
pub fn verify_hom(spec: &HomSpec<'_>, bound: i64, exec: Exec) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let (src, tgt) = (spec.source, spec.target);
    let shape_ok = spec.t_images.len() == src.simple_count() && spec.theta_images.len() == src.rank_y();
    rep.push(if shape_ok {
        Check::pass("images-complete")
    } else {
        Check::fail(
            "images-complete",
            format!(
                "need {} T images and {} theta images",
                src.simple_count(),
                src.rank_y()
            ),
        )
    });
    if !shape_ok {
        return rep;
    }
    let monomial = spec.theta_monomials().is_some();
    rep.push(Check::from_witness(
        "theta-invertible",
        (!monomial).then(|| "some theta image is not c*th[z] with c a unit".to_string()),
    ));
    if !monomial {
        return rep;
    }
    let mut commute = None;
    for i in 0..spec.theta_images.len() {
        for j in i + 1..spec.theta_images.len() {
            let (a, b) = (&spec.theta_images[i], &spec.theta_images[j]);
            let d = tgt.mul(a, b).and_then(|ab| Ok(ab - tgt.mul(b, a)?));
            match d {
                Ok(d) if d.is_zero() => {}
                Ok(d) => commute = commute.or(Some(tgt.render(&d))),
                Err(e) => commute = commute.or(Some(e.to_string())),
            }
        }
    }
    rep.push(Check::from_witness("theta-commute", commute));

    let n = src.simple_count();
    let mut tasks: Vec<Task> = (0..n).map(Task::Quadratic).collect();
    for i in 0..n {
        for j in i + 1..n {
            tasks.push(Task::Braid(i, j, src.weyl().coxeter_order(i, j)));
        }
    }
    for y in box_vectors(src.rank_y(), bound) {
        for i in 0..n {
            tasks.push(Task::Cross(y.clone(), i));
        }
    }
    let checks = exec.map(&tasks, |task| match task {
        Task::Quadratic(i) => {
            let name = format!("quadratic[{}]", Coxeter::generator_name(src.weyl(), *i));
            Check::from_witness(name, quadratic_defect(spec, *i))
        }
        Task::Braid(i, j, m) => {
            let name = format!(
                "braid[{},{}]",
                Coxeter::generator_name(src.weyl(), *i),
                Coxeter::generator_name(src.weyl(), *j)
            );
            Check::from_witness(name, braid_defect(spec, *i, *j, *m))
        }
        Task::Cross(y, i) => {
            let name = format!(
                "cross[{},{}]",
                theta::render_y(y),
                Coxeter::generator_name(src.weyl(), *i)
            );
            Check::from_witness(name, cross_defect(spec, y, *i))
        }
    });
    for c in checks {
        rep.push(c);
    }
    rep
}

fn defect(tgt: &AffineHecke, d: Result<BernsteinElt, String>) -> Option<String> {
    match d {
        Ok(d) if d.is_zero() => None,
        Ok(d) => Some(tgt.render(&d)),
        Err(e) => Some(e),
    }
}

/// `(I(T_s) + 1)(I(T_s) - q_s)`.
fn quadratic_defect(spec: &HomSpec<'_>, i: usize) -> Option<String> {
    let tgt = spec.target;
    let x = &spec.t_images[i];
    let q = spec.source.finite().q(i).clone();
    let d = tgt
        .mul(&(x + &tgt.one()), &(x - &tgt.scalar(q)))
        .map_err(|e| e.to_string());
    defect(tgt, d)
}

fn braid_defect(spec: &HomSpec<'_>, i: usize, j: usize, m: usize) -> Option<String> {
    let tgt = spec.target;
    let alt = |a: usize, b: usize| {
        (0..m).try_fold(tgt.one(), |acc, k| {
            let g = if k % 2 == 0 { a } else { b };
            tgt.mul(&acc, &spec.t_images[g])
        })
    };
    let d = alt(i, j)
        .and_then(|l| Ok(l - alt(j, i)?))
        .map_err(|e| e.to_string());
    defect(tgt, d)
}

/// `I(theta_y) I(T_s) - I(T_s) I(theta_{s y}) - I(rhs)`.
fn cross_defect(spec: &HomSpec<'_>, y: &[i64], i: usize) -> Option<String> {
    let (src, tgt) = (spec.source, spec.target);
    let run = || -> Result<BernsteinElt, String> {
        let sy = src.datum().reflect_y_by(src.datum().basis[i], y);
        let rhs = src.cross_relation(y, i).map_err(|e| e.to_string())?;
        let missing = || "theta image not invertible".to_string();
        let ty = spec.image_theta(y).ok_or_else(missing)?;
        let tsy = spec.image_theta(&sy).ok_or_else(missing)?;
        let ts = &spec.t_images[i];
        let lhs =
            tgt.mul(&ty, ts).map_err(|e| e.to_string())? - tgt.mul(ts, &tsy).map_err(|e| e.to_string())?;
        Ok(lhs - spec.image_theta_poly(&rhs).ok_or_else(missing)?)
    };
    defect(tgt, run())
}
