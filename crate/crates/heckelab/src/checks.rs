//! Seeded property sweeps shared by the command-line suites, the acceptance
//! tests and the benches. Each sweep draws its samples up front from one
//! seed, then evaluates them under the given execution mode, so reports are
//! identical in both modes.

use std::collections::BTreeSet;

use crate::affine::{AffineBasis, AffineError, AffineFn, AffineRootSystem};
use crate::bernstein::{AffineHecke, BernsteinElt, BernsteinError};
use crate::coxeter::Coxeter;
use crate::maps::{IsoError, StandardBernstein};
use crate::par::Exec;
use crate::random::{Sampler, Shape};
use crate::report::{Check, ValidationReport};
use crate::scalar::Scalar;
use num_traits::Signed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub seed: u64,
    pub samples: usize,
    pub shape: Shape,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            seed: 0,
            samples: 200,
            shape: Shape::default(),
        }
    }
}

fn first_failure(
    results: Vec<Result<Option<String>, BernsteinError>>,
) -> Result<Option<String>, BernsteinError> {
    let mut out = None;
    for r in results {
        if let Some(w) = r? {
            out.get_or_insert(w);
        }
    }
    Ok(out)
}

/// `(xy)z = x(yz)` on random triples.
pub fn associativity(
    alg: &AffineHecke,
    opts: SweepOptions,
    exec: Exec,
) -> Result<ValidationReport, BernsteinError> {
    let mut s = Sampler::new(opts.seed);
    let triples: Vec<[BernsteinElt; 3]> = (0..opts.samples)
        .map(|_| [(); 3].map(|_| s.bernstein(alg, opts.shape)))
        .collect();
    let idx: Vec<usize> = (0..triples.len()).collect();
    let results = exec.map(&idx, |&i| {
        let [x, y, z] = &triples[i];
        let lhs = alg.mul(&alg.mul(x, y)?, z)?;
        let rhs = alg.mul(x, &alg.mul(y, z)?)?;
        Ok((lhs != rhs).then(|| format!("triple {i}: (xy)z - x(yz) = {}", alg.render(&(lhs - rhs)))))
    });
    let mut rep = ValidationReport::default();
    rep.push(Check::from_witness(
        format!("associativity[{} triples]", opts.samples),
        first_failure(results)?,
    ));
    Ok(rep)
}

/// `iota` is an involutive automorphism with `iota(T_s) = q_s - 1 - T_s`
/// and `iota(theta_y) = theta_{-y}`.
pub fn involution(
    alg: &AffineHecke,
    opts: SweepOptions,
    exec: Exec,
) -> Result<ValidationReport, BernsteinError> {
    let mut rep = ValidationReport::default();
    for i in 0..alg.simple_count() {
        let got = alg.iota(&alg.t_s(i))?;
        let expect = alg.scalar(alg.q1(i) - Scalar::one()) - alg.t_s(i);
        let name = format!("iota[T[{}]]", Coxeter::generator_name(alg.weyl(), i));
        rep.push(Check::from_witness(
            name,
            (got != expect).then(|| alg.render(&got)),
        ));
    }
    for k in 0..alg.rank_y() {
        let mut y = vec![0; alg.rank_y()];
        y[k] = 1;
        let got = alg.iota(&alg.theta(y.clone()))?;
        let expect = alg.theta(y.iter().map(|v| -v).collect());
        let name = format!("iota[{}]", crate::theta::render_y(&y));
        rep.push(Check::from_witness(
            name,
            (got != expect).then(|| alg.render(&got)),
        ));
    }
    let mut s = Sampler::new(opts.seed);
    let pairs: Vec<[BernsteinElt; 2]> = (0..opts.samples)
        .map(|_| [(); 2].map(|_| s.bernstein(alg, opts.shape)))
        .collect();
    let idx: Vec<usize> = (0..pairs.len()).collect();
    let twice = exec.map(&idx, |&i| {
        let x = &pairs[i][0];
        let back = alg.iota(&alg.iota(x)?)?;
        Ok((back != *x).then(|| {
            format!(
                "sample {i}: iota(iota(x)) - x = {}",
                alg.render(&(back - x.clone()))
            )
        }))
    });
    rep.push(Check::from_witness(
        format!("iota-involutive[{} samples]", opts.samples),
        first_failure(twice)?,
    ));
    let mult = exec.map(&idx, |&i| {
        let [x, y] = &pairs[i];
        let lhs = alg.iota(&alg.mul(x, y)?)?;
        let rhs = alg.mul(&alg.iota(x)?, &alg.iota(y)?)?;
        Ok((lhs != rhs).then(|| format!("pair {i}: difference {}", alg.render(&(lhs - rhs)))))
    });
    rep.push(Check::from_witness(
        format!("iota-multiplicative[{} pairs]", opts.samples),
        first_failure(mult)?,
    ));
    Ok(rep)
}

/// The standard-to-Bernstein map is multiplicative on random pairs drawn
/// from `T_w` with `l(w) <= pool_len`.
pub fn iso_multiplicative(
    iso: &StandardBernstein,
    pool_len: usize,
    opts: SweepOptions,
    exec: Exec,
) -> Result<ValidationReport, IsoError> {
    let pool = iso.standard.group().group.elements_up_to(pool_len);
    let mut s = Sampler::new(opts.seed);
    let pairs: Vec<_> = (0..opts.samples)
        .map(|_| [(); 2].map(|_| s.combination(&pool, opts.shape)))
        .collect();
    let idx: Vec<usize> = (0..pairs.len()).collect();
    let results: Vec<Result<Option<String>, IsoError>> = exec.map(&idx, |&i| {
        let [x, y] = &pairs[i];
        let h = &iso.standard;
        let lhs = iso.to_bernstein(&h.mul(x, y))?;
        let rhs = iso.bernstein.mul(&iso.to_bernstein(x)?, &iso.to_bernstein(y)?)?;
        Ok((lhs != rhs).then(|| format!("pair {i}: difference {}", iso.bernstein.render(&(lhs - rhs)))))
    });
    let mut witness = None;
    for r in results {
        if let Some(w) = r? {
            witness.get_or_insert(w);
        }
    }
    let mut rep = ValidationReport::default();
    rep.push(Check::from_witness(
        format!("iso-multiplicative[{} pairs]", opts.samples),
        witness,
    ));
    Ok(rep)
}

/// `to_standard(to_bernstein(T_w)) = T_w` for every `l(w) <= max_len`.
pub fn iso_round_trip(
    iso: &StandardBernstein,
    max_len: usize,
    exec: Exec,
) -> Result<ValidationReport, IsoError> {
    let elts = iso.standard.group().group.elements_up_to(max_len);
    let results: Vec<Result<Option<String>, IsoError>> = exec.map(&elts, |w| {
        let x = iso.standard.t(w.clone());
        let back = iso.to_standard(&iso.to_bernstein(&x)?)?;
        Ok((back != x).then(|| {
            format!(
                "{} comes back as {}",
                iso.standard.render(&x),
                iso.standard.render(&back)
            )
        }))
    });
    let mut witness = None;
    for r in results {
        if let Some(w) = r? {
            witness.get_or_insert(w);
        }
    }
    let mut rep = ValidationReport::default();
    rep.push(Check::from_witness(
        format!("iso-round-trip[{} elements]", elts.len()),
        witness,
    ));
    Ok(rep)
}

fn fmt_roots(k: &[AffineFn]) -> String {
    let parts: Vec<String> = k.iter().map(|a| format!("[{a}]")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0..1usize << items.len())
        .map(|mask| {
            (0..items.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| items[i].clone())
                .collect()
        })
        .collect()
}

/// Failures of the basis algorithms around one chamber.
fn sweep_one(
    sys: &AffineRootSystem,
    b: &AffineBasis,
    enumerated: &BTreeSet<BTreeSet<AffineFn>>,
    window: i64,
) -> Result<[Option<String>; 3], AffineError> {
    let (mut containing, mut extend, mut brute) = (None, None, None);
    let w = crate::scalar::rat(window);
    for j in subsets(&b.roots) {
        let grads: Vec<_> = j.iter().map(|a| a.grad.clone()).collect();
        if !grads.is_empty() && !crate::linalg::independent(&grads) {
            continue;
        }
        let (res, bj) = match sys.basis_containing(b, &j) {
            Ok(found) => found,
            Err(e) => {
                containing.get_or_insert(format!("J = {} in {}: {e}", fmt_roots(&j), fmt_roots(&b.roots)));
                continue;
            }
        };
        if !res.system.is_basis(&bj) {
            containing.get_or_insert(format!("J = {}: result is not a chamber basis", fmt_roots(&j)));
        }
        for jp in subsets(&bj.roots) {
            let lifted: Vec<AffineFn> = jp.iter().map(|a| res.lift_fn(a)).collect();
            let lg: Vec<_> = lifted.iter().map(|a| a.grad.clone()).collect();
            if !lg.is_empty() && !crate::linalg::independent(&lg) {
                continue;
            }
            match sys.extend_to_basis(&lifted) {
                Err(e) => {
                    extend.get_or_insert(format!("J' = {}: {e}", fmt_roots(&lifted)));
                }
                Ok(ext) => {
                    let ok = sys.is_basis(&ext) && lifted.iter().all(|a| ext.position(a).is_some());
                    if !ok {
                        extend.get_or_insert(format!(
                            "J' = {}: bad extension {}",
                            fmt_roots(&lifted),
                            fmt_roots(&ext.roots)
                        ));
                    }
                    let inside = ext.roots.iter().all(|r| r.c.abs() <= w);
                    if inside && !enumerated.contains(&ext.key()) {
                        brute.get_or_insert(format!(
                            "{} is not among the enumerated chambers",
                            fmt_roots(&ext.roots)
                        ));
                    }
                }
            }
            // brute force: some enumerated chamber contains J' when one exists
            let all_inside = lifted.iter().all(|r| r.c.abs() <= w);
            if all_inside && !enumerated.iter().any(|k| lifted.iter().all(|a| k.contains(a))) {
                brute.get_or_insert(format!("no enumerated chamber contains {}", fmt_roots(&lifted)));
            }
        }
    }
    Ok([containing, extend, brute])
}

/// For every chamber with walls in the window and every `J` in its basis
/// with independent gradients: `basis_containing` yields a basis containing
/// `J`, and every subset of that basis extends to a basis of the whole
/// system, in agreement with chamber enumeration.
pub fn basis_sweep(
    sys: &AffineRootSystem,
    start: &AffineBasis,
    window: i64,
    exec: Exec,
) -> Result<ValidationReport, AffineError> {
    if window < 2 {
        return Err(AffineError::BadWindow(window));
    }
    let bases = sys.enumerate_bases(start, window);
    // A chamber with walls in the window can sit behind chambers that leave
    // it, so the brute-force set walks a wider window and filters back.
    let w = crate::scalar::rat(window);
    let enumerated: BTreeSet<BTreeSet<AffineFn>> = sys
        .enumerate_bases(start, 2 * window + 2)
        .iter()
        .filter(|b| b.roots.iter().all(|r| r.c.abs() <= w))
        .map(AffineBasis::key)
        .collect();
    let mut rep = ValidationReport::default();
    let invalid = bases
        .iter()
        .find(|b| !sys.is_basis(b))
        .map(|b| fmt_roots(&b.roots));
    rep.push(Check::from_witness(
        format!("enumerated-chambers[{}]", bases.len()),
        invalid,
    ));
    let results = exec.map(&bases, |b| sweep_one(sys, b, &enumerated, window));
    let mut found: [Option<String>; 3] = [None, None, None];
    for r in results {
        for (slot, w) in found.iter_mut().zip(r?) {
            if slot.is_none() {
                *slot = w;
            }
        }
    }
    let [containing, extend, brute] = found;
    rep.push(Check::from_witness("basis-containing-J", containing));
    rep.push(Check::from_witness("extend-to-basis", extend));
    rep.push(Check::from_witness("extend-matches-enumeration", brute));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::examples;
    use crate::bernstein::{examples as datums, LabelFunctions};
    use crate::iwahori::ParameterFunction;
    use crate::scalar::rat;

    fn small() -> SweepOptions {
        SweepOptions {
            samples: 10,
            ..SweepOptions::default()
        }
    }

    #[test]
    fn sweeps_pass_and_agree_across_modes() {
        let alg = AffineHecke::new(
            &datums::a1_even(),
            LabelFunctions {
                lambda: vec![2],
                lambda_star: vec![1],
            },
        )
        .unwrap();
        let a = associativity(&alg, small(), Exec::Sequential).unwrap();
        let b = associativity(&alg, small(), Exec::Parallel).unwrap();
        assert!(a.all_passed());
        assert_eq!(a, b);
        assert!(involution(&alg, small(), Exec::Parallel).unwrap().all_passed());
    }

    #[test]
    fn iso_sweeps() {
        let sys = examples::a1_tilde_split();
        let b = sys.basis_from_point(&examples::alcove_point(&sys)).unwrap();
        let spd = sys.special_point_data(&b, &[rat(0)]).unwrap();
        let iso = StandardBernstein::new(spd, ParameterFunction::from_exponents(&[1, 2])).unwrap();
        assert!(iso_multiplicative(&iso, 2, small(), Exec::Parallel)
            .unwrap()
            .all_passed());
        assert!(iso_round_trip(&iso, 4, Exec::Parallel).unwrap().all_passed());
    }

    #[test]
    fn basis_sweep_a1() {
        let sys = examples::a1_tilde();
        let b = sys.basis_from_point(&examples::alcove_point(&sys)).unwrap();
        let rep = basis_sweep(&sys, &b, 3, Exec::Parallel).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        assert_eq!(rep.checks[0].name, "enumerated-chambers[6]");
    }
}
