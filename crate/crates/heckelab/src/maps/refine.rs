//! Refinement of a root datum at roots with `lambda* = 0`: the coroot is
//! doubled, the root halved, and both labels become `lambda`. The identity
//! on `C[Y] (x) H(W_0, q)` is then an algebra isomorphism.

use thiserror::Error;

use crate::bernstein::{AffineHecke, BernsteinError, LabelFunctions};
use crate::maps::hom::{verify_hom, HomSpec};
use crate::par::Exec;
use crate::report::ValidationReport;
use crate::rootdatum::{BasedRootDatum, RootDatumError, WeylGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefineError {
    #[error("lambda* vanishes at simple root {0}, which is not in 2X")]
    BadInput(usize),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
}

pub fn refine_datum(
    datum: &BasedRootDatum,
    labels: &LabelFunctions,
) -> Result<(BasedRootDatum, LabelFunctions), RefineError> {
    let weyl = WeylGroup::new(datum)?;
    let mut out = datum.clone();
    let mut new_labels = labels.clone();
    let mut touched = vec![false; datum.roots.len()];
    for (i, &b) in datum.basis.iter().enumerate() {
        if labels.lambda_star[i] != 0 {
            continue;
        }
        if !datum.root_in_2x(b) {
            return Err(RefineError::BadInput(i + 1));
        }
        new_labels.lambda_star[i] = labels.lambda[i];
        for w in weyl.elements() {
            let img = weyl.act_x(w, &datum.roots[b]);
            let r = datum.root_index(&img).ok_or(RootDatumError::UnknownRoot(img))?;
            if !touched[r] {
                touched[r] = true;
                out.roots[r] = datum.roots[r].iter().map(|v| v / 2).collect();
                out.coroots[r] = datum.coroots[r].iter().map(|v| v * 2).collect();
            }
        }
    }
    Ok((out, new_labels))
}

/// Checks that the identity map `H(R, lambda, lambda*) -> H(R', lambda', lambda*')`
/// respects every defining relation.
pub fn refinement_report(
    datum: &BasedRootDatum,
    labels: &LabelFunctions,
    bound: i64,
    exec: Exec,
) -> Result<ValidationReport, RefineError> {
    let (rd, rl) = refine_datum(datum, labels)?;
    let src = AffineHecke::new(datum, labels.clone())?;
    let tgt = AffineHecke::new(&rd, rl)?;
    let n = src.rank_y();
    let spec = HomSpec {
        source: &src,
        target: &tgt,
        t_images: (0..src.simple_count()).map(|i| tgt.t_s(i)).collect(),
        theta_images: (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                tgt.theta(e)
            })
            .collect(),
        meta: None,
    };
    Ok(verify_hom(&spec, bound, exec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::examples::*;

    #[test]
    fn positive_star_is_unchanged() {
        let l = LabelFunctions {
            lambda: vec![2],
            lambda_star: vec![1],
        };
        let (d, l2) = refine_datum(&a1_even(), &l).unwrap();
        assert_eq!(d, a1_even());
        assert_eq!(l2, l);
    }

    #[test]
    fn zero_star_doubles_the_coroot() {
        let l = LabelFunctions {
            lambda: vec![2],
            lambda_star: vec![0],
        };
        let (d, l2) = refine_datum(&a1_even(), &l).unwrap();
        assert_eq!(d.roots, vec![vec![1], vec![-1]]);
        assert_eq!(d.coroots, vec![vec![2], vec![-2]]);
        assert_eq!(l2, LabelFunctions::equal(vec![2]));
        assert!(refinement_report(&a1_even(), &l, 3, Exec::Sequential)
            .unwrap()
            .all_passed());
    }

    #[test]
    fn rank_two_long_root() {
        let l = LabelFunctions {
            lambda: vec![1, 3],
            lambda_star: vec![1, 0],
        };
        let (d, _) = refine_datum(&sp4(), &l).unwrap();
        assert!(d.check().all_passed());
        assert!(refinement_report(&sp4(), &l, 2, Exec::Parallel)
            .unwrap()
            .all_passed());
    }

    #[test]
    fn zero_star_outside_2x_is_rejected() {
        let l = LabelFunctions {
            lambda: vec![1],
            lambda_star: vec![0],
        };
        assert_eq!(refine_datum(&a1_odd(), &l), Err(RefineError::BadInput(1)));
    }
}
