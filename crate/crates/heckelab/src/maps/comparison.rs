//! The comparison homomorphism between the algebra built from marked affine
//! roots and the one built from a root datum with labels.
//!
//! Both sides share the lattice `Y`; the first uses the opposite basis.
//! Generators go to `iota(T_s)` or, where `eps = 1`, to `iota(T_{s,0})`,
//! and `theta_y` goes to `theta_y`.

use thiserror::Error;

use crate::bernstein::{AffineHecke, BernsteinError, LabelFunctions};
use crate::maps::hom::{verify_hom, HomSpec};
use crate::par::Exec;
use crate::report::{Check, ValidationReport};
use crate::rootdatum::{BasedRootDatum, RootDatumError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComparisonError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonConfig {
    /// Datum of the target; the source uses the same datum with basis `-Delta`.
    pub target_datum: BasedRootDatum,
    pub target_labels: LabelFunctions,
    pub source_labels: LabelFunctions,
    /// `eps` per simple root.
    pub eps: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub source: AffineHecke,
    pub target: AffineHecke,
    pub eps: Vec<bool>,
}

impl Comparison {
    /// Builds the comparison after checking the label equations.
    pub fn new(cfg: &ComparisonConfig) -> Result<Self, ComparisonError> {
        let d = &cfg.target_datum;
        let n = d.basis.len();
        if cfg.eps.len() != n {
            return Err(ComparisonError::PreconditionFailed(format!(
                "expected {n} eps flags, got {}",
                cfg.eps.len()
            )));
        }
        let (s, t) = (&cfg.source_labels, &cfg.target_labels);
        let fail = |m: String| Err(ComparisonError::PreconditionFailed(m));
        for i in 0..n {
            let name = i + 1;
            if cfg.eps[i] {
                if !d.pairs_evenly(d.basis[i]) || !d.root_in_2x(d.basis[i]) {
                    return fail(format!(
                        "eps = 1 at simple root {name}, which is not of type A1 or long C in 2X"
                    ));
                }
                if s.lambda[i] != t.lambda_star[i] {
                    return fail(format!(
                        "eps = 1: lambda_src({name}) = {} != lambda*_tgt({name}) = {}",
                        s.lambda[i], t.lambda_star[i]
                    ));
                }
                if s.lambda_star[i] != t.lambda[i] {
                    return fail(format!(
                        "eps = 1: lambda*_src({name}) = {} != lambda_tgt({name}) = {}",
                        s.lambda_star[i], t.lambda[i]
                    ));
                }
                if t.lambda[i] <= t.lambda_star[i] {
                    return fail(format!("eps = 1 needs lambda_tgt({name}) > lambda*_tgt({name})"));
                }
            } else {
                if s.lambda[i] != t.lambda[i] {
                    return fail(format!(
                        "eps = 0: lambda_src({name}) = {} != lambda_tgt({name}) = {}",
                        s.lambda[i], t.lambda[i]
                    ));
                }
                if s.lambda_star[i] != t.lambda_star[i] {
                    return fail(format!(
                        "eps = 0: lambda*_src({name}) = {} != lambda*_tgt({name}) = {}",
                        s.lambda_star[i], t.lambda_star[i]
                    ));
                }
            }
        }
        Self::new_unchecked(cfg)
    }

    /// Builds the comparison without the label equations, e.g. to watch a
    /// perturbed configuration fail verification.
    pub fn new_unchecked(cfg: &ComparisonConfig) -> Result<Self, ComparisonError> {
        let source = AffineHecke::new(
            &cfg.target_datum.with_opposite_basis()?,
            cfg.source_labels.clone(),
        )?;
        let target = AffineHecke::new(&cfg.target_datum, cfg.target_labels.clone())?;
        Ok(Comparison {
            source,
            target,
            eps: cfg.eps.clone(),
        })
    }

    pub fn hom_spec(&self) -> Result<HomSpec<'_>, ComparisonError> {
        let t = &self.target;
        let n = t.rank_y();
        let t_images = (0..t.simple_count())
            .map(|i| {
                let g = if self.eps[i] { t.t_s0(i) } else { t.t_s(i) };
                t.iota(&g)
            })
            .collect::<Result<_, _>>()?;
        let theta_images = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                t.theta(e)
            })
            .collect();
        Ok(HomSpec {
            source: &self.source,
            target: t,
            t_images,
            theta_images,
            meta: None,
        })
    }

    /// Relation checks plus `iota(I(theta_{-a'^v})) = theta_{a'^v}` per simple root.
    pub fn report(&self, bound: i64, exec: Exec) -> Result<ValidationReport, ComparisonError> {
        let spec = self.hom_spec()?;
        let mut rep = verify_hom(&spec, bound, exec);
        let t = &self.target;
        for i in 0..t.simple_count() {
            let av = t.datum().simple_coroot(i).to_vec();
            let neg: Vec<i64> = av.iter().map(|x| -x).collect();
            let img = spec.image_theta(&neg).map(|x| t.iota(&x));
            let ok = matches!(img, Some(Ok(ref y)) if *y == t.theta(av.clone()));
            rep.push(Check::from_witness(
                format!("shadow[s{}]", i + 1),
                (!ok).then(|| "iota(I(th[-a^v])) != th[a^v]".to_string()),
            ));
        }
        Ok(rep)
    }
}
