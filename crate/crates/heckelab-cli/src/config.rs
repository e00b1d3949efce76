//! JSON configuration files.
//!
//! One file may carry several sections; each suite reads the ones it needs.
//! Rationals are written as integers or as `"a/b"` strings, scalars as
//! expressions such as `"q^2"` or `"t^3 - 1"`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use heckelab::affine::{examples::alcove_point, AffineBasis, AffineFn, AffineRootSystem, RootFamily};
use heckelab::bernstein::{AffineHecke, LabelFunctions};
use heckelab::maps::{ComparisonConfig, RankOneMeta};
use heckelab::quotient::MarkedFamily;
use heckelab::{BasedRootDatum, Rational, Scalar};

use crate::CliError;

/// An integer or an `"a/b"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Rat {
    Int(i64),
    Text(String),
}

impl Rat {
    pub fn value(&self) -> Result<Rational, CliError> {
        match self {
            Rat::Int(n) => Ok(Rational::from_integer((*n).into())),
            Rat::Text(s) => s
                .trim()
                .parse::<Rational>()
                .map_err(|_| CliError::Config(format!("bad rational {s:?}"))),
        }
    }
}

fn rats(v: &[Rat]) -> Result<Vec<Rational>, CliError> {
    v.iter().map(Rat::value).collect()
}

fn scalar(s: &str) -> Result<Scalar, CliError> {
    s.parse()
        .map_err(|e| CliError::Config(format!("bad scalar {s:?}: {e}")))
}

/// A root datum, given in full or by a Cartan matrix, with labels.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct AlgebraSpec {
    pub datum: Option<BasedRootDatum>,
    pub cartan: Option<Vec<Vec<i64>>>,
    /// Defaults to `lambda = lambda* = 1` everywhere.
    pub labels: Option<LabelFunctions>,
}

impl AlgebraSpec {
    pub fn is_given(&self) -> bool {
        self.datum.is_some() || self.cartan.is_some()
    }

    pub fn datum(&self) -> Result<BasedRootDatum, CliError> {
        match (&self.datum, &self.cartan) {
            (Some(d), None) => Ok(d.clone()),
            (None, Some(c)) => Ok(BasedRootDatum::from_cartan(c)),
            (Some(_), Some(_)) => Err(CliError::Config(
                "give either `datum` or `cartan`, not both".into(),
            )),
            (None, None) => Err(CliError::Config("no `datum` or `cartan`".into())),
        }
    }

    pub fn labels(&self, datum: &BasedRootDatum) -> LabelFunctions {
        self.labels
            .clone()
            .unwrap_or_else(|| LabelFunctions::equal(vec![1; datum.basis.len()]))
    }

    pub fn build(&self) -> Result<AffineHecke, CliError> {
        let d = self.datum()?;
        let labels = self.labels(&d);
        AffineHecke::new(&d, labels).map_err(|e| CliError::Algebra(format!("BernsteinError: {e}")))
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct FamilySpec {
    pub gradient: Vec<Rat>,
    pub offset: Rat,
    pub period: Rat,
}

impl FamilySpec {
    pub fn family(&self) -> Result<RootFamily, CliError> {
        let period = self.period.value()?;
        if period <= Rational::from_integer(0.into()) {
            return Err(CliError::Config("family periods must be positive".into()));
        }
        Ok(RootFamily::new(
            rats(&self.gradient)?,
            self.offset.value()?,
            period,
        ))
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct AffineSpec {
    pub dim: usize,
    pub families: Vec<FamilySpec>,
    pub inner_product: Option<Vec<Vec<Rat>>>,
    /// A point of the open fundamental chamber.
    pub point: Option<Vec<Rat>>,
    /// Special point for the Bernstein side; defaults to the origin.
    pub special_point: Option<Vec<Rat>>,
    /// `log_q` of the parameter of each simple affine reflection, in
    /// chamber-wall order; defaults to 1.
    pub parameters: Option<Vec<i32>>,
    /// Round trips are checked on `T_w` with `l(w)` up to this; default 6.
    pub max_length: Option<usize>,
}

impl AffineSpec {
    pub fn system(&self) -> Result<AffineRootSystem, CliError> {
        let fams = self
            .families
            .iter()
            .map(FamilySpec::family)
            .collect::<Result<_, _>>()?;
        let inner = self
            .inner_product
            .as_ref()
            .map(|m| m.iter().map(|r| rats(r)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        AffineRootSystem::new(self.dim, fams, inner).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn basis(&self, sys: &AffineRootSystem) -> Result<AffineBasis, CliError> {
        let x = match &self.point {
            Some(p) => rats(p)?,
            None => alcove_point(sys),
        };
        sys.basis_from_point(&x)
            .map_err(|e| CliError::Config(format!("`point` does not pick a chamber: {e}")))
    }

    pub fn special_point(&self) -> Result<Vec<Rational>, CliError> {
        match &self.special_point {
            Some(p) => rats(p),
            None => Ok(vec![Rational::from_integer(0.into()); self.dim]),
        }
    }
}

/// Either a matched rank-one shape (`meta`) or plain generator images.
#[derive(Debug, Clone, Deserialize)]
pub struct HomConfig {
    pub source: AlgebraSpec,
    pub target: AlgebraSpec,
    /// `"T[s1]"` and `"th[e1]"` style keys mapped to target expressions.
    pub images: BTreeMap<String, String>,
    pub meta: Option<MetaSpec>,
    /// `valid_even`, `valid_odd`, `invalid` or `homomorphism`.
    pub expect: Option<String>,
    /// Optional `p`, `p'` pair for the parameter dictionary.
    pub dictionary: Option<DictionarySpec>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MetaSpec {
    pub k: Rat,
    pub n: Rat,
    pub c: Option<String>,
    pub cprime: Option<String>,
}

impl MetaSpec {
    pub fn meta(&self) -> Result<RankOneMeta, CliError> {
        let doubled = |r: &Rat, name: &str| -> Result<i64, CliError> {
            let v = r.value()? * Rational::from_integer(2.into());
            if !v.is_integer() {
                return Err(CliError::Config(format!("`{name}` must be a multiple of 1/2")));
            }
            i64::try_from(v.to_integer()).map_err(|_| CliError::Config(format!("`{name}` is too large")))
        };
        Ok(RankOneMeta {
            k2: doubled(&self.k, "k")?,
            n2: doubled(&self.n, "n")?,
            c: self
                .c
                .as_deref()
                .map(scalar)
                .transpose()?
                .unwrap_or_else(Scalar::one),
            c_prime: self
                .cprime
                .as_deref()
                .map(scalar)
                .transpose()?
                .unwrap_or_else(Scalar::one),
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct DictionarySpec {
    pub p: String,
    pub p_prime: String,
    /// `[q_alpha, q_alpha*]` candidates expected, in order.
    pub expect: Option<Vec<[String; 2]>>,
}

impl DictionarySpec {
    pub fn values(&self) -> Result<(Scalar, Scalar), CliError> {
        Ok((scalar(&self.p)?, scalar(&self.p_prime)?))
    }

    pub fn expected(&self) -> Result<Option<Vec<(Scalar, Scalar)>>, CliError> {
        self.expect
            .as_ref()
            .map(|v| v.iter().map(|[a, b]| Ok((scalar(a)?, scalar(b)?))).collect())
            .transpose()
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ComparisonSpec {
    pub target: AlgebraSpec,
    pub source_labels: LabelFunctions,
    pub eps: Vec<u8>,
}

impl ComparisonSpec {
    pub fn config(&self) -> Result<ComparisonConfig, CliError> {
        let target_datum = self.target.datum()?;
        let target_labels = self.target.labels(&target_datum);
        let eps = self
            .eps
            .iter()
            .map(|&e| match e {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(CliError::Config("eps flags are 0 or 1".into())),
            })
            .collect::<Result<_, _>>()?;
        Ok(ComparisonConfig {
            target_datum,
            target_labels,
            source_labels: self.source_labels.clone(),
            eps,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct RootSpec {
    pub gradient: Vec<Rat>,
    pub constant: Rat,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MarkedSpec {
    pub root: FamilySpec,
    pub p: String,
    pub p_star: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct QuotientSpec {
    #[serde(rename = "J", default)]
    pub j: Vec<RootSpec>,
    pub gamma: Vec<MarkedSpec>,
    /// Special point of the face, in ambient coordinates; defaults to the origin.
    pub e: Option<Vec<Rat>>,
}

impl QuotientSpec {
    pub fn j(&self) -> Result<Vec<AffineFn>, CliError> {
        self.j
            .iter()
            .map(|r| Ok(AffineFn::new(rats(&r.gradient)?, r.constant.value()?)))
            .collect()
    }

    pub fn gamma(&self) -> Result<Vec<MarkedFamily>, CliError> {
        self.gamma
            .iter()
            .map(|m| {
                Ok(MarkedFamily {
                    family: m.root.family()?,
                    p: scalar(&m.p)?,
                    p_star: m.p_star.as_deref().map(scalar).transpose()?,
                })
            })
            .collect()
    }

    pub fn e(&self, dim: usize) -> Result<Vec<Rational>, CliError> {
        match &self.e {
            Some(p) => rats(p),
            None => Ok(vec![Rational::from_integer(0.into()); dim]),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct Config {
    #[serde(flatten)]
    pub algebra: AlgebraSpec,
    pub affine: Option<AffineSpec>,
    pub hom: Option<HomConfig>,
    pub comparison: Option<ComparisonSpec>,
    pub quotient: Option<QuotientSpec>,
    /// Random samples per randomized check; default 200.
    pub samples: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_and_meta() {
        let r: Vec<Rat> = serde_json::from_str(r#"[3, "-1/2", " 4/6 "]"#).unwrap();
        let v = rats(&r).unwrap();
        assert_eq!(v[1], Rational::new((-1).into(), 2.into()));
        assert_eq!(v[2], Rational::new(2.into(), 3.into()));
        assert!(Rat::Text("x".into()).value().is_err());
        let m: MetaSpec = serde_json::from_str(r#"{"k": "1/2", "n": 2, "cprime": "t^-1"}"#).unwrap();
        let m = m.meta().unwrap();
        assert_eq!((m.k2, m.n2), (1, 4));
        assert_eq!(m.c_prime, Scalar::t_pow(-1));
        let bad: MetaSpec = serde_json::from_str(r#"{"k": "1/3", "n": 1}"#).unwrap();
        assert!(bad.meta().is_err());
    }

    #[test]
    fn datum_sources() {
        let cfg: Config = serde_json::from_str(r#"{"cartan": [[2]]}"#).unwrap();
        let alg = cfg.algebra.build().unwrap();
        assert_eq!(alg.labels(), &LabelFunctions::equal(vec![1]));
        let both: Config = serde_json::from_str(
            r#"{"cartan": [[2]], "datum": {"pairing": [[1]], "roots": [[2], [-2]], "coroots": [[1], [-1]], "basis": [0]}}"#,
        )
        .unwrap();
        assert!(both.algebra.build().is_err());
        assert!(!Config::default().algebra.is_given());
    }
}
