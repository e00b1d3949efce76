//! Structure-preserving maps between Hecke algebras.

pub mod classify;
pub mod comparison;
pub mod hom;
pub mod iso;
pub mod refine;

pub use classify::{a1_classify, params_from_p, A1Verdict, Classification, ParamDictionary};
pub use comparison::{Comparison, ComparisonConfig, ComparisonError};
pub use hom::{verify_hom, HomSpec, RankOneMeta};
pub use iso::{labels_from_special_point, IsoError, StandardBernstein};
pub use refine::{refine_datum, refinement_report, RefineError};
