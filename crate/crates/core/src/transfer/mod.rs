//! Locale morphisms `f: A -> B` and the maps they induce from names over `A`
//! to names over `B`.

mod checks;
mod epsilon;
mod lift;
mod morphism;

use thiserror::Error;

use crate::hset::HSetError;
use crate::names::NameError;
use crate::valuation::EvalError;

pub use checks::{
    check_atomic_preservation, check_functoriality, check_identity_lift,
    check_positive_bounded_preservation, positive_family, Check, LiftReport, Record,
};
pub use epsilon::{epsilon_for_witness, epsilon_hset_morphism, pushed_domain};
pub use lift::{
    all_witnesses, first_proposal_images, is_generalized_related, lift, Lifter, StrictRelation,
    WitnessPair, WitnessedLift, MAX_SURJECTION_DOMAIN,
};
pub use morphism::{check_locale_laws, parse_morphism, LocaleMorphism, MorphismViolation};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TransferError {
    #[error("not a locale morphism: {0}")]
    Violation(#[from] MorphismViolation),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("`{0}` is not an element label")]
    UnknownLabel(String),
    #[error("no algebra named `{0}`")]
    UnknownAlgebra(String),
    #[error("`{0}` has no image")]
    NotTotal(String),
    #[error("element or name belongs to a different algebra")]
    CrossAlgebra,
    #[error("morphisms do not compose")]
    NotComposable,
    #[error("domain of size {domain} exceeds the surjection search limit {limit}")]
    BudgetExceeded { domain: usize, limit: usize },
    #[error("formula is not positive and bounded")]
    NotPositiveBounded,
    #[error(transparent)]
    Name(#[from] NameError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    HSet(#[from] HSetError),
}
