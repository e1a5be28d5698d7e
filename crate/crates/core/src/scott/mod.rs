//! Infinitary sentences over abelian p-groups: the subgroup formulas
//! `φ_β`, dimension sentences, Scott sentences of Ulm profiles, their
//! complexity, and evaluation in explicit finite groups.

mod build;
mod complexity;
mod eval;
mod formula;

pub use build::{
    build_length_sentence, build_phi_g, build_theta, certify_exactness, classify, omega_power_sentence,
    subgroup_formula, Certificate, Classification,
};
pub use complexity::{sup_of_sequence, Complexity};
pub use eval::{eval, EvalMode, Evaluator};
pub use formula::{annotate, complexity_of, Family, FamilyRule, Formula, Index, IndexSet, LinearTerm, Named, Var};

use thiserror::Error;

use crate::backforth::BackForthError;
use crate::pgroup::GroupError;
use crate::profile::ProfileError;

#[derive(Debug, Error)]
pub enum ScottError {
    #[error("coefficient overflow in `{0}`")]
    Overflow(String),
    #[error("family members do not grow monotonically in `{0}`")]
    NotMonotone(String),
    #[error("no finite bound for `{0}`")]
    NoFiniteSupport(String),
    #[error("variable x{0} is unbound")]
    Unbound(Var),
    #[error("prime mismatch: sentence over p={sentence}, group over p={group}")]
    PrimeMismatch { sentence: u64, group: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    BackForth(#[from] BackForthError),
}
