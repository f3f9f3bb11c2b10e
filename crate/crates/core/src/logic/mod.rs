//! Finite-word LTL and first-order evaluators used as independent language
//! oracles.

pub mod fixtures;
mod fo;
mod ltl;
mod mon;

pub use fo::{eval_fo, FoFormula};
pub use ltl::{eval_ltl, eval_ltl_all, ltl_recognize, LtlFormula, LtlMode};
pub use mon::{MonPred, MonRegistry};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("position {i} out of range for a word of length {n}")]
    PositionOutOfRange { i: usize, n: usize },
    #[error("unknown monadic predicate {0:?}")]
    UnknownMonPred(String),
    #[error("formulas are not evaluated on the empty word")]
    EmptyWord,
    #[error("{0}")]
    ModeFormulaMismatch(&'static str),
    #[error("free variable {0:?} in sentence")]
    FreeVariable(String),
}
