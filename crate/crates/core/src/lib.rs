//! Interpreter, program transformations and verification tools for
//! unique-hard-attention recognizers.

pub mod analysis;
pub mod classify;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod interp;
pub mod ir;
pub mod logic;
pub mod programs;
pub mod transforms;
pub mod value;

pub use enumerate::{shortlex, Budget, Language};
pub use classify::{classify_program, Classification};
pub use error::{EvalError, LibraryError, ProgramError};
pub use expr::{EvalCtx, Expr, Side};
pub use interp::{recognize, run_program, run_traced, Trace};
pub use ir::{
    Attention, BilinearScore, InitKind, Initialization, Line, Masking, ReadPos, Recognizer,
    ScoreSpec, SepTerm, SeparableScore, TableScore, TieBreak,
};
pub use programs::{NamedRecognizer, Oracle};
pub use value::{ExtScore, Rat, Value};
