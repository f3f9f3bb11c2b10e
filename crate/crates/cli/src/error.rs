use std::fmt;

use thiserror::Error;
use uhatlab_core::ProgramError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at {}:{}: {}", self.line, self.col, self.msg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("static check failed: {0}")]
    StaticCheck(#[from] ProgramError),
}
