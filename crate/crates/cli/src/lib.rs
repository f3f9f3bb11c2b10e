//! Command-line front end: program and formula syntax, file loading and
//! subcommands.

pub mod app;
pub mod dsl;
pub mod error;
pub mod formula;
pub mod lexer;
pub mod source;

pub use app::run_cli;
