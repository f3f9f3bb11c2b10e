//! Loading programs and languages named on the command line.

use std::path::Path;

use thiserror::Error;
use uhatlab_core::enumerate::Language;
use uhatlab_core::logic::{eval_fo, ltl_recognize, FoFormula, LogicError, LtlFormula, LtlMode, MonRegistry};
use uhatlab_core::programs::{
    build_brasp_contains_ab, build_dyck1, build_dyck1_unmasked, build_palindrome_guhat, build_palindrome_masked,
    build_palindrome_separable, oracle_by_name,
};
use uhatlab_core::{EvalError, LibraryError, Oracle, Recognizer};

use crate::dsl::parse_program;
use crate::error::{ParseError, SyntaxError};
use crate::formula::{parse_fo, parse_ltl};

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Formula { path: String, source: SyntaxError },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Library(#[from] LibraryError),
    #[error("{0}")]
    Logic(#[from] LogicError),
    #[error("unknown built-in program {0:?}")]
    UnknownBuiltin(String),
    #[error("{0} needs --alphabet")]
    NoAlphabet(String),
}

pub fn read(path: &str) -> Result<String, SourceError> {
    std::fs::read_to_string(path).map_err(|source| SourceError::Io { path: path.into(), source })
}

fn extension(path: &str) -> Option<&str> {
    Path::new(path).extension().and_then(|e| e.to_str())
}

/// Built-in programs: `palindrome-guhat`, `palindrome-masked`,
/// `palindrome-separable`, `dyck1-<D>`, `dyck1-unmasked-<D>`,
/// `brasp-contains-ab`.
pub fn builtin_program(name: &str) -> Result<Recognizer, SourceError> {
    let ab = ['a', 'b'];
    let depth = |prefix: &str| name.strip_prefix(prefix).and_then(|d| d.parse::<usize>().ok());
    let named = match name {
        "palindrome-guhat" => build_palindrome_guhat(&ab)?,
        "palindrome-masked" => build_palindrome_masked(&ab)?,
        "palindrome-separable" => build_palindrome_separable(&ab)?,
        "brasp-contains-ab" => build_brasp_contains_ab(),
        _ => match (depth("dyck1-unmasked-"), depth("dyck1-")) {
            (Some(d), _) => build_dyck1_unmasked(d)?,
            (None, Some(d)) => build_dyck1(d)?,
            _ => return Err(SourceError::UnknownBuiltin(name.into())),
        },
    };
    Ok(named.rec)
}

/// A program from `builtin:<name>`, a `.json` file or a DSL file.
pub fn load_program(locator: &str) -> Result<Recognizer, SourceError> {
    if let Some(name) = locator.strip_prefix("builtin:") {
        return builtin_program(name);
    }
    let text = read(locator)?;
    if extension(locator) == Some("json") {
        let rec: Recognizer = serde_json::from_str(&text).map_err(|source| SourceError::Json { path: locator.into(), source })?;
        rec.validate().map_err(|e| SourceError::Parse { path: locator.into(), source: e.into() })?;
        return Ok(rec);
    }
    parse_program(&text).map_err(|source| SourceError::Parse { path: locator.into(), source })
}

pub fn load_ltl(path: &str) -> Result<LtlFormula, SourceError> {
    parse_ltl(&read(path)?).map_err(|source| SourceError::Formula { path: path.into(), source })
}

pub fn load_fo(path: &str) -> Result<FoFormula, SourceError> {
    parse_fo(&read(path)?).map_err(|source| SourceError::Formula { path: path.into(), source })
}

/// Future formulas are read at the first position, past ones at the last.
pub fn default_mode(f: &LtlFormula) -> LtlMode {
    if f.is_future() {
        LtlMode::FutureAtFirst
    } else {
        LtlMode::PastAtLast
    }
}

/// Anything that decides membership of a word.
pub enum LanguageSource {
    Program(Recognizer),
    Oracle(String, Oracle),
    Ltl { formula: LtlFormula, mode: LtlMode, env: MonRegistry, empty_accepts: bool },
    Fo { formula: FoFormula, env: MonRegistry, empty_accepts: bool },
}

impl LanguageSource {
    /// `oracle:<name>`, a `.ltl` or `.fo` file, or a program (see
    /// [`load_program`]). Formulas reject the empty word.
    pub fn load(locator: &str) -> Result<Self, SourceError> {
        if let Some(name) = locator.strip_prefix("oracle:") {
            return Ok(LanguageSource::Oracle(name.into(), oracle_by_name(name)?));
        }
        let env = MonRegistry::standard();
        match extension(locator) {
            Some("ltl") => {
                let formula = load_ltl(locator)?;
                let mode = default_mode(&formula);
                let src = LanguageSource::Ltl { formula, mode, env, empty_accepts: false };
                src.probe()?;
                Ok(src)
            }
            Some("fo") => {
                let src = LanguageSource::Fo { formula: load_fo(locator)?, env, empty_accepts: false };
                src.probe()?;
                Ok(src)
            }
            _ => Ok(LanguageSource::Program(load_program(locator)?)),
        }
    }

    /// Surfaces static formula errors (unknown predicates, free variables,
    /// mixed directions) before enumeration starts.
    fn probe(&self) -> Result<(), LogicError> {
        let w = ['\u{0}'];
        match self {
            LanguageSource::Ltl { formula, mode, env, .. } => ltl_recognize(formula, &w, *mode, env).map(drop),
            LanguageSource::Fo { formula, env, .. } => eval_fo(formula, &w, env).map(drop),
            _ => Ok(()),
        }
    }

    /// Sets the empty-word verdict of formula sources; others are unchanged.
    pub fn set_formula_empty(&mut self, accept: bool) {
        if let LanguageSource::Ltl { empty_accepts, .. } | LanguageSource::Fo { empty_accepts, .. } = self {
            *empty_accepts = accept;
        }
    }

    pub fn alphabet(&self) -> Option<Vec<char>> {
        match self {
            LanguageSource::Program(r) => Some(r.alphabet().to_vec()),
            _ => None,
        }
    }

    pub fn alphabet_or(&self, given: Option<&str>, what: &str) -> Result<Vec<char>, SourceError> {
        match given {
            Some(s) => Ok(s.chars().collect()),
            None => self.alphabet().ok_or_else(|| SourceError::NoAlphabet(what.into())),
        }
    }
}

impl Language for LanguageSource {
    fn accepts(&self, w: &[char]) -> Result<bool, EvalError> {
        let logic = |r: Result<bool, LogicError>| r.map_err(|e| EvalError::UnresolvedReference(e.to_string()));
        match self {
            LanguageSource::Program(r) => r.recognize(w),
            LanguageSource::Oracle(_, o) => Ok(o(w)),
            LanguageSource::Ltl { empty_accepts, .. } | LanguageSource::Fo { empty_accepts, .. } if w.is_empty() => {
                Ok(*empty_accepts)
            }
            LanguageSource::Ltl { formula, mode, env, .. } => logic(ltl_recognize(formula, w, *mode, env)),
            LanguageSource::Fo { formula, env, .. } => logic(eval_fo(formula, w, env)),
        }
    }
}
