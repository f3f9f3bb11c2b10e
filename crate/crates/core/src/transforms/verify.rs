//! Exhaustive verification of a pass.

use serde::{Deserialize, Serialize};

use crate::analysis::check_equivalence;
use crate::classify::{classify_program, Classification};
use crate::error::EvalError;
use crate::ir::Recognizer;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassReport {
    pub pass: String,
    pub before: Classification,
    pub after: Classification,
    pub checked_up_to: usize,
    pub counterexample: Option<String>,
    pub layer_delta: i64,
    pub notes: Vec<String>,
}

impl PassReport {
    pub fn preserved(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Compares `before` and `after` on every word over the alphabet of
/// `before` up to `max_len`. Classifications use the same length bound,
/// capped at 6 for the tie and binary checks.
pub fn verify_pass(
    pass: &str,
    before: &Recognizer,
    after: &Recognizer,
    max_len: usize,
) -> Result<PassReport, EvalError> {
    let alphabet = before.alphabet();
    let cex = check_equivalence(before, after, alphabet, max_len)?;
    let bound = max_len.min(6);
    let cb = classify_program(before, bound)?;
    let ca = classify_program(after, bound)?;
    let mut notes = Vec::new();
    let terms: Vec<String> = after
        .attention_lines()
        .filter_map(|(l, a)| match &a.score {
            crate::ir::ScoreSpec::Separable(s) => Some(format!("L{l}: k={}", s.terms.len())),
            crate::ir::ScoreSpec::Bilinear(b) => Some(format!("L{l}: bilinear {}x{}", b.matrix.len(), b.matrix.first().map_or(0, Vec::len))),
            _ => None,
        })
        .collect();
    if !terms.is_empty() {
        notes.push(format!("score terms: {}", terms.join(", ")));
    }
    Ok(PassReport {
        pass: pass.to_string(),
        before: cb,
        after: ca,
        checked_up_to: max_len,
        counterexample: cex.map(|w| w.into_iter().collect()),
        layer_delta: after.depth() as i64 - before.depth() as i64,
        notes,
    })
}
