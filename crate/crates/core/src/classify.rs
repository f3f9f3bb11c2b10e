//! Static and enumerative classification of recognizers.

use serde::{Deserialize, Serialize};

use crate::enumerate::{shortlex, Budget};
use crate::error::EvalError;
use crate::expr::Expr;
use crate::interp::{raw_score_row, run_traced, score_row};
use crate::ir::{Masking, Recognizer, ScoreSpec};
use crate::value::{is_binary, ExtScore};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TieWitness {
    pub word: String,
    /// Layer produced by the attention line.
    pub layer: usize,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub finite_type: bool,
    pub separable_scores: bool,
    pub bilinear_scores: bool,
    pub binary_scores: bool,
    pub maskings_used: Vec<Masking>,
    /// Length bound used for the enumerative checks.
    pub checked_up_to: usize,
    pub ties_possible: bool,
    pub tie_witness: Option<TieWitness>,
}

impl Classification {
    /// The class name in the UHAT family, e.g. `F-MUHAT` or `GUHAT`.
    pub fn class_name(&self) -> String {
        let f = if self.finite_type { "F-" } else { "" };
        let m = if self.maskings_used.iter().any(|m| *m != Masking::NoMask) { "M" } else { "" };
        let g = if self.bilinear_scores { "" } else { "G" };
        format!("{f}{m}{g}UHAT")
    }
}

/// An expression score is separable when it reads at most one side.
fn expr_one_sided(e: &Expr) -> bool {
    !(e.reads_i() && e.reads_j())
}

/// Whether a score has the form `Σ fₖ(x)·gₖ(y)` by inspection.
pub fn score_is_separable(s: &ScoreSpec) -> bool {
    match s {
        ScoreSpec::Separable(_) | ScoreSpec::Table(_) | ScoreSpec::Bilinear(_) => true,
        ScoreSpec::Expr(e) => expr_one_sided(e),
        ScoreSpec::Guarded { .. } => false,
        ScoreSpec::Shifted { inner, offset } => score_is_separable(inner) && expr_one_sided(offset),
    }
}

/// Static part of the binary check: tables and literal expressions whose
/// values are visible without running the program.
fn statically_nonbinary(s: &ScoreSpec) -> bool {
    match s {
        ScoreSpec::Table(t) => t.entries.iter().flatten().any(|r| !is_binary(r)),
        ScoreSpec::Expr(Expr::Rat(r)) => !is_binary(r),
        _ => false,
    }
}

/// Classifies `rec`, enumerating every word of length `1..=bound` for the
/// binary-score and tie checks.
pub fn classify_program(rec: &Recognizer, bound: usize) -> Result<Classification, EvalError> {
    let mut maskings_used = Vec::new();
    let mut separable = true;
    let mut bilinear = true;
    let mut binary = true;
    for (_, a) in rec.attention_lines() {
        if !maskings_used.contains(&a.mask) {
            maskings_used.push(a.mask);
        }
        separable &= score_is_separable(&a.score);
        bilinear &= matches!(a.score, ScoreSpec::Bilinear(_));
        binary &= !statically_nonbinary(&a.score);
    }
    let mut tie_witness = None;
    let has_attention = rec.attention_lines().next().is_some();
    if has_attention && bound > 0 {
        Budget::default().check_words(rec.alphabet().len(), bound)?;
        'words: for w in shortlex(rec.alphabet(), bound).skip(1) {
            let n = w.len();
            let trace = run_traced(rec, &w)?;
            for (layer, a) in rec.attention_lines() {
                let prior = &trace.layers[..layer];
                for i in 0..n {
                    if binary {
                        for s in raw_score_row(a, prior, i, n)? {
                            if !s.finite().is_some_and(is_binary) {
                                binary = false;
                            }
                        }
                    }
                    if tie_witness.is_none() && has_tie(&score_row(a, prior, i, n)?) {
                        tie_witness = Some(TieWitness { word: w.iter().collect(), layer, position: i });
                    }
                }
            }
            if !binary && tie_witness.is_some() {
                break 'words;
            }
        }
    }
    Ok(Classification {
        finite_type: rec.init.is_finite_type(),
        separable_scores: separable,
        bilinear_scores: bilinear,
        binary_scores: binary,
        maskings_used,
        checked_up_to: bound,
        ties_possible: tie_witness.is_some(),
        tie_witness,
    })
}

/// Whether the maximum of the admitted scores is attained more than once.
pub fn has_tie(row: &[Option<ExtScore>]) -> bool {
    let admitted: Vec<&ExtScore> = row.iter().flatten().collect();
    match admitted.iter().max() {
        Some(m) => admitted.iter().filter(|s| *s == m).count() > 1,
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::int;

    #[test]
    fn tie_detection() {
        let f = |v: i64| Some(ExtScore::Finite(int(v)));
        assert!(has_tie(&[f(0), f(0)]));
        assert!(!has_tie(&[f(0), f(-1)]));
        assert!(!has_tie(&[f(0), None, f(-1)]));
        assert!(has_tie(&[None, f(2), f(1), f(2)]));
        assert!(!has_tie(&[None, None]));
    }
}
