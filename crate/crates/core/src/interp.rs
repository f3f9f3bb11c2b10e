//! Exact execution of recognizers on words.

use crate::error::EvalError;
use crate::expr::EvalCtx;
use crate::ir::{Attention, Line, ReadPos, Recognizer, TieBreak};
use crate::value::{ExtScore, Value};

/// Full execution record of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// `layers[ℓ][p]`, with `d + 1` rows of length `n`.
    pub layers: Vec<Vec<Value>>,
    /// Per line: `None` for point-wise lines, otherwise the selected `j`
    /// per position (`None` where the default was used).
    pub selected: Vec<Option<Vec<Option<usize>>>>,
}

/// Scores of row `i` over all `j`; `None` where the mask rejects `j`.
pub fn score_row(
    att: &Attention,
    layers: &[Vec<Value>],
    i: usize,
    n: usize,
) -> Result<Vec<Option<ExtScore>>, EvalError> {
    (0..n)
        .map(|j| {
            if att.mask.admits(i, j) {
                att.score.eval(&EvalCtx::pair(layers, i, j, n)).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect()
}

/// Scores of row `i` over all `j`, ignoring the mask.
pub fn raw_score_row(
    att: &Attention,
    layers: &[Vec<Value>],
    i: usize,
    n: usize,
) -> Result<Vec<ExtScore>, EvalError> {
    (0..n)
        .map(|j| att.score.eval(&EvalCtx::pair(layers, i, j, n)))
        .collect()
}

/// Argmax over admitted scores with the given tie-break.
pub fn select(row: &[Option<ExtScore>], tie: TieBreak) -> Option<usize> {
    let mut best: Option<(usize, &ExtScore)> = None;
    for (j, s) in row.iter().enumerate() {
        let Some(s) = s else { continue };
        best = match best {
            None => Some((j, s)),
            Some((bj, bs)) => {
                if s > bs || (s == bs && tie == TieBreak::Rightmost) {
                    Some((j, s))
                } else {
                    Some((bj, bs))
                }
            }
        };
    }
    best.map(|(j, _)| j)
}

/// Computes one attention layer. Returns the new layer and the selected
/// index per position.
pub fn attention_step(
    att: &Attention,
    layers: &[Vec<Value>],
    n: usize,
) -> Result<(Vec<Value>, Vec<Option<usize>>), EvalError> {
    let mut out = Vec::with_capacity(n);
    let mut picks = Vec::with_capacity(n);
    for i in 0..n {
        let row = score_row(att, layers, i, n)?;
        let pick = select(&row, att.tie);
        let v = match pick {
            Some(j) => att.value.eval(&EvalCtx::pair(layers, i, j, n))?,
            None => att.default.eval(&EvalCtx::at(layers, i, n))?,
        };
        out.push(v);
        picks.push(pick);
    }
    Ok((out, picks))
}

/// Runs every line and records selections.
pub fn run_traced(rec: &Recognizer, word: &[char]) -> Result<Trace, EvalError> {
    let n = word.len();
    let mut layers = vec![rec.init.encode(word)?];
    let mut selected = Vec::with_capacity(rec.lines.len());
    for line in &rec.lines {
        match line {
            Line::Pointwise(e) => {
                let col = (0..n)
                    .map(|i| e.eval(&EvalCtx::at(&layers, i, n)))
                    .collect::<Result<Vec<_>, _>>()?;
                layers.push(col);
                selected.push(None);
            }
            Line::Attention(att) => {
                let (col, picks) = attention_step(att, &layers, n)?;
                layers.push(col);
                selected.push(Some(picks));
            }
        }
    }
    Ok(Trace { layers, selected })
}

/// All layers of a run: `d + 1` lists of length `n`.
pub fn run_program(rec: &Recognizer, word: &[char]) -> Result<Vec<Vec<Value>>, EvalError> {
    run_traced(rec, word).map(|t| t.layers)
}

/// Evaluates the acceptance predicate on a finished run.
pub fn verdict(rec: &Recognizer, layers: &[Vec<Value>]) -> Result<bool, EvalError> {
    let n = layers[0].len();
    let pos = match rec.read_pos {
        ReadPos::Last => n - 1,
        ReadPos::First => 0,
    };
    match rec.valid.eval(&EvalCtx::at(layers, pos, n))? {
        Value::Bool(b) => Ok(b),
        other => Err(EvalError::TypeMismatch {
            op: "accept",
            detail: format!("acceptance predicate must be boolean, got {}", other.kind()),
        }),
    }
}

pub fn recognize(rec: &Recognizer, word: &[char]) -> Result<bool, EvalError> {
    if word.is_empty() {
        return Ok(rec.empty_accepts);
    }
    verdict(rec, &run_program(rec, word)?)
}

impl Recognizer {
    pub fn recognize(&self, word: &[char]) -> Result<bool, EvalError> {
        recognize(self, word)
    }

    pub fn run(&self, word: &[char]) -> Result<Trace, EvalError> {
        run_traced(self, word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::ir::{InitKind, Initialization, Masking, ScoreSpec};
    use crate::value::int;

    fn att(mask: Masking, tie: TieBreak, score: Expr) -> Attention {
        Attention {
            mask,
            tie,
            score: ScoreSpec::Expr(score),
            value: Expr::PosJ,
            default: Expr::int(-1),
        }
    }

    fn pos_layers(n: usize) -> Vec<Vec<Value>> {
        let init = Initialization::new(InitKind::CharPosLen, ['a']);
        vec![init.encode(&vec!['a'; n]).unwrap()]
    }

    #[test]
    fn rightmost_picks_last_of_ties() {
        let a = att(Masking::NoMask, TieBreak::Rightmost, Expr::int(0));
        let (col, picks) = attention_step(&a, &pos_layers(2), 2).unwrap();
        assert_eq!(picks, vec![Some(1), Some(1)]);
        assert_eq!(col, vec![Value::int(1), Value::int(1)]);
    }

    #[test]
    fn leftmost_picks_first_of_ties() {
        let a = att(Masking::NoMask, TieBreak::Leftmost, Expr::int(0));
        let (_, picks) = attention_step(&a, &pos_layers(3), 3).unwrap();
        assert_eq!(picks, vec![Some(0); 3]);
    }

    #[test]
    fn future_mask_uses_default_at_zero() {
        let a = att(Masking::StrictFuture, TieBreak::Rightmost, Expr::PosJ);
        let (col, picks) = attention_step(&a, &pos_layers(3), 3).unwrap();
        assert_eq!(picks, vec![None, Some(0), Some(1)]);
        assert_eq!(col[0], Value::int(-1));
    }

    #[test]
    fn past_mask_uses_default_at_end() {
        let a = att(Masking::StrictPast, TieBreak::Leftmost, Expr::int(0));
        let (_, picks) = attention_step(&a, &pos_layers(3), 3).unwrap();
        assert_eq!(picks, vec![Some(1), Some(2), None]);
    }

    #[test]
    fn select_prefers_strictly_higher_scores() {
        let row = vec![
            Some(ExtScore::Finite(int(3))),
            None,
            Some(ExtScore::Finite(int(1))),
            Some(ExtScore::NegInfinity),
        ];
        assert_eq!(select(&row, TieBreak::Rightmost), Some(0));
        assert_eq!(select(&[None, None], TieBreak::Leftmost), None);
    }
}
