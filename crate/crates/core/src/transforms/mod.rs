//! Program-to-program passes. Each pass preserves the recognized language;
//! [`verify_pass`] checks that claim exhaustively up to a length bound.

mod bilinear;
mod brasp;
mod mask;
mod separable;
mod ties;
mod verify;

pub use bilinear::separable_to_bilinear;
pub use brasp::unmasked_brasp_to_masked;
pub use mask::{eliminate_mask_guhat, score_lower_bound, MaskMode, ScoreLowerBound};
pub use separable::{
    sep_add, sep_const, sep_mul, table_to_separable, to_separable,
};
pub use mask::{sbar_score, simulate_mask_separable};
pub use ties::{compute_tie_gap, eliminate_ties, TieGap};
pub use verify::{verify_pass, PassReport};

use thiserror::Error;

use crate::error::EvalError;
use crate::expr::Expr;
use crate::ir::{InitKind, Recognizer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("score table is not total")]
    NonTotalTable,
    #[error("separable scores have different carriers ({0} and {1})")]
    CarrierMismatch(usize, usize),
    #[error("line {0}: score is not separable")]
    NonSeparableScorePresent(usize),
    #[error("the initialization does not provide positions")]
    InitializationLacksPosition,
    #[error("the initialization does not provide (i, n)")]
    MissingPositionInInit,
    #[error("line {0}: score takes a value outside {{0, 1}}")]
    NonBinaryScore(usize),
    #[error("line {0}: attention value takes a value outside {{0, 1}}")]
    NonBinaryValues(usize),
    #[error("line {0}: expected a strict-future, rightmost attention line")]
    NotFutureMasked(usize),
    #[error("line {0}: not in column-only form ({1})")]
    NotColumnOnlyForm(usize, &'static str),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl TransformError {
    pub fn is_budget(&self) -> bool {
        matches!(self, TransformError::Eval(EvalError::BudgetExceeded { .. }))
    }
}

/// Makes `i` and `n` readable by widening the initialization: `CharOnly`
/// becomes `CharPosLen`, a custom encoding `e` becomes `(e, i, n)`. Every
/// read of layer 0 is rewritten to the first tuple component. Returns the
/// input unchanged if positions are already provided.
pub fn extend_init_with_position(rec: &Recognizer) -> Recognizer {
    if rec.init.provides_position() {
        return rec.clone();
    }
    let first = |e: &Expr| {
        e.rewrite(&|x| match x {
            Expr::Var(side, 0) => Expr::get(Expr::Var(side, 0), 0),
            other => other,
        })
    };
    let mut out = rec.map_all_exprs(&first, &|l| l);
    out.init.kind = match &rec.init.kind {
        InitKind::CharOnly => InitKind::CharPosLen,
        InitKind::Custom(e) => InitKind::Custom(Expr::Tuple(vec![e.clone(), Expr::PosI, Expr::Len])),
        InitKind::CharPosLen => InitKind::CharPosLen,
    };
    out
}

/// `e` as a number: booleans become 0/1, numbers pass through.
pub(crate) fn numeric(e: Expr) -> Expr {
    if is_numeric_shape(&e) {
        return e;
    }
    Expr::ite(
        Expr::eq(e.clone(), Expr::Bool(true)),
        Expr::int(1),
        Expr::ite(Expr::eq(e.clone(), Expr::Bool(false)), Expr::int(0), e),
    )
}

fn is_numeric_shape(e: &Expr) -> bool {
    match e {
        Expr::Rat(_) | Expr::PosI | Expr::PosJ | Expr::Len => true,
        Expr::Add(..) | Expr::Sub(..) | Expr::Mul(..) | Expr::Div(..) | Expr::Neg(_) | Expr::Pow(..) => true,
        Expr::If(_, t, f) => is_numeric_shape(t) && is_numeric_shape(f),
        _ => false,
    }
}

/// `e = 1` or `e = true`.
pub(crate) fn truthy(e: Expr) -> Expr {
    Expr::or(Expr::eq(e.clone(), Expr::Bool(true)), Expr::eq(e, Expr::int(1)))
}


/// Calls `f(layer, n, raw_row, admitted_row)` for every attention row of
/// every word with length in `lengths`, where `raw_row` ignores the mask.
pub(crate) fn scan_rows(
    rec: &Recognizer,
    lengths: std::ops::RangeInclusive<usize>,
    mut f: impl FnMut(usize, usize, &[crate::value::ExtScore], &[Option<crate::value::ExtScore>]),
) -> Result<(), TransformError> {
    use crate::enumerate::{count_words, words_of_length, Budget};
    use crate::interp::{raw_score_row, run_traced, score_row};
    let hi = *lengths.end();
    Budget::default().check(count_words(rec.alphabet().len(), hi))?;
    for n in lengths.filter(|&n| n > 0) {
        for w in words_of_length(rec.alphabet(), n) {
            let trace = run_traced(rec, &w)?;
            for (layer, a) in rec.attention_lines() {
                let prior = &trace.layers[..layer];
                for i in 0..n {
                    let raw = raw_score_row(a, prior, i, n)?;
                    let adm = score_row(a, prior, i, n)?;
                    f(layer, n, &raw, &adm);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::check_equivalence;
    use crate::programs::build_dyck1;

    #[test]
    fn position_extension_preserves_language() {
        let d = build_dyck1(1).unwrap().rec;
        let e = extend_init_with_position(&d);
        assert!(e.init.provides_position());
        e.validate().unwrap();
        assert_eq!(check_equivalence(&d, &e, &['(', ')'], 8).unwrap(), None);
    }

    #[test]
    fn numeric_coercion() {
        use crate::expr::EvalCtx;
        use crate::value::Value;
        let layers: Vec<Vec<Value>> = vec![];
        let ctx = EvalCtx::at(&layers, 0, 1);
        assert_eq!(numeric(Expr::Bool(true)).eval(&ctx).unwrap(), Value::int(1));
        assert_eq!(numeric(Expr::eq(Expr::int(2), Expr::int(3))).eval(&ctx).unwrap(), Value::int(0));
        assert_eq!(numeric(Expr::int(5)).eval(&ctx).unwrap(), Value::int(5));
    }
}
