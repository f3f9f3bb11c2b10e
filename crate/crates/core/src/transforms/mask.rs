//! Removing strict masks: by guarding scores (general scores) and by the
//! decaying separable score for binary strict-future programs.

use std::collections::BTreeMap;

use num_traits::One;

use super::{scan_rows, sep_add, sep_mul, to_separable, TransformError};
use crate::expr::Expr;
use crate::ir::{Attention, Line, Masking, Recognizer, ScoreSpec, SepTerm, SeparableScore, TieBreak};
use crate::value::{is_binary, rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaskMode {
    /// Masked-out pairs score −∞.
    Sentinel,
    /// Masked-out pairs score `K_n − 1`, with `K_n` the least score on any
    /// input of length `n ≤ n_max`. Longer inputs reuse `K_{n_max}`.
    EnumeratedBound { n_max: usize },
}

/// Least score of one attention line, per input length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreLowerBound {
    pub layer: usize,
    pub bounds: BTreeMap<usize, Rat>,
}

/// `K_n` for every attention line and `1 ≤ n ≤ n_max`, over all pairs
/// `(i, j)` regardless of the mask.
pub fn score_lower_bound(rec: &Recognizer, n_max: usize) -> Result<Vec<ScoreLowerBound>, TransformError> {
    let mut per_layer: BTreeMap<usize, BTreeMap<usize, Rat>> =
        rec.attention_lines().map(|(l, _)| (l, BTreeMap::new())).collect();
    scan_rows(rec, 1..=n_max, |layer, n, raw, _| {
        let slot = per_layer.get_mut(&layer).expect("attention layer");
        for s in raw.iter().filter_map(|s| s.finite()) {
            match slot.get(&n) {
                Some(k) if k <= s => {}
                _ => {
                    slot.insert(n, s.clone());
                }
            }
        }
    })?;
    Ok(per_layer
        .into_iter()
        .map(|(layer, bounds)| ScoreLowerBound { layer, bounds })
        .collect())
}

fn admit_expr(mask: Masking) -> Expr {
    match mask {
        Masking::StrictFuture => Expr::lt(Expr::PosJ, Expr::PosI),
        Masking::StrictPast => Expr::lt(Expr::PosI, Expr::PosJ),
        Masking::NoMask => Expr::Bool(true),
    }
}

/// `if(i = 0, D(i), v)` for strict-future lines, `if(i = n−1, D(i), v)` for
/// strict-past lines: the only positions whose admitted set is empty.
fn default_branch(a: &Attention) -> Expr {
    let empty_at = match a.mask {
        Masking::StrictFuture => Expr::int(0),
        Masking::StrictPast => Expr::sub(Expr::Len, Expr::int(1)),
        Masking::NoMask => return a.value.clone(),
    };
    Expr::ite(Expr::eq(Expr::PosI, empty_at), a.default.clone(), a.value.clone())
}

/// Replaces every strict mask by a guarded score that never wins on
/// masked-out pairs.
pub fn eliminate_mask_guhat(rec: &Recognizer, mode: MaskMode) -> Result<Recognizer, TransformError> {
    if rec.attention_lines().all(|(_, a)| a.mask == Masking::NoMask) {
        return Ok(rec.clone());
    }
    if !rec.init.provides_position() {
        return Err(TransformError::InitializationLacksPosition);
    }
    let bounds = match mode {
        MaskMode::Sentinel => None,
        MaskMode::EnumeratedBound { n_max } => Some(score_lower_bound(rec, n_max.max(1))?),
    };
    let mut out = rec.clone();
    for (k, line) in out.lines.iter_mut().enumerate() {
        let Line::Attention(a) = line else { continue };
        if a.mask == Masking::NoMask {
            continue;
        }
        let fallback = bounds.as_ref().map(|all| {
            let b = all.iter().find(|b| b.layer == k + 1).expect("bound per attention line");
            let table: Vec<Rat> = b
                .bounds
                .values()
                .map(|kn| kn - Rat::one())
                .collect();
            if table.is_empty() {
                Expr::int(-1)
            } else {
                Expr::length_table(&table)
            }
        });
        a.score = ScoreSpec::Guarded {
            admit: admit_expr(a.mask),
            inner: Box::new(a.score.clone()),
            fallback,
        };
        a.value = default_branch(a);
        a.mask = Masking::NoMask;
    }
    Ok(out)
}

/// `(i − j − 1/2)·8^j·(s + 1/(4n·8^n))` as a separable score.
pub fn sbar_score(s: &SeparableScore) -> Result<SeparableScore, TransformError> {
    let c = s.carrier;
    let eight_j = || Expr::pow(Expr::int(8), Expr::PosJ);
    let a = SeparableScore::new(
        c,
        vec![
            SepTerm::new(Expr::sub(Expr::PosI, Expr::rat(rat(1, 2))), eight_j()),
            SepTerm::new(Expr::int(-1), Expr::mul(Expr::PosJ, eight_j())),
        ],
    );
    let tiny = Expr::div(
        Expr::int(1),
        Expr::mul(Expr::mul(Expr::int(4), Expr::Len), Expr::pow(Expr::int(8), Expr::Len)),
    );
    let shifted = sep_add(s, &SeparableScore::new(c, vec![SepTerm::new(tiny, Expr::int(1))]))?;
    sep_mul(&a, &shifted)
}

/// Removes strict-future masks from a program whose scores are binary
/// (checked on every input up to `binary_check_len`). Scores become
/// `s̄`, which is negative on masked-out pairs, separates `s = 1` from
/// `s = 0` and grows with `j` among equal `s`, so the rightmost admitted
/// argmax is preserved.
pub fn simulate_mask_separable(rec: &Recognizer, binary_check_len: usize) -> Result<Recognizer, TransformError> {
    for (layer, a) in rec.attention_lines() {
        if a.mask != Masking::StrictFuture || a.tie != TieBreak::Rightmost {
            return Err(TransformError::NotFutureMasked(layer));
        }
    }
    if !rec.init.provides_position() {
        return Err(TransformError::MissingPositionInInit);
    }
    let mut offender = None;
    scan_rows(rec, 1..=binary_check_len, |layer, _, raw, _| {
        if offender.is_none() && raw.iter().any(|s| !s.finite().is_some_and(is_binary)) {
            offender = Some(layer);
        }
    })?;
    if let Some(layer) = offender {
        return Err(TransformError::NonBinaryScore(layer));
    }
    let mut out = rec.clone();
    for (k, line) in out.lines.iter_mut().enumerate() {
        let Line::Attention(a) = line else { continue };
        let s = to_separable(&a.score, k + 1)?;
        a.score = ScoreSpec::Separable(sbar_score(&s)?);
        a.value = default_branch(a);
        a.mask = Masking::NoMask;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::check_equivalence;
    use crate::expr::EvalCtx;
    use crate::programs::{build_dyck1, build_palindrome_guhat, build_palindrome_masked};
    use crate::transforms::extend_init_with_position;
    use crate::value::{int, Value};

    const AB: [char; 2] = ['a', 'b'];

    #[test]
    fn masked_palindrome_sentinel() {
        let m = build_palindrome_masked(&AB).unwrap().rec;
        let u = eliminate_mask_guhat(&m, MaskMode::Sentinel).unwrap();
        u.validate().unwrap();
        assert!(u.attention_lines().all(|(_, a)| a.mask == Masking::NoMask));
        assert_eq!(check_equivalence(&m, &u, &AB, 8).unwrap(), None);
    }

    #[test]
    fn masked_palindrome_enumerated_bound() {
        let m = build_palindrome_masked(&AB).unwrap().rec;
        let u = eliminate_mask_guhat(&m, MaskMode::EnumeratedBound { n_max: 8 }).unwrap();
        assert_eq!(check_equivalence(&m, &u, &AB, 8).unwrap(), None);
    }

    #[test]
    fn lower_bound_of_palindrome_layer_one() {
        let m = build_palindrome_masked(&AB).unwrap().rec;
        let b = score_lower_bound(&m, 4).unwrap();
        assert_eq!(b[0].layer, 1);
        assert_eq!(b[0].bounds[&4], int(-9));
        assert_eq!(b[0].bounds[&1], int(0));
    }

    #[test]
    fn unmasked_program_is_unchanged() {
        let p = build_palindrome_guhat(&AB).unwrap().rec;
        assert_eq!(eliminate_mask_guhat(&p, MaskMode::Sentinel).unwrap(), p);
    }

    #[test]
    fn mask_elimination_needs_positions() {
        let d = build_dyck1(1).unwrap().rec;
        assert_eq!(
            eliminate_mask_guhat(&d, MaskMode::Sentinel).unwrap_err(),
            TransformError::InitializationLacksPosition
        );
    }

    #[test]
    fn dyck_simulated_without_mask() {
        for depth in 1..=2 {
            let d = extend_init_with_position(&build_dyck1(depth).unwrap().rec);
            let u = simulate_mask_separable(&d, 6).unwrap();
            u.validate().unwrap();
            assert!(u.attention_lines().all(|(_, a)| a.mask == Masking::NoMask));
            assert_eq!(check_equivalence(&d, &u, &['(', ')'], 8).unwrap(), None);
        }
    }

    #[test]
    fn simulation_preconditions() {
        let d = build_dyck1(1).unwrap().rec;
        assert_eq!(simulate_mask_separable(&d, 4).unwrap_err(), TransformError::MissingPositionInInit);
        let p = build_palindrome_guhat(&AB).unwrap().rec;
        assert_eq!(simulate_mask_separable(&p, 4).unwrap_err(), TransformError::NotFutureMasked(1));
        let m = build_palindrome_masked(&AB).unwrap().rec;
        assert!(matches!(simulate_mask_separable(&m, 4), Err(TransformError::NonBinaryScore(_))));
    }

    fn sbar_at(s: i64, i: usize, j: usize, n: usize) -> Rat {
        let score = sbar_score(&SeparableScore::new(1, vec![SepTerm::new(Expr::int(s), Expr::int(1))])).unwrap();
        let layers = vec![vec![Value::int(0); n]];
        score.eval(&EvalCtx::pair(&layers, i, j, n)).unwrap()
    }

    #[test]
    fn sbar_spot_values() {
        assert_eq!(sbar_at(1, 2, 1, 4), int(4) + rat(1, 16384));
        assert_eq!(sbar_at(0, 3, 1, 4), rat(3, 16384));
        assert!(sbar_at(0, 1, 2, 4) < int(0));
        assert!(sbar_at(1, 1, 2, 4) < int(0));
    }
}
