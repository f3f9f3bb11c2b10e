//! Unmasked column-only attention to strictly masked attention.

use super::{scan_rows, truthy, TransformError};
use crate::enumerate::words_of_length;
use crate::expr::{EvalCtx, Expr};
use crate::interp::run_traced;
use crate::ir::{Attention, Line, Masking, Recognizer, ScoreSpec, TieBreak};
use crate::value::Value;

fn binary_value(v: &Value) -> bool {
    match v {
        Value::Bool(_) => true,
        other => other.as_rat().is_some_and(|r| crate::value::is_binary(&r)),
    }
}

/// Four lines replacing `◀_j[none, s(j)] v(j)` (or the mirrored `▶`):
///
/// ```text
/// BOS(i) = ▶_j[future, 0] 0 : 1
/// L1(i)  = ◀_j[past, s(j)] (s(j) = 1, v(j)) : (false, 0)
/// L2(i)  = if(s(i) = 1, v(i), if(L1(i).0, L1(i).1, v(i)))
/// L3(i)  = ▶_j[future, BOS(j)] L2(j) : L2(i)
/// ```
///
/// `L1` carries whether a 1-score was found, since a row of zeros still
/// selects a position. Position 0 computes the original value, which `L3`
/// broadcasts. The `▶` case mirrors this with an end marker.
fn gadget(a: &Attention, base: usize) -> [Line; 4] {
    let s_j = match &a.score {
        ScoreSpec::Expr(e) => e.clone(),
        _ => unreachable!("checked by the caller"),
    };
    let v_j = a.value.clone();
    let (s_i, v_i) = (s_j.j_to_i(), v_j.j_to_i());
    let (near, near_tie, far, far_tie) = match a.tie {
        TieBreak::Leftmost => (Masking::StrictFuture, TieBreak::Rightmost, Masking::StrictPast, TieBreak::Leftmost),
        TieBreak::Rightmost => (Masking::StrictPast, TieBreak::Leftmost, Masking::StrictFuture, TieBreak::Rightmost),
    };
    let marker = Line::Attention(Attention {
        mask: near,
        tie: near_tie,
        score: ScoreSpec::Expr(Expr::int(0)),
        value: Expr::int(0),
        default: Expr::int(1),
    });
    let search = Line::Attention(Attention {
        mask: far,
        tie: far_tie,
        score: ScoreSpec::Expr(s_j.clone()),
        value: Expr::Tuple(vec![truthy(s_j), v_j]),
        default: Expr::Tuple(vec![Expr::Bool(false), Expr::int(0)]),
    });
    let found = Expr::var_i(base + 2);
    let repair = Line::Pointwise(Expr::ite(
        truthy(s_i),
        v_i.clone(),
        Expr::ite(Expr::get(found.clone(), 0), Expr::get(found, 1), v_i),
    ));
    let broadcast = Line::Attention(Attention {
        mask: near,
        tie: near_tie,
        score: ScoreSpec::Expr(Expr::var_j(base + 1)),
        value: Expr::var_j(base + 3),
        default: Expr::var_i(base + 3),
    });
    [marker, search, repair, broadcast]
}

/// Rewrites every unmasked attention line of the form `◀_j[none, s(j)] v(j)`
/// or `▶_j[none, s(j)] v(j)` (score and value reading only the attended
/// column, scores and values in `{0, 1}` on all inputs up to `check_len`)
/// into masked lines. Already masked lines must be strict-future rightmost
/// or strict-past leftmost and are kept.
pub fn unmasked_brasp_to_masked(rec: &Recognizer, check_len: usize) -> Result<Recognizer, TransformError> {
    for (layer, a) in rec.attention_lines() {
        match (a.mask, a.tie) {
            (Masking::NoMask, _) => {}
            (Masking::StrictFuture, TieBreak::Rightmost) | (Masking::StrictPast, TieBreak::Leftmost) => continue,
            _ => return Err(TransformError::NotColumnOnlyForm(layer, "unsupported mask and tie combination")),
        }
        let ScoreSpec::Expr(s) = &a.score else {
            return Err(TransformError::NotColumnOnlyForm(layer, "score must be an expression"));
        };
        if s.reads_i() {
            return Err(TransformError::NotColumnOnlyForm(layer, "score reads the current column"));
        }
        if a.value.reads_i() {
            return Err(TransformError::NotColumnOnlyForm(layer, "value reads the current column"));
        }
    }
    let mut bad_score = None;
    scan_rows(rec, 1..=check_len, |layer, _, raw, _| {
        if bad_score.is_none() && raw.iter().any(|s| !s.finite().is_some_and(crate::value::is_binary)) {
            bad_score = Some(layer);
        }
    })?;
    if let Some(layer) = bad_score {
        return Err(TransformError::NonBinaryScore(layer));
    }
    for n in 1..=check_len {
        for w in words_of_length(rec.alphabet(), n) {
            let layers = run_traced(rec, &w)?.layers;
            for (layer, a) in rec.attention_lines().filter(|(_, a)| a.mask == Masking::NoMask) {
                for j in 0..n {
                    let v = a.value.eval(&EvalCtx::pair(&layers[..layer], 0, j, n))?;
                    if !binary_value(&v) {
                        return Err(TransformError::NonBinaryValues(layer));
                    }
                }
            }
        }
    }

    let mut map: Vec<usize> = vec![0];
    let mut lines = Vec::new();
    for line in &rec.lines {
        let remap = |l: usize| map[l];
        let rewrite = |e: &Expr| e.remap_layers(&remap);
        match line {
            Line::Attention(a) if a.mask == Masking::NoMask => {
                let moved = Attention {
                    mask: a.mask,
                    tie: a.tie,
                    score: a.score.map_exprs(&rewrite, &remap),
                    value: rewrite(&a.value),
                    default: rewrite(&a.default),
                };
                let base = lines.len();
                lines.extend(gadget(&moved, base));
            }
            other => {
                let next = lines.len() + 1;
                let own = map.len();
                let carrier = |l: usize| if l == own { next } else { map[l] };
                lines.push(other.map_exprs(&rewrite, &carrier));
            }
        }
        map.push(lines.len());
    }
    let remap = |l: usize| map[l];
    Ok(Recognizer {
        init: rec.init.clone(),
        lines,
        valid: rec.valid.remap_layers(&remap),
        read_pos: rec.read_pos,
        empty_accepts: rec.empty_accepts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::check_equivalence;
    use crate::enumerate::word;
    use crate::ir::{InitKind, Initialization, ReadPos};
    use crate::programs::{build_brasp_contains_ab, build_palindrome_guhat};

    /// One leftmost line over `s = (letter ∈ {b, c})`, `v = (letter = c)`.
    fn search_program() -> Recognizer {
        let letter = |c| Expr::eq(Expr::var_j(0), Expr::Sym(c));
        Recognizer {
            init: Initialization::new(InitKind::CharOnly, ['a', 'b', 'c']),
            lines: vec![Line::Attention(Attention {
                mask: Masking::NoMask,
                tie: TieBreak::Leftmost,
                score: ScoreSpec::Expr(Expr::or(letter('b'), letter('c'))),
                value: letter('c'),
                default: Expr::Bool(false),
            })],
            valid: Expr::var_i(1),
            read_pos: ReadPos::Last,
            empty_accepts: false,
        }
    }

    #[test]
    fn bos_marks_first_position() {
        let out = unmasked_brasp_to_masked(&search_program(), 3).unwrap();
        let layers = run_traced(&out, &word("abc")).unwrap().layers;
        assert_eq!(layers[1], vec![Value::int(1), Value::int(0), Value::int(0)]);
    }

    #[test]
    fn leftmost_search_and_repair() {
        let out = unmasked_brasp_to_masked(&search_program(), 3).unwrap();
        // s-column [0, 1, 1]
        let layers = run_traced(&out, &word("acb")).unwrap().layers;
        assert_eq!(layers[2][0], Value::Tuple(vec![Value::Bool(true), Value::Bool(true)]));
        assert_eq!(layers[3][0], Value::Bool(true));
        // all-zero s-column: the original selects position 0
        let layers = run_traced(&out, &word("aaa")).unwrap().layers;
        assert_eq!(layers[2][0], Value::Tuple(vec![Value::Bool(false), Value::Bool(false)]));
        assert_eq!(layers[3][0], Value::Bool(false));
    }

    #[test]
    fn languages_preserved() {
        let p = search_program();
        let out = unmasked_brasp_to_masked(&p, 4).unwrap();
        out.validate().unwrap();
        assert_eq!(out.depth(), 4);
        assert_eq!(check_equivalence(&p, &out, &['a', 'b', 'c'], 6).unwrap(), None);
        let b = build_brasp_contains_ab().rec;
        let out = unmasked_brasp_to_masked(&b, 4).unwrap();
        out.validate().unwrap();
        assert_eq!(out.depth(), 8);
        for (_, a) in out.attention_lines() {
            assert!(matches!(
                (a.mask, a.tie),
                (Masking::StrictFuture, TieBreak::Rightmost) | (Masking::StrictPast, TieBreak::Leftmost)
            ));
        }
        assert_eq!(check_equivalence(&b, &out, &['a', 'b'], 8).unwrap(), None);
    }

    #[test]
    fn rejects_two_sided_programs() {
        let p = build_palindrome_guhat(&['a', 'b']).unwrap().rec;
        assert!(matches!(
            unmasked_brasp_to_masked(&p, 3),
            Err(TransformError::NotColumnOnlyForm(1, _))
        ));
    }
}
