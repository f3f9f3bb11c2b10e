//! Separable scores to bilinear scores via one inserted point-wise layer
//! per attention line.

use num_traits::{One, Zero};

use super::{numeric, to_separable, TransformError};
use crate::expr::Expr;
use crate::ir::{Attention, BilinearScore, Line, Recognizer, ScoreSpec};
use crate::value::Rat;

/// Before each attention line with `k` separable terms, inserts a layer
/// holding `(f₁, …, f_k, g₁, …, g_k)` evaluated at the current position and
/// scores with `⟨(f₁..f_k), (g₁..g_k)⟩`, i.e. the `2k × 2k` matrix with ones
/// at `(a, k + a)`. Lines already scored bilinearly are kept.
pub fn separable_to_bilinear(rec: &Recognizer) -> Result<Recognizer, TransformError> {
    // map[old layer] = new layer
    let mut map: Vec<usize> = vec![0];
    let mut lines = Vec::with_capacity(rec.lines.len() * 2);
    for (k, line) in rec.lines.iter().enumerate() {
        let old_layer = k + 1;
        let next = lines.len() + 1;
        let remap = |l: usize| if l == old_layer { next } else { map[l] };
        let rewrite = |e: &Expr| e.remap_layers(&remap);
        match line {
            Line::Attention(a) if !matches!(a.score, ScoreSpec::Bilinear(_)) => {
                let sep = to_separable(&a.score, old_layer)?;
                let kt = sep.terms.len();
                let mut features: Vec<Expr> = sep.terms.iter().map(|t| numeric(t.f.remap_layers(&remap))).collect();
                features.extend(sep.terms.iter().map(|t| numeric(t.g.j_to_i().remap_layers(&remap))));
                lines.push(Line::Pointwise(Expr::Tuple(features)));
                let feature_layer = lines.len();
                let mut matrix = vec![vec![Rat::zero(); 2 * kt]; 2 * kt];
                for (a, row) in matrix.iter_mut().enumerate().take(kt) {
                    row[kt + a] = Rat::one();
                }
                lines.push(Line::Attention(Attention {
                    mask: a.mask,
                    tie: a.tie,
                    score: ScoreSpec::Bilinear(BilinearScore { layer: feature_layer, matrix }),
                    value: a.value.remap_layers(&remap),
                    default: a.default.remap_layers(&remap),
                }));
            }
            other => lines.push(other.map_exprs(&rewrite, &remap)),
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
