//! Tie elimination by a position-proportional perturbation smaller than
//! half the least score gap.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use super::{extend_init_with_position, scan_rows, TransformError};
use crate::expr::Expr;
use crate::ir::{Line, Recognizer, ScoreSpec, SepTerm, TieBreak};
use crate::value::Rat;

/// Least positive distance between admitted scores of one attention line,
/// over every input of each length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieGap {
    pub layer: usize,
    pub gaps: BTreeMap<usize, Rat>,
    /// Lengths at which fewer than two distinct scores occur; their gap is 1.
    pub degenerate: Vec<usize>,
}

pub fn compute_tie_gap(rec: &Recognizer, n_max: usize) -> Result<Vec<TieGap>, TransformError> {
    let mut seen: BTreeMap<(usize, usize), BTreeSet<Rat>> = BTreeMap::new();
    scan_rows(rec, 1..=n_max, |layer, n, _, adm| {
        let slot = seen.entry((layer, n)).or_default();
        for s in adm.iter().flatten().filter_map(|s| s.finite()) {
            slot.insert(s.clone());
        }
    })?;
    let mut out = Vec::new();
    for (layer, _) in rec.attention_lines() {
        let mut gap = TieGap { layer, gaps: BTreeMap::new(), degenerate: Vec::new() };
        for n in 1..=n_max {
            let values: Vec<&Rat> = seen.get(&(layer, n)).map(|s| s.iter().collect()).unwrap_or_default();
            let eps = values.windows(2).map(|w| w[1] - w[0]).min();
            match eps {
                Some(e) => {
                    gap.gaps.insert(n, e);
                }
                None => {
                    gap.gaps.insert(n, Rat::one());
                    gap.degenerate.push(n);
                }
            }
        }
        out.push(gap);
    }
    Ok(out)
}

/// Adds `± j·ε_n / (2·max(n−1, 1))` to every score, `+` for rightmost and
/// `−` for leftmost lines, and makes every line rightmost. The total
/// perturbation across a row stays below `ε_n / 2`, so strict orderings are
/// kept and former ties resolve as before. `ε_n` is read from a table over
/// `n ≤ n_max`; the initialization is widened to expose `n` if necessary.
pub fn eliminate_ties(rec: &Recognizer, n_max: usize) -> Result<Recognizer, TransformError> {
    let n_max = n_max.max(1);
    let mut out = extend_init_with_position(rec);
    let gaps = compute_tie_gap(&out, n_max)?;
    for (k, line) in out.lines.iter_mut().enumerate() {
        let Line::Attention(a) = line else { continue };
        let gap = gaps.iter().find(|g| g.layer == k + 1).expect("gap per attention line");
        let sign = match a.tie {
            TieBreak::Rightmost => Rat::one(),
            TieBreak::Leftmost => -Rat::one(),
        };
        let scales: Vec<Rat> = gap
            .gaps
            .iter()
            .map(|(&n, eps)| {
                let spread = Rat::from_integer((2 * (n.max(2) - 1)).into());
                &sign * eps / spread
            })
            .collect();
        let scale = Expr::length_table(&scales);
        a.score = match &a.score {
            ScoreSpec::Separable(s) => {
                let mut s = s.clone();
                s.terms.push(SepTerm::new(scale, Expr::PosJ));
                ScoreSpec::Separable(s)
            }
            other => ScoreSpec::Shifted {
                inner: Box::new(other.clone()),
                offset: Expr::mul(scale, Expr::PosJ),
            },
        };
        a.tie = TieBreak::Rightmost;
    }
    Ok(out)
}
