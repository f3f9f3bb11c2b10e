//! Exhaustive check of the ordering properties of the mask-simulating
//! score `s̄ = (i − j − 1/2)·8^j·(s + 1/(4n·8^n))`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::expr::{EvalCtx, Expr};
use crate::ir::{SepTerm, SeparableScore};
use crate::transforms::sbar_score;
use crate::value::{rat, Rat, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SbarViolation {
    pub property: u8,
    pub s: u8,
    pub i: usize,
    pub j: usize,
    pub j2: Option<usize>,
    pub n: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SbarAudit {
    pub bound: usize,
    /// Number of term pairs in the separable form, for `s` given as one term.
    pub separable_terms: usize,
    pub separable: bool,
    /// Comparisons performed per property 2–5.
    pub checks: [u64; 4],
    pub violations: Vec<SbarViolation>,
}

impl SbarAudit {
    pub fn passed(&self) -> bool {
        self.separable && self.violations.is_empty()
    }
}

/// The score built by the mask-simulation pass for a constant `s`.
fn sbar_for(s: u8) -> SeparableScore {
    let base = SeparableScore::new(1, vec![SepTerm::new(Expr::int(s as i64), Expr::int(1))]);
    sbar_score(&base).expect("same carrier")
}

/// Checks, for all `n ≤ bound`, `s ∈ {0, 1}`:
/// 2. `s̄ < 0` when `j ≥ i`;
/// 3. `0 < s̄ < 1/3` when `j < i`, `s = 0`;
/// 4. `s̄ > 1/2` when `j < i`, `s = 1`;
/// 5. `s̄(j) < s̄(j')` when `j < j' < i`, equal `s`.
///
/// Property 1 (separability) is checked on the structure of the score the
/// pass emits: every term has an I-only `f` and a J-only `g`.
pub fn audit_sbar(bound: usize) -> SbarAudit {
    let scores = [sbar_for(0), sbar_for(1)];
    let separable = scores.iter().all(|s| s.terms.iter().all(|t| !t.f.reads_j() && !t.g.reads_i()));
    let mut checks = [0u64; 4];
    let mut violations = Vec::new();
    let third = rat(1, 3);
    let half = rat(1, 2);
    let zero = rat(0, 1);
    for n in 1..=bound {
        let layers = vec![vec![Value::int(0); n]];
        let mut cache: HashMap<(u8, usize, usize), Rat> = HashMap::new();
        let mut val = |s: u8, i: usize, j: usize| -> Rat {
            cache
                .entry((s, i, j))
                .or_insert_with(|| scores[s as usize].eval(&EvalCtx::pair(&layers, i, j, n)).expect("closed score"))
                .clone()
        };
        let mut report = |property: u8, s: u8, i: usize, j: usize, j2: Option<usize>, v: &Rat| {
            violations.push(SbarViolation { property, s, i, j, j2, n, value: v.to_string() });
        };
        for s in 0..=1u8 {
            for i in 0..n {
                for j in 0..n {
                    let v = val(s, i, j);
                    if j >= i {
                        checks[0] += 1;
                        if v >= zero {
                            report(2, s, i, j, None, &v);
                        }
                    } else if s == 0 {
                        checks[1] += 1;
                        if !(v > zero && v < third) {
                            report(3, s, i, j, None, &v);
                        }
                    } else {
                        checks[2] += 1;
                        if v <= half {
                            report(4, s, i, j, None, &v);
                        }
                    }
                }
                for j in 0..i {
                    for j2 in j + 1..i {
                        checks[3] += 1;
                        let (a, b) = (val(s, i, j), val(s, i, j2));
                        if a >= b {
                            report(5, s, i, j, Some(j2), &(b - a));
                        }
                    }
                }
            }
        }
    }
    SbarAudit {
        bound,
        separable_terms: scores[1].terms.len(),
        separable,
        checks,
        violations,
    }
}
