//! Formulas for the languages a*b* and bounded Dyck.

use super::{FoFormula, LtlFormula};

type L = LtlFormula;
type F = FoFormula;

/// a*b* as a future formula read at position 0: no `b` is ever followed by
/// an `a`.
pub fn astar_bstar_fltl() -> LtlFormula {
    let step = L::implies(L::letter('b'), L::not(L::until(L::True, L::letter('a'))));
    L::and(step.clone(), L::not(L::until(L::True, L::not(step))))
}

/// ∀x∀y (x < y → ¬(P_b(x) ∧ P_a(y)))
pub fn astar_bstar_fo() -> FoFormula {
    F::forall(
        "x",
        F::forall("y", F::implies(F::less("x", "y"), F::not(F::and(F::letter('b', "x"), F::letter('a', "y"))))),
    )
}

/// Dyck-(1,D) as a past formula read at the last position.
///
/// Level-1 letters are all positions; a level-k letter equal to the nearest
/// earlier level-k letter (a virtual `)` if none) is also a level-(k+1)
/// letter. The word is accepted iff no level-(D+1) letter occurs and the
/// latest level-k letter is `)` for every k ≤ D.
pub fn dyck1_pltl(depth: usize) -> LtlFormula {
    let open = || L::letter('(');
    let close = || L::letter(')');
    let mut level = L::True;
    let mut ok = L::True;
    for _ in 0..depth {
        let prev_open = L::since(L::not(level.clone()), L::and(level.clone(), open()));
        let latest_close = L::or(
            L::and(level.clone(), close()),
            L::and(L::not(level.clone()), L::not(prev_open.clone())),
        );
        ok = L::and(ok, latest_close);
        let repeat = L::or(L::and(open(), prev_open.clone()), L::and(close(), L::not(prev_open)));
        level = L::and(level, repeat);
    }
    let never_top = L::and(L::not(level.clone()), L::not(L::since(L::True, level)));
    L::and(never_top, ok)
}

/// Dyck-(1,1) = (())* restricted to non-empty words, in FO_<:
/// starts with `(`, ends with `)`, and neighbours differ.
pub fn dyck11_fo() -> FoFormula {
    let open = |v: &str| F::letter('(', v);
    let succ = |x: &str, y: &str| {
        F::and(F::less(x, y), F::not(F::exists("z", F::and(F::less(x, "z"), F::less("z", y)))))
    };
    let first = F::forall("x", F::implies(F::not(F::exists("y", F::less("y", "x"))), open("x")));
    let last = F::forall("x", F::implies(F::not(F::exists("y", F::less("x", "y"))), F::not(open("x"))));
    let alternate = F::forall(
        "x",
        F::forall("y", F::implies(succ("x", "y"), F::not(F::or(F::and(open("x"), open("y")), F::and(F::not(open("x")), F::not(open("y"))))))),
    );
    F::and(F::and(first, last), alternate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::shortlex;
    use crate::logic::{eval_fo, ltl_recognize, LtlMode, MonRegistry};
    use crate::programs::dyck1_oracle;

    #[test]
    fn astar_bstar_pair_agrees() {
        let env = MonRegistry::standard();
        let (l, f) = (astar_bstar_fltl(), astar_bstar_fo());
        for w in shortlex(&['a', 'b'], 8).skip(1) {
            let direct = !w.windows(2).any(|p| p == ['b', 'a']);
            assert_eq!(ltl_recognize(&l, &w, LtlMode::FutureAtFirst, &env).unwrap(), direct);
            assert_eq!(eval_fo(&f, &w, &env).unwrap(), direct);
        }
    }

    #[test]
    fn dyck_formulas_agree_with_counter() {
        let env = MonRegistry::standard();
        let fo = dyck11_fo();
        for depth in 1..=2 {
            let l = dyck1_pltl(depth);
            for w in shortlex(&['(', ')'], 10).skip(1) {
                let direct = dyck1_oracle(depth, &w);
                assert_eq!(ltl_recognize(&l, &w, LtlMode::PastAtLast, &env).unwrap(), direct, "{:?}", w);
                if depth == 1 && w.len() <= 8 {
                    assert_eq!(eval_fo(&fo, &w, &env).unwrap(), direct);
                }
            }
        }
    }
}
