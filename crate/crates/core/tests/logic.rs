use proptest::prelude::*;

use uhatlab_core::enumerate::shortlex;
use uhatlab_core::logic::{eval_fo, eval_ltl_all, FoFormula, LtlFormula, MonRegistry};

fn ltl() -> impl Strategy<Value = LtlFormula> {
    let leaf = prop_oneof![
        Just(LtlFormula::True),
        Just(LtlFormula::False),
        Just(LtlFormula::letter('a')),
        Just(LtlFormula::letter('b')),
        Just(LtlFormula::Mon("even".into())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(LtlFormula::not),
            inner.clone().prop_map(LtlFormula::next),
            inner.clone().prop_map(LtlFormula::yesterday),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LtlFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LtlFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LtlFormula::until(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| LtlFormula::since(a, b)),
        ]
    })
}

fn words(max_len: usize) -> impl Iterator<Item = Vec<char>> {
    shortlex(&['a', 'b'], max_len).skip(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bottom_until_is_next(phi in ltl()) {
        let env = MonRegistry::standard();
        let lhs = LtlFormula::until(LtlFormula::False, phi.clone());
        let rhs = LtlFormula::next(phi);
        for w in words(6) {
            prop_assert_eq!(eval_ltl_all(&lhs, &w, &env).unwrap(), eval_ltl_all(&rhs, &w, &env).unwrap());
        }
    }

    #[test]
    fn double_negation_and_de_morgan(phi in ltl(), psi in ltl()) {
        let env = MonRegistry::standard();
        let nn = LtlFormula::not(LtlFormula::not(phi.clone()));
        let dm_l = LtlFormula::not(LtlFormula::and(phi.clone(), psi.clone()));
        let dm_r = LtlFormula::or(LtlFormula::not(phi.clone()), LtlFormula::not(psi));
        for w in words(5) {
            prop_assert_eq!(eval_ltl_all(&nn, &w, &env).unwrap(), eval_ltl_all(&phi, &w, &env).unwrap());
            prop_assert_eq!(eval_ltl_all(&dm_l, &w, &env).unwrap(), eval_ltl_all(&dm_r, &w, &env).unwrap());
        }
    }

    /// `∃x (P_c(x) ∧ ∀y (y<x → ¬P_c(y)))` picks the first occurrence, so it
    /// agrees with plain existence.
    #[test]
    fn first_occurrence_matches_existence(c in prop::sample::select(vec!['a', 'b'])) {
        let env = MonRegistry::standard();
        let first = FoFormula::exists("x", FoFormula::and(
            FoFormula::letter(c, "x"),
            FoFormula::forall("y", FoFormula::implies(FoFormula::less("y", "x"), FoFormula::not(FoFormula::letter(c, "y")))),
        ));
        for w in words(6) {
            prop_assert_eq!(eval_fo(&first, &w, &env).unwrap(), w.contains(&c));
        }
    }
}
