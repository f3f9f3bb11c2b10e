use proptest::prelude::*;

use uhatlab_core::analysis::{check_fixability, verify_witness, Restriction, Verdict};
use uhatlab_core::programs::{dyck1_oracle, majority};
use uhatlab_core::value::{rat, Rat};

fn restriction(alphabet: &'static [char], n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Restriction> {
    prop::collection::vec(prop::option::of(prop::sample::select(alphabet.to_vec())), n)
        .prop_map(|pattern| Restriction { pattern })
}

fn epsilon() -> impl Strategy<Value = Rat> {
    prop_oneof![Just(rat(1, 5)), Just(rat(1, 3)), Just(rat(1, 2))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn palindrome_verdicts_reverify(rho in restriction(&['a', 'b'], 1..=7), eps in epsilon()) {
        let pal = |w: &[char]| w.iter().eq(w.iter().rev());
        let w = check_fixability(&pal, &['a', 'b'], &rho, &eps).unwrap();
        prop_assert!(verify_witness(&pal, &['a', 'b'], &w).unwrap());
    }

    #[test]
    fn majority_verdicts_reverify(rho in restriction(&['0', '1'], 1..=8), eps in epsilon()) {
        let w = check_fixability(&majority, &['0', '1'], &rho, &eps).unwrap();
        prop_assert!(verify_witness(&majority, &['0', '1'], &w).unwrap());
        if let Verdict::FixedIn(ext) | Verdict::FixedOut(ext) = &w.verdict {
            prop_assert!(rho.is_extended_by(ext));
        }
    }

    #[test]
    fn dyck_verdicts_reverify(rho in restriction(&['(', ')'], 2..=8)) {
        let lang = |w: &[char]| dyck1_oracle(2, w);
        let w = check_fixability(&lang, &['(', ')'], &rho, &rat(1, 3)).unwrap();
        prop_assert!(verify_witness(&lang, &['(', ')'], &w).unwrap());
    }
}
