//! Passes composed end to end, checked against the language oracles.

use uhatlab_core::analysis::check_equivalence;
use uhatlab_core::ir::{Masking, ScoreSpec};
use uhatlab_core::programs::{build_dyck1, build_palindrome_masked, build_palindrome_separable, NamedRecognizer};
use uhatlab_core::transforms::{
    eliminate_mask_guhat, eliminate_ties, extend_init_with_position, separable_to_bilinear, simulate_mask_separable,
    MaskMode,
};
use uhatlab_core::{classify_program, Recognizer};

fn agrees_with_oracle(named: &NamedRecognizer, rec: &Recognizer, max_len: usize) {
    let oracle = named.oracle.clone();
    let cex = check_equivalence(rec, &move |w: &[char]| oracle(w), rec.alphabet(), max_len).unwrap();
    assert_eq!(cex, None, "{}", named.name);
}

#[test]
fn masked_palindrome_to_tie_free_guhat() {
    let named = build_palindrome_masked(&['a', 'b']).unwrap();
    // a finite fallback keeps every row finite, so the offsets can split it
    let unmasked = eliminate_mask_guhat(&named.rec, MaskMode::EnumeratedBound { n_max: 8 }).unwrap();
    let tie_free = eliminate_ties(&unmasked, 8).unwrap();
    agrees_with_oracle(&named, &tie_free, 8);
    let c = classify_program(&tie_free, 6).unwrap();
    assert!(!c.ties_possible);
    assert_eq!(c.maskings_used, vec![Masking::NoMask]);
    let sentinel = eliminate_mask_guhat(&named.rec, MaskMode::Sentinel).unwrap();
    let still_tied = eliminate_ties(&sentinel, 8).unwrap();
    agrees_with_oracle(&named, &still_tied, 8);
    let w = classify_program(&still_tied, 6).unwrap().tie_witness.unwrap();
    assert_eq!((w.word.as_str(), w.position), ("aa", 0));
}

#[test]
fn separable_palindrome_to_bilinear_then_tie_free() {
    let named = build_palindrome_separable(&['a', 'b']).unwrap();
    let bilinear = separable_to_bilinear(&named.rec).unwrap();
    let tie_free = eliminate_ties(&bilinear, 7).unwrap();
    agrees_with_oracle(&named, &bilinear, 8);
    agrees_with_oracle(&named, &tie_free, 7);
    assert_eq!(classify_program(&bilinear, 5).unwrap().class_name(), "UHAT");
}

#[test]
fn masked_dyck_to_unmasked_bilinear() {
    let named = build_dyck1(2).unwrap();
    let simulated = simulate_mask_separable(&extend_init_with_position(&named.rec), 6).unwrap();
    assert!(simulated.attention_lines().all(|(_, a)| a.mask == Masking::NoMask));
    let bilinear = separable_to_bilinear(&simulated).unwrap();
    assert!(bilinear.attention_lines().all(|(_, a)| matches!(a.score, ScoreSpec::Bilinear(_))));
    agrees_with_oracle(&named, &simulated, 8);
    agrees_with_oracle(&named, &bilinear, 8);
}
