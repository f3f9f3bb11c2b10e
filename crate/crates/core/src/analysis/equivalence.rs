//! Exhaustive language comparison.

use crate::enumerate::{shortlex, Budget, Language};
use crate::error::EvalError;

/// First word in shortlex order of length `0..=max_len` on which `a` and
/// `b` disagree.
pub fn check_equivalence<A, B>(
    a: &A,
    b: &B,
    alphabet: &[char],
    max_len: usize,
) -> Result<Option<Vec<char>>, EvalError>
where
    A: Language + ?Sized,
    B: Language + ?Sized,
{
    check_equivalence_with(a, b, alphabet, max_len, Budget::default())
}

pub fn check_equivalence_with<A, B>(
    a: &A,
    b: &B,
    alphabet: &[char],
    max_len: usize,
    budget: Budget,
) -> Result<Option<Vec<char>>, EvalError>
where
    A: Language + ?Sized,
    B: Language + ?Sized,
{
    budget.check_words(alphabet.len(), max_len)?;
    for w in shortlex(alphabet, max_len) {
        if a.accepts(&w)? != b.accepts(&w)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::programs::{build_palindrome_guhat, dyck1_oracle};

    #[test]
    fn palindrome_matches_reversal() {
        let p = build_palindrome_guhat(&['a', 'b']).unwrap();
        let rev = |w: &[char]| w.iter().eq(w.iter().rev());
        assert_eq!(check_equivalence(&p.rec, &rev, &['a', 'b'], 8).unwrap(), None);
        assert_eq!(check_equivalence(&p.rec, &p.rec, &['a', 'b'], 5).unwrap(), None);
    }

    #[test]
    fn first_disagreement_is_shortlex_minimal() {
        let p = build_palindrome_guhat(&['(', ')']).unwrap();
        let d = |w: &[char]| dyck1_oracle(1, w);
        let cex = check_equivalence(&p.rec, &d, &['(', ')'], 3).unwrap();
        assert_eq!(cex, Some(vec!['(']));
    }

    #[test]
    fn budget_is_enforced() {
        let all = |_: &[char]| true;
        let r = check_equivalence_with(&all, &all, &['a', 'b'], 20, Budget::new(1000));
        assert!(matches!(r, Err(EvalError::BudgetExceeded { .. })));
    }
}
