//! Word enumeration in shortlex order, with a global budget.

use crate::error::EvalError;
use crate::ir::Recognizer;

/// Environment variable capping the number of enumerated words.
pub const MAX_ENUM_ENV: &str = "UHATLAB_MAX_ENUM";

const DEFAULT_MAX_WORDS: u64 = 20_000_000;

/// Upper bound on how many words a single enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_words: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}

impl Budget {
    pub fn new(max_words: u64) -> Self {
        Budget { max_words }
    }

    pub fn from_env() -> Self {
        let max_words = std::env::var(MAX_ENUM_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_WORDS);
        Budget { max_words }
    }

    /// Fails if `needed` exceeds the cap.
    pub fn check(&self, needed: u128) -> Result<(), EvalError> {
        if needed > self.max_words as u128 {
            Err(EvalError::BudgetExceeded { needed, cap: self.max_words })
        } else {
            Ok(())
        }
    }

    /// Checks the cost of enumerating all words of length `0..=max_len`.
    pub fn check_words(&self, alphabet_size: usize, max_len: usize) -> Result<(), EvalError> {
        self.check(count_words(alphabet_size, max_len))
    }
}

/// Number of words of length `0..=max_len` over an alphabet of the given size.
pub fn count_words(alphabet_size: usize, max_len: usize) -> u128 {
    let mut total: u128 = 0;
    let mut pow: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(pow);
        pow = pow.saturating_mul(alphabet_size as u128);
    }
    total
}

/// Iterator over all words of one length, in lexicographic order of the
/// alphabet as given.
pub struct WordsOfLength<'a> {
    alphabet: &'a [char],
    digits: Vec<usize>,
    done: bool,
}

impl<'a> Iterator for WordsOfLength<'a> {
    type Item = Vec<char>;

    fn next(&mut self) -> Option<Vec<char>> {
        if self.done {
            return None;
        }
        let word = self.digits.iter().map(|&d| self.alphabet[d]).collect();
        // odometer increment, least significant digit last
        let mut k = self.digits.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.digits[k] += 1;
            if self.digits[k] < self.alphabet.len() {
                break;
            }
            self.digits[k] = 0;
        }
        Some(word)
    }
}

pub fn words_of_length(alphabet: &[char], len: usize) -> WordsOfLength<'_> {
    WordsOfLength {
        alphabet,
        digits: vec![0; len],
        done: alphabet.is_empty() && len > 0,
    }
}

/// All words of length `0..=max_len` in shortlex order.
pub fn shortlex(alphabet: &[char], max_len: usize) -> impl Iterator<Item = Vec<char>> + '_ {
    (0..=max_len).flat_map(move |len| words_of_length(alphabet, len))
}

/// A decidable set of words.
pub trait Language {
    fn accepts(&self, word: &[char]) -> Result<bool, EvalError>;
}

impl Language for Recognizer {
    fn accepts(&self, word: &[char]) -> Result<bool, EvalError> {
        self.recognize(word)
    }
}

impl<F> Language for F
where
    F: Fn(&[char]) -> bool,
{
    fn accepts(&self, word: &[char]) -> Result<bool, EvalError> {
        Ok(self(word))
    }
}

impl Language for dyn Fn(&[char]) -> bool + Send + Sync {
    fn accepts(&self, word: &[char]) -> Result<bool, EvalError> {
        Ok(self(word))
    }
}

pub fn word(s: &str) -> Vec<char> {
    s.chars().collect()
}

pub fn show(w: &[char]) -> String {
    w.iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortlex_order_and_count() {
        let ws: Vec<String> = shortlex(&['a', 'b'], 2).map(|w| show(&w)).collect();
        assert_eq!(ws, ["", "a", "b", "aa", "ab", "ba", "bb"]);
        assert_eq!(count_words(2, 10), 2047);
        assert_eq!(shortlex(&['a', 'b'], 10).count(), 2047);
    }

    #[test]
    fn budget_rejects_large_enumerations() {
        let b = Budget::new(100);
        assert!(b.check_words(2, 5).is_ok());
        assert!(matches!(b.check_words(2, 7), Err(EvalError::BudgetExceeded { .. })));
    }
}
