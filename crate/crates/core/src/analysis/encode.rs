//! Fixed-width binary letter encodings.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("letters {0:?} and {1:?} share a code")]
    NonInjectiveEncoding(char, char),
    #[error("code for {letter:?} has width {got}, expected {expected}")]
    WidthMismatch { letter: char, expected: usize, got: usize },
    #[error("code for {0:?} is not a bit string")]
    NotBits(char),
    #[error("letter {0:?} has no code")]
    UnknownLetter(char),
}

/// `⌈log₂ k⌉`, with a single letter taking no bits.
pub fn code_width(alphabet_size: usize) -> usize {
    match alphabet_size {
        0 | 1 => 0,
        k => (usize::BITS - (k - 1).leading_zeros()) as usize,
    }
}

/// Letters in the order given get consecutive codes starting at zero.
pub fn default_encoding(alphabet: &[char]) -> BTreeMap<char, String> {
    let w = code_width(alphabet.len());
    alphabet.iter().enumerate().map(|(k, &c)| (c, format!("{k:0w$b}"))).collect()
}

pub fn encode_binary(word: &[char], h: &BTreeMap<char, String>) -> Result<String, EncodeError> {
    let width = code_width(h.len());
    let mut seen: BTreeMap<&str, char> = BTreeMap::new();
    for (&c, code) in h {
        if !code.chars().all(|b| b == '0' || b == '1') {
            return Err(EncodeError::NotBits(c));
        }
        if code.len() != width {
            return Err(EncodeError::WidthMismatch { letter: c, expected: width, got: code.len() });
        }
        if let Some(&prev) = seen.get(code.as_str()) {
            return Err(EncodeError::NonInjectiveEncoding(prev, c));
        }
        seen.insert(code, c);
    }
    let mut out = String::with_capacity(word.len() * width);
    for c in word {
        out.push_str(h.get(c).ok_or(EncodeError::UnknownLetter(*c))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!((1..=9).map(code_width).collect::<Vec<_>>(), [0, 1, 2, 2, 3, 3, 3, 3, 4]);
    }

    #[test]
    fn examples() {
        let h = default_encoding(&['a', 'b']);
        assert_eq!(encode_binary(&['a', 'b'], &h).unwrap(), "01");
        let h = default_encoding(&['(', ')', '#']);
        assert_eq!(encode_binary(&['(', ')'], &h).unwrap(), "0001");
        assert_eq!(encode_binary(&[], &h).unwrap(), "");
    }

    #[test]
    fn rejects_bad_tables() {
        let h: BTreeMap<char, String> = [('a', "1".to_string()), ('b', "1".to_string())].into();
        assert_eq!(encode_binary(&['a'], &h), Err(EncodeError::NonInjectiveEncoding('a', 'b')));
        let h: BTreeMap<char, String> = [('a', "00".to_string()), ('b', "1".to_string())].into();
        assert!(matches!(encode_binary(&['a'], &h), Err(EncodeError::WidthMismatch { .. })));
        let h = default_encoding(&['a', 'b']);
        assert_eq!(encode_binary(&['c'], &h), Err(EncodeError::UnknownLetter('c')));
    }
}
