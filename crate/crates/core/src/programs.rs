//! Concrete recognizers used as fixtures and pass inputs, each paired with a
//! direct reference implementation of its language.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::LibraryError;
use crate::expr::Expr;
use crate::ir::{
    Attention, InitKind, Initialization, Line, Masking, ReadPos, Recognizer, ScoreSpec, SepTerm,
    SeparableScore, TieBreak,
};

/// A membership predicate implemented without the program machinery.
pub type Oracle = Arc<dyn Fn(&[char]) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct NamedRecognizer {
    pub name: String,
    pub rec: Recognizer,
    pub oracle: Oracle,
}

impl fmt::Debug for NamedRecognizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NamedRecognizer").field("name", &self.name).field("rec", &self.rec).finish()
    }
}

fn check_alphabet(alphabet: &[char]) -> Result<(), LibraryError> {
    let mut distinct = alphabet.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(LibraryError::AlphabetTooSmall(distinct.len()));
    }
    Ok(())
}

fn letter(side_j: bool) -> Expr {
    let v = if side_j { Expr::var_j(0) } else { Expr::var_i(0) };
    Expr::get(v, 0)
}

/// `−(n−1−i−j)²`
pub fn palindrome_score() -> Expr {
    let d = Expr::sub(Expr::sub(Expr::sub(Expr::Len, Expr::int(1)), Expr::PosI), Expr::PosJ);
    Expr::neg(Expr::pow(d, Expr::int(2)))
}

/// The three terms `(−(n−1−i)², 1)`, `(2(n−1−i), j)`, `(1, −j²)`.
pub fn palindrome_separable_terms() -> Vec<SepTerm> {
    let m = || Expr::sub(Expr::sub(Expr::Len, Expr::int(1)), Expr::PosI);
    vec![
        SepTerm::new(Expr::neg(Expr::pow(m(), Expr::int(2))), Expr::int(1)),
        SepTerm::new(Expr::mul(Expr::int(2), m()), Expr::PosJ),
        SepTerm::new(Expr::int(1), Expr::neg(Expr::pow(Expr::PosJ, Expr::int(2)))),
    ]
}

fn same_letter() -> Expr {
    Expr::eq(letter(false), letter(true))
}

fn is_palindrome(w: &[char]) -> bool {
    w.iter().eq(w.iter().rev())
}

fn palindrome_named(name: &str, alphabet: &[char], lines: Vec<Line>) -> NamedRecognizer {
    NamedRecognizer {
        name: name.to_string(),
        rec: Recognizer {
            init: Initialization::new(InitKind::CharPosLen, alphabet.iter().copied()),
            lines,
            valid: Expr::eq(Expr::var_i(2), Expr::int(1)),
            read_pos: ReadPos::Last,
            empty_accepts: true,
        },
        oracle: Arc::new(is_palindrome),
    }
}

/// Unmasked palindrome recognizer with scores `−(n−1−i−j)²` and `−l₁(j)`.
pub fn build_palindrome_guhat(alphabet: &[char]) -> Result<NamedRecognizer, LibraryError> {
    check_alphabet(alphabet)?;
    let l1 = Attention {
        mask: Masking::NoMask,
        tie: TieBreak::Rightmost,
        score: ScoreSpec::Expr(palindrome_score()),
        value: Expr::ite(same_letter(), Expr::int(1), Expr::int(0)),
        default: Expr::int(0),
    };
    let l2 = Attention {
        mask: Masking::NoMask,
        tie: TieBreak::Rightmost,
        score: ScoreSpec::Expr(Expr::neg(Expr::var_j(1))),
        value: Expr::var_j(1),
        default: Expr::int(0),
    };
    Ok(palindrome_named("palindrome", alphabet, vec![Line::Attention(l1), Line::Attention(l2)]))
}

/// Strict-future-masked palindrome recognizer. Positions up to the middle
/// report 1 unconditionally; the second layer also folds in the current
/// column, which the strict mask would otherwise hide.
pub fn build_palindrome_masked(alphabet: &[char]) -> Result<NamedRecognizer, LibraryError> {
    check_alphabet(alphabet)?;
    let first_half = Expr::le(
        Expr::mul(Expr::int(2), Expr::PosI),
        Expr::sub(Expr::Len, Expr::int(1)),
    );
    let l1 = Attention {
        mask: Masking::StrictFuture,
        tie: TieBreak::Rightmost,
        score: ScoreSpec::Expr(palindrome_score()),
        value: Expr::ite(Expr::or(same_letter(), first_half), Expr::int(1), Expr::int(0)),
        default: Expr::int(1),
    };
    let l2 = Attention {
        mask: Masking::StrictFuture,
        tie: TieBreak::Rightmost,
        score: ScoreSpec::Expr(Expr::neg(Expr::var_j(1))),
        value: Expr::mul(Expr::var_i(1), Expr::var_j(1)),
        default: Expr::var_i(1),
    };
    Ok(palindrome_named("palindrome-masked", alphabet, vec![Line::Attention(l1), Line::Attention(l2)]))
}

/// Palindrome recognizer whose scores are given in separable form.
pub fn build_palindrome_separable(alphabet: &[char]) -> Result<NamedRecognizer, LibraryError> {
    let mut named = build_palindrome_guhat(alphabet)?;
    let sep1 = SeparableScore::new(1, palindrome_separable_terms());
    let sep2 = SeparableScore::new(2, vec![SepTerm::new(Expr::int(1), Expr::neg(Expr::var_j(1)))]);
    for (line, sep) in named.rec.lines.iter_mut().zip([sep1, sep2]) {
        if let Line::Attention(a) = line {
            a.score = ScoreSpec::Separable(sep);
        }
    }
    named.name = "palindrome-separable".into();
    Ok(named)
}

/// Counter scan: balanced and never deeper than `depth`.
pub fn dyck1_oracle(depth: usize, w: &[char]) -> bool {
    let mut c: usize = 0;
    for &x in w {
        match x {
            '(' => {
                c += 1;
                if c > depth {
                    return false;
                }
            }
            ')' => {
                if c == 0 {
                    return false;
                }
                c -= 1;
            }
            _ => return false,
        }
    }
    c == 0
}

fn dyck_lines(depth: usize, mask: Masking) -> (Vec<Line>, Expr) {
    // Level-k letters are positions with C_k ≠ 0 (±1 for open/close).
    // P_k is the nearest earlier level-k letter, −1 if none. A level-k letter
    // equal to its predecessor is promoted to level k+1.
    let mut lines = vec![Line::Pointwise(Expr::ite(
        Expr::eq(Expr::var_i(0), Expr::Sym('(')),
        Expr::int(1),
        Expr::int(-1),
    ))];
    let c_layer = |k: usize| 2 * k - 1;
    let p_layer = |k: usize| 2 * k;
    let nonzero = |e: Expr| Expr::ne(e, Expr::int(0));
    for k in 1..=depth {
        let c = c_layer(k);
        lines.push(Line::Attention(Attention {
            mask,
            tie: TieBreak::Rightmost,
            score: ScoreSpec::Expr(Expr::ite(nonzero(Expr::var_j(c)), Expr::int(1), Expr::int(0))),
            value: Expr::ite(nonzero(Expr::var_j(c)), Expr::var_j(c), Expr::int(-1)),
            default: Expr::int(-1),
        }));
        lines.push(Line::Pointwise(Expr::ite(
            Expr::and(nonzero(Expr::var_i(c)), Expr::eq(Expr::var_i(c), Expr::var_i(p_layer(k)))),
            Expr::var_i(c),
            Expr::int(0),
        )));
    }
    let top = c_layer(depth + 1);
    lines.push(Line::Attention(Attention {
        mask,
        tie: TieBreak::Rightmost,
        score: ScoreSpec::Expr(Expr::ite(nonzero(Expr::var_j(top)), Expr::int(1), Expr::int(0))),
        value: nonzero(Expr::var_j(top)),
        default: Expr::Bool(false),
    }));
    let overflow = top + 1;
    let mut ok = Expr::and(Expr::not(Expr::var_i(overflow)), Expr::eq(Expr::var_i(top), Expr::int(0)));
    for k in 1..=depth {
        let last = Expr::ite(nonzero(Expr::var_i(c_layer(k))), Expr::var_i(c_layer(k)), Expr::var_i(p_layer(k)));
        ok = Expr::and(ok, Expr::eq(last, Expr::int(-1)));
    }
    lines.push(Line::Pointwise(ok));
    let valid = Expr::eq(Expr::var_i(lines.len()), Expr::Bool(true));
    (lines, valid)
}

fn dyck_named(name: String, depth: usize, mask: Masking) -> Result<NamedRecognizer, LibraryError> {
    if depth < 1 {
        return Err(LibraryError::InvalidDepth(depth));
    }
    let (lines, valid) = dyck_lines(depth, mask);
    Ok(NamedRecognizer {
        name,
        rec: Recognizer {
            init: Initialization::new(InitKind::CharOnly, ['(', ')']),
            lines,
            valid,
            read_pos: ReadPos::Last,
            empty_accepts: true,
        },
        oracle: Arc::new(move |w| dyck1_oracle(depth, w)),
    })
}

/// Finite-type, strict-future-masked recognizer for balanced parentheses of
/// nesting depth at most `depth`, with `depth + 1` attention lines.
pub fn build_dyck1(depth: usize) -> Result<NamedRecognizer, LibraryError> {
    dyck_named(format!("dyck1({depth})"), depth, Masking::StrictFuture)
}

/// The same lines as [`build_dyck1`] with the masks removed. Its language
/// differs from the bounded Dyck language; used as a differential fixture.
pub fn build_dyck1_unmasked(depth: usize) -> Result<NamedRecognizer, LibraryError> {
    let mut named = dyck_named(format!("dyck1-unmasked({depth})"), depth, Masking::NoMask)?;
    named.oracle = Arc::new(move |w| dyck1_oracle(depth, w));
    Ok(named)
}

fn has_letter(side_j: bool, c: char) -> Expr {
    let v = if side_j { Expr::var_j(0) } else { Expr::var_i(0) };
    Expr::eq(v, Expr::Sym(c))
}

/// Unmasked finite-type BRASP program in column-only form accepting words
/// that contain both `a` and `b`.
pub fn build_brasp_contains_ab() -> NamedRecognizer {
    let lines = vec![
        Line::Attention(Attention {
            mask: Masking::NoMask,
            tie: TieBreak::Leftmost,
            score: ScoreSpec::Expr(has_letter(true, 'b')),
            value: has_letter(true, 'b'),
            default: Expr::Bool(false),
        }),
        Line::Attention(Attention {
            mask: Masking::NoMask,
            tie: TieBreak::Rightmost,
            score: ScoreSpec::Expr(has_letter(true, 'a')),
            value: has_letter(true, 'a'),
            default: Expr::Bool(false),
        }),
    ];
    NamedRecognizer {
        name: "brasp-contains-ab".into(),
        rec: Recognizer {
            init: Initialization::new(InitKind::CharOnly, ['a', 'b']),
            lines,
            valid: Expr::and(Expr::var_i(1), Expr::var_i(2)),
            read_pos: ReadPos::Last,
            empty_accepts: false,
        },
        oracle: Arc::new(|w| w.contains(&'a') && w.contains(&'b')),
    }
}

/// Number of `1` letters.
pub fn hamming_weight(w: &[char]) -> usize {
    w.iter().filter(|&&c| c == '1').count()
}

/// At least half of the letters are `1`.
pub fn majority(w: &[char]) -> bool {
    2 * hamming_weight(w) >= w.len()
}

/// Named reference languages: `palindromes`, `dyck1(1)`..`dyck1(4)`,
/// `majority`, `all`, `none`.
pub fn builtin_language_oracles() -> BTreeMap<String, Oracle> {
    let mut m: BTreeMap<String, Oracle> = BTreeMap::new();
    m.insert("palindromes".into(), Arc::new(is_palindrome));
    for d in 1..=4 {
        m.insert(format!("dyck1({d})"), Arc::new(move |w| dyck1_oracle(d, w)));
    }
    m.insert("majority".into(), Arc::new(majority));
    m.insert("all".into(), Arc::new(|_| true));
    m.insert("none".into(), Arc::new(|_| false));
    m
}

/// Looks up an oracle by name; `dyck1(D)` is accepted for every `D ≥ 1`.
pub fn oracle_by_name(name: &str) -> Result<Oracle, LibraryError> {
    if let Some(o) = builtin_language_oracles().remove(name) {
        return Ok(o);
    }
    let depth = name
        .strip_prefix("dyck1(")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|d| d.trim().parse::<usize>().ok())
        .filter(|d| *d >= 1)
        .ok_or_else(|| LibraryError::UnknownOracle(name.to_string()))?;
    Ok(Arc::new(move |w| dyck1_oracle(depth, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{shortlex, word};
    use crate::value::Value;

    const AB: [char; 2] = ['a', 'b'];

    fn agrees_up_to(named: &NamedRecognizer, len: usize) {
        named.rec.validate().unwrap();
        for w in shortlex(named.rec.alphabet(), len) {
            let got = named.rec.recognize(&w).unwrap();
            assert_eq!(got, (named.oracle)(&w), "{} on {:?}", named.name, w.iter().collect::<String>());
        }
    }

    #[test]
    fn palindrome_examples() {
        let p = build_palindrome_guhat(&AB).unwrap();
        assert!(p.rec.recognize(&word("abba")).unwrap());
        assert!(!p.rec.recognize(&word("ab")).unwrap());
        assert!(p.rec.recognize(&word("")).unwrap());
        let layers = p.rec.run(&word("ab")).unwrap().layers;
        assert_eq!(layers[2], vec![Value::int(0), Value::int(0)]);
        let layers = p.rec.run(&word("a")).unwrap().layers;
        assert_eq!(layers[2], vec![Value::int(1)]);
        let layers = p.rec.run(&word("aa")).unwrap().layers;
        assert_eq!(layers[1], vec![Value::int(1), Value::int(1)]);
    }

    #[test]
    fn small_alphabet_rejected() {
        assert_eq!(build_palindrome_guhat(&['a']).unwrap_err(), LibraryError::AlphabetTooSmall(1));
        assert!(build_palindrome_masked(&['a', 'a']).is_err());
        assert!(build_palindrome_separable(&[]).is_err());
    }

    #[test]
    fn masked_palindrome_examples() {
        let p = build_palindrome_masked(&AB).unwrap();
        assert!(p.rec.recognize(&word("aba")).unwrap());
        assert!(!p.rec.recognize(&word("ab")).unwrap());
    }

    #[test]
    fn palindromes_match_oracle() {
        agrees_up_to(&build_palindrome_guhat(&AB).unwrap(), 10);
        agrees_up_to(&build_palindrome_masked(&AB).unwrap(), 10);
        agrees_up_to(&build_palindrome_separable(&AB).unwrap(), 10);
        agrees_up_to(&build_palindrome_guhat(&['x', 'y', 'z']).unwrap(), 6);
    }

    #[test]
    fn dyck_examples() {
        let d2 = build_dyck1(2).unwrap();
        assert!(d2.rec.recognize(&word("(())")).unwrap());
        assert!(!d2.rec.recognize(&word("((()))")).unwrap());
        let d1 = build_dyck1(1).unwrap();
        assert!(d1.rec.recognize(&word("()")).unwrap());
        assert!(!d1.rec.recognize(&word("(()")).unwrap());
        assert_eq!(build_dyck1(0).unwrap_err(), LibraryError::InvalidDepth(0));
        assert!(d1.rec.init.is_finite_type());
        assert_eq!(d1.rec.attention_lines().count(), 2);
    }

    #[test]
    fn dyck_matches_oracle() {
        for d in 1..=4 {
            agrees_up_to(&build_dyck1(d).unwrap(), 10);
        }
    }

    #[test]
    fn unmasked_dyck_differs() {
        let u = build_dyck1_unmasked(2).unwrap();
        let differs = shortlex(u.rec.alphabet(), 8).any(|w| u.rec.recognize(&w).unwrap() != (u.oracle)(&w));
        assert!(differs);
    }

    #[test]
    fn brasp_sample_matches_oracle() {
        agrees_up_to(&build_brasp_contains_ab(), 8);
    }

    #[test]
    fn oracle_library() {
        let m = builtin_language_oracles();
        assert!(m["majority"](&word("1101")));
        assert!(!m["majority"](&word("1000")));
        assert!(m["all"](&word("0101")));
        assert!(!m["none"](&word("")));
        assert_eq!(hamming_weight(&word("0000")), 0);
        assert!(oracle_by_name("dyck1(7)").unwrap()(&word("((()))")));
        assert!(matches!(oracle_by_name("nope"), Err(LibraryError::UnknownOracle(_))));
    }
}
