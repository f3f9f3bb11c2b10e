//! Strong ε-fixability: can every restriction be extended by at most `εn`
//! fixed letters so that all completions agree on membership?

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::binomial;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::enumerate::{Budget, Language};
use crate::error::EvalError;
use crate::value::{serde_rat, Rat};

/// A word over `Σ ∪ {?}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Restriction {
    pub pattern: Vec<Option<char>>,
}

impl Restriction {
    pub fn wildcards(n: usize) -> Self {
        Restriction { pattern: vec![None; n] }
    }

    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pattern.is_empty()
    }

    /// Number of fixed positions.
    pub fn size(&self) -> usize {
        self.pattern.iter().filter(|c| c.is_some()).count()
    }

    pub fn free_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.pattern[p].is_none()).collect()
    }

    /// `other` only fixes wildcards of `self`.
    pub fn is_extended_by(&self, other: &Restriction) -> bool {
        self.len() == other.len()
            && self.pattern.iter().zip(&other.pattern).all(|(a, b)| a.is_none() || a == b)
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.pattern {
            write!(f, "{}", c.unwrap_or('?'))?;
        }
        Ok(())
    }
}

impl FromStr for Restriction {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Restriction { pattern: s.chars().map(|c| (c != '?').then_some(c)).collect() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Every completion of the extension is in the language.
    FixedIn(Restriction),
    /// No completion of the extension is in the language.
    FixedOut(Restriction),
    /// Every extension within the budget has completions on both sides.
    Unfixable { budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixabilityWitness {
    #[serde(with = "serde_rat")]
    pub epsilon: Rat,
    pub n: usize,
    pub restriction: Restriction,
    pub verdict: Verdict,
}

impl FixabilityWitness {
    pub fn is_unfixable(&self) -> bool {
        matches!(self.verdict, Verdict::Unfixable { .. })
    }
}

/// Number of extra letters allowed: `⌊ε·n⌋`.
pub fn fix_budget(epsilon: &Rat, n: usize) -> usize {
    (epsilon * Rat::from_integer(n.into())).floor().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// Memoized membership with both-outcome detection over completions.
struct Evaluator<'a, L: Language + ?Sized> {
    lang: &'a L,
    alphabet: &'a [char],
    memo: HashMap<Vec<char>, bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    AllIn,
    AllOut,
    Mixed,
}

impl<L: Language + ?Sized> Evaluator<'_, L> {
    fn accepts(&mut self, w: &[char]) -> Result<bool, EvalError> {
        if let Some(&b) = self.memo.get(w) {
            return Ok(b);
        }
        let b = self.lang.accepts(w)?;
        self.memo.insert(w.to_vec(), b);
        Ok(b)
    }

    /// Classifies all completions of `r`, stopping at the first mix.
    fn outcome(&mut self, r: &Restriction) -> Result<Outcome, EvalError> {
        let free = r.free_positions();
        let mut w: Vec<char> = r.pattern.iter().map(|c| c.unwrap_or(self.alphabet[0])).collect();
        let mut digits = vec![0usize; free.len()];
        let (mut seen_in, mut seen_out) = (false, false);
        loop {
            for (d, &p) in digits.iter().zip(&free) {
                w[p] = self.alphabet[*d];
            }
            if self.accepts(&w)? {
                seen_in = true;
            } else {
                seen_out = true;
            }
            if seen_in && seen_out {
                return Ok(Outcome::Mixed);
            }
            if !odometer(&mut digits, self.alphabet.len()) {
                break;
            }
        }
        Ok(if seen_in { Outcome::AllIn } else { Outcome::AllOut })
    }
}

/// Advances a little-endian-last counter; false after the final value.
fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Visits the `k`-subsets of `0..m` in lexicographic order until `f`
/// returns `Some`.
fn for_each_subset<T>(
    m: usize,
    k: usize,
    f: &mut impl FnMut(&[usize]) -> Result<Option<T>, EvalError>,
) -> Result<Option<T>, EvalError> {
    if k > m {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let Some(t) = f(&idx)? {
            return Ok(Some(t));
        }
        let mut p = k;
        loop {
            if p == 0 {
                return Ok(None);
            }
            p -= 1;
            if idx[p] < m - k + p {
                idx[p] += 1;
                for q in p + 1..k {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Upper bound on word evaluations for one restriction.
fn search_cost(free: usize, sigma: usize, budget: usize) -> u128 {
    let sigma = sigma as u128;
    (0..=budget.min(free))
        .map(|s| {
            let c = binomial(free as u128, s as u128);
            c.saturating_mul(sigma.saturating_pow(free as u32))
        })
        .fold(0u128, u128::saturating_add)
}

/// Searches extensions of `rho` by increasing number of newly fixed
/// letters (positions in lexicographic order, letters in alphabet order).
pub fn check_fixability<L: Language + ?Sized>(
    lang: &L,
    alphabet: &[char],
    rho: &Restriction,
    epsilon: &Rat,
) -> Result<FixabilityWitness, EvalError> {
    let mut ev = Evaluator { lang, alphabet, memo: HashMap::new() };
    check_with(&mut ev, rho, epsilon)
}

fn check_with<L: Language + ?Sized>(
    ev: &mut Evaluator<'_, L>,
    rho: &Restriction,
    epsilon: &Rat,
) -> Result<FixabilityWitness, EvalError> {
    let n = rho.len();
    let budget = fix_budget(epsilon, n);
    let free = rho.free_positions();
    let sigma = ev.alphabet.len();
    Budget::default().check(search_cost(free.len(), sigma, budget))?;
    let witness = |verdict| FixabilityWitness {
        epsilon: epsilon.clone(),
        n,
        restriction: rho.clone(),
        verdict,
    };
    for size in 0..=budget.min(free.len()) {
        let found = for_each_subset(free.len(), size, &mut |chosen| {
            let mut letters = vec![0usize; size];
            loop {
                let mut ext = rho.clone();
                for (k, &c) in chosen.iter().enumerate() {
                    ext.pattern[free[c]] = Some(ev.alphabet[letters[k]]);
                }
                match ev.outcome(&ext)? {
                    Outcome::AllIn => return Ok(Some(Verdict::FixedIn(ext))),
                    Outcome::AllOut => return Ok(Some(Verdict::FixedOut(ext))),
                    Outcome::Mixed => {}
                }
                if !odometer(&mut letters, sigma) {
                    return Ok(None);
                }
            }
        })?;
        if let Some(v) = found {
            return Ok(witness(v));
        }
    }
    Ok(witness(Verdict::Unfixable { budget }))
}

/// Re-checks a witness independently of the search: fixed verdicts by
/// evaluating every completion, unfixable verdicts by confirming that every
/// extension within the budget has completions on both sides.
pub fn verify_witness<L: Language + ?Sized>(
    lang: &L,
    alphabet: &[char],
    w: &FixabilityWitness,
) -> Result<bool, EvalError> {
    let budget = fix_budget(&w.epsilon, w.n);
    let all_completions = |r: &Restriction| -> Result<Vec<bool>, EvalError> {
        let free = r.free_positions();
        let mut digits = vec![0usize; free.len()];
        let mut out = Vec::new();
        loop {
            let word: Vec<char> = r
                .pattern
                .iter()
                .enumerate()
                .map(|(p, c)| c.unwrap_or_else(|| alphabet[digits[free.iter().position(|&q| q == p).unwrap()]]))
                .collect();
            out.push(lang.accepts(&word)?);
            if !odometer(&mut digits, alphabet.len()) {
                return Ok(out);
            }
        }
    };
    match &w.verdict {
        Verdict::FixedIn(ext) | Verdict::FixedOut(ext) => {
            let want = matches!(w.verdict, Verdict::FixedIn(_));
            if !w.restriction.is_extended_by(ext) || ext.size() > w.restriction.size() + budget {
                return Ok(false);
            }
            Ok(all_completions(ext)?.into_iter().all(|b| b == want))
        }
        Verdict::Unfixable { budget: b } => {
            if *b != budget {
                return Ok(false);
            }
            // every pattern over (letter | keep) on the free positions with at
            // most `budget` letters
            let free = w.restriction.free_positions();
            let mut choice = vec![0usize; free.len()];
            loop {
                let fixed = choice.iter().filter(|&&c| c > 0).count();
                if fixed <= budget {
                    let mut ext = w.restriction.clone();
                    for (k, &p) in free.iter().enumerate() {
                        if choice[k] > 0 {
                            ext.pattern[p] = Some(alphabet[choice[k] - 1]);
                        }
                    }
                    let outs = all_completions(&ext)?;
                    if outs.iter().all(|&b| b) || outs.iter().all(|&b| !b) {
                        return Ok(false);
                    }
                }
                if !odometer(&mut choice, alphabet.len() + 1) {
                    return Ok(true);
                }
            }
        }
    }
}

/// Which restrictions of each length to try.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchScope {
    /// Only `?ⁿ`.
    AllWildcards,
    /// Every word over `Σ ∪ {?}` of length n.
    Exhaustive,
    /// `?ⁿ` plus `count` random restrictions per length.
    Sampled { count: usize, seed: u64 },
}

/// Looks for a restriction that cannot be fixed within `⌊εn⌋` letters.
/// Returns the first such witness, after independent re-verification.
pub fn search_unfixable<L: Language + ?Sized>(
    lang: &L,
    alphabet: &[char],
    epsilon: &Rat,
    lengths: std::ops::RangeInclusive<usize>,
    scope: SearchScope,
) -> Result<Option<FixabilityWitness>, EvalError> {
    let mut ev = Evaluator { lang, alphabet, memo: HashMap::new() };
    for n in lengths {
        ev.memo.clear();
        let mut candidates = vec![Restriction::wildcards(n)];
        match scope {
            SearchScope::AllWildcards => {}
            SearchScope::Exhaustive => {
                Budget::default().check((alphabet.len() as u128 + 1).saturating_pow(n as u32))?;
                let mut digits = vec![0usize; n];
                while odometer(&mut digits, alphabet.len() + 1) {
                    candidates.push(Restriction {
                        pattern: digits.iter().map(|&d| (d > 0).then(|| alphabet[d - 1])).collect(),
                    });
                }
            }
            SearchScope::Sampled { count, seed } => {
                let mut rng = StdRng::seed_from_u64(seed ^ n as u64);
                for _ in 0..count {
                    candidates.push(Restriction {
                        pattern: (0..n)
                            .map(|_| {
                                let d = rng.gen_range(0..=alphabet.len());
                                (d > 0).then(|| alphabet[d - 1])
                            })
                            .collect(),
                    });
                }
            }
        }
        for rho in &candidates {
            let w = check_with(&mut ev, rho, epsilon)?;
            if w.is_unfixable() {
                assert!(verify_witness(lang, alphabet, &w)?, "witness for {rho} failed re-verification");
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::programs::{dyck1_oracle, majority};
    use crate::value::rat;

    fn palin(w: &[char]) -> bool {
        w.iter().eq(w.iter().rev())
    }

    #[test]
    fn restriction_roundtrip() {
        let r: Restriction = "a??b".parse().unwrap();
        assert_eq!(r.size(), 2);
        assert_eq!(r.to_string(), "a??b");
        assert!(r.is_extended_by(&"ab?b".parse().unwrap()));
        assert!(!r.is_extended_by(&"b??b".parse().unwrap()));
    }

    #[test]
    fn all_strings_fixed_immediately() {
        let all = |_: &[char]| true;
        let rho: Restriction = "?a??".parse().unwrap();
        let w = check_fixability(&all, &['a', 'b'], &rho, &rat(1, 2)).unwrap();
        assert_eq!(w.verdict, Verdict::FixedIn(rho));
    }

    #[test]
    fn palindromes_fixed_out() {
        let w = check_fixability(&palin, &['a', 'b'], &Restriction::wildcards(6), &rat(1, 2)).unwrap();
        assert_eq!(w.verdict, Verdict::FixedOut("a????b".parse().unwrap()));
        assert!(verify_witness(&palin, &['a', 'b'], &w).unwrap());
    }

    #[test]
    fn majority_unfixable() {
        let w = check_fixability(&majority, &['0', '1'], &Restriction::wildcards(10), &rat(1, 5)).unwrap();
        assert_eq!(w.verdict, Verdict::Unfixable { budget: 2 });
        assert!(verify_witness(&majority, &['0', '1'], &w).unwrap());
        let found = search_unfixable(&majority, &['0', '1'], &rat(1, 5), 8..=10, SearchScope::AllWildcards).unwrap();
        assert!(found.is_some_and(|w| w.n == 8));
    }

    #[test]
    fn tampered_witnesses_fail() {
        let w = FixabilityWitness {
            epsilon: rat(1, 2),
            n: 4,
            restriction: Restriction::wildcards(4),
            verdict: Verdict::FixedIn("abba".parse().unwrap()),
        };
        // four fixes exceed the budget of two
        assert!(!verify_witness(&palin, &['a', 'b'], &w).unwrap());
        let w = FixabilityWitness { verdict: Verdict::Unfixable { budget: 2 }, ..w };
        assert!(!verify_witness(&palin, &['a', 'b'], &w).unwrap());
    }

    #[test]
    fn no_unfixable_for_small_languages() {
        let all = |_: &[char]| true;
        assert_eq!(search_unfixable(&all, &['a'], &rat(1, 3), 1..=5, SearchScope::Exhaustive).unwrap(), None);
        let scope = SearchScope::Sampled { count: 20, seed: 7 };
        assert_eq!(search_unfixable(&palin, &['a', 'b'], &rat(1, 2), 4..=8, scope).unwrap(), None);
        let d = |w: &[char]| dyck1_oracle(2, w);
        assert_eq!(search_unfixable(&d, &['(', ')'], &rat(1, 3), 6..=8, SearchScope::Exhaustive).unwrap(), None);
    }

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        for_each_subset::<()>(4, 2, &mut |s| {
            seen.push(s.to_vec());
            Ok(None)
        })
        .unwrap();
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
    }
}
