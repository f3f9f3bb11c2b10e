use serde::{Deserialize, Serialize};

use super::{LogicError, MonRegistry};

/// LTL over finite words with strict `U` and `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LtlFormula {
    True,
    False,
    /// Holds where the letter is in the set.
    Letters(Vec<char>),
    Mon(String),
    Not(Box<LtlFormula>),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Next(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
    Yesterday(Box<LtlFormula>),
    Since(Box<LtlFormula>, Box<LtlFormula>),
}

impl LtlFormula {
    pub fn letter(c: char) -> Self {
        LtlFormula::Letters(vec![c])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        LtlFormula::Not(Box::new(a))
    }

    pub fn and(a: Self, b: Self) -> Self {
        LtlFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        LtlFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        Self::or(Self::not(a), b)
    }

    pub fn next(a: Self) -> Self {
        LtlFormula::Next(Box::new(a))
    }

    pub fn until(a: Self, b: Self) -> Self {
        LtlFormula::Until(Box::new(a), Box::new(b))
    }

    pub fn yesterday(a: Self) -> Self {
        LtlFormula::Yesterday(Box::new(a))
    }

    pub fn since(a: Self, b: Self) -> Self {
        LtlFormula::Since(Box::new(a), Box::new(b))
    }

    fn any(&self, pred: &impl Fn(&LtlFormula) -> bool) -> bool {
        use LtlFormula::*;
        pred(self)
            || match self {
                True | False | Letters(_) | Mon(_) => false,
                Not(a) | Next(a) | Yesterday(a) => a.any(pred),
                And(a, b) | Or(a, b) | Until(a, b) | Since(a, b) => a.any(pred) || b.any(pred),
            }
    }

    /// No `Y` or `S`.
    pub fn is_future(&self) -> bool {
        !self.any(&|f| matches!(f, LtlFormula::Yesterday(_) | LtlFormula::Since(..)))
    }

    /// No `X` or `U`.
    pub fn is_past(&self) -> bool {
        !self.any(&|f| matches!(f, LtlFormula::Next(_) | LtlFormula::Until(..)))
    }
}

/// Truth value at every position of `w`.
pub fn eval_ltl_all(phi: &LtlFormula, w: &[char], env: &MonRegistry) -> Result<Vec<bool>, LogicError> {
    use LtlFormula::*;
    let n = w.len();
    Ok(match phi {
        True => vec![true; n],
        False => vec![false; n],
        Letters(set) => w.iter().map(|c| set.contains(c)).collect(),
        Mon(name) => {
            let p = env.get(name)?;
            (0..n).map(|i| p(n, i)).collect()
        }
        Not(a) => eval_ltl_all(a, w, env)?.into_iter().map(|b| !b).collect(),
        And(a, b) => {
            let (x, y) = (eval_ltl_all(a, w, env)?, eval_ltl_all(b, w, env)?);
            x.iter().zip(&y).map(|(p, q)| *p && *q).collect()
        }
        Or(a, b) => {
            let (x, y) = (eval_ltl_all(a, w, env)?, eval_ltl_all(b, w, env)?);
            x.iter().zip(&y).map(|(p, q)| *p || *q).collect()
        }
        Next(a) => {
            let x = eval_ltl_all(a, w, env)?;
            (0..n).map(|i| i + 1 < n && x[i + 1]).collect()
        }
        Yesterday(a) => {
            let x = eval_ltl_all(a, w, env)?;
            (0..n).map(|i| i > 0 && x[i - 1]).collect()
        }
        Until(a, b) => {
            // U[i] = ψ[i+1] ∨ (φ[i+1] ∧ U[i+1])
            let (x, y) = (eval_ltl_all(a, w, env)?, eval_ltl_all(b, w, env)?);
            let mut out = vec![false; n];
            for i in (0..n.saturating_sub(1)).rev() {
                out[i] = y[i + 1] || (x[i + 1] && out[i + 1]);
            }
            out
        }
        Since(a, b) => {
            // S[i] = ψ[i−1] ∨ (φ[i−1] ∧ S[i−1])
            let (x, y) = (eval_ltl_all(a, w, env)?, eval_ltl_all(b, w, env)?);
            let mut out = vec![false; n];
            for i in 1..n {
                out[i] = y[i - 1] || (x[i - 1] && out[i - 1]);
            }
            out
        }
    })
}

pub fn eval_ltl(phi: &LtlFormula, w: &[char], i: usize, env: &MonRegistry) -> Result<bool, LogicError> {
    if i >= w.len() {
        return Err(LogicError::PositionOutOfRange { i, n: w.len() });
    }
    Ok(eval_ltl_all(phi, w, env)?[i])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LtlMode {
    /// Future formula evaluated at position 0.
    FutureAtFirst,
    /// Past formula evaluated at position n−1.
    PastAtLast,
}

pub fn ltl_recognize(phi: &LtlFormula, w: &[char], mode: LtlMode, env: &MonRegistry) -> Result<bool, LogicError> {
    if w.is_empty() {
        return Err(LogicError::EmptyWord);
    }
    match mode {
        LtlMode::FutureAtFirst if !phi.is_future() => {
            Err(LogicError::ModeFormulaMismatch("future mode forbids Y and S"))
        }
        LtlMode::PastAtLast if !phi.is_past() => Err(LogicError::ModeFormulaMismatch("past mode forbids X and U")),
        LtlMode::FutureAtFirst => eval_ltl(phi, w, 0, env),
        LtlMode::PastAtLast => eval_ltl(phi, w, w.len() - 1, env),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{shortlex, word};
    use LtlFormula as F;

    /// Direct transcription of the satisfaction rules.
    fn naive(phi: &LtlFormula, w: &[char], i: usize) -> bool {
        let n = w.len();
        match phi {
            F::True => true,
            F::False => false,
            F::Letters(s) => s.contains(&w[i]),
            F::Mon(_) => unreachable!(),
            F::Not(a) => !naive(a, w, i),
            F::And(a, b) => naive(a, w, i) && naive(b, w, i),
            F::Or(a, b) => naive(a, w, i) || naive(b, w, i),
            F::Next(a) => i + 1 < n && naive(a, w, i + 1),
            F::Yesterday(a) => i > 0 && naive(a, w, i - 1),
            F::Until(a, b) => (i + 1..n).any(|j| naive(b, w, j) && (i + 1..j).all(|k| naive(a, w, k))),
            F::Since(a, b) => (0..i).any(|j| naive(b, w, j) && (j + 1..i).all(|k| naive(a, w, k))),
        }
    }

    fn pa() -> F {
        F::letter('a')
    }
    fn pb() -> F {
        F::letter('b')
    }

    #[test]
    fn examples() {
        let env = MonRegistry::standard();
        assert!(eval_ltl(&F::and(pa(), F::next(pb())), &word("ab"), 0, &env).unwrap());
        assert!(eval_ltl(&F::until(pa(), pb()), &word("aab"), 0, &env).unwrap());
        assert!(!eval_ltl(&F::next(pa()), &word("a"), 0, &env).unwrap());
        assert!(!eval_ltl(&F::until(F::True, pa()), &word("a"), 0, &env).unwrap());
        assert_eq!(
            eval_ltl(&pa(), &word("a"), 1, &env).unwrap_err(),
            LogicError::PositionOutOfRange { i: 1, n: 1 }
        );
    }

    #[test]
    fn modes() {
        let env = MonRegistry::standard();
        let w = word("ab");
        assert_eq!(ltl_recognize(&F::True, &[], LtlMode::FutureAtFirst, &env).unwrap_err(), LogicError::EmptyWord);
        assert!(ltl_recognize(&F::yesterday(pa()), &w, LtlMode::FutureAtFirst, &env).is_err());
        assert!(ltl_recognize(&F::next(pb()), &w, LtlMode::PastAtLast, &env).is_err());
        assert!(ltl_recognize(&F::yesterday(pa()), &w, LtlMode::PastAtLast, &env).unwrap());
        assert!(ltl_recognize(&F::True, &w, LtlMode::FutureAtFirst, &env).unwrap());
    }

    #[test]
    fn dp_matches_rules() {
        let env = MonRegistry::standard();
        let fs = [
            F::until(pa(), pb()),
            F::since(pb(), F::not(pa())),
            F::until(F::since(pa(), pb()), F::next(pa())),
            F::yesterday(F::until(F::False, pb())),
        ];
        for f in &fs {
            for w in shortlex(&['a', 'b'], 6).skip(1) {
                let all = eval_ltl_all(f, &w, &env).unwrap();
                for (i, v) in all.iter().enumerate() {
                    assert_eq!(*v, naive(f, &w, i));
                }
            }
        }
    }

    #[test]
    fn bottom_until_is_next() {
        let env = MonRegistry::standard();
        for w in shortlex(&['a', 'b'], 8).skip(1) {
            for i in 0..w.len() {
                assert_eq!(
                    eval_ltl(&F::until(F::False, pa()), &w, i, &env).unwrap(),
                    eval_ltl(&F::next(pa()), &w, i, &env).unwrap()
                );
            }
        }
    }

    #[test]
    fn monadic_predicates() {
        let env = MonRegistry::standard();
        let f = F::and(F::Mon("even".into()), pa());
        assert_eq!(eval_ltl_all(&f, &word("aab"), &env).unwrap(), vec![true, false, false]);
        assert!(matches!(eval_ltl_all(&F::Mon("zz".into()), &word("a"), &env), Err(LogicError::UnknownMonPred(_))));
    }
}
