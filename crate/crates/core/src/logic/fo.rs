use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{LogicError, MonPred, MonRegistry};

/// First-order logic over word positions with `<` and monadic predicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FoFormula {
    True,
    False,
    LetterAt(Vec<char>, String),
    MonAt(String, String),
    Less(String, String),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Exists(String, Box<FoFormula>),
    ForAll(String, Box<FoFormula>),
}

impl FoFormula {
    pub fn letter(c: char, var: &str) -> Self {
        FoFormula::LetterAt(vec![c], var.into())
    }

    pub fn less(x: &str, y: &str) -> Self {
        FoFormula::Less(x.into(), y.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        FoFormula::Not(Box::new(a))
    }

    pub fn and(a: Self, b: Self) -> Self {
        FoFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        FoFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        Self::or(Self::not(a), b)
    }

    pub fn exists(v: &str, a: Self) -> Self {
        FoFormula::Exists(v.into(), Box::new(a))
    }

    pub fn forall(v: &str, a: Self) -> Self {
        FoFormula::ForAll(v.into(), Box::new(a))
    }

    /// Variables occurring free, in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        fn walk(f: &FoFormula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            let mut use_var = |v: &String, bound: &Vec<String>| {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            };
            match f {
                FoFormula::True | FoFormula::False => {}
                FoFormula::LetterAt(_, v) | FoFormula::MonAt(_, v) => use_var(v, bound),
                FoFormula::Less(x, y) => {
                    use_var(x, bound);
                    use_var(y, bound);
                }
                FoFormula::Not(a) => walk(a, bound, out),
                FoFormula::And(a, b) | FoFormula::Or(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                FoFormula::Exists(v, a) | FoFormula::ForAll(v, a) => {
                    bound.push(v.clone());
                    walk(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    fn mon_names(&self, out: &mut Vec<String>) {
        match self {
            FoFormula::MonAt(name, _) => out.push(name.clone()),
            FoFormula::Not(a) | FoFormula::Exists(_, a) | FoFormula::ForAll(_, a) => a.mon_names(out),
            FoFormula::And(a, b) | FoFormula::Or(a, b) => {
                a.mon_names(out);
                b.mon_names(out);
            }
            _ => {}
        }
    }
}

struct Ctx<'a> {
    w: &'a [char],
    preds: BTreeMap<String, MonPred>,
    assign: Vec<(String, usize)>,
}

impl Ctx<'_> {
    fn pos(&self, v: &str) -> usize {
        self.assign.iter().rev().find(|(name, _)| name == v).expect("checked closed").1
    }

    fn eval(&mut self, f: &FoFormula) -> bool {
        let n = self.w.len();
        match f {
            FoFormula::True => true,
            FoFormula::False => false,
            FoFormula::LetterAt(set, v) => set.contains(&self.w[self.pos(v)]),
            FoFormula::MonAt(name, v) => self.preds[name](n, self.pos(v)),
            FoFormula::Less(x, y) => self.pos(x) < self.pos(y),
            FoFormula::Not(a) => !self.eval(a),
            FoFormula::And(a, b) => self.eval(a) && self.eval(b),
            FoFormula::Or(a, b) => self.eval(a) || self.eval(b),
            FoFormula::Exists(v, a) | FoFormula::ForAll(v, a) => {
                let exists = matches!(f, FoFormula::Exists(..));
                for p in 0..n {
                    self.assign.push((v.clone(), p));
                    let r = self.eval(a);
                    self.assign.pop();
                    if r == exists {
                        return exists;
                    }
                }
                !exists
            }
        }
    }
}

/// Evaluates a sentence on a non-empty word by enumerating positions.
pub fn eval_fo(phi: &FoFormula, w: &[char], env: &MonRegistry) -> Result<bool, LogicError> {
    if let Some(v) = phi.free_vars().into_iter().next() {
        return Err(LogicError::FreeVariable(v));
    }
    if w.is_empty() {
        return Err(LogicError::EmptyWord);
    }
    let mut names = Vec::new();
    phi.mon_names(&mut names);
    let mut preds = BTreeMap::new();
    for name in names {
        let p = env.get(&name)?;
        preds.insert(name, p);
    }
    Ok(Ctx { w, preds, assign: Vec::new() }.eval(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::word;
    use FoFormula as F;

    #[test]
    fn examples() {
        let env = MonRegistry::standard();
        assert!(eval_fo(&F::exists("x", F::letter('a', "x")), &word("bba"), &env).unwrap());
        let astar_bstar = F::forall(
            "x",
            F::forall("y", F::implies(F::less("x", "y"), F::not(F::and(F::letter('b', "x"), F::letter('a', "y"))))),
        );
        assert!(eval_fo(&astar_bstar, &word("aabb"), &env).unwrap());
        assert!(!eval_fo(&astar_bstar, &word("aba"), &env).unwrap());
        let even_a = F::exists("x", F::and(F::MonAt("even".into(), "x".into()), F::letter('a', "x")));
        assert!(!eval_fo(&even_a, &word("ba"), &env).unwrap());
        assert!(eval_fo(&even_a, &word("ab"), &env).unwrap());
    }

    #[test]
    fn errors() {
        let env = MonRegistry::standard();
        let open = F::and(F::letter('a', "x"), F::exists("y", F::less("y", "z")));
        assert_eq!(open.free_vars(), vec!["x".to_string(), "z".to_string()]);
        assert_eq!(eval_fo(&open, &word("a"), &env).unwrap_err(), LogicError::FreeVariable("x".into()));
        let bad = F::exists("x", F::MonAt("prime".into(), "x".into()));
        assert!(matches!(eval_fo(&bad, &word("a"), &env), Err(LogicError::UnknownMonPred(_))));
        assert_eq!(eval_fo(&F::True, &[], &env).unwrap_err(), LogicError::EmptyWord);
    }

    #[test]
    fn shadowing_uses_innermost_binding() {
        let env = MonRegistry::standard();
        // ∃x (P_a(x) ∧ ∃x P_b(x))
        let f = F::exists("x", F::and(F::letter('a', "x"), F::exists("x", F::letter('b', "x"))));
        assert!(eval_fo(&f, &word("ab"), &env).unwrap());
        assert!(!eval_fo(&f, &word("aa"), &env).unwrap());
    }
}
