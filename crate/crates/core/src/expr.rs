//! Pure expression trees over column values, positions and length.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::value::{int, rat_pow, serde_rat, Rat, Value};

/// Which column a variable reads: the attending position `i` or the
/// attended position `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    I,
    J,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expr {
    Rat(#[serde(with = "serde_rat")] Rat),
    Sym(char),
    Bool(bool),
    /// Layer `ℓ` of the I- or J-column.
    Var(Side, usize),
    PosI,
    PosJ,
    Len,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    Lt(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    Tuple(Vec<Expr>),
    Get(Box<Expr>, usize),
}

/// Evaluation context: the layers computed so far plus the coordinates.
#[derive(Clone, Copy, Debug)]
pub struct EvalCtx<'a> {
    /// `layers[ℓ][p]` is the value of layer `ℓ` at position `p`.
    pub layers: &'a [Vec<Value>],
    pub i: usize,
    pub j: Option<usize>,
    pub n: usize,
}

impl<'a> EvalCtx<'a> {
    pub fn at(layers: &'a [Vec<Value>], i: usize, n: usize) -> Self {
        EvalCtx { layers, i, j: None, n }
    }

    pub fn pair(layers: &'a [Vec<Value>], i: usize, j: usize, n: usize) -> Self {
        EvalCtx { layers, i, j: Some(j), n }
    }
}

fn mismatch(op: &'static str, a: &Value, b: Option<&Value>) -> EvalError {
    let detail = match b {
        Some(b) => format!("{} and {}", a.kind(), b.kind()),
        None => a.kind().to_string(),
    };
    EvalError::TypeMismatch { op, detail }
}

fn numeric2(op: &'static str, a: &Value, b: &Value) -> Result<(Rat, Rat), EvalError> {
    match (a.as_rat(), b.as_rat()) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(mismatch(op, a, Some(b))),
    }
}

fn boolean(op: &'static str, a: &Value) -> Result<bool, EvalError> {
    a.as_bool().ok_or_else(|| mismatch(op, a, None))
}

impl Expr {
    pub fn rat(r: Rat) -> Expr {
        Expr::Rat(r)
    }

    pub fn int(v: i64) -> Expr {
        Expr::Rat(int(v))
    }

    pub fn var_i(layer: usize) -> Expr {
        Expr::Var(Side::I, layer)
    }

    pub fn var_j(layer: usize) -> Expr {
        Expr::Var(Side::J, layer)
    }

    /// Literal expression reproducing a value.
    pub fn literal(v: &Value) -> Expr {
        match v {
            Value::Symbol(c) => Expr::Sym(*c),
            Value::Int(i) => Expr::Rat(Rat::from_integer(i.clone())),
            Value::Rat(r) => Expr::Rat(r.clone()),
            Value::Bool(b) => Expr::Bool(*b),
            Value::Tuple(items) => Expr::Tuple(items.iter().map(Expr::literal).collect()),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }
    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }
    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }
    pub fn pow(a: Expr, b: Expr) -> Expr {
        Expr::Pow(Box::new(a), Box::new(b))
    }
    pub fn eq(a: Expr, b: Expr) -> Expr {
        Expr::Eq(Box::new(a), Box::new(b))
    }
    pub fn ne(a: Expr, b: Expr) -> Expr {
        Expr::not(Expr::eq(a, b))
    }
    pub fn lt(a: Expr, b: Expr) -> Expr {
        Expr::Lt(Box::new(a), Box::new(b))
    }
    pub fn le(a: Expr, b: Expr) -> Expr {
        Expr::not(Expr::lt(b, a))
    }
    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Expr) -> Expr {
        Expr::Not(Box::new(a))
    }
    pub fn ite(c: Expr, t: Expr, e: Expr) -> Expr {
        Expr::If(Box::new(c), Box::new(t), Box::new(e))
    }
    pub fn get(a: Expr, index: usize) -> Expr {
        Expr::Get(Box::new(a), index)
    }

    /// `if(Len == 1, v₁, if(Len == 2, v₂, … vₖ))` for a table indexed by
    /// input length starting at 1. The last entry also covers longer inputs.
    pub fn length_table(values: &[Rat]) -> Expr {
        assert!(!values.is_empty(), "length table needs at least one entry");
        let mut acc = Expr::Rat(values[values.len() - 1].clone());
        for (k, v) in values.iter().enumerate().rev().skip(1) {
            acc = Expr::ite(
                Expr::eq(Expr::Len, Expr::int(k as i64 + 1)),
                Expr::Rat(v.clone()),
                acc,
            );
        }
        acc
    }

    pub fn eval(&self, ctx: &EvalCtx<'_>) -> Result<Value, EvalError> {
        use Expr::*;
        Ok(match self {
            Rat(r) => Value::number(r.clone()),
            Sym(c) => Value::Symbol(*c),
            Bool(b) => Value::Bool(*b),
            Var(side, layer) => {
                let pos = match side {
                    Side::I => ctx.i,
                    Side::J => ctx.j.ok_or_else(|| {
                        EvalError::UnresolvedReference(format!("L{layer}[j] outside attention"))
                    })?,
                };
                ctx.layers
                    .get(*layer)
                    .and_then(|l| l.get(pos))
                    .cloned()
                    .ok_or_else(|| {
                        EvalError::UnresolvedReference(format!("layer {layer} at position {pos}"))
                    })?
            }
            PosI => Value::from_usize(ctx.i),
            PosJ => Value::from_usize(ctx.j.ok_or_else(|| {
                EvalError::UnresolvedReference("j outside attention".into())
            })?),
            Len => Value::from_usize(ctx.n),
            Add(a, b) => {
                let (x, y) = numeric2("+", &a.eval(ctx)?, &b.eval(ctx)?)?;
                Value::number(x + y)
            }
            Sub(a, b) => {
                let (x, y) = numeric2("-", &a.eval(ctx)?, &b.eval(ctx)?)?;
                Value::number(x - y)
            }
            Mul(a, b) => {
                let (x, y) = numeric2("*", &a.eval(ctx)?, &b.eval(ctx)?)?;
                Value::number(x * y)
            }
            Div(a, b) => {
                let (x, y) = numeric2("/", &a.eval(ctx)?, &b.eval(ctx)?)?;
                if y.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                Value::number(x / y)
            }
            Neg(a) => {
                let v = a.eval(ctx)?;
                let x = v.as_rat().ok_or_else(|| mismatch("neg", &v, None))?;
                Value::number(-x)
            }
            Pow(a, b) => {
                let (base, e) = numeric2("pow", &a.eval(ctx)?, &b.eval(ctx)?)?;
                if !e.is_integer() {
                    return Err(EvalError::TypeMismatch {
                        op: "pow",
                        detail: "non-integer exponent".into(),
                    });
                }
                let e: BigInt = e.to_integer();
                if e.is_negative() {
                    return Err(EvalError::NegativeExponent);
                }
                let e = e
                    .to_u32()
                    .filter(|e| *e <= 1 << 16)
                    .ok_or_else(|| EvalError::ExponentTooLarge(e.to_string()))?;
                Value::number(rat_pow(&base, e))
            }
            Eq(a, b) => Value::Bool(a.eval(ctx)? == b.eval(ctx)?),
            Lt(a, b) => {
                let (x, y) = numeric2("<", &a.eval(ctx)?, &b.eval(ctx)?)?;
                Value::Bool(x < y)
            }
            And(a, b) => {
                Value::Bool(boolean("&&", &a.eval(ctx)?)? && boolean("&&", &b.eval(ctx)?)?)
            }
            Or(a, b) => {
                Value::Bool(boolean("||", &a.eval(ctx)?)? || boolean("||", &b.eval(ctx)?)?)
            }
            Not(a) => Value::Bool(!boolean("!", &a.eval(ctx)?)?),
            If(c, t, e) => {
                if boolean("if", &c.eval(ctx)?)? {
                    t.eval(ctx)?
                } else {
                    e.eval(ctx)?
                }
            }
            Tuple(items) => Value::Tuple(items.iter().map(|x| x.eval(ctx)).collect::<Result<_, _>>()?),
            Get(a, index) => match a.eval(ctx)? {
                Value::Tuple(items) => {
                    let len = items.len();
                    items
                        .into_iter()
                        .nth(*index)
                        .ok_or(EvalError::TupleIndex { index: *index, len })?
                }
                other => return Err(mismatch("tuple index", &other, None)),
            },
        })
    }

    /// Pre-order traversal over all sub-expressions.
    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        use Expr::*;
        match self {
            Rat(_) | Sym(_) | Bool(_) | Var(..) | PosI | PosJ | Len => {}
            Neg(a) | Not(a) | Get(a, _) => a.visit(f),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) | Eq(a, b) | Lt(a, b)
            | And(a, b) | Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            If(c, t, e) => {
                c.visit(f);
                t.visit(f);
                e.visit(f);
            }
            Tuple(items) => items.iter().for_each(|x| x.visit(f)),
        }
    }

    /// Bottom-up rewrite: children first, then `f` on the rebuilt node.
    pub fn rewrite(&self, f: &impl Fn(Expr) -> Expr) -> Expr {
        use Expr::*;
        let b = |e: &Expr| Box::new(e.rewrite(f));
        let rebuilt = match self {
            Rat(_) | Sym(_) | Bool(_) | Var(..) | PosI | PosJ | Len => self.clone(),
            Neg(a) => Neg(b(a)),
            Not(a) => Not(b(a)),
            Get(a, k) => Get(b(a), *k),
            Add(x, y) => Add(b(x), b(y)),
            Sub(x, y) => Sub(b(x), b(y)),
            Mul(x, y) => Mul(b(x), b(y)),
            Div(x, y) => Div(b(x), b(y)),
            Pow(x, y) => Pow(b(x), b(y)),
            Eq(x, y) => Eq(b(x), b(y)),
            Lt(x, y) => Lt(b(x), b(y)),
            And(x, y) => And(b(x), b(y)),
            Or(x, y) => Or(b(x), b(y)),
            If(c, t, e) => If(b(c), b(t), b(e)),
            Tuple(items) => Tuple(items.iter().map(|x| x.rewrite(f)).collect()),
        };
        f(rebuilt)
    }

    /// True if the expression reads the I-column or `i`.
    pub fn reads_i(&self) -> bool {
        self.any(|e| matches!(e, Expr::Var(Side::I, _) | Expr::PosI))
    }

    /// True if the expression reads the J-column or `j`.
    pub fn reads_j(&self) -> bool {
        self.any(|e| matches!(e, Expr::Var(Side::J, _) | Expr::PosJ))
    }

    /// True if the expression reads `i`, `j` or `n`.
    pub fn reads_position(&self) -> bool {
        self.any(|e| matches!(e, Expr::PosI | Expr::PosJ | Expr::Len))
    }

    pub fn any(&self, pred: impl Fn(&Expr) -> bool) -> bool {
        let mut hit = false;
        self.visit(&mut |e| hit |= pred(e));
        hit
    }

    /// Highest layer index read, if any.
    pub fn max_layer(&self) -> Option<usize> {
        let mut m: Option<usize> = None;
        self.visit(&mut |e| {
            if let Expr::Var(_, l) = e {
                m = Some(m.map_or(*l, |x| x.max(*l)));
            }
        });
        m
    }

    /// Renumbers layer references.
    pub fn remap_layers(&self, map: &impl Fn(usize) -> usize) -> Expr {
        self.rewrite(&|e| match e {
            Expr::Var(side, l) => Expr::Var(side, map(l)),
            other => other,
        })
    }

    /// Turns J-side reads into I-side reads, so a J-column function can be
    /// evaluated point-wise at the current position.
    pub fn j_to_i(&self) -> Expr {
        self.rewrite(&|e| match e {
            Expr::Var(Side::J, l) => Expr::Var(Side::I, l),
            Expr::PosJ => Expr::PosI,
            other => other,
        })
    }

    /// Turns I-side reads into J-side reads.
    pub fn i_to_j(&self) -> Expr {
        self.rewrite(&|e| match e {
            Expr::Var(Side::I, l) => Expr::Var(Side::J, l),
            Expr::PosI => Expr::PosJ,
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_eval(e: &Expr, i: usize, j: Option<usize>, n: usize) -> Result<Value, EvalError> {
        let layers: Vec<Vec<Value>> = vec![vec![Value::Symbol('a'); n]];
        e.eval(&EvalCtx { layers: &layers, i, j, n })
    }

    #[test]
    fn palindrome_score_peaks_on_mirror_pair() {
        // -(n-1-i-j)^2 at i=2, j=3, n=6
        let e = Expr::neg(Expr::pow(
            Expr::sub(Expr::sub(Expr::sub(Expr::Len, Expr::int(1)), Expr::PosI), Expr::PosJ),
            Expr::int(2),
        ));
        assert_eq!(ctx_eval(&e, 2, Some(3), 6).unwrap(), Value::int(0));
    }

    #[test]
    fn constant_is_context_free() {
        assert_eq!(ctx_eval(&Expr::int(0), 0, None, 1).unwrap(), Value::int(0));
        assert_eq!(ctx_eval(&Expr::int(0), 3, Some(1), 9).unwrap(), Value::int(0));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let e = Expr::pow(Expr::int(8), Expr::PosJ);
        for j in 0..6usize {
            let expected: i64 = (0..j).fold(1, |acc, _| acc * 8);
            assert_eq!(ctx_eval(&e, 0, Some(j), 8).unwrap(), Value::int(expected));
        }
        assert_eq!(ctx_eval(&e, 0, Some(3), 4).unwrap(), Value::int(512));
    }

    #[test]
    fn error_paths() {
        let add_syms = Expr::add(Expr::Sym('a'), Expr::Sym('b'));
        assert!(matches!(ctx_eval(&add_syms, 0, None, 1), Err(EvalError::TypeMismatch { .. })));
        assert!(matches!(
            ctx_eval(&Expr::var_j(0), 0, None, 1),
            Err(EvalError::UnresolvedReference(_))
        ));
        assert!(matches!(
            ctx_eval(&Expr::PosJ, 0, None, 1),
            Err(EvalError::UnresolvedReference(_))
        ));
        let negpow = Expr::pow(Expr::int(2), Expr::int(-1));
        assert_eq!(ctx_eval(&negpow, 0, None, 1), Err(EvalError::NegativeExponent));
        let div0 = Expr::div(Expr::int(1), Expr::int(0));
        assert_eq!(ctx_eval(&div0, 0, None, 1), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn equality_is_structural_after_normalization() {
        let e = Expr::eq(Expr::div(Expr::int(4), Expr::int(2)), Expr::int(2));
        assert_eq!(ctx_eval(&e, 0, None, 1).unwrap(), Value::Bool(true));
        let e = Expr::eq(Expr::Sym('a'), Expr::int(1));
        assert_eq!(ctx_eval(&e, 0, None, 1).unwrap(), Value::Bool(false));
    }

    #[test]
    fn length_table_lookup() {
        let t = Expr::length_table(&[int(10), int(20), int(30)]);
        for (n, want) in [(1, 10), (2, 20), (3, 30), (7, 30)] {
            assert_eq!(ctx_eval(&t, 0, None, n).unwrap(), Value::int(want));
        }
    }

    #[test]
    fn side_swaps() {
        let e = Expr::add(Expr::var_j(1), Expr::PosJ);
        let i = e.j_to_i();
        assert!(i.reads_i() && !i.reads_j());
        assert_eq!(i.i_to_j(), e);
        assert_eq!(e.max_layer(), Some(1));
        assert_eq!(e.remap_layers(&|l| l + 2).max_layer(), Some(3));
    }
}
