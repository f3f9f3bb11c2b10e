//! Program representation: lines, score specifications, initializations and
//! recognizers.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{EvalError, ProgramError};
use crate::expr::{EvalCtx, Expr};
use crate::value::{serde_rat_matrix, ExtScore, Rat, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Masking {
    NoMask,
    /// Admits `j` iff `i > j`.
    StrictFuture,
    /// Admits `j` iff `i < j`.
    StrictPast,
}

impl Masking {
    pub fn admits(self, i: usize, j: usize) -> bool {
        match self {
            Masking::NoMask => true,
            Masking::StrictFuture => i > j,
            Masking::StrictPast => i < j,
        }
    }
}

impl fmt::Display for Masking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Masking::NoMask => "none",
            Masking::StrictFuture => "future",
            Masking::StrictPast => "past",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TieBreak {
    Rightmost,
    Leftmost,
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TieBreak::Rightmost => "rightmost",
            TieBreak::Leftmost => "leftmost",
        })
    }
}

/// One product term `f(I-column) · g(J-column)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SepTerm {
    pub f: Expr,
    pub g: Expr,
}

impl SepTerm {
    pub fn new(f: Expr, g: Expr) -> Self {
        SepTerm { f, g }
    }
}

/// `Σ fₖ(x)·gₖ(y)` over the carrier made of layers `0..carrier`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeparableScore {
    pub carrier: usize,
    pub terms: Vec<SepTerm>,
}

impl SeparableScore {
    pub fn new(carrier: usize, terms: Vec<SepTerm>) -> Self {
        SeparableScore { carrier, terms }
    }

    pub fn eval(&self, ctx: &EvalCtx<'_>) -> Result<Rat, EvalError> {
        let mut acc = Rat::zero();
        for t in &self.terms {
            acc += as_number("separable f", t.f.eval(ctx)?)? * as_number("separable g", t.g.eval(ctx)?)?;
        }
        Ok(acc)
    }
}

/// A finite score table indexed by a key computed on each side.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableScore {
    /// Key of the attending column (I-side expression).
    pub key_i: Expr,
    /// Key of the attended column (J-side expression).
    pub key_j: Expr,
    pub rows: Vec<Value>,
    pub cols: Vec<Value>,
    #[serde(with = "serde_rat_matrix")]
    pub entries: Vec<Vec<Rat>>,
}

impl TableScore {
    pub fn is_total(&self) -> bool {
        self.entries.len() == self.rows.len() && self.entries.iter().all(|r| r.len() == self.cols.len())
    }

    pub fn lookup(&self, row: &Value, col: &Value) -> Result<Rat, EvalError> {
        let r = self
            .rows
            .iter()
            .position(|v| v == row)
            .ok_or_else(|| EvalError::KeyNotInTable(row.to_string()))?;
        let c = self
            .cols
            .iter()
            .position(|v| v == col)
            .ok_or_else(|| EvalError::KeyNotInTable(col.to_string()))?;
        self.entries
            .get(r)
            .and_then(|row| row.get(c))
            .cloned()
            .ok_or_else(|| EvalError::KeyNotInTable(format!("({row}, {col})")))
    }
}

/// `x_iᵀ M y_j` where `x`, `y` are the vector encodings of one layer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BilinearScore {
    pub layer: usize,
    #[serde(with = "serde_rat_matrix")]
    pub matrix: Vec<Vec<Rat>>,
}

impl BilinearScore {
    pub fn eval(&self, ctx: &EvalCtx<'_>) -> Result<Rat, EvalError> {
        let j = ctx
            .j
            .ok_or_else(|| EvalError::UnresolvedReference("bilinear score without j".into()))?;
        let layer = ctx
            .layers
            .get(self.layer)
            .ok_or_else(|| EvalError::UnresolvedReference(format!("layer {}", self.layer)))?;
        let x = layer[ctx.i]
            .to_vector()
            .ok_or_else(|| EvalError::VectorShape(format!("layer {} is not numeric", self.layer)))?;
        let y = layer[j]
            .to_vector()
            .ok_or_else(|| EvalError::VectorShape(format!("layer {} is not numeric", self.layer)))?;
        if self.matrix.len() != x.len() || self.matrix.iter().any(|r| r.len() != y.len()) {
            return Err(EvalError::VectorShape(format!(
                "matrix shape does not match vectors of length {} and {}",
                x.len(),
                y.len()
            )));
        }
        let mut acc = Rat::zero();
        for (r, row) in self.matrix.iter().enumerate() {
            for (c, m) in row.iter().enumerate() {
                if !m.is_zero() {
                    acc += m * &x[r] * &y[c];
                }
            }
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScoreSpec {
    Expr(Expr),
    Table(TableScore),
    Separable(SeparableScore),
    Bilinear(BilinearScore),
    /// `inner` where `admit` holds, otherwise `fallback` (`None` = -∞).
    Guarded {
        admit: Expr,
        inner: Box<ScoreSpec>,
        fallback: Option<Expr>,
    },
    /// `inner + offset`.
    Shifted { inner: Box<ScoreSpec>, offset: Expr },
}

pub(crate) fn as_number(op: &'static str, v: Value) -> Result<Rat, EvalError> {
    match v {
        Value::Bool(b) => Ok(if b { Rat::from_integer(1.into()) } else { Rat::zero() }),
        other => other.as_rat().ok_or_else(|| EvalError::TypeMismatch {
            op,
            detail: format!("score must be numeric, got {}", other.kind()),
        }),
    }
}

impl ScoreSpec {
    /// Score of the pair in `ctx` (which must carry `j`). Booleans count as
    /// 0/1.
    pub fn eval(&self, ctx: &EvalCtx<'_>) -> Result<ExtScore, EvalError> {
        Ok(match self {
            ScoreSpec::Expr(e) => ExtScore::Finite(as_number("score", e.eval(ctx)?)?),
            ScoreSpec::Table(t) => {
                let row = t.key_i.eval(ctx)?;
                let col = t.key_j.eval(ctx)?;
                ExtScore::Finite(t.lookup(&row, &col)?)
            }
            ScoreSpec::Separable(s) => ExtScore::Finite(s.eval(ctx)?),
            ScoreSpec::Bilinear(b) => ExtScore::Finite(b.eval(ctx)?),
            ScoreSpec::Guarded { admit, inner, fallback } => {
                let ok = admit.eval(ctx)?.as_bool().ok_or_else(|| EvalError::TypeMismatch {
                    op: "guard",
                    detail: "admission predicate must be boolean".into(),
                })?;
                if ok {
                    inner.eval(ctx)?
                } else {
                    match fallback {
                        None => ExtScore::NegInfinity,
                        Some(e) => ExtScore::Finite(as_number("guard fallback", e.eval(ctx)?)?),
                    }
                }
            }
            ScoreSpec::Shifted { inner, offset } => {
                inner.eval(ctx)?.add(&as_number("shift", offset.eval(ctx)?)?)
            }
        })
    }

    /// Every expression appearing in the score.
    pub fn exprs(&self) -> Vec<&Expr> {
        match self {
            ScoreSpec::Expr(e) => vec![e],
            ScoreSpec::Table(t) => vec![&t.key_i, &t.key_j],
            ScoreSpec::Separable(s) => s.terms.iter().flat_map(|t| [&t.f, &t.g]).collect(),
            ScoreSpec::Bilinear(_) => vec![],
            ScoreSpec::Guarded { admit, inner, fallback } => {
                let mut v = vec![admit];
                v.extend(inner.exprs());
                v.extend(fallback.iter());
                v
            }
            ScoreSpec::Shifted { inner, offset } => {
                let mut v = inner.exprs();
                v.push(offset);
                v
            }
        }
    }

    /// Applies `f` to every expression; `layer_map` renumbers bilinear layers
    /// and separable carriers.
    pub fn map_exprs(&self, f: &impl Fn(&Expr) -> Expr, layer_map: &impl Fn(usize) -> usize) -> ScoreSpec {
        match self {
            ScoreSpec::Expr(e) => ScoreSpec::Expr(f(e)),
            ScoreSpec::Table(t) => ScoreSpec::Table(TableScore {
                key_i: f(&t.key_i),
                key_j: f(&t.key_j),
                ..t.clone()
            }),
            ScoreSpec::Separable(s) => ScoreSpec::Separable(SeparableScore {
                carrier: layer_map(s.carrier),
                terms: s.terms.iter().map(|t| SepTerm::new(f(&t.f), f(&t.g))).collect(),
            }),
            ScoreSpec::Bilinear(b) => ScoreSpec::Bilinear(BilinearScore {
                layer: layer_map(b.layer),
                matrix: b.matrix.clone(),
            }),
            ScoreSpec::Guarded { admit, inner, fallback } => ScoreSpec::Guarded {
                admit: f(admit),
                inner: Box::new(inner.map_exprs(f, layer_map)),
                fallback: fallback.as_ref().map(f),
            },
            ScoreSpec::Shifted { inner, offset } => ScoreSpec::Shifted {
                inner: Box::new(inner.map_exprs(f, layer_map)),
                offset: f(offset),
            },
        }
    }

    fn max_layer(&self) -> Option<usize> {
        let own = match self {
            ScoreSpec::Bilinear(b) => Some(b.layer),
            _ => None,
        };
        self.exprs().into_iter().filter_map(Expr::max_layer).chain(own).max()
    }
}

/// `▶_j[mask, score] value : default` (or `◀` for leftmost ties).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Attention {
    pub mask: Masking,
    pub tie: TieBreak,
    pub score: ScoreSpec,
    pub value: Expr,
    pub default: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Line {
    Pointwise(Expr),
    Attention(Attention),
}

impl Line {
    pub fn as_attention(&self) -> Option<&Attention> {
        match self {
            Line::Attention(a) => Some(a),
            Line::Pointwise(_) => None,
        }
    }

    pub fn exprs(&self) -> Vec<&Expr> {
        match self {
            Line::Pointwise(e) => vec![e],
            Line::Attention(a) => {
                let mut v = a.score.exprs();
                v.push(&a.value);
                v.push(&a.default);
                v
            }
        }
    }

    pub fn map_exprs(&self, f: &impl Fn(&Expr) -> Expr, layer_map: &impl Fn(usize) -> usize) -> Line {
        match self {
            Line::Pointwise(e) => Line::Pointwise(f(e)),
            Line::Attention(a) => Line::Attention(Attention {
                mask: a.mask,
                tie: a.tie,
                score: a.score.map_exprs(f, layer_map),
                value: f(&a.value),
                default: f(&a.default),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitKind {
    /// Layer 0 holds the letter.
    CharOnly,
    /// Layer 0 holds the triple `(letter, i, n)`.
    CharPosLen,
    /// Layer 0 holds `e(letter, i, n)`; the letter is read as `L0[i]`.
    Custom(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Initialization {
    pub kind: InitKind,
    pub alphabet: Vec<char>,
}

impl Initialization {
    pub fn new(kind: InitKind, alphabet: impl IntoIterator<Item = char>) -> Self {
        Initialization { kind, alphabet: alphabet.into_iter().collect() }
    }

    /// Whether the initialization makes `i` and `n` readable.
    pub fn provides_position(&self) -> bool {
        match &self.kind {
            InitKind::CharOnly => false,
            InitKind::CharPosLen => true,
            InitKind::Custom(e) => e.any(|x| matches!(x, Expr::PosI | Expr::Len)),
        }
    }

    /// Whether `⋃ₙ Image(Eₙ)` is finite. Custom encodings that read `i` or
    /// `n` are conservatively reported as infinite.
    pub fn is_finite_type(&self) -> bool {
        !self.provides_position()
    }

    /// Layer 0 for a word.
    pub fn encode(&self, word: &[char]) -> Result<Vec<Value>, EvalError> {
        let n = word.len();
        let letters = word
            .iter()
            .map(|c| {
                if self.alphabet.contains(c) {
                    Ok(Value::Symbol(*c))
                } else {
                    Err(EvalError::UnknownLetter(*c))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        match &self.kind {
            InitKind::CharOnly => Ok(letters),
            InitKind::CharPosLen => Ok(letters
                .into_iter()
                .enumerate()
                .map(|(i, c)| Value::Tuple(vec![c, Value::from_usize(i), Value::from_usize(n)]))
                .collect()),
            InitKind::Custom(e) => {
                let layers = vec![letters];
                (0..n).map(|i| e.eval(&EvalCtx::at(&layers, i, n))).collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReadPos {
    Last,
    First,
}

/// A program together with its initialization and acceptance condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Recognizer {
    pub init: Initialization,
    pub lines: Vec<Line>,
    /// Predicate over the column at `read_pos` (I-side reads of any layer).
    pub valid: Expr,
    pub read_pos: ReadPos,
    pub empty_accepts: bool,
}

impl Recognizer {
    pub fn depth(&self) -> usize {
        self.lines.len()
    }

    pub fn alphabet(&self) -> &[char] {
        &self.init.alphabet
    }

    pub fn attention_lines(&self) -> impl Iterator<Item = (usize, &Attention)> {
        self.lines
            .iter()
            .enumerate()
            .filter_map(|(k, l)| l.as_attention().map(|a| (k + 1, a)))
    }

    /// Applies `f` to every expression in lines, init and acceptance
    /// predicate, renumbering layers with `layer_map`.
    pub fn map_all_exprs(&self, f: &impl Fn(&Expr) -> Expr, layer_map: &impl Fn(usize) -> usize) -> Recognizer {
        Recognizer {
            init: self.init.clone(),
            lines: self.lines.iter().map(|l| l.map_exprs(f, layer_map)).collect(),
            valid: f(&self.valid),
            read_pos: self.read_pos,
            empty_accepts: self.empty_accepts,
        }
    }

    /// Static checks: layer monotonicity, J-references only inside attention
    /// scores and values, positions only when the initialization provides
    /// them.
    pub fn validate(&self) -> Result<(), ProgramError> {
        let alphabet = &self.init.alphabet;
        if alphabet.is_empty() {
            return Err(ProgramError::EmptyAlphabet);
        }
        for (k, c) in alphabet.iter().enumerate() {
            if alphabet[..k].contains(c) {
                return Err(ProgramError::DuplicateLetter(*c));
            }
        }
        if let InitKind::Custom(e) = &self.init.kind {
            if e.reads_j() || e.max_layer().is_some_and(|l| l > 0) {
                return Err(ProgramError::Malformed {
                    line: 0,
                    detail: "initialization may read only the letter, i and n".into(),
                });
            }
        }
        let positions = self.init.provides_position();
        for (k, line) in self.lines.iter().enumerate() {
            let layer = k + 1;
            for e in line.exprs() {
                if let Some(m) = e.max_layer() {
                    if m >= layer {
                        return Err(ProgramError::LayerReference { line: layer, layer: m });
                    }
                }
                if !positions && e.reads_position() {
                    return Err(ProgramError::PositionWithoutInit { what: format!("line {layer}") });
                }
            }
            match line {
                Line::Pointwise(e) => {
                    if e.reads_j() {
                        return Err(ProgramError::JReference { line: layer, what: "a point-wise line" });
                    }
                }
                Line::Attention(a) => {
                    if a.default.reads_j() {
                        return Err(ProgramError::JReference { line: layer, what: "the default" });
                    }
                    if let Some(m) = a.score.max_layer() {
                        if m >= layer {
                            return Err(ProgramError::BilinearLayer { line: layer, layer: m });
                        }
                    }
                    check_score(&a.score, layer)?;
                }
            }
        }
        if let Some(m) = self.valid.max_layer() {
            if m > self.depth() {
                return Err(ProgramError::AcceptReference { layer: m, depth: self.depth() });
            }
        }
        if self.valid.reads_j() {
            return Err(ProgramError::JReference { line: self.depth() + 1, what: "the acceptance predicate" });
        }
        if !positions && self.valid.reads_position() {
            return Err(ProgramError::PositionWithoutInit { what: "acceptance predicate".into() });
        }
        Ok(())
    }
}

fn check_score(score: &ScoreSpec, line: usize) -> Result<(), ProgramError> {
    match score {
        ScoreSpec::Separable(s) => {
            if s.carrier != line {
                return Err(ProgramError::CarrierMismatch { line, carrier: s.carrier });
            }
            for t in &s.terms {
                if t.f.reads_j() || t.g.reads_i() {
                    return Err(ProgramError::Malformed {
                        line,
                        detail: "separable terms need f over the I-column and g over the J-column".into(),
                    });
                }
            }
        }
        ScoreSpec::Table(t) => {
            if t.key_i.reads_j() || t.key_j.reads_i() {
                return Err(ProgramError::Malformed {
                    line,
                    detail: "table keys need key_i over the I-column and key_j over the J-column".into(),
                });
            }
            if !t.is_total() {
                return Err(ProgramError::Malformed { line, detail: "score table is not total".into() });
            }
        }
        ScoreSpec::Guarded { inner, .. } | ScoreSpec::Shifted { inner, .. } => check_score(inner, line)?,
        ScoreSpec::Expr(_) | ScoreSpec::Bilinear(_) => {}
    }
    Ok(())
}
