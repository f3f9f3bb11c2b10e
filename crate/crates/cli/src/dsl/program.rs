use num_traits::Zero;
use uhatlab_core::value::{Rat, Value};
use uhatlab_core::{
    Attention, BilinearScore, Expr, InitKind, Initialization, Line, Masking, ReadPos, Recognizer, ScoreSpec, SepTerm,
    SeparableScore, TableScore, TieBreak,
};

use super::expr::{const_value, layer_name, parse_expr, print_expr, print_rat};
use crate::error::{ParseError, SyntaxError};
use crate::lexer::{Cursor, Tok};

/// A parsed document together with the source line of every statement.
#[derive(Clone, Debug)]
pub struct ProgramSource {
    pub text: String,
    pub recognizer: Recognizer,
    pub init_line: usize,
    /// Source line of program line `k` (layer `k + 1`).
    pub line_spans: Vec<usize>,
    pub accept_line: usize,
}

pub fn parse_program(text: &str) -> Result<Recognizer, ParseError> {
    parse_source(text).map(|s| s.recognizer)
}

pub fn parse_source(text: &str) -> Result<ProgramSource, ParseError> {
    let mut c = Cursor::new(text)?;
    c.skip_newlines();
    if c.at_eof() {
        return Err(c.error("empty program").into());
    }
    let init_line = c.here().line;
    let init = parse_init(&mut c)?;
    let mut lines = Vec::new();
    let mut line_spans = Vec::new();
    loop {
        c.skip_newlines();
        let Tok::Ident(name) = c.peek().clone() else {
            return Err(c.unexpected("a program line or `accept`").into());
        };
        let Some(k) = layer_name(&name) else { break };
        if k != lines.len() + 1 {
            return Err(c.error(format!("expected L{} (lines are numbered in order), found L{k}", lines.len() + 1)).into());
        }
        line_spans.push(c.here().line);
        c.bump();
        c.expect("(")?;
        c.expect_ident("i")?;
        c.expect(")")?;
        c.expect("=")?;
        lines.push(parse_line(&mut c, k)?);
        c.end_statement()?;
    }
    let accept_line = c.here().line;
    c.expect_ident("accept")?;
    c.expect_ident("at")?;
    let read_pos = if c.eat_ident("last") {
        ReadPos::Last
    } else if c.eat_ident("first") {
        ReadPos::First
    } else {
        return Err(c.unexpected("`last` or `first`").into());
    };
    c.expect_ident("when")?;
    let valid = parse_expr(&mut c)?;
    c.end_statement()?;
    c.skip_newlines();
    let mut empty_accepts = false;
    if c.eat_ident("empty_word") {
        empty_accepts = if c.eat_ident("accept") {
            true
        } else if c.eat_ident("reject") {
            false
        } else {
            return Err(c.unexpected("`accept` or `reject`").into());
        };
        c.end_statement()?;
        c.skip_newlines();
    }
    if !c.at_eof() {
        return Err(c.unexpected("end of program").into());
    }
    let recognizer = Recognizer { init, lines, valid, read_pos, empty_accepts };
    recognizer.validate()?;
    Ok(ProgramSource { text: text.to_string(), recognizer, init_line, line_spans, accept_line })
}

fn parse_init(c: &mut Cursor) -> Result<Initialization, SyntaxError> {
    c.expect_ident("init")?;
    let kind = match c.ident()?.as_str() {
        "char" => InitKind::CharOnly,
        "charposlen" => InitKind::CharPosLen,
        "custom" => {
            c.expect("(")?;
            let e = parse_expr(c)?;
            c.expect(")")?;
            InitKind::Custom(e)
        }
        other => return Err(c.error(format!("unknown initialization `{other}`"))),
    };
    c.expect_ident("alphabet")?;
    c.expect("=")?;
    let mut alphabet = vec![letter(c)?];
    while c.eat(",") {
        alphabet.push(letter(c)?);
    }
    c.end_statement()?;
    Ok(Initialization::new(kind, alphabet))
}

/// One alphabet letter: a bare single-character token or a quoted one.
fn letter(c: &mut Cursor) -> Result<char, SyntaxError> {
    let t = c.bump();
    let single = |s: &str| {
        let mut it = s.chars();
        match (it.next(), it.next()) {
            (Some(ch), None) => Some(ch),
            _ => None,
        }
    };
    match &t {
        Tok::Char(ch) => Some(*ch),
        Tok::Ident(s) => single(s),
        Tok::Int(v) => single(&v.to_string()),
        Tok::Punct(p) => single(p).filter(|ch| *ch != ','),
        _ => None,
    }
    .ok_or_else(|| c.error(format!("expected a single letter, found {t}")))
}

fn parse_line(c: &mut Cursor, layer: usize) -> Result<Line, SyntaxError> {
    if !c.eat_ident("attend") {
        return Ok(Line::Pointwise(parse_expr(c)?));
    }
    let tie = if c.eat_ident("rightmost") {
        TieBreak::Rightmost
    } else if c.eat_ident("leftmost") {
        TieBreak::Leftmost
    } else {
        return Err(c.unexpected("`rightmost` or `leftmost`"));
    };
    c.expect_ident("j")?;
    c.expect("[")?;
    c.expect_ident("mask")?;
    c.expect("=")?;
    let mask = match c.ident()?.as_str() {
        "none" => Masking::NoMask,
        "future" => Masking::StrictFuture,
        "past" => Masking::StrictPast,
        other => return Err(c.error(format!("unknown mask `{other}`"))),
    };
    c.expect(",")?;
    c.expect_ident("score")?;
    c.expect("=")?;
    let score = parse_score(c, layer)?;
    c.expect("]")?;
    c.expect_ident("value")?;
    c.expect("=")?;
    let value = parse_expr(c)?;
    c.expect_ident("default")?;
    c.expect("=")?;
    let default = parse_expr(c)?;
    Ok(Line::Attention(Attention { mask, tie, score, value, default }))
}

fn rational(c: &mut Cursor) -> Result<Rat, SyntaxError> {
    match parse_expr(c)? {
        Expr::Rat(r) => Ok(r),
        _ => Err(c.error("expected a rational literal")),
    }
}

fn matrix(c: &mut Cursor) -> Result<Vec<Vec<Rat>>, SyntaxError> {
    c.expect("[")?;
    let mut rows = Vec::new();
    if !c.eat("]") {
        loop {
            c.expect("[")?;
            let mut row = Vec::new();
            if !c.eat("]") {
                row.push(rational(c)?);
                while c.eat(",") {
                    row.push(rational(c)?);
                }
                c.expect("]")?;
            }
            rows.push(row);
            if !c.eat(",") {
                break;
            }
        }
        c.expect("]")?;
    }
    Ok(rows)
}

fn keys(c: &mut Cursor, label: &str) -> Result<Vec<Value>, SyntaxError> {
    c.expect_ident(label)?;
    c.expect("=")?;
    match parse_expr(c)? {
        Expr::Tuple(items) => items.iter().map(|e| const_value(e).ok_or_else(|| c.error("table keys must be constants"))).collect(),
        e => const_value(&e).map(|v| vec![v]).ok_or_else(|| c.error("table keys must be constants")),
    }
}

fn parse_score(c: &mut Cursor, layer: usize) -> Result<ScoreSpec, SyntaxError> {
    let head = match c.peek() {
        Tok::Ident(s) if matches!(c.peek_at(1), Tok::Punct("(" | "[")) => s.clone(),
        _ => return Ok(ScoreSpec::Expr(parse_expr(c)?)),
    };
    match head.as_str() {
        "sep" => {
            c.bump();
            c.expect("[")?;
            let mut terms = Vec::new();
            loop {
                let f = parse_expr(c)?;
                c.expect("|")?;
                let g = parse_expr(c)?;
                terms.push(SepTerm::new(f, g));
                if !c.eat(";") {
                    break;
                }
            }
            c.expect("]")?;
            Ok(ScoreSpec::Separable(SeparableScore::new(layer, terms)))
        }
        "table" => {
            c.bump();
            c.expect("(")?;
            let key_i = parse_expr(c)?;
            c.expect("|")?;
            let key_j = parse_expr(c)?;
            c.expect(";")?;
            let rows = keys(c, "rows")?;
            c.expect(";")?;
            let cols = keys(c, "cols")?;
            c.expect(";")?;
            let entries = matrix(c)?;
            c.expect(")")?;
            Ok(ScoreSpec::Table(TableScore { key_i, key_j, rows, cols, entries }))
        }
        "bilinear" => {
            c.bump();
            c.expect("(")?;
            let name = c.ident()?;
            let l = layer_name(&name).ok_or_else(|| c.error("expected a layer name"))?;
            c.expect(";")?;
            let m = matrix(c)?;
            c.expect(")")?;
            Ok(ScoreSpec::Bilinear(BilinearScore { layer: l, matrix: m }))
        }
        "guard" => {
            c.bump();
            c.expect("(")?;
            let admit = parse_expr(c)?;
            c.expect(";")?;
            let inner = parse_score(c, layer)?;
            c.expect(";")?;
            let fallback = if matches!(c.peek(), Tok::Punct("-")) && matches!(c.peek_at(1), Tok::Ident(s) if s == "inf") {
                c.bump();
                c.bump();
                None
            } else {
                Some(parse_expr(c)?)
            };
            c.expect(")")?;
            Ok(ScoreSpec::Guarded { admit, inner: Box::new(inner), fallback })
        }
        "shift" => {
            c.bump();
            c.expect("(")?;
            let inner = parse_score(c, layer)?;
            c.expect(";")?;
            let offset = parse_expr(c)?;
            c.expect(")")?;
            Ok(ScoreSpec::Shifted { inner: Box::new(inner), offset })
        }
        _ => Ok(ScoreSpec::Expr(parse_expr(c)?)),
    }
}

fn print_matrix(m: &[Vec<Rat>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(print_rat_item).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn print_rat_item(r: &Rat) -> String {
    if r.is_zero() {
        "0".into()
    } else {
        print_rat(r)
    }
}

fn print_keys(vs: &[Value]) -> String {
    let items: Vec<Expr> = vs.iter().map(Expr::literal).collect();
    print_expr(&Expr::Tuple(items))
}

fn print_score(s: &ScoreSpec) -> String {
    match s {
        ScoreSpec::Expr(e) => print_expr(e),
        ScoreSpec::Separable(sep) => {
            let terms: Vec<String> =
                sep.terms.iter().map(|t| format!("{} | {}", print_expr(&t.f), print_expr(&t.g))).collect();
            format!("sep[{}]", terms.join("; "))
        }
        ScoreSpec::Table(t) => format!(
            "table({} | {}; rows={}; cols={}; {})",
            print_expr(&t.key_i),
            print_expr(&t.key_j),
            print_keys(&t.rows),
            print_keys(&t.cols),
            print_matrix(&t.entries)
        ),
        ScoreSpec::Bilinear(b) => format!("bilinear(L{}; {})", b.layer, print_matrix(&b.matrix)),
        ScoreSpec::Guarded { admit, inner, fallback } => format!(
            "guard({}; {}; {})",
            print_expr(admit),
            print_score(inner),
            fallback.as_ref().map_or("-inf".to_string(), print_expr)
        ),
        ScoreSpec::Shifted { inner, offset } => format!("shift({}; {})", print_score(inner), print_expr(offset)),
    }
}

/// Separable carriers are implied by the line number, so a recognizer that
/// fails `validate` on carriers does not survive the round trip.
pub fn print_program(rec: &Recognizer) -> String {
    let mut out = String::new();
    let kind = match &rec.init.kind {
        InitKind::CharOnly => "char".to_string(),
        InitKind::CharPosLen => "charposlen".to_string(),
        InitKind::Custom(e) => format!("custom({})", print_expr(e)),
    };
    let letters: Vec<String> = rec
        .alphabet()
        .iter()
        .map(|&ch| if ch.is_alphanumeric() || "()[]{}<>+*/!?&|:;.=".contains(ch) { ch.to_string() } else { print_expr(&Expr::Sym(ch)) })
        .collect();
    out.push_str(&format!("init {kind} alphabet={}\n", letters.join(",")));
    for (k, line) in rec.lines.iter().enumerate() {
        let body = match line {
            Line::Pointwise(e) => print_expr(e),
            Line::Attention(a) => {
                let tie = match a.tie {
                    TieBreak::Rightmost => "rightmost",
                    TieBreak::Leftmost => "leftmost",
                };
                format!(
                    "attend {tie} j [mask={}, score={}] value={} default={}",
                    a.mask,
                    print_score(&a.score),
                    print_expr(&a.value),
                    print_expr(&a.default)
                )
            }
        };
        out.push_str(&format!("L{}(i) = {body}\n", k + 1));
    }
    let at = match rec.read_pos {
        ReadPos::Last => "last",
        ReadPos::First => "first",
    };
    out.push_str(&format!("accept at {at} when {}\n", print_expr(&rec.valid)));
    out.push_str(if rec.empty_accepts { "empty_word accept\n" } else { "empty_word reject\n" });
    out
}
