//! Infix expression syntax.

use num_traits::{Signed, Zero};
use uhatlab_core::value::{Rat, Value};
use uhatlab_core::{Expr, Side};

use crate::error::SyntaxError;
use crate::lexer::{Cursor, Tok};

pub fn parse_expr(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut e = parse_and(c)?;
    while c.eat("||") {
        e = Expr::or(e, parse_and(c)?);
    }
    Ok(e)
}

fn parse_and(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut e = parse_cmp(c)?;
    while c.eat("&&") {
        e = Expr::and(e, parse_cmp(c)?);
    }
    Ok(e)
}

fn parse_cmp(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let a = parse_add(c)?;
    let op = match c.peek() {
        Tok::Punct(p @ ("==" | "!=" | "<" | "<=" | ">" | ">=")) => *p,
        _ => return Ok(a),
    };
    c.bump();
    let b = parse_add(c)?;
    Ok(match op {
        "==" => Expr::eq(a, b),
        "!=" => Expr::ne(a, b),
        "<" => Expr::lt(a, b),
        "<=" => Expr::le(a, b),
        ">" => Expr::lt(b, a),
        _ => Expr::not(Expr::lt(a, b)),
    })
}

fn parse_add(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut e = parse_mul(c)?;
    loop {
        if c.eat("+") {
            e = Expr::add(e, parse_mul(c)?);
        } else if c.eat("-") {
            e = Expr::sub(e, parse_mul(c)?);
        } else {
            return Ok(e);
        }
    }
}

fn parse_mul(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut e = parse_unary(c)?;
    loop {
        if c.eat("*") {
            e = Expr::mul(e, parse_unary(c)?);
        } else if c.eat("/") {
            e = match (e, parse_unary(c)?) {
                // literal fractions fold to a single rational
                (Expr::Rat(a), Expr::Rat(b)) if !b.is_zero() => Expr::Rat(a / b),
                (a, b) => Expr::div(a, b),
            };
        } else {
            return Ok(e);
        }
    }
}

fn parse_unary(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    if c.eat("-") {
        // a minus glued to a number is part of the literal
        if let Tok::Int(v) = c.peek().clone() {
            c.bump();
            return Ok(Expr::Rat(-Rat::from_integer(v)));
        }
        return Ok(Expr::neg(parse_unary(c)?));
    }
    if c.eat("!") {
        return Ok(Expr::not(parse_unary(c)?));
    }
    let mut e = parse_atom(c)?;
    while c.eat(".") {
        match c.bump() {
            Tok::Int(k) => {
                let k = usize::try_from(k).map_err(|_| c.error("tuple index too large"))?;
                e = Expr::get(e, k);
            }
            _ => return Err(c.error("expected a tuple index after `.`")),
        }
    }
    Ok(e)
}

/// `L<k>` as a layer number.
pub fn layer_name(s: &str) -> Option<usize> {
    s.strip_prefix('L').filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))?.parse().ok()
}

fn parse_atom(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    match c.peek().clone() {
        Tok::Int(v) => {
            c.bump();
            Ok(Expr::Rat(Rat::from_integer(v)))
        }
        Tok::Char(ch) => {
            c.bump();
            Ok(Expr::Sym(ch))
        }
        Tok::Punct("(") => {
            c.bump();
            if c.eat(")") {
                return Ok(Expr::Tuple(vec![]));
            }
            let first = parse_expr(c)?;
            if c.eat(")") {
                return Ok(first);
            }
            let mut items = vec![first];
            while c.eat(",") {
                if matches!(c.peek(), Tok::Punct(")")) {
                    break;
                }
                items.push(parse_expr(c)?);
            }
            c.expect(")")?;
            Ok(Expr::Tuple(items))
        }
        Tok::Ident(name) => {
            c.bump();
            match name.as_str() {
                "true" => Ok(Expr::Bool(true)),
                "false" => Ok(Expr::Bool(false)),
                "i" => Ok(Expr::PosI),
                "j" => Ok(Expr::PosJ),
                "n" => Ok(Expr::Len),
                "pow" => {
                    let args = call_args(c, 2)?;
                    let [b, e]: [Expr; 2] = args.try_into().expect("two arguments");
                    Ok(Expr::pow(b, e))
                }
                "if" => {
                    let args = call_args(c, 3)?;
                    let [x, t, f]: [Expr; 3] = args.try_into().expect("three arguments");
                    Ok(Expr::ite(x, t, f))
                }
                other => match layer_name(other) {
                    Some(k) => {
                        c.expect("[")?;
                        let side = if c.eat_ident("i") {
                            Side::I
                        } else if c.eat_ident("j") {
                            Side::J
                        } else {
                            return Err(c.unexpected("`i` or `j`"));
                        };
                        c.expect("]")?;
                        Ok(Expr::Var(side, k))
                    }
                    None => Err(c.error(format!("unknown name `{other}`"))),
                },
            }
        }
        _ => Err(c.unexpected("an expression")),
    }
}

fn call_args(c: &mut Cursor, arity: usize) -> Result<Vec<Expr>, SyntaxError> {
    c.expect("(")?;
    let mut args = vec![parse_expr(c)?];
    while args.len() < arity {
        c.expect(",")?;
        args.push(parse_expr(c)?);
    }
    c.expect(")")?;
    Ok(args)
}

/// A constant expression as a value (table keys).
pub fn const_value(e: &Expr) -> Option<Value> {
    match e {
        Expr::Rat(r) => Some(Value::number(r.clone())),
        Expr::Sym(c) => Some(Value::Symbol(*c)),
        Expr::Bool(b) => Some(Value::Bool(*b)),
        Expr::Tuple(items) => items.iter().map(const_value).collect::<Option<Vec<_>>>().map(Value::Tuple),
        _ => None,
    }
}

pub fn print_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_prec(r: &Rat) -> u8 {
    if !r.is_integer() {
        MUL
    } else if r.is_negative() {
        UNARY
    } else {
        ATOM
    }
}

const OR: u8 = 1;
const AND: u8 = 2;
const CMP: u8 = 3;
const ADD: u8 = 4;
const MUL: u8 = 5;
const UNARY: u8 = 6;
const POSTFIX: u8 = 7;
const ATOM: u8 = 8;

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(e, 0, &mut s);
    s
}

fn write_expr(e: &Expr, min: u8, out: &mut String) {
    let (prec, text) = render(e);
    if prec < min {
        out.push('(');
        out.push_str(&text);
        out.push(')');
    } else {
        out.push_str(&text);
    }
}

fn bin(a: &Expr, op: &str, b: &Expr, la: u8, lb: u8) -> String {
    let mut s = String::new();
    write_expr(a, la, &mut s);
    s.push(' ');
    s.push_str(op);
    s.push(' ');
    write_expr(b, lb, &mut s);
    s
}

fn render(e: &Expr) -> (u8, String) {
    use Expr::*;
    match e {
        Rat(r) => (rat_prec(r), print_rat(r)),
        Sym(c) => (ATOM, match c {
            '\'' | '\\' => format!("'\\{c}'"),
            c => format!("'{c}'"),
        }),
        Bool(b) => (ATOM, b.to_string()),
        Var(Side::I, k) => (ATOM, format!("L{k}[i]")),
        Var(Side::J, k) => (ATOM, format!("L{k}[j]")),
        PosI => (ATOM, "i".into()),
        PosJ => (ATOM, "j".into()),
        Len => (ATOM, "n".into()),
        Or(a, b) => (OR, bin(a, "||", b, OR, AND)),
        And(a, b) => (AND, bin(a, "&&", b, AND, CMP)),
        Eq(a, b) => (CMP, bin(a, "==", b, ADD, ADD)),
        Lt(a, b) => (CMP, bin(a, "<", b, ADD, ADD)),
        Not(inner) => match &**inner {
            Eq(a, b) => (CMP, bin(a, "!=", b, ADD, ADD)),
            Lt(a, b) => (CMP, bin(b, "<=", a, ADD, ADD)),
            x => {
                let mut s = "!".to_string();
                write_expr(x, UNARY, &mut s);
                (UNARY, s)
            }
        },
        Add(a, b) => (ADD, bin(a, "+", b, ADD, MUL)),
        Sub(a, b) => (ADD, bin(a, "-", b, ADD, MUL)),
        Mul(a, b) => (MUL, bin(a, "*", b, MUL, UNARY)),
        Div(a, b) => (MUL, bin(a, "/", b, MUL, UNARY)),
        Neg(a) => {
            let mut s = "-".to_string();
            // `-3` would read back as a literal
            let min = if matches!(**a, Rat(_)) { ATOM + 1 } else { UNARY };
            write_expr(a, min, &mut s);
            (UNARY, s)
        }
        Pow(a, b) => (ATOM, format!("pow({}, {})", print_expr(a), print_expr(b))),
        If(c, t, f) => (ATOM, format!("if({}, {}, {})", print_expr(c), print_expr(t), print_expr(f))),
        Tuple(items) => {
            let parts: Vec<String> = items.iter().map(print_expr).collect();
            let body = parts.join(", ");
            (ATOM, if items.len() == 1 { format!("({body},)") } else { format!("({body})") })
        }
        Get(a, k) => {
            let mut s = String::new();
            write_expr(a, POSTFIX, &mut s);
            s.push_str(&format!(".{k}"));
            (POSTFIX, s)
        }
    }
}

/// Parses a complete expression from text.
pub fn parse_expr_str(text: &str) -> Result<Expr, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let e = parse_expr(&mut c)?;
    c.skip_newlines();
    if !c.at_eof() {
        return Err(c.unexpected("end of expression"));
    }
    Ok(e)
}
