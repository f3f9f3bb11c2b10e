//! Text syntax for LTL and first-order formulas.
//!
//! LTL: `true`, `false`, `'a'`, `{'a','b'}`, monadic predicate names,
//! `!`, `X`, `Y`, infix `U` and `S`, `&`, `|`, `->`.
//! FO: `exists x. φ`, `forall x. φ`, `'a'(x)`, `{'a','b'}(x)`, `even(x)`,
//! `x < y`, `x > y`, and the same connectives.

use uhatlab_core::logic::{FoFormula, LtlFormula};

use crate::error::SyntaxError;
use crate::lexer::{Cursor, Tok};

fn finish<T>(c: &mut Cursor, v: T) -> Result<T, SyntaxError> {
    if !c.at_eof() {
        return Err(c.unexpected("end of formula"));
    }
    Ok(v)
}

fn letter_set(c: &mut Cursor) -> Result<Vec<char>, SyntaxError> {
    match c.bump() {
        Tok::Char(ch) => Ok(vec![ch]),
        Tok::Punct("{") => {
            let mut set = Vec::new();
            if !c.eat("}") {
                loop {
                    match c.bump() {
                        Tok::Char(ch) => set.push(ch),
                        _ => return Err(c.error("expected a quoted letter")),
                    }
                    if !c.eat(",") {
                        break;
                    }
                }
                c.expect("}")?;
            }
            Ok(set)
        }
        _ => Err(c.error("expected a letter or letter set")),
    }
}

fn print_set(set: &[char]) -> String {
    let q = |ch: &char| match ch {
        '\'' | '\\' => format!("'\\{ch}'"),
        ch => format!("'{ch}'"),
    };
    if set.len() == 1 {
        q(&set[0])
    } else {
        format!("{{{}}}", set.iter().map(q).collect::<Vec<_>>().join(", "))
    }
}

const RESERVED: &[&str] = &["true", "false", "X", "Y", "U", "S", "exists", "forall"];

fn predicate_name(c: &mut Cursor) -> Result<String, SyntaxError> {
    let name = c.ident()?;
    if RESERVED.contains(&name.as_str()) {
        return Err(c.error(format!("`{name}` is reserved")));
    }
    Ok(name)
}

pub fn parse_ltl(text: &str) -> Result<LtlFormula, SyntaxError> {
    let mut c = Cursor::free_form(text)?;
    let f = ltl_impl(&mut c)?;
    finish(&mut c, f)
}

fn ltl_impl(c: &mut Cursor) -> Result<LtlFormula, SyntaxError> {
    let a = ltl_or(c)?;
    if c.eat("->") {
        return Ok(LtlFormula::implies(a, ltl_impl(c)?));
    }
    Ok(a)
}

fn ltl_or(c: &mut Cursor) -> Result<LtlFormula, SyntaxError> {
    let mut a = ltl_and(c)?;
    while c.eat("|") {
        a = LtlFormula::or(a, ltl_and(c)?);
    }
    Ok(a)
}

fn ltl_and(c: &mut Cursor) -> Result<LtlFormula, SyntaxError> {
    let mut a = ltl_bin(c)?;
    while c.eat("&") {
        a = LtlFormula::and(a, ltl_bin(c)?);
    }
    Ok(a)
}

fn ltl_bin(c: &mut Cursor) -> Result<LtlFormula, SyntaxError> {
    let a = ltl_unary(c)?;
    if c.eat_ident("U") {
        return Ok(LtlFormula::until(a, ltl_unary(c)?));
    }
    if c.eat_ident("S") {
        return Ok(LtlFormula::since(a, ltl_unary(c)?));
    }
    Ok(a)
}

fn ltl_unary(c: &mut Cursor) -> Result<LtlFormula, SyntaxError> {
    if c.eat("!") {
        return Ok(LtlFormula::not(ltl_unary(c)?));
    }
    if c.eat_ident("X") {
        return Ok(LtlFormula::next(ltl_unary(c)?));
    }
    if c.eat_ident("Y") {
        return Ok(LtlFormula::yesterday(ltl_unary(c)?));
    }
    match c.peek() {
        Tok::Char(_) | Tok::Punct("{") => Ok(LtlFormula::Letters(letter_set(c)?)),
        Tok::Punct("(") => {
            c.bump();
            let f = ltl_impl(c)?;
            c.expect(")")?;
            Ok(f)
        }
        Tok::Ident(s) if s == "true" => {
            c.bump();
            Ok(LtlFormula::True)
        }
        Tok::Ident(s) if s == "false" => {
            c.bump();
            Ok(LtlFormula::False)
        }
        Tok::Ident(_) => Ok(LtlFormula::Mon(predicate_name(c)?)),
        _ => Err(c.unexpected("a formula")),
    }
}

pub fn print_ltl(f: &LtlFormula) -> String {
    fn go(f: &LtlFormula, min: u8) -> String {
        use LtlFormula::*;
        let (prec, s) = match f {
            True => (5, "true".into()),
            False => (5, "false".into()),
            Letters(set) => (5, print_set(set)),
            Mon(m) => (5, m.clone()),
            Not(a) => (4, format!("!{}", go(a, 4))),
            Next(a) => (4, format!("X {}", go(a, 4))),
            Yesterday(a) => (4, format!("Y {}", go(a, 4))),
            Until(a, b) => (3, format!("{} U {}", go(a, 4), go(b, 4))),
            Since(a, b) => (3, format!("{} S {}", go(a, 4), go(b, 4))),
            And(a, b) => (2, format!("{} & {}", go(a, 2), go(b, 3))),
            Or(a, b) => (1, format!("{} | {}", go(a, 1), go(b, 2))),
        };
        if prec < min {
            format!("({s})")
        } else {
            s
        }
    }
    go(f, 0)
}

pub fn parse_fo(text: &str) -> Result<FoFormula, SyntaxError> {
    let mut c = Cursor::free_form(text)?;
    let f = fo_formula(&mut c)?;
    finish(&mut c, f)
}

fn fo_formula(c: &mut Cursor) -> Result<FoFormula, SyntaxError> {
    let a = fo_or(c)?;
    if c.eat("->") {
        return Ok(FoFormula::implies(a, fo_formula(c)?));
    }
    Ok(a)
}

fn fo_or(c: &mut Cursor) -> Result<FoFormula, SyntaxError> {
    let mut a = fo_and(c)?;
    while c.eat("|") {
        a = FoFormula::or(a, fo_and(c)?);
    }
    Ok(a)
}

fn fo_and(c: &mut Cursor) -> Result<FoFormula, SyntaxError> {
    let mut a = fo_unary(c)?;
    while c.eat("&") {
        a = FoFormula::and(a, fo_unary(c)?);
    }
    Ok(a)
}

fn variable(c: &mut Cursor) -> Result<String, SyntaxError> {
    c.expect("(")?;
    let v = predicate_name(c)?;
    c.expect(")")?;
    Ok(v)
}

fn fo_unary(c: &mut Cursor) -> Result<FoFormula, SyntaxError> {
    if c.eat("!") {
        return Ok(FoFormula::not(fo_unary(c)?));
    }
    for (kw, exists) in [("exists", true), ("forall", false)] {
        if c.eat_ident(kw) {
            let v = predicate_name(c)?;
            c.expect(".")?;
            let body = fo_formula(c)?;
            return Ok(if exists { FoFormula::exists(&v, body) } else { FoFormula::forall(&v, body) });
        }
    }
    match c.peek().clone() {
        Tok::Char(_) | Tok::Punct("{") => {
            let set = letter_set(c)?;
            Ok(FoFormula::LetterAt(set, variable(c)?))
        }
        Tok::Punct("(") => {
            c.bump();
            let f = fo_formula(c)?;
            c.expect(")")?;
            Ok(f)
        }
        Tok::Ident(s) if s == "true" => {
            c.bump();
            Ok(FoFormula::True)
        }
        Tok::Ident(s) if s == "false" => {
            c.bump();
            Ok(FoFormula::False)
        }
        Tok::Ident(_) => {
            let name = predicate_name(c)?;
            if c.eat("<") {
                Ok(FoFormula::Less(name, predicate_name(c)?))
            } else if c.eat(">") {
                Ok(FoFormula::Less(predicate_name(c)?, name))
            } else {
                Ok(FoFormula::MonAt(name, variable(c)?))
            }
        }
        _ => Err(c.unexpected("a formula")),
    }
}

pub fn print_fo(f: &FoFormula) -> String {
    fn go(f: &FoFormula, min: u8) -> String {
        use FoFormula::*;
        let (prec, s) = match f {
            True => (5, "true".into()),
            False => (5, "false".into()),
            LetterAt(set, v) => (5, format!("{}({v})", print_set(set))),
            MonAt(m, v) => (5, format!("{m}({v})")),
            Less(x, y) => (5, format!("{x} < {y}")),
            Not(a) => (4, format!("!{}", go(a, 4))),
            And(a, b) => (2, format!("{} & {}", go(a, 2), go(b, 3))),
            Or(a, b) => (1, format!("{} | {}", go(a, 1), go(b, 2))),
            Exists(v, a) => (0, format!("exists {v}. {}", go(a, 0))),
            ForAll(v, a) => (0, format!("forall {v}. {}", go(a, 0))),
        };
        if prec < min {
            format!("({s})")
        } else {
            s
        }
    }
    go(f, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use uhatlab_core::logic::fixtures::{astar_bstar_fltl, astar_bstar_fo, dyck11_fo, dyck1_pltl};

    #[test]
    fn ltl_round_trip() {
        for f in [astar_bstar_fltl(), dyck1_pltl(1), dyck1_pltl(3)] {
            let text = print_ltl(&f);
            assert_eq!(parse_ltl(&text).unwrap(), f, "{text}");
        }
        assert_eq!(parse_ltl("false U 'a'").unwrap(), LtlFormula::until(LtlFormula::False, LtlFormula::letter('a')));
        assert_eq!(print_ltl(&parse_ltl("X (a U b) & !{'a', 'b'}").unwrap()), "X (a U b) & !{'a', 'b'}");
    }

    #[test]
    fn fo_round_trip() {
        for f in [astar_bstar_fo(), dyck11_fo()] {
            let text = print_fo(&f);
            assert_eq!(parse_fo(&text).unwrap(), f, "{text}");
        }
        let f = parse_fo("forall x. forall y. x < y -> !('b'(x) & 'a'(y))").unwrap();
        assert_eq!(f, astar_bstar_fo());
        assert_eq!(parse_fo("y > x").unwrap(), FoFormula::less("x", "y"));
    }

    #[test]
    fn syntax_errors() {
        assert!(parse_ltl("").is_err());
        assert!(parse_ltl("'a' U").is_err());
        assert!(parse_ltl("U").is_err());
        assert!(parse_fo("exists x 'a'(x)").is_err());
        assert!(parse_fo("'a'(x) 'b'(y)").is_err());
    }
}
