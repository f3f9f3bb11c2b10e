//! Separable scores: conversion from finite tables and closure under sums
//! and products.

use num_traits::One;

use super::{numeric, TransformError};
use crate::expr::Expr;
use crate::ir::{ScoreSpec, SepTerm, SeparableScore, TableScore};
use crate::value::Rat;

/// Expands a total `l × l'` table into `l·l'` product terms. Term
/// `(α−1)·l' + β` has `f = s[α][β]` on row key `α` (else 0) and `g = 1` on
/// column key `β` (else 0).
pub fn table_to_separable(t: &TableScore, carrier: usize) -> Result<SeparableScore, TransformError> {
    if !t.is_total() || t.rows.is_empty() || t.cols.is_empty() {
        return Err(TransformError::NonTotalTable);
    }
    let mut terms = Vec::with_capacity(t.rows.len() * t.cols.len());
    for (a, row) in t.rows.iter().enumerate() {
        for (b, col) in t.cols.iter().enumerate() {
            let f = Expr::ite(
                Expr::eq(t.key_i.clone(), Expr::literal(row)),
                Expr::Rat(t.entries[a][b].clone()),
                Expr::int(0),
            );
            let g = Expr::ite(Expr::eq(t.key_j.clone(), Expr::literal(col)), Expr::int(1), Expr::int(0));
            terms.push(SepTerm::new(f, g));
        }
    }
    Ok(SeparableScore::new(carrier, terms))
}

fn same_carrier(a: &SeparableScore, b: &SeparableScore) -> Result<(), TransformError> {
    if a.carrier != b.carrier {
        return Err(TransformError::CarrierMismatch(a.carrier, b.carrier));
    }
    Ok(())
}

/// `a + b` with `k + k'` terms.
pub fn sep_add(a: &SeparableScore, b: &SeparableScore) -> Result<SeparableScore, TransformError> {
    same_carrier(a, b)?;
    let terms = a.terms.iter().chain(&b.terms).cloned().collect();
    Ok(SeparableScore::new(a.carrier, terms))
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Rat(r) if r.is_one())
}

fn product(x: &Expr, y: &Expr) -> Expr {
    if is_one(x) {
        numeric(y.clone())
    } else if is_one(y) {
        numeric(x.clone())
    } else {
        Expr::mul(numeric(x.clone()), numeric(y.clone()))
    }
}

/// `a · b` with `k · k'` terms `(f_α·f'_β, g_α·g'_β)`.
pub fn sep_mul(a: &SeparableScore, b: &SeparableScore) -> Result<SeparableScore, TransformError> {
    same_carrier(a, b)?;
    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
    for x in &a.terms {
        for y in &b.terms {
            terms.push(SepTerm::new(product(&x.f, &y.f), product(&x.g, &y.g)));
        }
    }
    Ok(SeparableScore::new(a.carrier, terms))
}

/// The constant score `c` as a single term.
pub fn sep_const(carrier: usize, c: Rat) -> SeparableScore {
    SeparableScore::new(carrier, vec![SepTerm::new(Expr::Rat(c), Expr::int(1))])
}

/// Separable form of a score of the line producing layer `carrier`:
/// tables are expanded, one-sided expressions become a single term.
pub fn to_separable(score: &ScoreSpec, carrier: usize) -> Result<SeparableScore, TransformError> {
    let one_sided = |e: &Expr| -> Result<SeparableScore, TransformError> {
        let term = match (e.reads_i(), e.reads_j()) {
            (true, true) => return Err(TransformError::NonSeparableScorePresent(carrier)),
            (false, true) => SepTerm::new(Expr::int(1), numeric(e.clone())),
            _ => SepTerm::new(numeric(e.clone()), Expr::int(1)),
        };
        Ok(SeparableScore::new(carrier, vec![term]))
    };
    match score {
        ScoreSpec::Separable(s) => Ok(SeparableScore::new(carrier, s.terms.clone())),
        ScoreSpec::Table(t) => table_to_separable(t, carrier),
        ScoreSpec::Expr(e) => one_sided(e),
        ScoreSpec::Shifted { inner, offset } => sep_add(&to_separable(inner, carrier)?, &one_sided(offset)?),
        ScoreSpec::Bilinear(_) | ScoreSpec::Guarded { .. } => Err(TransformError::NonSeparableScorePresent(carrier)),
    }
}
