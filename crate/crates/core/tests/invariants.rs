use proptest::prelude::*;

use uhatlab_core::expr::{EvalCtx, Expr, Side};
use uhatlab_core::interp::{run_traced, select};
use uhatlab_core::ir::{
    Attention, InitKind, Initialization, Line, Masking, ReadPos, Recognizer, ScoreSpec, TableScore, TieBreak,
};
use uhatlab_core::transforms::{sep_add, sep_mul, table_to_separable};
use uhatlab_core::value::{rat, ExtScore, Rat, Value};

const LETTERS: [char; 4] = ['a', 'b', 'c', 'd'];

fn rational() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn table(l: usize) -> impl Strategy<Value = TableScore> {
    prop::collection::vec(prop::collection::vec(rational(), l), l).prop_map(move |entries| TableScore {
        key_i: Expr::var_i(0),
        key_j: Expr::var_j(0),
        rows: LETTERS[..l].iter().map(|&c| Value::Symbol(c)).collect(),
        cols: LETTERS[..l].iter().map(|&c| Value::Symbol(c)).collect(),
        entries,
    })
}

fn mask() -> impl Strategy<Value = Masking> {
    prop_oneof![Just(Masking::NoMask), Just(Masking::StrictFuture), Just(Masking::StrictPast)]
}

fn tie() -> impl Strategy<Value = TieBreak> {
    prop_oneof![Just(TieBreak::Rightmost), Just(TieBreak::Leftmost)]
}

/// One attention line over a letter table; copies the selected letter.
fn single_line(t: TableScore, mask: Masking, tie: TieBreak) -> Recognizer {
    Recognizer {
        init: Initialization::new(InitKind::CharOnly, LETTERS),
        lines: vec![Line::Attention(Attention {
            mask,
            tie,
            score: ScoreSpec::Table(t),
            value: Expr::var_j(0),
            default: Expr::Sym('#'),
        })],
        valid: Expr::eq(Expr::Var(Side::I, 1), Expr::Sym('a')),
        read_pos: ReadPos::Last,
        empty_accepts: false,
    }
}

fn letter_index(c: char) -> usize {
    LETTERS.iter().position(|&x| x == c).unwrap()
}

/// Independent argmax: collect the admitted maximum, then pick the first or
/// last index that attains it.
fn oracle_pick(t: &TableScore, w: &[char], i: usize, mask: Masking, tie: TieBreak) -> Option<usize> {
    let admitted: Vec<usize> = (0..w.len())
        .filter(|&j| match mask {
            Masking::NoMask => true,
            Masking::StrictFuture => j < i,
            Masking::StrictPast => j > i,
        })
        .collect();
    let score = |j: usize| t.entries[letter_index(w[i])][letter_index(w[j])].clone();
    let best = admitted.iter().map(|&j| score(j)).max()?;
    let hits = admitted.into_iter().filter(|&j| score(j) == best);
    match tie {
        TieBreak::Leftmost => hits.min(),
        TieBreak::Rightmost => hits.max(),
    }
}

fn word(l: usize, max_len: usize) -> impl Strategy<Value = Vec<char>> {
    prop::collection::vec(prop::sample::select(LETTERS[..l].to_vec()), 0..=max_len)
}

proptest! {
    #[test]
    fn select_matches_independent_argmax(
        row in prop::collection::vec(prop::option::of(-3i64..=3), 0..10),
        tie in tie(),
    ) {
        let ext: Vec<Option<ExtScore>> = row.iter().map(|s| s.map(|v| ExtScore::Finite(rat(v, 1)))).collect();
        let best = row.iter().flatten().max();
        let hits: Vec<usize> = (0..row.len()).filter(|&j| best.is_some() && row[j].as_ref() == best).collect();
        let expected = match tie {
            TieBreak::Leftmost => hits.first().copied(),
            TieBreak::Rightmost => hits.last().copied(),
        };
        prop_assert_eq!(select(&ext, tie), expected);
    }

    #[test]
    fn selections_respect_mask_and_argmax(
        (t, w) in (1usize..=4).prop_flat_map(|l| (table(l), word(l, 8))),
        mask in mask(),
        tie in tie(),
    ) {
        let rec = single_line(t.clone(), mask, tie);
        let trace = run_traced(&rec, &w).unwrap();
        let picks = trace.selected[0].as_ref().unwrap();
        for i in 0..w.len() {
            let expected = oracle_pick(&t, &w, i, mask, tie);
            prop_assert_eq!(picks[i], expected);
            if let Some(j) = picks[i] {
                prop_assert!(mask.admits(i, j));
                prop_assert_eq!(&trace.layers[1][i], &Value::Symbol(w[j]));
            } else {
                prop_assert_eq!(&trace.layers[1][i], &Value::Symbol('#'));
            }
        }
    }

    #[test]
    fn evaluation_is_deterministic(
        (t, w) in (1usize..=4).prop_flat_map(|l| (table(l), word(l, 8))),
        mask in mask(),
        tie in tie(),
    ) {
        let rec = single_line(t, mask, tie);
        prop_assert_eq!(run_traced(&rec, &w).unwrap(), run_traced(&rec, &w).unwrap());
        prop_assert_eq!(rec.recognize(&w).unwrap(), rec.clone().recognize(&w).unwrap());
    }

    #[test]
    fn table_expansion_is_exact(t in (1usize..=4).prop_flat_map(table)) {
        let l = t.rows.len();
        let s = table_to_separable(&t, 1).unwrap();
        prop_assert_eq!(s.terms.len(), l * l);
        let layers = vec![LETTERS[..l].iter().map(|&c| Value::Symbol(c)).collect::<Vec<_>>()];
        for i in 0..l {
            for j in 0..l {
                prop_assert_eq!(s.eval(&EvalCtx::pair(&layers, i, j, l)).unwrap(), t.entries[i][j].clone());
            }
        }
    }

    #[test]
    fn separable_sum_and_product(
        (a, b) in (1usize..=4).prop_flat_map(|l| (table(l), table(l))),
    ) {
        let l = a.rows.len();
        let sa = table_to_separable(&a, 1).unwrap();
        let sb = table_to_separable(&b, 1).unwrap();
        let sum = sep_add(&sa, &sb).unwrap();
        let prod = sep_mul(&sa, &sb).unwrap();
        prop_assert_eq!(sum.terms.len(), sa.terms.len() + sb.terms.len());
        prop_assert_eq!(prod.terms.len(), sa.terms.len() * sb.terms.len());
        let layers = vec![LETTERS[..l].iter().map(|&c| Value::Symbol(c)).collect::<Vec<_>>()];
        for i in 0..l {
            for j in 0..l {
                let ctx = EvalCtx::pair(&layers, i, j, l);
                prop_assert_eq!(sum.eval(&ctx).unwrap(), &a.entries[i][j] + &b.entries[i][j]);
                prop_assert_eq!(prod.eval(&ctx).unwrap(), &a.entries[i][j] * &b.entries[i][j]);
            }
        }
    }
}
