//! Line-oriented program syntax.
//!
//! ```text
//! init charposlen alphabet=a,b
//! L1(i) = attend rightmost j [mask=none, score=-pow(n - 1 - i - j, 2)] value=if(L0[i].0 == L0[j].0, 1, 0) default=0
//! L2(i) = attend rightmost j [mask=none, score=-L1[j]] value=L1[j] default=0
//! accept at last when L2[i] == 1
//! empty_word accept
//! ```
//!
//! Besides plain expressions a score may be `sep[f | g; …]`,
//! `table(key_i | key_j; rows=(…); cols=(…); [[…], …])`,
//! `bilinear(L<k>; [[…], …])`, `guard(admit; score; fallback)` with
//! fallback `-inf` or an expression, or `shift(score; offset)`.

mod expr;
mod program;

pub use expr::{const_value, parse_expr, parse_expr_str, print_expr, print_rat};
pub use program::{parse_program, parse_source, print_program, ProgramSource};
