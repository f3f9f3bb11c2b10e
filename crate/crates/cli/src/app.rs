//! Subcommands. Exit codes: 0 accept/pass, 1 reject/counterexample,
//! 2 usage, parse or evaluation error.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use uhatlab_core::analysis::{
    audit_sbar, check_equivalence, check_fixability, circuit_metrics, default_encoding, encode_binary, eval_circuit,
    parse_netlist, search_unfixable, Restriction, SearchScope,
};
use uhatlab_core::enumerate::Language;
use uhatlab_core::logic::{eval_fo, eval_ltl, ltl_recognize, LtlMode, MonRegistry};
use uhatlab_core::transforms::{
    eliminate_mask_guhat, eliminate_ties, extend_init_with_position, separable_to_bilinear, simulate_mask_separable,
    unmasked_brasp_to_masked, verify_pass, MaskMode,
};
use uhatlab_core::value::{Rat, Value};
use uhatlab_core::{classify_program, run_traced, Recognizer};

use crate::dsl::{parse_expr_str, print_program};
use crate::source::{default_mode, load_fo, load_ltl, load_program, read, LanguageSource};

#[derive(Parser, Debug)]
#[command(name = "uhatlab", version, about = "Unique-hard-attention programs: run, transform and check")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Pass {
    SeparableToBilinear,
    EliminateMask,
    EliminateTies,
    SimulateMask,
    BraspToMasked,
    AddPosition,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MaskModeArg {
    Sentinel,
    Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dsl,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EmptyWord {
    Accept,
    Reject,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Future,
    Past,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a program on a word.
    Run {
        #[arg(long)]
        program: String,
        #[arg(long, default_value = "")]
        word: String,
        /// Print every layer and the selected positions.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare two languages on all words up to a length.
    Equiv {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Verdict of formula sources on the empty word (default reject).
        #[arg(long, value_enum)]
        empty_word: Option<EmptyWord>,
        #[arg(long)]
        json: bool,
    },
    /// Apply a program transformation.
    Transform {
        #[arg(long, value_enum)]
        pass: Pass,
        #[arg(long)]
        program: String,
        /// Length bound for passes that enumerate inputs.
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = MaskModeArg::Sentinel)]
        mode: MaskModeArg,
        /// Check the result against the input on all words up to this length.
        #[arg(long)]
        verify: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Dsl)]
        format: Format,
        /// Write the program here; the report then goes to standard output.
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Strong ε-fixability of a restriction, or a search for unfixable ones.
    Fixability {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        epsilon: String,
        /// A word over the alphabet and `?`.
        #[arg(long, conflicts_with = "search")]
        restriction: Option<String>,
        /// Length range `lo..hi` (inclusive).
        #[arg(long)]
        search: Option<String>,
        /// `all`, `exhaustive` or `sampled:<count>:<seed>`.
        #[arg(long, default_value = "all")]
        scope: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an LTL formula on a word.
    Ltl {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Evaluate at this position instead.
        #[arg(long)]
        position: Option<usize>,
    },
    /// Evaluate a first-order sentence on a word.
    Fo {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        word: String,
    },
    /// Evaluate a circuit or report its depth and size.
    Circuit {
        #[arg(long)]
        netlist: String,
        /// Input bits, e.g. `0110`.
        #[arg(long, conflicts_with = "word")]
        input: Option<String>,
        /// A word, encoded with fixed-width letter codes over `--alphabet`.
        #[arg(long, requires = "alphabet")]
        word: Option<String>,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        metrics: bool,
        #[arg(long)]
        json: bool,
    },
    /// Report the class of a program.
    Classify {
        #[arg(long)]
        program: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        /// Exit 1 unless the class name matches.
        #[arg(long)]
        expect: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustively check the ordering properties of the mask-simulating score.
    AuditSbar {
        #[arg(long, default_value_t = 16)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print a program in another format.
    Convert {
        #[arg(long)]
        program: String,
        #[arg(long, value_enum, default_value_t = Format::Dsl)]
        format: Format,
    },
}

/// Outcome of a subcommand that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

type Failure = Box<dyn std::error::Error>;

fn fail(msg: impl Into<String>) -> Failure {
    msg.into().into()
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(Status::Pass) => 0,
        Ok(Status::Fail) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn word(s: &str) -> Vec<char> {
    s.chars().collect()
}

fn parse_rat(s: &str) -> Result<Rat, Failure> {
    match parse_expr_str(s)? {
        uhatlab_core::Expr::Rat(r) => Ok(r),
        _ => Err(fail(format!("expected a rational such as 1/5, got {s:?}"))),
    }
}

pub fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status, Failure> {
    match cmd {
        Command::Run { program, word: w, trace, json } => cmd_run(&program, &w, trace, json, out),
        Command::Equiv { a, b, alphabet, max_len, empty_word, json } => {
            let (mut la, mut lb) = (LanguageSource::load(&a)?, LanguageSource::load(&b)?);
            if let Some(e) = empty_word {
                la.set_formula_empty(matches!(e, EmptyWord::Accept));
                lb.set_formula_empty(matches!(e, EmptyWord::Accept));
            }
            let sigma = match alphabet {
                Some(s) => word(&s),
                None => la.alphabet().or_else(|| lb.alphabet()).ok_or_else(|| fail("equiv needs --alphabet"))?,
            };
            let cex = check_equivalence(&la, &lb, &sigma, max_len)?;
            let cex_text = cex.as_ref().map(|w| w.iter().collect::<String>());
            if json {
                #[derive(Serialize)]
                struct Report<'a> {
                    equivalent: bool,
                    checked_up_to: usize,
                    counterexample: Option<&'a str>,
                    a_accepts: Option<bool>,
                    b_accepts: Option<bool>,
                }
                let (aa, ba) = match &cex {
                    Some(w) => (Some(la.accepts(w)?), Some(lb.accepts(w)?)),
                    None => (None, None),
                };
                emit_json(
                    out,
                    &Report { equivalent: cex.is_none(), checked_up_to: max_len, counterexample: cex_text.as_deref(), a_accepts: aa, b_accepts: ba },
                )?;
            } else {
                match &cex {
                    None => writeln!(out, "equivalent up to length {max_len}")?,
                    Some(w) => writeln!(
                        out,
                        "counterexample: {:?} (a: {}, b: {})",
                        cex_text.as_deref().unwrap_or(""),
                        verdict_word(la.accepts(w)?),
                        verdict_word(lb.accepts(w)?)
                    )?,
                }
            }
            Ok(status(cex.is_none()))
        }
        Command::Transform { pass, program, n_max, mode, verify, format, out: path, json } => {
            cmd_transform(pass, &program, n_max, mode, verify, format, path, json, out, err)
        }
        Command::Fixability { lang, alphabet, epsilon, restriction, search, scope, json } => {
            let l = LanguageSource::load(&lang)?;
            let sigma = l.alphabet_or(alphabet.as_deref(), "fixability")?;
            let eps = parse_rat(&epsilon)?;
            let witness = match (restriction, search) {
                (Some(r), _) => {
                    let rho: Restriction = r.parse().expect("infallible");
                    if let Some(c) = rho.pattern.iter().flatten().find(|c| !sigma.contains(c)) {
                        return Err(fail(format!("restriction letter {c:?} is not in the alphabet")));
                    }
                    Some(check_fixability(&l, &sigma, &rho, &eps)?)
                }
                (None, Some(range)) => {
                    let (lo, hi) = range
                        .split_once("..")
                        .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim_start_matches('=').trim().parse::<usize>().ok()?)))
                        .ok_or_else(|| fail(format!("bad length range {range:?}, expected lo..hi")))?;
                    search_unfixable(&l, &sigma, &eps, lo..=hi, parse_scope(&scope)?)?
                }
                (None, None) => return Err(fail("fixability needs --restriction or --search")),
            };
            let unfixable = witness.as_ref().is_some_and(|w| w.is_unfixable());
            if json {
                emit_json(out, &witness)?;
            } else {
                match &witness {
                    None => writeln!(out, "no unfixable restriction found")?,
                    Some(w) => {
                        writeln!(out, "n: {}  restriction: {}  budget: {}", w.n, w.restriction, uhatlab_core::analysis::fix_budget(&w.epsilon, w.n))?;
                        match &w.verdict {
                            uhatlab_core::analysis::Verdict::FixedIn(e) => writeln!(out, "fixed in: {e}")?,
                            uhatlab_core::analysis::Verdict::FixedOut(e) => writeln!(out, "fixed out: {e}")?,
                            uhatlab_core::analysis::Verdict::Unfixable { budget } => writeln!(out, "unfixable within {budget} letters")?,
                        }
                    }
                }
            }
            Ok(status(!unfixable))
        }
        Command::Ltl { formula, word: w, mode, position } => {
            let f = load_ltl(&formula)?;
            let env = MonRegistry::standard();
            let w = word(&w);
            let v = match (position, mode) {
                (Some(p), _) => eval_ltl(&f, &w, p, &env)?,
                (None, m) => {
                    let mode = match m {
                        Some(ModeArg::Future) => LtlMode::FutureAtFirst,
                        Some(ModeArg::Past) => LtlMode::PastAtLast,
                        None => default_mode(&f),
                    };
                    ltl_recognize(&f, &w, mode, &env)?
                }
            };
            writeln!(out, "{}", v)?;
            Ok(status(v))
        }
        Command::Fo { formula, word: w } => {
            let f = load_fo(&formula)?;
            let v = eval_fo(&f, &word(&w), &MonRegistry::standard())?;
            writeln!(out, "{}", v)?;
            Ok(status(v))
        }
        Command::Circuit { netlist, input, word: w, alphabet, metrics, json } => {
            let c = parse_netlist(&read(&netlist)?)?;
            let bits = match (input, w) {
                (Some(bits), _) => Some(bits),
                (None, Some(w)) => Some(encode_binary(&word(&w), &default_encoding(&word(alphabet.as_deref().unwrap_or(""))))?),
                (None, None) => None,
            };
            let outputs = match &bits {
                Some(b) => {
                    let v = b
                        .chars()
                        .map(|ch| match ch {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            other => Err(fail(format!("input bit {other:?} is not 0 or 1"))),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(eval_circuit(&c, &v)?)
                }
                None => None,
            };
            let m = if metrics || outputs.is_none() { Some(circuit_metrics(&c)?) } else { None };
            let rendered = outputs.as_ref().map(|o| o.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>());
            if json {
                #[derive(Serialize)]
                struct Report<'a> {
                    input: Option<&'a str>,
                    outputs: Option<&'a str>,
                    metrics: Option<uhatlab_core::analysis::CircuitMetrics>,
                }
                emit_json(out, &Report { input: bits.as_deref(), outputs: rendered.as_deref(), metrics: m })?;
            } else {
                if let Some(o) = &rendered {
                    writeln!(out, "outputs: {o}")?;
                }
                if let Some(m) = m {
                    writeln!(out, "depth: {}  wires: {}  inputs: {}  gates: {}", m.depth, m.wires, m.inputs, m.gates)?;
                }
            }
            Ok(status(outputs.map_or(true, |o| o.iter().all(|&b| b))))
        }
        Command::Classify { program, bound, expect, json } => {
            let rec = load_program(&program)?;
            let c = classify_program(&rec, bound)?;
            if json {
                #[derive(Serialize)]
                struct Report<'a> {
                    class: String,
                    #[serde(flatten)]
                    detail: &'a uhatlab_core::Classification,
                }
                emit_json(out, &Report { class: c.class_name(), detail: &c })?;
            } else {
                writeln!(out, "class: {}", c.class_name())?;
                writeln!(out, "finite type: {}", c.finite_type)?;
                writeln!(out, "separable scores: {}", c.separable_scores)?;
                writeln!(out, "bilinear scores: {}", c.bilinear_scores)?;
                writeln!(out, "binary scores (n <= {bound}): {}", c.binary_scores)?;
                let masks: Vec<String> = c.maskings_used.iter().map(|m| m.to_string()).collect();
                writeln!(out, "maskings: {}", masks.join(", "))?;
                match &c.tie_witness {
                    Some(t) => writeln!(out, "ties: yes ({:?}, layer {}, position {})", t.word, t.layer, t.position)?,
                    None => writeln!(out, "ties (n <= {bound}): no")?,
                }
            }
            Ok(status(expect.map_or(true, |e| e == c.class_name())))
        }
        Command::AuditSbar { bound, json } => {
            let report = audit_sbar(bound);
            if json {
                emit_json(out, &report)?;
            } else {
                writeln!(out, "bound: {}  separable: {} ({} terms)", report.bound, report.separable, report.separable_terms)?;
                for (k, n) in report.checks.iter().enumerate() {
                    writeln!(out, "property {}: {} checks", k + 2, n)?;
                }
                writeln!(out, "violations: {}", report.violations.len())?;
                for v in report.violations.iter().take(10) {
                    writeln!(out, "  {v:?}")?;
                }
            }
            Ok(status(report.passed()))
        }
        Command::Convert { program, format } => {
            let rec = load_program(&program)?;
            write_program(out, &rec, format)?;
            Ok(Status::Pass)
        }
    }
}

fn verdict_word(b: bool) -> &'static str {
    if b {
        "accept"
    } else {
        "reject"
    }
}

fn parse_scope(s: &str) -> Result<SearchScope, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["all"] => Ok(SearchScope::AllWildcards),
        ["exhaustive"] => Ok(SearchScope::Exhaustive),
        ["sampled", count, seed] => Ok(SearchScope::Sampled { count: count.parse()?, seed: seed.parse()? }),
        _ => Err(fail(format!("bad scope {s:?}"))),
    }
}

fn write_program(out: &mut dyn Write, rec: &Recognizer, format: Format) -> Result<(), Failure> {
    match format {
        Format::Dsl => write!(out, "{}", print_program(rec))?,
        Format::Json => emit_json(out, rec)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct RunReport<'a> {
    word: &'a str,
    layers: &'a [Vec<Value>],
    selected: &'a [Option<Vec<Option<usize>>>],
    verdict: bool,
}

fn cmd_run(program: &str, w: &str, trace: bool, json: bool, out: &mut dyn Write) -> Result<Status, Failure> {
    let rec = load_program(program)?;
    let chars = word(w);
    let t = run_traced(&rec, &chars)?;
    let verdict = rec.recognize(&chars)?;
    if json {
        emit_json(out, &RunReport { word: w, layers: &t.layers, selected: &t.selected, verdict })?;
        return Ok(status(verdict));
    }
    if trace {
        for (l, layer) in t.layers.iter().enumerate() {
            let cells: Vec<String> = layer.iter().map(|v| v.to_string()).collect();
            writeln!(out, "L{l}: {}", cells.join(" | "))?;
            if let Some(Some(sel)) = l.checked_sub(1).and_then(|k| t.selected.get(k)) {
                let picks: Vec<String> = sel.iter().map(|p| p.map_or("-".into(), |j| j.to_string())).collect();
                writeln!(out, "  selected: {}", picks.join(" "))?;
            }
        }
    }
    writeln!(out, "verdict: {}", verdict_word(verdict))?;
    Ok(status(verdict))
}

#[allow(clippy::too_many_arguments)]
fn cmd_transform(
    pass: Pass,
    program: &str,
    n_max: usize,
    mode: MaskModeArg,
    verify: Option<usize>,
    format: Format,
    path: Option<String>,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Status, Failure> {
    let before = load_program(program)?;
    let mut notes = Vec::new();
    let after = match pass {
        Pass::SeparableToBilinear => separable_to_bilinear(&before)?,
        Pass::EliminateMask => {
            let m = match mode {
                MaskModeArg::Sentinel => MaskMode::Sentinel,
                MaskModeArg::Bound => MaskMode::EnumeratedBound { n_max },
            };
            eliminate_mask_guhat(&before, m)?
        }
        Pass::EliminateTies => eliminate_ties(&before, n_max)?,
        Pass::SimulateMask => {
            let widened = if before.init.provides_position() {
                before.clone()
            } else {
                notes.push("initialization widened to (letter, i, n)".to_string());
                extend_init_with_position(&before)
            };
            simulate_mask_separable(&widened, n_max)?
        }
        Pass::BraspToMasked => unmasked_brasp_to_masked(&before, n_max)?,
        Pass::AddPosition => extend_init_with_position(&before),
    };
    let pass_name = pass.to_possible_value().expect("named pass").get_name().to_string();
    let report = match verify {
        Some(len) => {
            let mut r = verify_pass(&pass_name, &before, &after, len)?;
            r.notes.extend(notes.iter().cloned());
            Some(r)
        }
        None => None,
    };
    let (program_sink, report_sink): (&mut dyn Write, &mut dyn Write) = match &path {
        Some(_) => (&mut std::io::sink(), out),
        None => (out, err),
    };
    match &path {
        Some(p) => {
            let mut buf = Vec::new();
            write_program(&mut buf, &after, format)?;
            std::fs::write(p, buf)?;
        }
        None => write_program(program_sink, &after, format)?,
    }
    for n in &notes {
        writeln!(report_sink, "note: {n}")?;
    }
    let Some(r) = report else { return Ok(Status::Pass) };
    if json {
        emit_json(report_sink, &r)?;
    } else {
        writeln!(report_sink, "pass: {}  depth {:+}", r.pass, r.layer_delta)?;
        writeln!(report_sink, "class: {} -> {}", r.before.class_name(), r.after.class_name())?;
        match &r.counterexample {
            None => writeln!(report_sink, "preserved up to length {}", r.checked_up_to)?,
            Some(w) => writeln!(report_sink, "counterexample: {w:?}")?,
        }
    }
    Ok(status(r.preserved()))
}
