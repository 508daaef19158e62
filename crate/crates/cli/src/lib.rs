//! Command-line front end for `mixlogic`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixlogic::derivation::{check, embed_c2_in_m2};
use mixlogic::formula::syntax::parse_formula;
use mixlogic::formula::{is_classical_type, polarity, Formula};
use mixlogic::machines::{classify_mu_integer, extract_value, rep};
use mixlogic::reduce::{
    beta_reduce, head_c_reduce, head_reduce, mu_normalize_innermost, mu_reduce, stack_reduce, Budget, ReduceError,
    Trace,
};
use mixlogic::storage::{
    characterize_bottom_arrow, characterize_cc, verify_storage, verify_storage_classical, verify_storage_mu,
    BottomVerdict, CcVerdict, ThetaCorpus,
};
use mixlogic::term::mu::builtin_mu;
use mixlogic::term::{builtin, Fresh, BUILTIN_NAMES};
use mixlogic::translate::{classical, godel, prop_erase, simple_godel};
use mixlogic::{parse_mu_term, parse_term, MuTerm, ParseError, Substitution, Term};
use serde::Serialize;

pub mod acceptance;
pub mod corrupt;
pub mod deriv_file;
pub mod fixture_files;
pub mod sexp;

#[derive(Parser, Debug)]
#[command(name = "mixlogic", version, about = "Lambda-C and lambda-mu terms, second-order types and storage operators")]
pub struct Cli {
    /// Maximum number of reduction steps per operation.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_STEPS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Print reduction steps.
    #[arg(long, global = true)]
    pub trace: bool,
    #[arg(long, global = true, value_enum, default_value_t = TraceFormat::Text)]
    pub trace_format: TraceFormat,
    #[arg(long, global = true, default_value = "fixtures")]
    pub fixture_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceFormat {
    Text,
    #[value(alias = "json")]
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduce a term and print the result.
    Reduce(ReduceArgs),
    /// Check a derivation file.
    Typecheck {
        file: PathBuf,
        /// Embed a C2 derivation into M2 and print the result.
        #[arg(long)]
        embed: bool,
    },
    /// Translate a formula.
    Translate {
        #[arg(long, value_enum)]
        mode: TranslateMode,
        formula: String,
    },
    Classify {
        #[arg(long, value_enum)]
        kind: ClassifyKind,
        input: String,
    },
    /// Run the value-extraction machine on a classical integer.
    Value { term: String },
    /// Set of values denoted by a lambda-mu integer body.
    Rep { term: String },
    /// Check a storage operator over a corpus of integers.
    StorageVerify {
        #[arg(long)]
        candidate: String,
        #[arg(long, value_enum, default_value_t = StorageMode::Church)]
        mode: StorageMode,
        #[arg(long, default_value = "0..10", value_parser = parse_range)]
        n: RangeInclusive<usize>,
    },
    /// Check the operational behaviour of a control operator.
    Characterize {
        #[arg(long)]
        candidate: String,
        #[arg(long = "type", value_enum)]
        kind: OperatorType,
        #[arg(long, default_value = "0..5", value_parser = parse_range)]
        arities: RangeInclusive<usize>,
    },
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long, group = "relation")]
    pub beta: bool,
    #[arg(long, group = "relation")]
    pub head: bool,
    /// Head reduction with the control rule (the default).
    #[arg(long, group = "relation")]
    pub head_c: bool,
    /// Head C-reduction that keeps stack constants in place.
    #[arg(long, group = "relation")]
    pub stack: bool,
    /// Lambda-mu reduction to normal form.
    #[arg(long, group = "relation")]
    pub mu: bool,
    #[arg(long, value_enum, default_value_t = MuStrategy::Outer)]
    pub strategy: MuStrategy,
    pub term: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MuStrategy {
    Outer,
    Inner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TranslateMode {
    Godel,
    SimpleGodel,
    Classical,
    Erase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassifyKind {
    Polarity,
    ClassicalType,
    MuInteger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StorageMode {
    Church,
    Classical,
    Mu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OperatorType {
    Bottom,
    Cc,
}

#[derive(Subcommand, Debug)]
pub enum FixtureAction {
    /// Check every fixture file and run the end-to-end checks.
    RunAll,
    /// Rewrite the generated fixture files from the built-in library.
    Write,
}

/// `a..b` (inclusive) or a single number.
fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.trim_start_matches('='))?,
        None => num(s)?..=num(s)?,
    };
    if r.is_empty() {
        return Err(format!("empty range `{s}`"));
    }
    Ok(r)
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed input; exit code 2.
    #[error("{0}")]
    Parse(String),
    /// Exit code 1.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Text of an argument that names a file, or the argument itself.
pub struct Input {
    pub origin: String,
    pub text: String,
}

impl Input {
    pub fn load(arg: &str) -> Result<Input, CliError> {
        let p = Path::new(arg);
        if p.is_file() {
            let text = fs::read_to_string(p).map_err(|e| CliError::Failed(format!("{arg}: {e}")))?;
            return Ok(Input { origin: arg.to_string(), text });
        }
        Ok(Input { origin: "<argument>".into(), text: arg.to_string() })
    }

    fn error(&self, e: ParseError) -> CliError {
        CliError::Parse(format!("{}:{}:{}: {}", self.origin, e.line, e.column, e.message))
    }

    pub fn term(&self) -> Result<Term, CliError> {
        let t = parse_term(&self.text).map_err(|e| self.error(e))?;
        Ok(with_builtins(&t))
    }

    pub fn mu_term(&self) -> Result<MuTerm, CliError> {
        let t = parse_mu_term(&self.text).map_err(|e| self.error(e))?;
        Ok(with_builtins_mu(&t))
    }

    pub fn formula(&self) -> Result<Formula, CliError> {
        parse_formula(self.text.trim()).map_err(|e| self.error(e))
    }
}

/// Replaces free occurrences of builtin names by their definitions.
pub fn with_builtins(t: &Term) -> Term {
    let s = t
        .free_vars()
        .into_iter()
        .filter_map(|x| builtin(&x).ok().map(|b| (x, b)))
        .fold(Substitution::new(), |s, (x, b)| s.var(&x, b));
    if s.is_empty() {
        t.clone()
    } else {
        t.substitute(&s)
    }
}

/// Builtins are closed, so replacing free variables needs no shifting.
pub fn with_builtins_mu(t: &MuTerm) -> MuTerm {
    match t {
        MuTerm::Free(x) if BUILTIN_NAMES.contains(&x.as_str()) => builtin_mu(x).unwrap_or_else(|_| t.clone()),
        MuTerm::Free(_) | MuTerm::Bound(_) => t.clone(),
        MuTerm::Lam(h, b) => MuTerm::Lam(h.clone(), Box::new(with_builtins_mu(b))),
        MuTerm::App(f, a) => MuTerm::App(Box::new(with_builtins_mu(f)), Box::new(with_builtins_mu(a))),
        MuTerm::Mu(h, n, b) => MuTerm::Mu(h.clone(), n.clone(), Box::new(with_builtins_mu(b))),
    }
}

#[derive(Serialize)]
struct JsonStep {
    step: usize,
    rule: String,
    path: String,
    term: String,
}

#[derive(Serialize)]
struct JsonTrace {
    initial: String,
    steps: Vec<JsonStep>,
    result: String,
}

fn render_trace<T: std::fmt::Display>(tr: &Trace<T>, format: TraceFormat) -> String {
    match format {
        TraceFormat::Text => tr.to_string(),
        TraceFormat::Structured => {
            let j = JsonTrace {
                initial: tr.initial.to_string(),
                steps: tr
                    .steps
                    .iter()
                    .enumerate()
                    .map(|(k, s)| JsonStep {
                        step: k + 1,
                        rule: s.rule.to_string(),
                        path: s.path.to_string(),
                        term: s.term.to_string(),
                    })
                    .collect(),
                result: tr.result().to_string(),
            };
            let mut s = serde_json::to_string_pretty(&j).expect("trace serializes");
            s.push('\n');
            s
        }
    }
}

fn reduced<T>(r: Result<Trace<T>, ReduceError>) -> Result<Trace<T>, CliError> {
    r.map_err(|e| CliError::Failed(e.to_string()))
}

struct Ctx {
    budget: Budget,
    trace: bool,
    trace_format: TraceFormat,
    out: String,
}

impl Ctx {
    fn line(&mut self, s: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{s}");
    }

    fn show<T: std::fmt::Display>(&mut self, tr: &Trace<T>) {
        if self.trace {
            self.out.push_str(&render_trace(tr, self.trace_format));
        }
        if !self.trace || self.trace_format == TraceFormat::Text {
            self.line(tr.result());
        }
    }
}

fn reduce(cx: &mut Ctx, a: &ReduceArgs) -> Result<(), CliError> {
    let input = Input::load(&a.term)?;
    if a.mu {
        let t = input.mu_term()?;
        let tr = match a.strategy {
            MuStrategy::Outer => reduced(mu_reduce(&t, cx.budget))?,
            MuStrategy::Inner => reduced(mu_normalize_innermost(&t, cx.budget))?,
        };
        cx.show(&tr);
        return Ok(());
    }
    let t = input.term()?;
    let tr = if a.beta {
        beta_reduce(&t, cx.budget)
    } else if a.head {
        head_reduce(&t, cx.budget)
    } else if a.stack {
        stack_reduce(&t, cx.budget)
    } else {
        head_c_reduce(&t, cx.budget)
    };
    let tr = reduced(tr)?;
    cx.show(&tr);
    Ok(())
}

fn typecheck(cx: &mut Ctx, file: &Path, embed: bool) -> Result<(), CliError> {
    let origin = file.display().to_string();
    let text = fs::read_to_string(file).map_err(|e| CliError::Failed(format!("{origin}: {e}")))?;
    let d = deriv_file::read_derivation(&text).map_err(|e| CliError::Parse(format!("{origin}:{e}")))?;
    check(&d).map_err(|e| CliError::Failed(format!("invalid: {e}")))?;
    if !embed {
        cx.line(format!("valid ({}): {}", d.system, d.conclusion()));
        return Ok(());
    }
    let e = embed_c2_in_m2(&d).map_err(|e| CliError::Failed(e.to_string()))?;
    check(&e).map_err(|err| CliError::Failed(format!("embedding is invalid: {err}")))?;
    cx.out.push_str(&deriv_file::write_derivation(&e));
    Ok(())
}

fn translate(cx: &mut Ctx, mode: TranslateMode, src: &str) -> Result<(), CliError> {
    let a = Input::load(src)?.formula()?;
    let failed = |e: mixlogic::translate::TranslateError| CliError::Failed(e.to_string());
    let b = match mode {
        TranslateMode::Godel => godel(&a),
        TranslateMode::SimpleGodel => simple_godel(&a).map_err(failed)?,
        TranslateMode::Classical => classical(&a).map_err(failed)?,
        TranslateMode::Erase => prop_erase(&a),
    };
    cx.line(b);
    Ok(())
}

fn classify(cx: &mut Ctx, kind: ClassifyKind, src: &str) -> Result<(), CliError> {
    let input = Input::load(src)?;
    match kind {
        ClassifyKind::Polarity => {
            let p = polarity(&input.formula()?);
            cx.line(format!("{p:?}"));
        }
        ClassifyKind::ClassicalType => {
            let yes = is_classical_type(&input.formula()?);
            cx.line(if yes { "classical" } else { "not classical" });
        }
        ClassifyKind::MuInteger => {
            let k = classify_mu_integer(&input.mu_term()?, cx.budget)
                .map_err(|e| CliError::Failed(format!("not a classical integer: {e}")))?;
            cx.line(if k.vacuous { format!("n={} vacuous", k.n) } else { format!("n={}", k.n) });
        }
    }
    Ok(())
}

fn value(cx: &mut Ctx, src: &str) -> Result<(), CliError> {
    let t = Input::load(src)?.term()?;
    let v = extract_value(&t, cx.budget).map_err(|e| CliError::Failed(e.to_string()))?;
    if cx.trace {
        for (k, seg) in v.segments.iter().enumerate() {
            cx.out.push_str(&format!("segment {k}\n"));
            cx.out.push_str(&render_trace(seg, cx.trace_format));
        }
    }
    cx.line(&v);
    Ok(())
}

fn rep_cmd(cx: &mut Ctx, src: &str) -> Result<(), CliError> {
    let t = Input::load(src)?.mu_term()?;
    let mut taken = t.free_vars();
    let mut fresh = Fresh::new(0);
    let (u, x, f) = match &t {
        MuTerm::Lam(_, b) if matches!(&**b, MuTerm::Lam(..)) => {
            let MuTerm::Lam(_, body) = &**b else { unreachable!() };
            let x = fresh.name("x", &taken);
            taken.insert(x.clone());
            let f = fresh.name("f", &taken);
            (MuTerm::open(&MuTerm::open(body, &f), &x), x, f)
        }
        _ => (t.clone(), "x".to_string(), "f".to_string()),
    };
    let r = rep(&u, &x, &f).map_err(|e| CliError::Failed(e.to_string()))?;
    cx.line(&r.set);
    Ok(())
}

fn storage(cx: &mut Ctx, candidate: &str, mode: StorageMode, ns: RangeInclusive<usize>) -> Result<(), CliError> {
    let input = Input::load(candidate)?;
    let ok = match mode {
        StorageMode::Mu => {
            let reports = verify_storage_mu(&input.mu_term()?, ns, cx.budget);
            for r in &reports {
                cx.line(r);
            }
            reports.iter().all(|r| r.outcome.is_simulated())
        }
        StorageMode::Church | StorageMode::Classical => {
            let t = input.term()?;
            let reports = if mode == StorageMode::Church {
                verify_storage(&t, &ThetaCorpus::pure(ns), cx.budget)
            } else {
                verify_storage_classical(&t, ns, cx.budget)
            };
            for r in &reports {
                match (&r.payload, r.outcome.is_simulated()) {
                    (Some(p), true) => cx.line(format!("{r} payload={p}")),
                    _ => cx.line(r),
                }
            }
            reports.iter().all(|r| r.outcome.is_simulated())
        }
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed("some entries were not simulated".into()))
    }
}

fn characterize(cx: &mut Ctx, candidate: &str, kind: OperatorType, ar: RangeInclusive<usize>) -> Result<(), CliError> {
    let t = Input::load(candidate)?.term()?;
    match kind {
        OperatorType::Bottom => match characterize_bottom_arrow(&t, ar, cx.budget) {
            BottomVerdict::Confirmed => cx.line("confirmed"),
            v => return Err(CliError::Failed(format!("{v:?}"))),
        },
        OperatorType::Cc => match characterize_cc(&t, ar, cx.budget) {
            CcVerdict::Shape { m, j } => cx.line(format!("shape m={m} j={j}")),
            v => return Err(CliError::Failed(format!("{v:?}"))),
        },
    }
    Ok(())
}

fn fixtures(cx: &mut Ctx, dir: &Path, action: &FixtureAction) -> Result<(), CliError> {
    match action {
        FixtureAction::Write => {
            let n = fixture_files::write(dir).map_err(|e| CliError::Failed(format!("{}: {e}", dir.display())))?;
            cx.line(format!("wrote {n} files"));
            Ok(())
        }
        FixtureAction::RunAll => {
            let mut ok = true;
            for line in fixture_files::run(dir) {
                ok &= line.starts_with("PASS");
                cx.line(line);
            }
            for c in acceptance::run_all(cx.budget) {
                ok &= c.passed();
                cx.line(c);
            }
            if ok {
                Ok(())
            } else {
                Err(CliError::Failed("fixture checks failed".into()))
            }
        }
    }
}

fn dispatch(cx: &mut Ctx, cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Reduce(a) => reduce(cx, a),
        Command::Typecheck { file, embed } => typecheck(cx, file, *embed),
        Command::Translate { mode, formula } => translate(cx, *mode, formula),
        Command::Classify { kind, input } => classify(cx, *kind, input),
        Command::Value { term } => value(cx, term),
        Command::Rep { term } => rep_cmd(cx, term),
        Command::StorageVerify { candidate, mode, n } => storage(cx, candidate, *mode, n.clone()),
        Command::Characterize { candidate, kind, arities } => characterize(cx, candidate, *kind, arities.clone()),
        Command::Fixtures { action } => fixtures(cx, &cli.fixture_dir, action),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let budget = Budget::new(usize::try_from(cli.budget).unwrap_or(usize::MAX));
    let mut cx = Ctx { budget, trace: cli.trace, trace_format: cli.trace_format, out: String::new() };
    match dispatch(&mut cx, &cli) {
        Ok(()) => Outcome { code: 0, stdout: cx.out, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: cx.out, stderr: format!("error: {e}\n") },
    }
}
