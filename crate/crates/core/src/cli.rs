//! The `coxforge` command line.
//!
//! Exit codes: 0 success, 1 bad input, 2 enumeration budget exhausted,
//! 3 internal failure. Reports go to stdout (or `--out`), diagnostics to
//! stderr.

use std::fs;
use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::classify::{classify, ClassifyError};
use crate::coxeter::{CoxeterMatrix, Label};
use crate::dsl;
use crate::report::{self, ClassifyJson, FaithfulJson, HitJson, ReprJson, SignatureJson};
use crate::repr::{enumerate_ball, reflection, verify_reduced_faithful, BallOptions, ReprError, DEFAULT_BUDGET};
use crate::scalar::ScalarError;
use crate::search::{self, hunt, Predicate, SearchError, SearchSpec};
use crate::tits::{gram, kernel, signature};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "coxforge", version, about = "Exact computations on Coxeter groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Io {
    /// Input file in the coxforge text format; `-` or absent reads stdin.
    input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Enumeration {
    /// Largest word length to enumerate.
    #[arg(long = "max-length")]
    max_length: Option<usize>,
    /// Abort once more than this many elements have been found.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Compute each level on all cores.
    #[arg(long)]
    parallel: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split into irreducible factors and report kinds and group verdicts.
    Classify(Io),
    /// Gram matrix, signature and kernel of the Tits form.
    Signature(Io),
    /// Reflection matrices and the ball of the given radius.
    Repr {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        ball: Enumeration,
    },
    /// Look for elements acting as plus or minus the identity on the quotient
    /// by the kernel.
    VerifyFaithful {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        ball: Enumeration,
    },
    /// Enumerate connected diagrams and print those matching a predicate, one
    /// JSON object per line.
    Search {
        /// Rank or rank range, e.g. `4` or `3-5`.
        #[arg(long, value_parser = parse_ranks)]
        n: RangeInclusive<usize>,
        /// Comma-separated labels, e.g. `2,3,inf`.
        #[arg(long, value_parser = parse_alphabet)]
        alphabet: Option<Alphabet>,
        /// Filter such as `q == 1 and r >= 1 and kind == NonAffine`.
        #[arg(long = "where", value_parser = parse_predicate)]
        predicate: Option<Predicate>,
        /// Keep at most this many hits.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_ranks(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected a rank such as `4` or a range such as `3-5`, found `{s}`");
    let (a, b) = match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

#[derive(Debug, Clone)]
struct Alphabet(Vec<Label>);

fn parse_alphabet(s: &str) -> Result<Alphabet, String> {
    search::parse_alphabet(s).map(Alphabet)
}

fn parse_predicate(s: &str) -> Result<Predicate, String> {
    Predicate::parse(s).map_err(|e| e.to_string())
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<ScalarError> for Failure {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::ContextMismatch(..) => Failure::internal(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<ReprError> for Failure {
    fn from(e: ReprError) -> Self {
        match e {
            ReprError::BudgetExceeded { .. } => Failure {
                code: EXIT_BUDGET,
                message: e.to_string(),
            },
            ReprError::Scalar(s) => s.into(),
            _ => Failure::internal(e.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Scalar(s) => s.into(),
            ClassifyError::UnnamedSpherical(_) => Failure::internal(e.to_string()),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Scalar(s) => s.into(),
            SearchError::Inconsistent { .. } | SearchError::Pool(_) => Failure::internal(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

/// Where reports go.
enum Sink<'a> {
    Stdout(&'a mut dyn Write),
    File(PathBuf, Vec<u8>),
}

impl Sink<'_> {
    fn write(&mut self, s: &str) -> Result<(), Failure> {
        match self {
            Sink::Stdout(w) => w
                .write_all(s.as_bytes())
                .map_err(|e| Failure::internal(format!("writing output: {e}"))),
            Sink::File(_, buf) => {
                buf.extend_from_slice(s.as_bytes());
                Ok(())
            }
        }
    }

    fn finish(self) -> Result<(), Failure> {
        match self {
            Sink::Stdout(w) => w.flush().map_err(|e| Failure::internal(format!("writing output: {e}"))),
            Sink::File(path, buf) => {
                fs::write(&path, buf).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
            }
        }
    }
}

fn sink<'a>(out: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Sink<'a> {
    match out {
        Some(p) => Sink::File(p.clone(), Vec::new()),
        None => Sink::Stdout(stdout),
    }
}

fn read_matrix(io: &Io, stdin: &mut dyn Read) -> Result<CoxeterMatrix, Failure> {
    let (origin, text) = match &io.input {
        Some(p) if p.as_os_str() != "-" => {
            let text = fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            (p.display().to_string(), text)
        }
        _ => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::input(format!("<stdin>: {e}")))?;
            ("<stdin>".to_string(), text)
        }
    };
    let m = dsl::parse(&text).map_err(|e| Failure::input(format!("{origin}:{e}")))?;
    m.validate().map_err(|errs| {
        let msgs: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
        Failure::input(format!("{origin}: {}", msgs.join("; ")))
    })?;
    Ok(m)
}

fn execute(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Classify(io) => {
            let m = read_matrix(&io, stdin)?;
            let r = classify(&m)?;
            let mut out = sink(&io.out, stdout);
            out.write(&report::to_pretty(&ClassifyJson::new(&m, &r)))?;
            out.finish()
        }
        Command::Signature(io) => {
            let m = read_matrix(&io, stdin)?;
            let g = gram(&m)?;
            let doc = SignatureJson::new(&g, signature(&g), &kernel(&g));
            let mut out = sink(&io.out, stdout);
            out.write(&report::to_pretty(&doc))?;
            out.finish()
        }
        Command::Repr { io, ball } => {
            let m = read_matrix(&io, stdin)?;
            let g = gram(&m)?;
            let k = kernel(&g);
            let opts = BallOptions {
                budget: ball.budget,
                parallel: ball.parallel,
            };
            let b = enumerate_ball(&g, ball.max_length.unwrap_or(4), opts)?;
            let refl: Vec<_> = (0..m.rank()).map(|s| reflection(s, &g)).collect();
            let mut out = sink(&io.out, stdout);
            out.write(&report::to_pretty(&ReprJson::new(&g, &k, &refl, &b)))?;
            out.finish()
        }
        Command::VerifyFaithful { io, ball } => {
            let m = read_matrix(&io, stdin)?;
            let g = gram(&m)?;
            let k = kernel(&g);
            let opts = BallOptions {
                budget: ball.budget,
                parallel: ball.parallel,
            };
            let r = verify_reduced_faithful(&g, &k, ball.max_length.unwrap_or(8), opts)?;
            if !r.violations.is_empty() {
                let _ = writeln!(stderr, "{} element(s) act as ±I on the quotient", r.violations.len());
            }
            let mut out = sink(&io.out, stdout);
            out.write(&report::to_pretty(&FaithfulJson::new(&m, signature(&g), &r)))?;
            out.finish()
        }
        Command::Search {
            n,
            alphabet,
            predicate,
            limit,
            workers,
            out,
        } => {
            let mut spec = SearchSpec::new(n);
            if let Some(a) = alphabet {
                spec.alphabet = a.0;
            }
            spec.predicate = predicate.unwrap_or_default();
            spec.limit = limit;
            spec.workers = workers;
            let result = hunt(&spec)?;
            let mut sink = sink(&out, stdout);
            for h in &result.hits {
                sink.write(&report::to_line(&HitJson::new(h)))?;
            }
            let _ = writeln!(
                stderr,
                "examined {} classes, {} hit(s){}",
                result.examined,
                result.hits.len(),
                if result.truncated { ", limit reached" } else { "" }
            );
            sink.finish()
        }
    }
}

/// Runs the command line on explicit streams and returns the exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let outcome = catch_unwind(AssertUnwindSafe(|| dispatch(args, stdin, stdout, &mut *stderr)));
    match outcome {
        Ok(code) => code,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn dispatch<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_INPUT
                }
            };
        }
    };
    match execute(cli, stdin, stdout, &mut *stderr) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
