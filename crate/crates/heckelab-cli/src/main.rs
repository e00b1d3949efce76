//! `heckelab` command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input (files, JSON,
//! expressions), 3 an algebra error.

mod config;
mod report;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use heckelab::expr::ExprError;
use heckelab::Exec;

use config::Config;
use report::RunReport;
use suites::{Knobs, SUITES};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Algebra(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 2,
            CliError::Algebra(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "heckelab",
    version,
    about = "Exact computation in affine Hecke algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgebraKind {
    /// Iwahori algebra unless the expression mentions `th[...]`
    Auto,
    Iwahori,
    Bernstein,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    #[value(name = "appendixA")]
    AppendixA,
    #[value(name = "appendixB")]
    AppendixB,
    #[value(name = "appendixC")]
    AppendixC,
    #[value(name = "appendixD")]
    AppendixD,
    Quotient,
    Comparison,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::AppendixA => "appendixA",
            Suite::AppendixB => "appendixB",
            Suite::AppendixC => "appendixC",
            Suite::AppendixD => "appendixD",
            Suite::Quotient => "quotient",
            Suite::Comparison => "comparison",
            Suite::All => "all",
        }
    }
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Seed for randomized checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Constant-term window for affine roots (default 3)
    #[arg(long)]
    window: Option<i64>,
    /// Term bound for random elements
    #[arg(long, default_value_t = 6)]
    max_terms: usize,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression and print its normal form
    Compute {
        config: PathBuf,
        expr: String,
        #[arg(long, value_enum, default_value_t = AlgebraKind::Auto)]
        algebra: AlgebraKind,
    },
    /// Run verification suites and emit a JSON report
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Build the quotient system of the marked roots and dump it as JSON
    Quotient {
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("HECKELAB_THREADS") else {
        return Ok(());
    };
    let n: usize =
        v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Config(format!("HECKELAB_THREADS must be a positive integer, got {v:?}"))
        })?;
    // only fails if a pool already exists, which cannot happen this early
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn expr_error(e: ExprError) -> CliError {
    match e {
        ExprError::Eval(m) => CliError::Algebra(format!("AlgebraError: {m}")),
        other => CliError::Config(format!("ExprError: {other}")),
    }
}

fn compute(path: &Path, src: &str, kind: AlgebraKind) -> Result<String, CliError> {
    let cfg = Config::load(path)?;
    let alg = cfg.algebra.build()?;
    let bernstein = match kind {
        AlgebraKind::Auto => src.contains("th["),
        AlgebraKind::Iwahori => false,
        AlgebraKind::Bernstein => true,
    };
    if bernstein {
        alg.parse(src).map(|x| alg.render(&x)).map_err(expr_error)
    } else {
        let fin = alg.finite();
        fin.parse(src).map(|x| fin.render(&x)).map_err(expr_error)
    }
}

fn knobs(cfg: &Config, run: &RunArgs) -> Result<Knobs, CliError> {
    if run.max_terms == 0 {
        return Err(CliError::Config("--max-terms must be positive".into()));
    }
    if matches!(run.window, Some(w) if w < 2) {
        return Err(CliError::Config("--window must be at least 2".into()));
    }
    Ok(Knobs {
        seed: run.seed,
        window: run.window,
        max_terms: run.max_terms,
        samples: cfg.samples.unwrap_or(200),
        exec: Exec::Parallel,
    })
}

fn verify(suite: Suite, path: &Path, run: &RunArgs) -> Result<RunReport, CliError> {
    let cfg = Config::load(path)?;
    let k = knobs(&cfg, run)?;
    let names: Vec<&str> = match suite {
        Suite::All => SUITES
            .iter()
            .copied()
            .filter(|s| suites::applicable(&cfg, s))
            .collect(),
        one => vec![one.name()],
    };
    if names.is_empty() {
        return Err(CliError::Config(
            "the config has no section any suite can use".into(),
        ));
    }
    let mut rep = RunReport::new("verify", suite.name(), &k);
    for name in names {
        let start = Instant::now();
        let out = suites::run(&cfg, name, &k)?;
        rep.add_suite(name, out, start.elapsed());
    }
    Ok(rep.finish())
}

fn quotient(path: &Path, run: &RunArgs) -> Result<RunReport, CliError> {
    let cfg = Config::load(path)?;
    let k = knobs(&cfg, run)?;
    let mut rep = RunReport::new("quotient", "quotient", &k);
    let start = Instant::now();
    let out = suites::quotient_dump(&cfg, &k)?;
    rep.add_suite("quotient", out, start.elapsed());
    Ok(rep.finish())
}

fn emit(rep: &RunReport, out: Option<&Path>) -> Result<u8, CliError> {
    let json = rep.to_json();
    match out {
        Some(p) => std::fs::write(p, &json).map_err(|source| CliError::Output {
            path: p.to_path_buf(),
            source,
        })?,
        None => print!("{json}"),
    }
    eprint!("{}", rep.summary());
    Ok(rep.exit_status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match &cli.command {
        Command::Compute {
            config,
            expr,
            algebra,
        } => compute(config, expr, *algebra).map(|s| {
            println!("{s}");
            0
        }),
        Command::Verify { suite, config, run } => {
            verify(*suite, config, run).and_then(|r| emit(&r, run.out.as_deref()))
        }
        Command::Quotient { config, run } => quotient(config, run).and_then(|r| emit(&r, run.out.as_deref())),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
