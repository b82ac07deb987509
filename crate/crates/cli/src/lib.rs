//! Command-line front end for the betlogic reasoner.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 semantic error (zero
//! evidence, invalid density, failed demo check), 3 I/O error.

pub mod demo;
pub mod kb;
pub mod repl;
pub mod report;

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use betlogic::rational::parse_rational;
use betlogic::{decide, Error as CoreError, Loss, Payoff, Sentence};
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use kb::{load_kb, KbError, KnowledgeBase};
use report::{show, DecisionReport, Fraction, JsonReport};

#[derive(Debug, Parser)]
#[command(name = "betlogic", version, about = "Nonmonotonic reasoning as betting over possible worlds")]
struct Cli {
    /// Emit one JSON document instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Knowledge-base file (alternative to the positional argument)
    #[arg(long, global = true, value_name = "PATH")]
    kb: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a knowledge-base file
    Check { file: Option<PathBuf> },
    /// Exact conditional probability of a sentence
    Query {
        /// Evidence sentence
        #[arg(long, default_value = "true")]
        given: String,
        /// [KB] QUERY
        #[arg(num_args = 1..=2, required = true, value_name = "ARGS")]
        args: Vec<String>,
    },
    /// Decide whether to bet on a sentence
    Decide {
        #[arg(long, default_value = "true")]
        given: String,
        /// Amount won when the sentence holds
        #[arg(long)]
        win: Option<String>,
        /// Amount lost when it does not
        #[arg(long, conflicts_with = "lose_life")]
        lose: Option<String>,
        /// The loss is unbounded (the bettor's life)
        #[arg(long)]
        lose_life: bool,
        /// Use stakes named in the knowledge base
        #[arg(long, conflicts_with_all = ["win", "lose", "lose_life"])]
        payoff: Option<String>,
        /// [KB] QUERY
        #[arg(num_args = 1..=2, required = true, value_name = "ARGS")]
        args: Vec<String>,
    },
    /// Interactive tell/ask session
    Repl { file: Option<PathBuf> },
    /// Run a built-in, self-checking scenario
    Demo {
        name: DemoName,
        /// Ticket count for the lottery
        #[arg(long, default_value_t = demo::DEFAULT_TICKETS as u64, value_parser = clap::value_parser!(u64).range(1..))]
        tickets: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DemoName {
    Tweety,
    Lottery,
    Roulette,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Semantic(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 1,
            CliError::Semantic(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<KbError> for CliError {
    fn from(e: KbError) -> Self {
        match e {
            KbError::Io { .. } => CliError::Io(e.to_string()),
            KbError::Parse { .. } => CliError::Parse(e.to_string()),
            KbError::Invalid { .. } => CliError::Semantic(e.to_string()),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse(_) | CoreError::UnknownAtom(_) | CoreError::InvalidAtomName(_) | CoreError::ReservedAtomName(_) => {
                CliError::Parse(e.to_string())
            }
            CoreError::InvalidPayoff(_) => CliError::Usage(e.to_string()),
            _ => CliError::Semantic(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// What a command produced.
struct Outcome {
    text: String,
    json: JsonReport,
    /// Nonzero when the command ran but its result is a failure (demo checks).
    code: i32,
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write, interactive: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let name = command_name(&cli.command);
    let json = cli.json;
    let result = execute(cli, input, out, interactive);
    let written = match &result {
        Ok(Some(o)) if json => writeln!(out, "{}", o.json.to_line()),
        Ok(Some(o)) => write!(out, "{}", o.text),
        Ok(None) => Ok(()),
        Err(e) if json => writeln!(out, "{}", JsonReport::failure(name, e).to_line()),
        Err(e) => writeln!(err, "error: {e}"),
    };
    if written.is_err() {
        return 3;
    }
    match result {
        Ok(Some(o)) => o.code,
        Ok(None) => 0,
        Err(e) => e.exit_code(),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Query { .. } => "query",
        Command::Decide { .. } => "decide",
        Command::Repl { .. } => "repl",
        Command::Demo { name: DemoName::Tweety, .. } => "demo tweety",
        Command::Demo { name: DemoName::Lottery, .. } => "demo lottery",
        Command::Demo { name: DemoName::Roulette, .. } => "demo roulette",
    }
}

fn execute(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write, interactive: bool) -> Result<Option<Outcome>, CliError> {
    let global_kb = cli.kb;
    let pick_kb = |positional: Option<PathBuf>| -> Result<KnowledgeBase, CliError> {
        let path = positional
            .or_else(|| global_kb.clone())
            .ok_or_else(|| CliError::Usage("no knowledge base given; pass a file or --kb <path>".into()))?;
        Ok(load_kb(&path)?)
    };
    let split = |args: Vec<String>| -> (Option<PathBuf>, String) {
        let mut args = args;
        let query = args.pop().expect("clap requires one argument");
        (args.pop().map(PathBuf::from), query)
    };

    match cli.command {
        Command::Check { file } => {
            let kb = pick_kb(file)?;
            let text = format!(
                "valid density: {} atoms, {} worlds, masses sum to 1; {} named payoffs",
                kb.density.universe().len(),
                kb.density.len(),
                kb.payoffs.len()
            );
            let json = JsonReport { conclusion: Some(text.clone()), ..JsonReport::new("check") };
            Ok(Some(Outcome { text: text + "\n", json, code: 0 }))
        }
        Command::Query { given, args } => {
            let (file, query) = split(args);
            let kb = pick_kb(file)?;
            let s = Sentence::parse(&query)?;
            let e = Sentence::parse(&given)?;
            let p = kb.density.cond_prob(&s, &e)?;
            let text = format!("P({s} | {e}) = {}\n", show(&p));
            let json = JsonReport {
                query: Some(s.to_string()),
                evidence: Some(e.to_string()),
                probability: Some(Fraction::of(&p)),
                ..JsonReport::new("query")
            };
            Ok(Some(Outcome { text, json, code: 0 }))
        }
        Command::Decide { given, win, lose, lose_life, payoff, args } => {
            let (file, query) = split(args);
            let kb = pick_kb(file)?;
            let payoff = match payoff {
                Some(name) => kb
                    .payoffs
                    .get(&name)
                    .cloned()
                    .ok_or_else(|| CliError::Usage(format!("no payoff named `{name}` in the knowledge base")))?,
                None => stakes(win, lose, lose_life)?,
            };
            let s = Sentence::parse(&query)?;
            let e = Sentence::parse(&given)?;
            let decision = decide(&kb.density, &s, &e, &payoff)?;
            let report = DecisionReport::of(&decision);
            Ok(Some(Outcome { text: report.human(), json: report.json("decide"), code: 0 }))
        }
        Command::Repl { file } => {
            let kb = pick_kb(file)?;
            let mut repl = repl::Repl::new(&kb, cli.json);
            if interactive && !cli.json {
                writeln!(out, "betlogic repl: {} atoms, {} worlds. Type `help`.", kb.density.universe().len(), kb.density.len())?;
            }
            repl.run(input, out, interactive && !cli.json)?;
            Ok(None)
        }
        Command::Demo { name, tickets } => {
            let run = match name {
                DemoName::Tweety => demo::tweety(),
                DemoName::Lottery => demo::lottery(tickets as usize),
                DemoName::Roulette => demo::roulette(),
            };
            let json = JsonReport {
                accepted: Some(run.passed()),
                conclusion: Some(run.conclusions.join("\n")),
                error: (!run.passed()).then(|| run.failures.join("\n")),
                ..JsonReport::new(format!("demo {}", run.name))
            };
            let code = if run.passed() { 0 } else { 2 };
            Ok(Some(Outcome { text: run.transcript, json, code }))
        }
    }
}

fn stakes(win: Option<String>, lose: Option<String>, lose_life: bool) -> Result<Payoff, CliError> {
    let amount = |flag: &str, text: String| {
        parse_rational(&text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
    };
    let win = amount("win", win.ok_or_else(|| CliError::Usage("--win is required (or --payoff <name>)".into()))?)?;
    let loss = match (lose, lose_life) {
        (Some(l), false) => Loss::Finite(amount("lose", l)?),
        (None, true) => Loss::Unbounded,
        _ => return Err(CliError::Usage("give exactly one of --lose <amount> or --lose-life".into())),
    };
    Payoff::with_loss(win, loss).map_err(|e| CliError::Usage(e.to_string()))
}
