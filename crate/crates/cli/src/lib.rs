//! The `skelsem` command line: well-formedness checks, concrete evaluation,
//! abstract triple checking, constraint generation and analysis for While and
//! extended While.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

mod mutate;
mod verbs;

pub use mutate::{break_filter, WfMutation};

/// Exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const STUCK: i32 = 3;
    pub const FUEL: i32 = 4;
}

#[derive(Parser, Debug)]
#[command(
    name = "skelsem",
    version,
    about = "Skeletal semantics toolkit for While"
)]
pub struct Cli {
    /// Language pack.
    #[arg(long, global = true, value_enum, default_value_t = Lang::While)]
    pub lang: Lang,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampling verbs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Run batch checks on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Lang {
    While,
    WhileExt,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Check every skeleton of the language for well-formedness.
    CheckWf {
        /// Break one skeleton first.
        #[arg(long, value_enum)]
        mutate: Option<WfMutation>,
    },
    /// Evaluate a program concretely.
    Eval {
        program: PathBuf,
        /// Initial store, `x=5,flag=true`.
        #[arg(long, default_value = "")]
        state: String,
        /// Input stream, `1,2,3` (extended While).
        #[arg(long, default_value = "")]
        input: String,
        /// Maximum hook nesting depth.
        #[arg(long, default_value_t = 10_000)]
        fuel: u64,
    },
    /// Check that an abstract triple file is closed under the abstract rules.
    CheckTriples {
        file: PathBuf,
        /// Resolve hooks through state splitting.
        #[arg(long)]
        split: bool,
    },
    /// Print the dataflow constraints of a program as JSON.
    GenConstraints {
        program: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve the constraints of a program from an abstract initial store.
    Analyze {
        program: PathBuf,
        /// Abstract store, `x=[0;+inf],b=true`, or a JSON abstract value.
        #[arg(long, default_value = "")]
        state: String,
        #[arg(long, default_value_t = 3)]
        widen_after: usize,
        /// Also write the induced triple set.
        #[arg(long)]
        triples: Option<PathBuf>,
    },
    /// Print skeletons.
    ShowSkeleton {
        /// Constructor, e.g. `while` or `;`; all skeletons when omitted.
        ctor: Option<String>,
    },
    /// Sample every abstract filter against its concrete counterpart.
    ProveFilters {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Replace one abstract filter by a broken version first.
        #[arg(long)]
        mutate: Option<String>,
    },
}

/// A problem with the command line or its input files.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Runs one command and returns its exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let text = e.render().to_string();
            if code == exit::OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match verbs::dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                exit::USAGE
            } else {
                exit::CHECK_FAILED
            }
        }
    }
}
