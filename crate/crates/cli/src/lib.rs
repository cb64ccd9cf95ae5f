//! Command-line front end for `parafree-core`.
//!
//! [`run`] takes the full argument vector and returns the exit code together
//! with everything destined for stdout and stderr, so the binary and the
//! tests share one code path.

pub mod commands;
pub mod config;
pub mod report;
pub mod suite;

use clap::{Args, Parser, Subcommand};
use parafree_core::coset::DEFAULT_MAX_COSETS;
use parafree_core::parafree::Member;

pub use config::{Output, RunConfig, DEFAULT_SEED};
pub use report::{Check, Report, Status};

pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "parafree", version, about = "Verification toolkit for para-free products of cyclic p-groups")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Coset table size limit; exceeding it is inconclusive.
    #[arg(long, global = true, env = "PARAFREE_MAX_COSETS", default_value_t = DEFAULT_MAX_COSETS)]
    pub max_cosets: usize,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub l: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of a word in C_{p^l} * C_{p^k} = <a, b>.
    Nf {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Order of a word in C_{p^l} * C_{p^k}: an integer or `inf`.
    Order {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Todd-Coxeter enumeration; prints the index.
    Tc {
        #[arg(long)]
        pres: String,
        /// Comma-separated subgroup generators.
        #[arg(long)]
        subgroup: Option<String>,
        /// Also print the coset table as CSV.
        #[arg(long)]
        table: bool,
    },
    /// Reidemeister-Schreier presentation of the kernel of an exponent-sum map to C_m.
    Rs {
        #[arg(long)]
        pres: String,
        /// Images as `gen:shift` pairs, e.g. `a:0,b:1`.
        #[arg(long)]
        map: String,
        #[arg(long)]
        modulus: i64,
        /// Skip Tietze simplification.
        #[arg(long)]
        raw: bool,
    },
    /// Invariant factors of the abelianization.
    Abelianize {
        #[arg(long)]
        pres: String,
    },
    /// Determinant of a square integer matrix given as CSV.
    Det {
        /// Rows separated by newlines or `;`, entries by commas.
        #[arg(allow_hyphen_values = true)]
        matrix: Option<String>,
        #[arg(long)]
        file: Option<std::path::PathBuf>,
    },
    /// Compare lower central quotients class by class.
    LcsCompare {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_parser = parse_member, conflicts_with = "target")]
        family: Option<Member>,
        #[arg(long)]
        max_class: Option<usize>,
        /// Reference presentation; defaults to C_{p^l} * C_{p^k}.
        #[arg(long)]
        reference: Option<String>,
        /// Target presentation, compared along `--images`.
        #[arg(long, requires = "images")]
        target: Option<String>,
        /// Comma-separated images of the reference generators in the target.
        #[arg(long, requires = "target")]
        images: Option<String>,
    },
    /// Trees of cyclic p-groups satisfying the product and Euler equations.
    GogSearch {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long)]
        max_exp: Option<u32>,
        #[arg(long, default_value_t = parafree_core::gog::DEFAULT_SEARCH_CAP)]
        cap: usize,
    },
    /// The kernel relation matrix for H and its determinant.
    MatrixA {
        #[arg(long)]
        p: u64,
    },
    /// Run every certifiable check for one prime.
    VerifyPaper {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max_class: Option<usize>,
    },
}

fn parse_member(s: &str) -> Result<Member, String> {
    s.parse().map_err(|e: parafree_core::Error| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    commands::dispatch(cli)
}
