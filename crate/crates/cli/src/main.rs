//! `arboreal`: batch front end for the arboreal library.
//!
//! Every command writes JSON lines (default) or an aligned table. Exit codes:
//! 0 on success, 1 on input errors, 2 when a result is inconclusive or a
//! budget ran out.

mod commands;
mod input;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use arboreal::factor::DEFAULT_BUDGET;
use arboreal::galois::DEFAULT_PRIME_BOUND;

use output::Format;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Inconclusive(String),
}

impl From<arboreal::Error> for CliError {
    fn from(e: arboreal::Error) -> Self {
        use arboreal::Error::*;
        match e {
            BudgetExceeded { .. } | CapExceeded { .. } | NoGoodPrimes => {
                CliError::Inconclusive(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "arboreal", version, about = "Arboreal Galois representations of quadratic pairs over Q")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Output mode.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Length of the adjusted orbit used by classify, orbit and abdim.
    #[arg(short = 'n', long = "orbit-len", global = true, env = "ARBOREAL_ORBIT_LEN", default_value_t = 12,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub orbit_len: u64,
    /// Work budget for integer factorization.
    #[arg(long, global = true, env = "ARBOREAL_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Largest prime tried by local ramification searches.
    #[arg(long, global = true, env = "ARBOREAL_PRIME_BOUND", default_value_t = DEFAULT_PRIME_BOUND,
          value_parser = clap::value_parser!(u64).range(3..))]
    pub prime_bound: u64,
    /// Seed for sampled checks.
    #[arg(long, global = true, env = "ARBOREAL_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report per pair: normal form, PCF, exceptional, abelian verdict, level-2 group.
    Classify {
        /// Pairs "a,b,alpha" or "c,alpha".
        pairs: Vec<String>,
        /// CSV file with one pair per row.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Classify every normal form with c and alpha of bounded height.
    Survey {
        #[arg(long, default_value_t = 2)]
        c_height: u64,
        #[arg(long, default_value_t = 2)]
        alpha_height: u64,
        /// List every pair, not just the abelian and uncertified ones.
        #[arg(long)]
        all: bool,
    },
    /// Raw and adjusted orbit values.
    Orbit {
        pairs: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Post-critical finiteness of x^2 + c.
    Pcf {
        params: Vec<String>,
        /// Check every c of height at most this instead.
        #[arg(long)]
        height: Option<u64>,
    },
    /// Containment of the image in the maximal subgroup M_v.
    Contain {
        pair: String,
        /// Index vectors such as "{1,2}".
        #[arg(required = true)]
        vectors: Vec<String>,
    },
    /// F_2-dimension of the abelianization at level n.
    Abdim {
        pairs: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact level-2 Galois group.
    Group2 {
        pairs: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Cross-check against this many Frobenius cycle types (0 disables).
        #[arg(long, default_value_t = 0)]
        frobenius: usize,
    },
    /// p-adic valuations of the critical orbit.
    Valuations {
        c: String,
        p: u64,
    },
    /// Local infinite-ramification tests.
    Poonen {
        pair: String,
        /// Test only this prime instead of searching up to --prime-bound.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Progression, span and coprimality checks on a family of index vectors.
    Indexset {
        vectors: Vec<String>,
        /// File with a JSON array of vectors or one vector per line.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, requires = "l")]
        k: Option<u64>,
        #[arg(long, requires = "k")]
        l: Option<u64>,
        /// Threshold for the coprimality condition.
        #[arg(long, default_value_t = 0)]
        m: u64,
        /// Express this vector in the span of the family.
        #[arg(long)]
        target: Option<String>,
    },
    /// Prime-witness family for a strictly increasing sequence.
    Bertrand {
        /// Use a_n = n for n = 1..=N.
        #[arg(conflicts_with = "values")]
        n: Option<u64>,
        /// Explicit sequence "a1,a2,...".
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<u64>>,
    },
    /// Non-commutation check in the finite tree group of the given depth.
    TreeVerify {
        depth: usize,
        /// Random pairs for depths above 3.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Hyperelliptic curve attached to a pair and an arithmetic progression.
    Curve {
        pair: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        i0: usize,
        /// Naive search for points with x of height at most this.
        #[arg(long)]
        search: Option<u64>,
        /// Build the point coming from this index vector.
        #[arg(long)]
        construct: Option<String>,
    },
}

fn run(cli: Cli) -> Result<commands::Report, CliError> {
    let cfg = &cli.config;
    match cli.command {
        Command::Classify { pairs, csv } => commands::cmd_classify(&input::pairs(&pairs, csv.as_deref())?, cfg),
        Command::Survey { c_height, alpha_height, all } => commands::cmd_survey(c_height, alpha_height, all),
        Command::Orbit { pairs, csv } => commands::cmd_orbit(&input::pairs(&pairs, csv.as_deref())?, cfg),
        Command::Pcf { params, height } => commands::cmd_pcf(&params, height),
        Command::Contain { pair, vectors } => commands::cmd_contain(&input::pair(&pair)?, &vectors),
        Command::Abdim { pairs, csv } => commands::cmd_abdim(&input::pairs(&pairs, csv.as_deref())?, cfg),
        Command::Group2 { pairs, csv, frobenius } => {
            commands::cmd_group2(&input::pairs(&pairs, csv.as_deref())?, frobenius)
        }
        Command::Valuations { c, p } => commands::cmd_valuations(&input::rational(&c)?, p, cfg),
        Command::Poonen { pair, prime } => commands::cmd_poonen(&input::pair(&pair)?, prime, cfg),
        Command::Indexset { vectors, file, k, l, m, target } => {
            let fam = input::family(&vectors, file.as_deref())?;
            let target = target.as_deref().map(input::vector).transpose()?;
            commands::cmd_indexset(&fam, k.zip(l), m, target.as_ref())
        }
        Command::Bertrand { n, values } => {
            let a = match (n, values) {
                (Some(n), None) => (1..=n).collect(),
                (None, Some(v)) => v,
                _ => return Err(CliError::Input("give N or --values".into())),
            };
            commands::cmd_bertrand(&a)
        }
        Command::TreeVerify { depth, samples } => commands::cmd_tree_verify(depth, samples, cfg),
        Command::Curve { pair, k, l, i0, search, construct } => {
            let v = construct.as_deref().map(input::vector).transpose()?;
            commands::cmd_curve(&input::pair(&pair)?, k, l, i0, search, v.as_ref())
        }
    }
}

/// Pads tokens such as `-1,1` or `-3/4` with a space so clap reads them as
/// values rather than short flags; the parsers trim it again.
fn protect_negatives(args: impl Iterator<Item = String>) -> Vec<String> {
    args.map(|a| {
        let neg = a.starts_with('-') && a[1..].starts_with(|c: char| c.is_ascii_digit() || c == '.');
        if neg { format!(" {a}") } else { a }
    })
    .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(protect_negatives(std::env::args())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let format = cli.config.format;
    let report = match run(cli) {
        Ok(r) => r,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(CliError::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut out = io::stdout().lock();
    if output::emit(&report.records, format, &mut out).is_err() {
        return ExitCode::from(1);
    }
    if let Some(s) = &report.summary {
        let line = match format {
            Format::Json => s.to_string(),
            Format::Table => format!("# {}", output::summary_line(s)),
        };
        let _ = writeln!(out, "{line}");
    }
    if let Some(reason) = &report.inconclusive {
        eprintln!("inconclusive: {reason}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
