use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use abelsurf::batch::{run_batch, Summary};
use abelsurf::curves::{load_curves, CurveRecord};
use abelsurf::fetch::Fetcher;
use abelsurf::hecke_file::load_hecke;
use abelsurf::oracle_driver::{c_set_checks, enumerate_f3_checks, sample_checks, Check};
use abelsurf::pipeline::{run_curve, RunOptions};
use abelsurf::bundled_hecke;
use abelsurf_core::hecke::HeckeTable;
use abelsurf_core::sieve::EarlyExit;
use abelsurf_core::verify::grh_bound;
use clap::{Args, Parser, Subcommand};

const EXIT_PARSE: u8 = 2;
const EXIT_ORACLE: u8 = 5;

#[derive(Parser)]
#[command(name = "abelsurf", version, about = "Nonsurjective mod-l primes for Jacobians of genus 2 curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve and verify one curve; prints a JSON report.
    Run {
        /// A curve record `label,f,h,conductor` with `;`-separated ascending coefficients.
        record: String,
        #[command(flatten)]
        common: Common,
        /// Pretty-print the JSON.
        #[arg(long)]
        pretty: bool,
    },
    /// Process a curve CSV file; prints one JSON line per curve and a summary line.
    Batch {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Number of curves processed concurrently.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Write here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Include wall-clock times, which makes output nondeterministic.
        #[arg(long)]
        timing: bool,
    },
    /// Recompute group-theoretic constants by brute force.
    Oracle {
        /// Enumerate all of GSp4(F_3).
        #[arg(long)]
        enumerate_f3: bool,
        /// Work partitions for the enumeration.
        #[arg(long, default_value_t = 8)]
        partitions: usize,
        /// Check exceptional pair sets for every applicable l up to this bound.
        #[arg(long, value_name = "ELL_MAX")]
        c_sets: Option<u64>,
        /// Sample uniform elements: l, count, seed.
        #[arg(long, num_args = 3, value_names = ["ELL", "COUNT", "SEED"])]
        sample: Option<Vec<u64>>,
    },
    /// Witness bound under GRH for a prime q and conductor N.
    GrhBound {
        q: u64,
        conductor: u64,
        /// Print in scientific notation instead of as an exact integer.
        #[arg(long)]
        scientific: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Witness bound for verification.
    #[arg(long, default_value_t = 1000)]
    bound: u64,
    /// Bound on auxiliary primes for the sieve.
    #[arg(long, default_value_t = 1000)]
    aux_bound: u64,
    /// Extra Hecke data, merged with the bundled table.
    #[arg(long, value_name = "PATH")]
    hecke_data: Option<PathBuf>,
    /// Ignore the bundled Hecke table.
    #[arg(long)]
    no_bundled: bool,
    /// Fetch missing Hecke data from the remote database.
    #[arg(long)]
    fetch: bool,
    /// Cache directory for fetched data.
    #[arg(long, default_value = ".abelsurf-cache")]
    cache_dir: PathBuf,
    /// Include the witness for every test.
    #[arg(long)]
    verbose: bool,
    /// Skip the exceptional tests for l > 1441.
    #[arg(long)]
    shortcut_1441: bool,
    /// Use every auxiliary prime instead of stopping once a gcd settles.
    #[arg(long)]
    no_early_exit: bool,
}

impl Common {
    fn options(&self, timing: bool) -> RunOptions {
        RunOptions {
            bound: self.bound,
            aux_bound: self.aux_bound,
            early_exit: if self.no_early_exit { EarlyExit::Never } else { EarlyExit::default() },
            verbose: self.verbose,
            shortcut_1441: self.shortcut_1441,
            timing,
        }
    }

    fn table(&self) -> Result<HeckeTable, String> {
        let mut table = if self.no_bundled { HeckeTable::new("none") } else { bundled_hecke() };
        if let Some(path) = &self.hecke_data {
            let extra = load_hecke(path).map_err(|e| format!("{}: {e}", path.display()))?;
            table.merge(&extra).map_err(|e| e.to_string())?;
        }
        Ok(table)
    }

    fn fetcher(&self) -> Option<Fetcher> {
        self.fetch.then(|| Fetcher::from_env(&self.cache_dir))
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn print_checks(checks: &[Check]) -> ExitCode {
    let passed = checks.iter().all(|c| c.passed);
    let doc = serde_json::json!({ "passed": passed, "checks": checks });
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_ORACLE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { record, common, pretty } => {
            let fields: Vec<&str> = record.split(',').collect();
            let rec = match CurveRecord::from_fields(&fields, 1) {
                Ok(r) => r,
                Err(e) => return fail(EXIT_PARSE, e),
            };
            let table = match common.table() {
                Ok(t) => t,
                Err(e) => return fail(EXIT_PARSE, e),
            };
            let report = run_curve(&rec, &table, common.fetcher().as_ref(), &common.options(true));
            let text = if pretty { serde_json::to_string_pretty(&report).unwrap() } else { report.to_json() };
            println!("{text}");
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Batch { input, common, parallel, output, timing } => {
            let records = match load_curves(&input) {
                Ok(r) => r,
                Err(e) => return fail(EXIT_PARSE, e),
            };
            let table = match common.table() {
                Ok(t) => t,
                Err(e) => return fail(EXIT_PARSE, e),
            };
            let lines = run_batch(&records, &table, common.fetcher().as_ref(), &common.options(timing), parallel);
            let mut out: Box<dyn Write> = match &output {
                Some(p) => match std::fs::File::create(p) {
                    Ok(f) => Box::new(std::io::BufWriter::new(f)),
                    Err(e) => return fail(1, format!("{}: {e}", p.display())),
                },
                None => Box::new(std::io::stdout().lock()),
            };
            for line in &lines {
                writeln!(out, "{}", line.to_json()).expect("write output");
            }
            writeln!(out, "{}", Summary::tally(&lines).to_json()).expect("write output");
            ExitCode::SUCCESS
        }
        Command::Oracle { enumerate_f3, partitions, c_sets, sample } => {
            let mut checks = Vec::new();
            if enumerate_f3 {
                checks.extend(enumerate_f3_checks(partitions));
            }
            if let Some(l) = c_sets {
                checks.extend(c_set_checks(l));
            }
            if let Some(s) = sample {
                checks.extend(sample_checks(s[0], s[1], s[2]));
            }
            if checks.is_empty() {
                return fail(EXIT_PARSE, "nothing to check; pass --enumerate-f3, --c-sets or --sample");
            }
            print_checks(&checks)
        }
        Command::GrhBound { q, conductor, scientific } => {
            if q < 2 || conductor == 0 {
                return fail(EXIT_PARSE, "q must be at least 2 and the conductor positive");
            }
            let b = grh_bound(q, conductor);
            if scientific {
                println!("{:.4e}", b as f64);
            } else {
                println!("{b}");
            }
            ExitCode::SUCCESS
        }
    }
}
