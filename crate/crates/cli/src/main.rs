//! `pzeta`: reproduction harness for the prime zeta expansion coefficients.
//!
//! Exit codes: 0 success, 1 internal failure, 2 domain error (bad arguments
//! or out-of-domain evaluation points), 3 verification failure.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use primezeta::alpha::{alpha_table_mobius, AlphaEntry, AlphaMethod, AlphaTable};
use primezeta::checks::{report_csv, run_battery, VerifyConfig};
use primezeta::empirical::{alpha_integral, default_checkpoints, limit_estimate, mertens_series};
use primezeta::pzeta::{
    prime_zeta_direct, prime_zeta_mobius, prime_zeta_remainder_integral, prime_zeta_series,
};
use primezeta::real::{PrecisionPolicy, Real};
use primezeta::sieve::PrimeSieve;
use primezeta::stieltjes::{Provenance, StieltjesTable, BUNDLED_DIGITS};
use primezeta::Error;

use crate::config::RunConfig;
use crate::output::{alpha_rows, value_row, Format};

#[derive(Parser)]
#[command(name = "pzeta", version, about = "Prime zeta function P(s) near s = 1: coefficients, evaluation, verification")]
struct Cli {
    /// Target decimal digits (default 30)
    #[arg(long, global = true)]
    digits: Option<u32>,

    /// Prime sieve limit (default 10^8)
    #[arg(long, global = true)]
    sieve_limit: Option<u64>,

    /// Output format (default text)
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Config file of key=value lines ('#' comments); flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Expansion coefficients alpha_0..alpha_n by the chosen route
    Alpha {
        /// Highest coefficient index
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// mobius (precision route), limit (prime sums), integral
        #[arg(long, value_enum, default_value_t = MethodArg::Mobius)]
        method: MethodArg,
        /// Prime-sum truncation for --method limit (default: sieve limit)
        #[arg(long)]
        x_max: Option<u64>,
        /// Integral truncation for --method integral (default 10^6)
        #[arg(long = "T", value_name = "T")]
        t: Option<u64>,
        /// Write the per-checkpoint convergence CSV here (limit route)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate P(s) at a real point s > 1
    Primezeta {
        /// Evaluation point (decimal literal)
        #[arg(long)]
        s: String,
        /// direct, mobius, series, or integral (remainder continuation)
        #[arg(long, value_enum, default_value_t = PzMethodArg::Mobius)]
        method: PzMethodArg,
        /// Series truncation order for --method series
        #[arg(long, default_value_t = 10)]
        terms: usize,
        /// Integral truncation for --method integral (default 10^6)
        #[arg(long = "T", value_name = "T")]
        t: Option<u64>,
    },
    /// Run the full cross-validation battery
    Verify {
        /// Write the check report CSV here
        #[arg(long)]
        report: Option<PathBuf>,
        /// Replace the bundled Stieltjes table with this file
        #[arg(long)]
        stieltjes_file: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodArg {
    Mobius,
    Limit,
    Integral,
}

#[derive(Copy, Clone, ValueEnum)]
enum PzMethodArg {
    Direct,
    Mobius,
    Series,
    Integral,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_domain() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> primezeta::Result<ExitCode> {
    let cfg = RunConfig::resolve(
        cli.config.as_deref(),
        cli.digits,
        cli.sieve_limit,
        cli.format.map(|f| match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }),
    )?;
    let policy = PrecisionPolicy::new(cfg.digits);

    match cli.command {
        Command::Alpha { n_max, method, x_max, t, report } => {
            let table = match method {
                MethodArg::Mobius => alpha_table_mobius(n_max, policy)?,
                MethodArg::Limit => {
                    let x_max = x_max.unwrap_or(cfg.sieve_limit);
                    if x_max > cfg.sieve_limit {
                        return Err(Error::domain("alpha --limit", "--x-max exceeds --sieve-limit"));
                    }
                    let sieve = PrimeSieve::build(x_max)?;
                    let mut table = AlphaTable::default();
                    for n in 0..=n_max {
                        let (value, tolerance) = limit_estimate(n, x_max, &sieve, policy)?;
                        table.insert(AlphaEntry {
                            n,
                            value,
                            method: AlphaMethod::Limit,
                            truncation: None,
                            tolerance,
                        });
                    }
                    if let Some(path) = &report {
                        let mut csv = String::new();
                        for n in 0..=n_max {
                            let series = mertens_series(n, &default_checkpoints(x_max), &sieve, policy)?;
                            let body = series.to_csv();
                            if n == 0 {
                                csv.push_str(&body);
                            } else {
                                // keep a single header
                                csv.push_str(body.split_once('\n').map(|x| x.1).unwrap_or(""));
                            }
                        }
                        std::fs::write(path, csv)?;
                    }
                    table
                }
                MethodArg::Integral => {
                    let t = t.unwrap_or(1_000_000).min(cfg.sieve_limit);
                    let sieve = PrimeSieve::build(t)?;
                    let mut table = AlphaTable::default();
                    for n in 0..=n_max {
                        let est = alpha_integral(n, t, &sieve, policy)?;
                        table.insert(AlphaEntry {
                            n,
                            value: est.value,
                            method: AlphaMethod::Integral,
                            truncation: None,
                            tolerance: est.tail_model,
                        });
                    }
                    table
                }
            };
            print!("{}", alpha_rows(&table, cfg.format));
            Ok(ExitCode::SUCCESS)
        }

        Command::Primezeta { s, method, terms, t } => {
            let s = Real::parse(&s, policy)?;
            let value = match method {
                PzMethodArg::Direct => {
                    let sieve = PrimeSieve::build(cfg.sieve_limit)?;
                    prime_zeta_direct(&s, policy, &sieve)?
                }
                PzMethodArg::Mobius => prime_zeta_mobius(&s, policy)?,
                PzMethodArg::Series => {
                    let table = alpha_table_mobius(terms + 1, policy)?;
                    prime_zeta_series(&s, &table, terms, policy)?
                }
                PzMethodArg::Integral => {
                    let t = t.unwrap_or(1_000_000).min(cfg.sieve_limit);
                    let sieve = PrimeSieve::build(t)?;
                    prime_zeta_remainder_integral(&s, t, &sieve, policy)?
                }
            };
            print!("{}", value_row(&value, cfg.format));
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { report, stieltjes_file } => {
            let stieltjes_override = match stieltjes_file {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)?;
                    match StieltjesTable::parse(&text, Provenance::External, BUNDLED_DIGITS, policy) {
                        Ok(t) => Some(t),
                        Err(e) => {
                            // a table that fails to load is itself a failed check
                            eprintln!("stieltjes file rejected: {e}");
                            let row = "check,expected,actual,residual,tolerance,pass\n\
                                       stieltjes_load,valid table,rejected,,,false\n";
                            if let Some(path) = &report {
                                std::fs::write(path, row)?;
                            }
                            println!("FAIL stieltjes_load ({e})");
                            println!("1 check run, 1 failed");
                            return Ok(ExitCode::from(3));
                        }
                    }
                }
                None => None,
            };
            let vcfg = VerifyConfig {
                policy,
                sieve_limit: cfg.sieve_limit,
                stieltjes_override,
                ..Default::default()
            };
            let results = run_battery(&vcfg)?;
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                if r.residual.is_empty() {
                    println!("{status} {} (actual={})", r.name, r.actual);
                } else {
                    println!(
                        "{status} {} (residual={}, tolerance={})",
                        r.name, r.residual, r.tolerance
                    );
                }
            }
            let failed = results.iter().filter(|r| !r.pass).count();
            println!("{} checks run, {} failed", results.len(), failed);
            if let Some(path) = &report {
                std::fs::write(path, report_csv(&results))?;
            }
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
    }
}
