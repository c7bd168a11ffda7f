use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use quantcap::commands::{
    code_search_report, example_report, run_rate_curve, snr_range, synth_from_strings,
    validate_file, ExperimentConfig,
};
use quantcap::{Error, Result};

#[derive(Parser)]
#[command(name = "quantcap", version, about = "Capacity of AWGN channels with polynomial front-ends and low-resolution ADCs")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rebuild the two-quadratic ternary example and check its golden values.
    Example,
    /// Exhaustive search for the largest admissible code.
    CodeSearch {
        #[arg(long)]
        n_q: usize,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long)]
        delta: usize,
    },
    /// Achievable rate versus SNR, written as CSV.
    RateCurve {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n_q: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        delta: Option<usize>,
        /// Comma-separated SNR values in dB.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        snr: Option<Vec<f64>>,
        /// SNR range `start:stop:step` in dB.
        #[arg(long, conflicts_with = "snr")]
        snr_range: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the code of a quantizer stored as JSON.
    Validate {
        path: PathBuf,
    },
    /// Build a quantizer from a code and its transition points.
    Synth {
        /// Comma-separated codewords, e.g. `00,01,11,10,00`.
        #[arg(long)]
        code: String,
        /// Comma-separated increasing transition points.
        #[arg(long, allow_hyphen_values = true)]
        roots: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn emit<T: Serialize + std::fmt::Display>(json: bool, v: &T) -> Result<()> {
    if json {
        print_json(v)
    } else {
        println!("{v}");
        Ok(())
    }
}

fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(format!("snr range {s:?}: {e}")))?;
    match parts[..] {
        [a, b, c] => snr_range(a, b, c),
        _ => Err(Error::Parse(format!("snr range {s:?} is not start:stop:step"))),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Example => {
            let r = example_report()?;
            emit(cli.json, &r)?;
            r.check()
        }
        Cmd::CodeSearch { n_q, ell, delta } => emit(cli.json, &code_search_report(n_q, ell, delta)?),
        Cmd::RateCurve { config, n_q, ell, delta, snr, snr_range, out } => {
            let mut cfg = match config {
                Some(p) => ExperimentConfig::load(&p)?,
                None => ExperimentConfig::new(
                    n_q.unwrap_or(1),
                    ell.unwrap_or(2),
                    delta.unwrap_or(2),
                    Vec::new(),
                ),
            };
            cfg.n_q = n_q.unwrap_or(cfg.n_q);
            cfg.ell = ell.unwrap_or(cfg.ell);
            cfg.delta = delta.unwrap_or(cfg.delta);
            if let Some(s) = snr {
                cfg.snr_db = s;
            }
            if let Some(r) = snr_range {
                cfg.snr_db = parse_range(&r)?;
            }
            if out.is_some() {
                cfg.out = out;
            }
            cfg.validate()?;
            let rows = match &cfg.out {
                Some(p) => run_rate_curve(&cfg, BufWriter::new(File::create(p)?))?,
                None if cli.json => run_rate_curve(&cfg, io::sink())?,
                None => run_rate_curve(&cfg, io::stdout().lock())?,
            };
            if cli.json {
                print_json(&rows)?;
            }
            Ok(())
        }
        Cmd::Validate { path } => {
            let r = validate_file(&path)?;
            emit(cli.json, &r)?;
            if r.passed() {
                Ok(())
            } else {
                Err(Error::InvalidQuantizer("property check failed".into()))
            }
        }
        Cmd::Synth { code, roots, out } => {
            let q = synth_from_strings(&code, &roots)?;
            let text = serde_json::to_string_pretty(&q)?;
            match out {
                Some(p) => std::fs::write(p, text + "\n")?,
                None => println!("{text}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
