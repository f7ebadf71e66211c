//! Command-line front end.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::config::ExperimentConfig;
use super::output::{write_atomic, write_json};
use super::{cmd_cocycle, cmd_converge, cmd_renormalize, run_selftest};
use crate::error::{Error, Result};
use crate::scalar::Precision;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONNECTION: i32 = 2;
pub const EXIT_IDENTITY: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Level-by-level state dump.
    Renormalize,
    /// Exact cocycle products, identities, growth and subspaces.
    Cocycle,
    /// Distances between renormalizations and their trends.
    Converge,
    /// Exact identity suite, smoothing battery and oracle check.
    Selftest,
}

#[derive(Debug, Parser)]
#[command(name = "rauzy-lab", version, about = "Rauzy-Veech renormalization experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment configuration (JSON); optional for `selftest`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Random seed, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Orbit arithmetic: `std` (binary64) or `dd` (double-double).
    #[arg(long, global = true)]
    pub precision: Option<Precision>,
}

impl Cli {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None if self.command == Command::Selftest => ExperimentConfig::default(),
            None => return Err(Error::InvalidArgument("--config is required".into())),
        };
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(p) = self.precision {
            cfg.precision = p;
        }
        Ok(cfg)
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Connection { .. } => EXIT_CONNECTION,
        Error::IdentityViolation(_) => EXIT_IDENTITY,
        _ => EXIT_USAGE,
    }
}

fn diagnostic(e: &Error) -> String {
    match e {
        Error::Connection { level, gap } => format!("connection at level {level} (length gap {gap:e})"),
        other => other.to_string(),
    }
}

/// Runs the parsed command; returns the summary text instead of printing it.
pub fn execute(cli: &Cli) -> Result<String> {
    let cfg = cli.config()?;
    let out = cfg.out_dir();
    match cli.command {
        Command::Renormalize => {
            let r = cmd_renormalize(&cfg, &out)?;
            Ok(format!("renormalize: {} levels written to {}\n", r.levels, out.display()))
        }
        Command::Cocycle => {
            let r = cmd_cocycle(&cfg, &out)?;
            let rate = |g: &std::result::Result<crate::cocycle::Growth, String>| match g {
                Ok(g) => format!("{:.6}", g.rate),
                Err(e) => format!("n/a ({e})"),
            };
            let central = match &r.central {
                Ok(c) => c.dim.to_string(),
                Err(e) => format!("n/a ({e})"),
            };
            Ok(format!(
                "cocycle: {} steps, identities hold, forward rate {}, backward rate {}, central dimension {}\n",
                r.moves.len(),
                rate(&r.forward_growth),
                rate(&r.backward_growth),
                central
            ))
        }
        Command::Converge => {
            let r = cmd_converge(&cfg, &out)?;
            let mut s = String::new();
            for series in &r.series {
                s += &format!("{}: log-slope {:.4}, l2 bounded {}\n", series.name, series.trend.slope, series.trend.l2.bounded());
            }
            for c in &r.checks {
                s += &format!("{} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name);
            }
            Ok(s)
        }
        Command::Selftest => {
            let r = run_selftest(cfg.seed)?;
            let text = r.render();
            if cfg.out.is_some() {
                write_atomic(&out, "selftest.txt", text.as_bytes())?;
                write_json(&out, "selftest.json", &r)?;
            }
            if !r.pass() {
                return Err(Error::IdentityViolation(format!("selftest failed\n{text}")));
            }
            Ok(text)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("rauzy-lab: {}", diagnostic(&e));
            exit_code(&e)
        }
    }
}
