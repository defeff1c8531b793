use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use super::config::SimConfig;
use super::sweep::{run_sweep_with, CsvSink};
use crate::error::{Error, Result};

/// Monte-Carlo BLER and throughput sweep of one link configuration.
#[derive(Debug, Parser)]
#[command(name = "gmd-link", version)]
pub struct Cli {
    /// TOML configuration; built-in defaults when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `key=value` applied on top of the configuration (repeatable).
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Base seed, overriding the configuration.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    pub print_config: bool,
}

impl Cli {
    pub fn resolve_config(&self) -> Result<SimConfig> {
        let mut overrides = self.overrides.clone();
        if let Some(seed) = self.seed {
            overrides.push(format!("seed={seed}"));
        }
        match &self.config {
            Some(path) => SimConfig::load(path, &overrides),
            None => SimConfig::from_toml_with_overrides(&SimConfig::default().to_toml(), &overrides),
        }
    }
}

pub fn cli_main<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        // --help and --version land here too; they are not failures.
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(Error::Config(e.to_string())),
    };
    let cfg = cli.resolve_config()?;
    if cli.print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    let run = || -> Result<()> {
        let out: Box<dyn Write> = match &cli.out {
            Some(p) => Box::new(std::fs::File::create(p)?),
            None => Box::new(std::io::stdout()),
        };
        let mut sink = CsvSink::new(out);
        run_sweep_with(&cfg, |p| {
            eprintln!(
                "{:>6.2} dB  bler {:.4} [{:.4}, {:.4}]  throughput {:.3} Mbps  ({} trials)",
                p.snr_db,
                p.bler,
                p.bler_ci_lo,
                p.bler_ci_hi,
                p.throughput_bps / 1e6,
                p.trials
            );
            sink.push(p)
        })?;
        Ok(())
    };
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run),
        None => run(),
    }
}
