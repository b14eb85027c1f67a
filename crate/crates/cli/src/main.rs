use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use su3count::commands::{run, Command, OutputFormat, RunConfig, DEFAULT_DMAX, DEFAULT_NSS_D};
use su3count_core::ResidualSpace;

#[derive(Parser)]
#[command(name = "su3count", version, about = "Exact counts of SU(3) modules by dimension")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args)]
struct Common {
    /// Largest dimension tabulated or fitted.
    #[arg(long = "dmax", global = true, default_value_t = DEFAULT_DMAX)]
    d_max: u32,
    /// Single dimension for `nss`, `partitions` and `fit-ibeta`.
    #[arg(long = "d", global = true, default_value_t = DEFAULT_NSS_D)]
    d: u32,
    /// Restrict to dimensions congruent to this value mod 3.
    #[arg(long, global = true)]
    residue: Option<u8>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Append-only cache of module counts.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Cross-check results by an independent route.
    #[arg(long, global = true)]
    verify: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Irreducible module counts xi(d) for d <= dmax.
    Xi,
    /// Module totals and singlet counts for D <= dmax.
    Mod,
    /// Distribution of component counts at dimension d.
    Nss,
    /// Partitions of d into irreducible dimensions.
    Partitions,
    /// Fit Mod(n) ~ (a/n) exp(b n^c) per residue class.
    FitGrowth {
        #[arg(long, value_enum, default_value_t = Residuals::Log)]
        residuals: Residuals,
    },
    /// Fit inverted beta densities to the distribution at dimension d.
    FitIbeta,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Residuals {
    Log,
    Linear,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    let (command, residuals) = match cli.command {
        Cmd::Xi => (Command::Xi, Residuals::Log),
        Cmd::Mod => (Command::Mod, Residuals::Log),
        Cmd::Nss => (Command::Nss, Residuals::Log),
        Cmd::Partitions => (Command::Partitions, Residuals::Log),
        Cmd::FitGrowth { residuals } => (Command::FitGrowth, residuals),
        Cmd::FitIbeta => (Command::FitIbeta, Residuals::Log),
    };
    let c = cli.common;
    let config = RunConfig {
        command,
        d_max: c.d_max,
        d: c.d,
        residue: c.residue,
        format: c.format.map(|f| match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }),
        cache_path: c.cache,
        verify: c.verify,
        residuals: match residuals {
            Residuals::Log => ResidualSpace::Log,
            Residuals::Linear => ResidualSpace::Linear,
        },
    };
    let outcome = run(&config)?;
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    match &c.out {
        Some(path) => std::fs::write(path, &outcome.output).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(&outcome.output)?,
    }
    Ok(outcome.success)
}
