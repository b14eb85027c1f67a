//! Subcommand implementations. Each returns the rendered output and whether
//! every requested computation and check succeeded.

use std::path::PathBuf;

use rayon::prelude::*;
use su3count_core::{
    build_census, enumerate_restricted, fit_growth, fit_invbeta, module_counts,
    xi_bruteforce, DimensionCensus, FitConfig, FitError, GfTable, ModError, ModuleCounts,
    ExactFraction, ResidualSpace, SeriesPoints, SeriesValue,
};
use num_bigint::BigUint;


use crate::cache::{decode_module_counts, encode_module_counts, module_counts_key, Cache};
use crate::formats::{
    nss_rows, report_to_json, write_csv_with_header, write_partitions, FitReport, ModRow, XiRow,
    MOD_HEADER, NSS_HEADER, XI_HEADER,
};

pub const DEFAULT_DMAX: u32 = 110;
pub const DEFAULT_NSS_D: u32 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Xi,
    Mod,
    Nss,
    Partitions,
    FitGrowth,
    FitIbeta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub d_max: u32,
    pub d: u32,
    pub residue: Option<u8>,
    pub format: Option<OutputFormat>,
    pub cache_path: Option<PathBuf>,
    pub verify: bool,
    pub residuals: ResidualSpace,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            d_max: DEFAULT_DMAX,
            d: DEFAULT_NSS_D,
            residue: None,
            format: None,
            cache_path: None,
            verify: false,
            residuals: ResidualSpace::Log,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Count(#[from] ModError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Rendered output plus overall status.
#[derive(Debug)]
pub struct Outcome {
    pub output: Vec<u8>,
    pub success: bool,
    /// Human-readable notes for stderr (verification results, warnings).
    pub notes: Vec<String>,
}

fn validate(config: &RunConfig) -> Result<(), CliError> {
    if config.d_max == 0 || config.d == 0 {
        return Err(CliError::Config("--dmax and --d must be at least 1".into()));
    }
    if let Some(r) = config.residue {
        if r > 2 {
            return Err(CliError::Config("--residue must be 0, 1 or 2".into()));
        }
        if !matches!(config.command, Command::Mod | Command::FitGrowth) {
            return Err(CliError::Config("--residue applies only to `mod` and `fit-growth`".into()));
        }
    }
    if matches!(config.command, Command::FitGrowth | Command::FitIbeta) && config.format == Some(OutputFormat::Csv) {
        return Err(CliError::Config("fit reports are JSON only".into()));
    }
    if config.command == Command::Partitions && config.format == Some(OutputFormat::Json) {
        return Err(CliError::Config("partition lists are plain text only".into()));
    }
    Ok(())
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    validate(config)?;
    let mut cache = match &config.cache_path {
        Some(p) => Some(Cache::open(p)?),
        None => None,
    };
    let mut notes = Vec::new();
    if let Some(c) = &cache {
        if c.discarded() > 0 {
            notes.push(format!("cache: discarded {} corrupt entries", c.discarded()));
        }
    }
    let format = config.format.unwrap_or(match config.command {
        Command::FitGrowth | Command::FitIbeta => OutputFormat::Json,
        _ => OutputFormat::Csv,
    });
    let mut output = Vec::new();
    let success = match config.command {
        Command::Xi => cmd_xi(config, format, &mut output, &mut notes)?,
        Command::Mod => cmd_mod(config, format, cache.as_mut(), &mut output, &mut notes)?,
        Command::Nss => cmd_nss(config, format, cache.as_mut(), &mut output, &mut notes)?,
        Command::Partitions => cmd_partitions(config, &mut output)?,
        Command::FitGrowth => cmd_fit_growth(config, cache.as_mut(), &mut output, &mut notes)?,
        Command::FitIbeta => cmd_fit_ibeta(config, cache.as_mut(), &mut output, &mut notes)?,
    };
    Ok(Outcome { output, success, notes })
}

fn write_json(value: &impl serde::Serialize, out: &mut Vec<u8>) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.push(b'\n');
    Ok(())
}

fn cmd_xi(config: &RunConfig, format: OutputFormat, out: &mut Vec<u8>, notes: &mut Vec<String>) -> Result<bool, CliError> {
    let census = build_census(config.d_max);
    let rows: Vec<XiRow> = census.rows().map(|(dimension, xi)| XiRow { dimension, xi }).collect();
    match format {
        OutputFormat::Csv => write_csv_with_header(&rows, XI_HEADER, &mut *out)?,
        OutputFormat::Json => write_json(&rows, out)?,
    }
    if !config.verify {
        return Ok(true);
    }
    let mut ok = census.closed_form_mismatches().is_empty();
    for &d in census.closed_form_mismatches() {
        notes.push(format!("verify: closed form disagrees with the diagram sweep at d = {d}"));
    }
    let scan_mismatches = (1..=config.d_max)
        .into_par_iter()
        .filter(|&d| census.count(d) != Some(xi_bruteforce(d as u64)))
        .count();
    if scan_mismatches > 0 {
        ok = false;
        notes.push(format!("verify: {scan_mismatches} dimensions disagree with the per-dimension scan"));
    }
    if ok {
        notes.push(format!("verify: xi(d) closed form matches brute force for all d <= {}", config.d_max));
    }
    Ok(ok)
}

/// Module counts for every `D` in `dims`, from the cache where possible.
/// Missing entries are computed in parallel and written back in `D` order.
fn counts_for(
    dims: &[u32],
    census: &DimensionCensus,
    mut cache: Option<&mut Cache>,
) -> Result<Vec<ModuleCounts>, CliError> {
    let cached: Vec<Option<ModuleCounts>> = dims
        .iter()
        .map(|&d| {
            cache
                .as_deref()
                .and_then(|c| c.get(&module_counts_key(d)))
                .and_then(|s| decode_module_counts(d, s))
        })
        .collect();
    let computed: Vec<Result<ModuleCounts, ModError>> = dims
        .par_iter()
        .zip(&cached)
        .map(|(&d, hit)| match hit {
            Some(m) => Ok(m.clone()),
            None => module_counts(d, census),
        })
        .collect();
    let mut out = Vec::with_capacity(dims.len());
    for (m, hit) in computed.into_iter().zip(&cached) {
        let m = m?;
        if hit.is_none() {
            if let Some(c) = cache.as_deref_mut() {
                c.put(&module_counts_key(m.dimension), &encode_module_counts(&m))?;
            }
        }
        out.push(m);
    }
    Ok(out)
}

fn dims_upto(d_max: u32, residue: Option<u8>) -> Vec<u32> {
    (1..=d_max).filter(|d| residue.is_none_or(|r| d % 3 == r as u32)).collect()
}

/// Compares enumeration results against the generating-function table.
fn verify_against_gf(counts: &[ModuleCounts], census: &DimensionCensus, notes: &mut Vec<String>) -> Result<bool, CliError> {
    let Some(top) = counts.iter().map(|m| m.dimension).max() else {
        return Ok(true);
    };
    let table = GfTable::build(top, census)?;
    let mut ok = true;
    for m in counts {
        let d = m.dimension;
        let singlet = table.singlet(d, census)?;
        if m.total != table.total(d) || m.singlet != singlet || m.by_components.as_slice() != table.row(d) {
            ok = false;
            notes.push(format!("verify: enumeration and generating function disagree at D = {d}"));
        }
    }
    if ok {
        notes.push(format!("verify: enumeration matches generating function for {} dimensions", counts.len()));
    }
    Ok(ok)
}

fn cmd_mod(
    config: &RunConfig,
    format: OutputFormat,
    cache: Option<&mut Cache>,
    out: &mut Vec<u8>,
    notes: &mut Vec<String>,
) -> Result<bool, CliError> {
    let census = build_census(config.d_max);
    let counts = counts_for(&dims_upto(config.d_max, config.residue), &census, cache)?;
    let rows: Vec<ModRow> = counts.iter().map(ModRow::from_counts).collect();
    match format {
        OutputFormat::Csv => write_csv_with_header(&rows, MOD_HEADER, &mut *out)?,
        OutputFormat::Json => write_json(&rows, out)?,
    }
    if config.verify {
        verify_against_gf(&counts, &census, notes)
    } else {
        Ok(true)
    }
}

fn cmd_nss(
    config: &RunConfig,
    format: OutputFormat,
    cache: Option<&mut Cache>,
    out: &mut Vec<u8>,
    notes: &mut Vec<String>,
) -> Result<bool, CliError> {
    let census = build_census(config.d);
    let counts = counts_for(&[config.d], &census, cache)?;
    let dist = counts[0].nss_distribution();
    let rows = nss_rows(&dist);
    match format {
        OutputFormat::Csv => write_csv_with_header(&rows, NSS_HEADER, &mut *out)?,
        OutputFormat::Json => write_json(&rows, out)?,
    }
    if !config.verify {
        return Ok(true);
    }
    let mut ok = verify_against_gf(&counts, &census, notes)?;
    let sum: ExactFraction = (1..=config.d).map(|n| dist.weight(n)).sum();
    if sum != ExactFraction::from_integer(BigUint::from(1u32)) {
        ok = false;
        notes.push(format!("verify: weights sum to {sum}, not 1"));
    } else {
        notes.push("verify: weights sum to exactly 1".to_string());
    }
    Ok(ok)
}

fn cmd_partitions(config: &RunConfig, out: &mut Vec<u8>) -> Result<bool, CliError> {
    let census = build_census(config.d);
    write_partitions(enumerate_restricted(config.d, &census.support_set(), config.d), &mut *out)?;
    Ok(true)
}

fn cmd_fit_growth(
    config: &RunConfig,
    cache: Option<&mut Cache>,
    out: &mut Vec<u8>,
    notes: &mut Vec<String>,
) -> Result<bool, CliError> {
    let census = build_census(config.d_max);
    let counts = counts_for(&dims_upto(config.d_max, config.residue), &census, cache)?;
    let fit_config = FitConfig { growth_residuals: config.residuals, ..FitConfig::default() };
    let classes: Vec<u8> = match config.residue {
        Some(r) => vec![r],
        None => vec![0, 1, 2],
    };
    let mut reports = Vec::new();
    let mut ok = true;
    for r in classes {
        let points = counts
            .iter()
            .filter(|m| m.dimension % 3 == r as u32)
            .map(|m| (m.dimension, SeriesValue::Exact(ExactFraction::from_integer(m.total.clone()))))
            .collect();
        let series = SeriesPoints::new(points, Some(r)).expect("dimensions ascend within one class");
        let report = match fit_growth(&series, &fit_config) {
            Ok(fit) => FitReport::growth(&fit, true),
            Err(FitError::NotConverged { best }) => {
                ok = false;
                notes.push(format!("fit-growth: residue {r} did not converge"));
                FitReport::growth(&best, false)
            }
            Err(e) => {
                ok = false;
                notes.push(format!("fit-growth: residue {r}: {e}"));
                continue;
            }
        };
        reports.push(report_to_json(&report));
    }
    if config.residue.is_some() && reports.len() == 1 {
        write_json(&reports[0], out)?;
    } else {
        write_json(&reports, out)?;
    }
    Ok(ok)
}

fn cmd_fit_ibeta(
    config: &RunConfig,
    cache: Option<&mut Cache>,
    out: &mut Vec<u8>,
    notes: &mut Vec<String>,
) -> Result<bool, CliError> {
    let census = build_census(config.d);
    let counts = counts_for(&[config.d], &census, cache)?;
    let dist = counts[0].nss_distribution();
    let (fits, ok) = match fit_invbeta(&dist, &FitConfig::default()) {
        Ok(f) => (f, true),
        Err(FitError::NotConverged { best }) => {
            notes.push("fit-ibeta: optimizer did not converge".to_string());
            (best, false)
        }
        Err(e) => {
            notes.push(format!("fit-ibeta: {e}"));
            write_json(&Vec::<serde_json::Value>::new(), out)?;
            return Ok(false);
        }
    };
    let reports = [
        report_to_json(&FitReport::invbeta(&fits.scaled, config.d, ok)),
        report_to_json(&FitReport::invbeta(&fits.unscaled, config.d, ok)),
    ];
    write_json(&reports, out)?;
    Ok(ok)
}
