//! On-disk formats: CSV tables, partition lists and JSON fit reports.
//!
//! Exact counts are always written as decimal strings and exact fractions as
//! `num/den`. Floats appear only as `%.17g`-style decimals.

use std::io::{self, BufRead, Read, Write};

use num_bigint::BigUint;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use su3count_core::{
    ratio_to_f64, ExactFraction, FitConfig, GrowthFit, InvBetaFit, ModuleCounts, NssDistribution,
    Partition, ResidualSpace, GROWTH_START,
};

/// Formats `x` with 17 significant digits, trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (16 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn format_fraction(r: &ExactFraction) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// One census row, `dimension,xi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiRow {
    pub dimension: u32,
    pub xi: u64,
}

/// One row of the module table,
/// `D,mod_total,mod_singlet,singlet_fraction_exact,singlet_fraction_float`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModRow {
    #[serde(rename = "D")]
    pub dimension: u32,
    pub mod_total: String,
    pub mod_singlet: String,
    pub singlet_fraction_exact: String,
    pub singlet_fraction_float: String,
}

impl ModRow {
    pub fn from_counts(m: &ModuleCounts) -> Self {
        let frac = m.singlet_fraction();
        Self {
            dimension: m.dimension,
            mod_total: m.total.to_string(),
            mod_singlet: m.singlet.to_string(),
            singlet_fraction_exact: format_fraction(&frac),
            singlet_fraction_float: format_float(ratio_to_f64(&frac)),
        }
    }
}

/// One row of a component-count distribution, `d,N,count,fraction_float`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NssRow {
    pub d: u32,
    #[serde(rename = "N")]
    pub components: u32,
    pub count: String,
    pub fraction_float: String,
}

/// Rows for every `N` with a nonzero count.
pub fn nss_rows(dist: &NssDistribution) -> Vec<NssRow> {
    dist.nonzero()
        .map(|(n, count, weight)| NssRow {
            d: dist.dimension(),
            components: n,
            count: count.to_string(),
            fraction_float: format_float(ratio_to_f64(&weight)),
        })
        .collect()
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the header line even when `rows` is empty.
pub fn write_csv_with_header<T: Serialize, W: Write>(rows: &[T], header: &[&str], mut out: W) -> Result<(), csv::Error> {
    if rows.is_empty() {
        writeln!(out, "{}", header.join(","))?;
        return Ok(());
    }
    write_csv(rows, out)
}

pub fn read_csv<T: DeserializeOwned, R: Read>(input: R) -> Result<Vec<T>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub const XI_HEADER: &[&str] = &["dimension", "xi"];
pub const MOD_HEADER: &[&str] = &["D", "mod_total", "mod_singlet", "singlet_fraction_exact", "singlet_fraction_float"];
pub const NSS_HEADER: &[&str] = &["d", "N", "count", "fraction_float"];

/// One partition per line, parts joined with `+`.
pub fn write_partitions<I, W>(partitions: I, mut out: W) -> io::Result<u64>
where
    I: IntoIterator<Item = Partition>,
    W: Write,
{
    let mut n = 0;
    for p in partitions {
        writeln!(out, "{p}")?;
        n += 1;
    }
    Ok(n)
}

pub fn read_partitions<R: BufRead>(input: R) -> io::Result<Vec<Partition>> {
    let bad = |line: &str| io::Error::new(io::ErrorKind::InvalidData, format!("bad partition line {line:?}"));
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line == "0" {
            out.push(Partition::empty());
            continue;
        }
        let parts = line
            .split('+')
            .map(|p| p.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad(&line))?;
        out.push(Partition::new(parts).map_err(|_| bad(&line))?);
    }
    Ok(out)
}

/// Optimizer settings as written into a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub initialization: Vec<(String, f64)>,
    pub tolerance: f64,
    pub iteration_budget: usize,
    pub max_restarts: usize,
    pub initial_step: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residuals: Option<String>,
}

impl ReportConfig {
    fn new(config: &FitConfig, initialization: Vec<(String, f64)>) -> Self {
        Self {
            initialization,
            tolerance: config.tolerance,
            iteration_budget: config.max_iterations,
            max_restarts: config.max_restarts,
            initial_step: config.initial_step,
            residuals: None,
        }
    }
}

/// A self-describing fit record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: String,
    pub parameters: Vec<(String, f64)>,
    pub ssr: f64,
    pub delta_f: Option<f64>,
    pub points_used: String,
    pub converged: bool,
    pub iterations: usize,
    pub config: ReportConfig,
}

fn named(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

impl FitReport {
    pub fn growth(fit: &GrowthFit, converged: bool) -> Self {
        let (a, b, c) = GROWTH_START;
        let mut config = ReportConfig::new(&fit.config, named(&[("a", a), ("b", b), ("c", c)]));
        config.residuals = Some(
            match fit.config.growth_residuals {
                ResidualSpace::Log => "log",
                ResidualSpace::Linear => "linear",
            }
            .to_string(),
        );
        Self {
            model: "growth: Mod(n) ~ (a/n) exp(b n^c)".to_string(),
            parameters: named(&[("a", fit.a), ("b", fit.b), ("c", fit.c)]),
            ssr: fit.ssr,
            delta_f: None,
            points_used: fit.points_used.to_string(),
            converged,
            iterations: fit.iterations,
            config,
        }
    }

    pub fn invbeta(fit: &InvBetaFit, d: u32, converged: bool) -> Self {
        let (alpha0, beta0, scale0) = fit.start;
        let mut start = named(&[("alpha", alpha0), ("beta", beta0)]);
        let mut parameters = named(&[("alpha", fit.alpha), ("beta", fit.beta)]);
        if fit.scaled {
            start.push(("scale".to_string(), scale0));
            parameters.push(("scale".to_string(), fit.scale));
        }
        Self {
            model: if fit.scaled {
                "inverted_beta_scaled: f(N) = s^-1 x^(alpha-1) (1+x)^(-alpha-beta) / B(alpha,beta), x = N/s"
            } else {
                "inverted_beta: f(N) = N^(alpha-1) (1+N)^(-alpha-beta) / B(alpha,beta)"
            }
            .to_string(),
            parameters,
            ssr: fit.ssr,
            delta_f: Some(fit.delta_f),
            points_used: format!("{d} points, N in [1, {d}], f_{d}(N) exact fractions"),
            converged,
            iterations: fit.iterations,
            config: ReportConfig::new(&fit.config, start),
        }
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }
}

/// Serializes a report with parameters as JSON objects in insertion order.
pub fn report_to_json(report: &FitReport) -> serde_json::Value {
    use serde_json::{json, Map, Value};
    let object = |pairs: &[(String, f64)]| -> Value {
        Value::Object(pairs.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<Map<_, _>>())
    };
    let mut config = json!({
        "initialization": object(&report.config.initialization),
        "tolerance": report.config.tolerance,
        "iteration_budget": report.config.iteration_budget,
        "max_restarts": report.config.max_restarts,
        "initial_step": report.config.initial_step,
    });
    if let Some(r) = &report.config.residuals {
        config["residuals"] = json!(r);
    }
    json!({
        "model": report.model,
        "parameters": object(&report.parameters),
        "ssr": report.ssr,
        "delta_f": report.delta_f,
        "points_used": report.points_used,
        "converged": report.converged,
        "iterations": report.iterations,
        "config": config,
    })
}

/// Parses a count written by this crate.
pub fn parse_count(s: &str) -> Option<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}
