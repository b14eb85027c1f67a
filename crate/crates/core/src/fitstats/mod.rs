//! Model fits to the exact counts.
//!
//! * growth of the module count, `Mod(n) ~ (a / n) exp(b n^c)`, fitted on
//!   log values;
//! * the inverted beta density `x^(a-1) (1 + x)^(-a-b) / B(a, b)`, optionally
//!   rescaled, fitted to the component-count distribution;
//! * the mean absolute deviation `delta_f` between exact fractions and a model.
//!
//! Both fitters run a derivative-free simplex search from a fixed starting
//! point, so identical inputs always give identical parameters.

mod simplex;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;

use crate::irreps::DimensionCensus;
use crate::modcount::{module_counts, ratio_to_f64, ExactFraction, ModError, NssDistribution};

/// Optimizer settings recorded with every fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitConfig {
    pub max_iterations: usize,
    /// Convergence tolerance on the spread of objective values across the
    /// simplex, relative to `1 + |best value|`.
    pub tolerance: f64,
    pub max_restarts: usize,
    /// Edge of the initial simplex, in log-parameter coordinates.
    pub initial_step: f64,
    /// Where the growth fit measures residuals.
    pub growth_residuals: ResidualSpace,
}

/// Residuals of the growth fit: on `log y` or on `y` itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ResidualSpace {
    #[default]
    Log,
    Linear,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50_000,
            tolerance: 1e-12,
            max_restarts: 25,
            initial_step: 0.1,
            growth_residuals: ResidualSpace::Log,
        }
    }
}

impl FitConfig {
    fn settings(&self) -> simplex::Settings {
        simplex::Settings {
            max_iterations: self.max_iterations,
            f_tolerance: self.tolerance,
            max_restarts: self.max_restarts,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FitError<T = ()> {
    InvalidParameter { name: &'static str, value: f64 },
    TooFewPoints { needed: usize, got: usize },
    NonPositiveValue { x: u32 },
    /// The iteration budget ran out; `best` is the last incumbent.
    NotConverged { best: T },
}

impl<T> fmt::Display for FitError<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::InvalidParameter { name, value } => write!(f, "parameter {name} must be positive, got {value}"),
            FitError::TooFewPoints { needed, got } => write!(f, "need at least {needed} points, got {got}"),
            FitError::NonPositiveValue { x } => write!(f, "value at x = {x} is not positive"),
            FitError::NotConverged { .. } => f.write_str("optimizer did not converge within its iteration budget"),
        }
    }
}

#[cfg(feature = "std")]
impl<T: fmt::Debug> std::error::Error for FitError<T> {}

/// A y value: exact when it comes from counting, real for synthetic data.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesValue {
    Exact(ExactFraction),
    Real(f64),
}

impl SeriesValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            SeriesValue::Exact(r) => ratio_to_f64(r),
            SeriesValue::Real(v) => *v,
        }
    }
}

/// `(x, y)` points with strictly increasing `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPoints {
    points: Vec<(u32, SeriesValue)>,
    residue_class: Option<u8>,
}

/// Points were not strictly increasing in `x`, or did not all lie in the
/// stated residue class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvalidSeries;

impl fmt::Display for InvalidSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("series x values must increase strictly and match the residue class")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for InvalidSeries {}

impl SeriesPoints {
    pub fn new(points: Vec<(u32, SeriesValue)>, residue_class: Option<u8>) -> Result<Self, InvalidSeries> {
        let ordered = points.windows(2).all(|w| w[0].0 < w[1].0);
        let in_class = match residue_class {
            Some(r) => r < 3 && points.iter().all(|(x, _)| x % 3 == r as u32),
            None => true,
        };
        if !ordered || !in_class {
            return Err(InvalidSeries);
        }
        Ok(Self { points, residue_class })
    }

    /// Real-valued points, for synthetic data.
    pub fn from_reals<I: IntoIterator<Item = (u32, f64)>>(points: I) -> Result<Self, InvalidSeries> {
        Self::new(points.into_iter().map(|(x, y)| (x, SeriesValue::Real(y))).collect(), None)
    }

    pub fn points(&self) -> &[(u32, SeriesValue)] {
        &self.points
    }

    pub fn residue_class(&self) -> Option<u8> {
        self.residue_class
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn describe(&self) -> PointsUsed {
        PointsUsed {
            count: self.points.len(),
            x_min: self.points.first().map_or(0, |p| p.0),
            x_max: self.points.last().map_or(0, |p| p.0),
            residue_class: self.residue_class,
        }
    }
}

/// Which points entered a fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointsUsed {
    pub count: usize,
    pub x_min: u32,
    pub x_max: u32,
    pub residue_class: Option<u8>,
}

impl fmt::Display for PointsUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} points, x in [{}, {}]", self.count, self.x_min, self.x_max)?;
        if let Some(r) = self.residue_class {
            write!(f, ", x = {r} (mod 3)")?;
        }
        Ok(())
    }
}

/// Points `(D, Mod1(D) / Mod(D))` for `D <= d_max` with `D = residue (mod 3)`.
pub fn singlet_series(census: &DimensionCensus, d_max: u32, residue: u8) -> Result<SeriesPoints, ModError> {
    class_series(census, d_max, residue, |m| m.singlet_fraction())
}

/// Points `(D, Mod(D))` for `D <= d_max` with `D = residue (mod 3)`.
pub fn mod_series(census: &DimensionCensus, d_max: u32, residue: u8) -> Result<SeriesPoints, ModError> {
    class_series(census, d_max, residue, |m| Ratio::from_integer(m.total.clone()))
}

fn class_series(
    census: &DimensionCensus,
    d_max: u32,
    residue: u8,
    value: impl Fn(&crate::modcount::ModuleCounts) -> ExactFraction,
) -> Result<SeriesPoints, ModError> {
    let residue = residue % 3;
    let mut points = Vec::new();
    for d in (1..=d_max).filter(|d| d % 3 == residue as u32) {
        let counts = module_counts(d, census)?;
        points.push((d, SeriesValue::Exact(value(&counts))));
    }
    Ok(SeriesPoints { points, residue_class: Some(residue) })
}

/// Parameters of `Mod(n) ~ (a / n) exp(b n^c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Sum of squared residuals, in the space named by
    /// `config.growth_residuals`.
    pub ssr: f64,
    pub points_used: PointsUsed,
    pub iterations: usize,
    pub config: FitConfig,
}

/// Starting point of the growth fit, modelled on the unrestricted partition
/// asymptotics.
pub const GROWTH_START: (f64, f64, f64) = (0.1, 2.5, 0.5);

impl GrowthFit {
    pub fn eval(&self, n: f64) -> f64 {
        self.a / n * libm::exp(self.b * libm::pow(n, self.c))
    }
}

fn growth_log_model(log_params: &[f64], x: f64) -> f64 {
    let (ln_a, b, c) = (log_params[0], libm::exp(log_params[1]), libm::exp(log_params[2]));
    ln_a - libm::log(x) + b * libm::pow(x, c)
}

/// Fits `(a, b, c)` by least squares on `log y`.
pub fn fit_growth(points: &SeriesPoints, config: &FitConfig) -> Result<GrowthFit, FitError<GrowthFit>> {
    if points.len() < 4 {
        return Err(FitError::TooFewPoints { needed: 4, got: points.len() });
    }
    let mut data = Vec::with_capacity(points.len());
    for (x, y) in points.points() {
        let y = y.to_f64();
        if !(y > 0.0) || *x == 0 {
            return Err(FitError::NonPositiveValue { x: *x });
        }
        data.push((*x as f64, y));
    }
    let space = config.growth_residuals;
    let objective = |p: &[f64]| -> f64 {
        data.iter()
            .map(|&(x, y)| {
                let r = match space {
                    ResidualSpace::Log => libm::log(y) - growth_log_model(p, x),
                    ResidualSpace::Linear => y - libm::exp(growth_log_model(p, x)),
                };
                r * r
            })
            .sum()
    };
    let (a0, b0, c0) = GROWTH_START;
    let start = [libm::log(a0), libm::log(b0), libm::log(c0)];
    let step = [config.initial_step; 3];
    let out = simplex::minimize(objective, &start, &step, &config.settings());
    let fit = GrowthFit {
        a: libm::exp(out.x[0]),
        b: libm::exp(out.x[1]),
        c: libm::exp(out.x[2]),
        ssr: out.value,
        points_used: points.describe(),
        iterations: out.iterations,
        config: *config,
    };
    if out.converged {
        Ok(fit)
    } else {
        Err(FitError::NotConverged { best: fit })
    }
}

/// `ln B(alpha, beta)` through log-Gamma.
pub fn ln_beta(alpha: f64, beta: f64) -> f64 {
    libm::lgamma(alpha) + libm::lgamma(beta) - libm::lgamma(alpha + beta)
}

fn ln_invbeta(x: f64, alpha: f64, beta: f64) -> f64 {
    (alpha - 1.0) * libm::log(x) - (alpha + beta) * libm::log1p(x) - ln_beta(alpha, beta)
}

/// Inverted beta density `x^(alpha-1) (1+x)^(-alpha-beta) / B(alpha, beta)`
/// on `x > 0`.
pub fn invbeta_pdf(x: f64, alpha: f64, beta: f64) -> Result<f64, FitError> {
    for (name, value) in [("x", x), ("alpha", alpha), ("beta", beta)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(FitError::InvalidParameter { name, value });
        }
    }
    Ok(libm::exp(ln_invbeta(x, alpha, beta)))
}

/// Something that predicts a weight at each component count.
pub trait DensityModel {
    fn density(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> DensityModel for F {
    fn density(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Inverted beta fit `s^-1 f(N / s; alpha, beta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvBetaFit {
    pub alpha: f64,
    pub beta: f64,
    /// Horizontal scale `s`; exactly 1 for the unscaled variant.
    pub scale: f64,
    pub delta_f: f64,
    pub ssr: f64,
    /// Whether `scale` was a free parameter.
    pub scaled: bool,
    pub iterations: usize,
    pub start: (f64, f64, f64),
    pub config: FitConfig,
}

impl DensityModel for InvBetaFit {
    fn density(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        libm::exp(ln_invbeta(x / self.scale, self.alpha, self.beta)) / self.scale
    }
}

/// Both inverted beta fits of one distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct InvBetaFits {
    pub scaled: InvBetaFit,
    pub unscaled: InvBetaFit,
}

/// Mean absolute deviation `(1/d) sum_N |f_d(N) - model(N)|` over
/// `N = 1..=d`, with `f_d(N) = 0` where no module has `N` components.
pub fn delta_f<M: DensityModel + ?Sized>(dist: &NssDistribution, model: &M) -> f64 {
    let points: Vec<(f64, f64)> = (1..=dist.dimension())
        .map(|n| (n as f64, ratio_to_f64(&dist.weight(n))))
        .collect();
    delta_f_points(&points, dist.dimension(), model)
}

/// `delta_f` over explicit `(x, y)` points, normalized by `d`.
pub fn delta_f_points<M: DensityModel + ?Sized>(points: &[(f64, f64)], d: u32, model: &M) -> f64 {
    let mut deviations: Vec<f64> = points.iter().map(|&(x, y)| (y - model.density(x)).abs()).collect();
    // summing in sorted order makes the result independent of point order
    deviations.sort_by(f64::total_cmp);
    deviations.iter().sum::<f64>() / d as f64
}

/// Moment-matched unscaled start: mean `alpha / (beta - 1)` and the
/// matching variance.
fn moment_start(weights: &[(f64, f64)]) -> (f64, f64) {
    let mass: f64 = weights.iter().map(|w| w.1).sum();
    let mean = weights.iter().map(|&(x, w)| x * w).sum::<f64>() / mass;
    let var = weights.iter().map(|&(x, w)| (x - mean) * (x - mean) * w).sum::<f64>() / mass;
    let beta = 2.0 + mean * (mean + 1.0) / var;
    (mean * (beta - 1.0), beta)
}

/// Fits the inverted beta density to `f_d`, once with a free horizontal
/// scale and once with the scale fixed at 1.
pub fn fit_invbeta(dist: &NssDistribution, config: &FitConfig) -> Result<InvBetaFits, FitError<InvBetaFits>> {
    let d = dist.dimension();
    let observed: Vec<(f64, f64)> = (1..=d).map(|n| (n as f64, ratio_to_f64(&dist.weight(n)))).collect();
    let support = observed.iter().filter(|p| p.1 > 0.0).count();
    if support < 5 {
        return Err(FitError::TooFewPoints { needed: 5, got: support });
    }
    let (alpha0, beta0) = moment_start(&observed);

    let sse = |alpha: f64, beta: f64, scale: f64| -> f64 {
        observed
            .iter()
            .map(|&(x, y)| {
                let r = y - libm::exp(ln_invbeta(x / scale, alpha, beta)) / scale;
                r * r
            })
            .sum()
    };
    let settings = config.settings();

    let unscaled_run = simplex::minimize(
        |p: &[f64]| sse(libm::exp(p[0]), libm::exp(p[1]), 1.0),
        &[libm::log(alpha0), libm::log(beta0)],
        &[config.initial_step; 2],
        &settings,
    );
    let scaled_run = simplex::minimize(
        |p: &[f64]| sse(libm::exp(p[0]), libm::exp(p[1]), libm::exp(p[2])),
        &[libm::log(alpha0), libm::log(beta0), 0.0],
        &[config.initial_step; 3],
        &settings,
    );

    let finish = |x: &[f64], ssr: f64, iterations: usize, scaled: bool| {
        let mut fit = InvBetaFit {
            alpha: libm::exp(x[0]),
            beta: libm::exp(x[1]),
            scale: if scaled { libm::exp(x[2]) } else { 1.0 },
            delta_f: 0.0,
            ssr,
            scaled,
            iterations,
            start: (alpha0, beta0, 1.0),
            config: *config,
        };
        fit.delta_f = delta_f(dist, &fit);
        fit
    };
    let fits = InvBetaFits {
        scaled: finish(&scaled_run.x, scaled_run.value, scaled_run.iterations, true),
        unscaled: finish(&unscaled_run.x, unscaled_run.value, unscaled_run.iterations, false),
    };
    if scaled_run.converged && unscaled_run.converged {
        Ok(fits)
    } else {
        Err(FitError::NotConverged { best: fits })
    }
}

/// The `N` with the largest weight, smallest on ties.
pub fn peak_location(dist: &NssDistribution) -> u32 {
    let mut best = 1;
    let mut best_count = BigUint::default();
    for n in 1..=dist.dimension() {
        let c = dist.count(n);
        if c > best_count {
            best = n;
            best_count = c;
        }
    }
    best
}
