//! Exact counting of su(3) representations by Hilbert-space dimension.
//!
//! The crate is `no_std` (it needs `alloc`). It covers
//!
//! * irreducible modules and their dimensions ([`irreps`]),
//! * streaming enumeration of partitions with restricted parts ([`partitions`]),
//! * exact counts of all modules, of those containing a singlet, and of the
//!   component-count distribution ([`modcount`]),
//! * model fits to the exact data ([`fitstats`]).
//!
//! File formats, caching and the command-line front end live in the `su3count`
//! companion crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod fitstats;
pub mod irreps;
pub mod modcount;
pub mod partitions;

pub use fitstats::{
    delta_f, delta_f_points, fit_growth, fit_invbeta, invbeta_pdf, ln_beta, mod_series,
    peak_location, singlet_series, DensityModel, FitConfig, FitError, GrowthFit, InvBetaFit,
    InvBetaFits, PointsUsed, ResidualSpace, SeriesPoints, SeriesValue, GROWTH_START,
};
pub use irreps::{
    build_census, count_irreps_upto, weyl_dim, xi, xi_bruteforce, DimensionCensus, RealThreshold,
    YoungDiagram,
};
pub use modcount::{
    gf_oracle, mod_singlet, mod_total, module_counts, multiset_count, nss_distribution,
    ratio_to_f64, shape_count, singlet_fraction, BigCount, ExactFraction, GfTable, ModError, ModuleCounts,
    NssDistribution,
};
pub use partitions::{
    count_partitions_exact, count_restricted, enumerate_restricted, hardy_ramanujan_estimate,
    PartSet, Partition, PartitionShape, RestrictedPartitions,
};
