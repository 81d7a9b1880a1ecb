//! Granger causality testing for high-dimensional, possibly non-stationary
//! (unit-root or cointegrated) VAR systems.
//!
//! The pipeline combines lag augmentation of the causing variable — which
//! keeps test statistics at their standard chi-square / F limits whatever
//! the orders of integration — with post-double selection: penalized
//! regressions pick the relevant controls for both the caused variable and
//! each tested lag, and OLS on the union delivers the final statistic.
//!
//! Modules:
//! - [`matrix`]: dense QR-based least squares
//! - [`dist`]: chi-square and F distribution functions
//! - [`panel`]: CSV / FRED-MD ingestion and stationarity transforms
//! - [`lag`]: lagged designs and the integration/differencing algebra
//! - [`lasso`]: coordinate-descent solver with BIC penalty selection
//! - [`pds`]: the two-stage selection-and-test pipeline
//! - [`lag_select`]: data-driven lag order upper bound
//! - [`simulate`]: VAR-in-differences Monte Carlo designs
//! - [`montecarlo`]: size/power and lag-frequency replication harness
//! - [`network`]: pairwise causality networks and exporters

pub mod dist;
pub mod error;
pub mod lag;
pub mod lag_select;
pub mod lasso;
pub mod matrix;
pub mod montecarlo;
pub mod network;
pub mod panel;
pub mod par;
pub mod pds;
pub mod simulate;

pub use error::{Error, Result};
pub use lag::{build_design, DesignSet, LagConfig};
pub use lag_select::{select_lag, IcKind, LagSelection};
pub use montecarlo::{run_lag_frequencies, run_size_power, McCell, McExperiment};
pub use network::{network_both, network_from, network_to, NetworkEdge};
pub use panel::{apply_tcodes, load_csv, CsvOptions, NaPolicy, Panel};
pub use pds::{pds_la_test, GcTestResult, PdsConfig, TestVariant};
pub use simulate::{simulate_levels, DgpKind, DgpSpec};
