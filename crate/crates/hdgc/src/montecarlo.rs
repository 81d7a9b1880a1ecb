//! Replication harness for size/power tables and lag-selection frequency
//! tables, with counter-based per-replication seeding so any cell can be
//! re-run in isolation and parallel execution reduces by order-independent
//! sums of indicators.

use crate::error::Result;
use crate::lag::LagConfig;
use crate::lag_select::{select_lag, IcKind};
use crate::par::maybe_par_map;
use crate::pds::{pds_la_test, ExtraLagPolicy, PdsConfig, TestVariant};
use crate::simulate::{simulate_levels, DgpKind, DgpSpec};
use std::time::Instant;

/// One experimental cell: a data-generating design plus whether the
/// power channel (difference-VAR entry (2,1) = 0.2) is switched on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McCell {
    pub dgp: DgpKind,
    pub rho: f64,
    pub k: usize,
    pub t: usize,
    pub power: bool,
}

impl McCell {
    /// The coefficient override implementing size versus power runs:
    /// the second design's natural (2,1) entry must be zeroed for size.
    fn power_coef(&self) -> Option<f64> {
        match (self.dgp, self.power) {
            (_, true) => Some(0.2),
            (DgpKind::Dgp1, false) => None,
            (DgpKind::Dgp2, false) => Some(0.0),
        }
    }

    fn dgp_index(&self) -> u64 {
        match self.dgp {
            DgpKind::Dgp1 => 1,
            DgpKind::Dgp2 => 2,
        }
    }
}

/// A full size/power experiment.
#[derive(Debug, Clone)]
pub struct McExperiment {
    pub cells: Vec<McCell>,
    pub replications: usize,
    pub alpha: f64,
    pub p: usize,
    pub d: usize,
    pub variant: TestVariant,
    pub base_seed: u64,
    pub parallel: bool,
}

impl McExperiment {
    pub fn new(cells: Vec<McCell>, replications: usize, base_seed: u64) -> Self {
        McExperiment {
            cells,
            replications,
            alpha: 0.05,
            p: 2,
            d: 2,
            variant: TestVariant::LmF,
            base_seed,
            parallel: true,
        }
    }

    /// Test configuration used on every replication: no intercept (the
    /// designs are mean-zero) and no stage-one extra lag.
    fn pds_config(&self) -> PdsConfig {
        PdsConfig {
            lag: LagConfig {
                p: self.p,
                d: self.d,
                trim_initial: true,
                intercept: false,
            },
            extra_lag: ExtraLagPolicy::Off,
            ..PdsConfig::default()
        }
    }
}

/// Result of one cell.
#[derive(Debug, Clone)]
pub struct McCellResult {
    pub cell: McCell,
    pub replications: usize,
    pub rejections: usize,
    /// Replications where the test errored; counted as non-rejections and
    /// reported here rather than dropped.
    pub failures: usize,
    pub wall_ms: u128,
}

impl McCellResult {
    pub fn rate(&self) -> f64 {
        self.rejections as f64 / self.replications as f64
    }

    /// Binomial Monte Carlo standard error `sqrt(r (1 - r) / N)`.
    pub fn mc_se(&self) -> f64 {
        let r = self.rate();
        (r * (1.0 - r) / self.replications as f64).sqrt()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Counter-based seed for (base, cell, replication): depends only on the
/// cell's parameters, never on thread order or position in the grid.
pub fn replication_seed(base_seed: u64, cell: &McCell, rep: usize) -> u64 {
    let cell_hash = splitmix64(cell.dgp_index())
        ^ splitmix64(cell.rho.to_bits())
        ^ splitmix64(cell.k as u64 ^ 0xA5A5_0000)
        ^ splitmix64(cell.t as u64 ^ 0x5A5A_0000)
        ^ splitmix64(u64::from(cell.power) ^ 0xC3C3_0000);
    splitmix64(splitmix64(base_seed) ^ splitmix64(cell_hash) ^ rep as u64)
}

/// Runs one replication; errors are mapped to "no rejection, one failure".
fn run_replication(experiment: &McExperiment, cell: &McCell, rep: usize) -> (u8, u8) {
    let spec = DgpSpec {
        kind: cell.dgp,
        k: cell.k,
        t: cell.t,
        rho: cell.rho,
        a: 0.3,
        power_coef: cell.power_coef(),
        burn_in: 50,
        seed: replication_seed(experiment.base_seed, cell, rep),
    };
    let cfg = experiment.pds_config();
    let outcome = simulate_levels(&spec)
        .and_then(|panel| pds_la_test(&panel, 1, 0, &cfg, experiment.variant));
    match outcome {
        Ok(res) => ((res.p_value <= experiment.alpha) as u8, 0),
        Err(_) => (0, 1),
    }
}

/// Runs every cell of the experiment.
pub fn run_size_power(experiment: &McExperiment) -> Result<Vec<McCellResult>> {
    if experiment.replications == 0 {
        return Err(crate::error::Error::InvalidConfig(
            "replications must be >= 1".into(),
        ));
    }
    if !(experiment.alpha > 0.0 && experiment.alpha <= 1.0) {
        return Err(crate::error::Error::InvalidConfig(
            "alpha must lie in (0, 1]".into(),
        ));
    }
    let mut out = Vec::with_capacity(experiment.cells.len());
    for cell in &experiment.cells {
        let start = Instant::now();
        let reps: Vec<usize> = (0..experiment.replications).collect();
        let counts = maybe_par_map(reps, experiment.parallel, |rep| {
            run_replication(experiment, cell, rep)
        });
        let rejections = counts.iter().map(|&(r, _)| r as usize).sum();
        let failures = counts.iter().map(|&(_, f)| f as usize).sum();
        out.push(McCellResult {
            cell: *cell,
            replications: experiment.replications,
            rejections,
            failures,
            wall_ms: start.elapsed().as_millis(),
        });
    }
    Ok(out)
}

/// Lag-selection frequency experiment over one grid of (K, T) cells.
#[derive(Debug, Clone)]
pub struct LagFreqExperiment {
    pub dgp: DgpKind,
    pub rho: f64,
    pub grid: Vec<(usize, usize)>,
    pub p_max: usize,
    pub criterion: IcKind,
    pub replications: usize,
    pub base_seed: u64,
    pub parallel: bool,
}

/// Distribution of the chosen lag order for one (K, T) cell.
#[derive(Debug, Clone)]
pub struct LagFreqResult {
    pub k: usize,
    pub t: usize,
    /// `counts[p - 1]` = number of replications choosing order `p`;
    /// the final slot counts failed replications.
    pub counts: Vec<usize>,
    pub failures: usize,
}

/// Runs the lag-order selection procedure over simulated panels.
pub fn run_lag_frequencies(experiment: &LagFreqExperiment) -> Result<Vec<LagFreqResult>> {
    let mut out = Vec::with_capacity(experiment.grid.len());
    for &(k, t) in &experiment.grid {
        let cell = McCell {
            dgp: experiment.dgp,
            rho: experiment.rho,
            k,
            t,
            power: false,
        };
        let reps: Vec<usize> = (0..experiment.replications).collect();
        let chosen = maybe_par_map(reps, experiment.parallel, |rep| {
            let spec = DgpSpec {
                kind: cell.dgp,
                k,
                t,
                rho: cell.rho,
                a: 0.3,
                power_coef: cell.power_coef(),
                burn_in: 50,
                seed: replication_seed(experiment.base_seed, &cell, rep),
            };
            simulate_levels(&spec)
                .and_then(|panel| select_lag(&panel, experiment.p_max, experiment.criterion, false))
                .map(|sel| sel.p_chosen)
        });
        let mut counts = vec![0usize; experiment.p_max];
        let mut failures = 0;
        for c in chosen {
            match c {
                Ok(p) => counts[p - 1] += 1,
                Err(_) => failures += 1,
            }
        }
        out.push(LagFreqResult {
            k,
            t,
            counts,
            failures,
        });
    }
    Ok(out)
}

/// The full published grid: both designs, both error correlations,
/// `K` in {10, 20, 50, 100}, `T` in {50, 100, 200, 500, 1000},
/// size and power runs.
pub fn table1_cells() -> Vec<McCell> {
    let mut cells = Vec::new();
    for &dgp in &[DgpKind::Dgp1, DgpKind::Dgp2] {
        for &rho in &[0.0, 0.7] {
            for &k in &[10usize, 20, 50, 100] {
                for &t in &[50usize, 100, 200, 500, 1000] {
                    for &power in &[false, true] {
                        cells.push(McCell {
                            dgp,
                            rho,
                            k,
                            t,
                            power,
                        });
                    }
                }
            }
        }
    }
    cells
}

/// Long-format CSV: one row per cell, deterministic fields only.
pub fn results_to_csv(results: &[McCellResult]) -> String {
    let mut out = String::from("dgp,rho,k,t,kind,replications,rejections,failures,rate,mc_se\n");
    for r in results {
        let dgp = match r.cell.dgp {
            DgpKind::Dgp1 => 1,
            DgpKind::Dgp2 => 2,
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{:.6},{:.6}\n",
            dgp,
            r.cell.rho,
            r.cell.k,
            r.cell.t,
            if r.cell.power { "power" } else { "size" },
            r.replications,
            r.rejections,
            r.failures,
            r.rate(),
            r.mc_se()
        ));
    }
    out
}

/// Aligned-text table mirroring the published layout: one row per
/// (DGP, rho, K), size panel then power panel across the T grid.
pub fn results_to_table(results: &[McCellResult]) -> String {
    let mut ts: Vec<usize> = results.iter().map(|r| r.cell.t).collect();
    ts.sort_unstable();
    ts.dedup();
    let mut rows: Vec<(u64, u64, usize)> = results
        .iter()
        .map(|r| {
            (
                match r.cell.dgp {
                    DgpKind::Dgp1 => 1,
                    DgpKind::Dgp2 => 2,
                },
                r.cell.rho.to_bits(),
                r.cell.k,
            )
        })
        .collect();
    rows.sort_unstable();
    rows.dedup();

    let lookup = |dgp: u64, rho: u64, k: usize, t: usize, power: bool| -> Option<f64> {
        results
            .iter()
            .find(|r| {
                let d = match r.cell.dgp {
                    DgpKind::Dgp1 => 1,
                    DgpKind::Dgp2 => 2,
                };
                d == dgp
                    && r.cell.rho.to_bits() == rho
                    && r.cell.k == k
                    && r.cell.t == t
                    && r.cell.power == power
            })
            .map(|r| 100.0 * r.rate())
    };

    let mut out = String::new();
    out.push_str(&format!("{:<4}{:<6}{:<6}", "DGP", "rho", "K"));
    for &t in &ts {
        out.push_str(&format!("{:>9}", format!("size{t}")));
    }
    for &t in &ts {
        out.push_str(&format!("{:>9}", format!("pow{t}")));
    }
    out.push('\n');
    for (dgp, rho_bits, k) in rows {
        let rho = f64::from_bits(rho_bits);
        out.push_str(&format!("{dgp:<4}{rho:<6}{k:<6}"));
        for &t in &ts {
            match lookup(dgp, rho_bits, k, t, false) {
                Some(v) => out.push_str(&format!("{v:>9.1}")),
                None => out.push_str(&format!("{:>9}", "-")),
            }
        }
        for &t in &ts {
            match lookup(dgp, rho_bits, k, t, true) {
                Some(v) => out.push_str(&format!("{v:>9.1}")),
                None => out.push_str(&format!("{:>9}", "-")),
            }
        }
        out.push('\n');
    }
    out
}

/// Frequency table CSV for lag selection runs.
pub fn lag_freq_to_csv(results: &[LagFreqResult]) -> String {
    let p_max = results.first().map_or(0, |r| r.counts.len());
    let mut out = String::from("k,t");
    for p in 1..=p_max {
        out.push_str(&format!(",p{p}"));
    }
    out.push_str(",failures\n");
    for r in results {
        out.push_str(&format!("{},{}", r.k, r.t));
        for c in &r.counts {
            out.push_str(&format!(",{c}"));
        }
        out.push_str(&format!(",{}\n", r.failures));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_depend_on_cell_parameters_not_order() {
        let a = McCell {
            dgp: DgpKind::Dgp1,
            rho: 0.0,
            k: 10,
            t: 100,
            power: false,
        };
        let b = McCell {
            dgp: DgpKind::Dgp1,
            rho: 0.0,
            k: 10,
            t: 100,
            power: true,
        };
        assert_ne!(replication_seed(7, &a, 0), replication_seed(7, &b, 0));
        assert_ne!(replication_seed(7, &a, 0), replication_seed(7, &a, 1));
        assert_ne!(replication_seed(7, &a, 0), replication_seed(8, &a, 0));
        assert_eq!(replication_seed(7, &a, 3), replication_seed(7, &a, 3));
    }

    #[test]
    fn alpha_one_always_rejects() {
        let cells = vec![McCell {
            dgp: DgpKind::Dgp1,
            rho: 0.0,
            k: 3,
            t: 80,
            power: false,
        }];
        let mut exp = McExperiment::new(cells, 10, 123);
        exp.alpha = 1.0;
        let res = run_size_power(&exp).unwrap();
        assert_eq!(res[0].rejections + res[0].failures, 10);
        assert!((res[0].rate() - 1.0).abs() < 1e-12 || res[0].failures > 0);
    }

    #[test]
    fn serial_and_parallel_agree_bit_exactly() {
        let cells = vec![
            McCell {
                dgp: DgpKind::Dgp1,
                rho: 0.0,
                k: 4,
                t: 100,
                power: false,
            },
            McCell {
                dgp: DgpKind::Dgp2,
                rho: 0.7,
                k: 4,
                t: 100,
                power: true,
            },
        ];
        let mut exp = McExperiment::new(cells, 24, 99);
        exp.parallel = true;
        let par = run_size_power(&exp).unwrap();
        exp.parallel = false;
        let ser = run_size_power(&exp).unwrap();
        for (a, b) in par.iter().zip(&ser) {
            assert_eq!(a.rejections, b.rejections);
            assert_eq!(a.failures, b.failures);
        }
    }

    #[test]
    fn mc_se_matches_binomial_formula() {
        let r = McCellResult {
            cell: McCell {
                dgp: DgpKind::Dgp1,
                rho: 0.0,
                k: 2,
                t: 10,
                power: false,
            },
            replications: 400,
            rejections: 100,
            failures: 0,
            wall_ms: 0,
        };
        assert!((r.rate() - 0.25).abs() < 1e-15);
        assert!((r.mc_se() - (0.25f64 * 0.75 / 400.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn table1_grid_has_160_cells() {
        assert_eq!(table1_cells().len(), 160);
    }

    #[test]
    fn more_regressors_than_observations_still_runs() {
        // K * p = 100 candidate columns against 44 usable rows: the bound
        // ladder has to keep the second stage feasible on every draw.
        let cells = vec![McCell {
            dgp: DgpKind::Dgp1,
            rho: 0.7,
            k: 50,
            t: 50,
            power: false,
        }];
        let exp = McExperiment::new(cells, 10, 31415);
        let res = run_size_power(&exp).unwrap();
        assert_eq!(
            res[0].failures, 0,
            "high-dimensional cell produced failures"
        );
        assert!(res[0].rejections <= 10);
    }

    #[test]
    fn lag_frequency_table_renders() {
        let exp = LagFreqExperiment {
            dgp: DgpKind::Dgp1,
            rho: 0.0,
            grid: vec![(3, 120)],
            p_max: 4,
            criterion: crate::lag_select::IcKind::Bic,
            replications: 6,
            base_seed: 2,
            parallel: false,
        };
        let res = run_lag_frequencies(&exp).unwrap();
        assert_eq!(res[0].counts.iter().sum::<usize>() + res[0].failures, 6);
        let csv = lag_freq_to_csv(&res);
        assert!(csv.starts_with("k,t,p1,p2,p3,p4,failures\n"));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn csv_and_table_render() {
        let cells = vec![
            McCell {
                dgp: DgpKind::Dgp1,
                rho: 0.0,
                k: 4,
                t: 80,
                power: false,
            },
            McCell {
                dgp: DgpKind::Dgp1,
                rho: 0.0,
                k: 4,
                t: 80,
                power: true,
            },
        ];
        let exp = McExperiment::new(cells, 8, 5);
        let res = run_size_power(&exp).unwrap();
        let csv = results_to_csv(&res);
        assert!(csv.lines().count() == 3);
        assert!(csv.starts_with("dgp,rho,k,t,kind"));
        let table = results_to_table(&res);
        assert!(table.contains("size80"));
        assert!(table.contains("pow80"));
    }
}
