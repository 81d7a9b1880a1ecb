//! Lagged design construction and the integration/differencing transformation
//! algebra used both inside the estimator and as test oracles.
//!
//! The regression of interest explains the caused series `y` from `p` lags of
//! the causing series `x`, `d` extra augmentation lags of `x` (which absorb
//! unit roots up to order `d`), `p` lags of `y`, and `p` lags of each control
//! series.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::panel::Panel;

/// Maximum supported augmentation order. Integration orders above two are
/// rejected rather than silently extrapolated.
pub const MAX_AUGMENTATION: usize = 2;

/// Lag structure for one test: `p` lags of every variable plus `d`
/// augmentation lags of the causing variable.
#[derive(Debug, Clone, Copy)]
pub struct LagConfig {
    pub p: usize,
    pub d: usize,
    /// Drop the first `p + d` rows instead of zero-filling them.
    pub trim_initial: bool,
    /// Add an unpenalized intercept column to every regression.
    pub intercept: bool,
}

impl Default for LagConfig {
    fn default() -> Self {
        LagConfig {
            p: 2,
            d: 2,
            trim_initial: true,
            intercept: true,
        }
    }
}

impl LagConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidConfig("lag order p must be >= 1".into()));
        }
        if self.d > MAX_AUGMENTATION {
            return Err(Error::InvalidConfig(format!(
                "augmentation order d = {} exceeds the supported maximum of {}",
                self.d, MAX_AUGMENTATION
            )));
        }
        Ok(())
    }

    /// Spurious first-stage regressions become possible when `p < d + 1`.
    pub fn warns_short_lag(&self) -> bool {
        self.p < self.d + 1
    }
}

/// Regression-ready blocks for one (caused, causing) pair.
///
/// Column `j` (1-based) of each lag block holds the series at lag `j`; row
/// `t` of `x_lags` is `(x_{t-1}, ..., x_{t-p})`. Controls are grouped by
/// variable, lags within variable.
#[derive(Debug, Clone)]
pub struct DesignSet {
    pub y: Vec<f64>,
    /// `T_eff x p` lags of the causing variable.
    pub x_lags: Matrix,
    /// `T_eff x d` augmentation lags `x_{-(p+1)}..x_{-(p+d)}`.
    pub x_aug: Matrix,
    /// `T_eff x p` lags of the caused variable.
    pub y_lags: Matrix,
    /// `T_eff x (K-2)p` lags of the controls.
    pub w_lags: Matrix,
    pub intercept: bool,
    /// Control variable names aligned with `w_lags` blocks of `p` columns.
    pub w_names: Vec<String>,
    pub config: LagConfig,
}

impl DesignSet {
    pub fn t_eff(&self) -> usize {
        self.y.len()
    }

    /// Number of lags `p`.
    pub fn p(&self) -> usize {
        self.config.p
    }

    pub fn d(&self) -> usize {
        self.config.d
    }

    /// Human-readable label for a control column index into `w_lags`.
    pub fn w_column_label(&self, col: usize) -> String {
        let p = self.p();
        format!("{} (lag {})", self.w_names[col / p], col % p + 1)
    }
}

/// Builds the lagged design for testing whether `causing` Granger-causes
/// `caused`, conditional on every other series in the panel.
pub fn build_design(
    panel: &Panel,
    caused: usize,
    causing: usize,
    cfg: &LagConfig,
) -> Result<DesignSet> {
    cfg.validate()?;
    let k = panel.k_vars();
    if caused >= k || causing >= k {
        return Err(Error::InvalidConfig("variable index out of range".into()));
    }
    if caused == causing {
        return Err(Error::InvalidConfig(
            "caused and causing variables must differ".into(),
        ));
    }
    let t = panel.t_len();
    let max_lag = cfg.p + cfg.d;
    if t <= max_lag + 1 {
        return Err(Error::TooShortSample(format!(
            "T = {t} cannot support p + d = {max_lag} lags"
        )));
    }

    // With trimming, usable rows are t = max_lag .. T-1 (0-based); with
    // zero-filling every row is kept and missing lags read as zero.
    let t_eff = if cfg.trim_initial { t - max_lag } else { t };
    let start = if cfg.trim_initial { max_lag } else { 0 };

    let lag_value = |series: &[f64], t_abs: usize, lag: usize| -> f64 {
        if t_abs >= lag {
            series[t_abs - lag]
        } else {
            0.0
        }
    };

    let lag_block = |var: usize, lags: std::ops::RangeInclusive<usize>| -> Matrix {
        let series = panel.series(var);
        let ncols = lags.clone().count();
        let mut m = Matrix::zeros(t_eff, ncols);
        for (cj, lag) in lags.enumerate() {
            for i in 0..t_eff {
                m.set(i, cj, lag_value(series, start + i, lag));
            }
        }
        m
    };

    let y: Vec<f64> = (0..t_eff)
        .map(|i| panel.series(caused)[start + i])
        .collect();
    let x_lags = lag_block(causing, 1..=cfg.p);
    let x_aug = if cfg.d > 0 {
        lag_block(causing, (cfg.p + 1)..=(cfg.p + cfg.d))
    } else {
        Matrix::zeros(t_eff, 0)
    };
    let y_lags = lag_block(caused, 1..=cfg.p);

    let controls: Vec<usize> = (0..k).filter(|&j| j != caused && j != causing).collect();
    let mut w_cols: Vec<Vec<f64>> = Vec::with_capacity(controls.len() * cfg.p);
    let mut w_names = Vec::with_capacity(controls.len());
    for &var in &controls {
        w_names.push(panel.names()[var].clone());
        let block = lag_block(var, 1..=cfg.p);
        for c in 0..cfg.p {
            w_cols.push(block.col(c).to_vec());
        }
    }
    let w_lags = if w_cols.is_empty() {
        Matrix::zeros(t_eff, 0)
    } else {
        Matrix::from_cols(&w_cols)?
    };

    Ok(DesignSet {
        y,
        x_lags,
        x_aug,
        y_lags,
        w_lags,
        intercept: cfg.intercept,
        w_names,
        config: *cfg,
    })
}

/// Integer upper-triangular matrix of ones: the one-step integration map.
pub fn build_r_int(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if j >= i { 1 } else { 0 }).collect())
        .collect()
}

/// `P_d = R^d`, the order-`d` integration matrix, in exact integer arithmetic.
pub fn build_p_int(n: usize, d: usize) -> Vec<Vec<i64>> {
    let mut acc = int_identity(n);
    let r = build_r_int(n);
    for _ in 0..d {
        acc = int_matmul(&acc, &r);
    }
    acc
}

pub fn int_identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn int_matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for k in 0..inner {
            let v = a[i][k];
            if v == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += v * b[k][j];
            }
        }
    }
    out
}

/// Exact inverse of a unit upper-triangular integer matrix.
pub fn int_inverse_unit_upper(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut inv = int_identity(n);
    // Back substitution column by column; diagonal entries are 1.
    for col in 0..n {
        for row in (0..n).rev() {
            if row == col {
                continue;
            }
            if row > col {
                inv[row][col] = 0;
                continue;
            }
            let mut s = 0i64;
            for k in (row + 1)..n {
                s += a[row][k] * inv[k][col];
            }
            inv[row][col] = i64::from(row == col) - s;
        }
    }
    inv
}

pub fn int_to_matrix(a: &[Vec<i64>]) -> Matrix {
    let rows: Vec<Vec<f64>> = a
        .iter()
        .map(|r| r.iter().map(|&v| v as f64).collect())
        .collect();
    Matrix::from_rows(&rows).expect("integer matrix is rectangular")
}

/// `R` as a float matrix.
pub fn build_r(n: usize) -> Matrix {
    int_to_matrix(&build_r_int(n))
}

/// `P_d = R^d` as a float matrix.
pub fn build_p(n: usize, d: usize) -> Matrix {
    int_to_matrix(&build_p_int(n, d))
}

/// Applies the order-`d` difference map `P_d^{-1}` to a vector of lags
/// `(x_{t-1}, ..., x_{t-(p+d)})`. The first entries become `d`-th
/// differences; the trailing entries keep enough levels to reconstruct.
pub fn difference_transform(lag_vector: &[f64], d: usize) -> Vec<f64> {
    let n = lag_vector.len();
    if d == 0 || n == 0 {
        return lag_vector.to_vec();
    }
    let p_inv = int_inverse_unit_upper(&build_p_int(n, d));
    (0..n)
        .map(|i| (0..n).map(|j| p_inv[i][j] as f64 * lag_vector[j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::Panel;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_panel(t: usize, k: usize, seed: u64) -> Panel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..t).map(|_| rng.random::<f64>() - 0.5).collect())
            .collect();
        let names = (0..k).map(|j| format!("v{j}")).collect();
        Panel::new(Matrix::from_cols(&cols).unwrap(), names, None).unwrap()
    }

    #[test]
    fn minimal_bivariate_design() {
        let panel = random_panel(20, 2, 1);
        let cfg = LagConfig {
            p: 1,
            d: 0,
            trim_initial: true,
            intercept: false,
        };
        let ds = build_design(&panel, 0, 1, &cfg).unwrap();
        assert_eq!(ds.x_lags.cols(), 1);
        assert_eq!(ds.y_lags.cols(), 1);
        assert_eq!(ds.w_lags.cols(), 0);
        assert_eq!(ds.x_aug.cols(), 0);
        assert_eq!(ds.t_eff(), 19);
    }

    #[test]
    fn trimming_and_augmentation_bookkeeping() {
        let panel = random_panel(100, 3, 2);
        let cfg = LagConfig {
            p: 2,
            d: 2,
            trim_initial: true,
            intercept: false,
        };
        let ds = build_design(&panel, 0, 1, &cfg).unwrap();
        assert_eq!(ds.t_eff(), 96);
        assert_eq!(ds.x_aug.cols(), 2);
        // Augmentation columns hold lags 3 and 4 of the causing series.
        let x = panel.series(1);
        for i in 0..ds.t_eff() {
            let t_abs = 4 + i;
            assert_eq!(ds.x_aug.get(i, 0), x[t_abs - 3]);
            assert_eq!(ds.x_aug.get(i, 1), x[t_abs - 4]);
        }
    }

    #[test]
    fn lag_columns_match_raw_series_elementwise() {
        let panel = random_panel(50, 4, 3);
        let cfg = LagConfig {
            p: 2,
            d: 1,
            trim_initial: true,
            intercept: false,
        };
        let ds = build_design(&panel, 2, 0, &cfg).unwrap();
        let x = panel.series(0);
        let y = panel.series(2);
        for i in 0..ds.t_eff() {
            let t_abs = 3 + i;
            assert_eq!(ds.y[i], y[t_abs]);
            assert_eq!(ds.x_lags.get(i, 0), x[t_abs - 1]);
            assert_eq!(ds.x_lags.get(i, 1), x[t_abs - 2]);
            assert_eq!(ds.y_lags.get(i, 0), y[t_abs - 1]);
        }
        // Controls are variables 1 and 3, in panel order.
        assert_eq!(ds.w_names, vec!["v1".to_string(), "v3".to_string()]);
        let w1 = panel.series(1);
        for i in 0..ds.t_eff() {
            let t_abs = 3 + i;
            assert_eq!(ds.w_lags.get(i, 0), w1[t_abs - 1]);
            assert_eq!(ds.w_lags.get(i, 1), w1[t_abs - 2]);
        }
    }

    #[test]
    fn zero_fill_keeps_all_rows() {
        let panel = random_panel(30, 2, 4);
        let cfg = LagConfig {
            p: 2,
            d: 1,
            trim_initial: false,
            intercept: false,
        };
        let ds = build_design(&panel, 0, 1, &cfg).unwrap();
        assert_eq!(ds.t_eff(), 30);
        // Row 0 has no history: all lag entries are zero-filled.
        assert_eq!(ds.x_lags.get(0, 0), 0.0);
        assert_eq!(ds.x_lags.get(0, 1), 0.0);
    }

    #[test]
    fn rejects_same_variable_and_large_d() {
        let panel = random_panel(30, 2, 5);
        let cfg = LagConfig::default();
        assert!(build_design(&panel, 1, 1, &cfg).is_err());
        let bad = LagConfig { d: 3, ..cfg };
        assert!(matches!(
            build_design(&panel, 0, 1, &bad),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn p_matrices_match_worked_forms() {
        // P_1 in dimension 2.
        let p1 = build_p_int(2, 1);
        assert_eq!(p1, vec![vec![1, 1], vec![0, 1]]);
        // P_2 in dimension 4.
        let p2 = build_p_int(4, 2);
        assert_eq!(
            p2,
            vec![
                vec![1, 2, 3, 4],
                vec![0, 1, 2, 3],
                vec![0, 0, 1, 2],
                vec![0, 0, 0, 1]
            ]
        );
        // d = 0 is the identity.
        assert_eq!(build_p_int(5, 0), int_identity(5));
    }

    #[test]
    fn p_inverse_is_exact_in_integers() {
        for n in 1..=8 {
            for d in 0..=4 {
                let p = build_p_int(n, d);
                let pinv = int_inverse_unit_upper(&p);
                assert_eq!(int_matmul(&p, &pinv), int_identity(n));
                assert_eq!(int_matmul(&pinv, &p), int_identity(n));
            }
        }
    }

    #[test]
    fn difference_transform_worked_examples() {
        // p = d = 1: (x_{t-1}, x_{t-2}) -> (delta x_{t-1}, x_{t-2}).
        let out = difference_transform(&[5.0, 3.0], 1);
        assert_eq!(out, vec![2.0, 3.0]);

        // p = 2, d = 1: three lags -> (dx1, dx2, x3).
        let out = difference_transform(&[5.0, 3.0, 2.0], 1);
        assert_eq!(out, vec![2.0, 1.0, 2.0]);

        // p = d = 2: four lags -> (d2x1, d2x2, x3 - 2 x4, x4).
        let (x1, x2, x3, x4) = (7.0, 4.0, 3.0, 1.0);
        let out = difference_transform(&[x1, x2, x3, x4], 2);
        assert_eq!(
            out,
            vec![x1 - 2.0 * x2 + x3, x2 - 2.0 * x3 + x4, x3 - 2.0 * x4, x4]
        );
    }

    #[test]
    fn selector_identities_hold_in_integer_arithmetic() {
        // With the p-selector S = [[I_p, 0], [0, 0]]:
        //   P_d S = (R S)^d entry-wise, and
        //   S P_d v = (S R)^d v for any v with zero augmentation tail.
        for p in 1..=4usize {
            for d in 0..=4usize {
                let n = p + d;
                let mut s = vec![vec![0i64; n]; n];
                for i in 0..p {
                    s[i][i] = 1;
                }
                let r = build_r_int(n);
                let pd = build_p_int(n, d);

                let lhs = int_matmul(&pd, &s);
                let rs = int_matmul(&r, &s);
                let mut rhs = s.clone();
                for _ in 0..d {
                    rhs = int_matmul(&rhs, &rs);
                }
                // (R S)^0 = I, but S P_0 = S; align the d = 0 case.
                let rhs = if d == 0 { s.clone() } else { rhs };
                assert_eq!(lhs, rhs, "P_d S = (R S)^d failed at p={p} d={d}");

                // Vector identity on zero-tailed vectors.
                let beta: Vec<i64> = (0..n)
                    .map(|i| if i < p { (i as i64) + 1 } else { 0 })
                    .collect();
                let apply = |m: &[Vec<i64>], v: &[i64]| -> Vec<i64> {
                    m.iter()
                        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                        .collect()
                };
                let spd = int_matmul(&s, &pd);
                let sr = int_matmul(&s, &r);
                let mut srd = int_identity(n);
                for _ in 0..d {
                    srd = int_matmul(&srd, &sr);
                }
                assert_eq!(
                    apply(&spd, &beta),
                    apply(&srd, &beta),
                    "S P_d beta = (S R)^d beta failed at p={p} d={d}"
                );
            }
        }
    }
}
