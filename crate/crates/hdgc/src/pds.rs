//! The two-stage selection-and-test pipeline.
//!
//! Stage one runs `p + 1` penalized selection regressions: the caused series
//! and each lag of the causing series are regressed on all remaining lagged
//! variables, with the lags of the causing and caused series themselves left
//! unpenalized so they can never be dropped. The union of the selected
//! control columns, plus the always-included lags of the caused series, form
//! the conditioning set of stage two. Stage two runs OLS with the `d`
//! augmentation lags of the causing series added, and tests the `p` lag
//! coefficients of interest by an LM statistic (chi-square or F-corrected)
//! or a Wald statistic. The augmentation lags never enter the null: the test
//! always has `p` restrictions.

use crate::dist::{chi2_sf, f_sf};
use crate::error::{Error, Result};
use crate::lag::{build_design, DesignSet, LagConfig};
use crate::lasso::{bic_select, LassoProblem};
use crate::matrix::{ols, Matrix, PivotedQr};
use crate::panel::Panel;
use std::collections::{BTreeMap, BTreeSet};

/// Default ladder of selection-size bounds; later entries are tried when a
/// looser bound leaves the second stage infeasible.
pub const C_LADDER: [f64; 3] = [0.5, 0.33, 0.25];

/// Whether stage one adds one extra lag of the causing variable to each
/// selection regression. This removes the residual spurious-regression risk
/// when `p <= d`; `Auto` enables it exactly in that case (with a warning).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtraLagPolicy {
    #[default]
    Auto,
    On,
    Off,
}

/// Which test statistic to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestVariant {
    /// F-corrected LM statistic (default: better finite-sample size).
    LmF,
    /// Plain `T * R^2` against the chi-square.
    LmChi2,
    Wald,
}

impl TestVariant {
    pub fn label(&self) -> &'static str {
        match self {
            TestVariant::LmF => "lm-f",
            TestVariant::LmChi2 => "lm-chi2",
            TestVariant::Wald => "wald",
        }
    }
}

/// Full configuration of one causality test.
#[derive(Debug, Clone)]
pub struct PdsConfig {
    pub lag: LagConfig,
    /// Selection bounds tried in order until the second stage is feasible.
    pub c_ladder: Vec<f64>,
    pub extra_lag: ExtraLagPolicy,
    /// Skip selection and force every control column into stage two
    /// (feasible only in low dimensions).
    pub force_all_controls: bool,
}

impl Default for PdsConfig {
    fn default() -> Self {
        PdsConfig {
            lag: LagConfig::default(),
            c_ladder: C_LADDER.to_vec(),
            extra_lag: ExtraLagPolicy::Auto,
            force_all_controls: false,
        }
    }
}

impl PdsConfig {
    fn extra_lag_enabled(&self, warnings: &mut Vec<String>) -> bool {
        match self.extra_lag {
            ExtraLagPolicy::On => true,
            ExtraLagPolicy::Off => false,
            ExtraLagPolicy::Auto => {
                let on = self.lag.warns_short_lag() && self.lag.d >= 1;
                if on {
                    warnings.push(format!(
                        "p = {} < d + 1 = {}: stage-one regressions augmented with one \
                         extra lag of the causing variable to avoid spurious selection",
                        self.lag.p,
                        self.lag.d + 1
                    ));
                }
                on
            }
        }
    }
}

/// Selected control columns from stage one.
///
/// Indices refer to columns of the control block `V = (y lags, control
/// lags)`: `0..p` are the lags of the caused series, `p..` the control
/// series lags. The sets only ever contain control-series columns — the
/// caused-series lags are unpenalized and enter stage two unconditionally,
/// so they are counted in [`ActiveSets::s_hat_count`] but not listed.
#[derive(Debug, Clone)]
pub struct ActiveSets {
    pub per_equation: Vec<BTreeSet<usize>>,
    pub union: BTreeSet<usize>,
    /// Largest absolute stage-one coefficient seen for each union member;
    /// decides which columns are dropped first on rank deficiency.
    magnitudes: BTreeMap<usize, f64>,
    pub p: usize,
    pub c_used: f64,
}

impl ActiveSets {
    pub fn union_size(&self) -> usize {
        self.union.len()
    }

    /// Cardinality of the stage-two conditioning set: the selected controls
    /// plus the `p` always-included lags of the caused series. This is the
    /// count that enters the F degrees of freedom.
    pub fn s_hat_count(&self) -> usize {
        self.union.len() + self.p
    }

    /// Largest absolute stage-one coefficient recorded for a union member.
    pub fn magnitude(&self, v_col: usize) -> f64 {
        self.magnitudes.get(&v_col).copied().unwrap_or(0.0)
    }
}

/// One causality test outcome.
#[derive(Debug, Clone)]
pub struct GcTestResult {
    pub statistic: f64,
    pub kind: TestVariant,
    /// Number of tested restrictions: always `p`, whatever `d` is.
    pub df1: usize,
    /// Denominator degrees of freedom (F variant only).
    pub df2: Option<usize>,
    pub p_value: f64,
    pub selected: ActiveSets,
    /// Stage-two coefficients on the `p` tested lags.
    pub beta_hat: Vec<f64>,
    pub p: usize,
    pub d: usize,
    pub c: f64,
    pub t_eff: usize,
    pub warnings: Vec<String>,
}

/// Core statistics for testing the first `p` coefficients of `x_block`
/// (a `T x (p+d)` matrix whose remaining columns are augmentation lags)
/// in a regression that also contains `controls`.
#[derive(Debug, Clone)]
pub struct FixedSetStats {
    pub wald: f64,
    pub lm: f64,
    pub r2: f64,
    pub beta_p: Vec<f64>,
    /// `SSR/T` of the unrestricted regression.
    pub sigma2_unrestricted: f64,
    /// `SSR/T` of the restricted regression (tested lags excluded).
    pub sigma2_restricted: f64,
}

/// Computes Wald, LM and the tested-lag coefficients with the conditioning
/// set held fixed.
pub fn fixed_set_statistics(
    y: &[f64],
    x_block: &Matrix,
    p: usize,
    controls: &Matrix,
) -> Result<FixedSetStats> {
    let t_eff = y.len();
    if x_block.cols() < p {
        return Err(Error::DimensionMismatch("x block narrower than p".into()));
    }

    // Unrestricted regression for the Wald branch.
    let full = Matrix::hcat(&[x_block, controls])?;
    let fit = ols(&full, y)?;
    let beta_p: Vec<f64> = fit.coefficients[..p].to_vec();
    let cov_block = sub_matrix(&fit.covariance, p);
    let wald = quadratic_form_inv(&cov_block, &beta_p)?;

    // LM branch: restricted residuals, then regression on everything.
    let aug: Vec<usize> = (p..x_block.cols()).collect();
    let aug_block = x_block.select_cols(&aug);
    let restricted = Matrix::hcat(&[&aug_block, controls])?;
    let xi = if restricted.cols() > 0 {
        ols(&restricted, y)?.residuals
    } else {
        y.to_vec()
    };
    let tested = x_block.select_cols(&(0..p).collect::<Vec<_>>());
    let lm_design = Matrix::hcat(&[&restricted, &tested])?;
    let nu_fit = ols(&lm_design, y)?;
    let r2 = crate::matrix::r_squared(&xi, &nu_fit.residuals)?;
    let lm = t_eff as f64 * r2;

    let sigma2_restricted = xi.iter().map(|v| v * v).sum::<f64>() / t_eff as f64;
    Ok(FixedSetStats {
        wald,
        lm,
        r2,
        beta_p,
        sigma2_unrestricted: fit.sigma2_hat,
        sigma2_restricted,
    })
}

fn sub_matrix(m: &Matrix, p: usize) -> Matrix {
    let mut out = Matrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            out.set(i, j, m.get(i, j));
        }
    }
    out
}

/// `v' A^{-1} v` for a symmetric positive definite `A`, via Cholesky.
fn quadratic_form_inv(a: &Matrix, v: &[f64]) -> Result<f64> {
    let l = crate::simulate::cholesky(a).map_err(|_| Error::RankDeficient {
        rank: 0,
        cols: a.cols(),
    })?;
    // Solve L w = v, then the form is w'w.
    let n = v.len();
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut s = v[i];
        for k in 0..i {
            s -= l.get(i, k) * w[k];
        }
        w[i] = s / l.get(i, i);
    }
    Ok(w.iter().map(|x| x * x).sum())
}

/// The columns of the stage-one design, in order: lags of the causing
/// variable, lags of the caused variable, control lags, the optional extra
/// causing-variable lag, the optional intercept.
struct StageOneLayout {
    columns: Vec<Vec<f64>>,
    /// For each column, `Some(w_index)` when it is a penalized control lag.
    w_tag: Vec<Option<usize>>,
}

fn stage_one_layout(design: &DesignSet, extra_lag: bool) -> StageOneLayout {
    let p = design.p();
    let mut columns = Vec::new();
    let mut w_tag = Vec::new();
    for j in 0..p {
        columns.push(design.x_lags.col(j).to_vec());
        w_tag.push(None);
    }
    for j in 0..p {
        columns.push(design.y_lags.col(j).to_vec());
        w_tag.push(None);
    }
    for j in 0..design.w_lags.cols() {
        columns.push(design.w_lags.col(j).to_vec());
        w_tag.push(Some(j));
    }
    if extra_lag && design.d() >= 1 {
        columns.push(design.x_aug.col(0).to_vec());
        w_tag.push(None);
    }
    if design.intercept {
        columns.push(vec![1.0; design.t_eff()]);
        w_tag.push(None);
    }
    StageOneLayout { columns, w_tag }
}

/// Stage one: `p + 1` selection regressions at bound `c`, returning the
/// per-equation active sets over control columns and their union.
pub fn first_stage(design: &DesignSet, c: f64, extra_lag: bool) -> Result<ActiveSets> {
    let p = design.p();
    let layout = stage_one_layout(design, extra_lag);

    let mut per_equation = Vec::with_capacity(p + 1);
    let mut union = BTreeSet::new();
    let mut magnitudes: BTreeMap<usize, f64> = BTreeMap::new();

    // Equation 0 explains y; equation j explains the j-th lag of x with its
    // own column removed from the design.
    for eq in 0..=p {
        let response: Vec<f64> = if eq == 0 {
            design.y.clone()
        } else {
            design.x_lags.col(eq - 1).to_vec()
        };
        let skip = if eq == 0 { usize::MAX } else { eq - 1 };
        let mut cols = Vec::with_capacity(layout.columns.len());
        let mut tags = Vec::with_capacity(layout.columns.len());
        for (idx, col) in layout.columns.iter().enumerate() {
            if idx == skip {
                continue;
            }
            cols.push(col.clone());
            tags.push(layout.w_tag[idx]);
        }
        let penalty_free: BTreeSet<usize> = tags
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_none())
            .map(|(i, _)| i)
            .collect();
        let mut problem = LassoProblem::new(Matrix::from_cols(&cols)?, response, penalty_free);
        problem.max_selected_fraction = c;
        let fit = bic_select(&problem)?;

        let mut set = BTreeSet::new();
        for &col in &fit.active_set {
            let w_idx = tags[col].expect("active columns are tagged control lags");
            let v_col = p + w_idx;
            set.insert(v_col);
            union.insert(v_col);
            let mag = fit.coefficients[col].abs();
            let entry = magnitudes.entry(v_col).or_insert(0.0);
            if mag > *entry {
                *entry = mag;
            }
        }
        per_equation.push(set);
    }

    Ok(ActiveSets {
        per_equation,
        union,
        magnitudes,
        p,
        c_used: c,
    })
}

/// Assembles the stage-two blocks for a given active set: the tested block
/// `(x lags, augmentation lags)` and the conditioning block
/// `(y lags, selected controls, intercept)`.
fn stage_two_blocks(design: &DesignSet, active: &ActiveSets) -> Result<(Matrix, Matrix)> {
    let x_block = Matrix::hcat(&[&design.x_lags, &design.x_aug])?;
    let p = design.p();
    let mut control_cols: Vec<Vec<f64>> = Vec::new();
    for j in 0..p {
        control_cols.push(design.y_lags.col(j).to_vec());
    }
    for &v_col in &active.union {
        control_cols.push(design.w_lags.col(v_col - p).to_vec());
    }
    if design.intercept {
        control_cols.push(vec![1.0; design.t_eff()]);
    }
    let controls = if control_cols.is_empty() {
        Matrix::zeros(design.t_eff(), 0)
    } else {
        Matrix::from_cols(&control_cols)?
    };
    Ok((x_block, controls))
}

/// Drops union members (smallest stage-one magnitude first, largest column
/// index on ties) until the stage-two design has full column rank.
fn repair_rank(
    design: &DesignSet,
    active: &mut ActiveSets,
    warnings: &mut Vec<String>,
) -> Result<()> {
    loop {
        let (x_block, controls) = stage_two_blocks(design, active)?;
        let full = Matrix::hcat(&[&x_block, &controls])?;
        if full.cols() == 0 {
            return Ok(());
        }
        if full.rows() <= full.cols() {
            return Err(Error::InsufficientDof(format!(
                "stage two has {} regressors for {} observations",
                full.cols(),
                full.rows()
            )));
        }
        let qr = PivotedQr::new(&full)?;
        if qr.rank() == full.cols() {
            return Ok(());
        }
        // Deterministic drop order.
        let victim = active
            .union
            .iter()
            .copied()
            .min_by(|&a, &b| {
                active
                    .magnitude(a)
                    .partial_cmp(&active.magnitude(b))
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .ok_or(Error::RankDeficient {
                rank: qr.rank(),
                cols: full.cols(),
            })?;
        active.union.remove(&victim);
        warnings.push(format!(
            "dropped selected control column {victim} to restore full rank"
        ));
    }
}

/// Stage two, LM flavor.
pub fn second_stage_lm(
    design: &DesignSet,
    active: &ActiveSets,
    variant: TestVariant,
) -> Result<GcTestResult> {
    let p = design.p();
    let d = design.d();
    let t_eff = design.t_eff();
    let s_hat = active.s_hat_count();
    check_dof(t_eff, s_hat, p, d, design.intercept)?;

    let (x_block, controls) = stage_two_blocks(design, active)?;
    let stats = fixed_set_statistics(&design.y, &x_block, p, &controls)?;

    let (statistic, df2, p_value) = match variant {
        TestVariant::LmChi2 => {
            let stat = stats.lm;
            (stat, None, chi2_sf(stat, p))
        }
        TestVariant::LmF => {
            let df2 = t_eff - s_hat - (p + d);
            let r2 = stats.r2;
            if 1.0 - r2 <= f64::EPSILON {
                (f64::INFINITY, Some(df2), 0.0)
            } else {
                let stat = (df2 as f64 / p as f64) * (r2 / (1.0 - r2));
                (stat, Some(df2), f_sf(stat, p, df2))
            }
        }
        TestVariant::Wald => {
            return Err(Error::InvalidConfig(
                "second_stage_lm cannot produce a Wald statistic".into(),
            ))
        }
    };

    Ok(GcTestResult {
        statistic,
        kind: variant,
        df1: p,
        df2,
        p_value,
        selected: active.clone(),
        beta_hat: stats.beta_p,
        p,
        d,
        c: active.c_used,
        t_eff,
        warnings: Vec::new(),
    })
}

/// Stage two, Wald flavor.
pub fn second_stage_wald(design: &DesignSet, active: &ActiveSets) -> Result<GcTestResult> {
    let p = design.p();
    let d = design.d();
    let t_eff = design.t_eff();
    let s_hat = active.s_hat_count();
    check_dof(t_eff, s_hat, p, d, design.intercept)?;

    let (x_block, controls) = stage_two_blocks(design, active)?;
    let stats = fixed_set_statistics(&design.y, &x_block, p, &controls)?;
    let statistic = stats.wald;
    Ok(GcTestResult {
        statistic,
        kind: TestVariant::Wald,
        df1: p,
        df2: None,
        p_value: chi2_sf(statistic, p),
        selected: active.clone(),
        beta_hat: stats.beta_p,
        p,
        d,
        c: active.c_used,
        t_eff,
        warnings: Vec::new(),
    })
}

fn check_dof(t_eff: usize, s_hat: usize, p: usize, d: usize, intercept: bool) -> Result<()> {
    let needed = s_hat + (p + d) + p + usize::from(intercept);
    if t_eff <= needed {
        return Err(Error::InsufficientDof(format!(
            "T_eff = {t_eff} but the second stage needs more than {needed} observations"
        )));
    }
    Ok(())
}

/// Runs the full pipeline: design construction, stage-one selection with the
/// bound ladder, rank repair, and the requested stage-two statistic.
/// Deterministic given the panel and configuration.
pub fn pds_la_test(
    panel: &Panel,
    caused: usize,
    causing: usize,
    cfg: &PdsConfig,
    variant: TestVariant,
) -> Result<GcTestResult> {
    let design = build_design(panel, caused, causing, &cfg.lag)?;
    let mut warnings = Vec::new();
    let extra_lag = cfg.extra_lag_enabled(&mut warnings);
    if cfg.lag.warns_short_lag() && !matches!(cfg.extra_lag, ExtraLagPolicy::Auto) {
        warnings.push(format!(
            "p = {} is below d + 1 = {}; consider a longer lag order",
            cfg.lag.p,
            cfg.lag.d + 1
        ));
    }

    let p = design.p();
    let ladder: &[f64] = if cfg.c_ladder.is_empty() {
        &C_LADDER
    } else {
        &cfg.c_ladder
    };

    let mut active = None;
    let mut last_err: Option<Error> = None;
    if cfg.force_all_controls {
        let union: BTreeSet<usize> = (p..p + design.w_lags.cols()).collect();
        active = Some(ActiveSets {
            per_equation: Vec::new(),
            union,
            magnitudes: BTreeMap::new(),
            p,
            c_used: 1.0,
        });
    } else {
        for &c in ladder {
            match first_stage(&design, c, extra_lag) {
                Ok(sets) => {
                    let ok = check_dof(
                        design.t_eff(),
                        sets.s_hat_count(),
                        p,
                        design.d(),
                        design.intercept,
                    );
                    match ok {
                        Ok(()) => {
                            active = Some(sets);
                            break;
                        }
                        Err(e) => last_err = Some(e),
                    }
                }
                Err(e @ Error::AllViolateBound { .. }) => last_err = Some(e),
                Err(e) => return Err(e),
            }
        }
    }
    let mut active = match active {
        Some(a) => a,
        None => return Err(last_err.unwrap_or(Error::InsufficientDof("selection failed".into()))),
    };

    repair_rank(&design, &mut active, &mut warnings)?;

    let mut result = match variant {
        TestVariant::Wald => second_stage_wald(&design, &active)?,
        v => second_stage_lm(&design, &active, v)?,
    };
    result.warnings = warnings;
    Ok(result)
}

/// Convenience label for reports: with `d = 0` the pipeline reduces to the
/// stationary test without augmentation.
pub fn method_label(variant: TestVariant, d: usize) -> String {
    match (variant, d) {
        (TestVariant::Wald, 0) => "PDS-Wald (stationary)".to_string(),
        (TestVariant::Wald, _) => "PDS-LA-Wald".to_string(),
        (_, 0) => "PDS-LM (stationary)".to_string(),
        (_, _) => "PDS-LA-LM".to_string(),
    }
}
