//! Dense column-major matrices and the least-squares machinery used by every
//! regression in the engine.
//!
//! Solves go through a Householder QR with column pivoting rather than the
//! normal equations: lag blocks of integrated series are near-collinear and
//! the explicit `X'X` inverse loses half the available digits there. A column
//! is declared linearly dependent when its pivot magnitude falls below
//! `1e-10` times the largest pivot.

use crate::error::{Error, Result};

/// Relative pivot threshold below which a column counts as dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Dense real matrix, column-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from column vectors; all columns must share a length.
    pub fn from_cols(cols: &[Vec<f64>]) -> Result<Self> {
        if cols.is_empty() {
            return Ok(Matrix::zeros(0, 0));
        }
        let rows = cols[0].len();
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut data = Vec::with_capacity(rows * cols.len());
        for c in cols {
            data.extend_from_slice(c);
        }
        Ok(Matrix {
            rows,
            cols: cols.len(),
            data,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Matrix::zeros(0, 0));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[j * self.rows + i] = v;
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Horizontal concatenation of column blocks; empty blocks are skipped.
    pub fn hcat(blocks: &[&Matrix]) -> Result<Matrix> {
        let nonempty: Vec<&&Matrix> = blocks.iter().filter(|b| b.cols > 0).collect();
        if nonempty.is_empty() {
            let rows = blocks.first().map_or(0, |b| b.rows);
            return Ok(Matrix::zeros(rows, 0));
        }
        let rows = nonempty[0].rows;
        if nonempty.iter().any(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch("hcat: row counts differ".into()));
        }
        let cols = nonempty.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in nonempty {
            data.extend_from_slice(&b.data);
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Returns the sub-matrix with the given column indices, in order.
    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for &j in idx {
            data.extend_from_slice(self.col(j));
        }
        Matrix {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other.get(k, j);
                if b == 0.0 {
                    continue;
                }
                let a_col = self.col(k);
                let o_col = out.col_mut(j);
                for i in 0..self.rows {
                    o_col[i] += a_col[i] * b;
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a vector `v`.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "matvec: {}x{} * {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0.0; self.rows];
        for (j, &vj) in v.iter().enumerate() {
            if vj == 0.0 {
                continue;
            }
            let col = self.col(j);
            for i in 0..self.rows {
                out[i] += col[i] * vj;
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Householder QR with column pivoting of a `rows x cols` matrix.
///
/// Stores the reflectors in-place; `rank` is determined by comparing each
/// pivot against [`RANK_TOL`] times the first (largest) pivot.
pub struct PivotedQr {
    qr: Matrix,
    betas: Vec<f64>,
    /// `perm[k]` = original column index placed at position `k`.
    perm: Vec<usize>,
    rank: usize,
}

impl PivotedQr {
    pub fn new(a: &Matrix) -> Result<PivotedQr> {
        let (n, m) = (a.rows, a.cols);
        if n < m {
            return Err(Error::DimensionMismatch(format!(
                "QR requires rows >= cols, got {n}x{m}"
            )));
        }
        let mut qr = a.clone();
        let mut betas = vec![0.0; m];
        let mut perm: Vec<usize> = (0..m).collect();
        let mut col_norms: Vec<f64> = (0..m)
            .map(|j| qr.col(j).iter().map(|v| v * v).sum())
            .collect();
        let mut rank = m;
        let mut first_pivot = 0.0_f64;

        for k in 0..m {
            // Pivot: bring the column with the largest remaining norm to front.
            let (pmax, _) = col_norms[k..]
                .iter()
                .enumerate()
                .fold(
                    (k, -1.0),
                    |acc, (off, &v)| if v > acc.1 { (k + off, v) } else { acc },
                );
            if pmax != k {
                perm.swap(k, pmax);
                col_norms.swap(k, pmax);
                for i in 0..n {
                    let t = qr.get(i, k);
                    qr.set(i, k, qr.get(i, pmax));
                    qr.set(i, pmax, t);
                }
            }

            // Householder vector for column k, rows k..n.
            let mut norm2 = 0.0;
            for i in k..n {
                let v = qr.get(i, k);
                norm2 += v * v;
            }
            let norm = norm2.sqrt();
            if k == 0 {
                first_pivot = norm;
            }
            if norm <= RANK_TOL * first_pivot {
                rank = k;
                break;
            }
            let x0 = qr.get(k, k);
            let alpha = if x0 >= 0.0 { -norm } else { norm };
            let v0 = x0 - alpha;
            let mut vnorm2 = v0 * v0;
            for i in (k + 1)..n {
                let v = qr.get(i, k);
                vnorm2 += v * v;
            }
            let beta = if vnorm2 > 0.0 { 2.0 / vnorm2 } else { 0.0 };
            qr.set(k, k, alpha);
            // Store v below the diagonal with v0 remembered via beta scaling:
            // we keep v0 implicitly by storing v_i/v0 is avoided; instead keep
            // raw v_i in the strictly-lower part and v0 in a side array slot:
            // simpler: scale so v0 = 1.
            if v0 != 0.0 {
                for i in (k + 1)..n {
                    let v = qr.get(i, k) / v0;
                    qr.set(i, k, v);
                }
                betas[k] = beta * v0 * v0;
            } else {
                betas[k] = 0.0;
            }

            // Apply reflector to the remaining columns.
            for j in (k + 1)..m {
                let mut dot = qr.get(k, j);
                for i in (k + 1)..n {
                    dot += qr.get(i, k) * qr.get(i, j);
                }
                let s = betas[k] * dot;
                if s != 0.0 {
                    let t = qr.get(k, j) - s;
                    qr.set(k, j, t);
                    for i in (k + 1)..n {
                        let t = qr.get(i, j) - s * qr.get(i, k);
                        qr.set(i, j, t);
                    }
                }
                col_norms[j] -= qr.get(k, j) * qr.get(k, j);
                if col_norms[j] < 0.0 {
                    col_norms[j] = 0.0;
                }
            }
        }

        Ok(PivotedQr {
            qr,
            betas,
            perm,
            rank,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Applies `Q'` to a copy of `y`.
    fn qt_apply(&self, y: &[f64]) -> Vec<f64> {
        let n = self.qr.rows;
        let mut w = y.to_vec();
        for k in 0..self.rank {
            let mut dot = w[k];
            for i in (k + 1)..n {
                dot += self.qr.get(i, k) * w[i];
            }
            let s = self.betas[k] * dot;
            if s != 0.0 {
                w[k] -= s;
                for i in (k + 1)..n {
                    w[i] -= s * self.qr.get(i, k);
                }
            }
        }
        w
    }

    /// Residual of `y` after projecting onto the column space of `A`.
    /// Works at any rank: only the `rank` leading reflectors are used.
    pub fn residualize(&self, y: &[f64]) -> Vec<f64> {
        let n = self.qr.rows;
        let mut w = self.qt_apply(y);
        for wi in w.iter_mut().take(self.rank) {
            *wi = 0.0;
        }
        // Apply the reflectors back in reverse order (Q w).
        for k in (0..self.rank).rev() {
            let mut dot = w[k];
            for i in (k + 1)..n {
                dot += self.qr.get(i, k) * w[i];
            }
            let s = self.betas[k] * dot;
            if s != 0.0 {
                w[k] -= s;
                for i in (k + 1)..n {
                    w[i] -= s * self.qr.get(i, k);
                }
            }
        }
        w
    }

    /// Basic least-squares solution that tolerates rank deficiency:
    /// coefficients of dependent columns are set to zero, so fitted values
    /// still equal the projection of `y`.
    pub fn solve_basic(&self, y: &[f64]) -> Vec<f64> {
        let m = self.qr.cols;
        let r = self.rank;
        let w = self.qt_apply(y);
        let mut x = vec![0.0; m];
        for k in (0..r).rev() {
            let mut s = w[k];
            for j in (k + 1)..r {
                s -= self.qr.get(k, j) * x[j];
            }
            x[k] = s / self.qr.get(k, k);
        }
        let mut out = vec![0.0; m];
        for k in 0..m {
            out[self.perm[k]] = x[k];
        }
        out
    }

    /// Least-squares solution of `A x = y`; errors on rank deficiency.
    pub fn solve(&self, y: &[f64]) -> Result<Vec<f64>> {
        let m = self.qr.cols;
        if self.rank < m {
            return Err(Error::RankDeficient {
                rank: self.rank,
                cols: m,
            });
        }
        if y.len() != self.qr.rows {
            return Err(Error::DimensionMismatch("solve: y length".into()));
        }
        let w = self.qt_apply(y);
        let mut x = vec![0.0; m];
        for k in (0..m).rev() {
            let mut s = w[k];
            for j in (k + 1)..m {
                s -= self.qr.get(k, j) * x[j];
            }
            x[k] = s / self.qr.get(k, k);
        }
        // Undo the column permutation.
        let mut out = vec![0.0; m];
        for k in 0..m {
            out[self.perm[k]] = x[k];
        }
        Ok(out)
    }

    /// `(A'A)^{-1}` from the R factor; requires full rank.
    pub fn xtx_inverse(&self) -> Result<Matrix> {
        let m = self.qr.cols;
        if self.rank < m {
            return Err(Error::RankDeficient {
                rank: self.rank,
                cols: m,
            });
        }
        // R^{-1} by back substitution on columns of the identity.
        let mut rinv = Matrix::zeros(m, m);
        for c in 0..m {
            let mut x = vec![0.0; m];
            for k in (0..=c).rev() {
                let mut s = if k == c { 1.0 } else { 0.0 };
                for j in (k + 1)..=c {
                    s -= self.qr.get(k, j) * x[j];
                }
                x[k] = s / self.qr.get(k, k);
            }
            for k in 0..m {
                rinv.set(k, c, x[k]);
            }
        }
        // (A'A)^{-1} = P R^{-1} R^{-T} P'
        let mut core = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let mut s = 0.0;
                for k in j.max(i)..m {
                    s += rinv.get(i, k) * rinv.get(j, k);
                }
                core.set(i, j, s);
            }
        }
        let mut out = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                out.set(self.perm[i], self.perm[j], core.get(i, j));
            }
        }
        Ok(out)
    }
}

/// An ordinary least squares fit.
#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Residual variance `SSR / T_eff`.
    pub sigma2_hat: f64,
    /// Coefficient covariance `sigma2_hat * (X'X)^{-1}`.
    pub covariance: Matrix,
}

impl OlsFit {
    pub fn ssr(&self) -> f64 {
        self.residuals.iter().map(|r| r * r).sum()
    }
}

/// Least squares of `y` on the columns of `x`.
pub fn ols(x: &Matrix, y: &[f64]) -> Result<OlsFit> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "ols: X has {} rows, y has {}",
            x.rows(),
            y.len()
        )));
    }
    if x.rows() <= x.cols() {
        return Err(Error::InsufficientDof(format!(
            "ols needs rows > cols, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let qr = PivotedQr::new(x)?;
    let coefficients = qr.solve(y)?;
    let fitted = x.matvec(&coefficients)?;
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let sigma2_hat = ssr / x.rows() as f64;
    let xtx_inv = qr.xtx_inverse()?;
    let mut covariance = xtx_inv;
    for v in covariance.data.iter_mut() {
        *v *= sigma2_hat;
    }
    Ok(OlsFit {
        coefficients,
        residuals,
        sigma2_hat,
        covariance,
    })
}

/// Residuals of `y` projected off the column space of `x`: `M(X) y`.
pub fn residual_maker(x: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    if x.cols() == 0 {
        return Ok(y.to_vec());
    }
    Ok(ols(x, y)?.residuals)
}

/// Coefficient of determination from restricted and full residual vectors:
/// `1 - nu'nu / xi'xi`.
pub fn r_squared(residuals_restricted: &[f64], residuals_full: &[f64]) -> Result<f64> {
    if residuals_restricted.len() != residuals_full.len() {
        return Err(Error::DimensionMismatch("r_squared: vector lengths".into()));
    }
    let xi: f64 = residuals_restricted.iter().map(|v| v * v).sum();
    if xi <= 0.0 {
        return Err(Error::DegenerateDenominator(
            "restricted residual sum of squares is zero".into(),
        ));
    }
    let nu: f64 = residuals_full.iter().map(|v| v * v).sum();
    Ok(1.0 - nu / xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn norm2(a: &[f64]) -> f64 {
        dot(a, a).sqrt()
    }
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn ols_identity_design() {
        let x = Matrix::identity(3);
        // rows > cols guard would reject a square system; bypass via QR solve.
        let qr = PivotedQr::new(&x).unwrap();
        let b = qr.solve(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(b, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn ols_intercept_is_mean() {
        let x = Matrix::from_cols(&[vec![1.0; 4]]).unwrap();
        let fit = ols(&x, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_close(fit.coefficients[0], 2.5, 1e-12);
    }

    #[test]
    fn ols_matches_normal_equations_oracle() {
        // 5x2 seeded system solved by the 2x2 normal equations by hand.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let c0: Vec<f64> = (0..5).map(|_| rng.random::<f64>() - 0.5).collect();
        let c1: Vec<f64> = (0..5).map(|_| rng.random::<f64>() - 0.5).collect();
        let y: Vec<f64> = (0..5).map(|_| rng.random::<f64>() - 0.5).collect();
        let x = Matrix::from_cols(&[c0.clone(), c1.clone()]).unwrap();

        let (a11, a12, a22) = (dot(&c0, &c0), dot(&c0, &c1), dot(&c1, &c1));
        let (b1, b2) = (dot(&c0, &y), dot(&c1, &y));
        let det = a11 * a22 - a12 * a12;
        let beta0 = (a22 * b1 - a12 * b2) / det;
        let beta1 = (a11 * b2 - a12 * b1) / det;

        let fit = ols(&x, &y).unwrap();
        assert_close(fit.coefficients[0], beta0, 1e-10);
        assert_close(fit.coefficients[1], beta1, 1e-10);

        // Normal equations residual orthogonality.
        let g0 = dot(&c0, &fit.residuals);
        let g1 = dot(&c1, &fit.residuals);
        let scale = b1.abs().max(b2.abs());
        assert!(g0.abs() <= 1e-8 * scale && g1.abs() <= 1e-8 * scale);
    }

    #[test]
    fn residual_maker_definition_and_idempotence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cols: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..6).map(|_| rng.random::<f64>() - 0.5).collect())
            .collect();
        let y: Vec<f64> = (0..6).map(|_| rng.random::<f64>() - 0.5).collect();
        let x = Matrix::from_cols(&cols).unwrap();

        let m1 = residual_maker(&x, &y).unwrap();
        // Definition: y - X * ols coefficients.
        let fit = ols(&x, &y).unwrap();
        for (a, b) in m1.iter().zip(&fit.residuals) {
            assert_close(*a, *b, 1e-12);
        }
        // Idempotence.
        let m2 = residual_maker(&x, &m1).unwrap();
        let ynorm = norm2(&y);
        for (a, b) in m1.iter().zip(&m2) {
            assert!((a - b).abs() <= 1e-10 * ynorm);
        }
    }

    #[test]
    fn residual_maker_full_span_and_orthogonal() {
        // X spans all of R^3 -> zero vector (square full-rank via QR solve path).
        let x = Matrix::from_cols(&[
            vec![1.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![1.0, 1.0, 1.0],
        ])
        .unwrap();
        let qr = PivotedQr::new(&x).unwrap();
        let b = qr.solve(&[2.0, -1.0, 0.5]).unwrap();
        let fitted = x.matvec(&b).unwrap();
        for (f, y) in fitted.iter().zip(&[2.0, -1.0, 0.5]) {
            assert_close(*f, *y, 1e-12);
        }

        // y orthogonal to X's columns is unchanged.
        let x = Matrix::from_cols(&[vec![1.0, 1.0, 1.0, 1.0]]).unwrap();
        let y = vec![1.0, -1.0, 1.0, -1.0];
        let r = residual_maker(&x, &y).unwrap();
        for (a, b) in r.iter().zip(&y) {
            assert_close(*a, *b, 1e-12);
        }
    }

    #[test]
    fn rank_deficiency_detected() {
        let c0 = vec![1.0, 2.0, 3.0, 4.0];
        let c1: Vec<f64> = c0.iter().map(|v| 2.0 * v).collect();
        let x = Matrix::from_cols(&[c0, c1]).unwrap();
        match ols(&x, &[1.0, 0.0, 1.0, 0.0]) {
            Err(Error::RankDeficient { rank, cols }) => {
                assert_eq!((rank, cols), (1, 2));
            }
            other => panic!("expected RankDeficient, got {other:?}"),
        }
    }

    #[test]
    fn r_squared_cases() {
        let xi = vec![1.0, 2.0, 3.0];
        assert_close(r_squared(&xi, &xi).unwrap(), 0.0, 1e-15);
        assert_close(r_squared(&xi, &[0.0, 0.0, 0.0]).unwrap(), 1.0, 1e-15);
        // xi'xi = 10, nu'nu = 9.5 -> 0.05
        let xi = vec![3.0, 1.0];
        let nu = vec![9.5f64.sqrt(), 0.0];
        assert_close(r_squared(&xi, &nu).unwrap(), 0.05, 1e-12);
        assert!(matches!(
            r_squared(&[0.0, 0.0], &[0.0, 0.0]),
            Err(Error::DegenerateDenominator(_))
        ));
    }

    #[test]
    fn xtx_inverse_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cols: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..10).map(|_| rng.random::<f64>() - 0.5).collect())
            .collect();
        let x = Matrix::from_cols(&cols).unwrap();
        let qr = PivotedQr::new(&x).unwrap();
        let inv = qr.xtx_inverse().unwrap();
        let xtx = x.transpose().matmul(&x).unwrap();
        let prod = xtx.matmul(&inv).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_close(prod.get(i, j), expect, 1e-10);
            }
        }
    }
}
