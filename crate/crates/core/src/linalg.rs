//! Dense and structured linear-algebra kernels used by the scattering formula.

use nalgebra::DMatrix;

use crate::error::{CasimirError, Result};

/// `ln|det M|` and the sign of the determinant via LU with partial pivoting.
pub fn log_det_lu(m: DMatrix<f64>) -> Result<(f64, f64)> {
    if !m.is_square() {
        return Err(CasimirError::InvalidArgument(
            "determinant of a non-square matrix".into(),
        ));
    }
    let lu = m.lu();
    let mut sign: f64 = lu.p().determinant();
    let mut log_abs = 0.0;
    let u = lu.u();
    for i in 0..u.nrows() {
        let d = u[(i, i)];
        if d == 0.0 || !d.is_finite() {
            return Err(CasimirError::Factorization(format!(
                "zero or non-finite pivot at {i}"
            )));
        }
        sign *= d.signum();
        log_abs += d.abs().ln();
    }
    Ok((sign, log_abs))
}

/// `ln det(1 − N)`, requiring a positive determinant.
pub fn log_det_one_minus(n: &DMatrix<f64>) -> Result<f64> {
    let dim = n.nrows();
    let m = DMatrix::identity(dim, dim) - n;
    let (sign, log_abs) = log_det_lu(m)?;
    if sign <= 0.0 {
        return Err(CasimirError::Factorization(
            "det(1 - N) is not positive".into(),
        ));
    }
    Ok(log_abs)
}

/// `ln det M` for symmetric positive-definite `M` via Cholesky; `None` if `M` is not SPD.
pub fn cholesky_log_det(m: DMatrix<f64>) -> Option<f64> {
    let chol = nalgebra::Cholesky::new(m)?;
    let l = chol.l_dirty();
    Some((0..l.nrows()).map(|i| 2.0 * l[(i, i)].ln()).sum())
}

/// Tridiagonal matrix stored by diagonals.
///
/// `lower[i]` is element `(i + 1, i)` and `upper[i]` is element `(i, i + 1)`.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

/// LU factors of a [`Tridiagonal`] matrix without pivoting.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Thomas factorization. Intended for diagonally dominant systems.
    pub fn factor(&self) -> Result<TridiagonalLu> {
        let n = self.dim();
        let mut diag = self.diag.clone();
        let mut lower = self.lower.clone();
        for i in 1..n {
            if diag[i - 1] == 0.0 {
                return Err(CasimirError::Factorization(format!(
                    "singular tridiagonal pivot at {}",
                    i - 1
                )));
            }
            let l = lower[i - 1] / diag[i - 1];
            lower[i - 1] = l;
            diag[i] -= l * self.upper[i - 1];
        }
        if n > 0 && diag[n - 1] == 0.0 {
            return Err(CasimirError::Factorization(format!(
                "singular tridiagonal pivot at {}",
                n - 1
            )));
        }
        Ok(TridiagonalLu {
            lower,
            diag,
            upper: self.upper.clone(),
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i + 1, i)] = self.lower[i];
                m[(i, i + 1)] = self.upper[i];
            }
        }
        m
    }
}

impl TridiagonalLu {
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.diag.len();
        for i in 1..n {
            rhs[i] -= self.lower[i - 1] * rhs[i - 1];
        }
        rhs[n - 1] /= self.diag[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - self.upper[i] * rhs[i + 1]) / self.diag[i];
        }
    }

    /// Dense inverse, column by column.
    pub fn inverse(&self) -> DMatrix<f64> {
        let n = self.diag.len();
        let mut inv = DMatrix::zeros(n, n);
        let mut col = vec![0.0; n];
        for j in 0..n {
            col.iter_mut().for_each(|v| *v = 0.0);
            col[j] = 1.0;
            self.solve_in_place(&mut col);
            inv.column_mut(j).copy_from_slice(&col);
        }
        inv
    }
}

/// Symmetric matrix with half-bandwidth `bw`, lower band stored row-wise.
///
/// Element `(i, j)` with `i − bw ≤ j ≤ i` lives at `data[i * (bw + 1) + (j + bw − i)]`.
#[derive(Debug, Clone)]
pub struct SymmetricBand {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl SymmetricBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        let bw = bw.min(n.saturating_sub(1));
        Self {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Element `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Sets element `(i, j)` with `j ≤ i`.
    pub fn set_lower(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    /// Lower-band row `i` as a slice covering columns `i − bw ..= i` (clipped at 0).
    fn row(&self, i: usize) -> (usize, &[f64]) {
        let start = i.saturating_sub(self.bw);
        let off = i * (self.bw + 1) + (start + self.bw - i);
        (start, &self.data[off..i * (self.bw + 1) + self.bw + 1])
    }

    /// In-place banded Cholesky returning `ln det`; `Err(row)` at the first
    /// non-positive pivot.
    pub fn cholesky_log_det(mut self) -> std::result::Result<f64, usize> {
        let n = self.n;
        let bw = self.bw;
        let mut log_det = 0.0;
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                // dot product of rows i and j over the shared column range
                let k0 = j0.max(j.saturating_sub(bw));
                let (si, ri) = self.row(i);
                let (sj, rj) = self.row(j);
                let mut s = 0.0;
                for k in k0..j {
                    s += ri[k - si] * rj[k - sj];
                }
                let idx = self.idx(i, j);
                let v = self.data[idx] - s;
                if i == j {
                    if !(v > 0.0) {
                        return Err(i);
                    }
                    let d = v.sqrt();
                    self.data[idx] = d;
                    log_det += 2.0 * d.ln();
                } else {
                    let djj = self.data[self.idx(j, j)];
                    self.data[idx] = v / djj;
                }
            }
        }
        Ok(log_det)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }
}
