//! Strip storage of the symmetrized TE translation matrix and its decimation.

use nalgebra::DMatrix;

use super::plan::TruncationPlan;
use crate::error::{CasimirError, Result};
use crate::geometry::SphereGeometry;
use crate::linalg::SymmetricBand;
use crate::special::LogFactorials;

/// Row of a [`StripMatrix`]: contiguous columns starting at `start`.
#[derive(Debug, Clone, Default)]
struct StripRow {
    start: usize,
    values: Vec<f64>,
}

impl StripRow {
    fn end(&self) -> usize {
        self.start + self.values.len()
    }
}

/// `A_m` restricted to a band around the oblique diagonal `l ≈ l′R₁/R₂`.
///
/// Rows are `l − m ∈ [0, N₁)`, columns `l′ − m ∈ [0, N₂)`; anything outside
/// the stored band is exactly zero.
#[derive(Debug, Clone)]
pub struct StripMatrix {
    m: usize,
    cols: usize,
    rows: Vec<StripRow>,
}

/// `½ ln r_l` for one sphere; independent of `m` and of the gap.
pub(crate) struct SphereTerms {
    pub half_log_r: Vec<f64>,
}

impl SphereTerms {
    pub fn new(r: &[f64]) -> Self {
        Self {
            half_log_r: r.iter().map(|v| 0.5 * v.ln()).collect(),
        }
    }
}

impl StripMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.cols)
    }

    /// Number of stored elements.
    pub fn stored(&self) -> usize {
        self.rows.iter().map(|r| r.values.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = &self.rows[i];
        if j >= r.start && j < r.end() {
            r.values[j - r.start]
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.rows.len(), self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for (k, v) in r.values.iter().enumerate() {
                a[(i, r.start + k)] = *v;
            }
        }
        a
    }

    /// `1 − AAᵀ` in symmetric band storage.
    pub fn one_minus_aat_band(&self) -> SymmetricBand {
        let n = self.rows.len();
        // first row k ≤ i whose stored columns reach row i's start
        let mut first = vec![0usize; n];
        let mut k = 0;
        for (i, f) in first.iter_mut().enumerate() {
            while k < i
                && (self.rows[k].end() <= self.rows[i].start || self.rows[k].values.is_empty())
            {
                k += 1;
            }
            *f = k;
        }
        let bw = first
            .iter()
            .enumerate()
            .map(|(i, f)| i - f)
            .max()
            .unwrap_or(0);
        let mut band = SymmetricBand::zeros(n, bw);
        for (i, &f) in first.iter().enumerate() {
            let ri = &self.rows[i];
            for k in f..=i {
                let rk = &self.rows[k];
                let lo = ri.start.max(rk.start);
                let hi = ri.end().min(rk.end());
                let mut s = 0.0;
                for j in lo..hi {
                    s += ri.values[j - ri.start] * rk.values[j - rk.start];
                }
                let v = if i == k { 1.0 - s } else { -s };
                band.set_lower(i, k, v);
            }
        }
        band
    }

    /// `Ã_{j₁j₂} = √(p₁p₂) A_{p₁j₁, p₂j₂}`, the upper-left element of each block.
    pub fn decimate(&self, p1: usize, p2: usize) -> DMatrix<f64> {
        let n1 = self.rows.len().div_ceil(p1);
        let n2 = self.cols.div_ceil(p2);
        let s = ((p1 * p2) as f64).sqrt();
        DMatrix::from_fn(n1, n2, |a, b| s * self.get(a * p1, b * p2))
    }
}

/// Stored column range of row `i`, or the full width when no strip is used.
fn column_range(
    i: usize,
    m: usize,
    geom: &SphereGeometry,
    plan: &TruncationPlan,
) -> (usize, usize) {
    let Some(w) = plan.half_width else {
        return (0, plan.n2);
    };
    let centre = (i + m) as f64 * geom.r2 / geom.r1 - m as f64;
    let lo = (centre - w).ceil().max(0.0);
    let hi = (centre + w).floor() + 1.0;
    let hi = hi.min(plan.n2 as f64).max(lo);
    (lo.min(plan.n2 as f64) as usize, hi as usize)
}

/// Builds `A_m` for the two spheres at `geom`, using the (frozen) plan.
///
/// `s1`, `s2` hold the Mie data for `l = 0..m_max + N_i`; `lf` must cover
/// `(l + l′)!` for the largest pair.
pub(crate) fn build_a_strip(
    m: usize,
    geom: &SphereGeometry,
    plan: &TruncationPlan,
    s1: &SphereTerms,
    s2: &SphereTerms,
    lf: &LogFactorials,
) -> Result<StripMatrix> {
    let l = geom.centre_distance();
    let (lr1, lr2) = ((geom.r1 / l).ln(), (geom.r2 / l).ln());
    let side = |lr: f64, t: &SphereTerms, ll: usize| {
        (ll as f64 + 0.5) * lr + t.half_log_r[ll] - 0.5 * (lf.get(ll + m) + lf.get(ll - m))
    };
    let col_terms: Vec<f64> = (0..plan.n2).map(|j| side(lr2, s2, j + m)).collect();
    let mut rows = Vec::with_capacity(plan.n1);
    for i in 0..plan.n1 {
        let li = i + m;
        let (lo, hi) = column_range(i, m, geom, plan);
        let row_term = side(lr1, s1, li);
        let mut values = Vec::with_capacity(hi - lo);
        for (j, c) in col_terms.iter().enumerate().take(hi).skip(lo) {
            let v = (lf.get(li + j + m) + row_term + c).exp();
            if !v.is_finite() {
                return Err(CasimirError::NonFinite { m, row: i, col: j });
            }
            values.push(v);
        }
        rows.push(StripRow { start: lo, values });
    }
    Ok(StripMatrix {
        m,
        cols: plan.n2,
        rows,
    })
}
