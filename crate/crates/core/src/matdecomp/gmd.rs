//! Geometric mean decomposition `a = q · r · pᴴ`.
//!
//! Starting from the SVD, the diagonal of singular values is swept with
//! pairs of plane rotations. Each step fixes one diagonal entry to the
//! geometric mean and pushes the leftover factor onto the trailing
//! diagonal, so the product of the remaining entries is preserved.

use super::matrix::{ComplexMatrix, C64};
use super::svd::{svd, Svd};
use super::RANK_TOL;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GmdFactors {
    /// `rows × n`, orthonormal columns.
    pub q: ComplexMatrix,
    /// `n × n` upper triangular; every diagonal entry equals `mean`.
    pub r: ComplexMatrix,
    /// `n × n` unitary.
    pub p: ComplexMatrix,
    /// Geometric mean of the singular values of the input.
    pub mean: f64,
}

pub fn gmd(a: &ComplexMatrix) -> Result<GmdFactors> {
    if a.rows() < a.cols() {
        return Err(Error::Dimension(format!(
            "gmd needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    gmd_from_svd(svd(a)?)
}

/// Runs the GMD sweep on a precomputed thin SVD of a tall matrix.
pub fn gmd_from_svd(svd: Svd) -> Result<GmdFactors> {
    let Svd { u, s, v } = svd;
    let n = s.len();
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let smax = s[0];
    let smin = s[n - 1];
    if smax == 0.0 || smin <= RANK_TOL * smax {
        return Err(Error::RankDeficient {
            ratio: if smax > 0.0 { smin / smax } else { 0.0 },
        });
    }
    let mean = if smax == smin {
        smax
    } else {
        (s.iter().map(|x| x.ln()).sum::<f64>() / n as f64).exp()
    };

    // Real working copies: the sweep only ever mixes real entries.
    let mut r = vec![vec![0.0f64; n]; n];
    for (i, &si) in s.iter().enumerate() {
        r[i][i] = si;
    }
    let mut q = u;
    let mut p = v;

    for k in 0..n.saturating_sub(1) {
        // Leftmost trailing entry at or above the mean goes to k, the
        // smallest trailing entry goes to k + 1.
        let big = (k..n).find(|&i| r[i][i] >= mean).unwrap_or(k);
        swap_index(&mut r, &mut q, &mut p, k, big);
        let small = (k + 1..n)
            .min_by(|&i, &j| r[i][i].total_cmp(&r[j][j]).then(i.cmp(&j)))
            .expect("k + 1 < n");
        swap_index(&mut r, &mut q, &mut p, k + 1, small);

        let d1 = r[k][k];
        let d2 = r[k + 1][k + 1];
        let denom = d1 * d1 - d2 * d2;
        if denom <= 0.0 || (d1 - mean).abs() <= f64::EPSILON * mean {
            // Already at the mean: nothing to mix.
            r[k][k] = mean;
            r[k + 1][k + 1] = d1 * d2 / mean;
            continue;
        }
        let c = ((mean * mean - d2 * d2) / denom).clamp(0.0, 1.0).sqrt();
        let sn = (1.0 - c * c).sqrt();
        // Right rotation G1 = [c -s; s c], left rotation G2 = [c·d1 -s·d2; s·d2 c·d1] / mean.
        let (a11, a12, a21, a22) = (c * d1 / mean, -sn * d2 / mean, sn * d2 / mean, c * d1 / mean);
        // r ← G2ᵀ r G1 on rows/cols k, k+1.
        for row in r.iter_mut() {
            let (x, y) = (row[k], row[k + 1]);
            row[k] = x * c + y * sn;
            row[k + 1] = -x * sn + y * c;
        }
        for j in 0..n {
            let (x, y) = (r[k][j], r[k + 1][j]);
            r[k][j] = a11 * x + a21 * y;
            r[k + 1][j] = a12 * x + a22 * y;
        }
        r[k][k] = mean;
        r[k + 1][k] = 0.0;
        r[k + 1][k + 1] = d1 * d2 / mean;
        rotate_columns(&mut q, k, [[a11, a12], [a21, a22]]);
        rotate_columns(&mut p, k, [[c, -sn], [sn, c]]);
    }
    r[n - 1][n - 1] = mean;

    let r = ComplexMatrix::from_fn(n, n, |i, j| {
        if j < i {
            C64::new(0.0, 0.0)
        } else {
            C64::new(r[i][j], 0.0)
        }
    });
    Ok(GmdFactors { q, r, p, mean })
}

/// Symmetric permutation of indices `a` and `b`.
fn swap_index(r: &mut [Vec<f64>], q: &mut ComplexMatrix, p: &mut ComplexMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    r.swap(a, b);
    for row in r.iter_mut() {
        row.swap(a, b);
    }
    swap_columns(q, a, b);
    swap_columns(p, a, b);
}

fn swap_columns(m: &mut ComplexMatrix, a: usize, b: usize) {
    for i in 0..m.rows() {
        let t = m[(i, a)];
        m[(i, a)] = m[(i, b)];
        m[(i, b)] = t;
    }
}

/// Columns (k, k+1) ← columns (k, k+1) · g.
fn rotate_columns(m: &mut ComplexMatrix, k: usize, g: [[f64; 2]; 2]) {
    for i in 0..m.rows() {
        let (x, y) = (m[(i, k)], m[(i, k + 1)]);
        m[(i, k)] = x * g[0][0] + y * g[1][0];
        m[(i, k + 1)] = x * g[0][1] + y * g[1][1];
    }
}
