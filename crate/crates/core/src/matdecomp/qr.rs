use super::matrix::{ComplexMatrix, C64};
use super::RANK_TOL;
use crate::error::{Error, Result};

/// Thin QR factors: `q` has orthonormal columns, `r` is upper triangular
/// with a real positive diagonal.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: ComplexMatrix,
    pub r: ComplexMatrix,
}

/// Thin QR by modified Gram-Schmidt with one reorthogonalization pass.
///
/// The diagonal of `r` comes out real and positive because each pivot is a
/// column norm.
pub fn qr(a: &ComplexMatrix) -> Result<QrFactors> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(Error::Dimension(format!("qr needs rows >= cols, got {m}x{n}")));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut q = a.clone();
    let mut r = ComplexMatrix::zeros(n, n);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();

    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let v = &mut rest[0];
        for _pass in 0..2 {
            for (k, qk) in done.iter().enumerate() {
                let proj: C64 = qk.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                r[(k, j)] += proj;
                for (vi, qi) in v.iter_mut().zip(qk) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        r[(j, j)] = C64::new(norm, 0.0);
        if norm > 0.0 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| r[(i, i)].re).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if n > 0 && (max == 0.0 || min <= RANK_TOL * max) {
        return Err(Error::RankDeficient {
            ratio: if max > 0.0 { min / max } else { 0.0 },
        });
    }
    for (j, c) in cols.iter().enumerate() {
        q.set_column(j, c);
    }
    Ok(QrFactors { q, r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_fixed_point() {
        let f = qr(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(f.q, ComplexMatrix::identity(3));
        assert_eq!(f.r, ComplexMatrix::identity(3));
    }

    #[test]
    fn permutation_matrix() {
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let f = qr(&a).unwrap();
        assert_eq!(f.r.diag(), vec![C64::new(1.0, 0.0); 2]);
        assert!(f.q.unitarity_error() < 1e-15);
        assert!((&f.q * &f.r).max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn rank_deficient_rejected() {
        let a = ComplexMatrix::from_real(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]).unwrap();
        assert!(matches!(qr(&a), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn wide_rejected() {
        assert!(matches!(qr(&ComplexMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
    }
}
