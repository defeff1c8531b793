//! Transmit precoders and the receiver-side triangular factors they induce.
//!
//! Every scheme is described through the augmented channel
//! `G = [α·H·F; √aug·I_L]` acting on unscaled constellation points. Its QR
//! factorization `G = Q_G·R_G` gives the triangular model the detectors
//! work on, and `q_u` (the top `N_r` rows of `Q_G`) projects the received
//! vector: `ỹ = q_uᴴ·y`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matdecomp::{gmd, qr, svd, ComplexMatrix, C64, RANK_TOL};

/// Agreement required between the GMD factor and a direct QR of `G`.
pub const CONSISTENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Identity,
    Svd,
    Bgmd,
    Ucd,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Identity => "identity",
            Scheme::Svd => "svd",
            Scheme::Bgmd => "bgmd",
            Scheme::Ucd => "ucd",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Scheme::Identity),
            "svd" => Ok(Scheme::Svd),
            "bgmd" => Ok(Scheme::Bgmd),
            "ucd" => Ok(Scheme::Ucd),
            other => Err(Error::Config(format!("unknown precoder {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PrecoderBundle {
    pub scheme: Scheme,
    /// `N_t × L`.
    pub f: ComplexMatrix,
    /// `L × L` upper triangular, real positive diagonal.
    pub r_g: ComplexMatrix,
    /// `N_r × L`.
    pub q_u: ComplexMatrix,
    pub phi: Vec<f64>,
    /// Amplitude scaling applied to unscaled constellation points.
    pub alpha: f64,
    /// Regularization `aug` in the lower block `√aug·I_L` of `G`.
    pub aug: f64,
}

impl PrecoderBundle {
    pub fn layers(&self) -> usize {
        self.r_g.rows()
    }

    /// `ỹ = q_uᴴ·y`.
    pub fn project(&self, y: &[C64]) -> Vec<C64> {
        self.q_u.adjoint_mul_vec(y)
    }

    /// Transmit vector `α·F·s` for unscaled symbols `s`.
    pub fn transmit(&self, s: &[C64]) -> Vec<C64> {
        self.f.mul_vec(s).into_iter().map(|x| x * self.alpha).collect()
    }

    /// The augmented channel `[α·H·F; √aug·I_L]`, assembled explicitly.
    pub fn augmented_channel(&self, h: &ComplexMatrix) -> Result<ComplexMatrix> {
        augmented(h, &self.f, self.alpha, self.aug)
    }
}

/// Amplitude scaling and regularization for the plain (non-GMD) schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularization {
    pub alpha: f64,
    pub aug: f64,
}

impl Regularization {
    /// Zero-forcing QR of `H·F` at unit scale.
    pub const NONE: Self = Self { alpha: 1.0, aug: 0.0 };

    /// MMSE regularization for a uniform prior of energy `symbol_var`.
    pub fn mmse(alpha: f64, noise_var: f64, symbol_var: f64) -> Self {
        Self {
            alpha,
            aug: noise_var / symbol_var,
        }
    }
}

/// Distribution-aware GMD precoder: augmentation `σ²·ν`.
pub fn build_bgmd(h: &ComplexMatrix, nu: f64, noise_var: f64, alpha: f64, phi: &[f64]) -> Result<PrecoderBundle> {
    if !(nu > 0.0) {
        return Err(Error::DegenerateShaping(nu));
    }
    gmd_family(h, noise_var * nu, alpha, phi, Scheme::Bgmd)
}

/// Uniform-prior GMD precoder: augmentation `σ² / symbol_var`.
pub fn build_ucd(
    h: &ComplexMatrix,
    noise_var: f64,
    alpha: f64,
    symbol_var: f64,
    phi: &[f64],
) -> Result<PrecoderBundle> {
    if !(symbol_var > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "symbol_var must be > 0, got {symbol_var}"
        )));
    }
    gmd_family(h, noise_var / symbol_var, alpha, phi, Scheme::Ucd)
}

/// `F` = first `L` columns of the identity.
pub fn build_identity(h: &ComplexMatrix, layers: usize, reg: Regularization) -> Result<PrecoderBundle> {
    if layers == 0 || layers > h.cols() || layers > h.rows() {
        return Err(Error::Dimension(format!(
            "{layers} layers on a {}x{} channel",
            h.rows(),
            h.cols()
        )));
    }
    let f = ComplexMatrix::eye(h.cols(), layers);
    triangularize(h, f, vec![1.0; layers], reg, Scheme::Identity)
}

/// `F = V·Φ^{1/2}` without mixing; layer gains are the singular values.
pub fn build_svd(h: &ComplexMatrix, phi: &[f64], reg: Regularization) -> Result<PrecoderBundle> {
    check_phi(h, phi)?;
    let d = svd(h)?;
    let l = phi.len();
    let f = d.v.block(0, 0, h.cols(), l).scale_columns(&sqrt_all(phi));
    triangularize(h, f, phi.to_vec(), reg, Scheme::Svd)
}

fn triangularize(
    h: &ComplexMatrix,
    f: ComplexMatrix,
    phi: Vec<f64>,
    reg: Regularization,
    scheme: Scheme,
) -> Result<PrecoderBundle> {
    let g = augmented(h, &f, reg.alpha, reg.aug)?;
    let qr = qr(&g)?;
    Ok(PrecoderBundle {
        scheme,
        q_u: qr.q.block(0, 0, h.rows(), f.cols()),
        r_g: qr.r,
        f,
        phi,
        alpha: reg.alpha,
        aug: reg.aug,
    })
}

fn gmd_family(h: &ComplexMatrix, aug: f64, alpha: f64, phi: &[f64], scheme: Scheme) -> Result<PrecoderBundle> {
    check_phi(h, phi)?;
    if !(alpha > 0.0) || !(aug >= 0.0) || !aug.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need alpha > 0 and aug >= 0, got {alpha}, {aug}"
        )));
    }
    let (nr, nt, l) = (h.rows(), h.cols(), phi.len());
    let d = svd(h)?;
    if d.s[l - 1] <= RANK_TOL * d.s[0] {
        return Err(Error::RankDeficient {
            ratio: d.s[l - 1] / d.s[0],
        });
    }
    let sqrt_phi = sqrt_all(phi);
    let col_gain: Vec<f64> = (0..l).map(|i| alpha * d.s[i] * sqrt_phi[i]).collect();
    let top = d.u.block(0, 0, nr, l).scale_columns(&col_gain);
    let b = top.vstack(&ComplexMatrix::identity(l).scale(aug.sqrt()))?;
    let g = gmd(&b)?;
    let f = d.v.block(0, 0, nt, l).scale_columns(&sqrt_phi).matmul(&g.p)?;
    let bundle = PrecoderBundle {
        scheme,
        f,
        q_u: g.q.block(0, 0, nr, l),
        r_g: g.r,
        phi: phi.to_vec(),
        alpha,
        aug,
    };
    // The GMD factor must be the (unique) R of a direct QR of G.
    let direct = qr(&bundle.augmented_channel(h)?)?;
    let err = direct.r.max_abs_diff(&bundle.r_g);
    if err > CONSISTENCY_TOL * bundle.r_g.frobenius_norm().max(1.0) {
        return Err(Error::Consistency(format!("R from GMD and QR of G differ by {err:e}")));
    }
    Ok(bundle)
}

fn augmented(h: &ComplexMatrix, f: &ComplexMatrix, alpha: f64, aug: f64) -> Result<ComplexMatrix> {
    let top = h.matmul(f)?.scale(alpha);
    top.vstack(&ComplexMatrix::identity(f.cols()).scale(aug.sqrt()))
}

fn check_phi(h: &ComplexMatrix, phi: &[f64]) -> Result<()> {
    let l = phi.len();
    if l == 0 || l > h.rows().min(h.cols()) {
        return Err(Error::Dimension(format!(
            "{l} layers on a {}x{} channel",
            h.rows(),
            h.cols()
        )));
    }
    let sum: f64 = phi.iter().sum();
    if phi.iter().any(|&p| !(p >= 0.0)) || (sum - l as f64).abs() > 1e-9 * l as f64 {
        return Err(Error::InvalidParameter(format!(
            "power loading must be >= 0 and sum to {l}"
        )));
    }
    Ok(())
}

fn sqrt_all(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.sqrt()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_channel(seed: u64) -> ComplexMatrix {
        // Small LCG keeps this module free of RNG plumbing.
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        ComplexMatrix::from_fn(4, 4, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn bgmd_on_identity_channel_needs_no_mixing() {
        let h = ComplexMatrix::identity(3);
        let b = build_bgmd(&h, 0.1, 0.5, 1.0, &[1.0; 3]).unwrap();
        let expected = (1.0f64 + 0.05).sqrt();
        for d in b.r_g.diag() {
            assert!((d.re - expected).abs() < 1e-12 && d.im == 0.0);
        }
        // F is unitary and diagonal up to phases.
        for i in 0..3 {
            for j in 0..3 {
                let v = b.f[(i, j)].norm();
                assert!((v - (i == j) as u8 as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bgmd_equal_diagonal() {
        let h = test_channel(3);
        let b = build_bgmd(&h, 0.05, 0.1, 0.3, &[1.0; 4]).unwrap();
        let d: Vec<f64> = b.r_g.diag().iter().map(|c| c.re).collect();
        for x in &d {
            assert!((x / d[0] - 1.0).abs() < 1e-9);
        }
        assert!(b.r_g.is_upper_triangular());
        assert!(b.f.unitarity_error() < 1e-10);
    }

    #[test]
    fn precoder_depends_on_nu() {
        let h = test_channel(5);
        let a = build_bgmd(&h, 0.1, 0.2, 0.3, &[1.0; 4]).unwrap();
        let b = build_bgmd(&h, 0.05, 0.2, 0.3, &[1.0; 4]).unwrap();
        assert!(a.f.sub(&b.f).frobenius_norm() > 1e-6);
    }

    #[test]
    fn zero_nu_is_degenerate() {
        let h = test_channel(1);
        assert_eq!(
            build_bgmd(&h, 0.0, 0.1, 1.0, &[1.0; 4]).unwrap_err(),
            Error::DegenerateShaping(0.0)
        );
    }

    #[test]
    fn ucd_matches_bgmd_at_inverse_energy() {
        let h = test_channel(9);
        let es = 42.0;
        let u = build_ucd(&h, 0.3, 0.15, es, &[1.0; 4]).unwrap();
        let b = build_bgmd(&h, 1.0 / es, 0.3, 0.15, &[1.0; 4]).unwrap();
        assert!(u.f.max_abs_diff(&b.f) < 1e-10);
        assert!(u.r_g.max_abs_diff(&b.r_g) < 1e-10);
        assert!(u.q_u.max_abs_diff(&b.q_u) < 1e-10);
    }

    #[test]
    fn svd_exposes_unequal_gains() {
        let h = ComplexMatrix::from_diag(&[3.0, 1.0]);
        let b = build_svd(&h, &[1.0, 1.0], Regularization::NONE).unwrap();
        let d: Vec<f64> = b.r_g.diag().iter().map(|c| c.re).collect();
        assert!((d[0] - 3.0).abs() < 1e-12 && (d[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_on_identity_channel() {
        let h = ComplexMatrix::identity(2);
        let b = build_identity(&h, 2, Regularization { alpha: 1.0, aug: 0.44 }).unwrap();
        let expected = 1.2f64;
        for d in b.r_g.diag() {
            assert!((d.re - expected).abs() < 1e-12);
        }
        assert!(b.r_g[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn phi_validated() {
        let h = test_channel(2);
        assert!(build_ucd(&h, 0.1, 1.0, 42.0, &[2.0, 1.0, 1.0, 1.0]).is_err());
        assert!(build_ucd(&h, 0.1, 1.0, 42.0, &[1.0; 5]).is_err());
    }
}
