//! Symbol detection on the triangular model `ỹ ≈ R_G·s`.
//!
//! All detectors share one objective, expressed in units of the noise
//! variance σ²:
//!
//! ```text
//! M(s) = ‖ỹ − R_G·s‖² + Σ_l φ(s_l),   φ(c) = −σ²·ln P(c) − aug·|c|²
//! ```
//!
//! `‖y − α·H·F·s‖² = ‖ỹ − R_G·s‖² − aug·‖s‖² + const`, so `M` is the MAP
//! metric for any regularization `aug` baked into `R_G`. When the
//! regularization is the prior itself (`aug = σ²·ν` with prior
//! `∝ exp(−ν|c|²)`), `φ` is constant and the metric is purely Euclidean.
//!
//! LLRs are max-log, positive for bit 0, saturated at ±[`LLR_CLIP`], and
//! laid out layer-major: bit `b` of layer `l` sits at `l·B + b`.

mod demap;
mod exhaustive;
mod sphere;
mod vblast;

pub use demap::{soft_demap_all, soft_demap_scalar, LayerModel, LLR_CLIP};
pub use exhaustive::{map_exhaustive, MAX_EXHAUSTIVE_CANDIDATES};
pub use sphere::{sphere_decode, sphere_decode_with_stats, SphereStats};
pub use vblast::{map_vblast, map_vblast_with, map_vblast_with_model, Slicing};

use crate::error::{Error, Result};
use crate::matdecomp::{ComplexMatrix, C64};
use crate::shaping::Constellation;

#[derive(Debug, Clone, Copy)]
pub struct DetectionInput<'a> {
    pub y_tilde: &'a [C64],
    pub r_g: &'a ComplexMatrix,
    /// Point set and the prior the receiver assumes.
    pub constellation: &'a Constellation,
    pub noise_var: f64,
    /// Regularization built into `r_g`.
    pub aug: f64,
    /// `E[|s|²]` of the transmitted symbols, for interference modelling.
    pub symbol_energy: f64,
}

impl<'a> DetectionInput<'a> {
    pub fn new(
        y_tilde: &'a [C64],
        r_g: &'a ComplexMatrix,
        constellation: &'a Constellation,
        noise_var: f64,
        aug: f64,
    ) -> Result<Self> {
        let l = r_g.rows();
        if r_g.cols() != l || y_tilde.len() != l {
            return Err(Error::Dimension(format!(
                "ỹ of length {} against a {}x{} triangular factor",
                y_tilde.len(),
                l,
                r_g.cols()
            )));
        }
        if !r_g.is_upper_triangular() || r_g.diag().iter().any(|d| !(d.re > 0.0)) {
            return Err(Error::InvalidParameter(
                "r_g must be upper triangular with positive diagonal".into(),
            ));
        }
        Ok(Self {
            y_tilde,
            r_g,
            constellation,
            noise_var,
            aug,
            symbol_energy: constellation.mean_energy(),
        })
    }

    pub fn with_symbol_energy(mut self, e: f64) -> Self {
        self.symbol_energy = e;
        self
    }

    pub fn layers(&self) -> usize {
        self.r_g.rows()
    }

    /// Per-point prior correction `φ(c)`.
    pub(crate) fn penalty(&self) -> Vec<f64> {
        self.constellation
            .points()
            .iter()
            .zip(self.constellation.log_prior())
            .map(|(p, w)| -self.noise_var * w - self.aug * p.norm_sqr())
            .collect()
    }

    /// `M(s)` for a vector of point labels.
    pub fn metric(&self, labels: &[usize]) -> f64 {
        let phi = self.penalty();
        let pts = self.constellation.points();
        let l = self.layers();
        let mut m = 0.0;
        for i in 0..l {
            let mut e = self.y_tilde[i];
            for j in i..l {
                e -= self.r_g[(i, j)] * pts[labels[j]];
            }
            m += e.norm_sqr() + phi[labels[i]];
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionOutput {
    pub hard_symbols: Vec<C64>,
    pub labels: Vec<usize>,
    pub llrs: Vec<f64>,
    pub per_layer_residual_var: Vec<f64>,
}

impl DetectionOutput {
    fn from_labels(input: &DetectionInput, labels: Vec<usize>, llrs: Vec<f64>, residual: Vec<f64>) -> Self {
        Self {
            hard_symbols: labels.iter().map(|&i| input.constellation.point(i)).collect(),
            labels,
            llrs,
            per_layer_residual_var: residual,
        }
    }
}

/// Squared residual per layer of a decision.
fn residuals(input: &DetectionInput, labels: &[usize]) -> Vec<f64> {
    let l = input.layers();
    (0..l)
        .map(|i| {
            let mut e = input.y_tilde[i];
            for j in i..l {
                e -= input.r_g[(i, j)] * input.constellation.point(labels[j]);
            }
            e.norm_sqr()
        })
        .collect()
}
