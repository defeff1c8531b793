use crate::matdecomp::{ComplexMatrix, C64};
use crate::shaping::Constellation;

/// Saturation of every LLR the detectors emit.
pub const LLR_CLIP: f64 = 20.0;

/// Floor on variances so noiseless runs produce saturated, not NaN, LLRs.
const VAR_FLOOR: f64 = 1e-30;

pub(crate) fn clip(l: f64) -> f64 {
    l.clamp(-LLR_CLIP, LLR_CLIP)
}

/// Scalar observation model of each layer once all higher layers are
/// cancelled: `z_i = g_i·s_i + w_i` with `w_i` of variance `v_i`.
///
/// With `G = [A; √aug·I] = Q·R` the projected observation is
/// `ỹ = R·s − aug·R⁻ᴴ·s + Q_uᴴ·n`, so the diagonal loses `aug / R_ii` and
/// the lower layers leak in through `R⁻ᴴ`. That leakage is treated as
/// Gaussian noise of the transmit symbol energy.
#[derive(Debug, Clone)]
pub struct LayerModel {
    pub gain: Vec<f64>,
    pub var: Vec<f64>,
}

impl LayerModel {
    pub fn new(r: &ComplexMatrix, aug: f64, noise_var: f64, symbol_energy: f64) -> Self {
        let l = r.rows();
        let rinv = r.upper_triangular_inverse().expect("positive diagonal");
        let mut gain = Vec::with_capacity(l);
        let mut var = Vec::with_capacity(l);
        for i in 0..l {
            let rii = r[(i, i)].re;
            gain.push(rii - aug / rii);
            let col: f64 = (0..=i).map(|k| rinv[(k, i)].norm_sqr()).sum();
            let leak: f64 = (0..i).map(|j| rinv[(j, i)].norm_sqr()).sum();
            let v = noise_var * (1.0 - aug * col).max(0.0) + aug * aug * symbol_energy * leak;
            var.push(v.max(VAR_FLOOR));
        }
        Self { gain, var }
    }
}

/// Max-log LLR of one label bit; positive favours bit 0.
pub fn soft_demap_scalar(z: C64, gain: f64, noise_var: f64, constellation: &Constellation, bit_index: usize) -> f64 {
    let mut out = vec![0.0; constellation.bits_per_symbol()];
    soft_demap_all(z, gain, noise_var, constellation, &mut out);
    out[bit_index]
}

/// Max-log LLRs of every label bit of one symbol, written into `out`.
///
/// Returns the index of the point with the smallest metric.
pub fn soft_demap_all(z: C64, gain: f64, noise_var: f64, constellation: &Constellation, out: &mut [f64]) -> usize {
    let bits = constellation.bits_per_symbol();
    let v = noise_var.max(VAR_FLOOR);
    let mut best = [[f64::INFINITY; 2]; 16];
    let mut arg = (f64::INFINITY, 0);
    for (i, (p, w)) in constellation.points().iter().zip(constellation.log_prior()).enumerate() {
        let m = (z - p * gain).norm_sqr() / v - w;
        if m < arg.0 {
            arg = (m, i);
        }
        for (b, slot) in best.iter_mut().enumerate().take(bits) {
            let bit = (i >> (bits - 1 - b)) & 1;
            if m < slot[bit] {
                slot[bit] = m;
            }
        }
    }
    for (b, o) in out.iter_mut().enumerate().take(bits) {
        *o = clip(best[b][1] - best[b][0]);
    }
    arg.1
}
