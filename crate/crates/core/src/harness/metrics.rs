use crate::error::{Error, Result};
use crate::shaping::ShapingSpec;

/// Binary entropy, in bits, of the bit posterior `1 / (1 + e^{−ℓ})`.
pub fn llr_entropy(llr: f64) -> f64 {
    let a = llr.abs();
    if a.is_infinite() {
        return 0.0;
    }
    let e = (-a).exp();
    (e.ln_1p() + a * e / (1.0 + e)) / std::f64::consts::LN_2
}

/// `(N_cb·H(x) − Σ H_b(p)) / T_slot`, clamped at zero.
pub fn empirical_throughput(llrs: &[Vec<f64>], shaping: &ShapingSpec, slot_duration: f64) -> Result<f64> {
    let n = shaping.layout.n_cbit();
    if let Some(bad) = llrs.iter().find(|l| l.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: bad.len(),
        });
    }
    let residual: f64 = llrs.iter().flatten().map(|&l| llr_entropy(l)).sum();
    let bits = llrs.len() as f64 * shaping.codeblock_entropy() - residual;
    Ok(bits.max(0.0) / slot_duration)
}

/// Entropy ceiling of the throughput metric.
pub fn throughput_ceiling(shaping: &ShapingSpec, n_cb: usize, slot_duration: f64) -> f64 {
    n_cb as f64 * shaping.codeblock_entropy() / slot_duration
}

/// 95% Wilson score interval of a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}
