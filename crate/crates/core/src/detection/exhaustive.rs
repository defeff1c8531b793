use super::demap::clip;
use super::{residuals, DetectionInput, DetectionOutput};
use crate::error::{Error, Result};

pub const MAX_EXHAUSTIVE_CANDIDATES: u128 = 1_000_000;

/// Exact MAP decision and max-log LLRs by enumerating every candidate.
pub fn map_exhaustive(input: &DetectionInput) -> Result<DetectionOutput> {
    let l = input.layers();
    let c = input.constellation;
    let q = c.len();
    let count = (q as u128).checked_pow(l as u32).unwrap_or(u128::MAX);
    if count > MAX_EXHAUSTIVE_CANDIDATES {
        return Err(Error::SearchSpaceTooLarge(count));
    }
    let bits = c.bits_per_symbol();
    let phi = input.penalty();
    let pts = c.points();
    let mut best_bit = vec![[f64::INFINITY; 2]; l * bits];
    let mut best = (f64::INFINITY, vec![0usize; l]);
    let mut labels = vec![0usize; l];
    for _ in 0..count {
        let mut m = 0.0;
        for i in 0..l {
            let mut e = input.y_tilde[i];
            for j in i..l {
                e -= input.r_g[(i, j)] * pts[labels[j]];
            }
            m += e.norm_sqr() + phi[labels[i]];
        }
        if m < best.0 {
            best = (m, labels.clone());
        }
        for (i, &lab) in labels.iter().enumerate() {
            for b in 0..bits {
                let slot = &mut best_bit[i * bits + b][c.bit(lab, b) as usize];
                if m < *slot {
                    *slot = m;
                }
            }
        }
        // Mixed-radix increment, last layer fastest.
        for d in (0..l).rev() {
            labels[d] += 1;
            if labels[d] < q {
                break;
            }
            labels[d] = 0;
        }
    }
    let nv = input.noise_var.max(1e-30);
    let llrs = best_bit.iter().map(|m| clip((m[1] - m[0]) / nv)).collect();
    let res = residuals(input, &best.1);
    Ok(DetectionOutput::from_labels(input, best.1, llrs, res))
}
