//! Depth-first Schnorr–Euchner sphere decoder with single-tree-search
//! soft output.
//!
//! The tree is walked from the last layer down, children in increasing
//! order of their metric increment, so the first leaf is the Babai point.
//! Besides the best leaf the search tracks, for every label bit, the best
//! metric among leaves whose bit differs from the current best. A subtree
//! is entered only if a leaf inside it could still improve one of those
//! numbers. Counter-hypotheses further than `LLR_CLIP·σ²` above the best
//! metric are not needed, which bounds the search.

use super::demap::{clip, LLR_CLIP};
use super::{residuals, DetectionInput, DetectionOutput};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SphereStats {
    /// Tree nodes entered, leaves included.
    pub nodes: u64,
    pub leaves: u64,
}

/// MAP decision with exact max-log LLRs (up to saturation).
///
/// `initial_radius` bounds the metric of counter-hypotheses searched for;
/// it never drops below the best metric found, so the hard decision is
/// exact for any value. Pass `f64::INFINITY` for the full soft search.
pub fn sphere_decode(input: &DetectionInput, initial_radius: f64) -> DetectionOutput {
    sphere_decode_with_stats(input, initial_radius, true).0
}

/// As [`sphere_decode`]; with `soft = false` only the best leaf is sought
/// and the LLRs are hard-saturated.
pub fn sphere_decode_with_stats(
    input: &DetectionInput,
    initial_radius: f64,
    soft: bool,
) -> (DetectionOutput, SphereStats) {
    let l = input.layers();
    let c = input.constellation;
    let q = c.len();
    let bits = c.bits_per_symbol();
    let pts = c.points();
    let mut phi = input.penalty();
    let shift = phi.iter().cloned().fold(f64::INFINITY, f64::min);
    phi.iter_mut().for_each(|p| *p -= shift);

    let slack = LLR_CLIP * input.noise_var;
    let mut stats = SphereStats::default();
    let mut ml = (f64::INFINITY, vec![0usize; l]);
    let mut counter = vec![f64::INFINITY; l * bits];

    let mut labels = vec![0usize; l];
    let mut partial = vec![0.0f64; l + 1];
    let mut order: Vec<Vec<(f64, usize)>> = vec![Vec::with_capacity(q); l];
    let mut pos = vec![0usize; l];

    let expand = |i: usize, labels: &[usize], order: &mut Vec<(f64, usize)>| {
        let mut z = input.y_tilde[i];
        for j in i + 1..l {
            z -= input.r_g[(i, j)] * pts[labels[j]];
        }
        let rii = input.r_g[(i, i)];
        order.clear();
        order.extend(
            pts.iter()
                .enumerate()
                .map(|(k, p)| ((z - rii * p).norm_sqr() + phi[k], k)),
        );
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
    };

    let mut i = l - 1;
    expand(i, &labels, &mut order[i]);
    pos[i] = 0;
    loop {
        if pos[i] >= q {
            if i == l - 1 {
                break;
            }
            i += 1;
            continue;
        }
        let (inc, lab) = order[i][pos[i]];
        pos[i] += 1;
        let d = partial[i + 1] + inc;
        let cap = |lam: f64, best: f64| lam.min(best + slack).min(initial_radius.max(best));
        if ml.0.is_finite() {
            let global = if soft {
                counter.iter().map(|&x| cap(x, ml.0)).fold(ml.0, f64::max)
            } else {
                ml.0
            };
            if d >= global {
                pos[i] = q;
                continue;
            }
            labels[i] = lab;
            let thr = if soft {
                let mut t = f64::NEG_INFINITY;
                for j in 0..l {
                    for b in 0..bits {
                        let free = j < i || c.bit(labels[j], b) != c.bit(ml.1[j], b);
                        if free {
                            t = t.max(cap(counter[j * bits + b], ml.0));
                        }
                    }
                }
                t
            } else {
                ml.0
            };
            if d >= thr {
                continue;
            }
        } else {
            labels[i] = lab;
        }
        stats.nodes += 1;
        if i > 0 {
            partial[i] = d;
            i -= 1;
            expand(i, &labels, &mut order[i]);
            pos[i] = 0;
            continue;
        }
        stats.leaves += 1;
        if d < ml.0 {
            if ml.0.is_finite() {
                for j in 0..l {
                    for b in 0..bits {
                        if c.bit(labels[j], b) != c.bit(ml.1[j], b) {
                            counter[j * bits + b] = ml.0;
                        }
                    }
                }
            }
            ml = (d, labels.clone());
        } else {
            for j in 0..l {
                for b in 0..bits {
                    let k = j * bits + b;
                    if c.bit(labels[j], b) != c.bit(ml.1[j], b) && d < counter[k] {
                        counter[k] = d;
                    }
                }
            }
        }
    }

    let nv = input.noise_var.max(1e-30);
    let llrs = (0..l * bits)
        .map(|k| {
            let gap = if soft { (counter[k] - ml.0) / nv } else { f64::INFINITY };
            let mag = clip(gap);
            if c.bit(ml.1[k / bits], k % bits) == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let res = residuals(input, &ml.1);
    (DetectionOutput::from_labels(input, ml.1, llrs, res), stats)
}
