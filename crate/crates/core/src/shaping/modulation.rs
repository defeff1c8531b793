//! Square QAM built from two PAM dimensions.
//!
//! Labeling per real dimension: sign bit first (0 ↦ +), then the Gray label
//! of the amplitude index, MSB first. A complex symbol label is the I label
//! followed by the Q label, so for 64-QAM the six bits read
//! `[s_I, a_I1, a_I0, s_Q, a_Q1, a_Q0]`. The constellation point index is
//! that label read as an integer.

use super::distribution::AmplitudeAlphabet;
use crate::error::{Error, Result};
use crate::matdecomp::C64;

#[inline]
pub fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

#[inline]
pub fn gray_inverse(mut g: usize) -> usize {
    let mut i = g;
    while g > 1 {
        g >>= 1;
        i ^= g;
    }
    i
}

/// Label bits of one PAM symbol.
pub fn pam_label(negative: bool, amp_index: usize, alphabet: AmplitudeAlphabet) -> usize {
    ((negative as usize) << alphabet.amp_bits()) | gray(amp_index)
}

/// Signed PAM value of a PAM label.
pub fn pam_value(label: usize, alphabet: AmplitudeAlphabet) -> f64 {
    let ab = alphabet.amp_bits();
    let negative = (label >> ab) & 1 == 1;
    let a = alphabet.amplitude(gray_inverse(label & ((1 << ab) - 1)));
    if negative {
        -a
    } else {
        a
    }
}

/// Complex symbols from amplitude indices and sign bits.
///
/// Both slices carry two entries per symbol, I then Q.
pub fn map_symbols(amp_indices: &[u8], sign_bits: &[u8], alphabet: AmplitudeAlphabet) -> Result<Vec<C64>> {
    if amp_indices.len() != sign_bits.len() || !amp_indices.len().is_multiple_of(2) {
        return Err(Error::LengthMismatch {
            expected: amp_indices.len(),
            actual: sign_bits.len(),
        });
    }
    if let Some(&a) = amp_indices.iter().find(|&&a| a as usize >= alphabet.levels()) {
        return Err(Error::InvalidParameter(format!("amplitude index {a} out of range")));
    }
    let value = |a: u8, s: u8| {
        let v = alphabet.amplitude(a as usize);
        if s & 1 == 1 {
            -v
        } else {
            v
        }
    };
    Ok(amp_indices
        .chunks_exact(2)
        .zip(sign_bits.chunks_exact(2))
        .map(|(a, s)| C64::new(value(a[0], s[0]), value(a[1], s[1])))
        .collect())
}

/// Labeled point set with per-point prior log-weights, as seen by a detector.
///
/// Points are unscaled (odd-integer grid for QAM); the amplitude scale lives
/// in the channel.
#[derive(Debug, Clone)]
pub struct Constellation {
    bits: usize,
    points: Vec<C64>,
    log_prior: Vec<f64>,
    energy: f64,
    nu: f64,
}

impl Constellation {
    /// Arbitrary labeled set: point `i` carries label `i`.
    pub fn new(bits: usize, points: Vec<C64>, log_prior: Vec<f64>) -> Result<Self> {
        if points.len() != 1 << bits || log_prior.len() != points.len() {
            return Err(Error::InvalidParameter(format!(
                "need 2^{bits} points and weights, got {} and {}",
                points.len(),
                log_prior.len()
            )));
        }
        let lse = log_sum_exp(&log_prior);
        let log_prior: Vec<f64> = log_prior.iter().map(|w| w - lse).collect();
        let energy = points.iter().zip(&log_prior).map(|(p, w)| p.norm_sqr() * w.exp()).sum();
        Ok(Self {
            bits,
            points,
            log_prior,
            energy,
            nu: f64::NAN,
        })
    }

    pub fn bpsk() -> Self {
        Self::new(1, vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)], vec![0.0, 0.0]).expect("valid")
    }

    /// Square QAM over `alphabet` with prior `exp(−ν|c|²)`.
    pub fn qam(alphabet: AmplitudeAlphabet, nu: f64) -> Self {
        let m = alphabet.bits_per_dim() as usize;
        let n = 1usize << (2 * m);
        let mask = (1usize << m) - 1;
        let points: Vec<C64> = (0..n)
            .map(|label| C64::new(pam_value(label >> m, alphabet), pam_value(label & mask, alphabet)))
            .collect();
        let log_prior = points.iter().map(|p| -nu * p.norm_sqr()).collect();
        let mut c = Self::new(2 * m, points, log_prior).expect("valid");
        c.nu = nu;
        c
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn point(&self, label: usize) -> C64 {
        self.points[label]
    }

    /// Normalized `ln P(c)`.
    pub fn log_prior(&self) -> &[f64] {
        &self.log_prior
    }

    /// `E[|c|²]` under the prior.
    pub fn mean_energy(&self) -> f64 {
        self.energy
    }

    /// Shaping parameter of the prior, NaN for custom sets.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Bit `b` (0 = MSB) of the label of point `i`.
    #[inline]
    pub fn bit(&self, i: usize, b: usize) -> u8 {
        ((i >> (self.bits - 1 - b)) & 1) as u8
    }

    pub fn label_from_bits(&self, bits: &[u8]) -> usize {
        bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1))
    }

    /// Index of the point nearest to `z`.
    pub fn slice(&self, z: C64) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, p) in self.points.iter().enumerate() {
            let d = (z - p).norm_sqr();
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }
}

fn log_sum_exp(x: &[f64]) -> f64 {
    let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn pam8() -> AmplitudeAlphabet {
        AmplitudeAlphabet::new(3).unwrap()
    }

    #[test]
    fn smallest_point() {
        let s = map_symbols(&[0, 0], &[0, 0], pam8()).unwrap();
        assert_eq!(s, vec![C64::new(1.0, 1.0)]);
    }

    #[test]
    fn direct_composition() {
        // Amplitude indices 1 and 3 are levels 3 and 7.
        let s = map_symbols(&[1, 3], &[1, 0], pam8()).unwrap();
        assert_eq!(s, vec![C64::new(-3.0, 7.0)]);
    }

    #[test]
    fn length_mismatch() {
        assert!(map_symbols(&[0, 0], &[0], pam8()).is_err());
    }

    #[test]
    fn qam64_labels_are_a_bijection() {
        let c = Constellation::qam(pam8(), 0.0);
        let set: HashSet<(i64, i64)> = c.points().iter().map(|p| (p.re as i64, p.im as i64)).collect();
        assert_eq!(set.len(), 64);
        for p in c.points() {
            assert!(p.re.abs() <= 7.0 && p.im.abs() <= 7.0);
            assert_eq!(p.re.abs() as i64 % 2, 1);
        }
    }

    #[test]
    fn labels_agree_with_map_symbols() {
        let alpha = pam8();
        let c = Constellation::qam(alpha, 0.0);
        for label in 0..64usize {
            let bits: Vec<u8> = (0..6).map(|b| c.bit(label, b)).collect();
            let amp_i = gray_inverse(((bits[1] as usize) << 1) | bits[2_usize] as usize) as u8;
            let amp_q = gray_inverse(((bits[4] as usize) << 1) | bits[5] as usize) as u8;
            let s = map_symbols(&[amp_i, amp_q], &[bits[0], bits[3]], alpha).unwrap()[0];
            assert_eq!(s, c.point(label));
            assert_eq!(c.label_from_bits(&bits), label);
        }
    }

    #[test]
    fn per_dimension_gray() {
        // Adjacent PAM levels differ in exactly one label bit.
        let alpha = pam8();
        let mut by_value: Vec<(f64, usize)> = (0..8).map(|l| (pam_value(l, alpha), l)).collect();
        by_value.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in by_value.windows(2) {
            assert_eq!((w[0].1 ^ w[1].1).count_ones(), 1);
        }
    }

    #[test]
    fn prior_energy() {
        let c = Constellation::qam(pam8(), 0.0);
        assert!((c.mean_energy() - 42.0).abs() < 1e-12);
        let shaped = Constellation::qam(pam8(), 0.05);
        let d = crate::shaping::mb_pmf(0.05, pam8()).unwrap();
        assert!((shaped.mean_energy() - 2.0 * d.second_moment()).abs() < 1e-12);
    }
}
