use crate::error::{Error, Result};

/// Positive PAM amplitudes `{1, 3, …, 2^m − 1}` for `m` bits per real dimension.
///
/// One of the `m` bits is the sign, so there are `2^(m−1)` amplitude levels
/// and the signed alphabet has `2^m` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmplitudeAlphabet {
    m: u32,
}

impl AmplitudeAlphabet {
    pub fn new(bits_per_dim: u32) -> Result<Self> {
        if !(1..=8).contains(&bits_per_dim) {
            return Err(Error::InvalidParameter(format!(
                "bits per PAM symbol must be in 1..=8, got {bits_per_dim}"
            )));
        }
        Ok(Self { m: bits_per_dim })
    }

    /// Alphabet of the real dimension of a square `qam_order`-QAM.
    pub fn for_qam(qam_order: u32) -> Result<Self> {
        let bits = qam_order.trailing_zeros();
        if qam_order < 4 || !qam_order.is_power_of_two() || !bits.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "QAM order must be a power of 4, got {qam_order}"
            )));
        }
        Self::new(bits / 2)
    }

    /// Bits per PAM symbol (sign included).
    pub fn bits_per_dim(&self) -> u32 {
        self.m
    }

    /// Amplitude label bits per PAM symbol.
    pub fn amp_bits(&self) -> u32 {
        self.m - 1
    }

    pub fn levels(&self) -> usize {
        1 << (self.m - 1)
    }

    /// Amplitude of level index `i` (0-based): `2i + 1`.
    pub fn amplitude(&self, i: usize) -> f64 {
        (2 * i + 1) as f64
    }

    pub fn amplitudes(&self) -> Vec<u32> {
        (0..self.levels()).map(|i| 2 * i as u32 + 1).collect()
    }
}

/// Maxwell-Boltzmann pmf over the signed PAM alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct MbDistribution {
    pub nu: f64,
    pub alphabet: AmplitudeAlphabet,
    /// Probability per signed point, ordered `-(2^m−1), …, -1, 1, …, 2^m−1`.
    pub pmf: Vec<f64>,
    /// `Σ exp(−ν s²)` over the signed alphabet.
    pub zeta: f64,
}

impl MbDistribution {
    /// Probability of amplitude level `i`, both signs together.
    pub fn marginal(&self) -> Vec<f64> {
        let l = self.alphabet.levels();
        (0..l).map(|i| 2.0 * self.pmf[l + i]).collect()
    }

    /// Probability of the signed point with amplitude index `i` and sign.
    pub fn prob(&self, amp_index: usize, negative: bool) -> f64 {
        let l = self.alphabet.levels();
        if negative {
            self.pmf[l - 1 - amp_index]
        } else {
            self.pmf[l + amp_index]
        }
    }

    /// `E[s²]` of one real dimension.
    pub fn second_moment(&self) -> f64 {
        self.marginal()
            .iter()
            .enumerate()
            .map(|(i, p)| p * self.alphabet.amplitude(i).powi(2))
            .sum()
    }
}

pub fn mb_pmf(nu: f64, alphabet: AmplitudeAlphabet) -> Result<MbDistribution> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "shaping parameter must be >= 0, got {nu}"
        )));
    }
    let l = alphabet.levels();
    // Shift by the smallest energy so large ν cannot underflow every weight.
    let weights: Vec<f64> = (0..l)
        .map(|i| (-nu * (alphabet.amplitude(i).powi(2) - 1.0)).exp())
        .collect();
    let total: f64 = 2.0 * weights.iter().sum::<f64>();
    let zeta = total * (-nu).exp();
    let mut pmf = Vec::with_capacity(2 * l);
    pmf.extend(weights.iter().rev().map(|w| w / total));
    pmf.extend(weights.iter().map(|w| w / total));
    Ok(MbDistribution {
        nu,
        alphabet,
        pmf,
        zeta,
    })
}

/// Shaping entropy per amplitude symbol, in bits, over the amplitude marginal.
pub fn mb_entropy(dist: &MbDistribution) -> f64 {
    dist.marginal()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Amplitude scaling `α` meeting the per-layer power budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFactor {
    pub alpha: f64,
    pub per_layer_power: f64,
}

/// `α = sqrt((P_t / L) / E[|s|²])`, with I and Q drawn from the same marginal.
pub fn compute_alpha(dist: &MbDistribution, total_power: f64, layers: usize) -> Result<ScalingFactor> {
    if !(total_power > 0.0) || layers == 0 {
        return Err(Error::InvalidParameter(format!(
            "need total_power > 0 and layers >= 1, got {total_power} and {layers}"
        )));
    }
    let per_layer_power = total_power / layers as f64;
    let energy = 2.0 * dist.second_moment();
    Ok(ScalingFactor {
        alpha: (per_layer_power / energy).sqrt(),
        per_layer_power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pam8() -> AmplitudeAlphabet {
        AmplitudeAlphabet::new(3).unwrap()
    }

    #[test]
    fn uniform_at_zero() {
        let d = mb_pmf(0.0, pam8()).unwrap();
        assert!(d.pmf.iter().all(|&p| p == 0.125));
        assert_eq!(d.zeta, 8.0);
        assert_eq!(mb_entropy(&d), 2.0);
    }

    #[test]
    fn pmf_at_nu_005() {
        // Weights exp(-0.05 * {1, 9, 25, 49}), normalized by hand.
        let d = mb_pmf(0.05, pam8()).unwrap();
        let expected = [0.4849, 0.3250, 0.1461, 0.0440];
        for (p, e) in d.marginal().iter().zip(expected) {
            assert!((p - e).abs() < 5e-5, "{p} vs {e}");
        }
        let zeta: f64 = [-7.0f64, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]
            .iter()
            .map(|s| (-0.05 * s * s).exp())
            .sum();
        assert!((d.zeta - zeta).abs() < 1e-12);
        assert!((d.pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for i in 0..4 {
            assert_eq!(d.prob(i, true), d.prob(i, false));
        }
        assert!(d.marginal().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn large_nu_concentrates() {
        let d = mb_pmf(10.0, pam8()).unwrap();
        assert!((d.prob(0, false) - 0.5).abs() < 1e-30);
        assert!(mb_entropy(&d) < 1e-30);
    }

    #[test]
    fn negative_nu_rejected() {
        assert!(mb_pmf(-0.1, pam8()).is_err());
    }

    #[test]
    fn alpha_uniform() {
        let d = mb_pmf(0.0, pam8()).unwrap();
        let a = compute_alpha(&d, 4.0, 4).unwrap();
        assert!((a.alpha - (1.0f64 / 42.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn alpha_meets_budget() {
        let d = mb_pmf(0.05, pam8()).unwrap();
        let a = compute_alpha(&d, 4.0, 4).unwrap();
        let e: f64 = 2.0 * d.second_moment() * a.alpha * a.alpha;
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_degenerate_limit() {
        let d = mb_pmf(50.0, pam8()).unwrap();
        let a = compute_alpha(&d, 3.0, 2).unwrap();
        assert!((a.alpha - (3.0f64 / 4.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn qam_order_validation() {
        assert_eq!(AmplitudeAlphabet::for_qam(64).unwrap().bits_per_dim(), 3);
        assert!(AmplitudeAlphabet::for_qam(32).is_err());
        assert!(AmplitudeAlphabet::for_qam(8).is_err());
    }
}
