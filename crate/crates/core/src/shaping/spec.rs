use super::ccdm::{quantize_composition, Composition};
use super::distribution::{compute_alpha, mb_entropy, mb_pmf, AmplitudeAlphabet, MbDistribution, ScalingFactor};
use super::modulation::Constellation;
use super::pas::{PasFramer, PasLayout};
use crate::error::Result;

/// Everything that defines the shaped source of one link.
#[derive(Debug, Clone)]
pub struct ShapingSpec {
    pub qam_order: u32,
    pub nu: f64,
    pub dist: MbDistribution,
    pub composition: Composition,
    pub scaling: ScalingFactor,
    /// Unscaled points with the transmit prior.
    pub constellation: Constellation,
    pub layout: PasLayout,
}

impl ShapingSpec {
    /// `ccdm_block_len = None` matches the whole amplitude region of a
    /// codeblock in one block.
    pub fn new(
        qam_order: u32,
        nu: f64,
        n_cbit: usize,
        ccdm_block_len: Option<usize>,
        total_power: f64,
        layers: usize,
    ) -> Result<Self> {
        let alphabet = AmplitudeAlphabet::for_qam(qam_order)?;
        let dist = mb_pmf(nu, alphabet)?;
        let layout = PasLayout::for_coded_bits(n_cbit, alphabet)?;
        let block = ccdm_block_len.unwrap_or(layout.amp_symbols());
        let composition = quantize_composition(&dist, block)?;
        let scaling = compute_alpha(&dist, total_power, layers)?;
        Ok(Self {
            qam_order,
            nu,
            constellation: Constellation::qam(alphabet, nu),
            dist,
            composition,
            scaling,
            layout,
        })
    }

    pub fn alphabet(&self) -> AmplitudeAlphabet {
        self.layout.alphabet
    }

    pub fn alpha(&self) -> f64 {
        self.scaling.alpha
    }

    /// `E[|s|²]` of unscaled symbols under the target pmf.
    pub fn symbol_energy(&self) -> f64 {
        self.constellation.mean_energy()
    }

    /// Energy of the uniform constellation on the same grid.
    pub fn uniform_energy(&self) -> f64 {
        let l = self.alphabet().levels() as f64;
        // Mean of (2i+1)² over i < l, times two dimensions.
        2.0 * (4.0 * l * l - 1.0) / 3.0
    }

    /// `H_ν`, bits per amplitude symbol.
    pub fn amplitude_entropy(&self) -> f64 {
        mb_entropy(&self.dist)
    }

    /// Source entropy of one codeblock, `H(x_amp) + H(x_sign)`.
    pub fn codeblock_entropy(&self) -> f64 {
        let m_amp = self.layout.m_amp();
        let amp_bits = self.alphabet().amp_bits() as usize;
        let h_amp = m_amp
            .checked_div(amp_bits)
            .map_or(0.0, |n| n as f64 * self.amplitude_entropy());
        h_amp + (self.layout.n_cbit() - m_amp) as f64
    }

    pub fn framer(&self, payload_len: usize) -> Result<PasFramer> {
        PasFramer::new(self.layout, self.composition.clone(), payload_len)
    }

    /// Constellation point carried by symbol `t` of a codeblock.
    pub fn symbol_label(&self, coded: &[u8], t: usize) -> usize {
        self.layout
            .positions(t)
            .iter()
            .fold(0usize, |acc, &p| (acc << 1) | coded[p] as usize)
    }
}
