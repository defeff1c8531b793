//! Positional amplitude/sign split of a codeblock.
//!
//! A codeblock of `S` QAM symbols carries `2S` amplitude labels followed by
//! `2S` sign bits: the first `M_amp = 2S·(m−1)` coded bits are amplitude
//! labels, the remaining `N_cbit − M_amp` are signs. The systematic part of
//! the codeword starts with the matcher output, so the amplitude statistics
//! survive encoding while parity bits land in the (uniform) sign region.

use super::ccdm::{Ccdm, Composition};
use super::distribution::AmplitudeAlphabet;
use super::modulation::{gray, gray_inverse};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PasLayout {
    pub symbols: usize,
    pub alphabet: AmplitudeAlphabet,
}

impl PasLayout {
    pub fn new(symbols: usize, alphabet: AmplitudeAlphabet) -> Self {
        Self { symbols, alphabet }
    }

    /// Layout that fills `n_cbit` coded bits.
    pub fn for_coded_bits(n_cbit: usize, alphabet: AmplitudeAlphabet) -> Result<Self> {
        let bps = 2 * alphabet.bits_per_dim() as usize;
        if !n_cbit.is_multiple_of(bps) {
            return Err(Error::SizeMismatch(format!(
                "{n_cbit} coded bits is not a whole number of {bps}-bit symbols"
            )));
        }
        Ok(Self::new(n_cbit / bps, alphabet))
    }

    pub fn bits_per_symbol(&self) -> usize {
        2 * self.alphabet.bits_per_dim() as usize
    }

    pub fn n_cbit(&self) -> usize {
        self.symbols * self.bits_per_symbol()
    }

    /// Amplitude label bits per codeblock (`M_amp`).
    pub fn m_amp(&self) -> usize {
        2 * self.symbols * self.alphabet.amp_bits() as usize
    }

    /// Amplitude symbols (I and Q) per codeblock.
    pub fn amp_symbols(&self) -> usize {
        2 * self.symbols
    }

    /// Coded-bit positions of symbol `t`, in constellation label order.
    pub fn positions(&self, t: usize) -> Vec<usize> {
        let ab = self.alphabet.amp_bits() as usize;
        let m_amp = self.m_amp();
        let mut out = Vec::with_capacity(self.bits_per_symbol());
        for dim in 0..2 {
            out.push(m_amp + 2 * t + dim);
            let base = (2 * t + dim) * ab;
            out.extend(base..base + ab);
        }
        out
    }
}

/// Turns user data into codeblock payloads whose amplitude region is
/// matcher output, and back.
#[derive(Debug, Clone)]
pub struct PasFramer {
    layout: PasLayout,
    ccdm: Option<Ccdm>,
    blocks: usize,
    payload_len: usize,
}

impl PasFramer {
    /// `payload_len` is the number of information bits the channel code
    /// accepts per codeblock before CRC attachment.
    pub fn new(layout: PasLayout, comp: Composition, payload_len: usize) -> Result<Self> {
        let m_amp = layout.m_amp();
        if m_amp > payload_len {
            return Err(Error::SizeMismatch(format!(
                "amplitude region of {m_amp} bits exceeds the {payload_len}-bit payload"
            )));
        }
        if layout.alphabet.amp_bits() == 0 {
            return Ok(Self {
                layout,
                ccdm: None,
                blocks: 0,
                payload_len,
            });
        }
        if comp.counts.len() != layout.alphabet.levels() {
            return Err(Error::InvalidParameter(
                "composition has the wrong number of levels".into(),
            ));
        }
        if comp.block_len == 0 || !layout.amp_symbols().is_multiple_of(comp.block_len) {
            return Err(Error::SizeMismatch(format!(
                "matcher block length {} does not divide {} amplitude symbols",
                comp.block_len,
                layout.amp_symbols()
            )));
        }
        let blocks = layout.amp_symbols() / comp.block_len;
        Ok(Self {
            layout,
            ccdm: Some(Ccdm::new(comp)),
            blocks,
            payload_len,
        })
    }

    pub fn layout(&self) -> &PasLayout {
        &self.layout
    }

    pub fn ccdm(&self) -> Option<&Ccdm> {
        self.ccdm.as_ref()
    }

    pub fn payload_len(&self) -> usize {
        self.payload_len
    }

    /// User data bits carried per codeblock.
    pub fn data_bits(&self) -> usize {
        let shaped = self.ccdm.as_ref().map_or(0, |c| c.input_bits() * self.blocks);
        shaped + self.payload_len - self.layout.m_amp()
    }

    pub fn frame(&self, data: &[u8]) -> Result<Vec<u8>> {
        if data.len() != self.data_bits() {
            return Err(Error::LengthMismatch {
                expected: self.data_bits(),
                actual: data.len(),
            });
        }
        let ab = self.layout.alphabet.amp_bits() as usize;
        let mut payload = Vec::with_capacity(self.payload_len);
        let mut rest = data;
        if let Some(ccdm) = &self.ccdm {
            let k = ccdm.input_bits();
            for _ in 0..self.blocks {
                let (chunk, tail) = rest.split_at(k);
                rest = tail;
                for a in ccdm.encode(chunk)? {
                    let g = gray(a as usize);
                    payload.extend((0..ab).rev().map(|b| ((g >> b) & 1) as u8));
                }
            }
        }
        payload.extend_from_slice(rest);
        debug_assert_eq!(payload.len(), self.payload_len);
        Ok(payload)
    }

    /// Amplitude level indices encoded in a payload.
    pub fn amplitudes(&self, payload: &[u8]) -> Vec<u8> {
        let ab = self.layout.alphabet.amp_bits() as usize;
        if ab == 0 {
            return Vec::new();
        }
        payload[..self.layout.m_amp()]
            .chunks_exact(ab)
            .map(|c| gray_inverse(c.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)) as u8)
            .collect()
    }

    /// Recovers the data bits; fails when an amplitude block is not a
    /// matcher codeword.
    pub fn deframe(&self, payload: &[u8]) -> Result<Vec<u8>> {
        if payload.len() != self.payload_len {
            return Err(Error::LengthMismatch {
                expected: self.payload_len,
                actual: payload.len(),
            });
        }
        let mut data = Vec::with_capacity(self.data_bits());
        if let Some(ccdm) = &self.ccdm {
            let amps = self.amplitudes(payload);
            for block in amps.chunks_exact(ccdm.block_len()) {
                data.extend(ccdm.decode(block)?);
            }
        }
        data.extend_from_slice(&payload[self.layout.m_amp()..]);
        Ok(data)
    }
}
