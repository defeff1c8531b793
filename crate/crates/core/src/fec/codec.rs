//! Codeblock chain: CRC, shortening, LDPC, puncturing.
//!
//! Rate matching is deterministic. With `k_eff = round(rate · N_cbit)` the
//! last `k − k_eff` information positions are shortened (known zeros, not
//! sent) and the last `n − k_shortened − N_cbit` parity positions are
//! punctured (sent as nothing, decoded from LLR 0).

use super::crc::{crc_attach, crc_check, Crc};
use super::ldpc::{LdpcCode, DEFAULT_MAX_ITERS};
use crate::error::{Error, Result};

/// LLR assigned to shortened positions.
const KNOWN_BIT_LLR: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct CbCodec {
    code: LdpcCode,
    crc: Crc,
    n_cbit: usize,
    shortened: usize,
    punctured: usize,
    max_iters: usize,
}

#[derive(Debug, Clone)]
pub struct CbDecode {
    pub payload: Vec<u8>,
    pub crc_ok: bool,
    pub converged: bool,
    pub iterations: usize,
}

impl CbCodec {
    pub fn new(code: LdpcCode, crc: Crc, n_cbit: usize, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "code rate must be in (0, 1), got {rate}"
            )));
        }
        let k_eff = (rate * n_cbit as f64).round() as usize;
        if k_eff > code.k() || k_eff <= crc.len() {
            return Err(Error::InvalidParameter(format!(
                "rate {rate} at N_cbit = {n_cbit} needs {k_eff} info bits; code offers {}",
                code.k()
            )));
        }
        let shortened = code.k() - k_eff;
        let parity_sent = n_cbit - k_eff;
        let parity = code.n() - code.k();
        if parity_sent > parity {
            return Err(Error::InvalidParameter(format!(
                "N_cbit = {n_cbit} needs {parity_sent} parity bits; code has {parity}"
            )));
        }
        Ok(Self {
            code,
            crc,
            n_cbit,
            shortened,
            punctured: parity - parity_sent,
            max_iters: DEFAULT_MAX_ITERS,
        })
    }

    /// Bundled code at its native length and rate.
    pub fn default_codec() -> Self {
        let code = LdpcCode::default_code();
        let (n, rate) = (code.n(), code.rate());
        Self::new(code, Crc::crc24a(), n, rate).expect("native length always matches")
    }

    pub fn with_max_iters(mut self, iters: usize) -> Self {
        self.max_iters = iters;
        self
    }

    pub fn code(&self) -> &LdpcCode {
        &self.code
    }

    pub fn crc(&self) -> &Crc {
        &self.crc
    }

    pub fn n_cbit(&self) -> usize {
        self.n_cbit
    }

    pub fn shortened(&self) -> usize {
        self.shortened
    }

    pub fn punctured(&self) -> usize {
        self.punctured
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }

    /// Information bits per codeblock before CRC attachment.
    pub fn payload_len(&self) -> usize {
        self.code.k() - self.shortened - self.crc.len()
    }

    /// Rate seen on the channel: (CRC-protected info bits) / N_cbit.
    pub fn effective_rate(&self) -> f64 {
        (self.code.k() - self.shortened) as f64 / self.n_cbit as f64
    }

    pub fn encode(&self, payload: &[u8]) -> Result<Vec<u8>> {
        if payload.len() != self.payload_len() {
            return Err(Error::LengthMismatch {
                expected: self.payload_len(),
                actual: payload.len(),
            });
        }
        let mut info = crc_attach(payload, &self.crc);
        info.resize(self.code.k(), 0);
        let cw = self.code.encode(&info)?;
        let k_eff = self.code.k() - self.shortened;
        let mut out = Vec::with_capacity(self.n_cbit);
        out.extend_from_slice(&cw[..k_eff]);
        out.extend_from_slice(&cw[self.code.k()..self.code.n() - self.punctured]);
        debug_assert_eq!(out.len(), self.n_cbit);
        Ok(out)
    }

    pub fn decode(&self, llrs: &[f64]) -> Result<CbDecode> {
        if llrs.len() != self.n_cbit {
            return Err(Error::LengthMismatch {
                expected: self.n_cbit,
                actual: llrs.len(),
            });
        }
        let k = self.code.k();
        let k_eff = k - self.shortened;
        let mut full = Vec::with_capacity(self.code.n());
        full.extend_from_slice(&llrs[..k_eff]);
        full.extend(std::iter::repeat_n(KNOWN_BIT_LLR, self.shortened));
        full.extend_from_slice(&llrs[k_eff..]);
        full.extend(std::iter::repeat_n(0.0, self.punctured));
        let out = self.code.decode(&full, self.max_iters)?;
        let block = &out.codeword[..k_eff];
        Ok(CbDecode {
            payload: block[..self.payload_len()].to_vec(),
            crc_ok: crc_check(block, &self.crc),
            converged: out.converged,
            iterations: out.iterations,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeBlock {
    pub info_bits: Vec<u8>,
    pub coded_bits: Vec<u8>,
    /// `None` until decoded.
    pub crc_ok: Option<bool>,
    pub layer: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportBlock {
    pub codeblocks: Vec<CodeBlock>,
    pub slot_duration: f64,
}

pub const DEFAULT_SLOT_DURATION: f64 = 0.5e-3;

impl TransportBlock {
    pub fn info_bits(&self) -> Vec<u8> {
        self.codeblocks
            .iter()
            .flat_map(|cb| cb.info_bits.iter().copied())
            .collect()
    }

    /// A transport block errs if any codeblock fails its CRC.
    pub fn crc_ok(&self) -> Option<bool> {
        self.codeblocks
            .iter()
            .try_fold(true, |acc, cb| cb.crc_ok.map(|ok| acc && ok))
    }
}

/// Splits `tb_info` into `n_cb` equal codeblocks and encodes each.
pub fn segment(tb_info: &[u8], codec: &CbCodec, n_cb: usize) -> Result<TransportBlock> {
    let per = codec.payload_len();
    if n_cb == 0 || tb_info.len() != n_cb * per {
        return Err(Error::SizeMismatch(format!(
            "{} bits cannot fill {n_cb} codeblocks of {per} payload bits",
            tb_info.len()
        )));
    }
    let codeblocks = tb_info
        .chunks_exact(per)
        .map(|chunk| {
            Ok(CodeBlock {
                info_bits: chunk.to_vec(),
                coded_bits: codec.encode(chunk)?,
                crc_ok: None,
                layer: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransportBlock {
        codeblocks,
        slot_duration: DEFAULT_SLOT_DURATION,
    })
}
