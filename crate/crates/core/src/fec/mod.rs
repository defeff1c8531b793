//! Channel coding: QC-LDPC, CRC and codeblock segmentation.

mod codec;
mod crc;
mod ldpc;

pub use codec::{segment, CbCodec, CbDecode, CodeBlock, TransportBlock, DEFAULT_SLOT_DURATION};
pub use crc::{crc_attach, crc_check, Crc};
pub use ldpc::{parse_protograph, DecodeOutcome, LdpcCode, DEFAULT_MAX_ITERS, MIN_SUM_SCALE};

pub fn ldpc_encode(info: &[u8], code: &LdpcCode) -> crate::Result<Vec<u8>> {
    code.encode(info)
}

/// Hard decisions of the information positions and the convergence flag.
pub fn ldpc_decode(llrs: &[f64], code: &LdpcCode, max_iters: usize) -> crate::Result<(Vec<u8>, bool)> {
    let out = code.decode(llrs, max_iters)?;
    Ok((out.codeword[..code.k()].to_vec(), out.converged))
}
