//! CRC + QC-LDPC codeblock over BPSK/AWGN at a few SNRs.

use gmd_link::channel::complex_normal;
use gmd_link::fec::CbCodec;
use rand::{Rng, SeedableRng};

fn main() -> gmd_link::Result<()> {
    let codec = CbCodec::default_codec();
    println!(
        "code n = {}, k = {}, Z = {}; payload {} bits, rate {:.4}",
        codec.code().n(),
        codec.code().k(),
        codec.code().z(),
        codec.payload_len(),
        codec.effective_rate()
    );
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for es_n0_db in [6.5, 7.0, 7.5] {
        let nv: f64 = 10f64.powf(-es_n0_db / 10.0);
        let (mut errors, mut iters) = (0, 0);
        let blocks = 200;
        for _ in 0..blocks {
            let payload: Vec<u8> = (0..codec.payload_len()).map(|_| rng.random::<bool>() as u8).collect();
            let llrs: Vec<f64> = codec
                .encode(&payload)?
                .iter()
                .map(|&b| {
                    let y = 1.0 - 2.0 * b as f64 + complex_normal(&mut rng).re * (2.0 * nv).sqrt();
                    2.0 * y / nv
                })
                .collect();
            let d = codec.decode(&llrs)?;
            errors += (!d.crc_ok) as usize;
            iters += d.iterations;
        }
        println!(
            "Es/N0 {es_n0_db:.1} dB: BLER {:.3}, mean iterations {:.1}",
            errors as f64 / blocks as f64,
            iters as f64 / blocks as f64
        );
    }
    Ok(())
}
