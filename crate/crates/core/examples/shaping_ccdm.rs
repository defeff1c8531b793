//! Maxwell–Boltzmann target, CCDM composition and a matched block.

use gmd_link::shaping::{mb_entropy, mb_pmf, quantize_composition, AmplitudeAlphabet, Ccdm};
use rand::{Rng, SeedableRng};

fn main() -> gmd_link::Result<()> {
    let alphabet = AmplitudeAlphabet::for_qam(64)?;
    for nu in [0.0, 0.05, 0.1] {
        let d = mb_pmf(nu, alphabet)?;
        println!(
            "nu = {nu:<4}  marginal {:.4?}  H = {:.4} bits",
            d.marginal(),
            mb_entropy(&d)
        );
    }

    let d = mb_pmf(0.1, alphabet)?;
    let comp = quantize_composition(&d, 64)?;
    let ccdm = Ccdm::new(comp.clone());
    println!(
        "\nblock of 64: counts {:?}, {} input bits",
        comp.counts,
        ccdm.input_bits()
    );

    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let bits: Vec<u8> = (0..ccdm.input_bits()).map(|_| rng.random::<bool>() as u8).collect();
    let seq = ccdm.encode(&bits)?;
    println!(
        "amplitudes: {}",
        seq.iter().map(|a| char::from(b'0' + a)).collect::<String>()
    );
    assert_eq!(ccdm.decode(&seq)?, bits);
    println!("decoded back to the same {} bits", bits.len());
    Ok(())
}
