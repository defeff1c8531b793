use gmd_link::channel::complex_normal;
use gmd_link::fec::*;
use gmd_link::harness::wilson_interval;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense parity-check matrix expanded straight from the base matrix.
fn dense_h(code: &LdpcCode) -> Vec<Vec<u8>> {
    let z = code.z();
    let mut h = vec![vec![0u8; code.n()]; code.checks()];
    for (r, row) in code.base().iter().enumerate() {
        for (c, &s) in row.iter().enumerate() {
            if s >= 0 {
                for i in 0..z {
                    h[r * z + i][c * z + (i + s as usize) % z] = 1;
                }
            }
        }
    }
    h
}

fn syndrome_zero(h: &[Vec<u8>], cw: &[u8]) -> bool {
    h.iter()
        .all(|row| row.iter().zip(cw).fold(0u8, |a, (x, y)| a ^ (x & y)) == 0)
}

fn random_bits(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random::<bool>() as u8).collect()
}

fn bpsk_llrs(rng: &mut impl Rng, bits: &[u8], noise_var: f64) -> Vec<f64> {
    bits.iter()
        .map(|&b| {
            let x = if b == 0 { 1.0 } else { -1.0 };
            // Real part of a unit complex normal has variance 1/2.
            let y = x + complex_normal(rng).re * (2.0 * noise_var).sqrt();
            2.0 * y / noise_var
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoder_output_is_a_codeword(seed in any::<u64>()) {
        let code = LdpcCode::default_code();
        let h = dense_h(&code);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let info = random_bits(&mut rng, code.k());
        let cw = ldpc_encode(&info, &code).unwrap();
        prop_assert!(syndrome_zero(&h, &cw));
        prop_assert_eq!(&cw[..code.k()], &info[..]);
    }

    #[test]
    fn encoding_is_linear(seed in any::<u64>()) {
        let code = LdpcCode::default_code();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_bits(&mut rng, code.k());
        let b = random_bits(&mut rng, code.k());
        let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let (ea, eb, eab) = (code.encode(&a).unwrap(), code.encode(&b).unwrap(), code.encode(&ab).unwrap());
        let sum: Vec<u8> = ea.iter().zip(&eb).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(eab, sum);
    }

    #[test]
    fn codec_noiseless_roundtrip(seed in any::<u64>()) {
        let codec = CbCodec::default_codec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let payload = random_bits(&mut rng, codec.payload_len());
        let coded = codec.encode(&payload).unwrap();
        let llrs: Vec<f64> = coded.iter().map(|&b| if b == 0 { 8.0 } else { -8.0 }).collect();
        let d = codec.decode(&llrs).unwrap();
        prop_assert!(d.crc_ok && d.converged);
        prop_assert_eq!(d.payload, payload);
    }
}

#[test]
fn crc_exhaustive_up_to_12_bits() {
    let crc = Crc::crc24a();
    for len in 1..=12usize {
        for x in 0u32..(1 << len) {
            let info: Vec<u8> = (0..len).map(|b| ((x >> b) & 1) as u8).collect();
            let block = crc_attach(&info, &crc);
            assert_eq!(block.len(), len + 24);
            assert!(crc_check(&block, &crc));
            if x % 97 == 0 {
                for p in 0..block.len() {
                    let mut bad = block.clone();
                    bad[p] ^= 1;
                    assert!(!crc_check(&bad, &crc));
                }
            }
        }
    }
}

#[test]
fn segmentation_reassembles() {
    let codec = CbCodec::default_codec();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let info = random_bits(&mut rng, 4 * codec.payload_len());
    let tb = segment(&info, &codec, 4).unwrap();
    assert_eq!(tb.codeblocks.len(), 4);
    assert_eq!(tb.info_bits(), info);
    assert!(segment(&info[1..], &codec, 4).is_err());
    assert!(segment(&info, &codec, 0).is_err());
}

#[test]
fn single_error_is_corrected() {
    let code = LdpcCode::default_code();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let info = random_bits(&mut rng, code.k());
        let cw = code.encode(&info).unwrap();
        let mut llrs: Vec<f64> = cw.iter().map(|&b| if b == 0 { 4.0 } else { -4.0 }).collect();
        let p = rng.random_range(0..code.n());
        llrs[p] = -llrs[p] * 0.5;
        let (bits, ok) = ldpc_decode(&llrs, &code, DEFAULT_MAX_ITERS).unwrap();
        assert!(ok);
        assert_eq!(bits, info);
    }
}

#[test]
fn rate_matching_hits_the_configured_rate() {
    for (n_cbit, rate) in [(1944usize, 0.9258), (1800, 0.95), (1900, 0.93), (1296, 0.9258)] {
        let codec = CbCodec::new(LdpcCode::default_code(), Crc::crc24a(), n_cbit, rate).unwrap();
        assert!(
            (codec.effective_rate() - rate).abs() <= 1.0 / n_cbit as f64,
            "{n_cbit} {rate}"
        );
        let mut rng = ChaCha8Rng::seed_from_u64(n_cbit as u64);
        let payload = random_bits(&mut rng, codec.payload_len());
        let coded = codec.encode(&payload).unwrap();
        assert_eq!(coded.len(), n_cbit);
        let llrs: Vec<f64> = coded.iter().map(|&b| if b == 0 { 10.0 } else { -10.0 }).collect();
        let d = codec.decode(&llrs).unwrap();
        assert!(d.crc_ok);
        assert_eq!(d.payload, payload);
    }
    assert!(CbCodec::new(LdpcCode::default_code(), Crc::crc24a(), 1944, 0.5).is_err());
    assert!(CbCodec::new(LdpcCode::default_code(), Crc::crc24a(), 1944, 1.0).is_err());
}

#[test]
fn awgn_bler_decreases_with_snr() {
    let codec = CbCodec::default_codec();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let trials = 300u64;
    let mut intervals = Vec::new();
    for es_n0_db in [5.5f64, 6.25, 7.0] {
        let noise_var = 10f64.powf(-es_n0_db / 10.0);
        let mut errors = 0;
        for _ in 0..trials {
            let payload = random_bits(&mut rng, codec.payload_len());
            let coded = codec.encode(&payload).unwrap();
            let d = codec.decode(&bpsk_llrs(&mut rng, &coded, noise_var)).unwrap();
            if !d.crc_ok || d.payload != payload {
                errors += 1;
            }
        }
        intervals.push((errors, wilson_interval(errors, trials)));
    }
    eprintln!("AWGN BLER: {intervals:?}");
    for w in intervals.windows(2) {
        assert!(w[0].0 > w[1].0);
    }
    // The end points are separated at 95% confidence.
    assert!(intervals[0].1 .0 > intervals[2].1 .1);
}

#[test]
fn protograph_parse_roundtrip() {
    let text = "# tiny\n4 2 4\n1 3 0 -1\n2 0 1 0\n";
    let code = parse_protograph(text).unwrap();
    assert_eq!((code.n(), code.k(), code.z()), (16, 8, 4));
    let err = parse_protograph("4 2 4\n1 x 0 -1\n2 0 1 0\n").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
}
