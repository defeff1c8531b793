use std::collections::HashSet;

use gmd_link::harness::{Link, SimConfig};
use gmd_link::layermap::map_to_layers;
use gmd_link::shaping::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every composition of `n` into `parts` non-negative counts.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|first| {
            compositions(n - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn bits_of(x: u64, k: usize) -> Vec<u8> {
    (0..k).rev().map(|b| ((x >> b) & 1) as u8).collect()
}

fn has_composition(seq: &[u8], comp: &Composition) -> bool {
    let mut counts = vec![0usize; comp.counts.len()];
    for &a in seq {
        counts[a as usize] += 1;
    }
    counts == comp.counts
}

#[test]
fn ccdm_exhaustive_small_blocks() {
    let mut checked = 0u64;
    for parts in [2usize, 4] {
        for n in 1..=8 {
            for counts in compositions(n, parts) {
                let comp = Composition::new(counts);
                let ccdm = Ccdm::new(comp.clone());
                let k = ccdm.input_bits();
                let mut seen = HashSet::new();
                for x in 0..(1u64 << k) {
                    let bits = bits_of(x, k);
                    let seq = ccdm.encode(&bits).unwrap();
                    assert_eq!(seq.len(), n);
                    assert!(has_composition(&seq, &comp), "{:?} {seq:?}", comp.counts);
                    assert!(seen.insert(seq.clone()), "not injective");
                    assert_eq!(ccdm.decode(&seq).unwrap(), bits);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn ccdm_small_reference_counts() {
    // 4!/2! = 12 sequences, so 3 input bits.
    let c = Composition::new(vec![2, 1, 1, 0]);
    assert_eq!(c.multinomial(), 12u32.into());
    assert_eq!(c.input_bits(), 3);
    let c = Composition::new(vec![2, 2]);
    assert_eq!(c.input_bits(), 2);
}

#[test]
fn ccdm_random_block_64() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let target = mb_pmf(0.05, AmplitudeAlphabet::new(3).unwrap()).unwrap();
    let fixed = quantize_composition(&target, 64).unwrap();
    let mut cache: Vec<(Composition, Ccdm)> = vec![(fixed.clone(), Ccdm::new(fixed))];
    for case in 0..10_000 {
        // Alternate between the target composition and random ones.
        if case % 100 == 1 {
            let mut counts = vec![0usize; 4];
            for _ in 0..64 {
                counts[rng.random_range(0..4)] += 1;
            }
            let comp = Composition::new(counts);
            cache.push((comp.clone(), Ccdm::new(comp)));
        }
        let (comp, ccdm) = &cache[if case % 2 == 0 { 0 } else { cache.len() - 1 }];
        let bits: Vec<u8> = (0..ccdm.input_bits()).map(|_| rng.random::<bool>() as u8).collect();
        let seq = ccdm.encode(&bits).unwrap();
        assert!(has_composition(&seq, comp));
        assert_eq!(ccdm_decode(&seq, comp).unwrap(), bits);
    }
}

#[test]
fn ccdm_rejects_bad_input() {
    let comp = Composition::new(vec![2, 1, 1, 0]);
    assert!(ccdm_encode(&[0, 1], &comp).is_err());
    assert!(ccdm_decode(&[0, 0, 0, 1], &comp).is_err());
    // Right composition but beyond the 2^k codebook.
    let ccdm = Ccdm::new(comp.clone());
    let used: HashSet<Vec<u8>> = (0..8).map(|x| ccdm.encode(&bits_of(x, 3)).unwrap()).collect();
    let unused = [[0u8, 0, 1, 2], [0, 0, 2, 1], [0, 1, 0, 2], [0, 1, 2, 0], [0, 2, 0, 1]]
        .into_iter()
        .chain([
            [0, 2, 1, 0],
            [1, 0, 0, 2],
            [1, 0, 2, 0],
            [1, 2, 0, 0],
            [2, 0, 0, 1],
            [2, 0, 1, 0],
            [2, 1, 0, 0],
        ])
        .find(|s| !used.contains(s.as_slice()))
        .unwrap();
    assert!(ccdm_decode(&unused, &comp).is_err());
}

#[test]
fn mb_marginal_reference() {
    let d = mb_pmf(0.05, AmplitudeAlphabet::new(3).unwrap()).unwrap();
    let w: Vec<f64> = [1.0f64, 9.0, 25.0, 49.0].iter().map(|e| (-0.05 * e).exp()).collect();
    let sum: f64 = w.iter().sum();
    for (p, wi) in d.marginal().iter().zip(&w) {
        assert!((p - wi / sum).abs() < 1e-14);
    }
    for (p, r) in d.marginal().iter().zip([0.4849, 0.3250, 0.1461, 0.0440]) {
        assert!((p - r).abs() < 1e-4);
    }
    let h: f64 = w.iter().map(|wi| -(wi / sum) * (wi / sum).log2()).sum();
    assert!((mb_entropy(&d) - h).abs() < 1e-14);
}

#[test]
fn uniform_entropy_is_amplitude_bits() {
    for m in 1..=4 {
        let d = mb_pmf(0.0, AmplitudeAlphabet::new(m).unwrap()).unwrap();
        assert_eq!(mb_entropy(&d), (m - 1) as f64);
    }
}

#[test]
fn composition_minimizes_kl_over_all_candidates() {
    for (nu, n) in [(0.05, 16usize), (0.1, 16), (0.02, 12), (0.2, 9)] {
        let d = mb_pmf(nu, AmplitudeAlphabet::new(3).unwrap()).unwrap();
        let target = d.marginal();
        let comp = quantize_composition(&d, n).unwrap();
        assert_eq!(comp.counts.iter().sum::<usize>(), n);
        let best = compositions(n, 4)
            .into_iter()
            .map(|c| Composition::new(c).kl_to(&target))
            .fold(f64::INFINITY, f64::min);
        assert!(comp.kl_to(&target) <= best + 1e-12, "nu={nu} n={n}");
    }
}

#[test]
fn qam64_labels_are_a_bijection() {
    let c = Constellation::qam(AmplitudeAlphabet::new(3).unwrap(), 0.05);
    assert_eq!(c.len(), 64);
    let mut pts: Vec<(i64, i64)> = c.points().iter().map(|p| (p.re as i64, p.im as i64)).collect();
    for (i, p) in c.points().iter().enumerate() {
        assert_eq!(c.slice(*p), i);
        assert!(p.re.fract() == 0.0 && p.im.fract() == 0.0 && p.re.abs() <= 7.0 && p.im.abs() <= 7.0);
    }
    pts.sort_unstable();
    pts.dedup();
    assert_eq!(pts.len(), 64);
}

#[test]
fn alpha_meets_layer_power() {
    let d = mb_pmf(0.05, AmplitudeAlphabet::new(3).unwrap()).unwrap();
    let s = compute_alpha(&d, 4.0, 4).unwrap();
    let e: f64 = 2.0
        * d.marginal()
            .iter()
            .zip([1.0, 9.0, 25.0, 49.0])
            .map(|(p, a2)| p * a2)
            .sum::<f64>();
    assert!((s.alpha * s.alpha * e - 1.0).abs() < 1e-12);
}

/// Symbols from the full transmit chain, signs coming from parity bits.
#[test]
fn generated_symbols_follow_the_target() {
    let cfg = SimConfig {
        nu: 0.05,
        ..SimConfig::default()
    };
    let link = Link::new(&cfg).unwrap();
    let c = &link.shaping.constellation;
    let mut counts = vec![0u64; c.len()];
    let mut energy = 0.0;
    let mut total = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    while total < 1_000_000 {
        let tb = link.make_tb(&mut rng).unwrap();
        let grid = map_to_layers(&tb, &link.mapping, &link.shaping).unwrap();
        for (&lab, s) in grid.labels.data.iter().zip(&grid.symbols.data) {
            counts[lab] += 1;
            energy += (s * link.shaping.alpha()).norm_sqr();
            total += 1;
        }
    }
    // Target from the point coordinates directly.
    let w: Vec<f64> = c.points().iter().map(|p| (-0.05 * p.norm_sqr()).exp()).collect();
    let z: f64 = w.iter().sum();
    let tv: f64 = counts
        .iter()
        .zip(&w)
        .map(|(&k, wi)| (k as f64 / total as f64 - wi / z).abs())
        .sum::<f64>()
        / 2.0;
    assert!(tv < 0.01, "tv = {tv}");
    let mean = energy / total as f64;
    assert!((mean - 1.0).abs() < 0.01, "E|αs|² = {mean}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn framer_roundtrip(seed in any::<u64>(), nu in 0.0f64..0.3) {
        let spec = ShapingSpec::new(64, nu, 1944, None, 4.0, 4).unwrap();
        let framer = spec.framer(1776).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<u8> = (0..framer.data_bits()).map(|_| rng.random::<bool>() as u8).collect();
        let payload = framer.frame(&data).unwrap();
        prop_assert_eq!(payload.len(), 1776);
        prop_assert_eq!(framer.deframe(&payload).unwrap(), data);
    }

    #[test]
    fn pmf_is_normalized_and_symmetric(nu in 0.0f64..2.0, m in 1u32..=4) {
        let d = mb_pmf(nu, AmplitudeAlphabet::new(m).unwrap()).unwrap();
        prop_assert!((d.pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let n = d.pmf.len();
        for i in 0..n / 2 {
            prop_assert_eq!(d.pmf[i], d.pmf[n - 1 - i]);
        }
        prop_assert!(d.marginal().windows(2).all(|w| w[0] >= w[1]));
    }
}
