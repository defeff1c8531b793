//! MAP-VBLAST, sphere decoding and exhaustive search on one 4x4 channel.

use gmd_link::channel::{complex_normal, trial_rng, Stream};
use gmd_link::detection::{map_exhaustive, map_vblast, sphere_decode_with_stats, DetectionInput};
use gmd_link::matdecomp::{ComplexMatrix, C64};
use gmd_link::precoding::build_bgmd;
use gmd_link::shaping::{AmplitudeAlphabet, Constellation};
use rand::Rng;

fn main() -> gmd_link::Result<()> {
    let (l, nv, nu) = (3, 0.5, 0.1);
    let c = Constellation::qam(AmplitudeAlphabet::new(2)?, nu);
    let mut rng = trial_rng(5, 0, Stream::Channel);
    let h = ComplexMatrix::from_fn(l, l, |_, _| complex_normal(&mut rng));
    let b = build_bgmd(&h, nu, nv, 1.0, &vec![1.0; l])?;

    let sent: Vec<usize> = (0..l).map(|_| rng.random_range(0..c.len())).collect();
    let s: Vec<C64> = sent.iter().map(|&i| c.point(i)).collect();
    let y: Vec<C64> = h
        .mul_vec(&b.transmit(&s))
        .into_iter()
        .map(|v| v + complex_normal(&mut rng) * nv.sqrt())
        .collect();
    let yt = b.project(&y);
    let input = DetectionInput::new(&yt, &b.r_g, &c, nv, b.aug)?.with_symbol_energy(c.mean_energy());

    let v = map_vblast(&input);
    let (sd, stats) = sphere_decode_with_stats(&input, f64::INFINITY, true);
    let ex = map_exhaustive(&input)?;
    println!("sent        {sent:?}");
    println!("vblast      {:?}", v.labels);
    println!(
        "sphere      {:?}  ({} nodes, {} leaves)",
        sd.labels, stats.nodes, stats.leaves
    );
    println!("exhaustive  {:?}", ex.labels);
    println!("sphere LLRs     {:.2?}", sd.llrs);
    println!("exhaustive LLRs {:.2?}", ex.llrs);
    Ok(())
}
