//! One transport block through BGMD + CB-SIC, then the same block through
//! hard SIC with NR mapping.

use gmd_link::harness::{Link, Receiver, SimConfig};

fn main() -> gmd_link::Result<()> {
    let snr = 18.0;
    for (receiver, mapping) in [(Receiver::CbSic, "lc_mimo"), (Receiver::HardSic, "nr_mimo")] {
        let cfg = SimConfig {
            receiver,
            mapping: mapping.into(),
            ..SimConfig::default()
        };
        let link = Link::new(&cfg)?;
        println!("{receiver} / {mapping}, {} data bits per TB", link.data_bits());
        for trial in 0..4 {
            let t = link.trace_trial(trial, snr)?;
            let crc: Vec<bool> = t.rx.tb.codeblocks.iter().map(|cb| cb.crc_ok == Some(true)).collect();
            let wrong =
                t.rx.decisions
                    .data
                    .iter()
                    .zip(&t.tx_labels.data)
                    .filter(|(a, b)| a != b)
                    .count();
            println!(
                "  trial {trial}: CB CRC {crc:?}, symbol errors {wrong:4}, throughput {:.2} Mbps",
                t.outcome.throughput_bps / 1e6
            );
        }
    }
    Ok(())
}
