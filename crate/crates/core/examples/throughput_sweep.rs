//! Small BLER / throughput sweep written as CSV to stdout.

use gmd_link::harness::{csv_string, run_sweep, SimConfig};

fn main() -> gmd_link::Result<()> {
    let text = "\
schema_version = 1
precoder = \"bgmd\"
receiver = \"cb_sic\"
nu = 0.1
snr_db = [14.0, 17.0, 20.0, 23.0]
trials = 100
";
    let cfg = SimConfig::from_toml_str(text)?;
    let res = run_sweep(&cfg)?;
    print!("{}", csv_string(&res));
    Ok(())
}
