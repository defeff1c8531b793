use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layermap::MappingScheme;
use crate::precoding::Scheme;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Receiver {
    CbSic,
    HardSic,
    Sd,
}

impl Receiver {
    pub fn as_str(&self) -> &'static str {
        match self {
            Receiver::CbSic => "cb_sic",
            Receiver::HardSic => "hard_sic",
            Receiver::Sd => "sd",
        }
    }
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which symbol prior the detector and demapper assume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReceiverPrior {
    /// Shaped for BGMD and sphere decoding, uniform for the other SIC links.
    #[default]
    Auto,
    Shaped,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlicingRule {
    #[default]
    Euclidean,
    Prior,
}

/// One Monte-Carlo experiment. Field names double as TOML keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub schema_version: u32,
    #[serde(default = "d_ant")]
    pub n_t: usize,
    #[serde(default = "d_ant")]
    pub n_r: usize,
    #[serde(default = "d_ant")]
    pub layers: usize,
    #[serde(default = "d_qam")]
    pub qam_order: u32,
    #[serde(default = "d_nu")]
    pub nu: f64,
    #[serde(default = "d_rate")]
    pub code_rate: f64,
    #[serde(default = "d_ncbit")]
    pub n_cbit: usize,
    #[serde(default = "d_ant")]
    pub n_cb: usize,
    /// Matcher block length in amplitude symbols; whole codeblock if absent.
    #[serde(default)]
    pub ccdm_block_len: Option<usize>,
    #[serde(default = "d_slot")]
    pub slot_duration: f64,
    /// Total transmit power `P_t`; defaults to the number of layers.
    #[serde(default)]
    pub total_power: Option<f64>,
    pub snr_db: Vec<f64>,
    #[serde(default = "d_precoder")]
    pub precoder: String,
    #[serde(default = "d_receiver")]
    pub receiver: Receiver,
    #[serde(default = "d_mapping")]
    pub mapping: String,
    #[serde(default)]
    pub receiver_prior: ReceiverPrior,
    #[serde(default)]
    pub slicing: SlicingRule,
    #[serde(default = "d_trials")]
    pub trials: u64,
    /// Stop a point once the BLER interval is tight (see `run_point`).
    #[serde(default)]
    pub early_stop: bool,
    #[serde(default = "d_seed")]
    pub seed: u64,
    #[serde(default = "d_iters")]
    pub max_iters: usize,
    /// Protograph file; the bundled code when absent.
    #[serde(default)]
    pub protograph: Option<String>,
    #[serde(default = "d_crc")]
    pub crc_poly: u64,
}

fn d_ant() -> usize {
    4
}
fn d_qam() -> u32 {
    64
}
fn d_nu() -> f64 {
    0.1
}
fn d_rate() -> f64 {
    0.9258
}
fn d_ncbit() -> usize {
    1944
}
fn d_slot() -> f64 {
    0.5e-3
}
fn d_precoder() -> String {
    "bgmd".into()
}
fn d_receiver() -> Receiver {
    Receiver::CbSic
}
fn d_mapping() -> String {
    "lc_mimo".into()
}
fn d_trials() -> u64 {
    2000
}
fn d_seed() -> u64 {
    1
}
fn d_iters() -> usize {
    crate::fec::DEFAULT_MAX_ITERS
}
fn d_crc() -> u64 {
    0x1864CFB
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n_t: d_ant(),
            n_r: d_ant(),
            layers: d_ant(),
            qam_order: d_qam(),
            nu: d_nu(),
            code_rate: d_rate(),
            n_cbit: d_ncbit(),
            n_cb: d_ant(),
            ccdm_block_len: None,
            slot_duration: d_slot(),
            total_power: None,
            snr_db: vec![10.0, 15.0, 20.0],
            precoder: d_precoder(),
            receiver: d_receiver(),
            mapping: d_mapping(),
            receiver_prior: ReceiverPrior::Auto,
            slicing: SlicingRule::Euclidean,
            trials: d_trials(),
            early_stop: false,
            seed: d_seed(),
            max_iters: d_iters(),
            protograph: None,
            crc_poly: d_crc(),
        }
    }
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_toml_with_overrides(text, &[])
    }

    /// Parses `text` after applying `key=value` overrides to its table.
    /// Values are read as TOML, falling back to a bare string.
    pub fn from_toml_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override {o:?} is not key=value")))?;
            let (k, v) = (k.trim(), v.trim());
            let value = format!("v = {v}")
                .parse::<toml::Table>()
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(v.to_string()));
            table.insert(k.to_string(), value);
        }
        let cfg: SimConfig = match table.try_into() {
            Ok(c) => c,
            Err(e) => {
                // The merged table has no spans; re-read the file alone so
                // errors in it carry line numbers.
                if let Err(file_err) = toml::from_str::<SimConfig>(text) {
                    return Err(Error::Config(file_err.to_string()));
                }
                return Err(Error::Config(format!("after overrides: {e}")));
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_with_overrides(&text, overrides)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn precoder_scheme(&self) -> Result<Scheme> {
        Scheme::from_str(&self.precoder)
    }

    pub fn mapping_scheme(&self) -> Result<MappingScheme> {
        MappingScheme::from_str(&self.mapping)
    }

    pub fn total_power(&self) -> f64 {
        self.total_power.unwrap_or(self.layers as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let precoder = self.precoder_scheme()?;
        let mapping = self.mapping_scheme()?;
        if self.qam_order < 4 || !self.qam_order.is_power_of_two() || !self.qam_order.trailing_zeros().is_multiple_of(2)
        {
            return bad(format!("qam_order must be a power of 4, got {}", self.qam_order));
        }
        if self.snr_db.is_empty() {
            return bad("snr_db must not be empty".into());
        }
        if self.snr_db.windows(2).any(|w| !(w[0] < w[1])) || self.snr_db.iter().any(|x| !x.is_finite()) {
            return bad("snr_db must be finite and strictly ascending".into());
        }
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        if self.layers == 0 || self.layers > self.n_t.min(self.n_r) {
            return bad(format!("layers must be in 1..={}", self.n_t.min(self.n_r)));
        }
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            return bad(format!("nu must be >= 0, got {}", self.nu));
        }
        if precoder == Scheme::Bgmd && self.nu <= 0.0 {
            return bad("the bgmd precoder needs nu > 0; use ucd for uniform signalling".into());
        }
        if self.receiver == Receiver::CbSic && mapping != MappingScheme::LcMimo {
            return bad("cb_sic requires mapping = \"lc_mimo\"".into());
        }
        if !(self.slot_duration > 0.0) || !(self.total_power() > 0.0) {
            return bad("slot_duration and total_power must be > 0".into());
        }
        if self.n_cb == 0 || self.max_iters == 0 {
            return bad("n_cb and max_iters must be >= 1".into());
        }
        Ok(())
    }
}
