//! Probabilistic amplitude shaping: Maxwell-Boltzmann priors, constant
//! composition matching, QAM labeling and power scaling.

mod ccdm;
mod distribution;
mod modulation;
mod pas;
mod spec;

pub use ccdm::{ccdm_decode, ccdm_encode, quantize_composition, Ccdm, Composition};
pub use distribution::{compute_alpha, mb_entropy, mb_pmf, AmplitudeAlphabet, MbDistribution, ScalingFactor};
pub use modulation::{gray, gray_inverse, map_symbols, pam_label, pam_value, Constellation};
pub use pas::{PasFramer, PasLayout};
pub use spec::ShapingSpec;
