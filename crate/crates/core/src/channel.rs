//! Block flat-fading Rayleigh channels and AWGN with replayable seeding.
//!
//! Every random quantity of trial `k` comes from a ChaCha stream keyed by
//! `(base_seed, k)` and a per-purpose stream id, so a trial can be replayed
//! on its own and the thread schedule never changes what is drawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matdecomp::{ComplexMatrix, C64};

pub type TrialRng = ChaCha12Rng;

/// Independent random streams of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Channel = 0,
    Data = 1,
    Noise = 2,
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(base_seed: u64, trial: u64) -> u64 {
    mix(base_seed ^ mix(trial))
}

pub fn trial_rng(base_seed: u64, trial: u64, stream: Stream) -> TrialRng {
    let mut rng = ChaCha12Rng::seed_from_u64(trial_seed(base_seed, trial));
    rng.set_stream(stream as u64);
    rng
}

/// One `CN(0, 1)` sample.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `N_r × N_t`, i.i.d. `CN(0, 1)`.
    pub h: ComplexMatrix,
    pub noise_var: f64,
    pub seed: u64,
}

impl ChannelRealization {
    pub fn with_noise_var(mut self, noise_var: f64) -> Self {
        self.noise_var = noise_var;
        self
    }
}

pub fn draw_channel(n_r: usize, n_t: usize, seed: u64) -> ChannelRealization {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    ChannelRealization {
        h: draw_channel_with(&mut rng, n_r, n_t),
        noise_var: 0.0,
        seed,
    }
}

pub fn draw_channel_with<R: Rng + ?Sized>(rng: &mut R, n_r: usize, n_t: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n_r, n_t, |_, _| complex_normal(rng))
}

pub fn add_noise(signal: &[C64], noise_var: f64, seed: u64) -> Result<Vec<C64>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    add_noise_with(&mut rng, signal, noise_var)
}

/// `signal + n`, `n ~ CN(0, noise_var·I)`.
pub fn add_noise_with<R: Rng + ?Sized>(rng: &mut R, signal: &[C64], noise_var: f64) -> Result<Vec<C64>> {
    if !(noise_var >= 0.0) || !noise_var.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "noise variance must be >= 0, got {noise_var}"
        )));
    }
    if noise_var == 0.0 {
        return Ok(signal.to_vec());
    }
    let sd = noise_var.sqrt();
    Ok(signal.iter().map(|&x| x + complex_normal(rng) * sd).collect())
}

/// `σ² = P_t / 10^(snr_db/10)`.
pub fn noise_var_from_snr_db(total_power: f64, snr_db: f64) -> f64 {
    total_power / 10f64.powf(snr_db / 10.0)
}
