//! One transport block through the whole chain.

use rand::Rng;

use super::config::{Receiver, ReceiverPrior, SimConfig, SlicingRule};
use super::metrics::empirical_throughput;
use crate::channel::{add_noise_with, draw_channel_with, noise_var_from_snr_db, trial_rng, Stream};
use crate::detection::Slicing;
use crate::error::{Error, Result};
use crate::fec::{parse_protograph, segment, CbCodec, Crc, LdpcCode, TransportBlock};
use crate::layermap::{
    cb_sic_receive, hard_sic_receive, map_to_layers, sd_receive, Grid, LayerMapping, RxContext, RxOutput,
};
use crate::matdecomp::{ComplexMatrix, C64};
use crate::precoding::{build_bgmd, build_identity, build_svd, build_ucd, PrecoderBundle, Regularization, Scheme};
use crate::shaping::{Constellation, PasFramer, ShapingSpec};

/// Everything fixed across trials of one configuration.
#[derive(Debug, Clone)]
pub struct Link {
    pub cfg: SimConfig,
    pub precoder: Scheme,
    pub shaping: ShapingSpec,
    pub codec: CbCodec,
    pub framer: PasFramer,
    pub mapping: LayerMapping,
    /// Prior assumed by the detector.
    pub rx_prior: Constellation,
}

/// Result of one transport block.
#[derive(Debug, Clone, PartialEq)]
pub struct TbOutcome {
    pub tb_ok: bool,
    pub cb_errors: usize,
    pub throughput_bps: f64,
}

/// Full record of one transmission, for examples and inspection.
#[derive(Debug, Clone)]
pub struct TbTrace {
    pub h: ComplexMatrix,
    pub noise_var: f64,
    pub bundle: PrecoderBundle,
    pub sent: TransportBlock,
    pub tx_labels: Grid<usize>,
    pub y_tilde: Grid<C64>,
    pub rx: RxOutput,
    pub outcome: TbOutcome,
}

impl Link {
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let precoder = cfg.precoder_scheme()?;
        let shaping = ShapingSpec::new(
            cfg.qam_order,
            cfg.nu,
            cfg.n_cbit,
            cfg.ccdm_block_len,
            cfg.total_power(),
            cfg.layers,
        )?;
        let code = match &cfg.protograph {
            Some(path) => parse_protograph(&std::fs::read_to_string(path)?)?,
            None => LdpcCode::default_code(),
        };
        let codec =
            CbCodec::new(code, Crc::new(cfg.crc_poly), cfg.n_cbit, cfg.code_rate)?.with_max_iters(cfg.max_iters);
        let framer = shaping.framer(codec.payload_len())?;
        let mapping = LayerMapping::new(cfg.mapping_scheme()?, cfg.layers, cfg.n_cb, shaping.layout.symbols)?;
        let shaped = match cfg.receiver_prior {
            ReceiverPrior::Shaped => true,
            ReceiverPrior::Uniform => false,
            ReceiverPrior::Auto => precoder == Scheme::Bgmd || cfg.receiver == Receiver::Sd,
        };
        let rx_prior = Constellation::qam(shaping.alphabet(), if shaped { cfg.nu } else { 0.0 });
        Ok(Self {
            cfg: cfg.clone(),
            precoder,
            shaping,
            codec,
            framer,
            mapping,
            rx_prior,
        })
    }

    /// User data bits per transport block.
    pub fn data_bits(&self) -> usize {
        self.cfg.n_cb * self.framer.data_bits()
    }

    pub fn noise_var(&self, snr_db: f64) -> f64 {
        noise_var_from_snr_db(self.cfg.total_power(), snr_db)
    }

    pub fn build_precoder(&self, h: &ComplexMatrix, noise_var: f64) -> Result<PrecoderBundle> {
        let phi = vec![1.0; self.cfg.layers];
        let alpha = self.shaping.alpha();
        let uniform = self.shaping.uniform_energy();
        match self.precoder {
            Scheme::Bgmd => build_bgmd(h, self.cfg.nu, noise_var, alpha, &phi),
            Scheme::Ucd => build_ucd(h, noise_var, alpha, uniform, &phi),
            Scheme::Identity => build_identity(h, self.cfg.layers, Regularization::mmse(alpha, noise_var, uniform)),
            Scheme::Svd => build_svd(h, &phi, Regularization::mmse(alpha, noise_var, uniform)),
        }
    }

    /// Random data, shaped and encoded into a transport block.
    pub fn make_tb<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<TransportBlock> {
        let mut info = Vec::with_capacity(self.cfg.n_cb * self.codec.payload_len());
        for _ in 0..self.cfg.n_cb {
            let data: Vec<u8> = (0..self.framer.data_bits())
                .map(|_| rng.random::<bool>() as u8)
                .collect();
            info.extend(self.framer.frame(&data)?);
        }
        let mut tb = segment(&info, &self.codec, self.cfg.n_cb)?;
        tb.slot_duration = self.cfg.slot_duration;
        Ok(tb)
    }

    pub fn run_trial(&self, trial: u64, snr_db: f64) -> Result<TbOutcome> {
        self.trace_trial(trial, snr_db).map(|t| t.outcome)
    }

    /// Trial `trial` at `snr_db`. Channel, data and the unit-variance noise
    /// draws depend only on `(seed, trial)`, so SNR points and schemes see
    /// common random numbers.
    pub fn trace_trial(&self, trial: u64, snr_db: f64) -> Result<TbTrace> {
        let wrap = |e: Error| Error::Trial {
            trial,
            snr_db,
            source: Box::new(e),
        };
        self.trace_inner(trial, snr_db).map_err(wrap)
    }

    fn trace_inner(&self, trial: u64, snr_db: f64) -> Result<TbTrace> {
        let seed = self.cfg.seed;
        let h = draw_channel_with(&mut trial_rng(seed, trial, Stream::Channel), self.cfg.n_r, self.cfg.n_t);
        let sent = self.make_tb(&mut trial_rng(seed, trial, Stream::Data))?;
        let noise_var = self.noise_var(snr_db);
        let bundle = self.build_precoder(&h, noise_var)?;
        let grid = map_to_layers(&sent, &self.mapping, &self.shaping)?;

        let mut noise_rng = trial_rng(seed, trial, Stream::Noise);
        let slots = self.mapping.slots();
        let mut y_tilde = Grid::filled(self.cfg.layers, slots, C64::new(0.0, 0.0));
        for s in 0..slots {
            let x = bundle.transmit(&grid.symbols.column(s));
            let y = add_noise_with(&mut noise_rng, &h.mul_vec(&x), noise_var)?;
            for (l, v) in bundle.project(&y).into_iter().enumerate() {
                y_tilde.set(l, s, v);
            }
        }

        let ctx = RxContext {
            bundle: &bundle,
            mapping: &self.mapping,
            codec: &self.codec,
            shaping: &self.shaping,
            prior: &self.rx_prior,
            noise_var,
            slicing: match self.cfg.slicing {
                SlicingRule::Euclidean => Slicing::Euclidean,
                SlicingRule::Prior => Slicing::Prior,
            },
        };
        let rx = match self.cfg.receiver {
            Receiver::CbSic => cb_sic_receive(&y_tilde, &ctx)?,
            Receiver::HardSic => hard_sic_receive(&y_tilde, &ctx)?,
            Receiver::Sd => sd_receive(&y_tilde, &ctx)?,
        };
        let cb_errors = rx.tb.codeblocks.iter().filter(|cb| cb.crc_ok != Some(true)).count();
        let outcome = TbOutcome {
            tb_ok: rx.tb.crc_ok() == Some(true),
            cb_errors,
            throughput_bps: empirical_throughput(&rx.llrs, &self.shaping, self.cfg.slot_duration)?,
        };
        Ok(TbTrace {
            h,
            noise_var,
            bundle,
            sent,
            tx_labels: grid.labels,
            y_tilde,
            rx,
            outcome,
        })
    }
}
