//! Slot receivers: codeblock-level SIC, symbol-level hard SIC, and
//! per-slot soft sphere decoding.

use super::mapping::{Grid, LayerMapping, MappingScheme};
use crate::detection::{map_vblast_with_model, soft_demap_all, sphere_decode, DetectionInput, LayerModel, Slicing};
use crate::error::{Error, Result};
use crate::fec::{CbCodec, CodeBlock, TransportBlock, DEFAULT_SLOT_DURATION};
use crate::matdecomp::C64;
use crate::precoding::PrecoderBundle;
use crate::shaping::{Constellation, ShapingSpec};

/// What a receiver knows about the link.
#[derive(Debug, Clone, Copy)]
pub struct RxContext<'a> {
    pub bundle: &'a PrecoderBundle,
    pub mapping: &'a LayerMapping,
    pub codec: &'a CbCodec,
    pub shaping: &'a ShapingSpec,
    /// Prior the detector assumes (may differ from the transmit prior).
    pub prior: &'a Constellation,
    pub noise_var: f64,
    pub slicing: Slicing,
}

#[derive(Debug, Clone)]
pub struct RxOutput {
    pub tb: TransportBlock,
    /// Pre-decoder LLRs per codeblock, in coded-bit order.
    pub llrs: Vec<Vec<f64>>,
    /// Codeblocks whose cancellation fell back to hard detector symbols.
    pub fallback: Vec<bool>,
    /// Symbol labels used for cancellation (SIC) or detected (others).
    pub decisions: Grid<usize>,
}

impl RxContext<'_> {
    fn model(&self) -> LayerModel {
        LayerModel::new(
            &self.bundle.r_g,
            self.bundle.aug,
            self.noise_var,
            self.shaping.symbol_energy(),
        )
    }

    fn check(&self, y: &Grid<C64>) -> Result<()> {
        if y.layers != self.mapping.layers
            || y.slots != self.mapping.slots()
            || self.bundle.layers() != self.mapping.layers
        {
            return Err(Error::GridMismatch(format!(
                "received grid {}x{} does not match the mapping {}x{}",
                y.layers,
                y.slots,
                self.mapping.layers,
                self.mapping.slots()
            )));
        }
        Ok(())
    }

    /// Scatters the per-bit LLRs of grid symbol `(layer, slot)`.
    fn store(&self, llrs: &mut [Vec<f64>], layer: usize, slot: usize, bits: &[f64]) {
        let (cb, t) = self.mapping.locate(layer, slot);
        for (&p, &v) in self.shaping.layout.positions(t).iter().zip(bits) {
            llrs[cb][p] = v;
        }
    }

    fn input<'b>(&'b self, y: &'b [C64]) -> Result<DetectionInput<'b>> {
        Ok(
            DetectionInput::new(y, &self.bundle.r_g, self.prior, self.noise_var, self.bundle.aug)?
                .with_symbol_energy(self.shaping.symbol_energy()),
        )
    }

    fn decode_all(&self, llrs: Vec<Vec<f64>>, decisions: Grid<usize>) -> Result<RxOutput> {
        let codeblocks = llrs
            .iter()
            .map(|l| {
                let d = self.codec.decode(l)?;
                Ok(CodeBlock {
                    coded_bits: self.codec.encode(&d.payload)?,
                    info_bits: d.payload,
                    crc_ok: Some(d.crc_ok),
                    layer: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RxOutput {
            tb: self.tb(codeblocks),
            fallback: vec![false; llrs.len()],
            llrs,
            decisions,
        })
    }

    fn tb(&self, mut codeblocks: Vec<CodeBlock>) -> TransportBlock {
        for (c, cb) in codeblocks.iter_mut().enumerate() {
            let layers = self.mapping.layers_of(c);
            cb.layer = (layers.len() == 1).then(|| *layers.iter().next().expect("one layer"));
        }
        TransportBlock {
            codeblocks,
            slot_duration: DEFAULT_SLOT_DURATION,
        }
    }
}

/// Codeblock-level SIC: detect a layer, decode its codeblocks, rebuild
/// their symbols from the re-encoded bits and cancel them before moving to
/// the next layer. Requires layer-contained mapping.
pub fn cb_sic_receive(y_tilde: &Grid<C64>, ctx: &RxContext) -> Result<RxOutput> {
    ctx.check(y_tilde)?;
    if ctx.mapping.scheme != MappingScheme::LcMimo {
        return Err(Error::InvalidParameter(
            "codeblock SIC needs layer-contained mapping".into(),
        ));
    }
    let (l, slots) = (ctx.mapping.layers, ctx.mapping.slots());
    let r = &ctx.bundle.r_g;
    let c = ctx.prior;
    let model = ctx.model();
    let bits = c.bits_per_symbol();
    let mut llrs = vec![vec![0.0; ctx.codec.n_cbit()]; ctx.mapping.n_cb];
    let mut recon = Grid::filled(l, slots, 0usize);
    let mut codeblocks: Vec<Option<CodeBlock>> = vec![None; ctx.mapping.n_cb];
    let mut fallback = vec![false; ctx.mapping.n_cb];
    let mut buf = vec![0.0; bits];
    let mut hard = vec![0usize; slots];
    for i in (0..l).rev() {
        let rii = C64::new(r[(i, i)].re, 0.0);
        for (s, h) in hard.iter_mut().enumerate() {
            let mut z = *y_tilde.get(i, s);
            for j in i + 1..l {
                z -= r[(i, j)] * c.point(*recon.get(j, s));
            }
            let best = soft_demap_all(z, model.gain[i], model.var[i], c, &mut buf);
            ctx.store(&mut llrs, i, s, &buf);
            *h = match ctx.slicing {
                Slicing::Prior => best,
                Slicing::Euclidean => c.slice(z / rii),
            };
        }
        for cb in ctx.mapping.cbs_on_layer(i) {
            let d = ctx.codec.decode(&llrs[cb])?;
            let coded = if d.crc_ok {
                let coded = ctx.codec.encode(&d.payload)?;
                for t in 0..ctx.mapping.cb_symbols {
                    let (li, s) = ctx.mapping.place(cb, t);
                    recon.set(li, s, ctx.shaping.symbol_label(&coded, t));
                }
                coded
            } else {
                fallback[cb] = true;
                let mut coded = vec![0u8; ctx.codec.n_cbit()];
                for t in 0..ctx.mapping.cb_symbols {
                    let (li, s) = ctx.mapping.place(cb, t);
                    recon.set(li, s, hard[s]);
                    for (b, &p) in ctx.shaping.layout.positions(t).iter().enumerate() {
                        coded[p] = c.bit(hard[s], b);
                    }
                }
                coded
            };
            codeblocks[cb] = Some(CodeBlock {
                info_bits: d.payload,
                coded_bits: coded,
                crc_ok: Some(d.crc_ok),
                layer: Some(i),
            });
        }
    }
    let codeblocks = codeblocks
        .into_iter()
        .map(|cb| cb.expect("every codeblock sits on a layer"))
        .collect();
    Ok(RxOutput {
        tb: ctx.tb(codeblocks),
        llrs,
        fallback,
        decisions: recon,
    })
}

/// Symbol-level SIC per slot on hard decisions; all codeblocks decoded
/// afterwards.
pub fn hard_sic_receive(y_tilde: &Grid<C64>, ctx: &RxContext) -> Result<RxOutput> {
    ctx.check(y_tilde)?;
    let (l, slots) = (ctx.mapping.layers, ctx.mapping.slots());
    let model = ctx.model();
    let bits = ctx.prior.bits_per_symbol();
    let mut llrs = vec![vec![0.0; ctx.codec.n_cbit()]; ctx.mapping.n_cb];
    let mut decisions = Grid::filled(l, slots, 0usize);
    for s in 0..slots {
        let y = y_tilde.column(s);
        let out = map_vblast_with_model(&ctx.input(&y)?, &model, ctx.slicing);
        for i in 0..l {
            ctx.store(&mut llrs, i, s, &out.llrs[i * bits..(i + 1) * bits]);
            decisions.set(i, s, out.labels[i]);
        }
    }
    ctx.decode_all(llrs, decisions)
}

/// Joint soft-output sphere decoding per slot, then channel decoding.
pub fn sd_receive(y_tilde: &Grid<C64>, ctx: &RxContext) -> Result<RxOutput> {
    ctx.check(y_tilde)?;
    let (l, slots) = (ctx.mapping.layers, ctx.mapping.slots());
    let bits = ctx.prior.bits_per_symbol();
    let mut llrs = vec![vec![0.0; ctx.codec.n_cbit()]; ctx.mapping.n_cb];
    let mut decisions = Grid::filled(l, slots, 0usize);
    for s in 0..slots {
        let y = y_tilde.column(s);
        let out = sphere_decode(&ctx.input(&y)?, f64::INFINITY);
        for i in 0..l {
            ctx.store(&mut llrs, i, s, &out.llrs[i * bits..(i + 1) * bits]);
            decisions.set(i, s, out.labels[i]);
        }
    }
    ctx.decode_all(llrs, decisions)
}
