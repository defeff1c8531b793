use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::fec::TransportBlock;
use crate::matdecomp::C64;
use crate::shaping::ShapingSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MappingScheme {
    /// Symbols of the codeword dealt round-robin over all layers.
    NrMimo,
    /// Each codeblock confined to one layer.
    LcMimo,
}

impl MappingScheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            MappingScheme::NrMimo => "nr_mimo",
            MappingScheme::LcMimo => "lc_mimo",
        }
    }
}

impl fmt::Display for MappingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MappingScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nr_mimo" | "nr" => Ok(MappingScheme::NrMimo),
            "lc_mimo" | "lc" => Ok(MappingScheme::LcMimo),
            other => Err(Error::Config(format!("unknown mapping {other:?}"))),
        }
    }
}

/// Placement of codeblock symbols on the `layers × slots` grid.
///
/// The unit of placement is a whole QAM symbol, so every symbol keeps its
/// amplitude/sign label structure intact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerMapping {
    pub scheme: MappingScheme,
    pub layers: usize,
    pub n_cb: usize,
    /// Symbols per codeblock.
    pub cb_symbols: usize,
}

impl LayerMapping {
    pub fn new(scheme: MappingScheme, layers: usize, n_cb: usize, cb_symbols: usize) -> Result<Self> {
        if layers == 0 || n_cb == 0 || cb_symbols == 0 {
            return Err(Error::GridMismatch(
                "layers, codeblocks and symbols must be >= 1".into(),
            ));
        }
        if !(n_cb * cb_symbols).is_multiple_of(layers) {
            return Err(Error::GridMismatch(format!(
                "{n_cb} x {cb_symbols} symbols do not fill {layers} layers evenly"
            )));
        }
        if scheme == MappingScheme::LcMimo && !n_cb.is_multiple_of(layers) {
            return Err(Error::GridMismatch(format!(
                "layer containment needs the {n_cb} codeblocks to split evenly over {layers} layers"
            )));
        }
        let m = Self {
            scheme,
            layers,
            n_cb,
            cb_symbols,
        };
        if scheme == MappingScheme::LcMimo {
            for cb in 0..n_cb {
                assert_eq!(m.layers_of(cb).len(), 1, "codeblock {cb} leaves its layer");
            }
        }
        Ok(m)
    }

    pub fn slots(&self) -> usize {
        self.n_cb * self.cb_symbols / self.layers
    }

    /// `(layer, slot)` of symbol `t` of codeblock `cb`.
    #[inline]
    pub fn place(&self, cb: usize, t: usize) -> (usize, usize) {
        match self.scheme {
            MappingScheme::LcMimo => {
                let per_layer = self.n_cb / self.layers;
                (cb / per_layer, (cb % per_layer) * self.cb_symbols + t)
            }
            MappingScheme::NrMimo => {
                let g = cb * self.cb_symbols + t;
                (g % self.layers, g / self.layers)
            }
        }
    }

    /// Inverse of [`LayerMapping::place`].
    #[inline]
    pub fn locate(&self, layer: usize, slot: usize) -> (usize, usize) {
        match self.scheme {
            MappingScheme::LcMimo => {
                let per_layer = self.n_cb / self.layers;
                let cb = layer * per_layer + slot / self.cb_symbols;
                (cb, slot % self.cb_symbols)
            }
            MappingScheme::NrMimo => {
                let g = slot * self.layers + layer;
                (g / self.cb_symbols, g % self.cb_symbols)
            }
        }
    }

    pub fn layers_of(&self, cb: usize) -> BTreeSet<usize> {
        (0..self.cb_symbols).map(|t| self.place(cb, t).0).collect()
    }

    /// Codeblocks with at least one symbol on `layer`, ascending.
    pub fn cbs_on_layer(&self, layer: usize) -> Vec<usize> {
        (0..self.n_cb)
            .filter(|&cb| self.layers_of(cb).contains(&layer))
            .collect()
    }
}

/// Dense `layers × slots` array, layer-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub layers: usize,
    pub slots: usize,
    pub data: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn filled(layers: usize, slots: usize, v: T) -> Self {
        Self {
            layers,
            slots,
            data: vec![v; layers * slots],
        }
    }

    #[inline]
    pub fn get(&self, layer: usize, slot: usize) -> &T {
        &self.data[layer * self.slots + slot]
    }

    #[inline]
    pub fn set(&mut self, layer: usize, slot: usize, v: T) {
        self.data[layer * self.slots + slot] = v;
    }

    pub fn column(&self, slot: usize) -> Vec<T> {
        (0..self.layers).map(|l| self.get(l, slot).clone()).collect()
    }

    pub fn row(&self, layer: usize) -> &[T] {
        &self.data[layer * self.slots..(layer + 1) * self.slots]
    }
}

/// Transmitted grid: constellation labels and unscaled points.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    pub labels: Grid<usize>,
    pub symbols: Grid<C64>,
}

/// Places every codeblock's symbols on the layer grid.
pub fn map_to_layers(tb: &TransportBlock, mapping: &LayerMapping, shaping: &ShapingSpec) -> Result<SymbolGrid> {
    let n_cbit = shaping.layout.n_cbit();
    if tb.codeblocks.len() != mapping.n_cb
        || shaping.layout.symbols != mapping.cb_symbols
        || tb.codeblocks.iter().any(|cb| cb.coded_bits.len() != n_cbit)
    {
        return Err(Error::GridMismatch(format!(
            "{} codeblocks of {} symbols do not match the mapping ({} x {})",
            tb.codeblocks.len(),
            shaping.layout.symbols,
            mapping.n_cb,
            mapping.cb_symbols
        )));
    }
    let mut labels = Grid::filled(mapping.layers, mapping.slots(), 0usize);
    let mut symbols = Grid::filled(mapping.layers, mapping.slots(), C64::new(0.0, 0.0));
    for (c, cb) in tb.codeblocks.iter().enumerate() {
        for t in 0..mapping.cb_symbols {
            let (l, s) = mapping.place(c, t);
            let label = shaping.symbol_label(&cb.coded_bits, t);
            labels.set(l, s, label);
            symbols.set(l, s, shaping.constellation.point(label));
        }
    }
    Ok(SymbolGrid { labels, symbols })
}

/// Coded bits of every codeblock read back from a label grid.
pub fn demap_labels(labels: &Grid<usize>, mapping: &LayerMapping, shaping: &ShapingSpec) -> Vec<Vec<u8>> {
    let bps = shaping.layout.bits_per_symbol();
    let mut out = vec![vec![0u8; shaping.layout.n_cbit()]; mapping.n_cb];
    for l in 0..mapping.layers {
        for s in 0..mapping.slots() {
            let (c, t) = mapping.locate(l, s);
            let label = *labels.get(l, s);
            for (b, &p) in shaping.layout.positions(t).iter().enumerate() {
                out[c][p] = ((label >> (bps - 1 - b)) & 1) as u8;
            }
        }
    }
    out
}
