//! Codeword-to-layer mapping and the receivers built on it.

mod mapping;
mod receive;

pub use mapping::{demap_labels, map_to_layers, Grid, LayerMapping, MappingScheme, SymbolGrid};
pub use receive::{cb_sic_receive, hard_sic_receive, sd_receive, RxContext, RxOutput};
