// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod channel;
pub mod detection;
pub mod error;
pub mod fec;
pub mod harness;
pub mod layermap;
pub mod matdecomp;
pub mod precoding;
pub mod shaping;

pub use error::{Error, Result};
