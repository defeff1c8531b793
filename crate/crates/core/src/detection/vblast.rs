use super::demap::{soft_demap_all, LayerModel};
use super::{residuals, DetectionInput, DetectionOutput};
use crate::matdecomp::C64;

/// Decision rule applied to each cancelled observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Slicing {
    /// Nearest point to `z_i / R_ii`.
    #[default]
    Euclidean,
    /// Smallest `|z_i − g_i·c|² / v_i − ln P(c)` under the layer model.
    Prior,
}

/// Nulling and cancellation from the last layer up, Euclidean slicing.
pub fn map_vblast(input: &DetectionInput) -> DetectionOutput {
    map_vblast_with(input, Slicing::Euclidean)
}

pub fn map_vblast_with(input: &DetectionInput, slicing: Slicing) -> DetectionOutput {
    let model = LayerModel::new(input.r_g, input.aug, input.noise_var, input.symbol_energy);
    map_vblast_with_model(input, &model, slicing)
}

pub fn map_vblast_with_model(input: &DetectionInput, model: &LayerModel, slicing: Slicing) -> DetectionOutput {
    let l = input.layers();
    let c = input.constellation;
    let bits = c.bits_per_symbol();
    let mut labels = vec![0usize; l];
    let mut llrs = vec![0.0; l * bits];
    for i in (0..l).rev() {
        let mut z = input.y_tilde[i];
        for j in i + 1..l {
            z -= input.r_g[(i, j)] * c.point(labels[j]);
        }
        let best = soft_demap_all(z, model.gain[i], model.var[i], c, &mut llrs[i * bits..(i + 1) * bits]);
        labels[i] = match slicing {
            Slicing::Prior => best,
            Slicing::Euclidean => c.slice(z / C64::new(input.r_g[(i, i)].re, 0.0)),
        };
    }
    let res = residuals(input, &labels);
    DetectionOutput::from_labels(input, labels, llrs, res)
}
