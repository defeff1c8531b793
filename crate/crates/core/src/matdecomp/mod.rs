//! Complex dense linear algebra: QR, SVD and the geometric mean decomposition.

mod gmd;
mod matrix;
mod qr;
mod svd;

pub use gmd::{gmd, gmd_from_svd, GmdFactors};
pub use matrix::{ComplexMatrix, C64};
pub use qr::{qr, QrFactors};
pub use svd::{svd, Svd};

/// Relative Frobenius reconstruction tolerance for every factorization.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
/// Max-entry tolerance on `qᴴq − I`.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Smallest admissible ratio of smallest to largest singular value.
pub const RANK_TOL: f64 = 1e-12;
