//! Factor a random channel with SVD, QR and GMD and print the diagonals.

use gmd_link::channel::draw_channel;
use gmd_link::matdecomp::{gmd, qr, svd};

fn main() -> gmd_link::Result<()> {
    let h = draw_channel(4, 4, 2024).h;
    let s = svd(&h)?;
    let q = qr(&h)?;
    let g = gmd(&h)?;

    println!("singular values : {:.4?}", s.s);
    println!(
        "diag(R) of QR   : {:.4?}",
        q.r.diag().iter().map(|z| z.re).collect::<Vec<_>>()
    );
    println!(
        "diag(R) of GMD  : {:.4?}",
        g.r.diag().iter().map(|z| z.re).collect::<Vec<_>>()
    );
    println!("geometric mean  : {:.4}", g.mean);

    let rec = &(&g.q * &g.r) * &g.p.adjoint();
    println!(
        "reconstruction  : {:.2e}",
        rec.sub(&h).frobenius_norm() / h.frobenius_norm()
    );
    println!(
        "unitarity (Q, P): {:.2e}, {:.2e}",
        g.q.unitarity_error(),
        g.p.unitarity_error()
    );
    Ok(())
}
