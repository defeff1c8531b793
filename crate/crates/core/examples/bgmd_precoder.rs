//! Distribution-aware GMD precoder against its uniform-prior counterpart.

use gmd_link::channel::{draw_channel, noise_var_from_snr_db};
use gmd_link::precoding::{build_bgmd, build_ucd};
use gmd_link::shaping::ShapingSpec;

fn main() -> gmd_link::Result<()> {
    let h = draw_channel(4, 4, 11).h;
    let nv = noise_var_from_snr_db(4.0, 18.0);
    for nu in [0.05, 0.1] {
        let spec = ShapingSpec::new(64, nu, 1944, None, 4.0, 4)?;
        let b = build_bgmd(&h, nu, nv, spec.alpha(), &[1.0; 4])?;
        let u = build_ucd(&h, nv, spec.alpha(), spec.uniform_energy(), &[1.0; 4])?;
        println!("nu = {nu}: alpha = {:.4}", spec.alpha());
        println!("  BGMD aug {:.5}, layer gain {:.4}", b.aug, b.r_g[(0, 0)].re);
        println!("  UCD  aug {:.5}, layer gain {:.4}", u.aug, u.r_g[(0, 0)].re);
        println!("  |F_bgmd - F_ucd| = {:.4}", b.f.sub(&u.f).frobenius_norm());
        let g = b.augmented_channel(&h)?;
        let direct = gmd_link::matdecomp::qr(&g)?;
        println!(
            "  max |diag R(QR of G) - diag R_G| = {:.2e}",
            direct.r.sub(&b.r_g).diag().iter().map(|z| z.norm()).fold(0.0, f64::max)
        );
    }
    Ok(())
}
