use gmd_link::channel::draw_channel;
use gmd_link::matdecomp::{ComplexMatrix, C64};
use gmd_link::precoding::*;
use gmd_link::shaping::ShapingSpec;
use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;

fn to_na(a: &ComplexMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

/// `log det(I + A·Aᴴ / σ²)` via nalgebra.
fn logdet_mi(a: &ComplexMatrix, noise_var: f64) -> f64 {
    let m = to_na(a);
    let k = DMatrix::<Complex<f64>>::identity(m.nrows(), m.nrows()) + &m * m.adjoint() / Complex::new(noise_var, 0.0);
    k.determinant().re.ln()
}

fn diag_re(r: &ComplexMatrix) -> Vec<f64> {
    r.diag().iter().map(|z| z.re).collect()
}

const NV: f64 = 0.1;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bgmd_equal_diagonal_and_product(seed in any::<u64>(), nu in 0.01f64..0.5) {
        let h = draw_channel(4, 4, seed).h;
        let b = build_bgmd(&h, nu, NV, 0.3, &[1.0; 4]).unwrap();
        let d = diag_re(&b.r_g);
        let (mx, mn) = d.iter().fold((f64::MIN, f64::MAX), |(a, c), &x| (a.max(x), c.min(x)));
        prop_assert!(mx / mn - 1.0 < 1e-9);
        // diag^L = product of singular values of the augmented channel.
        let g = b.augmented_channel(&h).unwrap();
        let sv = to_na(&g).singular_values();
        let prod: f64 = sv.iter().product();
        prop_assert!((d.iter().product::<f64>() - prod).abs() <= 1e-8 * prod);
    }

    #[test]
    fn bgmd_matches_direct_qr_of_g(seed in any::<u64>()) {
        let h = draw_channel(4, 4, seed).h;
        let b = build_bgmd(&h, 0.05, NV, 0.3, &[1.0; 4]).unwrap();
        let g = to_na(&b.augmented_channel(&h).unwrap());
        let r = g.qr().r();
        for i in 0..4 {
            prop_assert!((r[(i, i)].norm() - b.r_g[(i, i)].re).abs() < 1e-8);
        }
        // q_u·r_g reproduces the top block α·H·F.
        let top = (&b.q_u * &b.r_g).sub(&(&h * &b.f).scale(b.alpha));
        prop_assert!(top.frobenius_norm() < 1e-9);
    }

    #[test]
    fn ucd_is_bgmd_at_inverse_symbol_var(seed in any::<u64>(), var in 1.0f64..60.0) {
        let h = draw_channel(4, 4, seed).h;
        let u = build_ucd(&h, NV, 0.2, var, &[1.0; 4]).unwrap();
        let b = build_bgmd(&h, 1.0 / var, NV, 0.2, &[1.0; 4]).unwrap();
        prop_assert!(u.f.max_abs_diff(&b.f) < 1e-10);
        prop_assert!(u.r_g.max_abs_diff(&b.r_g) < 1e-10);
        prop_assert!(u.q_u.max_abs_diff(&b.q_u) < 1e-10);
    }

    #[test]
    fn every_scheme_preserves_power(seed in any::<u64>(), nu in 0.02f64..0.2) {
        let h = draw_channel(4, 4, seed).h;
        let spec = ShapingSpec::new(64, nu, 1944, None, 4.0, 4).unwrap();
        let alpha = spec.alpha();
        let reg = Regularization::mmse(alpha, NV, spec.uniform_energy());
        let bundles = [
            build_bgmd(&h, nu, NV, alpha, &[1.0; 4]).unwrap(),
            build_ucd(&h, NV, alpha, spec.uniform_energy(), &[1.0; 4]).unwrap(),
            build_identity(&h, 4, reg).unwrap(),
            build_svd(&h, &[1.0; 4], reg).unwrap(),
        ];
        for b in &bundles {
            prop_assert!(b.f.unitarity_error() < 1e-10);
            // E‖αFs‖² = α²·E|s|²·tr(FᴴF) with i.i.d. zero-mean layers.
            let tr: f64 = (&b.f.adjoint() * &b.f).diag().iter().map(|z| z.re).sum();
            let power = alpha * alpha * spec.symbol_energy() * tr;
            prop_assert!((power - 4.0).abs() < 1e-9, "{:?}: {}", b.scheme, power);
        }
    }

    #[test]
    fn precoding_keeps_mutual_information(seed in any::<u64>()) {
        let h = draw_channel(4, 4, seed).h;
        let b = build_bgmd(&h, 0.1, NV, 1.0, &[1.0; 4]).unwrap();
        let v = gmd_link::matdecomp::svd(&h).unwrap().v;
        let with_f = logdet_mi(&(&h * &b.f), NV);
        let with_v = logdet_mi(&(&h * &v), NV);
        prop_assert!((with_f - with_v).abs() < 1e-9);
    }
}

#[test]
fn bgmd_depends_on_nu() {
    for seed in 0..20 {
        let h = draw_channel(4, 4, seed).h;
        let a = build_bgmd(&h, 0.1, NV, 1.0, &[1.0; 4]).unwrap();
        let b = build_bgmd(&h, 0.05, NV, 1.0, &[1.0; 4]).unwrap();
        assert!(a.f.sub(&b.f).frobenius_norm() > 1e-6);
    }
}

#[test]
fn svd_exposes_unequal_gains() {
    let h = ComplexMatrix::from_diag(&[3.0, 1.0]);
    let b = build_svd(&h, &[1.0, 1.0], Regularization::NONE).unwrap();
    let d = diag_re(&b.r_g);
    assert!((d[0] - 3.0).abs() < 1e-12 && (d[1] - 1.0).abs() < 1e-12);
    let h = draw_channel(4, 4, 7).h;
    let b = build_svd(&h, &[1.0; 4], Regularization::NONE).unwrap();
    assert!(b.f.unitarity_error() < 1e-10);
}

#[test]
fn identity_precoder_is_plain_qr() {
    let h = draw_channel(4, 4, 3).h;
    let b = build_identity(&h, 4, Regularization::NONE).unwrap();
    assert_eq!(b.f, ComplexMatrix::identity(4));
    assert!((&b.q_u * &b.r_g).sub(&h).frobenius_norm() < 1e-10);
}

#[test]
fn fewer_layers_than_antennas() {
    let h = draw_channel(4, 4, 5).h;
    let b = build_bgmd(&h, 0.1, NV, 1.0, &[1.0; 2]).unwrap();
    assert_eq!((b.f.rows(), b.f.cols(), b.layers()), (4, 2, 2));
    assert!(b.f.unitarity_error() < 1e-10);
    let y = vec![C64::new(1.0, 0.0); 4];
    assert_eq!(b.project(&y).len(), 2);
}

#[test]
fn invalid_inputs() {
    let h = draw_channel(4, 4, 1).h;
    assert!(matches!(
        build_bgmd(&h, 0.0, NV, 1.0, &[1.0; 4]),
        Err(gmd_link::Error::DegenerateShaping(_))
    ));
    assert!(build_bgmd(&h, 0.1, NV, 1.0, &[1.0; 5]).is_err());
    let singular = ComplexMatrix::from_diag(&[1.0, 0.0]);
    assert!(build_ucd(&singular, NV, 1.0, 42.0, &[1.0, 1.0]).is_err());
}
