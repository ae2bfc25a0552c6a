use triwell::waveguide::{physical_separation, to_model, WaveguideSpec};

fn reference() -> WaveguideSpec {
    WaveguideSpec {
        n0: 3.3,
        delta_n: 1e-3,
        delta_n_prime: 0.0,
        lambda0: 1.55,
        a: 5.0,
        delta_n_mid: None,
    }
}

#[test]
fn reference_guide_scales() {
    let s = to_model(&reference()).unwrap();
    assert!((s.ell - 3.036).abs() < 1e-3);
    assert!((s.big_l - s.ell * s.ell / 5.0).abs() < 1e-15);
    let spacing = physical_separation(6.20124, &s);
    assert!((spacing - 11.43).abs() < 1e-2, "{spacing}");
}

#[test]
fn lengths_rescale_with_units() {
    let um = to_model(&reference()).unwrap();
    let nm = to_model(&WaveguideSpec {
        lambda0: 1550.0,
        a: 5000.0,
        ..reference()
    })
    .unwrap();
    assert!((nm.ell / 1000.0 - um.ell).abs() < 1e-12 * um.ell);
    assert!((nm.big_l / 1000.0 - um.big_l).abs() < 1e-12 * um.big_l);
    assert!((nm.k0 * 1000.0 - um.k0).abs() < 1e-12 * um.k0);
    assert_eq!(nm.gamma, um.gamma);
}

#[test]
fn gamma_depends_on_ratio_only() {
    let a = to_model(&WaveguideSpec {
        delta_n_prime: 5e-5,
        ..reference()
    })
    .unwrap();
    let b = to_model(&WaveguideSpec {
        delta_n: 2e-3,
        delta_n_prime: 1e-4,
        ..reference()
    })
    .unwrap();
    assert!((a.gamma - b.gamma).abs() < 1e-15);
    assert!((a.ell / b.ell - 2f64.sqrt()).abs() < 1e-12);
}
