use approx::assert_abs_diff_eq;
use spincav::*;

#[test]
fn strong_coupling_point() {
    let k = resonant_coefficients(2.5, 0.5, 0.1).unwrap();
    assert_abs_diff_eq!(k.r.re, 25.05 / 25.25, epsilon = 1e-15);
    assert_abs_diff_eq!(k.r.re, 0.992079, epsilon = 1e-6);
    assert_abs_diff_eq!(k.t.re, -0.007921, epsilon = 1e-6);
    assert_abs_diff_eq!(k.r0.re, 0.2, epsilon = 1e-15);
    assert_abs_diff_eq!(k.t0.re, -0.8, epsilon = 1e-15);
}

#[test]
fn weak_coupling_point() {
    let k = resonant_coefficients(0.45, 1.0, 0.1).unwrap();
    assert_abs_diff_eq!(k.r.re, 0.819820, epsilon = 1e-6);
    assert_abs_diff_eq!(k.t.re, -0.180180, epsilon = 1e-6);
    assert_abs_diff_eq!(k.r0.re, 1.0 / 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(k.t0.re, -2.0 / 3.0, epsilon = 1e-15);
}

#[test]
fn strong_coupling_limit() {
    let k = resonant_coefficients(1e3f64, 0.0, 0.1).unwrap();
    assert!((k.r.re - 1.0).abs() < 1e-4);
    assert!(k.t.re.abs() < 1e-4);
}

#[test]
fn lossless_bare_cavity() {
    let k = resonant_coefficients(0.0, 0.0, 0.1).unwrap();
    assert_eq!(k.r0.re, 0.0);
    assert_eq!(k.t0.re, -1.0);
}

#[test]
fn zero_coupling_matches_uncoupled_off_resonance() {
    let p = CavityParams::new(0.0, 0.7, 0.3, 1.3, -2.1).unwrap();
    let k = scatter_coefficients(&p).unwrap();
    assert_abs_diff_eq!((k.r - k.r0).norm(), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!((k.t - k.t0).norm(), 0.0, epsilon = 1e-15);
}

#[test]
fn general_formula_agrees_with_resonant_closed_form() {
    // tiny detuning forces the complex path
    let p = CavityParams::new(2.5, 0.5, 0.1, 1e-300, 0.0).unwrap();
    let general = scatter_coefficients(&p).unwrap();
    let closed = resonant_coefficients(2.5, 0.5, 0.1).unwrap();
    for (a, b) in [
        (general.r, closed.r),
        (general.t, closed.t),
        (general.r0, closed.r0),
        (general.t0, closed.t0),
    ] {
        assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
    }
}

#[test]
fn rejects_unphysical_parameters() {
    assert!(CavityParams::resonant(-1.0, 0.0, 0.1).is_err());
    assert!(CavityParams::resonant(1.0, -0.1, 0.1).is_err());
    assert!(CavityParams::resonant(1.0, 0.0, 0.0).is_err());
    assert!(CavityParams::resonant(f64::NAN, 0.0, 0.1).is_err());
    assert!(resonant_coefficients(1.0, 0.0, -0.1).is_err());
}

#[test]
fn single_precision_instance() {
    let k = resonant_coefficients(2.5f32, 0.5, 0.1).unwrap();
    assert!((k.r.re - 0.992_079).abs() < 1e-5);
}
