use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use spincav::elements::{hadamard_map, scatter_map};
use spincav::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn photon(index: u8, path: bool) -> ModeLabel {
    ModeLabel::Photon {
        index,
        basis: PolBasis::Circular,
        path,
    }
}

/// Random amplitudes with squared norm `scale`.
fn amplitudes(n: usize, scale: f64) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n).prop_filter_map(
        "nonzero vector",
        move |raw| {
            let v: Vec<_> = raw.into_iter().map(|(a, b)| c(a, b)).collect();
            let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            (n2 > 1e-6).then(|| v.iter().map(|z| z * (scale / n2).sqrt()).collect())
        },
    )
}

/// Photon 1 with a path label, photon 2 and the spin: 16 amplitudes.
fn routed_state() -> impl Strategy<Value = State> {
    amplitudes(16, 1.0).prop_map(|a| {
        JointState::new(vec![photon(1, true), photon(2, false), ModeLabel::Spin], a).unwrap()
    })
}

fn resonant_params() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.0..5.0f64, 0.0..2.0f64, 1e-3..1.0f64)
}

fn to_nalgebra(m: &LocalMap<f64>) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.dim(), m.dim(), m.entries())
}

fn max_diff(a: &State, b: &State) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unitary_elements_preserve_norm(s in routed_state()) {
        let n0 = s.norm_sqr();
        let steps: Vec<State> = vec![
            half_wave_plate(&s, 1).unwrap(),
            half_wave_plate(&s, 2).unwrap(),
            spin_hadamard(&s).unwrap(),
            pauli_z(&s, 2).unwrap(),
            circular_pbs(&s, 1, &PortMap::circular()).unwrap(),
            spin_cavity_scatter(&s, 1, &ScatterMode::Ideal).unwrap(),
        ];
        for out in steps {
            prop_assert!((out.norm_sqr() - n0).abs() < 1e-12);
        }
    }

    #[test]
    fn involutions_return_the_input(s in routed_state()) {
        let pbs = PortMap::circular();
        let twice = [
            half_wave_plate(&half_wave_plate(&s, 2).unwrap(), 2).unwrap(),
            spin_hadamard(&spin_hadamard(&s).unwrap()).unwrap(),
            circular_pbs(&circular_pbs(&s, 1, &pbs).unwrap(), 1, &pbs).unwrap(),
            relabel_linear_basis(&relabel_linear_basis(&s, 2).unwrap(), 2).unwrap(),
        ];
        for out in &twice {
            prop_assert!(max_diff(out, &s) < 1e-12);
        }
    }

    #[test]
    fn realistic_scatter_never_gains_norm(s in routed_state(), (g, ks, gamma) in resonant_params()) {
        let mode = ScatterMode::realistic(&resonant_coefficients(g, ks, gamma).unwrap()).unwrap();
        let out = spin_cavity_scatter(&s, 1, &mode).unwrap();
        prop_assert!(out.norm_sqr() <= s.norm_sqr() + 1e-12);
    }

    #[test]
    fn realistic_operator_norm_at_most_one((g, ks, gamma) in resonant_params()) {
        let mode = ScatterMode::realistic(&resonant_coefficients(g, ks, gamma).unwrap()).unwrap();
        let sv = to_nalgebra(&scatter_map(&mode)).singular_values();
        prop_assert!(sv.max() <= 1.0 + 1e-12);
    }

    #[test]
    fn measurement_probabilities_sum_to_norm(a in amplitudes(16, 0.37)) {
        let s = JointState::new(vec![photon(1, true), photon(2, false), ModeLabel::Spin], a).unwrap();
        let lin = MeasurementBasis::spin_x();
        for records in [
            measure(&s, &[Dof::Spin], &lin).unwrap(),
            measure(&s, &[Dof::Polarization(2)], &MeasurementBasis::polarization(PolBasis::Circular)).unwrap(),
            measure_discard(&s, &[Dof::Spin], &MeasurementBasis::spin_z()).unwrap(),
        ] {
            let total: f64 = records.iter().map(|r| r.probability).sum();
            prop_assert!((total - 0.37).abs() < 1e-12);
            for r in &records {
                if r.probability > 1e-12 {
                    prop_assert!((r.conditioned_state.norm_sqr() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn tensor_overlap_factorizes(
        a in amplitudes(2, 1.0), b in amplitudes(4, 0.8),
        cc in amplitudes(2, 0.5), d in amplitudes(4, 1.0),
    ) {
        let p1 = |v: Vec<Complex64>| JointState::new(vec![photon(1, false)], v).unwrap();
        let p23 = |v: Vec<Complex64>| JointState::new(vec![photon(2, false), ModeLabel::Spin], v).unwrap();
        let (a, b, cc, d) = (p1(a), p23(b), p1(cc), p23(d));
        let lhs = inner_product(&tensor(&a, &b).unwrap(), &tensor(&cc, &d).unwrap()).unwrap();
        let rhs = inner_product(&a, &cc).unwrap() * inner_product(&b, &d).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!((tensor(&a, &b).unwrap().norm_sqr() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn fidelity_ignores_global_phase(a in amplitudes(4, 1.0), b in amplitudes(4, 0.6), phase in 0.0..6.3f64) {
        let mk = |v: Vec<Complex64>| JointState::new(vec![photon(1, false), photon(2, false)], v).unwrap();
        let (a, b) = (mk(a), mk(b));
        let rotated = b.scaled(Complex64::from_polar(1.0, phase));
        for n in [Normalization::Conditioned, Normalization::Raw] {
            let f0 = state_fidelity(&b, &a, n).unwrap();
            let f1 = state_fidelity(&rotated, &a, n).unwrap();
            prop_assert!((f0 - f1).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&f0));
        }
        prop_assert!(
            state_fidelity(&b, &a, Normalization::Conditioned).unwrap()
                >= state_fidelity(&b, &a, Normalization::Raw).unwrap() - 1e-15
        );
    }

    #[test]
    fn coefficient_identities(
        g in 0.0..5.0f64, ks in 0.0..2.0f64, gamma in 1e-6..1.0f64,
        dc in -5.0..5.0f64, dx in -5.0..5.0f64,
    ) {
        let k = scatter_coefficients(&CavityParams::new(g, ks, gamma, dc, dx).unwrap()).unwrap();
        let (e1, e0) = k.identity_residuals();
        prop_assert!(e1 < 1e-12 && e0 < 1e-12);
        prop_assert!(k.r.norm_sqr() + k.t.norm_sqr() <= 1.0 + 1e-12);
        prop_assert!(k.r0.norm_sqr() + k.t0.norm_sqr() <= 1.0 + 1e-12);
        let k0 = scatter_coefficients(&CavityParams::new(0.0, ks, gamma, dc, dx).unwrap()).unwrap();
        prop_assert!((k0.r - k.r0).norm() < 1e-12 && (k0.t - k.t0).norm() < 1e-12);
    }

    #[test]
    fn resonant_coefficients_are_real_and_ordered((g, ks, gamma) in resonant_params()) {
        let k = resonant_coefficients(g, ks, gamma).unwrap();
        prop_assert_eq!(k.max_imaginary(), 0.0);
        prop_assert!((0.0..=1.0).contains(&k.r.re) && (-1.0..=0.0).contains(&k.t.re));
        prop_assert!((0.0..=1.0).contains(&k.r0.re) && (-1.0..=0.0).contains(&k.t0.re));
        prop_assert!((k.r.re + k.t.re.abs() - 1.0).abs() < 1e-12);
        prop_assert!((k.r0.re + k.t0.re.abs() - 1.0).abs() < 1e-12);
        let general = scatter_coefficients(&CavityParams::new(g, ks, gamma, 1e-300, 0.0).unwrap()).unwrap();
        prop_assert!((general.r - k.r).norm() < 1e-12 && (general.t - k.t).norm() < 1e-12);
    }
}

#[test]
fn ideal_scatter_is_a_signed_permutation() {
    let m = scatter_map(&ScatterMode::<f64>::Ideal);
    assert!(m.is_unitary(1e-12));
    for row in 0..8 {
        let nonzero: Vec<_> = (0..8).filter(|&col| m.get(row, col).norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(m.get(row, nonzero[0]).norm(), 1.0);
    }
    let sq = m.compose(&m).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            let v = sq.get(i, j);
            if i == j {
                assert_eq!(v.norm(), 1.0);
                assert_eq!(v.im, 0.0);
            } else {
                assert_eq!(v.norm(), 0.0);
            }
        }
    }
}

#[test]
fn realistic_ideal_limit_is_entrywise_ideal() {
    let mode = ScatterMode::realistic(&ScatterCoefficients::<f64>::ideal()).unwrap();
    assert_eq!(scatter_map(&mode), scatter_map(&ScatterMode::Ideal));
}

#[test]
fn hadamard_is_a_unitary_involution() {
    let h = hadamard_map::<f64>();
    assert!(h.is_unitary(1e-12));
    assert!(h.compose(&h).unwrap().max_abs_diff(&LocalMap::identity(2)) < 1e-12);
}

#[test]
fn single_precision_scatter_stays_passive() {
    let mode = ScatterMode::realistic(&resonant_coefficients(0.45f32, 1.0, 0.1).unwrap()).unwrap();
    let s = JointState::new(
        vec![photon(1, true), ModeLabel::Spin],
        vec![num_complex::Complex32::new(0.125f32.sqrt(), 0.0); 8],
    )
    .unwrap();
    let out = spin_cavity_scatter(&s, 1, &mode).unwrap();
    assert!(out.norm_sqr() <= 1.0 + 1e-6);
}
