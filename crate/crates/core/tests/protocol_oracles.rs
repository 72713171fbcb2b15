use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spincav::*;

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_pair(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / n, b / n)
}

fn random_input(rng: &mut ChaCha8Rng) -> CnotInput<f64> {
    let (alpha, beta) = random_pair(rng);
    let (delta, gamma) = random_pair(rng);
    CnotInput::new(alpha, beta, delta, gamma).unwrap()
}

fn overlap2(a: &State, b: &State) -> f64 {
    inner_product(a, b).unwrap().norm_sqr()
}

fn circ(index: u8) -> ModeLabel {
    ModeLabel::Photon {
        index,
        basis: PolBasis::Circular,
        path: false,
    }
}

/// The printed output ket, coefficient by coefficient, over (photon 1, photon 2, spin):
/// `(αδ RR + αγ RL − βδ LL − βγ LR)|↑⟩ + (αδ RR + αγ RL + βδ LL + βγ LR)|↓⟩`, normalized.
fn printed_cnot_output(i: &CnotInput<f64>) -> State {
    let (a, b, d, g) = (i.alpha, i.beta, i.delta, i.gamma_amp);
    // index = p1·4 + p2·2 + spin, with R = 0, L = 1, up = 0
    let mut amps = vec![c(0.0, 0.0); 8];
    amps[0] = a * d;
    amps[2] = a * g;
    amps[6] = -b * d;
    amps[4] = -b * g;
    amps[1] = a * d;
    amps[3] = a * g;
    amps[7] = b * d;
    amps[5] = b * g;
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let amps = amps.into_iter().map(|z| z / norm).collect();
    JointState::new(vec![circ(1), circ(2), ModeLabel::Spin], amps).unwrap()
}

#[test]
fn cnot_output_matches_printed_ket() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let input = random_input(&mut rng);
        let raw = cnot_final_state(&input, &ScatterMode::Ideal).unwrap();
        assert!((raw.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(overlap2(&printed_cnot_output(&input), &raw) > 1.0 - 1e-10);
    }
}

#[test]
fn cnot_corrections_give_the_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let input = random_input(&mut rng);
        let res = run_cnot(&input, &ScatterMode::Ideal).unwrap();
        let reference = ideal_cnot_reference(&input).unwrap();
        assert!((res.success_probability - 1.0).abs() < 1e-12);
        assert_eq!(res.outcomes[0].outcome_label, "up");
        assert_eq!(res.outcomes[1].outcome_label, "down");
        for o in &res.outcomes {
            assert!((o.probability - 0.5).abs() < 1e-10);
            assert!(overlap2(&o.conditioned_state, &reference) > 1.0 - 1e-10);
        }
    }
}

#[test]
fn cnot_up_outcome_before_correction_has_minus_sign() {
    let input = CnotInput::real(0.6, 0.8, 0.8, 0.6).unwrap();
    let raw = cnot_final_state(&input, &ScatterMode::Ideal).unwrap();
    let up = raw
        .contract(&[Dof::Spin], &[c(1.0, 0.0), c(0.0, 0.0)])
        .unwrap();
    // α(δR + γL) − β(δL + γR) up to the overall factor
    let expected = JointState::new(
        vec![circ(1), circ(2)],
        vec![c(0.48, 0.0), c(0.36, 0.0), c(-0.48, 0.0), c(-0.64, 0.0)],
    )
    .unwrap();
    let f = state_fidelity(&up, &expected, Normalization::Conditioned).unwrap();
    assert!(f > 1.0 - 1e-12);
}

/// The printed four-term swap output over (1, 2, 3, 4, spin), photons 1 and 3 in H/V.
fn printed_swap_output() -> State {
    let mut amps = vec![c(0.0, 0.0); 32];
    let plus = [H, H];
    let minus = [H, -H];
    let mut add = |p13: [(usize, usize, f64); 2],
                   spin: [f64; 2],
                   p24: [(usize, usize, f64); 2],
                   sign: f64| {
        for &(p1, p3, a) in &p13 {
            for &(p2, p4, b) in &p24 {
                for (s, sv) in spin.iter().enumerate() {
                    let idx = (p1 << 4) | (p2 << 3) | (p3 << 2) | (p4 << 1) | s;
                    amps[idx] += c(0.25 * sign * a * b * sv, 0.0);
                }
            }
        }
    };
    let (hh, vv, hv, vh) = ((0, 0), (1, 1), (0, 1), (1, 0));
    let (rr, ll, rl, lr) = ((0, 0), (1, 1), (0, 1), (1, 0));
    let t = |x: (usize, usize), s: f64| (x.0, x.1, s);
    add(
        [t(hh, 1.0), t(vv, -1.0)],
        minus,
        [t(rl, 1.0), t(lr, 1.0)],
        1.0,
    );
    add(
        [t(hh, 1.0), t(vv, 1.0)],
        plus,
        [t(rr, 1.0), t(ll, 1.0)],
        1.0,
    );
    add(
        [t(hv, 1.0), t(vh, 1.0)],
        plus,
        [t(rr, 1.0), t(ll, -1.0)],
        1.0,
    );
    add(
        [t(hv, 1.0), t(vh, -1.0)],
        minus,
        [t(rl, 1.0), t(lr, -1.0)],
        -1.0,
    );
    let lin = |index| ModeLabel::Photon {
        index,
        basis: PolBasis::Linear,
        path: false,
    };
    JointState::new(
        vec![lin(1), circ(2), lin(3), circ(4), ModeLabel::Spin],
        amps,
    )
    .unwrap()
}

#[test]
fn swap_output_matches_printed_ket() {
    let printed = printed_swap_output();
    assert!((printed.norm_sqr() - 1.0).abs() < 1e-12);
    let res = run_entanglement_swap(&ScatterMode::<f64>::Ideal).unwrap();
    assert!((res.success_probability - 1.0).abs() < 1e-12);
    assert!(overlap2(&printed, &res.raw_final_state) > 1.0 - 1e-10);
    let reference: State = ideal_swap_reference().unwrap();
    assert!(overlap2(&printed, &reference) > 1.0 - 1e-12);
}

#[test]
fn swap_outcomes_follow_the_bell_table() {
    // (photon 1, photon 3, spin) -> Bell state of photons 2 and 4
    let table = [
        ("H1 H3 +", [c(H, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(H, 0.0)]),
        ("V1 V3 +", [c(H, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(H, 0.0)]),
        ("H1 V3 +", [c(H, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-H, 0.0)]),
        ("V1 H3 +", [c(H, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-H, 0.0)]),
        ("H1 H3 -", [c(0.0, 0.0), c(H, 0.0), c(H, 0.0), c(0.0, 0.0)]),
        ("V1 V3 -", [c(0.0, 0.0), c(H, 0.0), c(H, 0.0), c(0.0, 0.0)]),
        ("H1 V3 -", [c(0.0, 0.0), c(H, 0.0), c(-H, 0.0), c(0.0, 0.0)]),
        ("V1 H3 -", [c(0.0, 0.0), c(H, 0.0), c(-H, 0.0), c(0.0, 0.0)]),
    ];
    let res = run_entanglement_swap(&ScatterMode::<f64>::Ideal).unwrap();
    assert_eq!(res.outcomes.len(), 8);
    for (label, bell) in table {
        let rec = res
            .outcomes
            .iter()
            .find(|o| o.outcome_label == label)
            .unwrap();
        let expected = JointState::new(vec![circ(2), circ(4)], bell.to_vec()).unwrap();
        assert!((rec.probability - 0.125).abs() < 1e-10, "{label}");
        assert!(
            overlap2(&rec.conditioned_state, &expected) > 1.0 - 1e-10,
            "{label}"
        );
    }
}

#[test]
fn swap_reference_projection_recovers_phi_plus() {
    let reference: State = ideal_swap_reference().unwrap();
    let projected = reference
        .contract(
            &[Dof::Polarization(1), Dof::Polarization(3), Dof::Spin],
            &[
                c(H, 0.0),
                c(H, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
            ],
        )
        .unwrap();
    let phi = BellState::PhiPlus.state(2, 4).unwrap();
    assert!(state_fidelity(&projected, &phi, Normalization::Conditioned).unwrap() > 1.0 - 1e-12);
}

#[test]
fn measurement_on_ideal_cnot_output_is_balanced() {
    let input = CnotInput::real(H, H, H, H).unwrap();
    let raw = cnot_final_state(&input, &ScatterMode::Ideal).unwrap();
    let rec = measure(&raw, &[Dof::Spin], &MeasurementBasis::spin_z()).unwrap();
    assert!((rec[0].probability - 0.5).abs() < 1e-12);
    assert!((rec[1].probability - 0.5).abs() < 1e-12);
}

#[test]
fn fidelities_approach_one_along_strong_coupling_ray() {
    let mut last: Option<[f64; 5]> = None;
    for g in [1.0, 2.0, 4.0, 8.0] {
        let mode = ScatterMode::realistic(&resonant_coefficients(g, 0.0, 0.1).unwrap()).unwrap();
        let input = CnotInput::real(0.6, 0.8, H, -H).unwrap();
        let reference = ideal_cnot_reference(&input).unwrap();
        let res = run_cnot(&input, &mode).unwrap();
        assert!(res.success_probability <= 1.0 + 1e-12);
        let mut now = [0.0; 5];
        for (k, o) in res.outcomes.iter().enumerate() {
            now[k] = state_fidelity(&o.conditioned_state, &reference, Normalization::Conditioned)
                .unwrap();
        }
        let swap = run_entanglement_swap(&mode).unwrap();
        assert!(swap.success_probability <= 1.0 + 1e-12);
        for (k, o) in swap.outcomes.iter().take(3).enumerate() {
            let bell = SwapOutcome::all()[k].bell_state().state(2, 4).unwrap();
            now[2 + k] =
                state_fidelity(&o.conditioned_state, &bell, Normalization::Conditioned).unwrap();
        }
        if let Some(prev) = last {
            for (p, n) in prev.iter().zip(&now) {
                assert!(n >= p, "fidelity dropped at g = {g}: {prev:?} -> {now:?}");
            }
        }
        last = Some(now);
    }
    for f in last.unwrap() {
        assert!(f > 0.999);
    }
}
