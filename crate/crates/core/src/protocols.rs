//! End-to-end photonic CNOT and entanglement swapping through a single
//! spin-cavity unit.
//!
//! Every cavity pass uses the same routing. The photon enters travelling
//! down, and a circular PBS (R kept, L switched) sends R down and L up, so
//! both components reach the cavity with `s_z = −1`. After scattering, the
//! same PBS brings every surviving component back onto the downward path,
//! where the path label is traced out. In the ideal limit a pass acts on the
//! polarization as `−I` when the spin is up and as `X` when it is down.

use num_traits::Zero;

use crate::elements::{
    circular_pbs, half_wave_plate, pauli_z, relabel_linear_basis, spin_cavity_scatter,
    spin_hadamard, PortMap, ScatterMode,
};
use crate::error::{Error, Result};
use crate::scalar::{frac_1_sqrt2, re, Real, C};
use crate::state::{
    measure_discard, tensor, Direction, Dof, JointState, MeasurementBasis, ModeLabel,
    OutcomeRecord, PolBasis,
};

/// Direction in which every photon is injected, and leaves, the cavity stage.
pub const INJECTION: Direction = Direction::Down;

/// Product input `(α|R⟩ + β|L⟩)₁ ⊗ (δ|R⟩ + γ|L⟩)₂`; photon 1 is the control.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CnotInput<T> {
    pub alpha: C<T>,
    pub beta: C<T>,
    pub delta: C<T>,
    pub gamma_amp: C<T>,
}

impl<T: Real> CnotInput<T> {
    pub fn new(alpha: C<T>, beta: C<T>, delta: C<T>, gamma_amp: C<T>) -> Result<Self> {
        let input = Self {
            alpha,
            beta,
            delta,
            gamma_amp,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn real(alpha: T, beta: T, delta: T, gamma_amp: T) -> Result<Self> {
        Self::new(re(alpha), re(beta), re(delta), re(gamma_amp))
    }

    /// `(cos θ₁, sin θ₁, cos θ₂, sin θ₂)`
    pub fn from_angles(theta1: T, theta2: T) -> Self {
        Self {
            alpha: re(theta1.cos()),
            beta: re(theta1.sin()),
            delta: re(theta2.cos()),
            gamma_amp: re(theta2.sin()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (which, a, b) in [
            ("control (alpha, beta)", self.alpha, self.beta),
            ("target (delta, gamma)", self.delta, self.gamma_amp),
        ] {
            let n = a.norm_sqr() + b.norm_sqr();
            if !n.is_finite() || (n - T::one()).abs() > T::tolerance() {
                return Err(Error::NotNormalized {
                    which,
                    norm: n.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    fn photons(&self) -> Result<JointState<T>> {
        tensor(
            &JointState::photon(1, self.alpha, self.beta)?,
            &JointState::photon(2, self.delta, self.gamma_amp)?,
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolResult<T> {
    /// Photon-only states after measurement and correction.
    pub outcomes: Vec<OutcomeRecord<T>>,
    /// Sum of outcome probabilities, the squared norm of `raw_final_state`.
    pub success_probability: T,
    /// State before any measurement; sub-normalized when scattering is lossy.
    pub raw_final_state: JointState<T>,
}

/// One cavity pass of `photon` with the fixed routing described above.
pub fn cavity_pass<T: Real>(
    state: &JointState<T>,
    photon: u8,
    mode: &ScatterMode<T>,
) -> Result<JointState<T>> {
    let ports = PortMap::circular();
    let s = state.attach_path(photon, INJECTION)?;
    let s = circular_pbs(&s, photon, &ports)?;
    let s = spin_cavity_scatter(&s, photon, mode)?;
    let s = circular_pbs(&s, photon, &ports)?;
    let (s, exit) = s.release_path(photon)?;
    // a fully absorbed input has no exit path
    debug_assert!(exit == INJECTION || s.norm_sqr() == T::zero());
    Ok(s)
}

fn spin_state<T: Real>(up: T, down: T) -> Result<JointState<T>> {
    JointState::spin(re(up), re(down))
}

/// Spin `(|↑⟩ − |↓⟩)/√2`; photon 1 through HWP, cavity, HWP; spin Hadamard;
/// photon 2 through the cavity; spin Hadamard. Returns the unmeasured state.
pub fn cnot_final_state<T: Real>(
    input: &CnotInput<T>,
    mode: &ScatterMode<T>,
) -> Result<JointState<T>> {
    input.validate()?;
    let h = frac_1_sqrt2::<T>();
    let s = tensor(&input.photons()?, &spin_state(h, -h)?)?;
    let s = half_wave_plate(&s, 1)?;
    let s = cavity_pass(&s, 1, mode)?;
    let s = half_wave_plate(&s, 1)?;
    let s = spin_hadamard(&s)?;
    let s = cavity_pass(&s, 2, mode)?;
    spin_hadamard(&s)
}

/// Unnormalized photon states for spin outcomes `up` and `down`, with the
/// feed-forward correction (σ_z on photon 1 after `up`) already applied.
pub fn cnot_branches<T: Real>(raw: &JointState<T>) -> Result<[JointState<T>; 2]> {
    let up = raw.contract(&[Dof::Spin], &[re(T::one()), C::zero()])?;
    let down = raw.contract(&[Dof::Spin], &[C::zero(), re(T::one())])?;
    Ok([pauli_z(&up, 1)?, down])
}

/// Spin outcome labels in the order used by [`run_cnot`].
pub const CNOT_OUTCOMES: [&str; 2] = ["up", "down"];

pub fn run_cnot<T: Real>(input: &CnotInput<T>, mode: &ScatterMode<T>) -> Result<ProtocolResult<T>> {
    let raw = cnot_final_state(input, mode)?;
    let outcomes: Vec<_> = cnot_branches(&raw)?
        .into_iter()
        .zip(CNOT_OUTCOMES)
        .map(|(branch, label)| record(label.to_string(), branch))
        .collect();
    Ok(finish(outcomes, raw))
}

/// `α|R⟩₁(δ|R⟩₂ + γ|L⟩₂) + β|L⟩₁(δ|L⟩₂ + γ|R⟩₂)`
pub fn ideal_cnot_reference<T: Real>(input: &CnotInput<T>) -> Result<JointState<T>> {
    input.validate()?;
    let CnotInput {
        alpha,
        beta,
        delta,
        gamma_amp,
    } = *input;
    JointState::new(
        two_photon_modes(1, 2, PolBasis::Circular, PolBasis::Circular),
        vec![
            alpha * delta,
            alpha * gamma_amp,
            beta * gamma_amp,
            beta * delta,
        ],
    )
}

/// The four Bell states over the circular basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellState {
    /// `(|RR⟩ + |LL⟩)/√2`
    PhiPlus,
    /// `(|RR⟩ − |LL⟩)/√2`
    PhiMinus,
    /// `(|RL⟩ + |LR⟩)/√2`
    PsiPlus,
    /// `(|RL⟩ − |LR⟩)/√2`
    PsiMinus,
}

impl BellState {
    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }

    /// Amplitudes over `RR, RL, LR, LL`.
    pub fn amplitudes<T: Real>(self) -> [C<T>; 4] {
        let h = frac_1_sqrt2::<T>();
        let (o, z) = (re(h), C::zero());
        match self {
            BellState::PhiPlus => [o, z, z, o],
            BellState::PhiMinus => [o, z, z, -o],
            BellState::PsiPlus => [z, o, o, z],
            BellState::PsiMinus => [z, o, -o, z],
        }
    }

    pub fn state<T: Real>(self, a: u8, b: u8) -> Result<JointState<T>> {
        let modes = two_photon_modes(a, b, PolBasis::Circular, PolBasis::Circular);
        JointState::new(modes, self.amplitudes().to_vec())
    }
}

/// Measurement result of one swap run: spin in {+, −}, photons 1 and 3 in {H, V}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SwapOutcome {
    pub spin_plus: bool,
    pub photon1_h: bool,
    pub photon3_h: bool,
}

impl SwapOutcome {
    /// All eight outcomes in the order reported by [`run_entanglement_swap`]:
    /// spin outermost, then photon 1, then photon 3, `+`/`H` first.
    pub fn all() -> [SwapOutcome; 8] {
        let mut out = [SwapOutcome {
            spin_plus: true,
            photon1_h: true,
            photon3_h: true,
        }; 8];
        for (i, o) in out.iter_mut().enumerate() {
            o.spin_plus = i & 4 == 0;
            o.photon1_h = i & 2 == 0;
            o.photon3_h = i & 1 == 0;
        }
        out
    }

    pub fn label(&self) -> String {
        format!(
            "{}1 {}3 {}",
            if self.photon1_h { "H" } else { "V" },
            if self.photon3_h { "H" } else { "V" },
            if self.spin_plus { "+" } else { "-" },
        )
    }

    /// State left on photons 2 and 4. Equal linear polarizations with `|+⟩`
    /// give Φ+, different ones Φ−; with `|−⟩` equal gives Ψ+, different Ψ−.
    pub fn bell_state(&self) -> BellState {
        let same = self.photon1_h == self.photon3_h;
        match (self.spin_plus, same) {
            (true, true) => BellState::PhiPlus,
            (true, false) => BellState::PhiMinus,
            (false, true) => BellState::PsiPlus,
            (false, false) => BellState::PsiMinus,
        }
    }
}

/// Photons (1,2) and (3,4) in Φ+, spin in `|+⟩`; photons 1 then 3 each pass
/// HWP1, the cavity, and HWP2 (relabelled to H/V). Returns the unmeasured state.
pub fn swap_final_state<T: Real>(mode: &ScatterMode<T>) -> Result<JointState<T>> {
    let h = frac_1_sqrt2::<T>();
    let s = tensor(
        &tensor(
            &BellState::PhiPlus.state(1, 2)?,
            &BellState::PhiPlus.state(3, 4)?,
        )?,
        &spin_state(h, h)?,
    )?;
    let mut s = s;
    for photon in [1, 3] {
        s = half_wave_plate(&s, photon)?;
        s = cavity_pass(&s, photon, mode)?;
        s = relabel_linear_basis(&s, photon)?;
    }
    Ok(s)
}

pub fn run_entanglement_swap<T: Real>(mode: &ScatterMode<T>) -> Result<ProtocolResult<T>> {
    let raw = swap_final_state(mode)?;
    let linear = MeasurementBasis::polarization(PolBasis::Linear);
    let steps = [
        (Dof::Spin, MeasurementBasis::spin_x()),
        (Dof::Polarization(1), linear.clone()),
        (Dof::Polarization(3), linear),
    ];
    let records = measure_sequence(&raw, &steps)?;
    let outcomes = records
        .into_iter()
        .zip(SwapOutcome::all())
        .map(|(mut rec, o)| {
            rec.outcome_label = o.label();
            rec
        })
        .collect();
    Ok(finish(outcomes, raw))
}

/// Measures the given degrees of freedom one after another, discarding each
/// measured mode. Records are in lexicographic outcome order (first step
/// outermost); labels are the basis labels joined by spaces; probabilities
/// are joint.
pub fn measure_sequence<T: Real>(
    state: &JointState<T>,
    steps: &[(Dof, MeasurementBasis<T>)],
) -> Result<Vec<OutcomeRecord<T>>> {
    let mut current = vec![OutcomeRecord {
        outcome_label: String::new(),
        probability: state.norm_sqr(),
        conditioned_state: state.normalized().unwrap_or_else(|| state.clone()),
    }];
    for (dof, basis) in steps {
        let mut next = Vec::with_capacity(current.len() * basis.labels().len());
        for rec in &current {
            for branch in measure_discard(&rec.conditioned_state, &[*dof], basis)? {
                let label = if rec.outcome_label.is_empty() {
                    branch.outcome_label
                } else {
                    format!("{} {}", rec.outcome_label, branch.outcome_label)
                };
                next.push(OutcomeRecord {
                    outcome_label: label,
                    probability: rec.probability * branch.probability,
                    conditioned_state: branch.conditioned_state,
                });
            }
        }
        current = next;
    }
    Ok(current)
}

/// The swap output written term by term over photons 1..4 and the spin,
/// with photons 1 and 3 in the linear basis. Normalized.
pub fn ideal_swap_reference<T: Real>() -> Result<JointState<T>> {
    let modes = vec![
        photon_mode(1, PolBasis::Linear),
        photon_mode(2, PolBasis::Circular),
        photon_mode(3, PolBasis::Linear),
        photon_mode(4, PolBasis::Circular),
        ModeLabel::Spin,
    ];
    let h = frac_1_sqrt2::<T>();
    let spin_plus = [h, h];
    let spin_minus = [h, -h];
    let mut amps = vec![C::zero(); 32];
    for o in SwapOutcome::all() {
        let p1 = usize::from(!o.photon1_h);
        let p3 = usize::from(!o.photon3_h);
        let spin = if o.spin_plus { spin_plus } else { spin_minus };
        let bell = o.bell_state().amplitudes::<T>();
        // with |−⟩ the terms where photon 3 is V carry a minus sign
        let sign = if !o.spin_plus && !o.photon3_h {
            -T::one()
        } else {
            T::one()
        };
        for (b24, amp) in bell.iter().enumerate() {
            let (p2, p4) = (b24 >> 1, b24 & 1);
            for (s, sa) in spin.iter().enumerate() {
                let idx = (p1 << 4) | (p2 << 3) | (p3 << 2) | (p4 << 1) | s;
                // each of the eight photon-1/photon-3 terms carries weight 1/(2√2)
                amps[idx] += *amp * re(sign * *sa * h * T::lit(0.5));
            }
        }
    }
    JointState::new(modes, amps)
}

fn photon_mode(index: u8, basis: PolBasis) -> ModeLabel {
    ModeLabel::Photon {
        index,
        basis,
        path: false,
    }
}

fn two_photon_modes(a: u8, b: u8, ba: PolBasis, bb: PolBasis) -> Vec<ModeLabel> {
    vec![photon_mode(a, ba), photon_mode(b, bb)]
}

fn record<T: Real>(label: String, branch: JointState<T>) -> OutcomeRecord<T> {
    let probability = branch.norm_sqr();
    let conditioned_state = branch.normalized().unwrap_or(branch);
    OutcomeRecord {
        outcome_label: label,
        probability,
        conditioned_state,
    }
}

fn finish<T: Real>(outcomes: Vec<OutcomeRecord<T>>, raw: JointState<T>) -> ProtocolResult<T> {
    let success_probability = outcomes.iter().map(|o| o.probability).sum();
    ProtocolResult {
        outcomes,
        success_probability,
        raw_final_state: raw,
    }
}
