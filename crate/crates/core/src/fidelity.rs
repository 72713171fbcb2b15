//! Gate and swap fidelities, averaged CNOT fidelity over the real product
//! input family, parameter sweeps and decoherence/timing estimates.

use rayon::prelude::*;
use serde::Serialize;

use crate::cavity::resonant_coefficients;
use crate::elements::ScatterMode;
use crate::error::{Error, Result};
use crate::protocols::{
    cnot_branches, cnot_final_state, ideal_swap_reference, swap_final_state, CnotInput,
};
use crate::scalar::{Real, C};
use crate::state::{inner_product, JointState, OutcomeRecord};

/// How the achieved state is normalized before the overlap is taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Renormalize the achieved (post-measurement) state: `|⟨ref|ψ⟩|² / ⟨ψ|ψ⟩`.
    #[default]
    Conditioned,
    /// Use the sub-normalized state as is: `|⟨ref|ψ⟩|²`.
    Raw,
}

/// How the two spin outcomes of the CNOT are combined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeHandling {
    /// One fidelity per spin outcome.
    PerOutcome,
    /// Outcome fidelities weighted by their probabilities.
    #[default]
    ProbabilityWeighted,
}

/// The default, conditioned and probability-weighted, is the combination
/// that comes closest to the published reference numbers (see README).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct FidelityConvention {
    pub normalization: Normalization,
    pub outcome_handling: OutcomeHandling,
}

impl FidelityConvention {
    pub fn new(normalization: Normalization, outcome_handling: OutcomeHandling) -> Self {
        Self {
            normalization,
            outcome_handling,
        }
    }

    pub fn all() -> [FidelityConvention; 4] {
        use Normalization::*;
        use OutcomeHandling::*;
        [
            Self::new(Conditioned, PerOutcome),
            Self::new(Conditioned, ProbabilityWeighted),
            Self::new(Raw, PerOutcome),
            Self::new(Raw, ProbabilityWeighted),
        ]
    }
}

/// `|⟨ref|ψ⟩|²`, divided by `⟨ψ|ψ⟩` under [`Normalization::Conditioned`].
/// The reference must be normalized. The result is clamped to `[0, 1]`.
pub fn state_fidelity<T: Real>(
    achieved: &JointState<T>,
    reference: &JointState<T>,
    normalization: Normalization,
) -> Result<T> {
    let rn = reference.norm_sqr();
    if (rn - T::one()).abs() > T::tolerance() {
        return Err(Error::NotNormalized {
            which: "reference",
            norm: rn.to_f64().unwrap_or(f64::NAN),
        });
    }
    let ov = inner_product(reference, achieved)?.norm_sqr();
    let f = match normalization {
        Normalization::Raw => ov,
        Normalization::Conditioned => {
            let an = achieved.norm_sqr();
            if an <= T::zero() {
                return Err(Error::ZeroNorm);
            }
            ov / an
        }
    };
    Ok(clamp01(f))
}

/// Averaged CNOT fidelity for each spin outcome and their weighted combination.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CnotFidelity<T> {
    pub up: T,
    pub down: T,
    pub weighted: T,
}

impl<T: Real> CnotFidelity<T> {
    /// `weighted` under [`OutcomeHandling::ProbabilityWeighted`]; under
    /// [`OutcomeHandling::PerOutcome`] the spin-up value.
    pub fn selected(&self, handling: OutcomeHandling) -> T {
        match handling {
            OutcomeHandling::PerOutcome => self.up,
            OutcomeHandling::ProbabilityWeighted => self.weighted,
        }
    }
}

pub const DEFAULT_GRID_N: usize = 32;
/// Smallest accepted grid. The raw integrand is a trigonometric polynomial of
/// degree at most 4 per angle, so any grid above 4 integrates it exactly; the
/// conditioned integrand is rational and converges geometrically instead.
pub const MIN_GRID_N: usize = 9;

/// Ideal probability of each CNOT spin outcome. Raw per-outcome fidelities
/// rescale the branch by it, so that a lossless run scores 1.
const CNOT_OUTCOME_WEIGHT: f64 = 0.5;

/// Fidelity of one CNOT outcome record against the ideal target. The raw
/// value uses the branch rescaled by the ideal outcome probability.
pub fn cnot_outcome_fidelity<T: Real>(
    record: &OutcomeRecord<T>,
    reference: &JointState<T>,
    normalization: Normalization,
) -> Result<T> {
    let f = state_fidelity(
        &record.conditioned_state,
        reference,
        Normalization::Conditioned,
    )?;
    Ok(match normalization {
        Normalization::Conditioned => f,
        Normalization::Raw => clamp01(f * record.probability / T::lit(CNOT_OUTCOME_WEIGHT)),
    })
}

/// Corrected CNOT branches for the four computational inputs `RR, RL, LR, LL`;
/// by linearity these determine the output for every input.
struct CnotKernel<T> {
    // [outcome][input] -> amplitudes over RR, RL, LR, LL
    branches: [[[C<T>; 4]; 4]; 2],
}

impl<T: Real> CnotKernel<T> {
    fn new(mode: &ScatterMode<T>) -> Result<Self> {
        let (o, z) = (T::one(), T::zero());
        let inputs = [(o, z, o, z), (o, z, z, o), (z, o, o, z), (z, o, z, o)];
        let mut branches = [[[C::new(z, z); 4]; 4]; 2];
        for (k, &(a, b, d, g)) in inputs.iter().enumerate() {
            let raw = cnot_final_state(&CnotInput::real(a, b, d, g)?, mode)?;
            for (s, branch) in cnot_branches(&raw)?.iter().enumerate() {
                for (dst, src) in branches[s][k].iter_mut().zip(branch.amplitudes()) {
                    *dst = *src;
                }
            }
        }
        Ok(Self { branches })
    }

    /// `(|⟨ref|b_s⟩|², ⟨b_s|b_s⟩)` for both outcomes at real input angles.
    fn overlaps(&self, theta1: T, theta2: T) -> [(T, T); 2] {
        let (a, b) = (theta1.cos(), theta1.sin());
        let (d, g) = (theta2.cos(), theta2.sin());
        let coeff = [a * d, a * g, b * d, b * g];
        let reference = [a * d, a * g, b * g, b * d];
        let mut out = [(T::zero(), T::zero()); 2];
        for (s, slot) in out.iter_mut().enumerate() {
            let mut ov = C::new(T::zero(), T::zero());
            let mut norm = T::zero();
            for (j, &rj) in reference.iter().enumerate() {
                let amp: C<T> = (0..4).map(|k| self.branches[s][k][j] * coeff[k]).sum();
                ov += amp * rj;
                norm += amp.norm_sqr();
            }
            *slot = (ov.norm_sqr(), norm);
        }
        out
    }
}

/// Uniform `grid_n × grid_n` rectangle rule over `θ₁, θ₂ ∈ [0, 2π)` for the
/// inputs `(cos θ₁|R⟩ + sin θ₁|L⟩)(cos θ₂|R⟩ + sin θ₂|L⟩)`.
pub fn average_cnot_fidelity<T: Real>(
    mode: &ScatterMode<T>,
    normalization: Normalization,
    grid_n: usize,
) -> Result<CnotFidelity<T>> {
    if grid_n < MIN_GRID_N {
        return Err(Error::GridTooCoarse {
            min: MIN_GRID_N,
            got: grid_n,
        });
    }
    let kernel = CnotKernel::new(mode)?;
    let w = T::lit(CNOT_OUTCOME_WEIGHT);
    let step = T::TAU() / T::from_usize_lossy(grid_n);
    // Conditioned fidelity is undefined where a branch is fully lost; such
    // inputs have measure zero and are left out of the mean.
    let lost = T::tolerance() * T::tolerance();
    let mut acc = [T::zero(); 3];
    let mut used = [0usize; 3];
    for i in 0..grid_n {
        let t1 = step * T::from_usize_lossy(i);
        for j in 0..grid_n {
            let t2 = step * T::from_usize_lossy(j);
            let [(ov_u, n_u), (ov_d, n_d)] = kernel.overlaps(t1, t2);
            let f = match normalization {
                Normalization::Conditioned => [
                    (n_u > lost).then(|| ov_u / n_u),
                    (n_d > lost).then(|| ov_d / n_d),
                    (n_u + n_d > lost).then(|| (ov_u + ov_d) / (n_u + n_d)),
                ],
                Normalization::Raw => [Some(ov_u / w), Some(ov_d / w), Some(ov_u + ov_d)],
            };
            for k in 0..3 {
                if let Some(v) = f[k] {
                    acc[k] += clamp01(v);
                    used[k] += 1;
                }
            }
        }
    }
    let mean = |k: usize| {
        if used[k] == 0 {
            Err(Error::ZeroNorm)
        } else {
            Ok(acc[k] / T::from_usize_lossy(used[k]))
        }
    };
    Ok(CnotFidelity {
        up: mean(0)?,
        down: mean(1)?,
        weighted: mean(2)?,
    })
}

/// Overlap of the unmeasured swap output with the ideal five-party state.
/// Outcome handling does not apply: the state is compared before measurement.
pub fn swap_fidelity<T: Real>(mode: &ScatterMode<T>, normalization: Normalization) -> Result<T> {
    state_fidelity(
        &swap_final_state(mode)?,
        &ideal_swap_reference()?,
        normalization,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepQuantity {
    /// CNOT fidelity given spin outcome up.
    CnotUp,
    /// CNOT fidelity given spin outcome down.
    CnotDown,
    /// CNOT fidelity selected by the convention's outcome handling.
    Cnot,
    Swap,
}

impl SweepQuantity {
    pub fn name(self) -> &'static str {
        match self {
            SweepQuantity::CnotUp => "cnot-up",
            SweepQuantity::CnotDown => "cnot-down",
            SweepQuantity::Cnot => "cnot",
            SweepQuantity::Swap => "swap",
        }
    }
}

/// Evaluates `quantity` at one resonant parameter point.
pub fn fidelity_at<T: Real>(
    quantity: SweepQuantity,
    kappa_s: T,
    g: T,
    gamma: T,
    convention: FidelityConvention,
    grid_n: usize,
) -> Result<T> {
    let mode = ScatterMode::realistic(&resonant_coefficients(g, kappa_s, gamma)?)?;
    let norm = convention.normalization;
    Ok(match quantity {
        SweepQuantity::Swap => swap_fidelity(&mode, norm)?,
        SweepQuantity::CnotUp => average_cnot_fidelity(&mode, norm, grid_n)?.up,
        SweepQuantity::CnotDown => average_cnot_fidelity(&mode, norm, grid_n)?.down,
        SweepQuantity::Cnot => {
            average_cnot_fidelity(&mode, norm, grid_n)?.selected(convention.outcome_handling)
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepSpec<T> {
    pub quantity: SweepQuantity,
    /// inclusive `κ_s/κ` range
    pub kappa_s_range: (T, T),
    /// inclusive `g/κ` range
    pub g_range: (T, T),
    /// points per axis; an axis with equal endpoints has a single point
    pub resolution: usize,
    pub gamma: T,
    pub convention: FidelityConvention,
    pub grid_n: usize,
}

impl<T: Real> SweepSpec<T> {
    /// `κ_s/κ ∈ [0, 2]`, `g/κ ∈ [0, 3]`, 101 points per axis, `γ = 0.1κ`.
    pub fn default_for(quantity: SweepQuantity) -> Self {
        Self {
            quantity,
            kappa_s_range: (T::zero(), T::lit(2.0)),
            g_range: (T::zero(), T::lit(3.0)),
            resolution: 101,
            gamma: T::lit(0.1),
            convention: FidelityConvention::default(),
            grid_n: DEFAULT_GRID_N,
        }
    }

    pub fn kappa_s_values(&self) -> Result<Vec<T>> {
        axis(self.kappa_s_range, self.resolution, "kappa_s")
    }

    pub fn g_values(&self) -> Result<Vec<T>> {
        axis(self.g_range, self.resolution, "g")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow<T> {
    pub kappa_s_over_kappa: T,
    pub g_over_kappa: T,
    pub fidelity: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable<T> {
    pub spec: SweepSpec<T>,
    /// Row-major: `κ_s` outer, `g` inner, both ascending.
    pub rows: Vec<SweepRow<T>>,
}

/// Fidelity over a rectangular grid. Grid points are independent; with
/// `parallel` they are evaluated on the current rayon pool, and the row
/// order and values are identical either way.
pub fn sweep<T: Real>(spec: &SweepSpec<T>, parallel: bool) -> Result<SweepTable<T>> {
    if !spec.gamma.is_finite() || spec.gamma <= T::zero() {
        return Err(Error::InvalidSweep("gamma must be > 0".into()));
    }
    if spec.grid_n < MIN_GRID_N {
        return Err(Error::GridTooCoarse {
            min: MIN_GRID_N,
            got: spec.grid_n,
        });
    }
    let ks = spec.kappa_s_values()?;
    let gs = spec.g_values()?;
    let points: Vec<(T, T)> = ks
        .iter()
        .flat_map(|&k| gs.iter().map(move |&g| (k, g)))
        .collect();
    let eval = |&(k, g): &(T, T)| -> Result<SweepRow<T>> {
        Ok(SweepRow {
            kappa_s_over_kappa: k,
            g_over_kappa: g,
            fidelity: fidelity_at(
                spec.quantity,
                k,
                g,
                spec.gamma,
                spec.convention,
                spec.grid_n,
            )?,
        })
    };
    let rows = if parallel {
        points.par_iter().map(eval).collect::<Result<Vec<_>>>()?
    } else {
        points.iter().map(eval).collect::<Result<Vec<_>>>()?
    };
    Ok(SweepTable { spec: *spec, rows })
}

fn axis<T: Real>((lo, hi): (T, T), resolution: usize, name: &str) -> Result<Vec<T>> {
    if !lo.is_finite() || !hi.is_finite() || lo < T::zero() || hi < lo {
        return Err(Error::InvalidSweep(format!(
            "{name} range must satisfy 0 <= lo <= hi"
        )));
    }
    if lo == hi {
        return Ok(vec![lo]);
    }
    if resolution < 2 {
        return Err(Error::InvalidSweep(format!(
            "resolution must be >= 2 for a non-degenerate {name} range"
        )));
    }
    let last = T::from_usize_lossy(resolution - 1);
    Ok((0..resolution)
        .map(|i| {
            if i + 1 == resolution {
                hi
            } else {
                lo + (hi - lo) * T::from_usize_lossy(i) / last
            }
        })
        .collect())
}

/// Times in seconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimingParams<T> {
    /// electron spin coherence time
    pub t_e: T,
    /// interval between the two photons
    pub delta_t: T,
    /// cavity photon lifetime
    pub tau: T,
    /// exciton coherence time
    pub t_c: T,
}

impl<T: Real> TimingParams<T> {
    pub fn new(t_e: T, delta_t: T, tau: T, t_c: T) -> Result<Self> {
        for (v, msg) in [(t_e, "T_e must be > 0"), (t_c, "T_c must be > 0")] {
            if !v.is_finite() || v <= T::zero() {
                return Err(Error::InvalidParameter(msg));
            }
        }
        for (v, msg) in [(delta_t, "delta_t must be >= 0"), (tau, "tau must be >= 0")] {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidParameter(msg));
            }
        }
        Ok(Self {
            t_e,
            delta_t,
            tau,
            t_c,
        })
    }
}

/// Reading of the exciton dephasing factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum F2Convention {
    /// `F₂' = 1 − e^{−τ/T_c}`, literally as published.
    #[default]
    AsPrinted,
    /// `F₂' = e^{−τ/T_c}`, the reading under which dephasing is negligible.
    Complement,
}

/// `(F₁', F₂')` with `F₁' = (1 + e^{−Δt/T_e})/2`.
pub fn decoherence_factors<T: Real>(t: &TimingParams<T>, f2: F2Convention) -> (T, T) {
    let half = T::lit(0.5);
    let f1 = half * (T::one() + (-t.delta_t / t.t_e).exp());
    let decay = (-t.tau / t.t_c).exp();
    let f2 = match f2 {
        F2Convention::AsPrinted => T::one() - decay,
        F2Convention::Complement => decay,
    };
    (f1, f2)
}

/// `n₀ = γ² / (2g²)`
pub fn critical_photon_number<T: Real>(gamma: T, g: T) -> Result<T> {
    if !g.is_finite() || g <= T::zero() {
        return Err(Error::InvalidParameter(
            "g must be > 0 for the critical photon number",
        ));
    }
    if !gamma.is_finite() || gamma <= T::zero() {
        return Err(Error::InvalidParameter("gamma must be > 0"));
    }
    Ok(gamma * gamma / (T::lit(2.0) * g * g))
}

/// `Δt = τ / n₀`
pub fn photon_interval<T: Real>(n0: T, tau: T) -> Result<T> {
    if !n0.is_finite() || n0 <= T::zero() {
        return Err(Error::InvalidParameter("n0 must be > 0"));
    }
    if !tau.is_finite() || tau < T::zero() {
        return Err(Error::InvalidParameter("tau must be >= 0"));
    }
    Ok(tau / n0)
}

/// `(n₀, Δt)` from the cavity rates and the photon lifetime `tau` in seconds.
pub fn timing_estimates<T: Real>(gamma: T, g: T, tau: T) -> Result<(T, T)> {
    let n0 = critical_photon_number(gamma, g)?;
    Ok((n0, photon_interval(n0, tau)?))
}

fn clamp01<T: Real>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}
