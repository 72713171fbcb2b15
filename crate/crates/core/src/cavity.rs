//! Reflection and transmission amplitudes of a double-sided microcavity
//! containing a spin-selective dipole, in the weak-excitation limit.
//!
//! All rates and frequencies are in units of the cavity field decay rate κ.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{c, re, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CavityParams<T> {
    /// dipole-cavity coupling g
    pub g: T,
    /// cavity field decay rate κ through each mirror; the unit, normally 1
    pub kappa: T,
    /// side leakage κ_s
    pub kappa_s: T,
    /// dipole decay rate γ
    pub gamma: T,
    /// ω_c − ω
    pub detuning_c: T,
    /// ω_X − ω
    pub detuning_x: T,
}

impl<T: Real> CavityParams<T> {
    /// Photon, cavity and transition all on resonance.
    pub fn resonant(g: T, kappa_s: T, gamma: T) -> Result<Self> {
        Self::new(g, kappa_s, gamma, T::zero(), T::zero())
    }

    pub fn new(g: T, kappa_s: T, gamma: T, detuning_c: T, detuning_x: T) -> Result<Self> {
        let p = Self {
            g,
            kappa: T::one(),
            kappa_s,
            gamma,
            detuning_c,
            detuning_x,
        };
        p.validate()?;
        Ok(p)
    }

    /// From absolute frequencies of the photon, cavity mode and transition.
    pub fn from_frequencies(
        g: T,
        kappa_s: T,
        gamma: T,
        omega: T,
        omega_c: T,
        omega_x: T,
    ) -> Result<Self> {
        Self::new(g, kappa_s, gamma, omega_c - omega, omega_x - omega)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.g,
            self.kappa,
            self.kappa_s,
            self.gamma,
            self.detuning_c,
            self.detuning_x,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("all parameters must be finite"));
        }
        if self.g < T::zero() {
            return Err(Error::InvalidParameter("g must be >= 0"));
        }
        if self.kappa_s < T::zero() {
            return Err(Error::InvalidParameter("kappa_s must be >= 0"));
        }
        if self.gamma <= T::zero() {
            return Err(Error::InvalidParameter("gamma must be > 0"));
        }
        if self.kappa <= T::zero() {
            return Err(Error::InvalidParameter("kappa must be > 0"));
        }
        Ok(())
    }

    pub fn is_resonant(&self) -> bool {
        self.detuning_c == T::zero() && self.detuning_x == T::zero()
    }
}

/// Coupled (`r`, `t`) and uncoupled (`r0`, `t0`) amplitudes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterCoefficients<T> {
    pub r: C<T>,
    pub t: C<T>,
    pub r0: C<T>,
    pub t0: C<T>,
}

impl<T: Real> ScatterCoefficients<T> {
    /// The lossless limit: full reflection when coupled, full transmission otherwise.
    pub fn ideal() -> Self {
        Self {
            r: re(T::one()),
            t: re(T::zero()),
            r0: re(T::zero()),
            t0: re(-T::one()),
        }
    }

    /// `|r − t − 1|` and `|r0 − t0 − 1|`.
    pub fn identity_residuals(&self) -> (T, T) {
        let one = re(T::one());
        (
            (self.r - self.t - one).norm(),
            (self.r0 - self.t0 - one).norm(),
        )
    }

    /// Largest imaginary part among the four amplitudes.
    pub fn max_imaginary(&self) -> T {
        [self.r, self.t, self.r0, self.t0]
            .iter()
            .map(|z| z.im.abs())
            .fold(T::zero(), T::max)
    }
}

/// Evaluates the coupled amplitudes at the given coupling and the uncoupled
/// ones at `g = 0`. Returns exactly real values on resonance.
pub fn scatter_coefficients<T: Real>(p: &CavityParams<T>) -> Result<ScatterCoefficients<T>> {
    p.validate()?;
    if p.is_resonant() {
        return resonant_with_kappa(p.g, p.kappa, p.kappa_s, p.gamma);
    }
    let two = T::lit(2.0);
    let dipole = c(p.gamma / two, p.detuning_x);
    let leak = c(p.kappa_s / two, p.detuning_c);
    let g2 = re(p.g * p.g);
    let kappa = re(p.kappa);
    let den = dipole * (leak + kappa) + g2;
    let r = (dipole * leak + g2) / den;
    let t = -(kappa * dipole) / den;
    // with g = 0 the dipole factor cancels
    let den0 = leak + kappa;
    let r0 = leak / den0;
    let t0 = -kappa / den0;
    Ok(ScatterCoefficients { r, t, r0, t0 })
}

/// Closed form at ω = ω_c = ω_X, with κ = 1.
pub fn resonant_coefficients<T: Real>(
    g: T,
    kappa_s: T,
    gamma: T,
) -> Result<ScatterCoefficients<T>> {
    CavityParams::resonant(g, kappa_s, gamma)?;
    resonant_with_kappa(g, T::one(), kappa_s, gamma)
}

fn resonant_with_kappa<T: Real>(
    g: T,
    kappa: T,
    kappa_s: T,
    gamma: T,
) -> Result<ScatterCoefficients<T>> {
    let two = T::lit(2.0);
    let four_g2 = T::lit(4.0) * g * g;
    let den = gamma * (two * kappa + kappa_s) + four_g2;
    let r = (gamma * kappa_s + four_g2) / den;
    let t = -(two * gamma * kappa) / den;
    let den0 = two * kappa + kappa_s;
    let r0 = kappa_s / den0;
    let t0 = -(two * kappa) / den0;
    Ok(ScatterCoefficients {
        r: re(r),
        t: re(t),
        r0: re(r0),
        t0: re(t0),
    })
}
