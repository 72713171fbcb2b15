//! Gate set: spin-cavity scattering, wave plates, circular PBS routing and
//! single-qubit corrections, each applied as a local map on a [`JointState`].

use crate::cavity::{scatter_coefficients, CavityParams, ScatterCoefficients};
use crate::error::{Error, Result};
use crate::map::LocalMap;
use crate::scalar::{frac_1_sqrt2, re, Real};
use crate::state::{apply_local, Direction, Dof, JointState, PolBasis};

/// Scattering rule used for every photon pass through the cavity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScatterMode<T> {
    /// Perfect reflection (coupled) and π-shifted transmission (uncoupled).
    Ideal,
    /// Resonant magnitudes `|r|, |t|, |r0|, |t0|` with side leakage and loss.
    Realistic(RealisticAmplitudes<T>),
}

/// Coefficient magnitudes for the realistic rule. Only constructible from
/// real (resonant) coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealisticAmplitudes<T> {
    pub r: T,
    pub t: T,
    pub r0: T,
    pub t0: T,
}

impl<T: Real> ScatterMode<T> {
    pub fn realistic(k: &ScatterCoefficients<T>) -> Result<Self> {
        let im = k.max_imaginary();
        if im > T::tolerance() {
            return Err(Error::ComplexCoefficients(im.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(ScatterMode::Realistic(RealisticAmplitudes {
            r: k.r.norm(),
            t: k.t.norm(),
            r0: k.r0.norm(),
            t0: k.t0.norm(),
        }))
    }

    /// Realistic mode from cavity parameters; fails off resonance.
    pub fn from_params(p: &CavityParams<T>) -> Result<Self> {
        Self::realistic(&scatter_coefficients(p)?)
    }

    pub fn amplitudes(&self) -> RealisticAmplitudes<T> {
        match *self {
            ScatterMode::Ideal => RealisticAmplitudes {
                r: T::one(),
                t: T::zero(),
                r0: T::zero(),
                t0: T::one(),
            },
            ScatterMode::Realistic(a) => a,
        }
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self, ScatterMode::Ideal)
    }
}

/// 8×8 map on (polarization, direction, spin), index `pol·4 + dir·2 + spin`
/// with R = 0, L = 1, up = 0, down = 1 throughout.
///
/// A photon with `s_z = +1` (R travelling up or L travelling down) couples to
/// the spin-up transition, an `s_z = −1` photon to the spin-down one.
/// Coupled inputs go to `|r|·reflected + |t|·transmitted`; uncoupled inputs to
/// `−|t0|·transmitted − |r0|·reflected`. Reflection flips both the
/// polarization letter and the direction.
pub fn scatter_map<T: Real>(mode: &ScatterMode<T>) -> LocalMap<T> {
    let a = mode.amplitudes();
    let mut m = LocalMap::zeros(8);
    for pol in 0..2 {
        for dir in 0..2 {
            for spin in 0..2 {
                let input = pol * 4 + dir * 2 + spin;
                let reflected = (1 - pol) * 4 + (1 - dir) * 2 + spin;
                let sz_plus = pol == dir;
                let coupled = sz_plus == (spin == 0);
                let (refl, trans) = if coupled { (a.r, a.t) } else { (-a.r0, -a.t0) };
                m.set(reflected, input, re(refl));
                m.set(input, input, re(trans));
            }
        }
    }
    m
}

pub fn spin_cavity_scatter<T: Real>(
    state: &JointState<T>,
    photon: u8,
    mode: &ScatterMode<T>,
) -> Result<JointState<T>> {
    let (basis, path) = state
        .photon_label(photon)
        .ok_or(Error::MissingPhoton(photon))?;
    require_circular(photon, basis)?;
    if !path {
        return Err(Error::MissingPath(photon));
    }
    if !state.has_spin() {
        return Err(Error::MissingSpin);
    }
    apply_local(
        state,
        &[Dof::Polarization(photon), Dof::Path(photon), Dof::Spin],
        &scatter_map(mode),
    )
}

pub fn hadamard_map<T: Real>() -> LocalMap<T> {
    let h = frac_1_sqrt2::<T>();
    LocalMap::from_real(2, &[h, h, h, -h]).expect("2x2")
}

/// `|R⟩ → (|R⟩+|L⟩)/√2`, `|L⟩ → (|R⟩−|L⟩)/√2`
pub fn half_wave_plate<T: Real>(state: &JointState<T>, photon: u8) -> Result<JointState<T>> {
    let (basis, _) = state
        .photon_label(photon)
        .ok_or(Error::MissingPhoton(photon))?;
    require_circular(photon, basis)?;
    apply_local(state, &[Dof::Polarization(photon)], &hadamard_map())
}

/// Swaps the photon's basis tag between {R, L} and {H, V} (R↔H, L↔V).
pub fn relabel_linear_basis<T: Real>(state: &JointState<T>, photon: u8) -> Result<JointState<T>> {
    let (basis, _) = state
        .photon_label(photon)
        .ok_or(Error::MissingPhoton(photon))?;
    state.with_photon_basis(photon, basis.toggled())
}

/// Output path of a circular polarizing beam splitter for each
/// `(polarization, input path)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PortMap {
    table: [[Direction; 2]; 2],
}

impl PortMap {
    /// `table[pol][path]` with pol R = 0, L = 1 and path indexed like [`Direction`].
    pub fn new(table: [[Direction; 2]; 2]) -> Result<Self> {
        // polarization is untouched, so each polarization row must be a permutation
        if table.iter().any(|row| row[0] == row[1]) {
            return Err(Error::PortMapNotBijective);
        }
        Ok(Self { table })
    }

    /// R is transmitted (keeps its path), L is reflected (switches path).
    pub fn circular() -> Self {
        use Direction::*;
        Self {
            table: [[Up, Down], [Down, Up]],
        }
    }

    pub fn route(&self, pol: usize, path: Direction) -> Direction {
        self.table[pol][path.index()]
    }

    fn map<T: Real>(&self) -> LocalMap<T> {
        let mut m = LocalMap::zeros(4);
        for pol in 0..2 {
            for path in [Direction::Up, Direction::Down] {
                let out = self.route(pol, path);
                m.set(pol * 2 + out.index(), pol * 2 + path.index(), re(T::one()));
            }
        }
        m
    }
}

pub fn circular_pbs<T: Real>(
    state: &JointState<T>,
    photon: u8,
    ports: &PortMap,
) -> Result<JointState<T>> {
    let (basis, path) = state
        .photon_label(photon)
        .ok_or(Error::MissingPhoton(photon))?;
    require_circular(photon, basis)?;
    if !path {
        return Err(Error::MissingPath(photon));
    }
    apply_local(
        state,
        &[Dof::Polarization(photon), Dof::Path(photon)],
        &ports.map(),
    )
}

/// `|↑⟩ → (|↑⟩+|↓⟩)/√2`, `|↓⟩ → (|↑⟩−|↓⟩)/√2`
pub fn spin_hadamard<T: Real>(state: &JointState<T>) -> Result<JointState<T>> {
    apply_local(state, &[Dof::Spin], &hadamard_map())
}

/// Negates the L component of a photon's polarization.
pub fn pauli_z<T: Real>(state: &JointState<T>, photon: u8) -> Result<JointState<T>> {
    let (basis, _) = state
        .photon_label(photon)
        .ok_or(Error::MissingPhoton(photon))?;
    require_circular(photon, basis)?;
    let z = LocalMap::from_real(2, &[T::one(), T::zero(), T::zero(), -T::one()]).expect("2x2");
    apply_local(state, &[Dof::Polarization(photon)], &z)
}

fn require_circular(photon: u8, basis: PolBasis) -> Result<()> {
    if basis != PolBasis::Circular {
        return Err(Error::WrongPolarizationBasis {
            photon,
            expected: "circular",
        });
    }
    Ok(())
}
