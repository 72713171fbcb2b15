//! Dense state vectors over labelled photon and spin modes.
//!
//! A photon contributes a polarization qubit and, while it is being routed,
//! a propagation-direction qubit. The electron spin contributes one qubit.
//! Amplitudes are stored in canonical order: photons by ascending index,
//! spin last, and within a photon polarization before direction. The first
//! degree of freedom is the most significant bit of the amplitude index.
//!
//! States may be sub-normalized: a lossy scattering event removes amplitude
//! instead of routing it to an explicit loss mode, so the squared norm is the
//! survival probability.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::map::LocalMap;
use crate::scalar::{re, Real, C};

/// Basis in which a photon's polarization index is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolBasis {
    /// index 0 = R, index 1 = L
    Circular,
    /// index 0 = H, index 1 = V
    Linear,
}

impl PolBasis {
    pub fn letter(self, index: usize) -> &'static str {
        match (self, index) {
            (PolBasis::Circular, 0) => "R",
            (PolBasis::Circular, _) => "L",
            (PolBasis::Linear, 0) => "H",
            (PolBasis::Linear, _) => "V",
        }
    }

    pub fn toggled(self) -> Self {
        match self {
            PolBasis::Circular => PolBasis::Linear,
            PolBasis::Linear => PolBasis::Circular,
        }
    }
}

/// Propagation direction along the cavity axis. Doubles as a path label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Up = 0,
    Down = 1,
}

impl Direction {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Direction::Up
        } else {
            Direction::Down
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeLabel {
    Photon {
        index: u8,
        basis: PolBasis,
        path: bool,
    },
    Spin,
}

impl ModeLabel {
    fn order_key(&self) -> u16 {
        match self {
            ModeLabel::Photon { index, .. } => u16::from(*index),
            ModeLabel::Spin => u16::MAX,
        }
    }

    fn push_dofs(&self, out: &mut Vec<Dof>) {
        match *self {
            ModeLabel::Photon { index, path, .. } => {
                out.push(Dof::Polarization(index));
                if path {
                    out.push(Dof::Path(index));
                }
            }
            ModeLabel::Spin => out.push(Dof::Spin),
        }
    }
}

/// A single two-level degree of freedom inside a [`JointState`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dof {
    Polarization(u8),
    Path(u8),
    Spin,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JointState<T> {
    modes: Vec<ModeLabel>,
    amps: Vec<C<T>>,
}

/// Result of one projective measurement branch.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeRecord<T> {
    pub outcome_label: String,
    pub probability: T,
    /// Normalized post-measurement state (left unnormalized when `probability` is zero).
    pub conditioned_state: JointState<T>,
}

/// Labelled orthonormal basis of a measured subsystem.
#[derive(Clone, Debug)]
pub struct MeasurementBasis<T> {
    labels: Vec<String>,
    vectors: Vec<Vec<C<T>>>,
}

impl<T: Real> MeasurementBasis<T> {
    pub fn new(labels: Vec<String>, vectors: Vec<Vec<C<T>>>) -> Result<Self> {
        let dim = vectors.first().map_or(0, Vec::len);
        if labels.len() != vectors.len() || vectors.len() != dim || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: vectors.len(),
            });
        }
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: vectors.iter().map(Vec::len).max().unwrap_or(0),
            });
        }
        let mut worst = T::zero();
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate() {
                let ip: C<T> = a.iter().zip(b).map(|(x, y)| x.conj() * *y).sum();
                let expect = if i == j { T::one() } else { T::zero() };
                worst = worst.max((ip - re(expect)).norm());
            }
        }
        if worst > T::tolerance() {
            return Err(Error::NonOrthonormalBasis(
                worst.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self { labels, vectors })
    }

    pub fn spin_z() -> Self {
        Self::computational(&["up", "down"])
    }

    /// `|±⟩ = (|↑⟩ ± |↓⟩)/√2`
    pub fn spin_x() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self {
            labels: vec!["+".into(), "-".into()],
            vectors: vec![vec![re(h), re(h)], vec![re(h), re(-h)]],
        }
    }

    pub fn polarization(basis: PolBasis) -> Self {
        Self::computational(&[basis.letter(0), basis.letter(1)])
    }

    fn computational(labels: &[&str]) -> Self {
        let n = labels.len();
        let vectors = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { re(T::one()) } else { C::zero() })
                    .collect()
            })
            .collect();
        Self {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            vectors,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vectors(&self) -> &[Vec<C<T>>] {
        &self.vectors
    }
}

impl<T: Real> JointState<T> {
    /// Builds a state from modes in canonical order and a matching amplitude vector.
    pub fn new(modes: Vec<ModeLabel>, amps: Vec<C<T>>) -> Result<Self> {
        validate_modes(&modes)?;
        let expected = 1usize << dof_count(&modes);
        if amps.len() != expected {
            return Err(Error::AmplitudeLength {
                expected,
                got: amps.len(),
            });
        }
        let state = Self { modes, amps };
        let n2 = state.norm_sqr();
        if n2 > T::one() + T::tolerance() {
            return Err(Error::NormTooLarge(n2.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(state)
    }

    /// `a|R⟩ + b|L⟩` for photon `index`, without a path label.
    pub fn photon(index: u8, r: C<T>, l: C<T>) -> Result<Self> {
        Self::photon_in_basis(index, PolBasis::Circular, r, l)
    }

    pub fn photon_in_basis(index: u8, basis: PolBasis, a0: C<T>, a1: C<T>) -> Result<Self> {
        Self::new(
            vec![ModeLabel::Photon {
                index,
                basis,
                path: false,
            }],
            vec![a0, a1],
        )
    }

    /// `up|↑⟩ + down|↓⟩`
    pub fn spin(up: C<T>, down: C<T>) -> Result<Self> {
        Self::new(vec![ModeLabel::Spin], vec![up, down])
    }

    /// The zero vector over `modes`.
    pub fn zero(modes: Vec<ModeLabel>) -> Result<Self> {
        validate_modes(&modes)?;
        let n = 1usize << dof_count(&modes);
        Ok(Self {
            modes,
            amps: vec![C::zero(); n],
        })
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn dofs(&self) -> Vec<Dof> {
        let mut out = Vec::with_capacity(self.modes.len() * 2);
        for m in &self.modes {
            m.push_dofs(&mut out);
        }
        out
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn has_spin(&self) -> bool {
        self.modes.contains(&ModeLabel::Spin)
    }

    pub fn photon_label(&self, index: u8) -> Option<(PolBasis, bool)> {
        self.modes.iter().find_map(|m| match *m {
            ModeLabel::Photon {
                index: i,
                basis,
                path,
            } if i == index => Some((basis, path)),
            _ => None,
        })
    }

    pub fn scaled(&self, factor: C<T>) -> Self {
        Self {
            modes: self.modes.clone(),
            amps: self.amps.iter().map(|a| *a * factor).collect(),
        }
    }

    /// Unit-norm copy; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n2 = self.norm_sqr();
        if n2 <= T::zero() {
            return None;
        }
        Some(self.scaled(re(T::one() / n2.sqrt())))
    }

    /// Amplitude of the basis configuration given as `(dof, value)` pairs,
    /// one per degree of freedom in any order.
    pub fn amplitude(&self, config: &[(Dof, usize)]) -> Result<C<T>> {
        let dofs = self.dofs();
        if config.len() != dofs.len() {
            return Err(Error::DimensionMismatch {
                expected: dofs.len(),
                got: config.len(),
            });
        }
        let mut idx = 0usize;
        for &(dof, value) in config {
            let pos = position(&dofs, dof)?;
            if value > 1 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: value + 1,
                });
            }
            idx |= value << (dofs.len() - 1 - pos);
        }
        Ok(self.amps[idx])
    }

    /// Nonzero terms as `(ket label, amplitude)` pairs in index order.
    pub fn terms(&self, cutoff: T) -> Vec<(String, C<T>)> {
        let dofs = self.dofs();
        let n = dofs.len();
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > cutoff)
            .map(|(idx, a)| {
                let parts: Vec<String> = dofs
                    .iter()
                    .enumerate()
                    .map(|(pos, dof)| {
                        let bit = (idx >> (n - 1 - pos)) & 1;
                        self.dof_value_label(*dof, bit)
                    })
                    .collect();
                (parts.join(" "), *a)
            })
            .collect()
    }

    fn dof_value_label(&self, dof: Dof, bit: usize) -> String {
        match dof {
            Dof::Polarization(i) => {
                let (basis, _) = self.photon_label(i).expect("dof belongs to state");
                format!("{}{}", basis.letter(bit), i)
            }
            Dof::Path(i) => {
                let arrow = if bit == 0 { "up" } else { "down" };
                format!("{arrow}{i}")
            }
            Dof::Spin => if bit == 0 { "s:up" } else { "s:down" }.to_string(),
        }
    }

    /// Changes the polarization basis tag of a photon without touching amplitudes.
    pub fn with_photon_basis(&self, index: u8, basis: PolBasis) -> Result<Self> {
        let mut out = self.clone();
        let mode = out
            .modes
            .iter_mut()
            .find(|m| matches!(m, ModeLabel::Photon { index: i, .. } if *i == index))
            .ok_or(Error::MissingPhoton(index))?;
        if let ModeLabel::Photon { basis: b, .. } = mode {
            *b = basis;
        }
        Ok(out)
    }

    /// Adds a direction label to a photon, placing all of its amplitude on `dir`.
    pub fn attach_path(&self, index: u8, dir: Direction) -> Result<Self> {
        let (basis, path) = self
            .photon_label(index)
            .ok_or(Error::MissingPhoton(index))?;
        if path {
            return Err(Error::PathAlreadyAttached(index));
        }
        let dofs = self.dofs();
        let n = dofs.len();
        // new path bit sits immediately after the photon's polarization bit
        let pol_pos = position(&dofs, Dof::Polarization(index))?;
        let low = n - 1 - pol_pos;
        let low_mask = (1usize << low) - 1;
        let mut amps = vec![C::zero(); 1 << (n + 1)];
        for (idx, a) in self.amps.iter().enumerate() {
            let hi = idx >> low;
            let lo = idx & low_mask;
            let new_idx = (((hi << 1) | dir.index()) << low) | lo;
            amps[new_idx] = *a;
        }
        let modes = self
            .modes
            .iter()
            .map(|m| match *m {
                ModeLabel::Photon { index: i, .. } if i == index => ModeLabel::Photon {
                    index,
                    basis,
                    path: true,
                },
                other => other,
            })
            .collect();
        Ok(Self { modes, amps })
    }

    /// Removes a photon's direction label. Succeeds only if the photon leaves
    /// along a single direction (the other carries no more than the
    /// tolerance in squared amplitude); returns that direction.
    pub fn release_path(&self, index: u8) -> Result<(Self, Direction)> {
        let (_, path) = self
            .photon_label(index)
            .ok_or(Error::MissingPhoton(index))?;
        if !path {
            return Err(Error::MissingPath(index));
        }
        let dofs = self.dofs();
        let pos = position(&dofs, Dof::Path(index))?;
        let stride = 1usize << (dofs.len() - 1 - pos);
        let mut weight = [T::zero(); 2];
        for (idx, a) in self.amps.iter().enumerate() {
            weight[usize::from(idx & stride != 0)] += a.norm_sqr();
        }
        let keep = if weight[1] > weight[0] { 1 } else { 0 };
        if weight[1 - keep] > T::tolerance() {
            return Err(Error::IndefinitePath(index));
        }
        let mut ket = vec![C::zero(); 2];
        ket[keep] = re(T::one());
        let out = self.contract(&[Dof::Path(index)], &ket)?;
        Ok((out, Direction::from_index(keep)))
    }

    /// Partial inner product `⟨v|ψ⟩` over `target`; the contracted degrees of
    /// freedom are removed from the result.
    pub fn contract(&self, target: &[Dof], bra: &[C<T>]) -> Result<Self> {
        let dofs = self.dofs();
        let positions = target_positions(&dofs, target)?;
        let k = positions.len();
        if bra.len() != 1 << k {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                got: bra.len(),
            });
        }
        let modes = remove_dofs(&self.modes, target)?;
        let n = dofs.len();
        let strides: Vec<usize> = positions.iter().map(|p| 1usize << (n - 1 - p)).collect();
        let target_mask: usize = strides.iter().sum();
        let rest: Vec<usize> = (0..n)
            .filter(|p| !positions.contains(p))
            .map(|p| 1usize << (n - 1 - p))
            .collect();
        let mut amps = vec![C::zero(); 1 << (n - k)];
        for base in (0..self.amps.len()).filter(|i| i & target_mask == 0) {
            let mut acc = C::zero();
            for (m, b) in bra.iter().enumerate() {
                acc += b.conj() * self.amps[base + offset(m, &strides)];
            }
            // compress the remaining bits of `base` into the new index
            let mut new_idx = 0usize;
            for s in &rest {
                new_idx = (new_idx << 1) | usize::from(base & s != 0);
            }
            amps[new_idx] = acc;
        }
        Ok(Self { modes, amps })
    }

    fn permuted_into_canonical(modes: Vec<ModeLabel>, amps: Vec<C<T>>) -> Self {
        let mut old_dofs = Vec::new();
        for m in &modes {
            m.push_dofs(&mut old_dofs);
        }
        let mut sorted = modes;
        sorted.sort_by_key(ModeLabel::order_key);
        let mut new_dofs = Vec::new();
        for m in &sorted {
            m.push_dofs(&mut new_dofs);
        }
        if old_dofs == new_dofs {
            return Self {
                modes: sorted,
                amps,
            };
        }
        let n = new_dofs.len();
        // for each new position, the stride of the same dof in the old layout
        let old_stride: Vec<usize> = new_dofs
            .iter()
            .map(|d| {
                let p = old_dofs.iter().position(|o| o == d).expect("same dof set");
                1usize << (n - 1 - p)
            })
            .collect();
        let mut out = vec![C::zero(); amps.len()];
        for (new_idx, slot) in out.iter_mut().enumerate() {
            let mut old_idx = 0;
            for (pos, s) in old_stride.iter().enumerate() {
                if (new_idx >> (n - 1 - pos)) & 1 == 1 {
                    old_idx |= s;
                }
            }
            *slot = amps[old_idx];
        }
        Self {
            modes: sorted,
            amps: out,
        }
    }
}

impl<T: Real> fmt::Display for JointState<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms(T::tolerance());
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (label, a)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)|{}>", a.re, a.im, label)?;
        }
        Ok(())
    }
}

/// Outer product of two states over disjoint modes.
pub fn tensor<T: Real>(a: &JointState<T>, b: &JointState<T>) -> Result<JointState<T>> {
    for m in &b.modes {
        match m {
            ModeLabel::Spin if a.has_spin() => return Err(Error::DuplicateSpin),
            ModeLabel::Photon { index, .. } if a.photon_label(*index).is_some() => {
                return Err(Error::DuplicatePhoton(*index))
            }
            _ => {}
        }
    }
    let mut amps = Vec::with_capacity(a.amps.len() * b.amps.len());
    for x in &a.amps {
        for y in &b.amps {
            amps.push(*x * *y);
        }
    }
    let modes: Vec<ModeLabel> = a.modes.iter().chain(&b.modes).copied().collect();
    Ok(JointState::permuted_into_canonical(modes, amps))
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product<T: Real>(a: &JointState<T>, b: &JointState<T>) -> Result<C<T>> {
    if a.modes != b.modes {
        return Err(Error::ModeMismatch);
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * *y).sum())
}

/// Applies `map` to the degrees of freedom listed in `target` (first entry
/// most significant) and the identity elsewhere.
pub fn apply_local<T: Real>(
    state: &JointState<T>,
    target: &[Dof],
    map: &LocalMap<T>,
) -> Result<JointState<T>> {
    let dofs = state.dofs();
    let positions = target_positions(&dofs, target)?;
    let k = positions.len();
    if map.dim() != 1 << k {
        return Err(Error::DimensionMismatch {
            expected: 1 << k,
            got: map.dim(),
        });
    }
    let n = dofs.len();
    let strides: Vec<usize> = positions.iter().map(|p| 1usize << (n - 1 - p)).collect();
    let mask: usize = strides.iter().sum();
    let mut amps = state.amps.clone();
    let mut sub = vec![C::zero(); 1 << k];
    for base in (0..amps.len()).filter(|i| i & mask == 0) {
        for (m, slot) in sub.iter_mut().enumerate() {
            *slot = state.amps[base + offset(m, &strides)];
        }
        for (m, v) in map.apply(&sub).into_iter().enumerate() {
            amps[base + offset(m, &strides)] = v;
        }
    }
    Ok(JointState {
        modes: state.modes.clone(),
        amps,
    })
}

/// Projective measurement of `target` in `basis`. Measured modes stay in the
/// conditioned states, projected onto the observed basis vector.
pub fn measure<T: Real>(
    state: &JointState<T>,
    target: &[Dof],
    basis: &MeasurementBasis<T>,
) -> Result<Vec<OutcomeRecord<T>>> {
    basis
        .labels
        .iter()
        .zip(&basis.vectors)
        .map(|(label, v)| {
            let projected = apply_local(state, target, &LocalMap::projector(v))?;
            Ok(record(label, projected))
        })
        .collect()
}

/// Like [`measure`], but removes the measured modes from each conditioned
/// state. `target` must cover whole modes.
pub fn measure_discard<T: Real>(
    state: &JointState<T>,
    target: &[Dof],
    basis: &MeasurementBasis<T>,
) -> Result<Vec<OutcomeRecord<T>>> {
    basis
        .labels
        .iter()
        .zip(&basis.vectors)
        .map(|(label, v)| {
            let projected = state.contract(target, v)?;
            Ok(record(label, projected))
        })
        .collect()
}

fn record<T: Real>(label: &str, projected: JointState<T>) -> OutcomeRecord<T> {
    let probability = projected.norm_sqr();
    let conditioned_state = projected.normalized().unwrap_or(projected);
    OutcomeRecord {
        outcome_label: label.to_string(),
        probability,
        conditioned_state,
    }
}

fn offset(m: usize, strides: &[usize]) -> usize {
    let k = strides.len();
    strides
        .iter()
        .enumerate()
        .filter(|(j, _)| (m >> (k - 1 - j)) & 1 == 1)
        .map(|(_, s)| *s)
        .sum()
}

fn position(dofs: &[Dof], dof: Dof) -> Result<usize> {
    dofs.iter().position(|d| *d == dof).ok_or(match dof {
        Dof::Polarization(i) => Error::MissingPhoton(i),
        Dof::Path(i) => Error::MissingPath(i),
        Dof::Spin => Error::MissingSpin,
    })
}

fn target_positions(dofs: &[Dof], target: &[Dof]) -> Result<Vec<usize>> {
    let positions = target
        .iter()
        .map(|d| position(dofs, *d))
        .collect::<Result<Vec<_>>>()?;
    for (i, p) in positions.iter().enumerate() {
        if positions[..i].contains(p) {
            return Err(Error::RepeatedTarget);
        }
    }
    Ok(positions)
}

fn remove_dofs(modes: &[ModeLabel], target: &[Dof]) -> Result<Vec<ModeLabel>> {
    let mut out = Vec::with_capacity(modes.len());
    for m in modes {
        match *m {
            ModeLabel::Spin => {
                if !target.contains(&Dof::Spin) {
                    out.push(*m);
                }
            }
            ModeLabel::Photon { index, basis, path } => {
                let pol = target.contains(&Dof::Polarization(index));
                let dir = target.contains(&Dof::Path(index));
                match (pol, dir) {
                    (false, false) => out.push(*m),
                    (false, true) => out.push(ModeLabel::Photon {
                        index,
                        basis,
                        path: false,
                    }),
                    (true, true) => {}
                    (true, false) if !path => {}
                    (true, false) => return Err(Error::PartialModeDiscard),
                }
            }
        }
    }
    Ok(out)
}

fn dof_count(modes: &[ModeLabel]) -> usize {
    modes
        .iter()
        .map(|m| match m {
            ModeLabel::Photon { path: true, .. } => 2,
            _ => 1,
        })
        .sum()
}

fn validate_modes(modes: &[ModeLabel]) -> Result<()> {
    let mut spin_seen = false;
    let mut last_photon: Option<u8> = None;
    for m in modes {
        match *m {
            ModeLabel::Spin => {
                if spin_seen {
                    return Err(Error::DuplicateSpin);
                }
                spin_seen = true;
            }
            ModeLabel::Photon { index, .. } => {
                if spin_seen {
                    return Err(Error::NonCanonicalOrder);
                }
                match last_photon {
                    Some(prev) if prev == index => return Err(Error::DuplicatePhoton(index)),
                    Some(prev) if prev > index => return Err(Error::NonCanonicalOrder),
                    _ => {}
                }
                last_photon = Some(index);
            }
        }
    }
    Ok(())
}
