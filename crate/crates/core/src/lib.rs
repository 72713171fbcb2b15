//! Deterministic simulation of photonic gates mediated by a quantum-dot spin
//! in a double-sided optical microcavity.
//!
//! The library is generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`); the aliases at the crate root fix it to `f64`.

pub mod cavity;
pub mod elements;
pub mod error;
pub mod fidelity;
pub mod map;
pub mod protocols;
pub mod scalar;
pub mod state;

pub use cavity::{resonant_coefficients, scatter_coefficients, CavityParams, ScatterCoefficients};
pub use elements::{
    circular_pbs, half_wave_plate, pauli_z, relabel_linear_basis, spin_cavity_scatter,
    spin_hadamard, PortMap, RealisticAmplitudes, ScatterMode,
};
pub use error::{Error, Result};
pub use fidelity::{
    average_cnot_fidelity, cnot_outcome_fidelity, critical_photon_number, decoherence_factors,
    fidelity_at, photon_interval, state_fidelity, swap_fidelity, sweep, timing_estimates,
    CnotFidelity, F2Convention, FidelityConvention, Normalization, OutcomeHandling, SweepQuantity,
    SweepRow, SweepSpec, SweepTable, TimingParams,
};
pub use map::LocalMap;
pub use protocols::{
    cavity_pass, cnot_branches, cnot_final_state, ideal_cnot_reference, ideal_swap_reference,
    measure_sequence, run_cnot, run_entanglement_swap, swap_final_state, BellState, CnotInput,
    ProtocolResult, SwapOutcome,
};
pub use scalar::{Real, C};
pub use state::{
    apply_local, inner_product, measure, measure_discard, tensor, Direction, Dof, JointState,
    MeasurementBasis, ModeLabel, OutcomeRecord, PolBasis,
};

pub type Complex64 = C<f64>;
pub type State = JointState<f64>;
pub type StateF32 = JointState<f32>;
pub type Params = CavityParams<f64>;
pub type Coefficients = ScatterCoefficients<f64>;
pub type Mode = ScatterMode<f64>;
