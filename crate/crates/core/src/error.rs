use thiserror::Error;

/// Everything that can go wrong while building states, applying maps or
/// evaluating fidelities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("photon {0} appears more than once")]
    DuplicatePhoton(u8),
    #[error("state already contains a spin mode")]
    DuplicateSpin,
    #[error("modes are not in canonical order (photons ascending, spin last)")]
    NonCanonicalOrder,
    #[error("amplitude vector has length {got}, modes require {expected}")]
    AmplitudeLength { expected: usize, got: usize },
    #[error("squared norm {0} exceeds 1")]
    NormTooLarge(f64),
    #[error("states are defined over different modes")]
    ModeMismatch,
    #[error("photon {0} is not present in the state")]
    MissingPhoton(u8),
    #[error("state has no spin mode")]
    MissingSpin,
    #[error("photon {0} carries no path label")]
    MissingPath(u8),
    #[error("photon {0} already carries a path label")]
    PathAlreadyAttached(u8),
    #[error("photon {0} leaves in a superposition of paths")]
    IndefinitePath(u8),
    #[error("photon {photon} must be labelled in the {expected} basis")]
    WrongPolarizationBasis { photon: u8, expected: &'static str },
    #[error("operator dimension {got} does not match target dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("target addresses the same degree of freedom twice")]
    RepeatedTarget,
    #[error("measurement basis is not orthonormal (deviation {0:e})")]
    NonOrthonormalBasis(f64),
    #[error("measurement target must cover whole modes to be discarded")]
    PartialModeDiscard,
    #[error("port map is not a bijection on (polarization, path)")]
    PortMapNotBijective,
    #[error("realistic scattering requires real (resonant) coefficients, imaginary part {0:e}")]
    ComplexCoefficients(f64),
    #[error("invalid cavity parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("input amplitudes are not normalized: {which} has squared norm {norm}")]
    NotNormalized { which: &'static str, norm: f64 },
    #[error("achieved state has zero norm; conditioned fidelity undefined")]
    ZeroNorm,
    #[error("quadrature grid must have at least {min} points per angle, got {got}")]
    GridTooCoarse { min: usize, got: usize },
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;
