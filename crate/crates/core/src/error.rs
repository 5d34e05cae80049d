use thiserror::Error;

/// Errors shared by all state and gate operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vectors are not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("cannot fit {count} orthonormal vectors in dimension {dim}")]
    TooManyVectors { count: usize, dim: usize },

    #[error("vector or state has vanishing norm")]
    ZeroNorm,

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("photon number {photons} exceeds resource cap {cap}")]
    ResourceCap { photons: u32, cap: u32 },

    #[error("state carries no definite photon number")]
    IndefinitePhotonNumber,

    #[error("expected {expected} photons, found {found}")]
    PhotonNumberMismatch { expected: u32, found: u32 },

    #[error("need at least {min} photons, got {found}")]
    TooFewPhotons { min: u32, found: u32 },

    #[error("gate matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("duplicate site {site}")]
    DuplicateSite { site: usize },

    #[error("bipartition must be a nonempty proper subset of the sites")]
    InvalidBipartition,

    #[error("controlled phase undefined: vanishing amplitude in the per-site (+,-) basis")]
    VanishingAmplitude,

    #[error("|alpha|^2 = {alpha_sq} too large for {photons} reference photons")]
    AlphaTooLarge { alpha_sq: f64, photons: u32 },

    #[error("expected a {expected}-qubit register, found {found} qubits")]
    WrongQubitCount { expected: usize, found: usize },

    #[error("amplitude vector length {len} is not a power of two")]
    BadAmplitudeCount { len: usize },

    #[error("invalid serialized state: {0}")]
    InvalidJson(String),
}

pub type Result<T> = std::result::Result<T, Error>;
