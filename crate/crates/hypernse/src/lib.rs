//! Spectral toolkit for the hyperdissipative Navier-Stokes equations
//! on the 3-torus `[0, 2π]³`.
//!
//! The crate builds the explicit lattice-block initial datum whose
//! nonlinear self-interaction pumps energy into isolated dyadic shells,
//! verifies its Besov-scaling and triad-interaction properties, and
//! integrates the equations pseudospectrally to observe the resulting
//! shell-energy growth and critical-norm inflation.
//!
//! Conventions, fixed crate-wide:
//!
//! * Fourier series `u(x) = Σ_ξ û(ξ) e^{iξ·x}` over integer frequencies
//!   `ξ ∈ Z³`; real fields carry Hermitian-symmetric coefficients.
//! * Norms use the normalized measure `(2π)^{-3} dx`, so Plancherel reads
//!   `|u|₂² = Σ_ξ |û(ξ)|²` with no constants.
//! * Dyadic wavenumbers `λ_q = 2^q`; the sharp shell partition places `ξ`
//!   in shell `q ≥ 1` iff `(3/2)λ_{q-1} < |ξ| ≤ (3/2)λ_q`, and in shell 0
//!   iff `|ξ| ≤ 3/2`. This is an exact partition of `Z³`, so shell
//!   orthogonality and the extended-projection identity hold exactly.
//!
//! Entry points: [`datum::assemble_datum`] builds the initial condition,
//! [`trilinear::tri`] evaluates the convective trilinear form on sparse
//! fields, [`solver::run`] integrates the dynamics, and [`cli`] wires it
//! all into the `hypernse` binary. The `examples/` directory has one
//! runnable program per capability.

pub mod cli;
pub mod datum;
pub mod fit;
pub mod io;
pub mod sampling;
pub mod solver;
pub mod spectral;
pub mod trilinear;

pub use spectral::frequency::{shell_of, wavenumber, Frequency};
pub use spectral::sparse::SparseSpectralField;

use thiserror::Error;

/// Crate-wide error type. CLI exit codes are derived from the variant:
/// paper-level configuration errors map to 2, I/O and format errors to 3,
/// and failed quantitative checks or aborted runs to 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("exponent out of the paper's range: alpha = {0} not in [1, 5/4)")]
    ExponentOutOfRange(f64),
    #[error("inadmissible sequence: pair (q_{i} = {qi}, q_{i1} = {qi1}) gives lambda_{{q_{i}}}^(2a) lambda_{{q_{i1}}}^(4a-5) = {value} >= 1")]
    InadmissibleSequence {
        i: usize,
        i1: usize,
        qi: u32,
        qi1: u32,
        value: f64,
    },
    #[error("sequence indices must be strictly increasing with q_1 >= 2, got {0:?}")]
    InvalidSequence(Vec<u32>),
    #[error("amplitude multiplier must be positive, got {0}")]
    InvalidMultiplier(f64),
    #[error("overlapping supports: shell {0} is claimed by two components")]
    OverlappingSupports(u32),
    #[error("singular at zero frequency")]
    SingularAtZeroFrequency,
    #[error("invalid norm order r = {0}")]
    InvalidNormOrder(f64),
    #[error("grid n = {n} too small for spectral support max|xi|_inf = {max_linf}")]
    GridTooSmall { n: usize, max_linf: i64 },
    #[error("aliased product: grid n = {n} cannot dealias support max|xi|_inf = {max_linf}")]
    AliasedProduct { n: usize, max_linf: i64 },
    #[error("field is not shell-supported in shell {expected}: found mode in shell {found}")]
    ShellMismatch { expected: u32, found: u32 },
    #[error("component index j = {0} out of range for datum with J = {1}")]
    IndexOutOfRange(usize, usize),
    #[error("triad retention cap exceeded: {0} triads")]
    TriadCapExceeded(usize),
    #[error("blow-up or instability detected at t = {t}")]
    Instability { t: f64 },
    #[error("CFL violation at t = {t}: u_max*dt*n/2 = {value} > {limit}")]
    CflViolation { t: f64, value: f64, limit: f64 },
    #[error("malformed field file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable process exit code for this error (see the CLI contract).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ExponentOutOfRange(_)
            | Error::InadmissibleSequence { .. }
            | Error::InvalidSequence(_)
            | Error::InvalidMultiplier(_)
            | Error::OverlappingSupports(_) => 2,
            Error::Io(_) | Error::Malformed(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
