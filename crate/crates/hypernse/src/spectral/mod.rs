//! Frequency-lattice field representations, Fourier conventions, Leray
//! projection, Littlewood-Paley machinery, and norm computation.

pub mod fft3;
pub mod frequency;
pub mod grid;
pub mod leray;
pub mod norms;
pub mod sparse;

pub use frequency::{shell_of, wavenumber, Frequency, SHELL_CONVENTION};
pub use grid::DenseGridField;
pub use leray::{apply_leray, leray_symbol, projected_basis, LerayMatrix};
pub use norms::{bernstein_ratio, besov_norm, BesovReport};
pub use sparse::SparseSpectralField;
