//! Entanglement sharing in four-mode Gaussian states and in GHZ/W qudit
//! products.
//!
//! * [`gaussian`]: covariance matrices, two-mode squeezers, partial
//!   transposition, symplectic spectra.
//! * [`contangle`]: closed-form contangles, residuals and tripartite bounds of
//!   the four-mode family.
//! * [`four_mode`]: the four-mode state itself and a report that checks every
//!   closed form against its spectral counterpart.
//! * [`qudit`]: GHZ⊗W qudit tangles, non-Gaussianity and squashed
//!   entanglement bounds.
//! * [`verify`]: grid-based property suites used by the CLI and tests.

pub mod contangle;
pub mod error;
pub mod four_mode;
pub mod gaussian;
pub mod qudit;
pub mod verify;

pub use contangle::{ModePair, Probe, SqueezingParams};
pub use error::{Error, Result};
pub use gaussian::{CovarianceMatrix, ModePartition, SymplecticTransform};
