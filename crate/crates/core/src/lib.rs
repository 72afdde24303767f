//! Numerical laboratory for a spectral criterion that rules out approximate
//! transitivity (AT) of measure-preserving systems.
//!
//! The pieces fit together as follows:
//!
//! * [`measure`] represents probability measures on the circle by truncated
//!   Fourier-coefficient tables and implements the transforms applied to them.
//! * [`sbh`] bounds the strongly Blum-Hanson quantity of such a table and
//!   computes the constant `eps0`.
//! * [`systems`] implements concrete Z-systems with a sign-symmetric
//!   partition: exact correlation sequences and sampled P-names.
//! * [`gaussian`] samples stationary Gaussian processes and checks the
//!   arcsine-type orthant laws and Gaussian-cocycle correlations.
//! * [`criterion`] holds the funny-word machinery: the `Theta` statistic,
//!   its exact second moment, and an empirical probe of the AT necessary
//!   condition.

pub mod bits;
pub mod criterion;
pub mod error;
pub mod gaussian;
pub mod measure;
pub mod parallel;
pub mod sbh;
pub mod systems;

pub use error::{LabError, Result};
pub use measure::FourierTable;
