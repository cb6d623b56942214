//! Steerability of two-qubit Bell-diagonal states under two and three
//! projective measurements.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`] and [`weiszfeld`]: fixed-size linear algebra and the
//!   Fermat-Toricelli solver.
//! - [`state`]: the [`BellDiagonalState`] value type, its canonical form and
//!   scalar measures (spectrum, concurrence, ellipsoid volume, Frobenius norm).
//! - [`steering_two`]: pair compatibility, the steering measure `S`, CHSH.
//! - [`steering_three`]: triple compatibility, the `|T|_F` certificate and a
//!   numerical estimate of `S3`.
//! - [`oracles`]: slow brute-force verifiers for the closed forms.
//! - [`harness`]: Monte Carlo sampling, classification, inequality checks,
//!   family sweeps, region slices and CSV/JSON output.
//!
//! ```
//! use bellsteer::{steering_two, BellDiagonalState};
//!
//! let w = BellDiagonalState::werner(0.9)?;
//! assert!(steering_two::steerable_by_two(&w));
//! assert!(w.concurrence() > 0.79);
//! # Ok::<(), bellsteer::Error>(())
//! ```

pub mod error;
pub mod harness;
pub mod linalg;
pub mod nelder_mead;
pub mod oracles;
pub mod state;
pub mod steering_three;
pub mod steering_two;
pub mod weiszfeld;

pub use error::{Error, Result};
pub use linalg::{Mat3, Vec3};
pub use state::{BellDiagonalState, NoisyObservable, Spectrum4};
pub use weiszfeld::FtSolution;
