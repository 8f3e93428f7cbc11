//! Conditional phase gates on two-photon optical fields from post-selected
//! atom–cavity interactions.
//!
//! A single cavity mode holding at most two photons interacts with one or
//! two effective two-level atoms. Measuring each atom in its initial level
//! applies a diagonal map `c_n → A_n c_n` to the field; this crate evaluates
//! those maps, searches for interaction times where `(A_0, A_1, A_2)` comes
//! close to the nonlinear-sign pattern `(1, 1, −1)`, simulates the
//! interferometer used to calibrate such a gate, and converts the
//! dimensionless times to laboratory units.
//!
//! ```
//! use ns_forge::jc::AtomPrep;
//! use ns_forge::metrics::{coeffs, ns_fidelity, Step};
//!
//! let a = coeffs(&[Step::heralded(6.5064, AtomPrep::Ground)]).unwrap();
//! assert!((a[1].re - 0.97519).abs() < 5e-5);
//! assert!(ns_fidelity(&a).unwrap() > 0.9998);
//! ```

pub mod calibration;
pub mod cli;
pub mod error;
pub mod fock;
pub mod jc;
pub mod metrics;
pub mod reference;
pub mod search;
pub mod units;

pub use error::{Error, Result};
