//! Generalized quantum measurements, successive-measurement schemes, and
//! state-independent entropic uncertainty bounds.
//!
//! The pipeline goes POVM → instrument → overall observable → bounds:
//!
//! ```
//! use sequam::instruments::luders;
//! use sequam::qubit::{x_povm, z_povm};
//! use sequam::uncertainty::{bound_d1, incompatibility_mu};
//!
//! let z = z_povm(1.0).unwrap();
//! let x = x_povm(std::f64::consts::FRAC_PI_4, 1.0).unwrap();
//! let d1 = bound_d1(&luders(&z).unwrap(), &x).unwrap();
//! let c = incompatibility_mu(&z, &x).unwrap();
//! assert!(d1 > c);
//! ```

pub mod error;
pub mod figures;
pub mod instruments;
pub mod io;
pub mod linalg;
pub mod quantum;
pub mod qubit;
pub mod successive;
pub mod uncertainty;
pub mod verify;

pub use error::{Error, Result};
