//! Device-independent bounds on the state shared in a Bell experiment.
//!
//! Given only a correlation table `p(ab|xy)`, [`certify`] bounds the purity of
//! the reduced state, the local dimension, the entanglement entropy and the
//! smallest Schmidt coefficient. The [`sim`] module is an exact simulator
//! used to produce tables from explicit states and measurements.
//!
//! ```
//! use bellcert::{certify, scenarios, CertifyOptions};
//!
//! let report = certify(&scenarios::chsh().table, &CertifyOptions::default());
//! assert!((report.purity_bound.unwrap() - 0.5).abs() < 1e-9);
//! ```

pub mod certify;
pub mod cli;
pub mod scenarios;
pub mod sim;
pub mod table;
pub mod tol;

pub use certify::{certify, BoundsReport, CertifyOptions};
pub use table::{BehaviorTable, Index, Prob, Shape};
pub use tol::Tolerances;
