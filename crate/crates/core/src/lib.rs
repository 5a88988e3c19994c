//! Mixed-state dense coding and steering thresholds for Werner and isotropic
//! states.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] small dense complex matrices, partial traces and a Jacobi
//!   eigensolver for Hermitian input,
//! * [`states`] Bell, GHZ and mixed-basis vectors plus the Werner and
//!   isotropic families,
//! * [`measures`] von Neumann entropy, dense-coding capacity, steerability
//!   verdicts and two-qubit concurrence,
//! * [`thresholds`] bisection for the dense-coding threshold and the region
//!   maps that partition the parameter interval,
//! * [`protocols`] exact density-matrix simulation of superdense coding and
//!   GHZ-controlled dense coding,
//! * [`cli`] the `densecode` command-line front end.
//!
//! ```
//! use densecode::{measures, states};
//!
//! let rho = states::werner(1.0).unwrap();
//! let report = measures::dense_coding_capacity(&rho).unwrap();
//! assert!((report.chi - 2.0).abs() < 1e-9);
//! assert!(report.dense_codeable);
//! ```

pub mod cli;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod protocols;
pub mod states;
pub mod thresholds;

pub use error::{Error, Result};
pub use linalg::{Complex, ComplexMatrix, EigenResult, Subsystem};
pub use measures::{CapacityReport, SteerRule, SteerVerdict};
pub use protocols::{ControlBasis, Message, ProtocolOutcome};
pub use states::{BellState, DensityOperator, PureState, StateFamily};
pub use thresholds::{RegionMap, ThresholdKind, ThresholdResult};
