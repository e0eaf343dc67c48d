//! Classical, no-signalling and entangled-qubit optima for binary static
//! team decision problems.
//!
//! Two agents each observe one bit of a random state `(ξ_A, ξ_B, ξ_W)` and
//! pick one of two actions without communicating. This crate evaluates the
//! best achievable expected cost when the agents share
//!
//! * common randomness (the local polytope, [`classical`]),
//! * any no-signalling correlation ([`nosignalling`]),
//! * an entangled pair of qubits ([`quantum`], optimised in [`optimizer`]),
//!
//! and locates the `χ` ranges where entanglement strictly helps.
//!
//! ```
//! use teamq::{classical, optimizer, SymPrior};
//!
//! let p = SymPrior::from_lambda(0.8).unwrap();
//! let report = optimizer::thresholds(&p).unwrap();
//! assert!((report.chi_th - 0.1577).abs() < 1e-4);
//! assert_eq!(classical::sym_classical_optimum(&p, 1.0), -0.8);
//! ```

pub mod classical;
pub mod error;
pub mod instance;
pub mod nosignalling;
pub mod optimizer;
pub mod quantum;
pub mod schema;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use instance::{
    sym_prior_from_lambda, ActionOrder, HalfCacMember, IndicatorMatrix, InstanceClass,
    OccupationMeasure, Prior, SymPrior, TeamInstance,
};
pub use quantum::{ActionAssignment, PureTwoQubitState, QubitBasis, QubitStrategy};
