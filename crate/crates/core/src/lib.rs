//! Symmetric multi-qubit states, their Majorana representations and SLOCC
//! invariants, and a simulator for totally correct anonymous leader election
//! over a pre-shared `αW_n + βW̄_n` resource.
//!
//! Modules:
//!
//! * [`statekit`]: dense state vectors, named states, Dicke decomposition and
//!   computational-basis sampling.
//! * [`majorana`]: the `Φ_n` point set of `W̃_n`, permutation sums, Majorana
//!   extraction and degeneracy configurations.
//! * [`slocc`]: degeneracy-configuration verdicts, the `M_3`/`M_4` operators
//!   and the randomized search for symmetric invertible local operators.
//! * [`election`]: the anonymous broadcast network and the leader election
//!   protocol with a seeded trial harness.

pub mod election;
mod error;
pub mod majorana;
pub mod rng;
pub mod slocc;
pub mod statekit;

pub use error::{Error, Result};
pub use num_complex::Complex64;
