//! Dense statevector simulation of Grover-style search, its distributed
//! variants built from small node-local unitaries, and brute-force
//! verification of the operator identities they rely on.
//!
//! Register convention: qubit 0 is the leftmost symbol of every ket and the
//! basis index is the big-endian integer of the bit string.

pub mod algorithms;
pub mod distsim;
mod error;
pub mod operators;
pub mod oracle;
pub mod qsim;
pub mod verify;

pub use error::{Error, Result};

pub use algorithms::{make_plan, SearchPlan, SearchResult, Variant};
pub use oracle::{BooleanOracle, PartitionConfig};
pub use qsim::{Circuit, LocalUnitary, QubitIndexSet, StateVector};
