//! Stabilizer entanglement engine: canonical bipartite forms, pair-counting
//! entanglement, and tripartite entanglement trimming for qubits, prime and
//! square-free qudits, and continuous-variable stabilizer states.

pub mod canonical;
pub mod clifford;
pub mod crt;
pub mod cv;
pub mod error;
pub mod linalg;
pub mod modular;
pub mod oracle;
pub mod par;
pub mod partition;
pub mod pauli;
pub mod survey;
pub mod symplectic;
pub mod tableau;
pub mod trimming;

pub use error::{Error, Result};
pub use partition::{Cut, Party};
pub use pauli::PauliOperator;
pub use tableau::{random_pure_tableau, Membership, StabilizerTableau, SubgroupSplit, ValidationReport};
