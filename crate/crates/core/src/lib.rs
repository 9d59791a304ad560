//! Topological order and Abelian anyon data of two-dimensional
//! translation-invariant Pauli stabilizer codes over Z_d qudits.

pub mod cli;
pub mod codelib;
pub mod error;
pub mod laurent;
pub mod matrixlab;
pub mod oracle;
pub mod pipeline;
pub mod symplectic;

pub use error::{Error, Result};
pub use laurent::{LaurentPoly, ZdScalar};
pub use symplectic::{PauliVector, StabilizerCode, Syndrome};

/// Integer matrix used for anyon relation matrices.
pub type IntMatrix = matrixlab::Matrix<i64>;
/// Arbitrary-precision integer matrix.
pub type BigIntMatrix = matrixlab::Matrix<num_bigint::BigInt>;
