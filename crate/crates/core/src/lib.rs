//! Walk matrices, hitting matrices and resistor-network response matrices of
//! weighted directed networks, computed exactly, together with loop-erased
//! walk oracles, Monte Carlo estimators and continuum kernel checks.

pub mod continuum;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod network;
pub mod resistor;
pub mod stochastic;
pub mod walks;

pub use error::{Error, Result};
pub use network::{DirectedNetwork, Edge, EdgeId, VertexId, Walk};

/// Exact arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;
