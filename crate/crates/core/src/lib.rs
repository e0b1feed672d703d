//! Statistics and neural-network tools for relating combinatorial knot
//! invariants (Jones and Khovanov polynomials) to hyperbolic ones.

pub mod ann;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod invariants;
pub mod knot_data;
pub mod linalg;
pub mod poly;
pub mod stats;

pub use error::{Error, ErrorKind, Result};
