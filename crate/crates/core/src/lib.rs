//! Finite-dimensional toolkit for evolution systems governed by maximal
//! monotone operators: operator catalog with exact resolvents, proximal /
//! Euler / flow schemes and their ergodic averages, numeric certificates for
//! the governing inequalities, convergence classification, and a declarative
//! experiment harness with a CLI.

pub mod error;
pub mod point;
pub mod util;

pub mod operators;
pub mod analysis;
pub mod certificates;
pub mod harness;
pub mod schemes;

pub use error::{Error, Result};
pub use point::Point;
