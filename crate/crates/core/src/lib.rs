//! Exact symbolic computation of SU(3)-structures, connections and the
//! heterotic anomaly on six-dimensional nilpotent Lie algebras.

pub mod anomaly;
pub mod builtin;
pub mod coeffield;
pub mod complexgeom;
pub mod connections;
pub mod error;
pub mod exterior;
pub mod liealg;
pub mod linalg;
pub mod model;
pub mod numeric;
pub mod parse;
pub mod reproduce;

pub use error::{Error, Result};
