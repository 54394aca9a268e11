//! Exact-arithmetic toolkit for `delta`-discretized incidence geometry:
//! balls and tubes, incidence counting under spacing conditions, tube-ball
//! duality, sharp example families and the crossing-number bound for
//! Furstenberg configurations.

pub mod constructions;
pub mod duality;
pub mod error;
pub mod furstenberg;
pub mod geometry;
pub mod incidence;
pub mod io;
pub mod poly;
pub mod sample;
pub mod scalar;
pub mod sweep;

pub use error::{Error, Result};
