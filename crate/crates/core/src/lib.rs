//! Slim rectangular lattices built from multifork sequences: lamps,
//! congruences, length reductions, lamp doubling and exhaustive exploration.

pub mod diagram;
pub mod doubling;
pub mod error;
pub mod explore;
pub mod lamps;
pub mod multifork;
pub mod order;
pub mod reducer;

pub use error::{Error, Result};
