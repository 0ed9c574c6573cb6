//! Coherence, entanglement and nonlocality of two-qubit X states under
//! local noise.

pub mod channels;
pub mod error;
pub mod experiments;
pub mod measures;
pub mod qmat;
pub mod xstates;

pub use error::{Error, Result};
