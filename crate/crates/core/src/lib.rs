//! Finite-domain constraint solving with symmetry breaking by symmetries of
//! symmetry-breaking constraints.

pub mod bench;
pub mod constraints;
pub mod domain;
pub mod sbds;
pub mod search;
pub mod error;
pub mod forced;
pub mod harness;
pub mod static_sb;
pub mod store;
pub mod symmetry;

pub use error::{Error, Result};
