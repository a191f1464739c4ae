//! Benchmark models: all-interval series, piecewise graph coloring and
//! concert-hall scheduling.

pub mod ais;
pub mod coloring;
pub mod concert;
pub mod instance;
pub mod model;

pub use instance::{Family, GenParams, Instance};
pub use model::{build_model, solve, BuildOptions, Method, SolveOptions};
