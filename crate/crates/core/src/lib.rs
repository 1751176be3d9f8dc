pub mod config;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod grid;
pub mod initial;
pub mod integrate;
pub mod model;
pub mod runner;
pub mod snapshot;
pub mod spectral;
