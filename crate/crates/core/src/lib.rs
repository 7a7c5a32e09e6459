//! Exact finite-level approximations of the von Neumann rank on group
//! algebras of free groups and their quotients, with twisted
//! representations, modular reduction and spectral moments.

pub mod coeff;
pub mod error;
pub mod freealg;
pub mod lab;
pub mod rank;
pub mod sofic;
pub mod spectra;
pub mod twist;

pub use error::{Error, Result};
