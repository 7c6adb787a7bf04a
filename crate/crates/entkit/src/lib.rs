//! Numerical entanglement detection: realignment and partial transposition, moment
//! criteria, structural physical approximations, witness operators and concurrence bounds.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod io;
pub mod matkit;
pub mod moments;
pub mod qmaps;
pub mod statebank;
pub mod sweep;
pub mod tables;
pub mod witness;

pub use error::{EntError, Result};
pub use matkit::{ComplexMatrix, DimSpec, RankTol, SpectralSummary, C64};
pub use statebank::{make_state, DensityMatrix, Params};
