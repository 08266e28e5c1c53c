//! File formats, replicated Monte Carlo experiments and the `almost2`
//! command-line tool, on top of [`almost2_core`].

pub mod error;
pub mod io;
pub mod montecarlo;

pub use almost2_core as core;
pub use error::{Error, Result};
