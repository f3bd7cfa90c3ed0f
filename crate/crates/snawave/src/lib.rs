//! File formats, parameter sweeps and the command-line front end for
//! `snawave-core`.

pub mod config;
pub mod error;
pub mod format;
pub mod runs;
pub mod tables;

pub use error::{AppError, AppResult};
pub use snawave_core as core;
