//! File formats, parallel grid evaluation and the command-line front end for
//! [`halfspace_core`].
//!
//! - [`config`]: the JSON run configuration and the `x=lo:hi:count,…` grid
//!   syntax.
//! - [`io`]: field CSV/JSON output, sampled boundary data input, timing
//!   sidecars.
//! - [`commands`]: `kernel`, `solve` and `verify`.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

pub use error::{CliError, Result};
