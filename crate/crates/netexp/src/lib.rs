//! File formats, the parallel Monte Carlo driver and the command
//! implementations behind the `netexp` binary.

pub mod commands;
pub mod format;
pub mod graphfile;
pub mod parallel;

pub use commands::{CliError, CliResult};
pub use graphfile::{ChannelSpec, EdgeSpec, GraphFile};
