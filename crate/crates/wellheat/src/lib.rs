//! File formats and the command-line driver for `wellheat-core`.

pub mod cli;
pub mod config_file;
pub mod kernel_check;
pub mod output;
