//! Library side of the `fermiex` command-line tool: report rendering and the
//! analysis behind each subcommand.

pub mod commands;
pub mod report;
