//! Parser, cache and subcommand drivers behind the `nakajima` binary.

pub mod cache;
pub mod commands;
pub mod parser;
pub mod record;
