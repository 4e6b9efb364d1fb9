//! Command-line front end and IO layer for the edit-war toolkit.
//!
//! This crate owns everything that touches the outside world: streaming
//! parsers for MediaWiki XML exports and the line-delimited `revlog-jsonl`
//! test format, per-language pattern and tag configuration, CSV/JSON-lines
//! report files, and the `editwar` binary with its `analyze`, `revert-map`,
//! `eval` and `sweep` subcommands. The algorithms live in `editwar-core`.

pub mod cli;
pub mod config;
pub mod ingest;
pub mod reports;

pub use cli::{run, Cli, CliError};
