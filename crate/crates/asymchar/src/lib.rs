//! File formats, caching, parallel drivers and the command-line front end
//! over `asymchar-core`.

pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
pub mod par;
pub mod report;

pub use asymchar_core as core;
