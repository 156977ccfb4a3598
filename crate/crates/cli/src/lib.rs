//! Command-line front end and HTTP server for the recommendation pipeline.

pub mod commands;
pub mod server;
