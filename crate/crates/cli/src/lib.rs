//! Library surface of the `mol` command-line tool: command implementations,
//! the acceptance suite and report plumbing, kept callable from tests.

pub mod acceptance;
pub mod commands;
pub mod render;
pub mod report;
