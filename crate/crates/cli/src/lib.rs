//! Library surface of the command-line tool: spec file parsing, command
//! implementations, and output rendering. The binary in `main.rs` is a thin
//! argument-parsing shell over this.

pub mod commands;
pub mod format;
