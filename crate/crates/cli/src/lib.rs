//! File formats and command dispatch for the `corec` tool.

pub mod app;
pub mod json;
pub mod render;
pub mod syntax;

pub use app::{run, Cli, Output};
pub use syntax::{emit_ceq, parse_ceq, parse_falg, parse_pres, parse_signature, InputError, ParseError};
