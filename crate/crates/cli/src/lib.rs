//! Command-line front end: game files in, exact-rational JSON documents out.

mod app;
pub mod commands;
pub mod error;
pub mod input;
pub mod json;

pub use app::{run, Cli, Command};
pub use error::{CliError, InputError, ParseError};
pub use json::{Outcome, ResultDocument};
