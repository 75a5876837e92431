//! Script language, runner and reports for the `regulus` command.

pub mod report;
pub mod runner;
pub mod script;
pub mod suite;

pub use report::Report;
pub use runner::{run, Settings};
pub use script::{parse_script, Script, ScriptError};
