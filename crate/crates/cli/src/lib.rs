//! File formats, reports and rendering for the `plsol` command.

pub mod input;
pub mod render;
pub mod report;

pub use input::{parse_argument, parse_arguments, InputError};
