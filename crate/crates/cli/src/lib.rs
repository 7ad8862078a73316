//! Front end of the `hgschottky` binary: JSON documents, SVG figures and
//! the subcommands built on them.

pub mod commands;
pub mod format;
pub mod svg;
