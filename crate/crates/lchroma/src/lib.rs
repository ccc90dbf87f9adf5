//! File formats, SVG output and the command-line front end for `lchroma-core`.

pub mod cli;
pub mod format;
pub mod svg;
