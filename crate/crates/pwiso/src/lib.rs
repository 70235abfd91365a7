//! Command-line plumbing around `pwiso-core`: JSON interchange, named
//! constructions and SVG figures.

pub mod json;
pub mod presets;
pub mod surd;
pub mod svg;
