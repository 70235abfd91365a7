//! Exact plane geometry over a cyclotomic field: orientation predicates,
//! convex cells and isometries.

mod cell;
mod isometry;
mod line;

pub use cell::{covered_by, ConvexCell};
pub use isometry::{Isometry, PartialIsometry};
pub use line::{cross_sign, segment_length, side_of_line, CPoint, OrientedLine, Side};
