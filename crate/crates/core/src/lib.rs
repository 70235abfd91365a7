//! Exact computation with piecewise isometries of the plane whose data lie
//! in a cyclotomic field.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod billiard;
pub mod certify;
pub mod cyclotomic;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod iet;
pub mod saf;

pub use cyclotomic::CycNum;
pub use error::{Error, Result};

/// First item satisfying a fallible predicate.
pub(crate) fn try_find<'a, T>(
    items: impl IntoIterator<Item = &'a T>,
    mut pred: impl FnMut(&T) -> Result<bool>,
) -> Result<Option<&'a T>> {
    for x in items {
        if pred(x)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
