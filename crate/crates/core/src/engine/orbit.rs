use alloc::vec::Vec;

use super::PiecewiseIsometry;
use crate::error::Result;
use crate::geometry::CPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitStatus {
    /// `f^period(seed) = seed` with `period` minimal.
    Periodic { period: usize },
    /// `f^step(seed)` lies outside every open atom.
    Boundary { step: usize },
    /// Neither within the budget.
    Open,
}

#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub status: OrbitStatus,
    /// `seed, f(seed), ...` as far as they were computed.
    pub iterates: Vec<CPoint>,
    /// Number of pairwise distinct points among the iterates.
    pub distinct: usize,
}

/// Iterates `f` from `seed` exactly, for at most `budget` steps.
///
/// The map is injective, so an orbit that never returns to its seed has
/// pairwise distinct points; no other comparison is needed.
pub fn orbit(f: &PiecewiseIsometry, seed: &CPoint, budget: usize) -> Result<OrbitReport> {
    let mut iterates = Vec::with_capacity(budget.min(1 << 16) + 1);
    iterates.push(seed.clone());
    let mut z = seed.clone();
    for step in 0..budget {
        let Some(next) = f.evaluate(&z)? else {
            let distinct = iterates.len();
            return Ok(OrbitReport { status: OrbitStatus::Boundary { step }, iterates, distinct });
        };
        if next == *seed {
            let distinct = iterates.len();
            return Ok(OrbitReport { status: OrbitStatus::Periodic { period: step + 1 }, iterates, distinct });
        }
        iterates.push(next.clone());
        z = next;
    }
    let distinct = iterates.len();
    Ok(OrbitReport { status: OrbitStatus::Open, iterates, distinct })
}
