use alloc::vec::Vec;

use super::PiecewiseIsometry;
use crate::error::{Error, Result};
use crate::geometry::{ConvexCell, Isometry};

/// A cell of one refinement level.
#[derive(Clone, Debug)]
pub struct Piece {
    pub cell: ConvexCell,
    /// Index of the piece one level up that contains the preimage.
    pub parent: Option<usize>,
}

/// Images of the ambient space under iterates of `f` and of its inverse.
/// Level `n + 1` holds `f(Q)` for every component `Q` of `dom(f) ∩ P` with
/// `P` at level `n`.
#[derive(Clone, Debug)]
pub struct PieceTree {
    pub forward: Vec<Vec<Piece>>,
    pub backward: Vec<Vec<Piece>>,
}

fn levels(f: &PiecewiseIsometry, depth: usize, max_pieces: usize) -> Result<Vec<Vec<Piece>>> {
    let mut out = Vec::with_capacity(depth + 1);
    out.push(
        f.ambient()
            .iter()
            .map(|c| Piece { cell: c.clone(), parent: None })
            .collect::<Vec<_>>(),
    );
    for _ in 0..depth {
        let prev = out.last().expect("level 0 exists");
        let mut next = Vec::new();
        for (pi, p) in prev.iter().enumerate() {
            for a in f.atoms() {
                if let Some(q) = p.cell.intersect(&a.domain)? {
                    next.push(Piece { cell: q.image(&a.iso)?, parent: Some(pi) });
                    if next.len() > max_pieces {
                        return Err(Error::BudgetExhausted(max_pieces));
                    }
                }
            }
        }
        out.push(next);
    }
    Ok(out)
}

/// Refines `depth` levels forward and backward, failing once a level holds
/// more than `max_pieces` cells.
pub fn refine_pieces(f: &PiecewiseIsometry, depth: usize, max_pieces: usize) -> Result<PieceTree> {
    Ok(PieceTree {
        forward: levels(f, depth, max_pieces)?,
        backward: levels(&f.inverse(), depth, max_pieces)?,
    })
}

/// A cell on which `f^period` is the identity, `period` being the first
/// exponent with that property.
#[derive(Clone, Debug)]
pub struct PeriodicCell {
    pub cell: ConvexCell,
    pub period: usize,
}

#[derive(Clone, Debug)]
pub struct PeriodicScan {
    pub cells: Vec<PeriodicCell>,
    /// Itinerary cells still unresolved at the period bound.
    pub unresolved: Vec<ConvexCell>,
    /// Set when the cell budget stopped the scan early.
    pub truncated: bool,
}

impl PeriodicScan {
    /// Whether every point of the space lies in the closure of a periodic cell.
    #[must_use]
    pub fn covers_everything(&self) -> bool {
        !self.truncated && self.unresolved.is_empty()
    }
}

/// Splits the domain into cells of common itinerary up to `max_period` steps
/// and reports the cells that come back to themselves by the identity.
pub fn detect_periodic_cells(f: &PiecewiseIsometry, max_period: usize, max_cells: usize) -> Result<PeriodicScan> {
    let mut cells = Vec::new();
    let mut unresolved = Vec::new();
    // (source cell, composed isometry, current image, steps taken)
    let mut work: Vec<(ConvexCell, Isometry, ConvexCell, usize)> = f
        .atoms()
        .iter()
        .map(|a| (a.domain.clone(), a.iso.clone(), a.codomain.clone(), 1))
        .collect();
    let mut visited = 0usize;
    while let Some((src, g, img, t)) = work.pop() {
        visited += 1;
        if visited > max_cells {
            work.push((src, g, img, t));
            unresolved.extend(work.into_iter().map(|w| w.0));
            return Ok(PeriodicScan { cells, unresolved, truncated: true });
        }
        if g.is_identity() {
            cells.push(PeriodicCell { cell: src, period: t });
            continue;
        }
        if t >= max_period {
            unresolved.push(src);
            continue;
        }
        let back = g.inverse();
        for a in f.atoms() {
            if let Some(y) = img.intersect(&a.domain)? {
                work.push((y.image(&back)?, a.iso.compose(&g), y.image(&a.iso)?, t + 1));
            }
        }
    }
    Ok(PeriodicScan { cells, unresolved, truncated: false })
}

/// Iterates a cell `period` times and checks that each image stays inside
/// one atom and that the composite is the identity.
pub fn verify_periodic_cell(f: &PiecewiseIsometry, cell: &PeriodicCell) -> Result<bool> {
    let mut img = cell.cell.clone();
    let mut g = Isometry::identity(1);
    for step in 0..cell.period {
        let Some(a) = crate::try_find(f.atoms(), |a| img.subset_of(&a.domain))? else {
            return Ok(false);
        };
        g = a.iso.compose(&g);
        img = img.image(&a.iso)?;
        if step + 1 < cell.period && g.is_identity() {
            return Ok(false);
        }
    }
    Ok(g.is_identity() && img.same_as(&cell.cell)?)
}
