use alloc::vec;
use alloc::vec::Vec;

use super::PiecewiseIsometry;
use crate::error::{Error, Result};
use crate::geometry::{covered_by, ConvexCell, Isometry, PartialIsometry};

/// First return map to a cell, with the return time of each atom.
#[derive(Clone, Debug)]
pub struct ReturnMap {
    pub map: PiecewiseIsometry,
    pub times: Vec<usize>,
}

struct Item {
    iso: Isometry,
    image: ConvexCell,
    time: usize,
}

/// Computes the first return of `f` to the open cell `a` by propagating
/// cells of equal itinerary. Fails when some cell has not returned after
/// `budget` steps.
pub fn first_return(f: &PiecewiseIsometry, a: &ConvexCell, budget: usize) -> Result<ReturnMap> {
    // atoms cut into the parts outside `a`
    let mut outside: Vec<(ConvexCell, usize)> = Vec::new();
    for (k, atom) in f.atoms().iter().enumerate() {
        for piece in atom.domain.difference(a)? {
            outside.push((piece, k));
        }
    }
    let mut returned: Vec<(ConvexCell, Isometry, usize)> = Vec::new();
    let mut work = Vec::new();
    for atom in f.atoms() {
        if let Some(y) = a.intersect(&atom.domain)? {
            work.push(Item { image: y.image(&atom.iso)?, iso: atom.iso.clone(), time: 1 });
        }
    }
    while let Some(item) = work.pop() {
        let back = item.iso.inverse();
        if let Some(r) = item.image.intersect(a)? {
            returned.push((r.image(&back)?, item.iso.clone(), item.time));
        }
        for (cell, k) in &outside {
            let Some(y) = item.image.intersect(cell)? else { continue };
            if item.time >= budget {
                return Err(Error::BudgetExhausted(budget));
            }
            let atom = &f.atoms()[*k];
            work.push(Item {
                image: y.image(&atom.iso)?,
                iso: atom.iso.compose(&item.iso),
                time: item.time + 1,
            });
        }
    }
    let merged = merge_cells(returned)?;
    let mut atoms = Vec::with_capacity(merged.len());
    let mut times = Vec::with_capacity(merged.len());
    for (c, g, t) in merged {
        atoms.push(PartialIsometry::new(c, g)?);
        times.push(t);
    }
    Ok(ReturnMap { map: PiecewiseIsometry::new_unchecked(vec![a.clone()], atoms), times })
}

/// Joins pairs of cells with equal label whose union is convex.
fn merge_cells(mut cells: Vec<(ConvexCell, Isometry, usize)>) -> Result<Vec<(ConvexCell, Isometry, usize)>> {
    'outer: loop {
        for i in 0..cells.len() {
            for j in 0..i {
                if cells[i].1 != cells[j].1 || cells[i].2 != cells[j].2 {
                    continue;
                }
                if let Some(h) = convex_union(&cells[i].0, &cells[j].0)? {
                    let (_, g, t) = cells.swap_remove(i);
                    cells[j] = (h, g, t);
                    continue 'outer;
                }
            }
        }
        return Ok(cells);
    }
}

/// The union of two open cells when its closure is convex.
pub(crate) fn convex_union(c1: &ConvexCell, c2: &ConvexCell) -> Result<Option<ConvexCell>> {
    let mut lines = Vec::new();
    for l in c1.lines().iter().chain(c2.lines()) {
        if c1.inside_half_plane(l)? && c2.inside_half_plane(l)? {
            lines.push(l.clone());
        }
    }
    let h = ConvexCell::new(lines)?;
    if covered_by(&h, &[c1.clone(), c2.clone()])? {
        Ok(Some(h))
    } else {
        Ok(None)
    }
}
