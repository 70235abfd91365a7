//! The metric graph of cell boundaries: one loop per cell, arc-length
//! parametrised counterclockwise from the cell's first vertex, cut at every
//! vertex of the tiling and at the images of boundary cut points under the
//! reflection `u` of the whole space.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::geometry::{segment_length, CPoint, ConvexCell, Isometry, Side};
use crate::iet::{try_sort_by, Branch, FlipIet};

/// Boundary of a bounded cell as a parametrised loop.
#[derive(Clone, Debug)]
pub struct Loop {
    pub vertices: Vec<CPoint>,
    /// Unit vector along each edge.
    pub units: Vec<CycNum>,
    /// `cum[k]` is the arc length at vertex `k`; `cum[m]` is the perimeter.
    pub cum: Vec<CycNum>,
}

fn cmp(a: &CycNum, b: &CycNum) -> Result<Ordering> {
    (a - b).re_sign()
}

impl Loop {
    pub fn new(cell: &ConvexCell) -> Result<Self> {
        let vertices = cell.vertices()?;
        let m = vertices.len();
        let mut units = Vec::with_capacity(m);
        let mut cum = Vec::with_capacity(m + 1);
        let mut acc = CycNum::zero(1);
        cum.push(acc.clone());
        for k in 0..m {
            let (l, u) = segment_length(&vertices[k], &vertices[(k + 1) % m])?;
            acc = &acc + &l;
            cum.push(acc.clone());
            units.push(u);
        }
        Ok(Loop { vertices, units, cum })
    }

    #[must_use]
    pub fn perimeter(&self) -> &CycNum {
        &self.cum[self.vertices.len()]
    }

    /// Position of `z` if it lies on edge `k` (closed), measured from the
    /// loop start.
    fn on_edge(&self, k: usize, z: &CPoint) -> Result<Option<CycNum>> {
        let a = &self.vertices[k];
        let rel = z - a;
        let u = &self.units[k];
        if (&u.conj() * &rel).im_sign()? != Ordering::Equal {
            return Ok(None);
        }
        let t = &rel * &u.conj();
        let len = &self.cum[k + 1] - &self.cum[k];
        if t.re_sign()? == Ordering::Less || cmp(&t, &len)? == Ordering::Greater {
            return Ok(None);
        }
        Ok(Some(&self.cum[k] + &t))
    }

    /// Position in `[0, perimeter)` of a point on the loop.
    pub fn locate(&self, z: &CPoint) -> Result<Option<CycNum>> {
        for k in 0..self.vertices.len() {
            if let Some(s) = self.on_edge(k, z)? {
                if s == *self.perimeter() {
                    return Ok(Some(CycNum::zero(1)));
                }
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    /// Point at arc length `s`.
    pub fn point_at(&self, s: &CycNum) -> Result<CPoint> {
        let m = self.vertices.len();
        for k in 0..m {
            if cmp(s, &self.cum[k + 1])? == Ordering::Less || k + 1 == m {
                return Ok(&self.vertices[k] + &(&(s - &self.cum[k]) * &self.units[k]));
            }
        }
        unreachable!("loops have at least three edges")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// On the boundary of the whole space.
    Boundary,
    /// Shared with the loop of another cell.
    Shared(usize),
}

/// A maximal uncut piece of one loop.
#[derive(Clone, Debug)]
pub struct Arc {
    pub comp: usize,
    pub start: CycNum,
    pub len: CycNum,
    pub p: CPoint,
    pub q: CPoint,
    pub kind: ArcKind,
}

#[derive(Clone, Debug)]
pub struct BoundaryGraph {
    pub cells: Vec<ConvexCell>,
    pub loops: Vec<Loop>,
    pub outer: Loop,
    pub space: ConvexCell,
    pub u: Isometry,
    pub arcs: Vec<Arc>,
}

fn push_unique(v: &mut Vec<CPoint>, z: CPoint) {
    if !v.contains(&z) {
        v.push(z);
    }
}

impl BoundaryGraph {
    /// `cells` must tile the bounded convex `space`; `u` must map `space`
    /// onto itself.
    pub fn build(cells: &[ConvexCell], space: &ConvexCell, u: &Isometry) -> Result<Self> {
        let loops = cells.iter().map(Loop::new).collect::<Result<Vec<_>>>()?;
        let outer = Loop::new(space)?;
        let mut points: Vec<CPoint> = Vec::new();
        for l in &loops {
            for v in &l.vertices {
                push_unique(&mut points, v.clone());
            }
        }
        for v in &outer.vertices {
            push_unique(&mut points, v.clone());
        }
        let mut images = Vec::new();
        for z in &points {
            if outer.locate(z)?.is_some() {
                images.push(u.apply(z));
            }
        }
        for z in images {
            push_unique(&mut points, z);
        }
        let half = num_rational::BigRational::new(1.into(), 2.into());
        let mut arcs = Vec::new();
        for (i, l) in loops.iter().enumerate() {
            let m = l.vertices.len();
            for k in 0..m {
                let mut cuts: Vec<CycNum> = alloc::vec![l.cum[k].clone(), l.cum[k + 1].clone()];
                for z in &points {
                    if let Some(s) = l.on_edge(k, z)? {
                        if !cuts.contains(&s) {
                            cuts.push(s);
                        }
                    }
                }
                let cuts = try_sort_by(cuts, cmp)?;
                for w in cuts.windows(2) {
                    let p = l.point_at(&w[0])?;
                    let q = if w[1] == *l.perimeter() { l.vertices[0].clone() } else { l.point_at(&w[1])? };
                    let mid = (&p + &q).scale(&half);
                    let kind = if outer.locate(&mid)?.is_some() {
                        ArcKind::Boundary
                    } else {
                        let mut found = None;
                        for (j, c) in cells.iter().enumerate() {
                            if j != i && c.lines().iter().any(|ln| ln.side(&mid) == Ok(Side::On)) && c.closure_contains(&mid)? {
                                found = Some(j);
                                break;
                            }
                        }
                        ArcKind::Shared(found.ok_or_else(|| Error::Invariant(format!("arc of cell {i} has no neighbour")))?)
                    };
                    arcs.push(Arc { comp: i, start: w[0].clone(), len: &w[1] - &w[0], p, q, kind });
                }
            }
        }
        Ok(BoundaryGraph { cells: cells.to_vec(), loops, outer, space: space.clone(), u: u.clone(), arcs })
    }

    #[must_use]
    pub fn lengths(&self) -> Vec<CycNum> {
        self.loops.iter().map(|l| l.perimeter().clone()).collect()
    }

    fn intervals(&self, pred: impl Fn(&Arc) -> bool) -> Vec<(usize, CycNum, CycNum)> {
        self.arcs.iter().filter(|a| pred(a)).map(|a| (a.comp, a.start.clone(), a.len.clone())).collect()
    }

    /// Identity on the arcs along the boundary of the space.
    #[must_use]
    pub fn boundary_identity(&self) -> FlipIet {
        FlipIet::identity_on(self.lengths(), &self.intervals(|a| a.kind == ArcKind::Boundary))
    }

    /// Identity on the shared arcs.
    #[must_use]
    pub fn interior_identity(&self) -> FlipIet {
        FlipIet::identity_on(self.lengths(), &self.intervals(|a| a.kind != ArcKind::Boundary))
    }

    /// Identity split at every arc.
    #[must_use]
    pub fn arc_identity(&self) -> FlipIet {
        FlipIet::identity_on(self.lengths(), &self.intervals(|_| true))
    }

    /// Index of the cell equal to `c`.
    pub fn find_cell(&self, c: &ConvexCell) -> Result<Option<usize>> {
        for (j, d) in self.cells.iter().enumerate() {
            if d.same_as(c)? {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    /// The map of loops induced by one isometry per cell, each carrying its
    /// cell onto another cell of the tiling.
    pub fn cellwise(&self, isos: &[Isometry]) -> Result<FlipIet> {
        let mut branches = Vec::new();
        for (i, g) in isos.iter().enumerate() {
            let img = self.cells[i].image(g)?;
            let j = self
                .find_cell(&img)?
                .ok_or_else(|| Error::Invariant(format!("image of cell {i} is not a cell")))?;
            let l = self.loops[i].perimeter().clone();
            if *self.loops[j].perimeter() != l {
                return Err(Error::Invariant(format!("cells {i} and {j} have different perimeters")));
            }
            let c = self.loops[j]
                .locate(&g.apply(&self.loops[i].vertices[0]))?
                .ok_or_else(|| Error::Invariant("image of a vertex is off the loop".into()))?;
            let zero = CycNum::zero(1);
            let mk = |s: CycNum, d: CycNum, len: CycNum, flip: bool| Branch {
                src_comp: i,
                src_start: s,
                dst_comp: j,
                dst_start: d,
                len,
                flip,
            };
            if g.is_reversing() {
                // s -> c - s mod l
                if c.is_zero() {
                    branches.push(mk(zero.clone(), zero.clone(), l.clone(), true));
                } else {
                    branches.push(mk(zero.clone(), zero.clone(), c.clone(), true));
                    branches.push(mk(c.clone(), c.clone(), &l - &c, true));
                }
            } else if c.is_zero() {
                branches.push(mk(zero.clone(), zero.clone(), l.clone(), false));
            } else {
                // s -> c + s mod l
                branches.push(mk(zero.clone(), c.clone(), &l - &c, false));
                branches.push(mk(&l - &c, zero.clone(), c.clone(), false));
            }
        }
        FlipIet::new(self.lengths(), branches)
    }

    /// `w`: swaps the two sides of every shared arc and acts as `u` on the
    /// boundary arcs.
    pub fn w_map(&self) -> Result<FlipIet> {
        let half = num_rational::BigRational::new(1.into(), 2.into());
        let mut branches = Vec::with_capacity(self.arcs.len());
        for a in &self.arcs {
            let (j, from) = match a.kind {
                ArcKind::Shared(j) => (j, a.q.clone()),
                ArcKind::Boundary => {
                    let (up, uq) = (self.u.apply(&a.p), self.u.apply(&a.q));
                    let mid = (&up + &uq).scale(&half);
                    let mut hit = None;
                    for (j, l) in self.loops.iter().enumerate() {
                        if l.locate(&mid)?.is_some() {
                            hit = Some(j);
                            break;
                        }
                    }
                    let j = hit.ok_or_else(|| Error::Invariant("u moves a boundary arc off the graph".into()))?;
                    // orientation is reversed, so the image arc starts at u(q)
                    (j, uq)
                }
            };
            let dst = self.loops[j]
                .locate(&from)?
                .ok_or_else(|| Error::Invariant("arc end is off the neighbouring loop".into()))?;
            branches.push(Branch {
                src_comp: a.comp,
                src_start: a.start.clone(),
                dst_comp: j,
                dst_start: dst,
                len: a.len.clone(),
                flip: true,
            });
        }
        FlipIet::new(self.lengths(), branches)
    }

    /// Transfers a map defined on boundary arcs to the loop of the space.
    /// Branches must already be split at arc ends.
    pub fn project(&self, g: &FlipIet) -> Result<FlipIet> {
        let mut branches = Vec::with_capacity(g.branches().len());
        for b in g.branches() {
            let z = self.loops[b.src_comp].point_at(&b.src_start)?;
            let w = self.loops[b.dst_comp].point_at(&b.dst_start)?;
            let (Some(s), Some(d)) = (self.outer.locate(&z)?, self.outer.locate(&w)?) else {
                return Err(Error::Invariant("projected branch leaves the boundary".into()));
            };
            branches.push(Branch { src_comp: 0, src_start: s, dst_comp: 0, dst_start: d, len: b.len.clone(), flip: b.flip });
        }
        FlipIet::new(alloc::vec![self.outer.perimeter().clone()], branches)
    }
}
