use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::isometry::Isometry;
use super::line::{CPoint, OrientedLine, Side};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};

/// An open convex region: the intersection of the open left half-planes of
/// its constraint lines.
///
/// Cells are kept reduced. Only essential lines remain, listed in boundary
/// order; for a bounded cell consecutive lines meet at consecutive vertices,
/// counterclockwise. Two cells are the same set exactly when their lines
/// bound the same half-planes, which is what [`ConvexCell::same_as`] checks.
#[derive(Clone, Debug)]
pub struct ConvexCell {
    lines: Vec<OrientedLine>,
    bounded: bool,
}

/// Parameter `t = -cn / cd` along a line, with `cn`, `cd` purely imaginary.
struct Bound {
    cn: CycNum,
    cd: CycNum,
    sd: Ordering,
}

fn sign_mul(a: Ordering, b: Ordering) -> Ordering {
    match (a, b) {
        (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
        (x, y) if x == y => Ordering::Greater,
        _ => Ordering::Less,
    }
}

fn cmp_bounds(b1: &Bound, b2: &Bound) -> Result<Ordering> {
    // t1 - t2 = (cn2 cd1 - cn1 cd2) / (cd1 cd2), and cd1 cd2 has sign -sd1 sd2
    let x = &(&b2.cn * &b1.cd) - &(&b1.cn * &b2.cd);
    Ok(sign_mul(x.re_sign()?, sign_mul(b1.sd, b2.sd).reverse()))
}

struct LineInfo {
    essential: bool,
    lo_finite: bool,
    hi_finite: bool,
    hi_by: Vec<usize>,
}

impl ConvexCell {
    /// The whole plane.
    #[must_use]
    pub fn plane() -> Self {
        ConvexCell { lines: Vec::new(), bounded: false }
    }

    /// Reduces a list of constraints. Fails with [`Error::EmptyCell`] when the
    /// open intersection is empty.
    pub fn new(constraints: Vec<OrientedLine>) -> Result<Self> {
        let mut ls: Vec<OrientedLine> = Vec::with_capacity(constraints.len());
        for l in constraints {
            let mut dup = false;
            for k in &ls {
                if k.same_half_plane(&l)? {
                    dup = true;
                    break;
                }
                if k.opposite_of(&l)? {
                    return Err(Error::EmptyCell);
                }
            }
            if !dup {
                ls.push(l);
            }
        }
        if ls.is_empty() {
            return Ok(Self::plane());
        }
        let m = ls.len();
        let conj_d: Vec<CycNum> = ls.iter().map(|l| l.direction().conj()).collect();
        let mut infos = Vec::with_capacity(m);
        for i in 0..m {
            let mut lo: Option<Bound> = None;
            let mut hi: Option<Bound> = None;
            let mut hi_by = Vec::new();
            let mut empty = false;
            for j in 0..m {
                if i == j {
                    continue;
                }
                let md = &conj_d[j] * ls[i].direction();
                let sd = md.im_sign()?;
                let mn = &conj_d[j] * &(ls[i].a() - ls[j].a());
                if sd == Ordering::Equal {
                    if mn.im_sign()? != Ordering::Greater {
                        empty = true;
                        break;
                    }
                    continue;
                }
                let b = Bound { cn: &mn - &mn.conj(), cd: &md - &md.conj(), sd };
                if sd == Ordering::Greater {
                    let replace = match &lo {
                        None => true,
                        Some(cur) => cmp_bounds(&b, cur)? == Ordering::Greater,
                    };
                    if replace {
                        lo = Some(b);
                    }
                } else {
                    let o = match &hi {
                        None => Ordering::Less,
                        Some(cur) => cmp_bounds(&b, cur)?,
                    };
                    match o {
                        Ordering::Less => {
                            hi = Some(b);
                            hi_by.clear();
                            hi_by.push(j);
                        }
                        Ordering::Equal => hi_by.push(j),
                        Ordering::Greater => {}
                    }
                }
            }
            if !empty {
                if let (Some(l), Some(h)) = (&lo, &hi) {
                    empty = cmp_bounds(l, h)? != Ordering::Less;
                }
            }
            infos.push(LineInfo {
                essential: !empty,
                lo_finite: lo.is_some(),
                hi_finite: hi.is_some(),
                hi_by,
            });
        }
        let essentials: Vec<usize> = (0..m).filter(|&i| infos[i].essential).collect();
        if essentials.is_empty() {
            return Err(Error::EmptyCell);
        }
        let next = |i: usize| -> Result<usize> {
            let mut it = infos[i].hi_by.iter().copied().filter(|&j| infos[j].essential);
            match (it.next(), it.next()) {
                (Some(j), None) => Ok(j),
                _ => Err(Error::Invariant("ambiguous cell vertex".into())),
            }
        };
        let bounded = essentials.iter().all(|&i| infos[i].lo_finite && infos[i].hi_finite);
        let mut order = Vec::with_capacity(essentials.len());
        if bounded {
            let start = essentials[0];
            let mut cur = start;
            loop {
                order.push(cur);
                cur = next(cur)?;
                if cur == start {
                    break;
                }
                if order.len() > essentials.len() {
                    return Err(Error::Invariant("cell boundary does not close".into()));
                }
            }
            if order.len() != essentials.len() {
                return Err(Error::Invariant("cell boundary does not close".into()));
            }
        } else {
            let mut seen = vec![false; m];
            for &s in essentials.iter().filter(|&&i| !infos[i].lo_finite) {
                let mut cur = s;
                loop {
                    order.push(cur);
                    seen[cur] = true;
                    if !infos[cur].hi_finite {
                        break;
                    }
                    cur = next(cur)?;
                    if seen[cur] {
                        return Err(Error::Invariant("cell boundary loops".into()));
                    }
                }
            }
            order.extend(essentials.iter().copied().filter(|&i| !seen[i]));
        }
        let lines = order.into_iter().map(|i| ls[i].clone()).collect();
        Ok(ConvexCell { lines, bounded })
    }

    /// Polygon from counterclockwise vertices.
    pub fn polygon(vertices: &[CPoint]) -> Result<Self> {
        let k = vertices.len();
        let lines = (0..k)
            .map(|i| OrientedLine::new(vertices[i].clone(), vertices[(i + 1) % k].clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lines)
    }

    #[must_use]
    pub fn lines(&self) -> &[OrientedLine] {
        &self.lines
    }

    #[must_use]
    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// Vertices of a bounded cell, counterclockwise; vertex `k` starts edge `k`.
    pub fn vertices(&self) -> Result<Vec<CPoint>> {
        if !self.bounded {
            return Err(Error::Unbounded);
        }
        let m = self.lines.len();
        (0..m)
            .map(|k| self.lines[(k + m - 1) % m].intersection(&self.lines[k]))
            .collect()
    }

    /// Edges `(start, end)` of a bounded cell, counterclockwise.
    pub fn edges(&self) -> Result<Vec<(CPoint, CPoint)>> {
        let v = self.vertices()?;
        let m = v.len();
        Ok((0..m).map(|k| (v[k].clone(), v[(k + 1) % m].clone())).collect())
    }

    /// Mean of the vertices of a bounded cell, an interior point.
    pub fn interior_point(&self) -> Result<CPoint> {
        let v = self.vertices()?;
        let mut s = CycNum::zero(1);
        for p in &v {
            s = &s + p;
        }
        Ok(s.scale(&num_rational::BigRational::new(1.into(), (v.len() as i64).into())))
    }

    pub fn contains(&self, p: &CPoint) -> Result<bool> {
        for l in &self.lines {
            if l.side(p)? != Side::Left {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn closure_contains(&self, p: &CPoint) -> Result<bool> {
        for l in &self.lines {
            if l.side(p)? == Side::Right {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same open set.
    pub fn same_as(&self, other: &Self) -> Result<bool> {
        if self.lines.len() != other.lines.len() || self.bounded != other.bounded {
            return Ok(false);
        }
        for l in &self.lines {
            let mut found = false;
            for k in &other.lines {
                if l.same_half_plane(k)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Open intersection, or `None` when it is empty.
    pub fn intersect(&self, other: &Self) -> Result<Option<Self>> {
        let mut ls = self.lines.clone();
        ls.extend(other.lines.iter().cloned());
        match Self::new(ls) {
            Ok(c) => Ok(Some(c)),
            Err(Error::EmptyCell) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Intersection with the open left side of one more line.
    pub fn cut(&self, line: &OrientedLine) -> Result<Option<Self>> {
        let mut ls = self.lines.clone();
        ls.push(line.clone());
        match Self::new(ls) {
            Ok(c) => Ok(Some(c)),
            Err(Error::EmptyCell) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Whether the cell lies in the closed left side of `line`.
    pub fn inside_half_plane(&self, line: &OrientedLine) -> Result<bool> {
        Ok(self.cut(&line.reversed())?.is_none())
    }

    /// Whether `self` is contained in the closure of `other`.
    pub fn subset_of(&self, other: &Self) -> Result<bool> {
        for l in &other.lines {
            if !self.inside_half_plane(l)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self` minus the closure of `other`, as disjoint open cells. Their
    /// closures cover the closure of the difference.
    pub fn difference(&self, other: &Self) -> Result<Vec<Self>> {
        if self.intersect(other)?.is_none() {
            return Ok(vec![self.clone()]);
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        for l in &other.lines {
            if let Some(piece) = rest.cut(&l.reversed())? {
                out.push(piece);
            }
            match rest.cut(l)? {
                Some(r) => rest = r,
                None => break,
            }
        }
        Ok(out)
    }

    /// Image under an isometry.
    pub fn image(&self, g: &Isometry) -> Result<Self> {
        let mapped: Vec<OrientedLine> = self
            .lines
            .iter()
            .map(|l| {
                let (a, b) = (g.apply(l.a()), g.apply(l.b()));
                if g.is_reversing() {
                    OrientedLine::new(b, a)
                } else {
                    OrientedLine::new(a, b)
                }
            })
            .collect::<Result<_>>()?;
        if !g.is_reversing() {
            return Ok(ConvexCell { lines: mapped, bounded: self.bounded });
        }
        if self.bounded {
            let m = mapped.len();
            let lines = (0..m).map(|k| mapped[(m - k) % m].clone()).collect();
            return Ok(ConvexCell { lines, bounded: true });
        }
        Self::new(mapped)
    }
}

/// Whether the closures of `cells` cover the closure of `target`.
pub fn covered_by(target: &ConvexCell, cells: &[ConvexCell]) -> Result<bool> {
    let mut rest = vec![target.clone()];
    for c in cells {
        let mut next = Vec::new();
        for r in &rest {
            next.extend(r.difference(c)?);
        }
        rest = next;
        if rest.is_empty() {
            return Ok(true);
        }
    }
    Ok(rest.is_empty())
}
