//! Interval exchanges with flips on a disjoint union of intervals.
//!
//! Component `c` is the interval `[0, L_c)`. A branch carries
//! `[src_start, src_start + len)` on one component onto
//! `[dst_start, dst_start + len)` on another, reversing direction when
//! `flip` is set. Maps are compared modulo finite sets.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub src_comp: usize,
    pub src_start: CycNum,
    pub dst_comp: usize,
    pub dst_start: CycNum,
    pub len: CycNum,
    pub flip: bool,
}

impl Branch {
    #[must_use]
    pub fn src_end(&self) -> CycNum {
        &self.src_start + &self.len
    }

    #[must_use]
    pub fn dst_end(&self) -> CycNum {
        &self.dst_start + &self.len
    }

    #[must_use]
    pub fn inverse(&self) -> Branch {
        Branch {
            src_comp: self.dst_comp,
            src_start: self.dst_start.clone(),
            dst_comp: self.src_comp,
            dst_start: self.src_start.clone(),
            len: self.len.clone(),
            flip: self.flip,
        }
    }
}

fn cmp(a: &CycNum, b: &CycNum) -> Result<Ordering> {
    (a - b).re_sign()
}

fn max<'a>(a: &'a CycNum, b: &'a CycNum) -> Result<&'a CycNum> {
    Ok(if cmp(a, b)? == Ordering::Less { b } else { a })
}

fn min<'a>(a: &'a CycNum, b: &'a CycNum) -> Result<&'a CycNum> {
    Ok(if cmp(a, b)? == Ordering::Greater { b } else { a })
}

/// Sorts by a fallible comparison, with binary insertion.
pub(crate) fn try_sort_by<T>(v: Vec<T>, mut f: impl FnMut(&T, &T) -> Result<Ordering>) -> Result<Vec<T>> {
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    for x in v {
        let (mut lo, mut hi) = (0, out.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if f(&out[mid], &x)? == Ordering::Greater {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        out.insert(lo, x);
    }
    Ok(out)
}

/// A partial injective map of a union of intervals, isometric on branches.
#[derive(Clone, Debug)]
pub struct FlipIet {
    lengths: Vec<CycNum>,
    branches: Vec<Branch>,
}

impl FlipIet {
    /// Validates positive lengths, ranges and disjoint sources and targets.
    pub fn new(lengths: Vec<CycNum>, branches: Vec<Branch>) -> Result<Self> {
        let bad = |m: &str| Err(Error::Invariant(m.into()));
        for l in &lengths {
            if l.re_sign()? != Ordering::Greater {
                return bad("component length must be positive");
            }
        }
        for b in &branches {
            if b.src_comp >= lengths.len() || b.dst_comp >= lengths.len() {
                return bad("branch refers to a missing component");
            }
            if b.len.re_sign()? != Ordering::Greater
                || b.src_start.re_sign()? == Ordering::Less
                || b.dst_start.re_sign()? == Ordering::Less
                || cmp(&b.src_end(), &lengths[b.src_comp])? == Ordering::Greater
                || cmp(&b.dst_end(), &lengths[b.dst_comp])? == Ordering::Greater
            {
                return bad("branch leaves its component");
            }
        }
        let g = FlipIet { lengths, branches };
        if !g.sources_disjoint()? || !g.inverse().sources_disjoint()? {
            return bad("branches overlap");
        }
        Ok(g)
    }

    fn sources_disjoint(&self) -> Result<bool> {
        let sorted = try_sort_by(self.branches.clone(), |a, b| {
            Ok(a.src_comp.cmp(&b.src_comp).then(cmp(&a.src_start, &b.src_start)?))
        })?;
        for w in sorted.windows(2) {
            if w[0].src_comp == w[1].src_comp && cmp(&w[0].src_end(), &w[1].src_start)? == Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Identity on every component.
    #[must_use]
    pub fn identity(lengths: Vec<CycNum>) -> Self {
        let branches = lengths
            .iter()
            .enumerate()
            .map(|(c, l)| Branch {
                src_comp: c,
                src_start: CycNum::zero(1),
                dst_comp: c,
                dst_start: CycNum::zero(1),
                len: l.clone(),
                flip: false,
            })
            .collect();
        FlipIet { lengths, branches }
    }

    /// Identity on the listed `(component, start, length)` intervals.
    #[must_use]
    pub fn identity_on(lengths: Vec<CycNum>, intervals: &[(usize, CycNum, CycNum)]) -> Self {
        let branches = intervals
            .iter()
            .map(|(c, s, l)| Branch {
                src_comp: *c,
                src_start: s.clone(),
                dst_comp: *c,
                dst_start: s.clone(),
                len: l.clone(),
                flip: false,
            })
            .collect();
        FlipIet { lengths, branches }
    }

    /// A single interval `[0, sum lengths)` cut into pieces of the given
    /// lengths, reassembled in the order `perm` (piece `i` goes to slot
    /// `perm[i]`).
    pub fn from_permutation(lengths: &[CycNum], perm: &[usize]) -> Result<Self> {
        let k = lengths.len();
        if perm.len() != k || (0..k).any(|s| !perm.contains(&s)) {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
        let mut total = CycNum::zero(1);
        let mut src = Vec::with_capacity(k);
        for l in lengths {
            src.push(total.clone());
            total = &total + l;
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| perm[i]);
        let mut dst = alloc::vec![CycNum::zero(1); k];
        let mut acc = CycNum::zero(1);
        for &i in &order {
            dst[i] = acc.clone();
            acc = &acc + &lengths[i];
        }
        let branches = (0..k)
            .map(|i| Branch {
                src_comp: 0,
                src_start: src[i].clone(),
                dst_comp: 0,
                dst_start: dst[i].clone(),
                len: lengths[i].clone(),
                flip: false,
            })
            .collect();
        Self::new(alloc::vec![total], branches)
    }

    /// Rotation `x -> x + a mod L` of the circle `[0, L)`, `0 <= a < L`.
    pub fn rotation(l: &CycNum, a: &CycNum) -> Result<Self> {
        if a.is_zero() {
            return Ok(Self::identity(alloc::vec![l.clone()]));
        }
        let rest = l - a;
        let b1 = Branch {
            src_comp: 0,
            src_start: CycNum::zero(1),
            dst_comp: 0,
            dst_start: a.clone(),
            len: rest.clone(),
            flip: false,
        };
        let b2 = Branch { src_comp: 0, src_start: rest.clone(), dst_comp: 0, dst_start: CycNum::zero(1), len: a.clone(), flip: false };
        Self::new(alloc::vec![l.clone()], alloc::vec![b1, b2])
    }

    #[must_use]
    pub fn lengths(&self) -> &[CycNum] {
        &self.lengths
    }

    #[must_use]
    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    #[must_use]
    pub fn has_flips(&self) -> bool {
        self.branches.iter().any(|b| b.flip)
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        FlipIet { lengths: self.lengths.clone(), branches: self.branches.iter().map(Branch::inverse).collect() }
    }

    /// Image of `x` on component `c`, if `x` lies in a branch source.
    pub fn apply(&self, c: usize, x: &CycNum) -> Result<Option<(usize, CycNum)>> {
        for b in &self.branches {
            if b.src_comp == c && cmp(x, &b.src_start)? != Ordering::Less && cmp(x, &b.src_end())? == Ordering::Less {
                let off = x - &b.src_start;
                let y = if b.flip { &b.dst_end() - &off } else { &b.dst_start + &off };
                return Ok(Some((b.dst_comp, y)));
            }
        }
        Ok(None)
    }

    /// Multiplies every length and position by the positive constant `s`.
    #[must_use]
    pub fn scaled(&self, s: &CycNum) -> Self {
        FlipIet {
            lengths: self.lengths.iter().map(|l| l * s).collect(),
            branches: self
                .branches
                .iter()
                .map(|b| Branch {
                    src_comp: b.src_comp,
                    src_start: &b.src_start * s,
                    dst_comp: b.dst_comp,
                    dst_start: &b.dst_start * s,
                    len: &b.len * s,
                    flip: b.flip,
                })
                .collect(),
        }
    }

    /// `outer ∘ inner`, defined where both steps are.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        let mut out = Vec::new();
        for b in &inner.branches {
            let (t0, t1) = (&b.dst_start, b.dst_end());
            for a in outer.branches.iter().filter(|a| a.src_comp == b.dst_comp) {
                let a_end = a.src_end();
                let lo = max(t0, &a.src_start)?;
                let hi = min(&t1, &a_end)?;
                if cmp(lo, hi)? != Ordering::Less {
                    continue;
                }
                let len = hi - lo;
                let src_start = if b.flip { &b.src_start + &(&t1 - hi) } else { &b.src_start + &(lo - t0) };
                let dst_start = if a.flip { &a.dst_start + &(&a_end - hi) } else { &a.dst_start + &(lo - &a.src_start) };
                out.push(Branch {
                    src_comp: b.src_comp,
                    src_start,
                    dst_comp: a.dst_comp,
                    dst_start,
                    len,
                    flip: a.flip ^ b.flip,
                });
            }
        }
        Ok(FlipIet { lengths: inner.lengths.clone(), branches: out })
    }

    /// Union of two maps with disjoint sources.
    #[must_use]
    pub fn union(&self, other: &Self) -> Self {
        let mut branches = self.branches.clone();
        branches.extend(other.branches.iter().cloned());
        FlipIet { lengths: self.lengths.clone(), branches }
    }

    /// Canonical form: sorted by source, adjacent continuing branches merged.
    pub fn canonical(&self) -> Result<Self> {
        let sorted = try_sort_by(self.branches.clone(), |a, b| {
            Ok(a.src_comp.cmp(&b.src_comp).then(cmp(&a.src_start, &b.src_start)?))
        })?;
        let mut out: Vec<Branch> = Vec::with_capacity(sorted.len());
        for b in sorted {
            if let Some(last) = out.last_mut() {
                let continues = last.src_comp == b.src_comp
                    && last.dst_comp == b.dst_comp
                    && last.flip == b.flip
                    && last.src_end() == b.src_start
                    && if b.flip { b.dst_end() == last.dst_start } else { last.dst_end() == b.dst_start };
                if continues {
                    if b.flip {
                        last.dst_start = b.dst_start.clone();
                    }
                    last.len = &last.len + &b.len;
                    continue;
                }
            }
            out.push(b);
        }
        Ok(FlipIet { lengths: self.lengths.clone(), branches: out })
    }

    /// Equality of maps up to finite sets.
    pub fn equals_mod_finite(&self, other: &Self) -> Result<bool> {
        let a = self.canonical()?;
        let b = other.canonical()?;
        Ok(a.branches == b.branches)
    }

    /// Total length of the domain.
    #[must_use]
    pub fn domain_measure(&self) -> CycNum {
        self.branches.iter().fold(CycNum::zero(1), |s, b| &s + &b.len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(p: i64, d: i64) -> CycNum {
        CycNum::from_ratio(1, p, d)
    }

    #[test]
    fn composition_splits_and_merges() {
        let l = q(1, 1);
        let r1 = FlipIet::rotation(&l, &q(1, 3)).unwrap();
        let r2 = FlipIet::rotation(&l, &q(2, 3)).unwrap();
        let id = FlipIet::compose(&r1, &r2).unwrap();
        assert!(id.equals_mod_finite(&FlipIet::identity(vec![l.clone()])).unwrap());
        let r = FlipIet::compose(&r1, &r1).unwrap();
        assert!(r.equals_mod_finite(&r2).unwrap());
    }

    #[test]
    fn flips_compose() {
        let l = q(1, 1);
        let flip = FlipIet::new(
            vec![l.clone()],
            vec![Branch { src_comp: 0, src_start: q(0, 1), dst_comp: 0, dst_start: q(0, 1), len: l.clone(), flip: true }],
        )
        .unwrap();
        assert_eq!(flip.apply(0, &q(1, 4)).unwrap(), Some((0, q(3, 4))));
        let sq = FlipIet::compose(&flip, &flip).unwrap();
        assert!(sq.equals_mod_finite(&FlipIet::identity(vec![l])).unwrap());
    }

    #[test]
    fn permutations() {
        let g = FlipIet::from_permutation(&[q(1, 2), q(1, 3), q(1, 6)], &[2, 0, 1]).unwrap();
        assert_eq!(g.apply(0, &q(0, 1)).unwrap(), Some((0, q(1, 2))));
        assert_eq!(g.apply(0, &q(1, 2)).unwrap(), Some((0, q(0, 1))));
        let back = FlipIet::compose(&g.inverse(), &g).unwrap();
        assert!(back.equals_mod_finite(&FlipIet::identity(vec![q(1, 1)])).unwrap());
    }

    #[test]
    fn rejects_overlaps() {
        let b = Branch { src_comp: 0, src_start: q(0, 1), dst_comp: 0, dst_start: q(0, 1), len: q(1, 2), flip: false };
        let mut c = b.clone();
        c.src_start = q(1, 4);
        c.dst_start = q(1, 2);
        assert!(FlipIet::new(vec![q(1, 1)], vec![b, c]).is_err());
    }
}
