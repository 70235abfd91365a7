use core::fmt;

use super::cell::ConvexCell;
use super::line::{CPoint, OrientedLine};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};

/// Plane isometry `z -> s*z + t` or, when reversing, `z -> s*conj(z) + t`,
/// with `|s| = 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct Isometry {
    reversing: bool,
    spectral: CycNum,
    shift: CycNum,
}

impl Isometry {
    pub fn new(reversing: bool, spectral: CycNum, shift: CycNum) -> Result<Self> {
        if !spectral.norm_sq().is_one() {
            return Err(Error::NotUnit);
        }
        Ok(Isometry { reversing, spectral, shift })
    }

    #[must_use]
    pub fn identity(n: u32) -> Self {
        Isometry { reversing: false, spectral: CycNum::one(n), shift: CycNum::zero(n) }
    }

    #[must_use]
    pub fn translation(t: CycNum) -> Self {
        Isometry { reversing: false, spectral: CycNum::one(t.conductor()), shift: t }
    }

    /// `z -> 2c - z`.
    #[must_use]
    pub fn point_reflection(c: &CPoint) -> Self {
        Isometry {
            reversing: false,
            spectral: CycNum::from_int(c.conductor(), -1),
            shift: c + c,
        }
    }

    /// Rotation about `c` by the unit `s`.
    pub fn rotation_about(c: &CPoint, s: CycNum) -> Result<Self> {
        let shift = c - &(&s * c);
        Self::new(false, s, shift)
    }

    /// Reflection in the line through `p` and `q`.
    pub fn reflection(p: &CPoint, q: &CPoint) -> Result<Self> {
        let d = q - p;
        if d.is_zero() {
            return Err(Error::DegenerateLine);
        }
        let s = d.checked_div(&d.conj())?;
        let shift = p - &(&s * &p.conj());
        Ok(Isometry { reversing: true, spectral: s, shift })
    }

    /// Reflection in a line through `p` with unit direction `e`.
    #[must_use]
    pub fn reflection_unit(p: &CPoint, e: &CycNum) -> Self {
        let s = e * e;
        let shift = p - &(&s * &p.conj());
        Isometry { reversing: true, spectral: s, shift }
    }

    #[must_use]
    pub fn is_reversing(&self) -> bool {
        self.reversing
    }

    #[must_use]
    pub fn spectral(&self) -> &CycNum {
        &self.spectral
    }

    #[must_use]
    pub fn shift(&self) -> &CycNum {
        &self.shift
    }

    #[must_use]
    pub fn is_identity(&self) -> bool {
        !self.reversing && self.spectral.is_one() && self.shift.is_zero()
    }

    #[must_use]
    pub fn apply(&self, z: &CPoint) -> CPoint {
        let w = if self.reversing { z.conj() } else { z.clone() };
        &(&self.spectral * &w) + &self.shift
    }

    /// `self ∘ inner`.
    #[must_use]
    pub fn compose(&self, inner: &Self) -> Self {
        let c = |x: &CycNum| if self.reversing { x.conj() } else { x.clone() };
        Isometry {
            reversing: self.reversing ^ inner.reversing,
            spectral: &self.spectral * &c(&inner.spectral),
            shift: &(&self.spectral * &c(&inner.shift)) + &self.shift,
        }
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        if self.reversing {
            Isometry {
                reversing: true,
                spectral: self.spectral.clone(),
                shift: -&(&self.spectral * &self.shift.conj()),
            }
        } else {
            let s = self.spectral.conj();
            Isometry { reversing: false, shift: -&(&s * &self.shift), spectral: s }
        }
    }

    /// For a reflection, its mirror line; `None` otherwise.
    pub fn axis(&self) -> Result<Option<OrientedLine>> {
        if !self.reversing || !self.compose(self).is_identity() {
            return Ok(None);
        }
        // midpoints of z and g(z) lie on the axis
        let half = num_rational::BigRational::new(1.into(), 2.into());
        let n = self.spectral.conductor();
        let mid = |z: &CycNum| (z + &self.apply(z)).scale(&half);
        let p = mid(&CycNum::zero(n));
        let mut q = mid(&CycNum::one(n));
        if q == p {
            q = mid(&CycNum::root_of_unity(n.max(4).next_multiple_of(4), 1));
        }
        OrientedLine::new(p, q).map(Some)
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = if self.reversing { "conj(z)" } else { "z" };
        write!(f, "z -> {:?} * {z} + {:?}", self.spectral, self.shift)
    }
}

/// An isometry restricted to an open convex domain, together with the image.
#[derive(Clone, Debug)]
pub struct PartialIsometry {
    pub iso: Isometry,
    pub domain: ConvexCell,
    pub codomain: ConvexCell,
}

impl PartialIsometry {
    pub fn new(domain: ConvexCell, iso: Isometry) -> Result<Self> {
        let codomain = domain.image(&iso)?;
        Ok(PartialIsometry { iso, domain, codomain })
    }

    /// `outer ∘ inner`, defined when the image of `inner` lies in the closure
    /// of the domain of `outer`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if !inner.codomain.subset_of(&outer.domain)? {
            return Err(Error::NotComposable);
        }
        let iso = outer.iso.compose(&inner.iso);
        let codomain = inner.domain.image(&iso)?;
        Ok(PartialIsometry { iso, domain: inner.domain.clone(), codomain })
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        PartialIsometry {
            iso: self.iso.inverse(),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflections_are_involutions() {
        let z = CycNum::root_of_unity(10, 1);
        let r = Isometry::reflection(&CycNum::one(10), &z).unwrap();
        assert!(r.compose(&r).is_identity());
        assert_eq!(r.apply(&z), z);
        assert_eq!(r.apply(&CycNum::one(10)), CycNum::one(10));
        let axis = r.axis().unwrap().unwrap();
        assert_eq!(axis.side(&z), Ok(super::super::Side::On));
    }

    #[test]
    fn inverse_and_composition() {
        let s = CycNum::root_of_unity(12, 5);
        let t = &CycNum::from_ratio(12, 1, 3) + &CycNum::root_of_unity(12, 2);
        for rev in [false, true] {
            let g = Isometry::new(rev, s.clone(), t.clone()).unwrap();
            assert!(g.compose(&g.inverse()).is_identity());
            assert!(g.inverse().compose(&g).is_identity());
            let p = CycNum::root_of_unity(12, 1);
            let h = Isometry::point_reflection(&p);
            assert_eq!(g.compose(&h).apply(&t), g.apply(&h.apply(&t)));
        }
        assert_eq!(Isometry::new(false, CycNum::from_int(4, 2), CycNum::zero(4)), Err(Error::NotUnit));
    }
}
