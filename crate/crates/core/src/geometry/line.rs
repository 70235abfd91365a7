use core::cmp::Ordering;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};

/// A point of the plane, identified with a complex number.
pub type CPoint = CycNum;

/// Position of a point relative to an oriented line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    On,
    Right,
}

impl Side {
    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Greater => Side::Left,
            Ordering::Equal => Side::On,
            Ordering::Less => Side::Right,
        }
    }
}

/// Sign of the cross product `Im(conj(x) * y)`: positive when `y` points to
/// the left of `x`.
pub fn cross_sign(x: &CycNum, y: &CycNum) -> Result<Ordering> {
    (&x.conj() * y).im_sign()
}

/// `conj(x) * y - x * conj(y)`, which is `2i` times the cross product.
/// Products of two such values are real.
pub(crate) fn cross_imag(x: &CycNum, y: &CycNum) -> CycNum {
    let m = &x.conj() * y;
    &m - &m.conj()
}

/// The line through `a` and `b`, oriented from `a` to `b`. Its open left side
/// is the half-plane it stands for in a [`super::ConvexCell`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedLine {
    a: CPoint,
    b: CPoint,
    d: CycNum,
}

impl OrientedLine {
    pub fn new(a: CPoint, b: CPoint) -> Result<Self> {
        let d = &b - &a;
        if d.is_zero() {
            return Err(Error::DegenerateLine);
        }
        Ok(OrientedLine { a, b, d })
    }

    /// Line through `a` with direction `d`.
    pub fn through(a: CPoint, d: CycNum) -> Result<Self> {
        let b = &a + &d;
        Self::new(a, b)
    }

    #[must_use]
    pub fn a(&self) -> &CPoint {
        &self.a
    }

    #[must_use]
    pub fn b(&self) -> &CPoint {
        &self.b
    }

    #[must_use]
    pub fn direction(&self) -> &CycNum {
        &self.d
    }

    #[must_use]
    pub fn reversed(&self) -> Self {
        OrientedLine { a: self.b.clone(), b: self.a.clone(), d: -&self.d }
    }

    pub fn side(&self, p: &CPoint) -> Result<Side> {
        Ok(Side::from_ordering(cross_sign(&self.d, &(p - &self.a))?))
    }

    /// Whether both lines bound the same open half-plane.
    pub fn same_half_plane(&self, other: &Self) -> Result<bool> {
        let m = &self.d.conj() * &other.d;
        if m.im_sign()? != Ordering::Equal || m.re_sign()? != Ordering::Greater {
            return Ok(false);
        }
        Ok(self.side(&other.a)? == Side::On)
    }

    /// Same point set, opposite orientation.
    pub fn opposite_of(&self, other: &Self) -> Result<bool> {
        self.same_half_plane(&other.reversed())
    }

    /// Point `a + t * d` for real `t`.
    #[must_use]
    pub fn at(&self, t: &CycNum) -> CPoint {
        &self.a + &(t * &self.d)
    }

    /// Intersection point with a non-parallel line.
    pub fn intersection(&self, other: &Self) -> Result<CPoint> {
        let den = cross_imag(&other.d, &self.d);
        if den.is_zero() {
            return Err(Error::InvalidParameter("parallel lines".into()));
        }
        let num = cross_imag(&other.d, &(&other.a - &self.a));
        Ok(self.at(&num.checked_div(&den)?))
    }
}

/// `side_of_line(a, b, p)` as a free function.
pub fn side_of_line(a: &CPoint, b: &CPoint, p: &CPoint) -> Result<Side> {
    OrientedLine::new(a.clone(), b.clone())?.side(p)
}

/// Length of the segment `pq` and the unit vector along it, when both lie in
/// the cyclotomic field. The unit is searched among the roots of unity of
/// the field, then of the field with doubled conductor.
pub fn segment_length(p: &CPoint, q: &CPoint) -> Result<(CycNum, CycNum)> {
    let d = q - p;
    if d.is_zero() {
        return Err(Error::DegenerateLine);
    }
    let n0 = d.conductor();
    for n in [n0, 2 * n0] {
        if n > crate::cyclotomic::MAX_CONDUCTOR {
            break;
        }
        let dn = d.embed(n)?;
        for j in 0..i64::from(n) {
            let l = dn.mul_root(-j);
            if l.is_real() && l.re_sign()? == Ordering::Greater {
                return Ok((l, CycNum::root_of_unity(n, j)));
            }
        }
    }
    Err(Error::LengthNotInField)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_and_right() {
        let z0 = CycNum::zero(4);
        let one = CycNum::one(4);
        let i = CycNum::i();
        assert_eq!(side_of_line(&z0, &one, &i), Ok(Side::Left));
        let two = CycNum::from_int(4, 2);
        assert_eq!(side_of_line(&two, &-&i, &one), Ok(Side::Right));
        assert_eq!(side_of_line(&z0, &one, &two), Ok(Side::On));
    }

    #[test]
    fn lengths() {
        let p = CycNum::zero(8);
        let q = &CycNum::from_int(8, 3) + &CycNum::root_of_unity(8, 2).scale(&num_rational::BigRational::from_integer(3.into()));
        let (l, u) = segment_length(&p, &q).unwrap();
        assert_eq!(&l * &l, CycNum::from_int(8, 18));
        assert_eq!(u, CycNum::root_of_unity(8, 1));
        // sqrt 2 needs the doubled conductor, sqrt 5 is out of reach
        let (l, _) = segment_length(&CycNum::zero(4), &(&CycNum::one(4) + &CycNum::i())).unwrap();
        assert_eq!(l.conductor(), 8);
        let r = segment_length(&CycNum::zero(4), &(&CycNum::from_int(4, 2) + &CycNum::i()));
        assert_eq!(r, Err(Error::LengthNotInField));
    }

    #[test]
    fn intersections() {
        let l1 = OrientedLine::new(CycNum::zero(4), CycNum::one(4)).unwrap();
        let l2 = OrientedLine::new(CycNum::from_int(4, 2), &CycNum::from_int(4, 2) + &CycNum::i()).unwrap();
        assert_eq!(l1.intersection(&l2), Ok(CycNum::from_int(4, 2)));
        assert!(l1.same_half_plane(&OrientedLine::new(CycNum::from_int(4, 5), CycNum::from_int(4, 7)).unwrap()).unwrap());
        assert!(l1.opposite_of(&OrientedLine::new(CycNum::one(4), CycNum::zero(4)).unwrap()).unwrap());
    }
}
