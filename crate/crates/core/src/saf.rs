//! The Sah-Arnoux-Fathi invariant `sum lambda_i ⊗ t_i` of a flip-free
//! interval exchange, in coordinates over a rational basis of a real
//! subfield.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::iet::FlipIet;

/// A rational basis of the real subfield of `Q(zeta_m)`: the powers
/// `1, c, ..., c^(d-1)` of `c = 2 cos(2 pi / m)`, `d = phi(m) / 2`.
#[derive(Clone, Debug)]
pub struct SafBasis {
    conductor: u32,
    elements: Vec<CycNum>,
}

impl SafBasis {
    pub fn real_cyclotomic(m: u32) -> Result<Self> {
        if m < 3 {
            return Ok(SafBasis { conductor: m.max(1), elements: vec![CycNum::one(1)] });
        }
        let z = CycNum::root_of_unity(m, 1);
        let c = &z + &z.conj();
        let d = z.degree() / 2;
        let mut elements = Vec::with_capacity(d);
        let mut p = CycNum::one(m);
        for _ in 0..d {
            elements.push(p.clone());
            p = &p * &c;
        }
        Ok(SafBasis { conductor: m, elements })
    }

    #[must_use]
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    #[must_use]
    pub fn elements(&self) -> &[CycNum] {
        &self.elements
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn coordinates(&self, x: &CycNum) -> Result<Vec<BigRational>> {
        if x.is_zero() {
            return Ok(vec![BigRational::zero(); self.dim()]);
        }
        if let Some(q) = x.to_rational() {
            let mut v = vec![BigRational::zero(); self.dim()];
            v[0] = q;
            return Ok(v);
        }
        x.rational_coordinates(&self.elements)
    }
}

/// Coordinates `M[a][b]` of an element of `R ⊗_Q R` in the basis
/// `e_a ⊗ e_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafInvariant {
    pub matrix: Vec<Vec<BigRational>>,
}

impl SafInvariant {
    #[must_use]
    pub fn zero(dim: usize) -> Self {
        SafInvariant { matrix: vec![vec![BigRational::zero(); dim]; dim] }
    }

    /// `x ⊗ y - y ⊗ x`.
    pub fn wedge(basis: &SafBasis, x: &CycNum, y: &CycNum) -> Result<Self> {
        let cx = basis.coordinates(x)?;
        let cy = basis.coordinates(y)?;
        let d = basis.dim();
        let mut m = Self::zero(d);
        for a in 0..d {
            for b in 0..d {
                m.matrix[a][b] = &cx[a] * &cy[b] - &cy[a] * &cx[b];
            }
        }
        Ok(m)
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    #[must_use]
    pub fn is_antisymmetric(&self) -> bool {
        let d = self.matrix.len();
        (0..d).all(|a| (0..d).all(|b| self.matrix[a][b] == -self.matrix[b][a].clone()))
    }

    #[must_use]
    pub fn add(&self, other: &Self) -> Self {
        SafInvariant {
            matrix: self
                .matrix
                .iter()
                .zip(&other.matrix)
                .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

/// `sum_i lambda_i ⊗ t_i` over the branches, where `t_i` is the translation
/// after laying the components end to end in index order.
pub fn saf_invariant(g: &FlipIet, basis: &SafBasis) -> Result<SafInvariant> {
    if g.has_flips() {
        return Err(Error::Flips);
    }
    let mut offsets = Vec::with_capacity(g.lengths().len());
    let mut acc = CycNum::zero(1);
    for l in g.lengths() {
        offsets.push(acc.clone());
        acc = &acc + l;
    }
    let mut m = SafInvariant::zero(basis.dim());
    for b in g.branches() {
        let t = &(&offsets[b.dst_comp] + &b.dst_start) - &(&offsets[b.src_comp] + &b.src_start);
        if t.is_zero() {
            continue;
        }
        let cl = basis.coordinates(&b.len)?;
        let ct = basis.coordinates(&t)?;
        for (row, x) in m.matrix.iter_mut().zip(&cl) {
            if x.is_zero() {
                continue;
            }
            for (entry, y) in row.iter_mut().zip(&ct) {
                if !y.is_zero() {
                    *entry += x * y;
                }
            }
        }
    }
    Ok(m)
}
