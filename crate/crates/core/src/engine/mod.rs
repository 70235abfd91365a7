//! Piecewise isometries, nous pairs and the exact dynamics built on them.

mod orbit;
mod refine;
mod returns;

use alloc::format;
use alloc::vec::Vec;

use crate::geometry::{covered_by, CPoint, ConvexCell, Isometry, PartialIsometry};
use crate::error::{Error, Result};

pub use orbit::{orbit, OrbitReport, OrbitStatus};
pub use refine::{detect_periodic_cells, refine_pieces, verify_periodic_cell, PeriodicCell, PeriodicScan, Piece, PieceTree};
pub use returns::{first_return, ReturnMap};

/// A map defined on finitely many disjoint open convex atoms, acting on each
/// by an isometry. The closures of the ambient cells cover the closure of the
/// space the map lives on.
#[derive(Clone, Debug)]
pub struct PiecewiseIsometry {
    ambient: Vec<ConvexCell>,
    atoms: Vec<PartialIsometry>,
}

impl PiecewiseIsometry {
    /// Checks that the domains are pairwise disjoint and lie in the ambient
    /// space.
    pub fn new(ambient: Vec<ConvexCell>, atoms: Vec<PartialIsometry>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[..i] {
                if a.domain.intersect(&b.domain)?.is_some() {
                    return Err(Error::Invariant(format!("atom {i} overlaps an earlier atom")));
                }
            }
            if !covered_by(&a.domain, &ambient)? {
                return Err(Error::Invariant(format!("atom {i} leaves the ambient space")));
            }
        }
        Ok(PiecewiseIsometry { ambient, atoms })
    }

    /// Builds the map from domains and isometries.
    pub fn from_pieces(ambient: Vec<ConvexCell>, pieces: Vec<(ConvexCell, Isometry)>) -> Result<Self> {
        let atoms = pieces
            .into_iter()
            .map(|(d, g)| PartialIsometry::new(d, g))
            .collect::<Result<_>>()?;
        Self::new(ambient, atoms)
    }

    pub(crate) fn new_unchecked(ambient: Vec<ConvexCell>, atoms: Vec<PartialIsometry>) -> Self {
        PiecewiseIsometry { ambient, atoms }
    }

    #[must_use]
    pub fn ambient(&self) -> &[ConvexCell] {
        &self.ambient
    }

    #[must_use]
    pub fn atoms(&self) -> &[PartialIsometry] {
        &self.atoms
    }

    /// Index of the atom whose open domain contains `p`.
    pub fn atom_index(&self, p: &CPoint) -> Result<Option<usize>> {
        for (i, a) in self.atoms.iter().enumerate() {
            if a.domain.contains(p)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// `f(p)`, or `None` off the domain.
    pub fn evaluate(&self, p: &CPoint) -> Result<Option<CPoint>> {
        Ok(self.atom_index(p)?.map(|i| self.atoms[i].iso.apply(p)))
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        PiecewiseIsometry {
            ambient: self.ambient.clone(),
            atoms: self.atoms.iter().map(PartialIsometry::inverse).collect(),
        }
    }

    /// Whether the images are pairwise disjoint.
    pub fn is_injective(&self) -> Result<bool> {
        for (i, a) in self.atoms.iter().enumerate() {
            for b in &self.atoms[..i] {
                if a.codomain.intersect(&b.codomain)?.is_some() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether every image lies in the ambient space.
    pub fn is_self_map(&self) -> Result<bool> {
        for a in &self.atoms {
            if !covered_by(&a.codomain, &self.ambient)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the domains cover the ambient space up to a null set.
    pub fn has_full_domain(&self) -> Result<bool> {
        let doms: Vec<ConvexCell> = self.atoms.iter().map(|a| a.domain.clone()).collect();
        for c in &self.ambient {
            if !covered_by(c, &doms)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction to the atoms with the given indices, on a new ambient space.
    pub fn restrict(&self, ambient: Vec<ConvexCell>, keep: &[usize]) -> Result<Self> {
        let atoms = keep.iter().map(|&i| self.atoms[i].clone()).collect();
        let r = Self::new(ambient, atoms)?;
        if !r.is_self_map()? {
            return Err(Error::Invariant("restriction is not invariant".into()));
        }
        Ok(r)
    }

    /// `outer ∘ inner` as a piecewise map on the atoms of `inner`, split along
    /// the atoms of `outer`. Parts of `inner`'s images outside the domain of
    /// `outer` are dropped.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        let mut atoms = Vec::new();
        for a in &inner.atoms {
            let inv = a.iso.inverse();
            for b in &outer.atoms {
                if let Some(y) = a.codomain.intersect(&b.domain)? {
                    let dom = y.image(&inv)?;
                    atoms.push(PartialIsometry::new(dom, b.iso.compose(&a.iso))?);
                }
            }
        }
        Ok(PiecewiseIsometry { ambient: inner.ambient.clone(), atoms })
    }

    /// Checks that `self` and `other` agree as maps up to null sets: the
    /// domains cover each other and the isometries match on overlaps.
    /// Returns the index of an offending atom of `self` on failure.
    pub fn agrees_with(&self, other: &Self) -> Result<core::result::Result<(), usize>> {
        let mine: Vec<ConvexCell> = self.atoms.iter().map(|a| a.domain.clone()).collect();
        let theirs: Vec<ConvexCell> = other.atoms.iter().map(|a| a.domain.clone()).collect();
        for (i, a) in self.atoms.iter().enumerate() {
            for b in &other.atoms {
                if a.domain.intersect(&b.domain)?.is_some() && a.iso != b.iso {
                    return Ok(Err(i));
                }
            }
            if !covered_by(&a.domain, &theirs)? {
                return Ok(Err(i));
            }
        }
        for b in &other.atoms {
            if !covered_by(&b.domain, &mine)? {
                return Ok(Err(self.atoms.len()));
            }
        }
        Ok(Ok(()))
    }

    /// Checks that `self` is the identity wherever it is defined.
    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.atoms.iter().all(|a| a.iso.is_identity())
    }
}

/// Whether `u` preserves the space of its partner map or swaps it with a
/// disjoint copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NousKind {
    Symmetric,
    Disjoint,
}

/// A factorisation `f = u ∘ v` into piecewise involutions, with `u` a single
/// orientation-reversing isometry on a space containing the domain of `f`.
#[derive(Clone, Debug)]
pub struct NousPair {
    pub u: PiecewiseIsometry,
    pub v: PiecewiseIsometry,
    pub kind: NousKind,
}

impl NousPair {
    /// `u ∘ v`, with the ambient space of `v`'s domain restricted to `ambient`.
    pub fn to_map(&self, ambient: Vec<ConvexCell>) -> Result<PiecewiseIsometry> {
        let f = PiecewiseIsometry::compose(&self.u, &self.v)?;
        Ok(PiecewiseIsometry { ambient, atoms: f.atoms })
    }

    /// Verifies `u^2 = id`, `v^2 = id`, that `u` is defined on the space of
    /// `f`, the symmetric or disjoint placement of `u(Δ)`, and `f = u ∘ v`.
    pub fn check(&self, f: &PiecewiseIsometry) -> Result<()> {
        for (name, g) in [("u^2 = id", &self.u), ("v^2 = id", &self.v)] {
            let sq = PiecewiseIsometry::compose(g, g)?;
            if let Some(i) = sq.atoms.iter().position(|a| !a.iso.is_identity()) {
                return Err(Error::NousViolation { identity: name, atom: i });
            }
            // every image must land back in the domain
            let doms: Vec<ConvexCell> = g.atoms.iter().map(|a| a.domain.clone()).collect();
            for (i, a) in g.atoms.iter().enumerate() {
                if !covered_by(&a.codomain, &doms)? {
                    return Err(Error::NousViolation { identity: name, atom: i });
                }
            }
        }
        let udoms: Vec<ConvexCell> = self.u.atoms.iter().map(|a| a.domain.clone()).collect();
        for (i, c) in f.ambient.iter().enumerate() {
            if !covered_by(c, &udoms)? {
                return Err(Error::NousViolation { identity: "space inside dom(u)", atom: i });
            }
        }
        if let Some(i) = self.u.atoms.iter().position(|a| !a.iso.is_reversing()) {
            return Err(Error::NousViolation { identity: "u reverses orientation", atom: i });
        }
        for (i, c) in f.ambient.iter().enumerate() {
            for a in &self.u.atoms {
                let Some(part) = c.intersect(&a.domain)? else { continue };
                let img = part.image(&a.iso)?;
                let ok = match self.kind {
                    NousKind::Symmetric => covered_by(&img, &f.ambient)?,
                    NousKind::Disjoint => {
                        let mut clear = true;
                        for d in &f.ambient {
                            if img.intersect(d)?.is_some() {
                                clear = false;
                            }
                        }
                        clear
                    }
                };
                if !ok {
                    return Err(Error::NousViolation { identity: "placement of u(space)", atom: i });
                }
            }
        }
        let uv = PiecewiseIsometry::compose(&self.u, &self.v)?;
        let fdoms: Vec<ConvexCell> = f.atoms.iter().map(|a| a.domain.clone()).collect();
        // restrict u ∘ v to dom(f) before comparing
        let mut restricted = Vec::new();
        for a in &uv.atoms {
            for d in &fdoms {
                if let Some(c) = a.domain.intersect(d)? {
                    restricted.push(PartialIsometry::new(c, a.iso.clone())?);
                }
            }
        }
        let uv = PiecewiseIsometry { ambient: f.ambient.clone(), atoms: restricted };
        if let Err(i) = f.agrees_with(&uv)? {
            return Err(Error::NousViolation { identity: "f = u v", atom: i });
        }
        Ok(())
    }

    /// The tautological pair: `u` is the reflection in a vertical line to the
    /// right of a bounded space, `v = u ∘ f` on the domain of `f` and its
    /// inverse on the mirror copy.
    pub fn disjoint_from(f: &PiecewiseIsometry) -> Result<Self> {
        let mut max_re: Option<num_rational::BigRational> = None;
        let mut n = 1;
        for c in &f.ambient {
            for v in c.vertices()? {
                n = num_integer::Integer::lcm(&n, &v.conductor());
                let x = v.re_interval(64).hi;
                if max_re.as_ref().is_none_or(|m| x > *m) {
                    max_re = Some(x);
                }
            }
        }
        let c = max_re.ok_or(Error::Unbounded)?.ceil() + num_rational::BigRational::from_integer(1.into());
        let c = crate::CycNum::from_rational(n, &c);
        // z -> 2c - conj(z)
        let u_iso = Isometry::new(true, crate::CycNum::from_int(n, -1), &c + &c)?;
        let mut u_atoms = Vec::new();
        for cell in &f.ambient {
            u_atoms.push(PartialIsometry::new(cell.clone(), u_iso.clone())?);
        }
        for cell in &f.ambient {
            u_atoms.push(PartialIsometry::new(cell.image(&u_iso)?, u_iso.clone())?);
        }
        let mut ambient_u: Vec<ConvexCell> = f.ambient.clone();
        for cell in &f.ambient {
            ambient_u.push(cell.image(&u_iso)?);
        }
        let mut v_atoms = Vec::new();
        for a in &f.atoms {
            v_atoms.push(PartialIsometry::new(a.domain.clone(), u_iso.compose(&a.iso))?);
        }
        for a in &f.atoms {
            let g = u_iso.compose(&a.iso);
            v_atoms.push(PartialIsometry::new(a.domain.image(&g)?, g.inverse())?);
        }
        Ok(NousPair {
            u: PiecewiseIsometry { ambient: ambient_u.clone(), atoms: u_atoms },
            v: PiecewiseIsometry { ambient: ambient_u, atoms: v_atoms },
            kind: NousKind::Disjoint,
        })
    }
}

/// The union of two cells when its closure is convex.
pub fn convex_union_public(a: &ConvexCell, b: &ConvexCell) -> Result<Option<ConvexCell>> {
    returns::convex_union(a, b)
}
