//! Boundary analysis of a nous pair on a bounded convex space: the
//! double-jump test, the first return of `w ∘ v` to the boundary, its
//! rotation number and SAF invariant, and the resulting non-periodicity
//! certificate. Also the relation check for the periodic graph.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_integer::Integer;
use num_rational::BigRational;

use crate::cyclotomic::CycNum;
use crate::engine::{NousPair, PiecewiseIsometry};
use crate::error::{Error, Result};
use crate::geometry::{ConvexCell, Isometry};
use crate::graph::{ArcKind, BoundaryGraph};
use crate::iet::FlipIet;
use crate::saf::{saf_invariant, SafBasis, SafInvariant};

/// The graph of a map together with its two boundary involutions.
#[derive(Clone, Debug)]
pub struct BoundarySystem {
    pub graph: BoundaryGraph,
    /// Reflection of each atom from the `v` factor.
    pub v_isos: Vec<Isometry>,
    pub v_star: FlipIet,
    pub w_star: FlipIet,
}

fn single_space(map: &PiecewiseIsometry) -> Result<ConvexCell> {
    match map.ambient() {
        [c] if c.is_bounded() => Ok(c.clone()),
        _ => Err(Error::InvalidParameter("space must be one bounded convex cell".into())),
    }
}

fn u_isometry(pair: &NousPair, space: &ConvexCell) -> Result<Isometry> {
    let mut found: Option<Isometry> = None;
    for a in pair.u.atoms() {
        if a.domain.intersect(space)?.is_some() {
            match &found {
                Some(g) if *g != a.iso => {
                    return Err(Error::InvalidParameter("u is not one isometry on the space".into()))
                }
                _ => found = Some(a.iso.clone()),
            }
        }
    }
    found.ok_or(Error::OutsideDomain)
}

fn v_isometries(map: &PiecewiseIsometry, pair: &NousPair) -> Result<Vec<Isometry>> {
    map.atoms()
        .iter()
        .map(|a| {
            for b in pair.v.atoms() {
                if a.domain.subset_of(&b.domain)? {
                    return Ok(b.iso.clone());
                }
            }
            Err(Error::InvalidParameter("an atom of f lies in no atom of v".into()))
        })
        .collect()
}

impl BoundarySystem {
    pub fn new(map: &PiecewiseIsometry, pair: &NousPair) -> Result<Self> {
        let space = single_space(map)?;
        let u = u_isometry(pair, &space)?;
        let cells: Vec<ConvexCell> = map.atoms().iter().map(|a| a.domain.clone()).collect();
        let graph = BoundaryGraph::build(&cells, &space, &u)?;
        let v_isos = v_isometries(map, pair)?;
        let v_star = graph.cellwise(&v_isos)?;
        let w_star = graph.w_map()?;
        Ok(BoundarySystem { graph, v_isos, v_star, w_star })
    }

    /// Index of a shared arc whose image under its cell's reflection is not
    /// contained in the boundary of the space, or `None` when every shared
    /// arc lands on the boundary.
    pub fn double_jump_violation(&self) -> Result<Option<usize>> {
        let half = BigRational::new(1.into(), 2.into());
        for (k, a) in self.graph.arcs.iter().enumerate() {
            if a.kind == ArcKind::Boundary {
                continue;
            }
            let g = &self.v_isos[a.comp];
            let (p, q) = (g.apply(&a.p), g.apply(&a.q));
            let m = (&p + &q).scale(&half);
            // a chord of a convex polygon whose ends and midpoint lie on
            // the boundary runs along one edge
            for z in [&p, &q, &m] {
                if self.graph.outer.locate(z)?.is_none() {
                    return Ok(Some(k));
                }
            }
        }
        Ok(None)
    }

    /// First return of `w ∘ v` from the boundary arcs to themselves, on the
    /// graph.
    pub fn wv_return_graph(&self, budget: usize) -> Result<FlipIet> {
        let t = FlipIet::compose(&self.w_star, &self.v_star)?;
        let bd = self.graph.boundary_identity();
        let inner = self.graph.interior_identity();
        let mut current = bd.clone();
        let mut landed = FlipIet::identity_on(self.graph.lengths(), &[]);
        for _ in 0..budget {
            current = FlipIet::compose(&t, &current)?;
            landed = landed.union(&FlipIet::compose(&bd, &current)?);
            current = FlipIet::compose(&inner, &current)?;
            if current.branches().is_empty() {
                return Ok(landed);
            }
        }
        Err(Error::BudgetExhausted(budget))
    }

    /// The return map transferred to the boundary loop of the space.
    pub fn wv_return(&self, budget: usize) -> Result<FlipIet> {
        let landed = self.wv_return_graph(budget)?;
        let arcs = self.graph.arc_identity();
        let split = FlipIet::compose(&arcs, &FlipIet::compose(&landed, &arcs)?)?;
        self.graph.project(&split)?.canonical()
    }

    /// Checks `R = w ∘ s ∘ v` on the graph, where `R` is the boundary return
    /// extended by the identity on shared arcs and `s` swaps each shared arc
    /// `I` with `v(w(I))`.
    pub fn factorization_holds(&self, budget: usize) -> Result<bool> {
        let landed = self.wv_return_graph(budget)?;
        let r = landed.union(&self.graph.interior_identity());
        let inner = self.graph.interior_identity();
        let vw = FlipIet::compose(&self.v_star, &FlipIet::compose(&self.w_star, &inner)?)?;
        let mut removed: Vec<(usize, CycNum, CycNum)> = Vec::new();
        for b in vw.branches() {
            removed.push((b.dst_comp, b.dst_start.clone(), b.len.clone()));
        }
        let rest = complement_of_boundary(&self.graph, &removed)?;
        let s = vw.union(&vw.inverse()).union(&rest);
        let rhs = FlipIet::compose(&self.w_star, &FlipIet::compose(&s, &self.v_star)?)?;
        r.equals_mod_finite(&rhs)
    }
}

/// Identity on the boundary arcs minus the given intervals.
fn complement_of_boundary(graph: &BoundaryGraph, removed: &[(usize, CycNum, CycNum)]) -> Result<FlipIet> {
    let cmp = |a: &CycNum, b: &CycNum| (a - b).re_sign();
    let mut keep = Vec::new();
    for a in graph.arcs.iter().filter(|a| a.kind == ArcKind::Boundary) {
        let mut pieces = alloc::vec![(a.start.clone(), &a.start + &a.len)];
        for (c, s, l) in removed {
            if *c != a.comp {
                continue;
            }
            let e = s + l;
            let mut next = Vec::new();
            for (x, y) in pieces {
                // keep [x, min(y, s)) and [max(x, e), y)
                let left_end = if cmp(&y, s)? == Ordering::Less { y.clone() } else { s.clone() };
                if cmp(&x, &left_end)? == Ordering::Less {
                    next.push((x.clone(), left_end));
                }
                let right_start = if cmp(&x, &e)? == Ordering::Greater { x.clone() } else { e.clone() };
                if cmp(&right_start, &y)? == Ordering::Less {
                    next.push((right_start, y));
                }
            }
            pieces = next;
        }
        for (x, y) in pieces {
            let len = &y - &x;
            keep.push((a.comp, x, len));
        }
    }
    Ok(FlipIet::identity_on(graph.lengths(), &keep))
}

/// The rotation number `alpha` in `(-1/2, 1/2]` when `g` is a rotation of
/// its single circle, normalised by the circumference.
pub fn recognize_rotation(g: &FlipIet) -> Result<Option<CycNum>> {
    let [l] = g.lengths() else {
        return Ok(None);
    };
    if g.has_flips() || g.branches().is_empty() || g.domain_measure() != *l {
        return Ok(None);
    }
    let mut shift: Option<CycNum> = None;
    for b in g.branches() {
        let mut d = &b.dst_start - &b.src_start;
        if d.re_sign()? == Ordering::Less {
            d = &d + l;
        }
        match &shift {
            Some(s) if *s != d => return Ok(None),
            _ => shift = Some(d),
        }
    }
    let alpha = shift.expect("at least one branch").checked_div(l)?;
    let half = CycNum::from_ratio(1, 1, 2);
    Ok(Some(if (&alpha - &half).re_sign()? == Ordering::Greater { &alpha - &CycNum::one(1) } else { alpha }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// The boundary invariant is nonzero, so the map is not periodic.
    NotPeriodic,
    /// The double-jump condition holds but the invariant vanishes.
    Inconclusive,
    /// The double-jump condition fails.
    Inapplicable,
}

impl Verdict {
    #[must_use]
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::NotPeriodic => "NOT-PERIODIC",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Inapplicable => "INAPPLICABLE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub verdict: Verdict,
    pub double_jump: bool,
    /// Shared arc violating the double-jump condition, if any.
    pub witness_arc: Option<usize>,
    pub perimeter: Option<CycNum>,
    /// Boundary return map on the unit circle.
    pub return_map: Option<FlipIet>,
    pub alpha: Option<CycNum>,
    pub basis: Option<SafBasis>,
    pub saf: Option<SafInvariant>,
    /// Facts the verdict rests on, in plain words.
    pub reasons: Vec<String>,
}

/// Conductor of the basis used for SAF coordinates: twice the conductor of
/// the map data, enlarged to hold every length that occurs.
fn basis_conductor(map: &PiecewiseIsometry, g: &FlipIet) -> u32 {
    let mut m0 = 1u32;
    for a in map.atoms() {
        m0 = m0.lcm(&a.iso.spectral().conductor()).lcm(&a.iso.shift().conductor());
    }
    let mut m = 2 * m0;
    for b in g.branches() {
        for x in [&b.src_start, &b.dst_start, &b.len] {
            m = m.lcm(&x.conductor());
        }
    }
    for l in g.lengths() {
        m = m.lcm(&l.conductor());
    }
    m
}

/// Runs the boundary test on `f = u ∘ v`.
pub fn certify_nonperiodic(map: &PiecewiseIsometry, pair: &NousPair) -> Result<Certificate> {
    let sys = BoundarySystem::new(map, pair)?;
    let mut cert = Certificate {
        verdict: Verdict::Inapplicable,
        double_jump: false,
        witness_arc: None,
        perimeter: Some(sys.graph.outer.perimeter().clone()),
        return_map: None,
        alpha: None,
        basis: None,
        saf: None,
        reasons: Vec::new(),
    };
    if let Some(k) = sys.double_jump_violation()? {
        cert.witness_arc = Some(k);
        cert.reasons.push("double-jump condition fails".into());
        return Ok(cert);
    }
    cert.double_jump = true;
    cert.reasons.push("double-jump condition holds".into());
    let r = sys.wv_return(4)?;
    let scale = sys.graph.outer.perimeter().inv()?;
    let unit = r.scaled(&scale).canonical()?;
    cert.alpha = recognize_rotation(&unit)?;
    let basis = SafBasis::real_cyclotomic(basis_conductor(map, &unit))?;
    let inv = saf_invariant(&unit, &basis)?;
    cert.verdict = if inv.is_zero() { Verdict::Inconclusive } else { Verdict::NotPeriodic };
    cert.reasons.push(if inv.is_zero() {
        "SAF invariant of the boundary return map vanishes".into()
    } else {
        "SAF invariant of the boundary return map is nonzero; periodic maps have zero invariant".into()
    });
    cert.return_map = Some(unit);
    cert.basis = Some(basis);
    cert.saf = Some(inv);
    Ok(cert)
}

/// Splits the domain of `f` into cells of common itinerary of length
/// `depth`, returning each cell with the composed isometry.
pub fn itinerary_cells(map: &PiecewiseIsometry, depth: usize) -> Result<Vec<(ConvexCell, Isometry)>> {
    let mut cells: Vec<(ConvexCell, Isometry, ConvexCell)> =
        map.atoms().iter().map(|a| (a.domain.clone(), a.iso.clone(), a.codomain.clone())).collect();
    for _ in 1..depth {
        let mut next = Vec::new();
        for (_, g, img) in cells {
            let back = g.inverse();
            for a in map.atoms() {
                if let Some(y) = img.intersect(&a.domain)? {
                    next.push((y.image(&back)?, a.iso.compose(&g), y.image(&a.iso)?));
                }
            }
        }
        cells = next;
    }
    Ok(cells.into_iter().map(|(c, g, _)| (c, g)).collect())
}

#[derive(Clone, Debug)]
pub struct HeckeReport {
    pub period: usize,
    pub cells: usize,
    /// Each relation with whether it holds.
    pub relations: Vec<(&'static str, bool)>,
    pub inv_wv_zero: bool,
}

impl HeckeReport {
    #[must_use]
    pub fn all_hold(&self) -> bool {
        self.inv_wv_zero && self.relations.iter().all(|r| r.1)
    }
}

/// Builds the graph of the cells of `dom(f^p)` and checks
/// `u^2 = v^2 = w^2 = (uw)^2 = (uv)^p = 1` and `Inv(w v) = 0` for the
/// induced maps.
pub fn hecke_relations_check(map: &PiecewiseIsometry, pair: &NousPair, p: usize) -> Result<HeckeReport> {
    if p == 0 {
        return Err(Error::InvalidParameter("period must be positive".into()));
    }
    let space = single_space(map)?;
    let u = u_isometry(pair, &space)?;
    let cells = itinerary_cells(map, p)?;
    let mut relations = Vec::new();
    relations.push(("f^p = 1 on every cell", cells.iter().all(|c| c.1.is_identity())));
    let domains: Vec<ConvexCell> = cells.iter().map(|c| c.0.clone()).collect();
    let graph = BoundaryGraph::build(&domains, &space, &u)?;
    let mut v_isos = Vec::with_capacity(domains.len());
    for c in &domains {
        let g = crate::try_find(pair.v.atoms(), |b| c.subset_of(&b.domain))?
            .ok_or_else(|| Error::InvalidParameter("a cell lies in no atom of v".into()))?;
        v_isos.push(g.iso.clone());
    }
    let ub = graph.cellwise(&alloc::vec![u.clone(); domains.len()])?;
    let vb = graph.cellwise(&v_isos)?;
    let wb = graph.w_map()?;
    let id = FlipIet::identity(graph.lengths());
    let is_id = |g: &FlipIet| g.equals_mod_finite(&id);
    relations.push(("u^2 = 1", is_id(&FlipIet::compose(&ub, &ub)?)?));
    relations.push(("v^2 = 1", is_id(&FlipIet::compose(&vb, &vb)?)?));
    relations.push(("w^2 = 1", is_id(&FlipIet::compose(&wb, &wb)?)?));
    let uw = FlipIet::compose(&ub, &wb)?;
    relations.push(("(uw)^2 = 1", is_id(&FlipIet::compose(&uw, &uw)?)?));
    let uv = FlipIet::compose(&ub, &vb)?;
    let mut pw = uv.clone();
    for _ in 1..p {
        pw = FlipIet::compose(&uv, &pw)?;
    }
    relations.push(("(uv)^p = 1", is_id(&pw)?));
    let wv = FlipIet::compose(&wb, &vb)?;
    let mut m = 1u32;
    for l in graph.lengths() {
        m = m.lcm(&l.conductor());
    }
    let basis = SafBasis::real_cyclotomic(2 * m)?;
    let inv_wv_zero = saf_invariant(&wv, &basis)?.is_zero();
    Ok(HeckeReport { period: p, cells: domains.len(), relations, inv_wv_zero })
}
