//! Dual billiards outside regular polygons and the chain of induced maps
//! leading to the two triangle maps `f2` and `f3`.
//!
//! Everything lives in `Q(zeta_2N)` with `zeta = exp(i * k * pi / N)`,
//! `theta = k * pi / N`; `k = 1` is the standard case. The polygon has
//! vertices `a_j = zeta^j`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::BigRational;

use crate::cyclotomic::CycNum;
use crate::engine::{first_return, NousKind, NousPair, PiecewiseIsometry};
use crate::error::{Error, Result};
use crate::geometry::{covered_by, segment_length, CPoint, ConvexCell, Isometry, OrientedLine, PartialIsometry};

/// Polygon size `n` (the regular `2N`-gon has `n = 2N`) and the power of the
/// primitive root used as `zeta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BilliardParams {
    n: u32,
    power: u32,
}

impl BilliardParams {
    /// `N >= 3` with the standard root `exp(i pi / N)`.
    pub fn new(n: u32) -> Result<Self> {
        Self::with_power(n, 1)
    }

    /// `zeta = exp(i k pi / N)` for `0 < k < N` coprime to `2N`.
    pub fn with_power(n: u32, k: u32) -> Result<Self> {
        if !(3..=1000).contains(&n) {
            return Err(Error::InvalidParameter(format!("N = {n} must lie in 3..=1000")));
        }
        if k == 0 || k >= n || k.gcd(&(2 * n)) != 1 {
            return Err(Error::InvalidParameter(format!("power {k} must be coprime to {} and below {n}", 2 * n)));
        }
        Ok(BilliardParams { n, power: k })
    }

    #[must_use]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[must_use]
    pub fn power(&self) -> u32 {
        self.power
    }

    /// Conductor `2N` of the field the constructions live in.
    #[must_use]
    pub fn conductor(&self) -> u32 {
        2 * self.n
    }

    /// `zeta^j`.
    #[must_use]
    pub fn zeta(&self, j: i64) -> CycNum {
        CycNum::root_of_unity(self.conductor(), j * i64::from(self.power))
    }

    #[must_use]
    pub fn int(&self, v: i64) -> CycNum {
        CycNum::from_int(self.conductor(), v)
    }

    /// `cos(j theta)`.
    #[must_use]
    pub fn cos(&self, j: i64) -> CycNum {
        (&self.zeta(j) + &self.zeta(-j)).scale(&half())
    }

    /// `sin(j theta / 2)`, in conductor `4N`.
    #[must_use]
    pub fn sin_half(&self, j: i64) -> CycNum {
        let m = 4 * self.n;
        let e = j * i64::from(self.power);
        let w = &CycNum::root_of_unity(m, e) - &CycNum::root_of_unity(m, -e);
        // w / (2i) = -i w / 2
        (&CycNum::root_of_unity(m, -i64::from(self.n)) * &w).scale(&half())
    }

    /// `cos(j theta / 2)`, in conductor `4N`.
    #[must_use]
    pub fn cos_half(&self, j: i64) -> CycNum {
        let m = 4 * self.n;
        let e = j * i64::from(self.power);
        (&CycNum::root_of_unity(m, e) + &CycNum::root_of_unity(m, -e)).scale(&half())
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn line(a: &CPoint, b: &CPoint) -> Result<OrientedLine> {
    OrientedLine::new(a.clone(), b.clone())
}

/// The dual billiard map outside the regular `n`-gon with vertices
/// `zeta_n^j`. On the cone `V_i` it is the point reflection in `a_i`; `V_i`
/// is bounded by the rays from `a_i` in directions `a_i - a_{i-1}` and
/// `a_{i+1} - a_i`.
pub fn dual_billiard(n: u32) -> Result<PiecewiseIsometry> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("polygon needs at least 3 sides, got {n}")));
    }
    let a = |j: i64| CycNum::root_of_unity(n, j);
    let mut pieces = Vec::new();
    for i in 0..i64::from(n) {
        let (prev, cur, next) = (a(i - 1), a(i), a(i + 1));
        let cone = ConvexCell::new(vec![
            OrientedLine::through(cur.clone(), &cur - &prev)?,
            line(&next, &cur)?,
        ])?;
        pieces.push((cone, Isometry::point_reflection(&cur)));
    }
    let ambient = pieces.iter().map(|p| p.0.clone()).collect();
    PiecewiseIsometry::from_pieces(ambient, pieces)
}

/// The map `f0` on `U0 = V0 ∪ W0`: `V0` is the cone at `1` between the
/// directions `a_{-1} - 1` and `1 - a_1`, symmetric about `Re z = 1`, and
/// `W0` is the open half-plane right of the line from `1` to `a_1`.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub params: BilliardParams,
    pub v0: ConvexCell,
    pub w0: ConvexCell,
    pub map: PiecewiseIsometry,
    /// `u0 = conj` with `v0(z) = 2 - conj z` on `V0`, `w0(z) = zeta conj z`
    /// on `W0`.
    pub pair: NousPair,
}

pub fn induced_map(p: BilliardParams) -> Result<InducedMap> {
    let one = p.int(1);
    let two = p.int(2);
    let v0 = ConvexCell::new(vec![line(&one, &p.zeta(-1))?, line(&(&two - &p.zeta(1)), &one)?])?;
    let w0 = ConvexCell::new(vec![line(&p.zeta(1), &one)?])?;
    let s0 = Isometry::point_reflection(&one);
    let r0_inv = Isometry::new(false, p.zeta(-1), p.int(0))?;
    let ambient = vec![v0.clone(), w0.clone()];
    let map = PiecewiseIsometry::from_pieces(ambient.clone(), vec![(v0.clone(), s0), (w0.clone(), r0_inv)])?;
    let conj = Isometry::new(true, p.int(1), p.int(0))?;
    let u = PiecewiseIsometry::from_pieces(ambient.clone(), vec![(v0.clone(), conj.clone()), (w0.clone(), conj)])?;
    let v = PiecewiseIsometry::from_pieces(
        ambient,
        vec![
            (v0.clone(), Isometry::new(true, p.int(-1), two)?),
            (w0.clone(), Isometry::new(true, p.zeta(1), p.int(0))?),
        ],
    )?;
    Ok(InducedMap { params: p, v0, w0, map, pair: NousPair { u, v, kind: NousKind::Symmetric } })
}

/// First return of `f0` to `V0` from the closed form: atom `P_k`,
/// `k = 1..=N`, is `v0(V0 ∩ (2 a_{-k} - V_{-k}))` with `V_j = zeta^j V0`; on
/// it the return time is `k + 1` and the map is `z -> zeta^-k (2 - z)`.
#[derive(Clone, Debug)]
pub struct ReturnToV0 {
    pub params: BilliardParams,
    pub map: PiecewiseIsometry,
    /// Return time of each atom.
    pub times: Vec<usize>,
    /// `u1 = v0` on `V0`, `v1 = u1 ∘ f1`.
    pub pair: NousPair,
}

pub fn return_map_v0(p: BilliardParams) -> Result<ReturnToV0> {
    let ind = induced_map(p)?;
    let v0_refl = Isometry::new(true, p.int(-1), p.int(2))?;
    let mut pieces = Vec::new();
    let mut times = Vec::new();
    for k in 1..=i64::from(p.n) {
        let rot = Isometry::new(false, p.zeta(-k), p.int(0))?;
        let vk = ind.v0.image(&rot)?;
        let fvk = vk.image(&Isometry::point_reflection(&p.zeta(-k)))?;
        let Some(meet) = ind.v0.intersect(&fvk)? else {
            return Err(Error::Invariant(format!("return atom {k} is empty")));
        };
        let iso = Isometry::new(false, -&p.zeta(-k), &p.zeta(-k) + &p.zeta(-k))?;
        pieces.push((meet.image(&v0_refl)?, iso));
        times.push(k as usize + 1);
    }
    let map = PiecewiseIsometry::from_pieces(vec![ind.v0.clone()], pieces)?;
    let u = PiecewiseIsometry::from_pieces(vec![ind.v0.clone()], vec![(ind.v0.clone(), v0_refl.clone())])?;
    let v_pieces = map
        .atoms()
        .iter()
        .map(|a| (a.domain.clone(), v0_refl.compose(&a.iso)))
        .collect();
    let v = PiecewiseIsometry::from_pieces(vec![ind.v0.clone()], v_pieces)?;
    Ok(ReturnToV0 { params: p, map, times, pair: NousPair { u, v, kind: NousKind::Symmetric } })
}

/// Recomputes the return map to `V0` by propagating `f0`.
pub fn return_map_v0_by_propagation(p: BilliardParams) -> Result<crate::engine::ReturnMap> {
    let ind = induced_map(p)?;
    first_return(&ind.map, &ind.v0, 4 * p.n as usize + 4)
}

/// `f1` restricted to the triangle `U2` formed by its first `(N-1)/2` atoms.
#[derive(Clone, Debug)]
pub struct RestrictedMap {
    pub params: BilliardParams,
    pub u2: ConvexCell,
    pub map: PiecewiseIsometry,
    pub pair: NousPair,
}

pub fn restrict_to_u2(f1: &ReturnToV0) -> Result<RestrictedMap> {
    let p = f1.params;
    if p.n.is_multiple_of(2) || p.n < 5 {
        return Err(Error::InvalidParameter(format!("U2 needs odd N >= 5, got {}", p.n)));
    }
    let n1 = ((p.n - 1) / 2) as usize;
    let atoms = f1.map.atoms();
    let mut u2 = atoms[0].domain.clone();
    for a in &atoms[1..n1] {
        u2 = crate::engine::convex_union_public(&u2, &a.domain)?
            .ok_or_else(|| Error::Invariant("first atoms do not form a convex set".into()))?;
    }
    if u2.lines().len() != 3 {
        return Err(Error::Invariant("U2 is not a triangle".into()));
    }
    let keep: Vec<usize> = (0..n1).collect();
    let map = f1.map.restrict(vec![u2.clone()], &keep)?;
    let u = PiecewiseIsometry::from_pieces(vec![u2.clone()], vec![(u2.clone(), f1.pair.u.atoms()[0].iso.clone())])?;
    let v = f1.pair.v.restrict(vec![u2.clone()], &keep)?;
    Ok(RestrictedMap { params: p, u2, map, pair: NousPair { u, v, kind: NousKind::Symmetric } })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleKind {
    F2,
    F3,
}

/// The triangle `U = O A_k B_k` cut into `P_1 = O A_1 B_1` and the
/// quadrilaterals `P_(i+1) = A_i A_(i+1) B_(i+1) B_i`, each carrying its
/// reflection `v_i`, together with the reflection `u` of `U`.
#[derive(Clone, Debug)]
pub struct TriangleConstruction {
    pub params: BilliardParams,
    pub kind: TriangleKind,
    pub o: CPoint,
    /// `A_1, ..., A_k` on the base.
    pub a: Vec<CPoint>,
    /// `B_1, ..., B_k` on the other leg.
    pub b: Vec<CPoint>,
    /// `|A_i B_i|` for `i = 1..=k`.
    pub lengths: Vec<CycNum>,
    pub triangle: ConvexCell,
    pub pieces: Vec<ConvexCell>,
    pub v: Vec<Isometry>,
    pub u: Isometry,
    pub map: PiecewiseIsometry,
    pub pair: NousPair,
}

fn pieces_of(o: &CPoint, a: &[CPoint], b: &[CPoint]) -> Result<Vec<ConvexCell>> {
    let mut out = vec![ConvexCell::polygon(&[o.clone(), a[0].clone(), b[0].clone()])?];
    for i in 1..a.len() {
        out.push(ConvexCell::polygon(&[a[i - 1].clone(), a[i].clone(), b[i].clone(), b[i - 1].clone()])?);
    }
    Ok(out)
}

fn finish(
    params: BilliardParams,
    kind: TriangleKind,
    o: CPoint,
    a: Vec<CPoint>,
    b: Vec<CPoint>,
    v: Vec<Isometry>,
    u: Isometry,
) -> Result<TriangleConstruction> {
    let k = a.len();
    let triangle = ConvexCell::polygon(&[o.clone(), a[k - 1].clone(), b[k - 1].clone()])?;
    let pieces = pieces_of(&o, &a, &b)?;
    if !covered_by(&triangle, &pieces)? {
        return Err(Error::Invariant("pieces do not cover the triangle".into()));
    }
    for (i, (c, g)) in pieces.iter().zip(&v).enumerate() {
        if !c.image(g)?.same_as(c)? {
            return Err(Error::Invariant(format!("piece {} is not symmetric under its reflection", i + 1)));
        }
    }
    if !triangle.image(&u)?.same_as(&triangle)? {
        return Err(Error::Invariant("u does not preserve the triangle".into()));
    }
    let lengths = a
        .iter()
        .zip(&b)
        .map(|(x, y)| segment_length(x, y).map(|r| r.0))
        .collect::<Result<Vec<_>>>()?;
    let ambient = vec![triangle.clone()];
    let map = PiecewiseIsometry::from_pieces(
        ambient.clone(),
        pieces.iter().zip(&v).map(|(c, g)| (c.clone(), u.compose(g))).collect(),
    )?;
    let u_map = PiecewiseIsometry::new(ambient.clone(), vec![PartialIsometry::new(triangle.clone(), u.clone())?])?;
    let v_map = PiecewiseIsometry::from_pieces(ambient, pieces.iter().cloned().zip(v.iter().cloned()).collect())?;
    Ok(TriangleConstruction {
        params,
        kind,
        o,
        a,
        b,
        lengths,
        triangle,
        pieces,
        v,
        u,
        map,
        pair: NousPair { u: u_map, v: v_map, kind: NousKind::Symmetric },
    })
}

fn midpoint(x: &CPoint, y: &CPoint) -> CPoint {
    (x + y).scale(&half())
}

/// The direct model of `f2` for odd `N >= 3`: `O = 0`, base along the
/// positive reals, other leg at angle `theta`, `A_1 = 2 cos theta`,
/// `B_1 = zeta`. `v_1` is the reflection in `Re z = cos theta`, `v_(i+1)` the
/// reflection in `A_i B_(i+1)`, and `u(z) = zeta conj z`.
pub fn f2_direct(p: BilliardParams) -> Result<TriangleConstruction> {
    if p.n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("f2 needs odd N, got {}", p.n)));
    }
    let k = ((p.n - 1) / 2) as usize;
    let o = p.int(0);
    let leg = line(&o, &p.zeta(1))?;
    let mut a = vec![&p.zeta(1) + &p.zeta(-1)];
    let mut b = vec![p.zeta(1)];
    let c1 = p.cos(1);
    // reflection in the line Re z = cos theta
    let mut v = vec![Isometry::new(true, p.int(-1), &c1 + &c1)?];
    for i in 0..k - 1 {
        let (len, _) = segment_length(&a[i], &b[i])?;
        let next_a = &a[i] + &len;
        let m = midpoint(&b[i], &next_a);
        let axis = line(&a[i], &m)?;
        let next_b = axis.intersection(&leg)?;
        v.push(Isometry::reflection(&a[i], &next_b)?);
        a.push(next_a);
        b.push(next_b);
    }
    let u = Isometry::new(true, p.zeta(1), p.int(0))?;
    let (ok, _) = segment_length(&o, &b[k - 1])?;
    if ok != a[k - 1] {
        return Err(Error::Invariant("triangle is not isosceles".into()));
    }
    finish(p, TriangleKind::F2, o, a, b, v, u)
}

/// The direct model of `f3` for `N >= 3`: base `[0, 1]`, base angles `theta`,
/// `k = N - 2` pieces. `P_1` is isosceles with apex `A_1` and axis
/// `A_1 B_0`, `B_0` the midpoint of `O B_1`; `P_(i+1)` is symmetric about
/// `A_(i+1) B_i`. `u(z) = 1 - conj z`.
pub fn f3_direct(p: BilliardParams) -> Result<TriangleConstruction> {
    let k = (p.n - 2) as usize;
    let o = p.int(0);
    let base = line(&o, &p.int(1))?;
    let dir = p.zeta(1);
    // built with A_1 = 1, rescaled at the end
    let mut a = vec![p.int(1)];
    let mut b = vec![&dir * &(&p.zeta(1) + &p.zeta(-1))];
    let mut axes = vec![(a[0].clone(), midpoint(&o, &b[0]))];
    for i in 0..k - 1 {
        let (len, _) = segment_length(&b[i], &a[i])?;
        let next_b = &b[i] + &(&len * &dir);
        let m = midpoint(&a[i], &next_b);
        let next_a = line(&b[i], &m)?.intersection(&base)?;
        axes.push((next_a.clone(), b[i].clone()));
        a.push(next_a);
        b.push(next_b);
    }
    let s = a[k - 1].to_rational().map(|q| CycNum::from_rational(p.conductor(), &q.recip()));
    let s = match s {
        Some(s) => s,
        None => a[k - 1].inv()?,
    };
    let a: Vec<CPoint> = a.iter().map(|z| z * &s).collect();
    let b: Vec<CPoint> = b.iter().map(|z| z * &s).collect();
    let apex = dir.checked_div(&(&p.zeta(1) + &p.zeta(-1)))?;
    if b[k - 1] != apex {
        return Err(Error::Invariant("last piece does not close the triangle".into()));
    }
    let v = axes
        .iter()
        .map(|(x, y)| Isometry::reflection(&(x * &s), &(y * &s)))
        .collect::<Result<Vec<_>>>()?;
    let u = Isometry::new(true, p.int(-1), p.int(1))?;
    finish(p, TriangleKind::F3, o, a, b, v, u)
}

/// `-sin(theta/2) / (1 + sin(theta/2))`, the rotation number of the
/// boundary return map of `f2`.
pub fn expected_alpha_f2(p: BilliardParams) -> Result<CycNum> {
    let s = p.sin_half(1);
    (-&s).checked_div(&(&CycNum::one(1) + &s))
}

/// `-cos(theta) / (1 + cos(theta))` for `f3`.
pub fn expected_alpha_f3(p: BilliardParams) -> Result<CycNum> {
    let c = p.cos(1);
    (-&c).checked_div(&(&CycNum::one(1) + &c))
}

/// A similarity `z -> a z + b` or `z -> a conj(z) + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Similarity {
    pub reversing: bool,
    pub a: CycNum,
    pub b: CycNum,
}

impl Similarity {
    #[must_use]
    pub fn apply(&self, z: &CPoint) -> CPoint {
        let w = if self.reversing { z.conj() } else { z.clone() };
        &(&self.a * &w) + &self.b
    }

    /// The similarity taking `p0, p1` to `q0, q1`.
    pub fn through(reversing: bool, p0: &CPoint, p1: &CPoint, q0: &CPoint, q1: &CPoint) -> Result<Self> {
        let dp = p1 - p0;
        let dp = if reversing { dp.conj() } else { dp };
        let a = (q1 - q0).checked_div(&dp)?;
        let s0 = if reversing { p0.conj() } else { p0.clone() };
        let b = q0 - &(&a * &s0);
        Ok(Similarity { reversing, a, b })
    }
}

/// Finds a similarity carrying `restricted` onto `direct`: triangle to
/// triangle, atoms to atoms, and conjugating each restricted isometry to the
/// direct one. Fails when none of the six vertex matchings works.
pub fn f2_cross_validate(restricted: &RestrictedMap, direct: &TriangleConstruction) -> Result<Similarity> {
    let from = restricted.u2.vertices()?;
    let to = direct.triangle.vertices()?;
    for shift in 0..3 {
        for reversing in [false, true] {
            let img = |j: usize| -> usize {
                if reversing {
                    (shift + 3 - j) % 3
                } else {
                    (shift + j) % 3
                }
            };
            let sim = Similarity::through(reversing, &from[0], &from[1], &to[img(0)], &to[img(1)])?;
            if sim.apply(&from[2]) != to[img(2)] {
                continue;
            }
            if conjugates(&sim, restricted, direct)? {
                return Ok(sim);
            }
        }
    }
    Err(Error::Invariant("no similarity matches the two models".into()))
}

fn conjugates(sim: &Similarity, r: &RestrictedMap, d: &TriangleConstruction) -> Result<bool> {
    if r.map.atoms().len() != d.map.atoms().len() {
        return Ok(false);
    }
    for atom in r.map.atoms() {
        let verts = atom.domain.vertices()?;
        let mapped: Vec<CPoint> = verts.iter().map(|z| sim.apply(z)).collect();
        // orientation reversing similarities flip the vertex order
        let mut ordered = mapped.clone();
        if sim.reversing {
            ordered.reverse();
        }
        let cell = ConvexCell::polygon(&ordered)?;
        let Some(target) = crate::try_find(d.map.atoms(), |t| t.domain.same_as(&cell))? else {
            return Ok(false);
        };
        // affine maps agreeing on three non-collinear points agree everywhere
        for z in verts.iter().take(3) {
            if sim.apply(&atom.iso.apply(z)) != target.iso.apply(&sim.apply(z)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_billiard_example() {
        let f = dual_billiard(4).unwrap();
        let z = CycNum::from_int(4, 2);
        let w = f.evaluate(&z).unwrap().unwrap();
        assert_eq!(w, &CycNum::from_int(4, -2) - &CycNum::from_int(4, 2).mul_root(1));
    }

    #[test]
    fn decagon_seed() {
        let f = dual_billiard(10).unwrap();
        let z = CycNum::from_int(10, 3);
        let expect = &(&CycNum::root_of_unity(10, -2) + &CycNum::root_of_unity(10, -2)) - &z;
        assert_eq!(f.evaluate(&z).unwrap(), Some(expect));
    }

    #[test]
    fn f0_cone_point() {
        let p = BilliardParams::new(5).unwrap();
        let ind = induced_map(p).unwrap();
        let i = CycNum::i();
        let z = &CycNum::one(10) - &(&i + &i);
        assert!(ind.v0.contains(&z).unwrap());
        assert_eq!(ind.map.evaluate(&z).unwrap(), Some(&CycNum::one(10) + &(&i + &i)));
        let three = CycNum::from_int(10, 3);
        assert!(!ind.v0.contains(&three).unwrap());
        assert_eq!(ind.map.evaluate(&three).unwrap(), Some(&three * &p.zeta(-1)));
    }

    #[test]
    fn f3_equilateral() {
        let t = f3_direct(BilliardParams::new(3).unwrap()).unwrap();
        assert_eq!(t.pieces.len(), 1);
        let g = &t.map.atoms()[0].iso;
        assert!(g.compose(g).compose(g).is_identity());
        assert!(!g.is_identity());
    }

    #[test]
    fn f2_small() {
        let t = f2_direct(BilliardParams::new(5).unwrap()).unwrap();
        assert_eq!(t.pieces.len(), 2);
        assert!(t.pair.check(&t.map).is_ok());
    }
}
