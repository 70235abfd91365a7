//! JSON interchange, schema `pwiso/1`.
//!
//! Rationals travel as strings `"p/q"` in lowest terms with `q > 0`;
//! cyclotomic numbers as `{conductor, coeffs}` in the power basis. Field
//! order is fixed by the structs below, so equal inputs serialize to equal
//! bytes.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use pwiso_core::certify::{Certificate, HeckeReport};
use pwiso_core::engine::{NousKind, NousPair, OrbitReport, OrbitStatus, PiecewiseIsometry};
use pwiso_core::geometry::{ConvexCell, Isometry, OrientedLine, PartialIsometry};
use pwiso_core::iet::{Branch, FlipIet};
use pwiso_core::saf::SafInvariant;
use pwiso_core::CycNum;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "pwiso/1";

pub fn rational_to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().with_context(|| format!("bad numerator in {s:?}"))?;
    let q: BigInt = q.parse().with_context(|| format!("bad denominator in {s:?}"))?;
    if q.is_positive() {
        Ok(BigRational::new(p, q))
    } else if q.is_negative() {
        Ok(BigRational::new(-p, -q))
    } else {
        bail!("zero denominator in {s:?}")
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CycJson {
    pub conductor: u32,
    pub coeffs: Vec<String>,
}

impl CycJson {
    pub fn from_core(z: &CycNum) -> Self {
        CycJson { conductor: z.conductor(), coeffs: z.coeffs().iter().map(rational_to_string).collect() }
    }

    pub fn to_core(&self) -> Result<CycNum> {
        let cs = self.coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Ok(CycNum::from_coeffs(self.conductor, &cs)?)
    }
}

/// Oriented line through `a` and `b`; the cell lies to its left.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct LineJson {
    pub a: CycJson,
    pub b: CycJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CellJson {
    pub bounded: bool,
    pub lines: Vec<LineJson>,
}

impl CellJson {
    pub fn from_core(c: &ConvexCell) -> Self {
        CellJson {
            bounded: c.is_bounded(),
            lines: c
                .lines()
                .iter()
                .map(|l| LineJson { a: CycJson::from_core(l.a()), b: CycJson::from_core(l.b()) })
                .collect(),
        }
    }

    pub fn to_core(&self) -> Result<ConvexCell> {
        let lines = self
            .lines
            .iter()
            .map(|l| Ok(OrientedLine::new(l.a.to_core()?, l.b.to_core()?)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConvexCell::new(lines)?)
    }
}

/// `z -> spectral * z + shift`, with `conj(z)` in place of `z` when
/// `reversing`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct IsometryJson {
    pub reversing: bool,
    pub spectral: CycJson,
    pub shift: CycJson,
}

impl IsometryJson {
    pub fn from_core(g: &Isometry) -> Self {
        IsometryJson {
            reversing: g.is_reversing(),
            spectral: CycJson::from_core(g.spectral()),
            shift: CycJson::from_core(g.shift()),
        }
    }

    pub fn to_core(&self) -> Result<Isometry> {
        Ok(Isometry::new(self.reversing, self.spectral.to_core()?, self.shift.to_core()?)?)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct AtomJson {
    pub domain: CellJson,
    pub iso: IsometryJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseJson {
    pub ambient: Vec<CellJson>,
    pub atoms: Vec<AtomJson>,
}

impl PiecewiseJson {
    pub fn from_core(f: &PiecewiseIsometry, times: Option<&[usize]>) -> Self {
        PiecewiseJson {
            ambient: f.ambient().iter().map(CellJson::from_core).collect(),
            atoms: f
                .atoms()
                .iter()
                .enumerate()
                .map(|(i, a)| AtomJson {
                    domain: CellJson::from_core(&a.domain),
                    iso: IsometryJson::from_core(&a.iso),
                    time: times.map(|t| t[i]),
                })
                .collect(),
        }
    }

    pub fn to_core(&self) -> Result<PiecewiseIsometry> {
        let ambient = self.ambient.iter().map(CellJson::to_core).collect::<Result<Vec<_>>>()?;
        let atoms = self
            .atoms
            .iter()
            .map(|a| Ok(PartialIsometry::new(a.domain.to_core()?, a.iso.to_core()?)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(PiecewiseIsometry::new(ambient, atoms)?)
    }

    /// Return times, when every atom carries one.
    pub fn times(&self) -> Option<Vec<usize>> {
        self.atoms.iter().map(|a| a.time).collect()
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct NousJson {
    /// `"symmetric"` or `"disjoint"`.
    pub kind: String,
    pub u: PiecewiseJson,
    pub v: PiecewiseJson,
}

impl NousJson {
    pub fn from_core(p: &NousPair) -> Self {
        let kind = match p.kind {
            NousKind::Symmetric => "symmetric",
            NousKind::Disjoint => "disjoint",
        };
        NousJson { kind: kind.into(), u: PiecewiseJson::from_core(&p.u, None), v: PiecewiseJson::from_core(&p.v, None) }
    }

    pub fn to_core(&self) -> Result<NousPair> {
        let kind = match self.kind.as_str() {
            "symmetric" => NousKind::Symmetric,
            "disjoint" => NousKind::Disjoint,
            k => bail!("unknown nous kind {k:?}"),
        };
        Ok(NousPair { u: self.u.to_core()?, v: self.v.to_core()?, kind })
    }
}

/// A piecewise isometry with its provenance, optional factorisation and
/// named regions usable as targets of a first return.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MapDoc {
    pub schema: String,
    pub kind: String,
    pub name: String,
    pub n: u32,
    pub map: PiecewiseJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nous: Option<NousJson>,
    #[serde(default)]
    pub regions: BTreeMap<String, CellJson>,
}

impl MapDoc {
    pub fn new(name: &str, n: u32, f: &PiecewiseIsometry, times: Option<&[usize]>, nous: Option<&NousPair>) -> Self {
        MapDoc {
            schema: SCHEMA.into(),
            kind: "map".into(),
            name: name.into(),
            n,
            map: PiecewiseJson::from_core(f, times),
            nous: nous.map(NousJson::from_core),
            regions: BTreeMap::new(),
        }
    }

    pub fn with_region(mut self, name: &str, c: &ConvexCell) -> Self {
        self.regions.insert(name.into(), CellJson::from_core(c));
        self
    }

    pub fn region(&self, name: &str) -> Result<ConvexCell> {
        let known: Vec<&str> = self.regions.keys().map(String::as_str).collect();
        self.regions
            .get(name)
            .ok_or_else(|| anyhow!("map {:?} has no region {name:?}; known: {}", self.name, known.join(", ")))?
            .to_core()
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct OrbitDoc {
    pub schema: String,
    pub kind: String,
    pub map: String,
    pub n: u32,
    pub budget: usize,
    /// `"periodic"`, `"boundary"` or `"open"`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_step: Option<usize>,
    pub distinct: usize,
    pub iterates: Vec<CycJson>,
}

impl OrbitDoc {
    pub fn new(map: &MapDoc, budget: usize, r: &OrbitReport) -> Self {
        let (status, period, boundary_step) = match r.status {
            OrbitStatus::Periodic { period } => ("periodic", Some(period), None),
            OrbitStatus::Boundary { step } => ("boundary", None, Some(step)),
            OrbitStatus::Open => ("open", None, None),
        };
        OrbitDoc {
            schema: SCHEMA.into(),
            kind: "orbit".into(),
            map: map.name.clone(),
            n: map.n,
            budget,
            status: status.into(),
            period,
            boundary_step,
            distinct: r.distinct,
            iterates: r.iterates.iter().map(CycJson::from_core).collect(),
        }
    }

    pub fn points(&self) -> Result<Vec<CycNum>> {
        self.iterates.iter().map(CycJson::to_core).collect()
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BranchJson {
    pub src_comp: usize,
    pub src_start: CycJson,
    pub dst_comp: usize,
    pub dst_start: CycJson,
    pub len: CycJson,
    pub flip: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct IetJson {
    pub lengths: Vec<CycJson>,
    pub branches: Vec<BranchJson>,
}

impl IetJson {
    pub fn from_core(g: &FlipIet) -> Self {
        IetJson {
            lengths: g.lengths().iter().map(CycJson::from_core).collect(),
            branches: g
                .branches()
                .iter()
                .map(|b| BranchJson {
                    src_comp: b.src_comp,
                    src_start: CycJson::from_core(&b.src_start),
                    dst_comp: b.dst_comp,
                    dst_start: CycJson::from_core(&b.dst_start),
                    len: CycJson::from_core(&b.len),
                    flip: b.flip,
                })
                .collect(),
        }
    }

    pub fn to_core(&self) -> Result<FlipIet> {
        let lengths = self.lengths.iter().map(CycJson::to_core).collect::<Result<Vec<_>>>()?;
        let branches = self
            .branches
            .iter()
            .map(|b| {
                Ok(Branch {
                    src_comp: b.src_comp,
                    src_start: b.src_start.to_core()?,
                    dst_comp: b.dst_comp,
                    dst_start: b.dst_start.to_core()?,
                    len: b.len.to_core()?,
                    flip: b.flip,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FlipIet::new(lengths, branches)?)
    }
}

/// SAF invariant as a matrix in the basis `c^a ⊗ c^b`, with
/// `c = 2 cos(2 pi / basis_conductor)`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SafJson {
    pub basis_conductor: u32,
    pub matrix: Vec<Vec<String>>,
}

impl SafJson {
    pub fn from_core(conductor: u32, s: &SafInvariant) -> Self {
        SafJson {
            basis_conductor: conductor,
            matrix: s.matrix.iter().map(|r| r.iter().map(rational_to_string).collect()).collect(),
        }
    }

    pub fn to_core(&self) -> Result<SafInvariant> {
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(SafInvariant { matrix })
    }
}

/// Exact value with a decimal rendering for reading.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ValueJson {
    pub exact: CycJson,
    pub closed_form: Option<String>,
    pub decimal: String,
}

impl ValueJson {
    pub fn from_core(z: &CycNum) -> Self {
        ValueJson {
            exact: CycJson::from_core(z),
            closed_form: crate::surd::quadratic_form(z),
            decimal: z.to_decimal(20).0,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CertificateDoc {
    pub schema: String,
    pub kind: String,
    pub map: String,
    pub n: u32,
    pub verdict: String,
    pub double_jump: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_arc: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perimeter: Option<ValueJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ValueJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub return_map: Option<IetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saf: Option<SafJson>,
    pub reasons: Vec<String>,
}

impl CertificateDoc {
    pub fn new(map: &str, n: u32, c: &Certificate) -> Self {
        let saf = match (&c.basis, &c.saf) {
            (Some(b), Some(s)) => Some(SafJson::from_core(b.conductor(), s)),
            _ => None,
        };
        CertificateDoc {
            schema: SCHEMA.into(),
            kind: "certificate".into(),
            map: map.into(),
            n,
            verdict: c.verdict.as_str().into(),
            double_jump: c.double_jump,
            witness_arc: c.witness_arc,
            perimeter: c.perimeter.as_ref().map(ValueJson::from_core),
            alpha: c.alpha.as_ref().map(ValueJson::from_core),
            return_map: c.return_map.as_ref().map(IetJson::from_core),
            saf,
            reasons: c.reasons.clone(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RelationJson {
    pub relation: String,
    pub holds: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct HeckeDoc {
    pub schema: String,
    pub kind: String,
    pub map: String,
    pub n: u32,
    pub period: usize,
    pub cells: usize,
    pub relations: Vec<RelationJson>,
    pub inv_wv_zero: bool,
    pub all_hold: bool,
}

impl HeckeDoc {
    pub fn new(map: &str, n: u32, r: &HeckeReport) -> Self {
        HeckeDoc {
            schema: SCHEMA.into(),
            kind: "hecke".into(),
            map: map.into(),
            n,
            period: r.period,
            cells: r.cells,
            relations: r
                .relations
                .iter()
                .map(|(name, holds)| RelationJson { relation: (*name).into(), holds: *holds })
                .collect(),
            inv_wv_zero: r.inv_wv_zero,
            all_hold: r.all_hold(),
        }
    }
}

pub fn to_string<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

/// Reads a document and checks its schema and kind.
pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str, kind: &str) -> Result<T> {
    let v: serde_json::Value = serde_json::from_str(text).context("malformed JSON")?;
    match v.get("schema").and_then(|s| s.as_str()) {
        Some(SCHEMA) => {}
        Some(other) => bail!("unsupported schema {other:?}, expected {SCHEMA:?}"),
        None => bail!("missing \"schema\" field"),
    }
    match v.get("kind").and_then(|s| s.as_str()) {
        Some(k) if k == kind => {}
        Some(k) => bail!("expected a {kind:?} document, found {k:?}"),
        None => bail!("missing \"kind\" field"),
    }
    serde_json::from_value(v).with_context(|| format!("malformed {kind} document"))
}

/// Parses a seed: `"x,y"` with rational parts, or `"cyc:n:c0,c1,..."` with
/// power-basis coefficients in `Q(zeta_n)`.
pub fn parse_seed(s: &str, conductor: u32) -> Result<CycNum> {
    if let Some(rest) = s.strip_prefix("cyc:") {
        let (n, cs) = rest.split_once(':').ok_or_else(|| anyhow!("expected cyc:n:c0,c1,..."))?;
        let n: u32 = n.trim().parse().context("bad conductor in seed")?;
        let cs = cs.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        return Ok(CycNum::from_coeffs(n, &cs)?);
    }
    let (x, y) = s.split_once(',').ok_or_else(|| anyhow!("seed must be \"x,y\" or \"cyc:n:c0,c1,...\""))?;
    let re = CycNum::from_rational(conductor, &parse_rational(x)?);
    let im = CycNum::from_rational(conductor, &parse_rational(y)?);
    Ok(&re + &(&CycNum::i() * &im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn rationals_round_trip() {
        for s in ["0/1", "-3/7", "12/1"] {
            assert_eq!(rational_to_string(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(rational_to_string(&parse_rational("4/-6").unwrap()), "-2/3");
        assert_eq!(rational_to_string(&parse_rational(" 5 ").unwrap()), "5/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(BigRational::one() == parse_rational("2/2").unwrap());
    }

    #[test]
    fn seeds() {
        let z = parse_seed("1/2,-3", 10).unwrap();
        assert_eq!(z.to_f64(), (0.5, -3.0));
        let w = parse_seed("cyc:10:0,1,0,0", 10).unwrap();
        assert_eq!(w, CycNum::root_of_unity(10, 1));
        assert!(parse_seed("1/2", 10).is_err());
        assert!(parse_seed("cyc:10", 10).is_err());
    }

    #[test]
    fn documents_check_schema() {
        let bad = r#"{"schema":"pwiso/0","kind":"map"}"#;
        assert!(from_str::<MapDoc>(bad, "map").is_err());
        let wrong = r#"{"schema":"pwiso/1","kind":"orbit"}"#;
        assert!(from_str::<MapDoc>(wrong, "map").is_err());
    }
}
