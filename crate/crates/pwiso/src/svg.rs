//! SVG 1.1 figures of piece decompositions and orbits.
//!
//! Geometry is clipped exactly to a rational viewing box and only then
//! rendered as decimals, so every primitive comes from an exact cell, axis
//! or point. The y axis is flipped by rendering `conj(z)`.

use std::fmt::Write;

use anyhow::Result;
use num_rational::BigRational;
use pwiso_core::engine::PiecewiseIsometry;
use pwiso_core::geometry::{CPoint, ConvexCell, Isometry, OrientedLine, Side};
use pwiso_core::CycNum;

use crate::json::MapDoc;

pub const DEFAULT_DIGITS: usize = 12;

const PALETTE: [&str; 10] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
];

/// Exact primitives of a figure.
#[derive(Clone, Debug, Default)]
pub struct Scene {
    pub title: String,
    /// Filled cells with their labels.
    pub cells: Vec<(Vec<CPoint>, String)>,
    /// Outlines of the ambient space.
    pub outlines: Vec<Vec<CPoint>>,
    /// Dashed symmetry axes.
    pub axes: Vec<(CPoint, CPoint)>,
    pub orbit: Vec<CPoint>,
}

fn frac(x: f64) -> BigRational {
    // snap to eighths; only the viewing box is built from floats
    BigRational::new(((x * 8.0).round() as i64).into(), 8.into())
}

/// Finite corners of a cell; for an unbounded cell the meeting points of
/// consecutive boundary lines, or a point of its only line.
fn corners(c: &ConvexCell) -> Result<Vec<CPoint>> {
    if c.is_bounded() {
        return Ok(c.vertices()?);
    }
    let ls = c.lines();
    if ls.len() == 1 {
        return Ok(vec![ls[0].a().clone()]);
    }
    Ok(ls.windows(2).map(|w| w[0].intersection(&w[1])).collect::<pwiso_core::Result<Vec<_>>>()?)
}

fn viewing_box(f: &PiecewiseIsometry, orbit: &[CPoint], n: u32) -> Result<ConvexCell> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for c in f.ambient().iter().chain(f.atoms().iter().map(|a| &a.domain)) {
        pts.extend(corners(c)?.iter().map(CycNum::to_f64));
    }
    pts.extend(orbit.iter().map(CycNum::to_f64));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let pad = 0.25 * (x1 - x0).max(y1 - y0).max(2.0);
    let i = CycNum::i();
    let corner = |x: f64, y: f64| &CycNum::from_rational(n, &frac(x)) + &(&i * &CycNum::from_rational(n, &frac(y)));
    let ring = [
        corner(x0 - pad, y0 - pad),
        corner(x1 + pad, y0 - pad),
        corner(x1 + pad, y1 + pad),
        corner(x0 - pad, y1 + pad),
    ];
    Ok(ConvexCell::polygon(&ring)?)
}

/// The closure of `line ∩ cell` for a bounded cell, when it is a segment.
fn clip_line(line: &OrientedLine, cell: &ConvexCell) -> Result<Option<(CPoint, CPoint)>> {
    let mut pts: Vec<CPoint> = Vec::new();
    for (p, q) in cell.edges()? {
        let (sp, sq) = (line.side(&p)?, line.side(&q)?);
        if sp == Side::On {
            pts.push(p.clone());
        }
        if matches!((sp, sq), (Side::Left, Side::Right) | (Side::Right, Side::Left)) {
            pts.push(line.intersection(&OrientedLine::new(p, q)?)?);
        }
    }
    pts.dedup();
    Ok(match pts.as_slice() {
        [a, b, ..] if a != b => Some((a.clone(), b.clone())),
        _ => None,
    })
}

fn axes_of(isos: &[(&ConvexCell, &Isometry)], frame: &ConvexCell) -> Result<Vec<(CPoint, CPoint)>> {
    let mut out = Vec::new();
    for (dom, g) in isos {
        let Some(axis) = g.axis()? else { continue };
        let Some(c) = dom.intersect(frame)? else { continue };
        if let Some(seg) = clip_line(&axis, &c)? {
            out.push(seg);
        }
    }
    Ok(out)
}

impl Scene {
    /// Atoms as labelled cells, mirror lines of the factorisation (or of the
    /// map itself when there is none) as axes, and an optional orbit.
    pub fn from_map(doc: &MapDoc, orbit: &[CPoint]) -> Result<Scene> {
        let f = doc.map.to_core()?;
        let n = f.atoms().first().map_or(1, |a| a.iso.spectral().conductor());
        let frame = viewing_box(&f, orbit, n)?;
        let mut scene = Scene { title: format!("{} (N = {})", doc.name, doc.n), orbit: orbit.to_vec(), ..Scene::default() };
        for (i, a) in f.atoms().iter().enumerate() {
            if let Some(c) = a.domain.intersect(&frame)? {
                scene.cells.push((c.vertices()?, format!("P{}", i + 1)));
            }
        }
        for c in f.ambient() {
            if let Some(c) = c.intersect(&frame)? {
                scene.outlines.push(c.vertices()?);
            }
        }
        let pair = doc.nous.as_ref().map(|p| p.to_core()).transpose()?;
        let mirrors: Vec<(ConvexCell, Isometry)> = match &pair {
            Some(p) => p.v.atoms().iter().chain(p.u.atoms()).map(|a| (a.domain.clone(), a.iso.clone())).collect(),
            None => f.atoms().iter().map(|a| (a.domain.clone(), a.iso.clone())).collect(),
        };
        let refs: Vec<(&ConvexCell, &Isometry)> = mirrors.iter().map(|(c, g)| (c, g)).collect();
        scene.axes = axes_of(&refs, &frame)?;
        Ok(scene)
    }
}

struct Pen {
    digits: usize,
}

impl Pen {
    fn xy(&self, z: &CPoint) -> (String, String) {
        z.conj().to_decimal(self.digits)
    }

    fn points(&self, ps: &[CPoint]) -> String {
        ps.iter()
            .map(|p| {
                let (x, y) = self.xy(p);
                format!("{x},{y}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn centroid(ps: &[CPoint]) -> CPoint {
    let sum = ps.iter().fold(CycNum::zero(1), |s, p| &s + p);
    sum.scale(&BigRational::new(1.into(), (ps.len() as i64).into()))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `scene` with coordinates at `digits` decimal places.
pub fn render(scene: &Scene, digits: usize) -> String {
    let pen = Pen { digits };
    let all: Vec<(f64, f64)> = scene
        .outlines
        .iter()
        .chain(scene.cells.iter().map(|c| &c.0))
        .flatten()
        .chain(&scene.orbit)
        .map(|z| {
            let (x, y) = z.to_f64();
            (x, -y)
        })
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64);
    if let Some(&(x, y)) = all.first() {
        (x0, x1, y0, y1) = (x, x, y, y);
    }
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let size = (x1 - x0).max(y1 - y0).max(1e-9);
    let m = 0.05 * size;
    let stroke = size / 400.0;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.6} {:.6} {:.6} {:.6}" width="800" height="{:.0}">"#,
        x0 - m,
        y0 - m,
        x1 - x0 + 2.0 * m,
        y1 - y0 + 2.0 * m,
        800.0 * (y1 - y0 + 2.0 * m) / (x1 - x0 + 2.0 * m)
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(&scene.title));
    let _ = writeln!(
        out,
        r#"  <metadata><scene xmlns="urn:pwiso:scene" schema="{}" digits="{digits}" cells="{}" axes="{}" orbit-points="{}"/></metadata>"#,
        crate::json::SCHEMA,
        scene.cells.len(),
        scene.axes.len(),
        scene.orbit.len()
    );
    let _ = writeln!(out, r##"  <g id="cells" stroke="#333333" stroke-width="{stroke:.6}">"##);
    for (i, (vs, label)) in scene.cells.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"    <polygon id="{}" fill="{}" points="{}"/>"#,
            escape(label),
            PALETTE[i % PALETTE.len()],
            pen.points(vs)
        );
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, r#"  <g id="outline" fill="none" stroke="black" stroke-width="{:.6}">"#, 2.0 * stroke);
    for vs in &scene.outlines {
        let _ = writeln!(out, r#"    <polygon points="{}"/>"#, pen.points(vs));
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(
        out,
        r##"  <g id="axes" stroke="#444444" stroke-width="{stroke:.6}" stroke-dasharray="{:.6} {:.6}">"##,
        6.0 * stroke,
        4.0 * stroke
    );
    for (a, b) in &scene.axes {
        let ((ax, ay), (bx, by)) = (pen.xy(a), pen.xy(b));
        let _ = writeln!(out, r#"    <line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>"#);
    }
    let _ = writeln!(out, "  </g>");
    if !scene.orbit.is_empty() {
        let _ = writeln!(out, r##"  <g id="orbit" fill="#c00000">"##);
        let _ = writeln!(
            out,
            r##"    <polyline fill="none" stroke="#c00000" stroke-opacity="0.4" stroke-width="{:.6}" points="{}"/>"##,
            stroke / 2.0,
            pen.points(&scene.orbit)
        );
        for z in &scene.orbit {
            let (x, y) = pen.xy(z);
            let _ = writeln!(out, r#"    <circle cx="{x}" cy="{y}" r="{:.6}"/>"#, 1.5 * stroke);
        }
        let _ = writeln!(out, "  </g>");
    }
    let _ = writeln!(out, r#"  <g id="labels" font-family="sans-serif" font-size="{:.6}" text-anchor="middle">"#, 12.0 * stroke);
    for (vs, label) in &scene.cells {
        let (x, y) = pen.xy(&centroid(vs));
        let _ = writeln!(out, r#"    <text x="{x}" y="{y}">{}</text>"#, escape(label));
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{construct, Preset};

    #[test]
    fn f2_heptagon_scene() {
        let doc = construct(Preset::F2, 7).unwrap();
        let scene = Scene::from_map(&doc, &[]).unwrap();
        assert_eq!(scene.cells.len(), 3);
        // one mirror per piece plus the mirror of u
        assert_eq!(scene.axes.len(), 4);
        let svg = render(&scene, DEFAULT_DIGITS);
        assert!(svg.contains(r#"digits="12""#));
        assert!(svg.contains("stroke-dasharray"));
        assert_eq!(svg.matches("<polygon id=").count(), 3);
    }

    #[test]
    fn unbounded_cells_are_clipped() {
        let doc = construct(Preset::Dual, 4).unwrap();
        let scene = Scene::from_map(&doc, &[CycNum::from_int(4, 3)]).unwrap();
        assert_eq!(scene.cells.len(), 4);
        assert!(scene.cells.iter().all(|(vs, _)| vs.len() >= 3));
        let svg = render(&scene, 4);
        assert!(svg.contains("<circle"));
    }

    #[test]
    fn lines_clip_to_segments() {
        let sq: Vec<CPoint> = [(0, 0), (2, 0), (2, 2), (0, 2)]
            .iter()
            .map(|&(x, y)| &CycNum::from_int(4, x) + &(&CycNum::i() * &CycNum::from_int(4, y)))
            .collect();
        let cell = ConvexCell::polygon(&sq).unwrap();
        let diag = OrientedLine::new(CycNum::zero(4), sq[2].clone()).unwrap();
        let (a, b) = clip_line(&diag, &cell).unwrap().unwrap();
        assert!((a == sq[0] && b == sq[2]) || (a == sq[2] && b == sq[0]));
        let outside = OrientedLine::new(CycNum::from_int(4, 5), &CycNum::from_int(4, 5) + &CycNum::i()).unwrap();
        assert!(clip_line(&outside, &cell).unwrap().is_none());
    }
}
