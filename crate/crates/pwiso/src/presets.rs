//! Named constructions available from the command line.

use anyhow::Result;
use clap::ValueEnum;
use pwiso_core::billiard::{
    dual_billiard, f2_direct, f3_direct, induced_map, restrict_to_u2, return_map_v0, BilliardParams,
};

use crate::json::MapDoc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Dual billiard outside the regular n-gon.
    Dual,
    /// The induced map on U0 = V0 ∪ W0.
    F0,
    /// First return of f0 to V0 (closed form).
    F1,
    /// f1 restricted to the triangle U2 (odd N >= 5).
    F2,
    /// Direct triangle model of f2 (odd N).
    F2Direct,
    /// Triangle model of f3.
    F3,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Dual => "dual",
            Preset::F0 => "f0",
            Preset::F1 => "f1",
            Preset::F2 => "f2",
            Preset::F2Direct => "f2-direct",
            Preset::F3 => "f3",
        }
    }
}

pub fn construct(preset: Preset, n: u32) -> Result<MapDoc> {
    let name = preset.name();
    if preset == Preset::Dual {
        return Ok(MapDoc::new(name, n, &dual_billiard(n)?, None, None));
    }
    let p = BilliardParams::new(n)?;
    Ok(match preset {
        Preset::Dual => unreachable!("handled above"),
        Preset::F0 => {
            let m = induced_map(p)?;
            MapDoc::new(name, n, &m.map, None, Some(&m.pair)).with_region("V0", &m.v0).with_region("W0", &m.w0)
        }
        Preset::F1 => {
            let r = return_map_v0(p)?;
            let mut doc = MapDoc::new(name, n, &r.map, Some(&r.times), Some(&r.pair))
                .with_region("V0", &r.map.ambient()[0]);
            if n % 2 == 1 && n >= 5 {
                doc = doc.with_region("U2", &restrict_to_u2(&r)?.u2);
            }
            doc
        }
        Preset::F2 => {
            let r = restrict_to_u2(&return_map_v0(p)?)?;
            MapDoc::new(name, n, &r.map, None, Some(&r.pair)).with_region("U2", &r.u2)
        }
        Preset::F2Direct | Preset::F3 => {
            let t = if preset == Preset::F3 { f3_direct(p)? } else { f2_direct(p)? };
            MapDoc::new(name, n, &t.map, None, Some(&t.pair)).with_region("U", &t.triangle)
        }
    })
}
