use pwiso::json::{self, CertificateDoc, IetJson, MapDoc, OrbitDoc, SafJson};
use pwiso::presets::{construct, Preset};
use pwiso_core::billiard::{f2_direct, BilliardParams};
use pwiso_core::certify::certify_nonperiodic;
use pwiso_core::engine::orbit;

fn reload(doc: &MapDoc) -> MapDoc {
    let text = json::to_string(doc).unwrap();
    let back: MapDoc = json::from_str(&text, "map").unwrap();
    let f = back.map.to_core().unwrap();
    let pair = back.nous.as_ref().map(|p| p.to_core().unwrap());
    let mut again = MapDoc::new(&back.name, back.n, &f, back.map.times().as_deref(), pair.as_ref());
    for (name, cell) in &back.regions {
        again = again.with_region(name, &cell.to_core().unwrap());
    }
    again
}

#[test]
fn maps_survive_a_round_trip_unchanged() {
    for (preset, n) in [
        (Preset::Dual, 10),
        (Preset::F0, 5),
        (Preset::F1, 7),
        (Preset::F2, 7),
        (Preset::F2Direct, 9),
        (Preset::F3, 6),
    ] {
        let doc = construct(preset, n).unwrap();
        let again = reload(&doc);
        assert_eq!(again, doc, "{preset:?}");
        assert_eq!(json::to_string(&again).unwrap(), json::to_string(&doc).unwrap());
        // the exact objects agree, not just their text
        let (f, g) = (doc.map.to_core().unwrap(), again.map.to_core().unwrap());
        for (a, b) in f.atoms().iter().zip(g.atoms()) {
            assert_eq!(a.iso, b.iso);
            assert_eq!(a.domain.lines(), b.domain.lines());
        }
    }
}

#[test]
fn output_is_deterministic() {
    let a = json::to_string(&construct(Preset::F1, 9).unwrap()).unwrap();
    let b = json::to_string(&construct(Preset::F1, 9).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn orbits_and_certificates_round_trip() {
    let doc = construct(Preset::F2Direct, 5).unwrap();
    let f = doc.map.to_core().unwrap();
    let seed = json::parse_seed("1/3,1/7", 10).unwrap();
    let r = orbit(&f, &seed, 100).unwrap();
    let o = OrbitDoc::new(&doc, 100, &r);
    let back: OrbitDoc = json::from_str(&json::to_string(&o).unwrap(), "orbit").unwrap();
    assert_eq!(back.points().unwrap(), r.iterates);

    let t = f2_direct(BilliardParams::new(7).unwrap()).unwrap();
    let c = certify_nonperiodic(&t.map, &t.pair).unwrap();
    let cd = CertificateDoc::new("f2", 7, &c);
    let back: CertificateDoc = json::from_str(&json::to_string(&cd).unwrap(), "certificate").unwrap();
    assert_eq!(back, cd);
    let g = back.return_map.as_ref().unwrap().to_core().unwrap();
    assert!(g.equals_mod_finite(c.return_map.as_ref().unwrap()).unwrap());
    assert_eq!(IetJson::from_core(&g), *back.return_map.as_ref().unwrap());
    let saf: &SafJson = back.saf.as_ref().unwrap();
    assert_eq!(&saf.to_core().unwrap(), c.saf.as_ref().unwrap());
    assert_eq!(back.alpha.unwrap().exact.to_core().unwrap(), c.alpha.unwrap());
}
