use std::cmp::Ordering;

use num_rational::BigRational;
use pwiso_core::billiard::*;
use pwiso_core::certify::*;
use pwiso_core::engine::*;
use pwiso_core::geometry::{CPoint, ConvexCell};
use pwiso_core::CycNum;

fn p(n: u32) -> BilliardParams {
    BilliardParams::new(n).unwrap()
}

/// A few exact points strictly inside `cell`: the interior point and
/// rational blends of it with each vertex.
fn samples(cell: &ConvexCell) -> Vec<CPoint> {
    let c = cell.interior_point().unwrap();
    let mut out = vec![c.clone()];
    if cell.is_bounded() {
        let q = BigRational::new(2.into(), 5.into());
        for v in cell.vertices().unwrap() {
            out.push(&c + &(&v - &c).scale(&q));
        }
    }
    out
}

#[test]
fn closed_form_return_map_matches_propagation() {
    for n in [5, 7, 9] {
        let closed = return_map_v0(p(n)).unwrap();
        let prop = return_map_v0_by_propagation(p(n)).unwrap();
        assert_eq!(closed.map.atoms().len(), n as usize);
        assert_eq!(prop.map.atoms().len(), n as usize);
        assert!(closed.map.agrees_with(&prop.map).unwrap().is_ok());
        assert_eq!(closed.times, (2..=n as usize + 1).collect::<Vec<_>>());
    }
}

#[test]
fn u2_is_invariant_under_f1() {
    for n in [5, 7, 9, 11] {
        let f1 = return_map_v0(p(n)).unwrap();
        let r = restrict_to_u2(&f1).unwrap();
        let mut inside = 0;
        for a in f1.map.atoms() {
            if a.domain.subset_of(&r.u2).unwrap() {
                inside += 1;
                assert!(a.domain.image(&a.iso).unwrap().subset_of(&r.u2).unwrap(), "N={n}");
            }
        }
        assert_eq!(inside, (n as usize - 1) / 2);
    }
}

#[test]
fn triangle_pieces_are_symmetric_about_their_axes() {
    for n in 3..=12 {
        let mut ts = vec![f3_direct(p(n)).unwrap()];
        if n % 2 == 1 {
            ts.push(f2_direct(p(n)).unwrap());
        }
        for t in ts {
            for (c, v) in t.pieces.iter().zip(&t.v) {
                assert!(c.image(v).unwrap().same_as(c).unwrap());
                assert!(v.compose(v).is_identity());
            }
            assert!(t.triangle.image(&t.u).unwrap().same_as(&t.triangle).unwrap());
        }
    }
}

/// The angle at `A_i` between `A_(i-1)` and `B_i` is `i theta`, with
/// `A_0 = O`: checked as `Re(x conj y) = cos(i theta) |x| |y|` squared, with
/// matching signs.
#[test]
fn f2_angle_bookkeeping() {
    for n in [5, 7, 9, 11, 13] {
        let pr = p(n);
        let t = f2_direct(pr).unwrap();
        let mut prev = t.o.clone();
        for (i, (a, b)) in t.a.iter().zip(&t.b).enumerate() {
            let x = &prev - a;
            let y = b - a;
            let dot = (&x * &y.conj()).re();
            let c = pr.cos(i as i64 + 1);
            assert_eq!(dot.sign_real().unwrap(), c.sign_real().unwrap(), "N={n} i={}", i + 1);
            assert_eq!(&dot * &dot, &(&c * &c) * &(&x.norm_sq() * &y.norm_sq()), "N={n} i={}", i + 1);
            prev = a.clone();
        }
    }
}

/// Floating-point check of both closed forms.
#[test]
fn closed_forms_agree_with_floating_point() {
    for n in 3..=15u32 {
        let th = std::f64::consts::PI / n as f64;
        let a3 = expected_alpha_f3(p(n)).unwrap().to_f64().0;
        assert!((a3 + th.cos() / (1.0 + th.cos())).abs() < 1e-12);
        if n % 2 == 1 {
            let a2 = expected_alpha_f2(p(n)).unwrap().to_f64().0;
            let s = (th / 2.0).sin();
            assert!((a2 + s / (1.0 + s)).abs() < 1e-12);
        }
    }
}

#[test]
fn symmetric_pairs_satisfy_fuf_equals_u() {
    for n in [5, 7] {
        for t in [f2_direct(p(n)).unwrap(), f3_direct(p(n)).unwrap()] {
            let f = &t.map;
            let u = &t.pair.u;
            for a in f.atoms() {
                for z in samples(&a.domain) {
                    let fz = f.evaluate(&z).unwrap().unwrap();
                    let Some(ufz) = u.evaluate(&fz).unwrap() else { continue };
                    if let Some(w) = f.evaluate(&ufz).unwrap() {
                        assert_eq!(Some(w), u.evaluate(&z).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn evaluation_is_injective_on_samples() {
    let t = f2_direct(p(7)).unwrap();
    let mut pts = Vec::new();
    for a in t.map.atoms() {
        pts.extend(samples(&a.domain));
    }
    let imgs: Vec<CPoint> = pts.iter().map(|z| t.map.evaluate(z).unwrap().unwrap()).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            assert_eq!(pts[i] == pts[j], imgs[i] == imgs[j]);
        }
    }
}

#[test]
fn refinement_levels_are_images_of_parents() {
    let t = f3_direct(p(5)).unwrap();
    let tree = refine_pieces(&t.map, 3, 10_000).unwrap();
    for w in tree.forward.windows(2) {
        for piece in &w[1] {
            let parent = &w[0][piece.parent.unwrap()].cell;
            let found = t.map.atoms().iter().any(|a| match parent.intersect(&a.domain).unwrap() {
                Some(q) => q.image(&a.iso).unwrap().same_as(&piece.cell).unwrap(),
                None => false,
            });
            assert!(found);
        }
    }
}

#[test]
fn rotation_number_is_scale_invariant() {
    let t = f2_direct(p(7)).unwrap();
    let c = certify_nonperiodic(&t.map, &t.pair).unwrap();
    let g = c.return_map.unwrap();
    let alpha = recognize_rotation(&g).unwrap().unwrap();
    for s in [CycNum::from_ratio(1, 7, 3), &CycNum::one(14) + &CycNum::root_of_unity(14, 1).re()] {
        assert_eq!(s.sign_real().unwrap(), Ordering::Greater);
        assert_eq!(recognize_rotation(&g.scaled(&s)).unwrap(), Some(alpha.clone()));
    }
}

#[test]
fn certificates_and_factorization() {
    for (n, f2) in [(3u32, false), (4, false), (5, true), (5, false), (7, true)] {
        let pr = p(n);
        let t = if f2 { f2_direct(pr) } else { f3_direct(pr) }.unwrap();
        let c = certify_nonperiodic(&t.map, &t.pair).unwrap();
        let want = if f2 { expected_alpha_f2(pr) } else { expected_alpha_f3(pr) }.unwrap();
        assert_eq!(c.alpha, Some(want));
        assert!(c.double_jump);
        let expected = if n == 3 { Verdict::Inconclusive } else { Verdict::NotPeriodic };
        assert_eq!(c.verdict, expected);
        assert!(BoundarySystem::new(&t.map, &t.pair).unwrap().factorization_holds(4).unwrap());
    }
}

#[test]
fn equilateral_case_is_periodic() {
    let t = f3_direct(p(3)).unwrap();
    assert!(hecke_relations_check(&t.map, &t.pair, 3).unwrap().all_hold());
    let scan = detect_periodic_cells(&t.map, 10, 1000).unwrap();
    assert!(scan.covers_everything());
    assert_eq!(scan.cells.len(), 1);
    assert_eq!(scan.cells[0].period, 3);
}
