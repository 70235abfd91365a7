//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a failure status if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use pwiso_core::billiard::*;
use pwiso_core::certify::*;
use pwiso_core::engine::*;
use pwiso_core::geometry::{ConvexCell, CPoint};
use pwiso_core::iet::FlipIet;
use pwiso_core::saf::{saf_invariant, SafBasis, SafInvariant};
use pwiso_core::CycNum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Debug>(x: T) -> String {
    format!("{x:?}")
}

fn params(n: u32) -> Result<BilliardParams, String> {
    BilliardParams::new(n).map_err(e)
}

fn alpha_of(t: &TriangleConstruction) -> Result<CycNum, String> {
    let c = certify_nonperiodic(&t.map, &t.pair).map_err(e)?;
    c.alpha.ok_or_else(|| "boundary return map is not a rotation".to_string())
}

fn c1_f2_alpha() -> Outcome {
    for n in [5, 7, 9, 11] {
        let t0 = Instant::now();
        let p = params(n)?;
        let got = alpha_of(&f2_direct(p).map_err(e)?)?;
        let want = expected_alpha_f2(p).map_err(e)?;
        ensure(got == want, || format!("N={n}: alpha {:?} != {:?}", got.to_f64().0, want.to_f64().0))?;
        let dt = t0.elapsed();
        ensure(dt < Duration::from_secs(5), || format!("N={n} took {dt:?}"))?;
    }
    // independent value for N = 5: 2 - sqrt 5, with sqrt 5 = 1 + 4 cos(2 pi / 5)
    let z5 = CycNum::root_of_unity(5, 1);
    let sqrt5 = &CycNum::one(5) + &(&(&z5 + &z5.conj()) * &CycNum::from_int(5, 2));
    ensure(expected_alpha_f2(params(5)?).map_err(e)? == &CycNum::from_int(5, 2) - &sqrt5, || "N=5 is not 2 - sqrt 5".into())?;
    Ok("N = 5, 7, 9, 11".into())
}

fn c2_f3_alpha() -> Outcome {
    for n in 3..=12 {
        let p = params(n)?;
        let got = alpha_of(&f3_direct(p).map_err(e)?)?;
        let want = expected_alpha_f3(p).map_err(e)?;
        ensure(got == want, || format!("N={n}: alpha {:?} != {:?}", got.to_f64().0, want.to_f64().0))?;
        if n == 3 {
            ensure(got == CycNum::from_ratio(1, -1, 3), || "N=3 alpha is not -1/3".into())?;
        }
        if n == 4 {
            let z8 = CycNum::root_of_unity(8, 1);
            let sqrt2 = &z8 + &z8.conj();
            ensure(got == &CycNum::one(8) - &sqrt2, || "N=4 alpha is not 1 - sqrt 2".into())?;
        }
    }
    Ok("N = 3..=12".into())
}

fn c3_certify() -> Outcome {
    let limit = Duration::from_secs(60);
    let mut slowest = Duration::ZERO;
    let mut jobs: Vec<(&str, u32)> = (5..=21).step_by(2).map(|n| ("f2", n)).collect();
    jobs.extend((4..=21).map(|n| ("f3", n)));
    for (kind, n) in jobs {
        let t0 = Instant::now();
        let p = params(n)?;
        let t = if kind == "f2" { f2_direct(p) } else { f3_direct(p) }.map_err(e)?;
        let c = certify_nonperiodic(&t.map, &t.pair).map_err(e)?;
        let dt = t0.elapsed();
        slowest = slowest.max(dt);
        ensure(c.verdict == Verdict::NotPeriodic, || format!("{kind} N={n}: {:?}", c.verdict))?;
        ensure(dt < limit, || format!("{kind} N={n} took {dt:?}"))?;
    }
    let t = f3_direct(params(3)?).map_err(e)?;
    let c = certify_nonperiodic(&t.map, &t.pair).map_err(e)?;
    ensure(c.verdict == Verdict::Inconclusive, || format!("f3 N=3: {:?}", c.verdict))?;
    let scan = detect_periodic_cells(&t.map, 12, 10_000).map_err(e)?;
    ensure(scan.covers_everything(), || "f3 N=3 periodic cells do not cover".into())?;
    ensure(scan.cells.iter().all(|c| c.period == 3), || "f3 N=3 period is not 3".into())?;
    Ok(format!("35 maps not periodic, slowest {slowest:.2?}; f3 N=3 inconclusive with period 3"))
}

/// Positive rational weights summing to one.
fn weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<BigRational> {
    let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=40)).collect();
    let s: i64 = raw.iter().sum();
    raw.iter().map(|&r| BigRational::new(r.into(), s.into())).collect()
}

fn random_point_in(cell: &ConvexCell, rng: &mut ChaCha8Rng, n: u32) -> Result<CPoint, String> {
    let bounded = if cell.is_bounded() {
        cell.clone()
    } else {
        let r = 12;
        let i = CycNum::i();
        let sq: Vec<CPoint> = [(-r, -r), (r, -r), (r, r), (-r, r)]
            .iter()
            .map(|&(x, y)| &CycNum::from_int(n, x) + &(&i * &CycNum::from_int(n, y)))
            .collect();
        let bx = ConvexCell::polygon(&sq).map_err(e)?;
        cell.intersect(&bx).map_err(e)?.ok_or("atom misses the sampling box")?
    };
    let v = bounded.vertices().map_err(e)?;
    let w = weights(rng, v.len());
    let mut z = CycNum::zero(n);
    for (p, c) in v.iter().zip(&w) {
        z = &z + &p.scale(c);
    }
    Ok(z)
}

fn c4_return_table() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut seeds = 0;
    for n in [5u32, 7, 9] {
        let t0 = Instant::now();
        let p = params(n)?;
        let closed = return_map_v0(p).map_err(e)?;
        let prop = return_map_v0_by_propagation(p).map_err(e)?;
        ensure(closed.map.atoms().len() == n as usize, || format!("N={n}: {} atoms", closed.map.atoms().len()))?;
        ensure(closed.map.agrees_with(&prop.map).map_err(e)?.is_ok(), || format!("N={n}: closed form differs"))?;
        for (k, a) in closed.map.atoms().iter().enumerate() {
            // the propagated atom covering this one has the same return time
            let j = prop
                .map
                .atoms()
                .iter()
                .position(|b| b.domain.same_as(&a.domain).unwrap_or(false))
                .ok_or_else(|| format!("N={n}: atom {k} not found by propagation"))?;
            ensure(prop.times[j] == closed.times[k], || format!("N={n}: atom {k} time mismatch"))?;
        }
        let ind = induced_map(p).map_err(e)?;
        for (k, a) in closed.map.atoms().iter().enumerate() {
            for _ in 0..100 {
                let z = random_point_in(&a.domain, &mut rng, p.conductor())?;
                let mut w = ind.map.evaluate(&z).map_err(e)?.ok_or("seed off U0")?;
                let mut t = 1;
                while !ind.v0.contains(&w).map_err(e)? {
                    w = ind.map.evaluate(&w).map_err(e)?.ok_or("orbit left U0")?;
                    t += 1;
                    ensure(t <= 2 * n as usize + 2, || "no return".into())?;
                }
                ensure(t == closed.times[k] && t == k + 2, || format!("N={n}: atom {k} seed returned at {t}"))?;
                ensure(w == a.iso.apply(&z), || format!("N={n}: atom {k} seed returned elsewhere"))?;
                seeds += 1;
            }
        }
        let dt = t0.elapsed();
        ensure(dt < Duration::from_secs(10), || format!("N={n} took {dt:?}"))?;
    }
    Ok(format!("closed form = propagation for N = 5, 7, 9; {seeds} seeds"))
}

fn involution_checks(pair: &NousPair, f: &PiecewiseIsometry, label: &str) -> Result<(), String> {
    pair.check(f).map_err(|x| format!("{label}: {x}"))?;
    let ufu = PiecewiseIsometry::compose(&pair.u, &PiecewiseIsometry::compose(f, &pair.u).map_err(e)?).map_err(e)?;
    // u ∘ f ∘ u is defined on u(dom f); compare with f^-1 there
    ensure(f.inverse().agrees_with(&ufu).map_err(e)?.is_ok(), || format!("{label}: f^-1 != u f u"))
}

fn c5_involutions() -> Outcome {
    for n in [5u32, 7, 9] {
        let p = params(n)?;
        let f1 = return_map_v0(p).map_err(e)?;
        involution_checks(&f1.pair, &f1.map, &format!("f1 N={n}"))?;
        let f2 = restrict_to_u2(&f1).map_err(e)?;
        involution_checks(&f2.pair, &f2.map, &format!("f2 N={n}"))?;
        let d = f2_direct(p).map_err(e)?;
        involution_checks(&d.pair, &d.map, &format!("direct f2 N={n}"))?;
    }
    Ok("v1^2, v2^2, u^2 and f^-1 = u f u for N = 5, 7, 9".into())
}

fn random_real(rng: &mut ChaCha8Rng, basis: &SafBasis) -> CycNum {
    loop {
        let mut x = CycNum::zero(basis.conductor());
        for b in basis.elements() {
            let c: i64 = rng.gen_range(-3..=3);
            x = &x + &b.scale(&BigRational::from_integer(c.into()));
        }
        let x = &x + &CycNum::from_ratio(basis.conductor(), rng.gen_range(1..=5), rng.gen_range(1..=5));
        match x.re_sign() {
            Ok(std::cmp::Ordering::Greater) => return x,
            Ok(std::cmp::Ordering::Less) => return -x,
            _ => {}
        }
    }
}

fn random_iet(rng: &mut ChaCha8Rng, basis: &SafBasis, total: Option<&CycNum>) -> FlipIet {
    loop {
        let k = rng.gen_range(2..=6);
        let mut lengths: Vec<CycNum> = (0..k).map(|_| random_real(rng, basis)).collect();
        if let Some(t) = total {
            let head: CycNum = lengths[..k - 1].iter().fold(CycNum::zero(1), |s, x| &s + x);
            let last = t - &head;
            if last.re_sign() != Ok(std::cmp::Ordering::Greater) {
                // rescale the head into the available length
                let s = t.checked_div(&(&head + &lengths[k - 1])).expect("positive");
                lengths = lengths.iter().map(|x| x * &s).collect();
            } else {
                lengths[k - 1] = last;
            }
        }
        let mut perm: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        if let Ok(g) = FlipIet::from_permutation(&lengths, &perm) {
            return g;
        }
    }
}

fn c6_saf() -> Outcome {
    let basis = SafBasis::real_cyclotomic(40).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let inv = |g: &FlipIet| saf_invariant(g, &basis).map_err(e);
    for i in 0..200 {
        let g = random_iet(&mut rng, &basis, None);
        let h = random_iet(&mut rng, &basis, Some(&g.lengths()[0]));
        let (ig, ih) = (inv(&g)?, inv(&h)?);
        ensure(ig.is_antisymmetric(), || format!("case {i}: not antisymmetric"))?;
        let gh = FlipIet::compose(&g, &h).map_err(e)?;
        ensure(inv(&gh)? == ig.add(&ih), || format!("case {i}: not additive"))?;
        let conj = FlipIet::compose(&h, &FlipIet::compose(&g, &h.inverse()).map_err(e)?).map_err(e)?;
        ensure(inv(&conj)? == ig, || format!("case {i}: not conjugation invariant"))?;
        ensure(inv(&g.inverse())?.add(&ig).is_zero(), || format!("case {i}: inverse does not negate"))?;
        // rotations of the unit circle give 1 ∧ alpha
        let a = random_real(&mut rng, &basis);
        let alpha = a.checked_div(&(&a + &random_real(&mut rng, &basis))).map_err(e)?;
        let r = FlipIet::rotation(&CycNum::one(40), &alpha).map_err(e)?;
        ensure(inv(&r)? == SafInvariant::wedge(&basis, &CycNum::one(40), &alpha).map_err(e)?, || format!("case {i}: rotation"))?;
    }
    let q = FlipIet::rotation(&CycNum::one(1), &CycNum::from_ratio(1, 3, 7)).map_err(e)?;
    ensure(inv(&q)?.is_zero(), || "rational rotation".into())?;
    let c = &CycNum::root_of_unity(40, 1) + &CycNum::root_of_unity(40, -1);
    let l = &c - &CycNum::one(40);
    let swap = FlipIet::from_permutation(&[l.clone(), c.clone(), l.clone()], &[2, 1, 0]).map_err(e)?;
    ensure(inv(&swap)?.is_zero(), || "interval swap".into())?;
    let irr = FlipIet::rotation(&CycNum::one(40), &(&c - &CycNum::one(40))).map_err(e)?;
    ensure(!inv(&irr)?.is_zero(), || "irrational rotation has zero invariant".into())?;
    Ok("200 random pairs: antisymmetry, additivity, conjugation, rotations, swaps".into())
}

fn c7_factorization() -> Outcome {
    let mut done = Vec::new();
    for n in 3..=9u32 {
        let p = params(n)?;
        let mut maps = vec![("f3", f3_direct(p).map_err(e)?)];
        if n % 2 == 1 && n >= 5 {
            maps.push(("f2", f2_direct(p).map_err(e)?));
        }
        for (kind, t) in maps {
            let sys = BoundarySystem::new(&t.map, &t.pair).map_err(e)?;
            ensure(sys.factorization_holds(4).map_err(e)?, || format!("{kind} N={n}: R != w s v"))?;
            done.push(format!("{kind}:{n}"));
        }
    }
    Ok(format!("{} maps", done.len()))
}

fn c8_hecke() -> Outcome {
    let t = f3_direct(params(3)?).map_err(e)?;
    let r = hecke_relations_check(&t.map, &t.pair, 3).map_err(e)?;
    ensure(r.all_hold(), || format!("{r:?}"))?;
    Ok(format!("{} relations and Inv(wv) = 0 on {} cell(s)", r.relations.len(), r.cells))
}

fn c9_cross_validate() -> Outcome {
    for n in [5u32, 7, 9] {
        let p = params(n)?;
        let r = restrict_to_u2(&return_map_v0(p).map_err(e)?).map_err(e)?;
        let d = f2_direct(p).map_err(e)?;
        f2_cross_validate(&r, &d).map_err(|x| format!("N={n}: {x}"))?;
    }
    Ok("restricted and direct f2 are similar for N = 5, 7, 9".into())
}

fn c10_aperiodic_orbit() -> Outcome {
    let t0 = Instant::now();
    let p = params(5)?;
    let t = f2_direct(p).map_err(e)?;
    let (ak, bk) = (t.a.last().unwrap().clone(), t.b.last().unwrap().clone());
    let mut found = None;
    'search: for d in 2i64..60 {
        for x in 1..d {
            for y in 1..d - x {
                let z = &ak.scale(&BigRational::new(x.into(), d.into())) + &bk.scale(&BigRational::new(y.into(), d.into()));
                let r = orbit(&t.map, &z, 10_000).map_err(e)?;
                if r.status == OrbitStatus::Open {
                    found = Some((x, y, d, r));
                    break 'search;
                }
            }
        }
    }
    let (x, y, d, r) = found.ok_or("no seed survives 10^4 steps")?;
    ensure(r.distinct == 10_001, || format!("{} distinct iterates", r.distinct))?;
    let dt = t0.elapsed();
    ensure(dt < Duration::from_secs(120), || format!("took {dt:?}"))?;
    let scan = detect_periodic_cells(&t.map, 8, 200_000).map_err(e)?;
    ensure(!scan.truncated, || "scan truncated".into())?;
    ensure(!scan.cells.is_empty(), || "no periodic cells up to level 8".into())?;
    for c in &scan.cells {
        ensure(verify_periodic_cell(&t.map, c).map_err(e)?, || format!("cell of period {} fails", c.period))?;
    }
    ensure(!scan.covers_everything(), || "level 8 claims full periodicity".into())?;
    Ok(format!(
        "seed ({x}/{d}) A + ({y}/{d}) B open after 10^4 steps in {dt:.2?}; {} periodic cells verified",
        scan.cells.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("f2 rotation number exact", c1_f2_alpha),
        ("f3 rotation number exact", c2_f3_alpha),
        ("certificates for f2 and f3", c3_certify),
        ("return table of f0 to V0", c4_return_table),
        ("involution identities", c5_involutions),
        ("SAF invariant properties", c6_saf),
        ("boundary factorization R = w s v", c7_factorization),
        ("periodic graph relations", c8_hecke),
        ("f2 cross-validation", c9_cross_validate),
        ("long exact orbit and periodic cells", c10_aperiodic_orbit),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = run();
        let dt = t0.elapsed();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({dt:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why} ({dt:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
