//! Closed forms `a + b√r` for real elements of degree at most two.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use pwiso_core::CycNum;
use std::cmp::Ordering;

/// `m = s² r` with `r` squarefree as far as trial division up to `limit`
/// finds.
fn split_square(m: &BigInt, limit: u64) -> (BigInt, BigInt) {
    let mut r = m.clone();
    let mut s = BigInt::one();
    let mut d = 2u64;
    while d <= limit && BigInt::from(d) * BigInt::from(d) <= r {
        let dd = BigInt::from(d) * BigInt::from(d);
        while (&r % &dd).is_zero() {
            r /= &dd;
            s *= d;
        }
        d += 1;
    }
    (s, r)
}

fn rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders a positive multiple of a square root.
fn root_term(b: &BigRational, r: &BigInt) -> String {
    let num = if b.numer().is_one() { format!("√{r}") } else { format!("{}√{r}", b.numer()) };
    if b.denom().is_one() {
        num
    } else {
        format!("{num}/{}", b.denom())
    }
}

/// `z` as `a ± b√r` when it is real and has at most one nontrivial Galois
/// conjugate; `None` otherwise.
pub fn quadratic_form(z: &CycNum) -> Option<String> {
    if let Some(q) = z.to_rational() {
        return Some(rational(&q));
    }
    if !z.is_real() {
        return None;
    }
    let n = z.conductor();
    let mut orbit: Vec<CycNum> = vec![z.clone()];
    for k in 2..n {
        if k.gcd(&n) != 1 {
            continue;
        }
        let w = z.galois(i64::from(k)).ok()?;
        if !orbit.contains(&w) {
            orbit.push(w);
            if orbit.len() > 2 {
                return None;
            }
        }
    }
    let [x, y] = orbit.as_slice() else { return None };
    let trace = (x + y).to_rational()?;
    let norm = (x * y).to_rational()?;
    let half = &trace / BigRational::from_integer(2.into());
    let disc = &half * &half - &norm;
    // sqrt(p/q) = sqrt(p q) / q
    let (s, r) = split_square(&(disc.numer() * disc.denom()), 1 << 20);
    let b = BigRational::new(s, disc.denom().clone());
    let sign = (z - &CycNum::from_rational(n, &half)).sign_real().ok()?;
    let root = root_term(&b, &r);
    Some(match (half.is_zero(), sign) {
        (true, Ordering::Less) => format!("−{root}"),
        (true, _) => root,
        (false, Ordering::Less) => format!("{} − {root}", rational(&half)),
        (false, _) => format!("{} + {root}", rational(&half)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt5() -> CycNum {
        let z = CycNum::root_of_unity(5, 1);
        &CycNum::one(5) + &(&(&z + &z.conj()) * &CycNum::from_int(5, 2))
    }

    #[test]
    fn recognises_surds() {
        let s5 = sqrt5();
        assert_eq!(quadratic_form(&(&CycNum::from_int(5, 2) - &s5)).as_deref(), Some("2 − √5"));
        assert_eq!(quadratic_form(&s5.scale(&BigRational::new(3.into(), 2.into()))).as_deref(), Some("3√5/2"));
        let z8 = CycNum::root_of_unity(8, 1);
        let s2 = &z8 + &z8.conj();
        assert_eq!(quadratic_form(&(&CycNum::one(8) - &s2)).as_deref(), Some("1 − √2"));
        assert_eq!(quadratic_form(&(-&s2)).as_deref(), Some("−√2"));
        assert_eq!(quadratic_form(&CycNum::from_ratio(7, -1, 3)).as_deref(), Some("-1/3"));
    }

    #[test]
    fn rejects_higher_degree_and_complex() {
        let z = CycNum::root_of_unity(7, 1);
        assert_eq!(quadratic_form(&(&z + &z.conj())), None);
        assert_eq!(quadratic_form(&CycNum::i()), None);
    }
}
