//! Fixed-point tables of cos and sin at the n-th roots of unity, used to
//! certify signs of real and imaginary parts.
//!
//! Entry `j` of a `b`-bit table is `round(cos(2 pi j / n) * 2^b)` with error
//! at most one unit, so a weighted sum is off by at most the sum of the
//! absolute weights.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Number of precision levels: 64, 128, ..., 16384 bits.
pub const LEVELS: usize = 9;
const GUARD: u32 = 64;

pub(crate) fn level_bits(level: usize) -> u32 {
    64 << level
}

/// Highest working precision in bits.
pub const MAX_BITS: u32 = 64 << (LEVELS - 1);

pub(crate) struct Table {
    pub(crate) bits: u32,
    pub(crate) cos: Vec<BigInt>,
    pub(crate) sin: Vec<BigInt>,
}

impl Table {
    pub(crate) fn build(n: u32, phi: usize, level: usize) -> Self {
        let bits = level_bits(level);
        let w = bits + GUARD;
        let pi = pi_fixed(w);
        let mut cos = Vec::with_capacity(phi);
        let mut sin = Vec::with_capacity(phi);
        let half = BigInt::one() << (GUARD - 1);
        for j in 0..phi as i64 {
            let n = i64::from(n);
            // reduce the angle to (-pi, pi]
            let mut jr = j % n;
            if 2 * jr > n {
                jr -= n;
            }
            let t = (&pi * BigInt::from(2 * jr)) / BigInt::from(n);
            let (c, s) = cos_sin_fixed(&t, w);
            cos.push((c + &half) >> GUARD);
            sin.push((s + &half) >> GUARD);
        }
        Table { bits, cos, sin }
    }
}

/// pi * 2^w, truncated, by Machin's formula.
fn pi_fixed(w: u32) -> BigInt {
    let a = arctan_inv(5, w);
    let b = arctan_inv(239, w);
    (a * 16) - (b * 4)
}

fn arctan_inv(x: u32, w: u32) -> BigInt {
    let one = BigInt::one() << w;
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = one / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u32 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// Taylor series for |t| <= pi in fixed point with `w` fractional bits.
fn cos_sin_fixed(t: &BigInt, w: u32) -> (BigInt, BigInt) {
    let t2 = (t * t) >> w;
    let mut c = BigInt::one() << w;
    let mut term = c.clone();
    let mut k: u64 = 1;
    loop {
        term = ((&term * &t2) >> w) / BigInt::from((2 * k - 1) * (2 * k));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            c -= &term;
        } else {
            c += &term;
        }
        k += 1;
    }
    let mut s = t.clone();
    let mut term = t.clone();
    let mut k: u64 = 1;
    loop {
        term = ((&term * &t2) >> w) / BigInt::from((2 * k) * (2 * k + 1));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            s -= &term;
        } else {
            s += &term;
        }
        k += 1;
    }
    (c, s)
}

/// Weighted table sum and its error bound.
pub(crate) fn weighted(num: &[BigInt], table: &[BigInt]) -> (BigInt, BigInt) {
    let mut s = BigInt::zero();
    let mut e = BigInt::zero();
    for (a, t) in num.iter().zip(table) {
        if !a.is_zero() {
            s += a * t;
            e += a.abs();
        }
    }
    (s, e)
}

/// Sign of `s` when `|s| > e`.
pub(crate) fn certified_sign(s: &BigInt, e: &BigInt) -> Option<Ordering> {
    if s.abs() > *e {
        Some(if s.sign() == Sign::Minus {
            Ordering::Less
        } else {
            Ordering::Greater
        })
    } else {
        None
    }
}

/// A closed rational interval guaranteed to contain a real quantity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Working precision the bounds were computed at.
    pub bits: u32,
}

impl CertifiedInterval {
    pub(crate) fn from_sum(s: &BigInt, e: &BigInt, den: &BigInt, bits: u32) -> Self {
        let scale = den * (BigInt::one() << bits);
        CertifiedInterval {
            lo: BigRational::new(s - e, scale.clone()),
            hi: BigRational::new(s + e, scale),
            bits,
        }
    }

    #[must_use]
    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    #[must_use]
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    #[must_use]
    pub fn contains(&self, q: &BigRational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    /// Closest double to the midpoint.
    #[must_use]
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    // scale so the integer quotient carries about 64 significant bits
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = 64 - (nb - db);
    let scaled = if shift >= 0 {
        (q.numer() << shift as usize) / q.denom()
    } else {
        q.numer() / (q.denom() << (-shift) as usize)
    };
    let m = scaled.to_f64().unwrap_or(0.0);
    mul_pow2(m, -shift)
}

fn mul_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 0 {
        let step = e.min(1000);
        x *= f64::from_bits(((1023 + step) as u64) << 52);
        e -= step;
    }
    while e < 0 {
        let step = (-e).min(1000);
        x *= f64::from_bits(((1023 - step) as u64) << 52);
        e += step;
    }
    x
}

/// Decimal rendering of `q` rounded to `digits` fractional digits.
#[must_use]
pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, digits);
    let scaled = q * BigRational::from_integer(scale.clone());
    let r = scaled.round().to_integer();
    let neg = r.is_negative();
    let r = r.abs();
    let int = &r / &scale;
    let frac = &r % &scale;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&alloc::format!("{int}"));
    if digits > 0 {
        let f = alloc::format!("{frac}");
        out.push('.');
        for _ in f.len()..digits {
            out.push('0');
        }
        out.push_str(&f);
    }
    out
}
