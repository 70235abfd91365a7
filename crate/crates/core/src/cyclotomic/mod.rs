//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! A [`CycNum`] is a polynomial in `zeta_n` of degree below `phi(n)` with a
//! common positive denominator, reduced modulo the n-th cyclotomic
//! polynomial. The representation is canonical, so equality within one
//! conductor is structural. Values with different conductors are embedded
//! into the least common multiple before they are combined or compared.

mod field;
pub mod linalg;
pub mod numeric;

use alloc::borrow::Cow;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use field::Field;
pub use field::{cyclotomic_poly, MAX_CONDUCTOR};
pub use numeric::{rational_to_decimal, CertifiedInterval, MAX_BITS};
use numeric::{certified_sign, level_bits, weighted, LEVELS};

/// Exact element of a cyclotomic field.
#[derive(Clone)]
pub struct CycNum {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

fn get_field(n: u32) -> Arc<Field> {
    match field::field(n) {
        Ok(f) => f,
        Err(_) => panic!("conductor {n} outside 1..={MAX_CONDUCTOR}"),
    }
}

impl CycNum {
    fn normalized(field: Arc<Field>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if num.iter().all(Zero::is_zero) {
            return CycNum { field, num, den: BigInt::one() };
        }
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            for c in &mut num {
                *c /= &g;
            }
            den /= &g;
        }
        CycNum { field, num, den }
    }

    /// Zero of `Q(zeta_n)`.
    ///
    /// # Panics
    /// If `n` is 0 or above [`MAX_CONDUCTOR`]; the same holds for the other
    /// infallible constructors.
    #[must_use]
    pub fn zero(n: u32) -> Self {
        let field = get_field(n);
        let num = vec![BigInt::zero(); field.phi];
        CycNum { field, num, den: BigInt::one() }
    }

    #[must_use]
    pub fn one(n: u32) -> Self {
        Self::from_int(n, 1)
    }

    #[must_use]
    pub fn from_int(n: u32, v: i64) -> Self {
        Self::from_bigint(n, BigInt::from(v))
    }

    #[must_use]
    pub fn from_bigint(n: u32, v: BigInt) -> Self {
        let mut z = Self::zero(n);
        z.num[0] = v;
        z
    }

    #[must_use]
    pub fn from_ratio(n: u32, p: i64, q: i64) -> Self {
        Self::from_rational(n, &BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    #[must_use]
    pub fn from_rational(n: u32, q: &BigRational) -> Self {
        let field = get_field(n);
        let mut num = vec![BigInt::zero(); field.phi];
        num[0] = q.numer().clone();
        Self::normalized(field, num, q.denom().clone())
    }

    /// `zeta_n^k` for any integer `k`.
    #[must_use]
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let field = get_field(n);
        let e = k.rem_euclid(i64::from(n)) as usize;
        let mut num = vec![BigInt::zero(); field.phi];
        for &(i, c) in &field.powers[e] {
            num[i] = BigInt::from(c);
        }
        CycNum { field, num, den: BigInt::one() }
    }

    /// The imaginary unit, in conductor 4.
    #[must_use]
    pub fn i() -> Self {
        Self::root_of_unity(4, 1)
    }

    /// `sum_j coeffs[j] * zeta_n^j`, reduced. Any number of coefficients is
    /// accepted.
    pub fn from_coeffs(n: u32, coeffs: &[BigRational]) -> Result<Self> {
        let field = field::field(n)?;
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let mut num = vec![BigInt::zero(); field.phi];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer() * (&den / c.denom());
            for &(i, p) in &field.powers[j % n as usize] {
                num[i] += &scaled * p;
            }
        }
        Ok(Self::normalized(field, num, den))
    }

    #[must_use]
    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    /// Dimension of the field over the rationals.
    #[must_use]
    pub fn degree(&self) -> usize {
        self.field.phi
    }

    /// Coefficients in the power basis `1, zeta, ..., zeta^(phi-1)`.
    #[must_use]
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Integer numerators over the common denominator.
    #[must_use]
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    #[must_use]
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    #[must_use]
    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational number, when it is one.
    #[must_use]
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Image under the field embedding into `Q(zeta_m)`; `m` must be a
    /// multiple of the conductor.
    pub fn embed(&self, m: u32) -> Result<Self> {
        let n = self.field.n;
        if m == n {
            return Ok(self.clone());
        }
        if !m.is_multiple_of(n) {
            return Err(Error::BadConductor(u64::from(m)));
        }
        let target = field::field(m)?;
        let step = (m / n) as usize;
        let mut num = vec![BigInt::zero(); target.phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(i, p) in &target.powers[(j * step) % m as usize] {
                num[i] += c * p;
            }
        }
        Ok(CycNum { field: target, num, den: self.den.clone() })
    }

    fn pair<'a>(a: &'a Self, b: &'a Self) -> (Cow<'a, Self>, Cow<'a, Self>) {
        if a.field.n == b.field.n {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let m = field::lcm(a.field.n, b.field.n);
        let lift = |x: &'a Self| -> Cow<'a, Self> {
            if x.field.n == m {
                Cow::Borrowed(x)
            } else {
                Cow::Owned(x.embed(m).expect("lcm conductor in range"))
            }
        };
        (lift(a), lift(b))
    }

    fn add_same(a: &Self, b: &Self, negate_b: bool) -> Self {
        let num: Vec<BigInt> = if a.den == b.den {
            a.num
                .iter()
                .zip(&b.num)
                .map(|(x, y)| if negate_b { x - y } else { x + y })
                .collect()
        } else {
            a.num
                .iter()
                .zip(&b.num)
                .map(|(x, y)| {
                    let l = x * &b.den;
                    let r = y * &a.den;
                    if negate_b {
                        l - r
                    } else {
                        l + r
                    }
                })
                .collect()
        };
        let den = if a.den == b.den { a.den.clone() } else { &a.den * &b.den };
        Self::normalized(a.field.clone(), num, den)
    }

    fn mul_same(a: &Self, b: &Self) -> Self {
        let f = &a.field;
        let phi = f.phi;
        let n = f.n as usize;
        if a.is_zero() || b.is_zero() {
            return CycNum::zero(f.n);
        }
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut num: Vec<BigInt> = prod.drain(..phi).collect();
        for (k, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(i, p) in &f.powers[(phi + k) % n] {
                num[i] += &c * p;
            }
        }
        Self::normalized(f.clone(), num, &a.den * &b.den)
    }

    /// Applies the exponent substitution `zeta^j -> zeta^(e(j))`.
    fn map_exponents(&self, e: impl Fn(usize) -> usize) -> Self {
        let f = &self.field;
        let n = f.n as usize;
        let mut num = vec![BigInt::zero(); f.phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(i, p) in &f.powers[e(j) % n] {
                num[i] += c * p;
            }
        }
        CycNum { field: f.clone(), num, den: self.den.clone() }
    }

    /// Complex conjugate, the automorphism `zeta -> zeta^-1`.
    #[must_use]
    pub fn conj(&self) -> Self {
        let n = self.field.n as usize;
        self.map_exponents(|j| n - j)
    }

    /// The automorphism `zeta -> zeta^k`; `k` must be a unit mod the conductor.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let n = i64::from(self.field.n);
        let k = k.rem_euclid(n);
        if k.gcd(&n) != 1 {
            return Err(Error::InvalidParameter(alloc::format!("{k} is not a unit mod {n}")));
        }
        Ok(self.map_exponents(|j| (j as i64 * k % n) as usize))
    }

    /// Multiplies by `zeta_n^k` without a full product.
    #[must_use]
    pub fn mul_root(&self, k: i64) -> Self {
        let n = i64::from(self.field.n);
        let k = k.rem_euclid(n) as usize;
        self.map_exponents(|j| j + k)
    }

    #[must_use]
    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::normalized(self.field.clone(), num, &self.den * q.denom())
    }

    #[must_use]
    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// `|z|^2 = z * conj(z)`.
    #[must_use]
    pub fn norm_sq(&self) -> Self {
        self * &self.conj()
    }

    /// `(z + conj z) / 2`.
    #[must_use]
    pub fn re(&self) -> Self {
        (self + &self.conj()).scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    /// Multiplicative inverse by solving `self * x = 1` in the power basis.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.n;
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(n, &q.recip()));
        }
        let phi = self.field.phi;
        let cols: Vec<Vec<BigRational>> = (0..phi)
            .map(|j| {
                let c = CycNum { field: self.field.clone(), num: self.num.clone(), den: BigInt::one() }
                    .mul_root(j as i64);
                c.num.into_iter().map(BigRational::from_integer).collect()
            })
            .collect();
        let mut rhs = vec![BigRational::zero(); phi];
        rhs[0] = BigRational::from_integer(self.den.clone());
        let x = linalg::solve_columns(&cols, &rhs)?;
        Self::from_coeffs(n, &x)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// `self^k` for `k >= 0`.
    #[must_use]
    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    fn signed_sum(&self, use_sin: bool) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        for level in 0..LEVELS {
            let t = self.field.table(level);
            let (s, e) = weighted(&self.num, if use_sin { &t.sin } else { &t.cos });
            if let Some(o) = certified_sign(&s, &e) {
                return Ok(o);
            }
            if level == 0 {
                let c = self.conj();
                let vanishes = if use_sin { *self == c } else { (self + &c).is_zero() };
                if vanishes {
                    return Ok(Ordering::Equal);
                }
            }
        }
        Err(Error::PrecisionExhausted { bits: MAX_BITS })
    }

    /// Sign of the real part. Zero is decided exactly, nonzero signs by
    /// certified evaluation with doubling precision.
    pub fn re_sign(&self) -> Result<Ordering> {
        self.signed_sum(false)
    }

    /// Sign of the imaginary part.
    pub fn im_sign(&self) -> Result<Ordering> {
        self.signed_sum(true)
    }

    /// Sign of a real element; fails with [`Error::NotReal`] otherwise.
    pub fn sign_real(&self) -> Result<Ordering> {
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        self.re_sign()
    }

    /// Orders two real elements.
    pub fn cmp_real(&self, other: &Self) -> Result<Ordering> {
        (self - other).sign_real()
    }

    fn interval(&self, bits: u32, use_sin: bool) -> CertifiedInterval {
        let level = (0..LEVELS).find(|&l| level_bits(l) >= bits).unwrap_or(LEVELS - 1);
        let t = self.field.table(level);
        let (s, e) = weighted(&self.num, if use_sin { &t.sin } else { &t.cos });
        CertifiedInterval::from_sum(&s, &e, &self.den, t.bits)
    }

    /// Enclosure of the real part at no less than `bits` bits (capped at
    /// [`MAX_BITS`]).
    #[must_use]
    pub fn re_interval(&self, bits: u32) -> CertifiedInterval {
        self.interval(bits, false)
    }

    #[must_use]
    pub fn im_interval(&self, bits: u32) -> CertifiedInterval {
        self.interval(bits, true)
    }

    /// Floating approximation `(re, im)` for display and plotting.
    #[must_use]
    pub fn to_f64(&self) -> (f64, f64) {
        (self.re_interval(64).to_f64(), self.im_interval(64).to_f64())
    }

    /// Decimal rendering of the real and imaginary parts with `digits`
    /// fractional digits. The last digit may be off by one unit.
    #[must_use]
    pub fn to_decimal(&self, digits: usize) -> (alloc::string::String, alloc::string::String) {
        let bits = (digits as u32) * 4 + 16;
        (
            rational_to_decimal(&self.re_interval(bits).midpoint(), digits),
            rational_to_decimal(&self.im_interval(bits).midpoint(), digits),
        )
    }

    /// Coordinates of `self` with respect to `basis` over the rationals.
    pub fn rational_coordinates(&self, basis: &[CycNum]) -> Result<Vec<BigRational>> {
        let mut m = self.field.n;
        for b in basis {
            m = field::lcm(m, b.field.n);
        }
        field::field(m)?;
        let cols: Vec<Vec<BigRational>> = basis.iter().map(|b| b.embed(m).map(|e| e.coeffs())).collect::<Result<_>>()?;
        let rhs = self.embed(m)?.coeffs();
        linalg::solve_columns(&cols, &rhs)
    }

    /// Structural key: equal keys iff equal values of the same conductor.
    #[must_use]
    pub fn key(&self) -> (u32, &[BigInt], &BigInt) {
        (self.field.n, &self.num, &self.den)
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.field.n == other.field.n {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = Self::pair(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycNum {}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(z{})[", self.field.n)?;
        for (i, c) in self.coeffs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                let (a, b) = CycNum::pair(self, rhs);
                $body(&*a, &*b)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
        impl $tr<CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| CycNum::add_same(a, b, false));
binop!(Sub, sub, |a, b| CycNum::add_same(a, b, true));
binop!(Mul, mul, CycNum::mul_same);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}
