//! Scalars for the geometric computations: `f64` and an arbitrary-precision
//! binary fixed-point type.
//!
//! [`BigReal`] stores `m · 2^-p` with an integer mantissa `m` and `p` fractional
//! bits. Transcendental functions run with guard bits and are correct to a few
//! units in the last place, which the error bounds in [`crate::geometry`]
//! account for.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field operations and the handful of elementary functions the geometry needs.
pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `x` at the given working precision (ignored by `f64`).
    fn with_bits(x: f64, bits: u32) -> Self;
    fn bits(&self) -> u32;
    fn pi(bits: u32) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn asin(&self) -> Self;
    /// Relative rounding error of one operation.
    fn rel_eps(bits: u32) -> f64;
    /// Absolute rounding error of one operation.
    fn abs_eps(bits: u32) -> f64;

    fn lift(&self, x: f64) -> Self {
        Self::with_bits(x, self.bits())
    }

    fn abs(&self) -> Self {
        if *self < self.lift(0.0) {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn half(&self) -> Self {
        self.clone() * self.lift(0.5)
    }
}

impl Real for f64 {
    fn with_bits(x: f64, _bits: u32) -> Self {
        x
    }
    fn bits(&self) -> u32 {
        53
    }
    fn pi(_bits: u32) -> Self {
        std::f64::consts::PI
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn asin(&self) -> Self {
        f64::asin(self.clamp(-1.0, 1.0))
    }
    fn rel_eps(_bits: u32) -> f64 {
        f64::EPSILON / 2.0
    }
    fn abs_eps(_bits: u32) -> f64 {
        f64::MIN_POSITIVE
    }
}

const GUARD: u32 = 40;

/// Fixed-point number `mantissa · 2^-bits`.
#[derive(Clone, PartialEq, Eq)]
pub struct BigReal {
    m: BigInt,
    bits: u32,
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({:e} @{} bits)", self.to_f64(), self.bits)
    }
}

fn shift(m: &BigInt, by: i64) -> BigInt {
    match by.cmp(&0) {
        Ordering::Greater => m << (by as usize),
        Ordering::Less => m >> ((-by) as usize),
        Ordering::Equal => m.clone(),
    }
}

fn one(p: u32) -> BigInt {
    BigInt::one() << p as usize
}

fn fmul(a: &BigInt, b: &BigInt, p: u32) -> BigInt {
    (a * b) >> p as usize
}

fn fdiv(a: &BigInt, b: &BigInt, p: u32) -> BigInt {
    (a << p as usize) / b
}

fn fsqrt(a: &BigInt, p: u32) -> BigInt {
    assert!(!a.is_negative(), "square root of a negative number");
    (a << p as usize).sqrt()
}

/// `atan(y)` for a fixed-point `y` at precision `p`.
fn fatan(y: &BigInt, p: u32) -> BigInt {
    // atan(y) = 2 atan(y / (1 + sqrt(1 + y²))) until |y| < 2^-10
    let mut y = y.clone();
    let mut doublings = 0usize;
    let small = one(p) >> 10;
    while y.abs() > small {
        let s = fsqrt(&(one(p) + fmul(&y, &y, p)), p);
        y = fdiv(&y, &(one(p) + s), p);
        doublings += 1;
    }
    let y2 = fmul(&y, &y, p);
    let mut term = y.clone();
    let mut sum = y;
    let mut k = 1u64;
    loop {
        term = -fmul(&term, &y2, p);
        let t = &term / BigInt::from(2 * k + 1);
        if t.is_zero() {
            break;
        }
        sum += t;
        k += 1;
    }
    sum << doublings
}

fn fpi(p: u32) -> BigInt {
    // Machin: π = 16 atan(1/5) − 4 atan(1/239)
    let a = fatan(&(one(p) / BigInt::from(5)), p);
    let b = fatan(&(one(p) / BigInt::from(239)), p);
    a * BigInt::from(16) - b * BigInt::from(4)
}

/// `exp(x)` at precision `p`.
fn fexp(x: &BigInt, p: u32) -> BigInt {
    let mut halvings = 0usize;
    let small = one(p) >> 10;
    let mut r = x.clone();
    while r.abs() > small {
        r >>= 1;
        halvings += 1;
    }
    let mut term = one(p);
    let mut sum = one(p);
    let mut k = 1u64;
    loop {
        term = fmul(&term, &r, p) / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    for _ in 0..halvings {
        sum = fmul(&sum, &sum, p);
    }
    sum
}

/// `(sin x, cos x)` at precision `p`.
fn fsincos(x: &BigInt, p: u32) -> (BigInt, BigInt) {
    let mut halvings = 0usize;
    let small = one(p) >> 10;
    let mut r = x.clone();
    while r.abs() > small {
        r >>= 1;
        halvings += 1;
    }
    let r2 = fmul(&r, &r, p);
    let mut s_term = r.clone();
    let mut s = r.clone();
    let mut c_term = one(p);
    let mut c = one(p);
    let mut k = 1u64;
    loop {
        s_term = -fmul(&s_term, &r2, p) / BigInt::from((2 * k) * (2 * k + 1));
        c_term = -fmul(&c_term, &r2, p) / BigInt::from((2 * k - 1) * (2 * k));
        if s_term.is_zero() && c_term.is_zero() {
            break;
        }
        s += &s_term;
        c += &c_term;
        k += 1;
    }
    for _ in 0..halvings {
        let s2 = fmul(&s, &c, p) << 1usize;
        let c2 = fmul(&c, &c, p) - fmul(&s, &s, p);
        s = s2;
        c = c2;
    }
    (s, c)
}

impl BigReal {
    pub fn zero(bits: u32) -> Self {
        BigReal {
            m: BigInt::zero(),
            bits,
        }
    }

    fn raw(m: BigInt, bits: u32) -> Self {
        BigReal { m, bits }
    }

    fn widened(&self) -> BigInt {
        &self.m << GUARD as usize
    }

    fn narrowed(m: BigInt, bits: u32) -> Self {
        BigReal::raw(m >> GUARD as usize, bits)
    }

    fn check(&self, other: &Self) {
        debug_assert_eq!(self.bits, other.bits, "mixed precisions");
    }
}

impl Real for BigReal {
    fn with_bits(x: f64, bits: u32) -> Self {
        assert!(x.is_finite(), "non-finite value {x}");
        if x == 0.0 {
            return BigReal::zero(bits);
        }
        let raw = x.to_bits();
        let exp = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let mut m = shift(&BigInt::from(mant), e + bits as i64);
        if x < 0.0 {
            m = -m;
        }
        BigReal::raw(m, bits)
    }

    fn bits(&self) -> u32 {
        self.bits
    }

    fn pi(bits: u32) -> Self {
        BigReal::narrowed(fpi(bits + GUARD), bits)
    }

    fn to_f64(&self) -> f64 {
        let p = self.bits as i64;
        if p > 64 {
            let top = shift(&self.m, -(p - 64));
            top.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-64)
        } else {
            self.m.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(p as i32))
        }
    }

    fn sqrt(&self) -> Self {
        BigReal::narrowed(fsqrt(&self.widened(), self.bits + GUARD), self.bits)
    }

    fn sin(&self) -> Self {
        BigReal::narrowed(fsincos(&self.widened(), self.bits + GUARD).0, self.bits)
    }

    fn cos(&self) -> Self {
        BigReal::narrowed(fsincos(&self.widened(), self.bits + GUARD).1, self.bits)
    }

    fn sinh(&self) -> Self {
        let p = self.bits + GUARD;
        let e = fexp(&self.widened(), p);
        let ei = fdiv(&one(p), &e, p);
        BigReal::narrowed((e - ei) >> 1usize, self.bits)
    }

    fn cosh(&self) -> Self {
        let p = self.bits + GUARD;
        let e = fexp(&self.widened(), p);
        let ei = fdiv(&one(p), &e, p);
        BigReal::narrowed((e + ei) >> 1usize, self.bits)
    }

    fn asin(&self) -> Self {
        let p = self.bits + GUARD;
        let x = self.widened();
        let unit = one(p);
        if x.abs() >= unit {
            let half_pi = fpi(p) >> 1usize;
            let v = if x.sign() == Sign::Minus { -half_pi } else { half_pi };
            return BigReal::narrowed(v, self.bits);
        }
        let c = fsqrt(&(&unit - fmul(&x, &x, p)), p);
        if c.is_zero() {
            let half_pi = fpi(p) >> 1usize;
            let v = if x.sign() == Sign::Minus { -half_pi } else { half_pi };
            return BigReal::narrowed(v, self.bits);
        }
        BigReal::narrowed(fatan(&fdiv(&x, &c, p), p), self.bits)
    }

    fn rel_eps(_bits: u32) -> f64 {
        0.0
    }

    fn abs_eps(bits: u32) -> f64 {
        2f64.powi(-(bits as i32))
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.check(other);
        self.m.partial_cmp(&other.m)
    }
}

impl Add for BigReal {
    type Output = BigReal;
    fn add(self, rhs: BigReal) -> BigReal {
        self.check(&rhs);
        BigReal::raw(self.m + rhs.m, self.bits)
    }
}

impl Sub for BigReal {
    type Output = BigReal;
    fn sub(self, rhs: BigReal) -> BigReal {
        self.check(&rhs);
        BigReal::raw(self.m - rhs.m, self.bits)
    }
}

impl Mul for BigReal {
    type Output = BigReal;
    fn mul(self, rhs: BigReal) -> BigReal {
        self.check(&rhs);
        BigReal::raw(fmul(&self.m, &rhs.m, self.bits), self.bits)
    }
}

impl Div for BigReal {
    type Output = BigReal;
    fn div(self, rhs: BigReal) -> BigReal {
        self.check(&rhs);
        BigReal::raw(fdiv(&self.m, &rhs.m, self.bits), self.bits)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::raw(-self.m, self.bits)
    }
}
