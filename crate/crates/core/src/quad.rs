//! Exact arithmetic in a real quadratic field `Q(√d)`.
//!
//! Values are `a + b√d` with rational `a`, `b` and a square-free radicand
//! `d`. Rationals use `d = 0`. Mixing two different irrational radicands in
//! one operation is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadReal {
    a: BigRational,
    b: BigRational,
    d: u64,
}

/// Splits `n` into `(s, f)` with `n = s² f` and `f` square-free.
fn square_free_split(mut n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut f = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            f *= p;
        }
        p += 1;
    }
    (s, f * n)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuadReal {
    /// `(p + q√d) / r`; `d` need not be square-free.
    pub fn new(p: i64, q: i64, d: u64, r: i64) -> Self {
        assert!(r != 0, "zero denominator");
        let (s, f) = square_free_split(d);
        let a = ratio(p, r);
        let b = ratio(q, r) * BigRational::from_integer(BigInt::from(s));
        Self::from_parts(a, b, if d == 0 { 0 } else { f })
    }

    pub fn from_parts(a: BigRational, b: BigRational, d: u64) -> Self {
        let mut v = QuadReal { a, b, d };
        v.normalize();
        v
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::rational(ratio(n, d))
    }

    pub fn rational(a: BigRational) -> Self {
        QuadReal {
            a,
            b: BigRational::zero(),
            d: 0,
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    fn normalize(&mut self) {
        if self.d == 1 {
            self.a = &self.a + &self.b;
            self.b = BigRational::zero();
        }
        if self.b.is_zero() || self.d == 0 {
            if self.d == 0 {
                assert!(self.b.is_zero(), "nonzero coefficient on radicand 0");
            }
            self.b = BigRational::zero();
            self.d = 0;
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_coeff(&self) -> &BigRational {
        &self.b
    }

    /// Radicand, or 0 for a rational value.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.a.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.a.to_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_radicand(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d, e) if d == e => d,
            (d, e) => panic!("mixed quadratic fields Q(sqrt {d}) and Q(sqrt {e})"),
        }
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b² d
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        let approx = self.to_f64().floor();
        let mut n = BigInt::from(approx as i64);
        loop {
            let nq = QuadReal::rational(BigRational::from_integer(n.clone()));
            if nq > *self {
                n -= 1;
                continue;
            }
            let next = QuadReal::rational(BigRational::from_integer(&n + 1));
            if next <= *self {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> QuadReal {
        let f = QuadReal::rational(BigRational::from_integer(self.floor()));
        self - &f
    }

    pub fn recip(&self) -> QuadReal {
        assert!(!self.is_zero(), "division by zero");
        // 1/(a + b√d) = (a - b√d)/(a² - b² d)
        let den =
            &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        QuadReal::from_parts(&self.a / &den, -&self.b / &den, self.d)
    }

    pub fn abs(&self) -> QuadReal {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for QuadReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadReal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a QuadReal> for &'a QuadReal {
    type Output = QuadReal;
    fn add(self, rhs: &QuadReal) -> QuadReal {
        let d = self.common_radicand(rhs);
        QuadReal::from_parts(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a QuadReal> for &'a QuadReal {
    type Output = QuadReal;
    fn sub(self, rhs: &QuadReal) -> QuadReal {
        let d = self.common_radicand(rhs);
        QuadReal::from_parts(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a QuadReal> for &'a QuadReal {
    type Output = QuadReal;
    fn mul(self, rhs: &QuadReal) -> QuadReal {
        let d = self.common_radicand(rhs);
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadReal::from_parts(a, b, d)
    }
}

impl<'a> Div<&'a QuadReal> for &'a QuadReal {
    type Output = QuadReal;
    fn div(self, rhs: &QuadReal) -> QuadReal {
        self * &rhs.recip()
    }
}

impl Neg for &QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        QuadReal {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QuadReal> for QuadReal {
            type Output = QuadReal;
            fn $m(self, rhs: QuadReal) -> QuadReal { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a QuadReal> for QuadReal {
            type Output = QuadReal;
            fn $m(self, rhs: &QuadReal) -> QuadReal { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        -&self
    }
}

impl std::iter::Sum for QuadReal {
    fn sum<I: Iterator<Item = QuadReal>>(iter: I) -> QuadReal {
        iter.fold(QuadReal::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for QuadReal {
    fn from(n: i64) -> Self {
        QuadReal::from_int(n)
    }
}

/// Renders as `a + b√d` with exact rationals, e.g. `-1 + 1√2`.
impl fmt::Display for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}√{}", self.a, sign, self.b.abs(), self.d)
    }
}

impl Default for QuadReal {
    fn default() -> Self {
        QuadReal::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2m1() -> QuadReal {
        QuadReal::new(-1, 1, 2, 1)
    }

    #[test]
    fn square_free_radicand() {
        let x = QuadReal::new(0, 1, 8, 1);
        assert_eq!(x.radicand(), 2);
        assert_eq!(x.irrational_coeff(), &ratio(2, 1));
        let y = QuadReal::new(3, 2, 9, 1);
        assert!(y.is_rational());
        assert_eq!(y, QuadReal::from_int(9));
    }

    #[test]
    fn ordering_is_exact() {
        let a = sqrt2m1();
        assert!(a > QuadReal::from_ratio(41, 100));
        assert!(a < QuadReal::from_ratio(42, 100));
        let two_a = &a + &a;
        assert!(two_a < QuadReal::one());
        assert!(&two_a + &a > QuadReal::one());
    }

    #[test]
    fn field_operations() {
        let a = sqrt2m1();
        // (√2-1)(√2+1) = 1
        let b = QuadReal::new(1, 1, 2, 1);
        assert_eq!(&a * &b, QuadReal::one());
        assert_eq!(a.recip(), b);
        assert_eq!(&(&a / &b) * &b, a);
    }

    #[test]
    fn floor_and_fract() {
        let a = QuadReal::new(0, 1, 2, 5); // √2/5
        let x = &QuadReal::from_int(-7) * &a;
        assert_eq!(x.floor(), BigInt::from(-2));
        let f = x.fract();
        assert!(f >= QuadReal::zero() && f < QuadReal::one());
        assert_eq!(QuadReal::from_ratio(-1, 2).floor(), BigInt::from(-1));
    }

    #[test]
    fn display_form() {
        assert_eq!(sqrt2m1().to_string(), "-1 + 1√2");
        assert_eq!(QuadReal::from_ratio(3, 4).to_string(), "3/4");
    }
}
