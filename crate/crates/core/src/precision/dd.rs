//! Double-double arithmetic: a value is the unevaluated sum `hi + lo` with
//! `|lo| <= ulp(hi) / 2`, giving roughly 32 significant decimal digits.
//!
//! The error-free transformations follow the classic QD library layout. All
//! operations are sign-symmetric, so `f(-x) == -f(x)` holds bit-for-bit for
//! the odd functions; the conjugate-symmetry checks upstream rely on that.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };
    pub const HALF_PI: Dd = Dd { hi: 1.5707963267948966, lo: 6.123233995736766e-17 };
    pub const LN2: Dd = Dd { hi: 0.6931471805599453, lo: 2.3190468138462996e-17 };
    pub const EULER_GAMMA: Dd = Dd { hi: 0.5772156649015329, lo: -4.942915152430645e-18 };
    /// li(2), the offset between li and the logarithmic integral from 2.
    pub const LI2: Dd = Dd { hi: 1.045163780117493, lo: -1.0616403481185999e-16 };
    pub const EPSILON: f64 = 4.93038065763132e-32;

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact for every integer below 2^106.
    #[inline]
    pub fn from_u64(n: u64) -> Self {
        let hi = n as f64;
        let rest = (n as i128 - hi as i128) as f64;
        let (s, e) = quick_two_sum(hi, rest);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 { -self } else { self }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 += self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s1, mut s2) = two_sum(self.hi, b);
        s2 += self.lo;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    /// Multiplication by a power of two is exact.
    #[inline]
    pub fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    #[inline]
    pub fn sqr(self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Dd::ZERO } else { Dd::from_f64(f64::NAN) };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let diff = self - Dd::from_f64(ax).sqr();
        Dd::from_f64(ax).add_f64(diff.hi * x * 0.5)
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.7 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / Dd::LN2.hi).round();
        let r = (self - Dd::LN2.mul_f64(k)).ldexp(-9);
        // expm1 of r by Taylor; |r| < 7e-4 so 10 terms reach 1e-34
        let mut term = r;
        let mut s = r;
        let mut i = 2.0;
        while i <= 11.0 {
            term = (term * r) / Dd::from_f64(i);
            s += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
            i += 1.0;
        }
        for _ in 0..9 {
            // e^{2x} - 1 = (e^x - 1)(e^x - 1 + 2)
            s = s * s.add_f64(2.0);
        }
        s.add_f64(1.0).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::from_f64(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        if self.hi == 1.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        let x = Dd::from_f64(self.hi.ln());
        // one Newton step doubles the 53-bit seed
        x + self * (-x).exp() - Dd::ONE
    }

    /// (sin, cos) with quadrant reduction by pi/2 in double-double.
    pub fn sin_cos(self) -> (Self, Self) {
        if self.hi == 0.0 {
            return (Dd::ZERO, Dd::ONE);
        }
        let k = (self.hi / Dd::HALF_PI.hi).round();
        let r = self - Dd::HALF_PI * Dd::from_f64(k);
        let (s, c) = sin_cos_taylor(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if n < 0 { Dd::ONE / acc } else { acc }
    }
}

fn sin_cos_taylor(r: Dd) -> (Dd, Dd) {
    // |r| <= pi/4; 1/k! < 1e-34 past k = 30
    let r2 = r.sqr();
    let mut sin = r;
    let mut cos = Dd::ONE;
    let mut term_s = r;
    let mut term_c = Dd::ONE;
    let mut k = 1.0;
    while k < 30.0 {
        term_c = -(term_c * r2) / Dd::from_f64(k * (k + 1.0));
        term_s = -(term_s * r2) / Dd::from_f64((k + 1.0) * (k + 2.0));
        cos += term_c;
        sin += term_s;
        if term_c.hi.abs() < 1e-36 && term_s.hi.abs() < 1e-36 {
            break;
        }
        k += 2.0;
    }
    (sin, cos)
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 }.add_f64(q3)
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl SubAssign for Dd {
    #[inline]
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}

impl MulAssign for Dd {
    #[inline]
    fn mul_assign(&mut self, b: Dd) {
        *self = *self * b;
    }
}

impl DivAssign for Dd {
    #[inline]
    fn div_assign(&mut self, b: Dd) {
        *self = *self / b;
    }
}
