use super::Real;
use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Minimal complex number over a [`Real`] backend. Only the operations the
/// extended-precision kernels need are provided.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    #[inline]
    pub fn new(re: R, im: R) -> Self {
        Cx { re, im }
    }

    #[inline]
    pub fn zero() -> Self {
        Cx { re: R::zero(), im: R::zero() }
    }

    #[inline]
    pub fn from_c64(z: Complex64) -> Self {
        Cx { re: R::from_f64(z.re), im: R::from_f64(z.im) }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn scale(self, k: R) -> Self {
        Cx { re: self.re * k, im: self.im * k }
    }

    #[inline]
    pub fn scale_f64(self, k: f64) -> Self {
        Cx { re: self.re.mul_f64(k), im: self.im.mul_f64(k) }
    }

    #[inline]
    pub fn conj(self) -> Self {
        Cx { re: self.re, im: -self.im }
    }

    #[inline]
    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }

    /// Cheap magnitude estimate in f64, used for error bookkeeping only.
    #[inline]
    pub fn abs_f64(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn inv(self) -> Self {
        let d = self.norm_sqr();
        Cx { re: self.re / d, im: -self.im / d }
    }

    pub fn div(self, other: Self) -> Self {
        self * other.inv()
    }

    /// e^{self}
    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Cx { re: m * c, im: m * s }
    }

    /// e^{-w * x} for real x.
    #[inline]
    pub fn exp_neg_scaled(w: Self, x: R) -> Self {
        Cx { re: -(w.re * x), im: -(w.im * x) }.exp()
    }
}

impl<R: Real> Add for Cx<R> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Cx { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<R: Real> AddAssign for Cx<R> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl<R: Real> Sub for Cx<R> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Cx { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<R: Real> Neg for Cx<R> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Cx { re: -self.re, im: -self.im }
    }
}

impl<R: Real> Mul for Cx<R> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Cx { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}
