//! Gaussian rationals `re + im·i` over arbitrary-precision rationals.
//!
//! Sampled points are real, so every operation first checks for vanishing
//! imaginary parts and then costs one rational operation instead of four.
//! Components are `malachite` rationals, which keep small values inline.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use malachite_base::num::basic::traits::{One as _, Zero as _};
use malachite_q::Rational as BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::ZERO }
    }

    pub fn is_real(&self) -> bool {
        self.im == 0u32
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        if self.is_real() {
            &self.re * &self.re
        } else {
            &self.re * &self.re + &self.im * &self.im
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::real(BigRational::ZERO)
    }

    fn is_zero(&self) -> bool {
        self.re == 0u32 && self.im == 0u32
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::real(BigRational::ONE)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_real() && rhs.is_real() {
            return GaussianRational::real(self.re + rhs.re);
        }
        GaussianRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        if self.is_real() && rhs.is_real() {
            return GaussianRational::real(self.re - rhs.re);
        }
        GaussianRational { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        match (self.is_real(), rhs.is_real()) {
            (true, true) => GaussianRational::real(self.re * rhs.re),
            (true, false) => GaussianRational { re: &self.re * &rhs.re, im: self.re * rhs.im },
            (false, true) => GaussianRational { re: &self.re * &rhs.re, im: self.im * rhs.re },
            (false, false) => GaussianRational {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero, like `BigRational`.
    fn div(self, rhs: Self) -> Self {
        if rhs.is_real() {
            if self.is_real() {
                return GaussianRational::real(self.re / rhs.re);
            }
            return GaussianRational { re: &self.re / &rhs.re, im: self.im / rhs.re };
        }
        let n = rhs.norm_sqr();
        let q = self * rhs.conj();
        GaussianRational { re: q.re / &n, im: q.im / n }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

/// `3/2`, `-1+1/2i`, `2/3i`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return write!(f, "{}", self.re);
        }
        if self.re == 0u32 {
            return write!(f, "{}i", self.im);
        }
        let sign = if self.im < 0u32 { "" } else { "+" };
        write!(f, "{}{sign}{}i", self.re, self.im)
    }
}
