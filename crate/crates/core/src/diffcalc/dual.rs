use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;

/// First-order dual number `value + deriv·ε` with `ε² = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<S> {
    pub value: S,
    pub deriv: S,
}

impl<S: Scalar> Dual<S> {
    pub fn new(value: S, deriv: S) -> Self {
        Dual { value, deriv }
    }

    pub fn constant(value: S) -> Self {
        Dual { value, deriv: S::zero() }
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual { value: self.value + rhs.value, deriv: self.deriv + rhs.deriv }
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual { value: self.value - rhs.value, deriv: self.deriv - rhs.deriv }
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let deriv = self.value.clone() * rhs.deriv + self.deriv * rhs.value.clone();
        Dual { value: self.value * rhs.value, deriv }
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = S::one() / rhs.value.clone();
        let value = self.value.clone() * inv.clone();
        // (a + a'ε)/(b + b'ε) = a/b + (a' - (a/b)·b')/b · ε
        let deriv = (self.deriv - value.clone() * rhs.deriv) * inv;
        Dual { value, deriv }
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { value: -self.value, deriv: -self.deriv }
    }
}

impl<S: Scalar> Zero for Dual<S> {
    fn zero() -> Self {
        Dual::constant(S::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.deriv.is_zero()
    }
}

impl<S: Scalar> One for Dual<S> {
    fn one() -> Self {
        Dual::constant(S::one())
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    const EXACT: bool = S::EXACT;

    fn from_ratio(num: i64, den: i64) -> Self {
        Dual::constant(S::from_ratio(num, den))
    }

    fn modulus(&self) -> f64 {
        self.value.modulus()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.value.is_negligible(scale) && self.deriv.is_negligible(scale)
    }

    /// Invertible iff the value part is.
    fn is_unit(&self) -> bool {
        self.value.is_unit()
    }

    /// `(A + εB)⁻¹ = A⁻¹ − ε A⁻¹BA⁻¹`.
    fn mat_inverse(m: &Mat<Self>) -> Option<Mat<Self>> {
        let a_inv = m.map(|x| x.value.clone()).inverse()?;
        let b = m.map(|x| x.deriv.clone());
        let db = -(&(&a_inv * &b) * &a_inv);
        Some(Mat::from_fn(m.rows(), m.cols(), |i, j| Dual::new(a_inv[(i, j)].clone(), db[(i, j)].clone())))
    }

    fn to_json(&self) -> Value {
        serde_json::json!({ "value": self.value.to_json(), "deriv": self.deriv.to_json() })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let value = v.get("value").ok_or_else(|| Error::Json("missing dual value".into()))?;
        let deriv = v.get("deriv").ok_or_else(|| Error::Json("missing dual deriv".into()))?;
        Ok(Dual { value: S::from_json(value)?, deriv: S::from_json(deriv)? })
    }
}

pub fn lift_mat<S: Scalar>(m: &Mat<S>) -> Mat<Dual<S>> {
    m.map(|x| Dual::constant(x.clone()))
}

pub fn lift_vec<S: Scalar>(v: &[S]) -> Vec<Dual<S>> {
    v.iter().map(|x| Dual::constant(x.clone())).collect()
}

/// `p + ε·dp`, entrywise.
pub fn perturbed<S: Scalar>(p: &Mat<S>, dp: &Mat<S>) -> Mat<Dual<S>> {
    Mat::from_fn(p.rows(), p.cols(), |i, j| Dual::new(p[(i, j)].clone(), dp[(i, j)].clone()))
}

pub fn values<S: Scalar>(m: &Mat<Dual<S>>) -> Mat<S> {
    m.map(|x| x.value.clone())
}

pub fn derivs<S: Scalar>(m: &Mat<Dual<S>>) -> Mat<S> {
    m.map(|x| x.deriv.clone())
}
