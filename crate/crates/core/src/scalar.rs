//! Field backends.
//!
//! Everything in the crate is generic over [`Scalar`]. Two families of
//! implementations exist: exact ones ([`Rational`], [`GaussianRational`]) where
//! zero tests are decisions, and floating ones (`f64`, [`Complex64`]) where every
//! zero test goes through a relative tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use malachite_base::num::basic::traits::Zero as _;
use malachite_base::num::conversion::traits::RoundingFrom;
use malachite_base::rounding_modes::RoundingMode;
use nalgebra::{ComplexField, DMatrix};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

pub type Rational = BigRational;
pub use crate::gaussian::GaussianRational;
pub type Complex64 = Complex<f64>;

pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

static FLOAT_TOLERANCE: AtomicU64 = AtomicU64::new(0);

/// Relative tolerance used by the floating backends (default `1e-9`).
pub fn float_tolerance() -> f64 {
    match FLOAT_TOLERANCE.load(Ordering::Relaxed) {
        0 => DEFAULT_FLOAT_TOLERANCE,
        bits => f64::from_bits(bits),
    }
}

pub fn set_float_tolerance(tol: f64) {
    assert!(tol > 0.0 && tol.is_finite(), "tolerance must be positive");
    FLOAT_TOLERANCE.store(tol.to_bits(), Ordering::Relaxed);
}

/// A field element. The geometry code only ever needs the four field
/// operations plus a zero test, which is exact or tolerance based depending on
/// the backend.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    /// Approximate absolute value, used for pivot choice and tolerance scaling.
    fn modulus(&self) -> f64;

    /// Zero test. Exact backends ignore `scale`; floating backends compare
    /// against `tol * max(scale, 1)`.
    fn is_negligible(&self, scale: f64) -> bool;

    /// Whether the element can serve as an elimination pivot.
    fn is_unit(&self) -> bool {
        !self.is_negligible(1.0)
    }

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn rank(m: &Mat<Self>) -> usize {
        linalg::elimination_rank(m)
    }

    fn mat_inverse(m: &Mat<Self>) -> Option<Mat<Self>> {
        linalg::gauss_jordan_inverse(m)
    }

    /// Columns form a basis of the null space.
    fn null_space(m: &Mat<Self>) -> Mat<Self> {
        linalg::rref_null_space(m)
    }

    /// Indices of a maximal linearly independent subset of the columns.
    fn independent_columns(m: &Mat<Self>) -> Vec<usize> {
        linalg::rref(m).1
    }
}

pub fn approx_eq<S: Scalar>(a: &S, b: &S) -> bool {
    let scale = a.modulus().max(b.modulus());
    (a.clone() - b.clone()).is_negligible(scale)
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            BigRational::from_str(s.trim()).map_err(|_| Error::Json(format!("bad fraction {s:?}")))
        }
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(BigInt::from(i)))
            .ok_or_else(|| Error::Json(format!("exact backend needs integers or fraction strings, got {n}"))),
        other => Err(Error::Json(format!("expected a fraction, got {other}"))),
    }
}

fn parse_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Json(format!("bad number {n}"))),
        Value::String(s) => {
            if let Ok(x) = s.trim().parse::<f64>() {
                return Ok(x);
            }
            let r = BigRational::from_str(s.trim())
                .map_err(|_| Error::Json(format!("bad number {s:?}")))?;
            r.to_f64().ok_or_else(|| Error::Json(format!("number out of range {s:?}")))
        }
        other => Err(Error::Json(format!("expected a number, got {other}"))),
    }
}

/// Splits a JSON entry into real and imaginary parts: either a bare value or a
/// two-element `[re, im]` array.
fn split_entry(v: &Value) -> Result<(&Value, Option<&Value>)> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok((&parts[0], Some(&parts[1]))),
        Value::Array(parts) => Err(Error::Json(format!("entry pair has {} parts", parts.len()))),
        other => Ok((other, None)),
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn modulus(&self) -> f64 {
        rational_to_f64(self).abs()
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_json(&self) -> Value {
        Value::Array(vec![Value::String(self.to_string()), Value::String("0".into())])
    }

    fn from_json(v: &Value) -> Result<Self> {
        let (re, im) = split_entry(v)?;
        if let Some(im) = im {
            if !parse_rational(im)?.is_zero() {
                return Err(Error::Json("nonzero imaginary part for a real backend".into()));
            }
        }
        parse_rational(re)
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational::real(malachite_q::Rational::from_signeds(num, den))
    }

    fn modulus(&self) -> f64 {
        to_complex64(self).norm()
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_json(&self) -> Value {
        Value::Array(vec![Value::String(self.re.to_string()), Value::String(self.im.to_string())])
    }

    fn from_json(v: &Value) -> Result<Self> {
        let (re, im) = split_entry(v)?;
        let im = match im {
            Some(im) => parse_exact(im)?,
            None => malachite_q::Rational::ZERO,
        };
        Ok(GaussianRational::new(parse_exact(re)?, im))
    }
}

fn parse_exact(v: &Value) -> Result<malachite_q::Rational> {
    match v {
        Value::String(s) => {
            malachite_q::Rational::from_str(s.trim()).map_err(|_| Error::Json(format!("bad fraction {s:?}")))
        }
        Value::Number(n) => n
            .as_i64()
            .map(malachite_q::Rational::from)
            .ok_or_else(|| Error::Json(format!("exact backend needs integers or fraction strings, got {n}"))),
        other => Err(Error::Json(format!("expected a fraction, got {other}"))),
    }
}

fn float_negligible(modulus: f64, scale: f64) -> bool {
    modulus <= float_tolerance() * scale.max(1.0)
}

fn svd_singular_values<T>(m: &Mat<T>) -> Vec<f64>
where
    T: Scalar + ComplexField<RealField = f64>,
{
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let dm = DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].clone());
    dm.singular_values().iter().copied().collect()
}

fn float_rank<T>(m: &Mat<T>) -> usize
where
    T: Scalar + ComplexField<RealField = f64>,
{
    let top = svd_singular_values(m).into_iter().fold(0.0_f64, f64::max);
    rank_above(m, float_tolerance() * top)
}

fn rank_above<T>(m: &Mat<T>, cutoff: f64) -> usize
where
    T: Scalar + ComplexField<RealField = f64>,
{
    svd_singular_values(m).into_iter().filter(|&s| s > cutoff && s > 0.0).count()
}

/// Null space from the right singular vectors whose singular values fall under
/// the relative cutoff. The matrix is padded with zero rows so the full set of
/// right singular vectors is available.
fn float_null_space<T>(m: &Mat<T>) -> Mat<T>
where
    T: Scalar + ComplexField<RealField = f64>,
{
    let n = m.cols();
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    let rows = m.rows().max(n);
    let dm = DMatrix::from_fn(rows, n, |i, j| {
        if i < m.rows() {
            m[(i, j)].clone()
        } else {
            T::zero()
        }
    });
    let svd = dm.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let top = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    let cutoff = float_tolerance() * top;
    let null_rows: Vec<usize> = (0..n)
        .filter(|&k| top == 0.0 || svd.singular_values[k] <= cutoff)
        .collect();
    // rows of V^H spanning the kernel; conjugate back to column vectors
    Mat::from_fn(n, null_rows.len(), |i, k| v_t[(null_rows[k], i)].clone().conjugate())
}

fn float_independent_columns<T>(m: &Mat<T>) -> Vec<usize>
where
    T: Scalar + ComplexField<RealField = f64>,
{
    // one cutoff for the whole matrix, so a column of rounding noise is
    // never accepted just because it is alone
    let cutoff = float_tolerance() * svd_singular_values(m).into_iter().fold(0.0_f64, f64::max);
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..m.cols() {
        let mut trial = chosen.clone();
        trial.push(j);
        if rank_above(&m.select_cols(&trial), cutoff) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn modulus(&self) -> f64 {
        self.abs()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        float_negligible(self.abs(), scale)
    }

    fn to_json(&self) -> Value {
        serde_json::json!([self, 0.0])
    }

    fn from_json(v: &Value) -> Result<Self> {
        let (re, im) = split_entry(v)?;
        if let Some(im) = im {
            if parse_f64(im)? != 0.0 {
                return Err(Error::Json("nonzero imaginary part for a real backend".into()));
            }
        }
        parse_f64(re)
    }

    fn rank(m: &Mat<Self>) -> usize {
        float_rank(m)
    }

    fn null_space(m: &Mat<Self>) -> Mat<Self> {
        float_null_space(m)
    }

    fn independent_columns(m: &Mat<Self>) -> Vec<usize> {
        float_independent_columns(m)
    }
}

impl Scalar for Complex<f64> {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        float_negligible(self.norm(), scale)
    }

    fn to_json(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }

    fn from_json(v: &Value) -> Result<Self> {
        let (re, im) = split_entry(v)?;
        let im = match im {
            Some(im) => parse_f64(im)?,
            None => 0.0,
        };
        Ok(Complex::new(parse_f64(re)?, im))
    }

    fn rank(m: &Mat<Self>) -> usize {
        float_rank(m)
    }

    fn null_space(m: &Mat<Self>) -> Mat<Self> {
        float_null_space(m)
    }

    fn independent_columns(m: &Mat<Self>) -> Vec<usize> {
        float_independent_columns(m)
    }
}

/// Converts an exact value to the complex floating backend.
pub fn to_complex64(z: &GaussianRational) -> Complex64 {
    let f = |r: &malachite_q::Rational| f64::rounding_from(r, RoundingMode::Nearest).0;
    Complex::new(f(&z.re), f(&z.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn exact_inverse_is_error_free() {
        let a = GaussianRational::new(malachite_q::Rational::from_signeds(3, 7), malachite_q::Rational::from_signeds(-2, 5));
        let inv = GaussianRational::one() / a.clone();
        assert_eq!(a * inv, GaussianRational::one());
    }

    #[test]
    fn float_independent_columns_ignore_rounding_noise() {
        let m = Mat::<Complex64>::from_fn(3, 3, |i, j| {
            let v = [[1.1e-16, -0.0624, 0.4427], [3e-32, 0.4459, 0.0076], [-9.9e-17, -1.2e-16, -2.5e-17]][i][j];
            Complex64::new(v, 0.0)
        });
        assert_eq!(Complex64::independent_columns(&m), vec![1, 2]);
        assert_eq!(Complex64::rank(&m), 2);
    }

    #[test]
    fn float_zero_test_is_relative() {
        assert!(1e-12_f64.is_negligible(1.0));
        assert!(!1e-3_f64.is_negligible(1.0));
        assert!(1e-3_f64.is_negligible(1e7));
    }

    #[test]
    fn json_entries() {
        let z = GaussianRational::from_json(&json!(["1/2", "-3"])).unwrap();
        assert_eq!(z.to_json(), json!(["1/2", "-3"]));
        let r = Rational::from_json(&json!("5/10")).unwrap();
        assert_eq!(r, Rational::from_ratio(1, 2));
        assert!(Rational::from_json(&json!(["1", "1"])).is_err());
        assert!(Rational::from_json(&json!(0.5)).is_err());
        let f = Complex64::from_json(&json!(2.5)).unwrap();
        assert_eq!(f, Complex64::new(2.5, 0.0));
        let f = f64::from_json(&json!("1/4")).unwrap();
        assert_eq!(f, 0.25);
    }
}
