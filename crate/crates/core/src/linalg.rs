//! Dense matrices and subspace algebra over any [`Scalar`].
//!
//! Every geometric claim in the crate is eventually a rank, kernel or
//! intersection computation here. Exact backends use fraction-free elimination
//! for ranks and reduced row echelon forms for kernels; floating backends
//! override both with SVD-based versions (see [`crate::scalar`]).

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S> Mat<S> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        Mat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn map<T>(&self, f: impl FnMut(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diag(d: &[S]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { S::zero() })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    /// Builds an `n x k` matrix whose columns are the given vectors.
    pub fn from_cols(n: usize, cols: &[Vec<S>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == n), "column length mismatch");
        Self::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn from_ratios(rows: &[&[(i64, i64)]]) -> Self {
        let rows: Vec<Vec<S>> =
            rows.iter().map(|r| r.iter().map(|&(p, q)| S::from_ratio(p, q)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<S>> = rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn column_vector(v: &[S]) -> Self {
        Mat { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block diagonal `[[a, 0], [0, b]]`.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        Self::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
            if i < a.rows && j < a.cols {
                a[(i, j)].clone()
            } else if i >= a.rows && j >= a.cols {
                b[(i - a.rows, j - a.cols)].clone()
            } else {
                S::zero()
            }
        })
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector size mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (j, vj) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !(S::EXACT && (a.is_zero() || vj.is_zero())) {
                        acc = acc + a.clone() * vj.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        let scale = self.max_modulus();
        self.data.iter().all(|x| x.is_negligible(scale))
    }

    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    /// Entrywise equality; exact for exact backends, relative otherwise.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.approx_eq_at(other, self.max_modulus().max(other.max_modulus()))
    }

    /// Entrywise comparison against an explicit magnitude, e.g. the size of
    /// the factors a product was computed from.
    pub fn approx_eq_at(&self, other: &Self, scale: f64) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| (a.clone() - b.clone()).is_negligible(scale))
    }

    pub fn is_skew(&self) -> bool {
        self.is_square() && (self.clone() + self.transpose()).is_zero()
    }

    pub fn is_upper_triangular(&self) -> bool {
        let scale = self.max_modulus();
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_negligible(scale)))
    }

    pub fn is_diagonal(&self) -> bool {
        let scale = self.max_modulus();
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_negligible(scale)))
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        S::rank(self)
    }

    pub fn null_space(&self) -> Mat<S> {
        S::null_space(self)
    }

    /// Determinant by Gaussian elimination with pivoting on units.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = pick_pivot(&a, c, c) else {
                return S::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone() / piv.clone();
                for j in c..n {
                    let v = a[(i, j)].clone() - f.clone() * a[(c, j)].clone();
                    a[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when no unit pivot exists in some column.
    /// Works over dual numbers too, where a pivot is a unit iff its value part
    /// is nonzero.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        S::mat_inverse(self)
    }

    /// Some solution `x` of `self * x = rhs`, if the system is consistent.
    pub fn solve(&self, rhs: &[S]) -> Option<Vec<S>> {
        assert_eq!(self.rows, rhs.len(), "right-hand side length mismatch");
        let aug = self.hstack(&Mat::column_vector(rhs));
        let (r, pivots) = rref(&aug);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        if !S::EXACT {
            // tolerance-based elimination can accept inconsistent systems
            let residual: Vec<S> =
                self.mul_vec(&x).into_iter().zip(rhs).map(|(a, b)| a - b.clone()).collect();
            let scale = rhs.iter().map(Scalar::modulus).fold(self.max_modulus(), f64::max);
            if !residual.iter().all(|e| e.is_negligible(scale)) {
                return None;
            }
        }
        Some(x)
    }

    /// Columnwise [`Mat::solve`] of `self * X = rhs`.
    pub fn solve_columns(&self, rhs: &Mat<S>) -> Option<Mat<S>> {
        let cols: Vec<Vec<S>> = (0..rhs.cols).map(|j| self.solve(&rhs.col(j))).collect::<Option<_>>()?;
        Some(Mat::from_cols(self.cols, &cols))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

fn pick_pivot<S: Scalar>(a: &Mat<S>, col: usize, from_row: usize) -> Option<usize> {
    if S::EXACT {
        (from_row..a.rows).find(|&i| a[(i, col)].is_unit())
    } else {
        (from_row..a.rows)
            .filter(|&i| a[(i, col)].is_unit())
            .max_by(|&i, &j| a[(i, col)].modulus().total_cmp(&a[(j, col)].modulus()))
    }
}

impl<S: Scalar> Add for Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: Self) -> Mat<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Add for &Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: Self) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: Self) -> Mat<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Sub for &Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: Self) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Neg for Mat<S> {
    type Output = Mat<S>;
    fn neg(self) -> Mat<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> Mul for &Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: Self) -> Mat<S> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = Mat::<S>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<S: Scalar> Mul for Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: Self) -> Mat<S> {
        &self * &rhs
    }
}

/// Rank by fraction-free (Bareiss) elimination. Over a field every division
/// is exact, so the zero pattern of the eliminated matrix decides the rank.
pub(crate) fn elimination_rank<S: Scalar>(m: &Mat<S>) -> usize {
    let mut a = m.clone();
    let mut prev = S::one();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = pick_pivot(&a, c, r) else {
            continue;
        };
        a.swap_rows(p, r);
        let piv = a[(r, c)].clone();
        for i in r + 1..a.rows {
            let lead = a[(i, c)].clone();
            for j in c + 1..a.cols {
                let v = (piv.clone() * a[(i, j)].clone() - lead.clone() * a[(r, j)].clone()) / prev.clone();
                a[(i, j)] = v;
            }
            a[(i, c)] = S::zero();
        }
        prev = piv;
        r += 1;
    }
    r
}

/// Reduced row echelon form and the pivot columns.
pub fn rref<S: Scalar>(m: &Mat<S>) -> (Mat<S>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = pick_pivot(&a, c, r) else {
            continue;
        };
        a.swap_rows(p, r);
        let piv_inv = S::one() / a[(r, c)].clone();
        for j in c..a.cols {
            a[(r, j)] = a[(r, j)].clone() * piv_inv.clone();
        }
        for i in 0..a.rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..a.cols {
                let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                a[(i, j)] = v;
            }
            a[(i, c)] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub(crate) fn rref_null_space<S: Scalar>(m: &Mat<S>) -> Mat<S> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    Mat::from_fn(m.cols, free.len(), |i, k| {
        let f = free[k];
        if i == f {
            S::one()
        } else if let Some(row) = pivots.iter().position(|&p| p == i) {
            -r[(row, f)].clone()
        } else {
            S::zero()
        }
    })
}

pub fn rank<S: Scalar>(m: &Mat<S>) -> usize {
    S::rank(m)
}

pub fn kernel<S: Scalar>(m: &Mat<S>) -> Subspace<S> {
    Subspace { ambient: m.cols, basis: S::null_space(m) }
}

/// A linear subspace of `S^ambient`, stored as a column basis.
#[derive(Clone, Debug)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Mat<S>,
}

impl<S: Scalar> Subspace<S> {
    /// Span of the columns of `generators`, reduced to an independent set.
    pub fn span(generators: &Mat<S>) -> Self {
        let idx = S::independent_columns(generators);
        Subspace { ambient: generators.rows(), basis: generators.select_cols(&idx) }
    }

    pub fn span_vectors(ambient: usize, vectors: &[Vec<S>]) -> Self {
        Self::span(&Mat::from_cols(ambient, vectors))
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::identity(ambient) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Mat<S> {
        &self.basis
    }

    pub fn contains(&self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        self.basis.hstack(&Mat::column_vector(v)).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis.hstack(&other.basis).rank() == self.dim()
    }

    /// Equality as mutual containment.
    pub fn equals(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::span(&self.basis.hstack(&other.basis)))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Self::zero(self.ambient));
        }
        let stacked = self.basis.hstack(&(-other.basis.clone()));
        let coeffs = stacked.null_space();
        let top = coeffs.block(0, 0, self.dim(), coeffs.cols());
        Ok(Self::span(&(&self.basis * &top)))
    }

    /// `{v : pairing(v, s) = 0 for all s}`, with `pairing(v, s) = vᵀ P s`.
    pub fn annihilator(&self, pairing: &Mat<S>) -> Result<Self> {
        let n = self.ambient;
        if pairing.rows() != n || pairing.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "pairing is {}x{}, ambient dimension {n}",
                pairing.rows(),
                pairing.cols()
            )));
        }
        let rank = pairing.rank();
        if rank < n {
            return Err(Error::DegeneratePairing { rank, dim: n });
        }
        if self.dim() == 0 {
            return Ok(Self::full(n));
        }
        let conditions = (pairing * &self.basis).transpose();
        Ok(kernel(&conditions))
    }

    /// Image under a linear map.
    pub fn image(&self, map: &Mat<S>) -> Self {
        assert_eq!(map.cols(), self.ambient, "map domain mismatch");
        Self::span(&(map * &self.basis))
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

/// Gauss–Jordan elimination with unit pivots.
pub fn gauss_jordan_inverse<S: Scalar>(m: &Mat<S>) -> Option<Mat<S>> {
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = Mat::<S>::identity(n);
    for c in 0..n {
        let p = pick_pivot(&a, c, c)?;
        a.swap_rows(p, c);
        inv.swap_rows(p, c);
        let piv_inv = S::one() / a[(c, c)].clone();
        for j in 0..n {
            a[(c, j)] = a[(c, j)].clone() * piv_inv.clone();
            inv[(c, j)] = inv[(c, j)].clone() * piv_inv.clone();
        }
        for i in 0..n {
            if i == c || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..n {
                let v = a[(i, j)].clone() - f.clone() * a[(c, j)].clone();
                a[(i, j)] = v;
                let w = inv[(i, j)].clone() - f.clone() * inv[(c, j)].clone();
                inv[(i, j)] = w;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Complex64, GaussianRational, Rational};

    type Q = GaussianRational;

    fn e(n: usize, i: usize) -> Vec<Q> {
        (0..n).map(|k| if k == i { Q::from_i64(1) } else { Q::from_i64(0) }).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Mat::<Q>::identity(2).rank(), 2);
        assert_eq!(Mat::<Q>::zeros(3, 3).rank(), 0);
        assert_eq!(Mat::<Q>::from_ints(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(Mat::<Complex64>::from_ints(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&Mat::<Q>::identity(3)).dim(), 0);
        assert_eq!(kernel(&Mat::<Q>::zeros(3, 3)).dim(), 3);
        let k = kernel(&Mat::<Q>::from_ints(&[&[1, 1]]));
        assert_eq!(k.dim(), 1);
        let expected = Subspace::span_vectors(2, &[vec![Q::from_i64(1), Q::from_i64(-1)]]);
        assert!(k.equals(&expected));
    }

    #[test]
    fn intersect_examples() {
        let xy = Subspace::span_vectors(3, &[e(3, 0), e(3, 1)]);
        let yz = Subspace::span_vectors(3, &[e(3, 1), e(3, 2)]);
        let y = Subspace::span_vectors(3, &[e(3, 1)]);
        assert!(xy.intersect(&yz).unwrap().equals(&y));
        assert!(xy.intersect(&xy).unwrap().equals(&xy));
        assert!(xy.intersect(&Subspace::zero(4)).is_err());
    }

    #[test]
    fn annihilator_examples() {
        let dot = Mat::<Q>::identity(3);
        assert_eq!(Subspace::zero(3).annihilator(&dot).unwrap().dim(), 3);
        assert_eq!(Subspace::full(3).annihilator(&dot).unwrap().dim(), 0);
        let ann = Subspace::span_vectors(3, &[e(3, 0)]).annihilator(&dot).unwrap();
        assert!(ann.equals(&Subspace::span_vectors(3, &[e(3, 1), e(3, 2)])));
        let degenerate = Mat::<Q>::diag(&[Q::from_i64(1), Q::from_i64(0), Q::from_i64(1)]);
        assert_eq!(
            Subspace::span_vectors(3, &[e(3, 0)]).annihilator(&degenerate).unwrap_err(),
            Error::DegeneratePairing { rank: 2, dim: 3 }
        );
    }

    #[test]
    fn inverse_and_det() {
        let m = Mat::<Rational>::from_ratios(&[&[(2, 1), (3, 1)], &[(0, 1), (1, 2)]]);
        assert_eq!(m.det(), Rational::from_i64(1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(2));
        assert!(Mat::<Rational>::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_consistency() {
        let a = Mat::<Q>::from_ints(&[&[1, 1], &[2, 2]]);
        let x = a.solve(&[Q::from_i64(3), Q::from_i64(6)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![Q::from_i64(3), Q::from_i64(6)]);
        assert!(a.solve(&[Q::from_i64(1), Q::from_i64(1)]).is_none());
    }

    #[test]
    fn float_kernel_of_wide_matrix() {
        let m = Mat::<f64>::from_ints(&[&[1, 1, 0]]);
        let k = m.null_space();
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
    }
}
