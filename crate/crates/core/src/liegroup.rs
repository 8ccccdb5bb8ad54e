//! Matrix groups `SL_n` / `GL_n` with their Borel data and the maps built from
//! the invariant form.
//!
//! All tangent data is left-trivialized: a tangent vector at `g` is stored as
//! `x = g⁻¹·ġ` in the Lie algebra, and a covector `α` as the algebra element `a`
//! with `α(X) = (a, x)`. Coordinates are taken in the fixed basis
//!
//! ```text
//!   t (diagonal)  |  u (strictly upper E_ij)  |  strictly lower E_ij
//! ```
//!
//! so `b = t ⊕ u` is always a prefix of the coordinate vector. "Dual
//! coordinates" of a covector are its values on the basis vectors.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Sl,
    Gl,
}

/// Test hooks that deliberately break one convention. Used as negative
/// controls: with any of them active the corresponding suites must fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Corruption {
    #[default]
    None,
    /// σ(ξ) = (ξ^R + ξ^L)^∨ without the factor ½.
    SigmaHalf,
    /// σ(ξ) = ½(ξ^L − ξ^R)^∨.
    SigmaSign,
    /// The double's 2-form with the opposite sign.
    OmegaSign,
    /// Dorfman bracket without its 3-form term.
    DorfmanEta,
}

impl FromStr for Corruption {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Corruption::None),
            "sigma-half" => Ok(Corruption::SigmaHalf),
            "sigma-sign" => Ok(Corruption::SigmaSign),
            "omega-sign" => Ok(Corruption::OmegaSign),
            "dorfman-eta" => Ok(Corruption::DorfmanEta),
            other => Err(Error::Json(format!("unknown corruption hook {other:?}"))),
        }
    }
}

impl fmt::Display for Corruption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Corruption::None => "none",
            Corruption::SigmaHalf => "sigma-half",
            Corruption::SigmaSign => "sigma-sign",
            Corruption::OmegaSign => "omega-sign",
            Corruption::DorfmanEta => "dorfman-eta",
        })
    }
}

/// Sparse integer matrix used for basis vectors.
type SparseInt = Vec<(usize, usize, i64)>;

/// The group `G` together with its invariant form `(x, y) = c·tr(xy)` and the
/// upper-triangular Borel `B = TU`.
#[derive(Clone, Debug)]
pub struct LieGroup {
    family: Family,
    n: usize,
    form_scale: (i64, i64),
    corruption: Corruption,
    basis: Vec<SparseInt>,
    trace_gram: Vec<i64>,
}

/// The four dimensions the verification suites keep asserting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupDims {
    pub group: usize,
    pub borel: usize,
    pub unipotent: usize,
    pub rank: usize,
}

impl LieGroup {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(Error::DimensionMismatch(format!("matrix size {n} outside 2..=4")));
        }
        let mut basis: Vec<SparseInt> = Vec::new();
        match family {
            Family::Sl => {
                for i in 0..n - 1 {
                    basis.push(vec![(i, i, 1), (i + 1, i + 1, -1)]);
                }
            }
            Family::Gl => {
                for i in 0..n {
                    basis.push(vec![(i, i, 1)]);
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                basis.push(vec![(i, j, 1)]);
            }
        }
        for i in 0..n {
            for j in 0..i {
                basis.push(vec![(i, j, 1)]);
            }
        }
        let d = basis.len();
        let mut trace_gram = vec![0; d * d];
        for a in 0..d {
            for b in 0..d {
                // tr(E_ij E_kl) = δ_jk δ_il
                let mut t = 0;
                for &(i, j, x) in &basis[a] {
                    for &(k, l, y) in &basis[b] {
                        if j == k && i == l {
                            t += x * y;
                        }
                    }
                }
                trace_gram[a * d + b] = t;
            }
        }
        Ok(LieGroup { family, n, form_scale: (1, 1), corruption: Corruption::None, basis, trace_gram })
    }

    /// Parses `sl2`, `gl3`, ...
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim().to_ascii_lowercase();
        let (family, rest) = if let Some(rest) = name.strip_prefix("sl") {
            (Family::Sl, rest)
        } else if let Some(rest) = name.strip_prefix("gl") {
            (Family::Gl, rest)
        } else {
            return Err(Error::Json(format!("unknown group {name:?}")));
        };
        let n: usize = rest.parse().map_err(|_| Error::Json(format!("unknown group {name:?}")))?;
        Self::new(family, n)
    }

    pub fn with_form_scale(mut self, num: i64, den: i64) -> Self {
        assert!(num > 0 && den > 0, "form scale must be positive");
        self.form_scale = (num, den);
        self
    }

    pub fn with_corruption(mut self, corruption: Corruption) -> Self {
        self.corruption = corruption;
        self
    }

    pub fn corruption(&self) -> Corruption {
        self.corruption
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> String {
        match self.family {
            Family::Sl => format!("sl{}", self.n),
            Family::Gl => format!("gl{}", self.n),
        }
    }

    pub fn form_scale<S: Scalar>(&self) -> S {
        S::from_ratio(self.form_scale.0, self.form_scale.1)
    }

    pub fn dims(&self) -> GroupDims {
        let n = self.n;
        let rank = match self.family {
            Family::Sl => n - 1,
            Family::Gl => n,
        };
        let unipotent = n * (n - 1) / 2;
        GroupDims { group: self.basis.len(), borel: rank + unipotent, unipotent, rank }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn t_range(&self) -> Range<usize> {
        0..self.dims().rank
    }

    pub fn u_range(&self) -> Range<usize> {
        let d = self.dims();
        d.rank..d.borel
    }

    pub fn b_range(&self) -> Range<usize> {
        0..self.dims().borel
    }

    pub fn basis_element<S: Scalar>(&self, k: usize) -> Mat<S> {
        let mut m = Mat::zeros(self.n, self.n);
        for &(i, j, v) in &self.basis[k] {
            m[(i, j)] = S::from_i64(v);
        }
        m
    }

    pub fn basis<S: Scalar>(&self) -> Vec<Mat<S>> {
        (0..self.dim()).map(|k| self.basis_element(k)).collect()
    }

    pub fn from_coords<S: Scalar>(&self, c: &[S]) -> Mat<S> {
        assert_eq!(c.len(), self.dim(), "coordinate length mismatch");
        let mut m = Mat::<S>::zeros(self.n, self.n);
        for (k, ck) in c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            for &(i, j, v) in &self.basis[k] {
                m[(i, j)] = m[(i, j)].clone() + ck.clone() * S::from_i64(v);
            }
        }
        m
    }

    /// Coordinates of an algebra element; errors if `m ∉ g`.
    pub fn coords<S: Scalar>(&self, m: &Mat<S>) -> Result<Vec<S>> {
        let n = self.n;
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n}, got {}x{}", m.rows(), m.cols())));
        }
        let mut c = Vec::with_capacity(self.dim());
        match self.family {
            Family::Sl => {
                if !m.trace().is_negligible(m.max_modulus()) {
                    return Err(Error::NotInAlgebra("trace is nonzero".into()));
                }
                // H_k = E_kk − E_{k+1,k+1}: partial sums of the diagonal
                let mut acc = S::zero();
                for k in 0..n - 1 {
                    acc = acc + m[(k, k)].clone();
                    c.push(acc.clone());
                }
            }
            Family::Gl => c.extend(m.diagonal()),
        }
        for i in 0..n {
            for j in i + 1..n {
                c.push(m[(i, j)].clone());
            }
        }
        for i in 0..n {
            for j in 0..i {
                c.push(m[(i, j)].clone());
            }
        }
        Ok(c)
    }

    /// Gram matrix of the invariant form in the coordinate basis.
    pub fn metric<S: Scalar>(&self) -> Mat<S> {
        let d = self.dim();
        let c: S = self.form_scale();
        Mat::from_fn(d, d, |i, j| c.clone() * S::from_i64(self.trace_gram[i * d + j]))
    }

    pub fn form<S: Scalar>(&self, x: &Mat<S>, y: &Mat<S>) -> S {
        self.form_scale::<S>() * (x * y).trace()
    }

    /// Dual coordinates `((a, e_k))_k` of the covector with algebra coordinate `a`.
    pub fn dual_coords<S: Scalar>(&self, a: &Mat<S>) -> Vec<S> {
        let c: S = self.form_scale();
        (0..self.dim())
            .map(|k| {
                let mut t = S::zero();
                for &(i, j, v) in &self.basis[k] {
                    // tr(a E_ij) = a_ji
                    t = t + a[(j, i)].clone() * S::from_i64(v);
                }
                c.clone() * t
            })
            .collect()
    }

    /// Algebra element whose dual coordinates are `alpha`.
    pub fn from_dual_coords<S: Scalar>(&self, alpha: &[S]) -> Mat<S> {
        let c = self
            .metric::<S>()
            .solve(alpha)
            .expect("invariant form is nondegenerate");
        self.from_coords(&c)
    }

    pub fn bracket<S: Scalar>(&self, x: &Mat<S>, y: &Mat<S>) -> Mat<S> {
        &(x * y) - &(y * x)
    }

    /// Matrix of `ad_x` in coordinates: column k holds the coordinates of `[x, e_k]`.
    pub fn ad_matrix<S: Scalar>(&self, x: &Mat<S>) -> Mat<S> {
        let cols: Vec<Vec<S>> = (0..self.dim())
            .map(|k| {
                self.coords(&self.bracket(x, &self.basis_element(k)))
                    .expect("algebra is closed under brackets")
            })
            .collect();
        Mat::from_cols(self.dim(), &cols)
    }

    /// `Ad_g x = g x g⁻¹`, with `g⁻¹` supplied.
    pub fn adjoint_with<S: Scalar>(&self, g: &Mat<S>, g_inv: &Mat<S>, x: &Mat<S>) -> Mat<S> {
        &(g * x) * g_inv
    }

    pub fn adjoint<S: Scalar>(&self, g: &Mat<S>, x: &Mat<S>) -> Mat<S> {
        let g_inv = g.inverse().expect("group elements are invertible");
        self.adjoint_with(g, &g_inv, x)
    }

    /// Matrix of `Ad_g` in coordinates.
    pub fn adjoint_matrix<S: Scalar>(&self, g: &Mat<S>) -> Mat<S> {
        let g_inv = g.inverse().expect("group elements are invertible");
        let cols: Vec<Vec<S>> = (0..self.dim())
            .map(|k| {
                self.coords(&self.adjoint_with(g, &g_inv, &self.basis_element(k)))
                    .expect("Ad preserves the algebra")
            })
            .collect();
        Mat::from_cols(self.dim(), &cols)
    }

    /// Checks membership in `G`.
    pub fn check_element<S: Scalar>(&self, m: &Mat<S>) -> Result<()> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::NotInGroup(format!("expected {0}x{0} matrix", self.n)));
        }
        let det = m.det();
        if det.is_negligible(m.max_modulus().powi(self.n as i32)) {
            return Err(Error::NotInGroup("matrix is not invertible".into()));
        }
        if self.family == Family::Sl && !(det - S::one()).is_negligible(1.0) {
            return Err(Error::NotInGroup("determinant is not 1".into()));
        }
        Ok(())
    }

    fn sigma_weights<S: Scalar>(&self) -> (S, S) {
        let half = S::from_ratio(1, 2);
        match self.corruption {
            Corruption::SigmaHalf => (S::one(), S::one()),
            Corruption::SigmaSign => (half.clone(), -half),
            _ => (half.clone(), half),
        }
    }

    /// `σ_g(ξ) = ½(ξ^R + ξ^L)^∨`; left-trivialized coordinate `½(ξ + Ad_{g⁻¹}ξ)`.
    pub fn sigma<S: Scalar>(&self, g: &Mat<S>, xi: &Mat<S>) -> Covector<S> {
        let g_inv = g.inverse().expect("group elements are invertible");
        self.sigma_with(g, &g_inv, xi)
    }

    pub fn sigma_with<S: Scalar>(&self, g: &Mat<S>, g_inv: &Mat<S>, xi: &Mat<S>) -> Covector<S> {
        let (wl, wr) = self.sigma_weights::<S>();
        let right = self.adjoint_with(g_inv, g, xi);
        Covector { coord: &xi.scale(&wl) + &right.scale(&wr) }
    }

    /// Adjoint of σ under the invariant form: `½(a + Ad_g a)`.
    pub fn sigma_adjoint<S: Scalar>(&self, g: &Mat<S>, alpha: &Covector<S>) -> Mat<S> {
        let (wl, wr) = self.sigma_weights::<S>();
        let moved = self.adjoint(g, &alpha.coord);
        &alpha.coord.scale(&wl) + &moved.scale(&wr)
    }

    /// The conjugation field `ρ(ξ) = ξ^L − ξ^R`; coordinate `ξ − Ad_{g⁻¹}ξ`.
    pub fn conj_field<S: Scalar>(&self, g: &Mat<S>, xi: &Mat<S>) -> TangentVec<S> {
        let g_inv = g.inverse().expect("group elements are invertible");
        self.conj_field_with(g, &g_inv, xi)
    }

    pub fn conj_field_with<S: Scalar>(&self, g: &Mat<S>, g_inv: &Mat<S>, xi: &Mat<S>) -> TangentVec<S> {
        TangentVec { coord: xi - &self.adjoint_with(g_inv, g, xi) }
    }

    /// Matrix of `ξ ↦ ρ(ξ)` in coordinates.
    pub fn conj_field_matrix<S: Scalar>(&self, g: &Mat<S>) -> Mat<S> {
        let g_inv = g.inverse().expect("group elements are invertible");
        let cols: Vec<Vec<S>> = (0..self.dim())
            .map(|k| {
                let v = self.conj_field_with(g, &g_inv, &self.basis_element(k));
                self.coords(&v.coord).expect("conjugation fields lie in g")
            })
            .collect();
        Mat::from_cols(self.dim(), &cols)
    }

    /// `ρ^∨(v)`: the unique ζ with `(ζ, ξ) = (v, ρ(ξ))` for all ξ, obtained by
    /// solving the linear system in the coordinate basis.
    pub fn rho_adjoint<S: Scalar>(&self, v: &TangentVec<S>, base: &Mat<S>) -> Mat<S> {
        let k = self.metric::<S>();
        let r = self.conj_field_matrix(base);
        let vc = self.coords(&v.coord).expect("tangent coordinate lies in g");
        let rhs = r.transpose().mul_vec(&k.mul_vec(&vc));
        let zeta = k.solve(&rhs).expect("invariant form is nondegenerate");
        self.from_coords(&zeta)
    }

    /// The alternating element `η(x,y,z) = (1/12)(x,[y,z])` of `∧³g*`.
    pub fn eta<S: Scalar>(&self, x: &Mat<S>, y: &Mat<S>, z: &Mat<S>) -> S {
        S::from_ratio(1, 12) * self.form(x, &self.bracket(y, z))
    }

    /// Value of the bi-invariant Cartan 3-form on three left-trivialized
    /// tangent vectors, in the convention where `dω(X,Y,Z)` carries no
    /// combinatorial prefactor: `−3!·η(x,y,z) = −½(x,[y,z])`.
    ///
    /// The sign belongs to the conjugation field `ξ − Ad_{g⁻¹}ξ`. With it the
    /// moment condition forces the double's 2-form to be the negative of the
    /// usual one, and then `dω = −Φ*H` and Cartan–Dirac closure both hold for
    /// this `H`.
    pub fn cartan_three_form<S: Scalar>(&self, x: &Mat<S>, y: &Mat<S>, z: &Mat<S>) -> S {
        S::from_i64(-6) * self.eta(x, y, z)
    }

    /// Components `χ^{ijk}` of the trivector obtained from η by raising all
    /// indices with the invariant form.
    pub fn chi<S: Scalar>(&self) -> Vec<S> {
        let d = self.dim();
        let basis = self.basis::<S>();
        let k_inv = self.metric::<S>().inverse().expect("invariant form is nondegenerate");
        let mut eta = vec![S::zero(); d * d * d];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    eta[(a * d + b) * d + c] = self.eta(&basis[a], &basis[b], &basis[c]);
                }
            }
        }
        // raise one index at a time
        let mut cur = eta;
        for slot in 0..3 {
            let mut next = vec![S::zero(); d * d * d];
            for i0 in 0..d {
                for i1 in 0..d {
                    for i2 in 0..d {
                        let idx = [i0, i1, i2];
                        let mut acc = S::zero();
                        for m in 0..d {
                            let kv = &k_inv[(idx[slot], m)];
                            if kv.is_zero() {
                                continue;
                            }
                            let mut src = idx;
                            src[slot] = m;
                            acc = acc + kv.clone() * cur[(src[0] * d + src[1]) * d + src[2]].clone();
                        }
                        next[(i0 * d + i1) * d + i2] = acc;
                    }
                }
            }
            cur = next;
        }
        cur
    }

    pub fn is_in_borel<S: Scalar>(&self, b: &Mat<S>) -> bool {
        b.is_upper_triangular()
    }

    /// `b = t·u` with `t` diagonal and `u` unit upper triangular.
    pub fn borel_decompose<S: Scalar>(&self, b: &Mat<S>) -> Result<(Mat<S>, Mat<S>)> {
        if !b.is_upper_triangular() {
            return Err(Error::NotInBorel);
        }
        self.check_element(b)?;
        let t = Mat::diag(&b.diagonal());
        let t_inv = Mat::diag(&b.diagonal().into_iter().map(|d| S::one() / d).collect::<Vec<_>>());
        Ok((t, &t_inv * b))
    }

    /// Nonconstant characteristic-polynomial invariants: the elementary
    /// symmetric functions `e_1, …, e_{n-1}` of the eigenvalues, plus `e_n =
    /// det` for `GL_n`.
    pub fn chevalley<S: Scalar>(&self, g: &Mat<S>) -> Vec<S> {
        let e = char_poly_elementary(g);
        match self.family {
            Family::Sl => e[..self.n - 1].to_vec(),
            Family::Gl => e,
        }
    }

    pub fn weyl_group(&self) -> WeylGroup {
        WeylGroup::new(self.n, self.family)
    }
}

/// Elementary symmetric functions `e_1..e_n` of the eigenvalues, by
/// Faddeev–LeVerrier.
pub fn char_poly_elementary<S: Scalar>(g: &Mat<S>) -> Vec<S> {
    let n = g.rows();
    // p(λ) = det(λI − g) = Σ c_k λ^k with c_n = 1
    let mut c = vec![S::zero(); n + 1];
    c[n] = S::one();
    let mut m = Mat::<S>::zeros(n, n);
    let id = Mat::<S>::identity(n);
    for k in 1..=n {
        m = &(g * &m) + &id.scale(&c[n - k + 1]);
        c[n - k] = -(g * &m).trace() / S::from_i64(k as i64);
    }
    (1..=n)
        .map(|k| if k % 2 == 0 { c[n - k].clone() } else { -c[n - k].clone() })
        .collect()
}

/// Left-trivialized tangent vector `g·coord`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVec<S> {
    pub coord: Mat<S>,
}

/// Covector `α` with `α(g·x) = (coord, x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Covector<S> {
    pub coord: Mat<S>,
}

impl<S: Scalar> Covector<S> {
    pub fn dual_coords(&self, ctx: &LieGroup) -> Vec<S> {
        ctx.dual_coords(&self.coord)
    }
}

/// A validated element of `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<S> {
    m: Mat<S>,
}

impl<S: Scalar> GroupElement<S> {
    pub fn new(ctx: &LieGroup, m: Mat<S>) -> Result<Self> {
        ctx.check_element(&m)?;
        Ok(GroupElement { m })
    }

    pub fn identity(ctx: &LieGroup) -> Self {
        GroupElement { m: Mat::identity(ctx.n()) }
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.m
    }

    pub fn into_matrix(self) -> Mat<S> {
        self.m
    }

    pub fn inverse(&self) -> Self {
        GroupElement { m: self.m.inverse().expect("validated elements are invertible") }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GroupElement { m: &self.m * &other.m }
    }
}

/// Weyl group of the diagonal torus, as the symmetric group acting by
/// permutation matrices. For `SL_n` each permutation matrix has its first
/// column negated when needed so the representative has determinant one.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    n: usize,
    family: Family,
    perms: Vec<Vec<usize>>,
}

impl WeylGroup {
    pub fn new(n: usize, family: Family) -> Self {
        let mut perms = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        permutations(&mut current, 0, &mut perms);
        perms.sort();
        WeylGroup { n, family, perms }
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Representative in `N(T)` of the permutation `w`: column `j` is
    /// `±e_{w(j)}`.
    pub fn representative<S: Scalar>(&self, k: usize) -> Mat<S> {
        let w = &self.perms[k];
        let mut m = Mat::zeros(self.n, self.n);
        for (j, &i) in w.iter().enumerate() {
            m[(i, j)] = S::one();
        }
        if self.family == Family::Sl && permutation_sign(w) < 0 {
            for i in 0..self.n {
                m[(i, 0)] = -m[(i, 0)].clone();
            }
        }
        m
    }

    /// Index of the permutation underlying a monomial matrix.
    pub fn index_of_monomial<S: Scalar>(&self, m: &Mat<S>) -> Option<usize> {
        let scale = m.max_modulus();
        let mut w = vec![usize::MAX; self.n];
        for j in 0..self.n {
            let nonzero: Vec<usize> = (0..self.n).filter(|&i| !m[(i, j)].is_negligible(scale)).collect();
            if nonzero.len() != 1 {
                return None;
            }
            w[j] = nonzero[0];
        }
        self.perms.iter().position(|p| *p == w)
    }
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

fn permutation_sign(w: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                sign = -sign;
            }
        }
    }
    sign
}
