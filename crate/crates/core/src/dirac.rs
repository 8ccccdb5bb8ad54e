//! Pointwise Dirac linear algebra on trivialized `T ⊕ T*`.
//!
//! An element of a fiber is a column `(x; α)` of length `2d`: `x` holds
//! left-trivialized tangent coordinates and `α` holds *dual* coordinates of the
//! covector (its values on the coordinate basis). The pairing is then
//! `⟨(x,α),(y,β)⟩ = α·y + β·x` with no metric involved, which keeps product
//! spaces such as `G×B` uniform. For covectors on `G` the dual coordinates of the
//! algebra element `a` are `K·coords(a)`, `K` the Gram matrix of the form.

use serde_json::{json, Value};

use crate::check::CheckOutcome;
use crate::diffcalc::{self, CoordMap, PointedMap, Space};
use crate::error::{Error, Result};
use crate::io::{mat_to_json, vec_to_json};
use crate::linalg::{kernel, Mat, Subspace};
use crate::liegroup::{Corruption, LieGroup};
use crate::scalar::Scalar;

/// `[[0, I], [I, 0]]`.
pub fn pairing_matrix<S: Scalar>(d: usize) -> Mat<S> {
    Mat::from_fn(2 * d, 2 * d, |i, j| if i + d == j || j + d == i { S::one() } else { S::zero() })
}

/// `α·y + β·x` for `e1 = (x, α)`, `e2 = (y, β)`.
pub fn pairing<S: Scalar>(e1: &[S], e2: &[S]) -> S {
    assert_eq!(e1.len(), e2.len(), "pairing of elements of different fibers");
    assert!(e1.len().is_multiple_of(2));
    let d = e1.len() / 2;
    let mut acc = S::zero();
    for k in 0..d {
        acc = acc + e1[d + k].clone() * e2[k].clone() + e2[d + k].clone() * e1[k].clone();
    }
    acc
}

/// The pairing on `T_gG ⊕ T_g*G` with covectors given as algebra elements.
pub fn pairing_metric<S: Scalar>(ctx: &LieGroup, x: &Mat<S>, a: &Mat<S>, y: &Mat<S>, b: &Mat<S>) -> S {
    ctx.form(a, y) + ctx.form(b, x)
}

/// Why a fiber fails to be Lagrangian.
#[derive(Clone, Debug, PartialEq)]
pub enum LagrangianDefect<S> {
    Dimension { got: usize, expected: usize },
    NotIsotropic { i: usize, j: usize, value: S },
}

impl<S: Scalar> LagrangianDefect<S> {
    pub fn to_json(&self) -> Value {
        match self {
            LagrangianDefect::Dimension { got, expected } => {
                json!({"kind": "dimension", "got": got, "expected": expected})
            }
            LagrangianDefect::NotIsotropic { i, j, value } => {
                json!({"kind": "not-isotropic", "i": i, "j": j, "value": value.to_json()})
            }
        }
    }
}

/// A linear subspace of `T_p ⊕ T_p*` at a base point.
#[derive(Clone, Debug)]
pub struct DiracFiber<S> {
    pub base: Vec<Mat<S>>,
    tangent_dim: usize,
    subspace: Subspace<S>,
}

impl<S: Scalar> DiracFiber<S> {
    pub fn new(base: Vec<Mat<S>>, tangent_dim: usize, generators: &Mat<S>) -> Self {
        assert_eq!(generators.rows(), 2 * tangent_dim, "generators must have 2d rows");
        DiracFiber { base, tangent_dim, subspace: Subspace::span(generators) }
    }

    /// Span of the columns `(x_k; α_k)`.
    pub fn from_parts(base: Vec<Mat<S>>, tangent: &Mat<S>, covector: &Mat<S>) -> Self {
        let d = tangent.rows();
        Self::new(base, d, &tangent.vstack(covector))
    }

    pub fn tangent_space(base: Vec<Mat<S>>, d: usize) -> Self {
        Self::from_parts(base, &Mat::identity(d), &Mat::zeros(d, d))
    }

    pub fn cotangent_space(base: Vec<Mat<S>>, d: usize) -> Self {
        Self::from_parts(base, &Mat::zeros(d, d), &Mat::identity(d))
    }

    pub fn tangent_dim(&self) -> usize {
        self.tangent_dim
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn subspace(&self) -> &Subspace<S> {
        &self.subspace
    }

    pub fn basis(&self) -> &Mat<S> {
        self.subspace.basis()
    }

    pub fn tangent_part(&self) -> Mat<S> {
        self.basis().block(0, 0, self.tangent_dim, self.dim())
    }

    pub fn covector_part(&self) -> Mat<S> {
        self.basis().block(self.tangent_dim, 0, self.tangent_dim, self.dim())
    }

    pub fn contains(&self, x: &[S], alpha: &[S]) -> bool {
        let v: Vec<S> = x.iter().chain(alpha).cloned().collect();
        self.subspace.contains(&v)
    }

    /// Subspace equality; base points are not compared.
    pub fn equals(&self, other: &Self) -> bool {
        self.tangent_dim == other.tangent_dim && self.subspace.equals(&other.subspace)
    }

    /// Image in `T`.
    pub fn tangent_projection(&self) -> Subspace<S> {
        Subspace::span(&self.tangent_part())
    }

    /// `{x : (x, 0) ∈ L}`.
    pub fn kernel_part(&self) -> Subspace<S> {
        let coeffs = kernel(&self.covector_part());
        Subspace::span(&(&self.tangent_part() * coeffs.basis()))
    }

    /// `{α : (0, α) ∈ L}`.
    pub fn cotangent_part(&self) -> Subspace<S> {
        let coeffs = kernel(&self.tangent_part());
        Subspace::span(&(&self.covector_part() * coeffs.basis()))
    }

    pub fn gram(&self) -> Mat<S> {
        let b = self.basis();
        &(&b.transpose() * &pairing_matrix(self.tangent_dim)) * b
    }

    pub fn lagrangian_defect(&self) -> Option<LagrangianDefect<S>> {
        if self.dim() != self.tangent_dim {
            return Some(LagrangianDefect::Dimension { got: self.dim(), expected: self.tangent_dim });
        }
        let gram = self.gram();
        let scale = self.basis().max_modulus().powi(2);
        for i in 0..gram.rows() {
            for j in i..gram.cols() {
                if !gram[(i, j)].is_negligible(scale) {
                    return Some(LagrangianDefect::NotIsotropic { i, j, value: gram[(i, j)].clone() });
                }
            }
        }
        None
    }

    pub fn is_lagrangian(&self) -> bool {
        self.lagrangian_defect().is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.iter().map(mat_to_json).collect::<Vec<_>>(),
            "tangent_dim": self.tangent_dim,
            "basis": mat_to_json(self.basis()),
        })
    }
}

fn check_skew<S: Scalar>(m: &Mat<S>, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{what} matrix is {}x{}", m.rows(), m.cols())));
    }
    let sum = m + &m.transpose();
    let scale = m.max_modulus();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !sum[(i, j)].is_negligible(scale) {
                return Err(Error::NotSkew(format!("{what} entries ({i},{j}) and ({j},{i}) do not cancel")));
            }
        }
    }
    Ok(())
}

/// A skew bilinear form `Ω_ij = ω(e_i, e_j)` on trivialized tangent coordinates.
#[derive(Clone, Debug)]
pub struct TwoFormFiber<S> {
    pub base: Vec<Mat<S>>,
    matrix: Mat<S>,
}

impl<S: Scalar> TwoFormFiber<S> {
    pub fn new(base: Vec<Mat<S>>, matrix: Mat<S>) -> Result<Self> {
        check_skew(&matrix, "two-form")?;
        Ok(TwoFormFiber { base, matrix })
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.matrix
    }

    pub fn eval(&self, x: &[S], y: &[S]) -> S {
        dot(x, &self.matrix.mul_vec(y))
    }

    /// `ω♭(x) = ω(x, ·)` in dual coordinates.
    pub fn flat(&self, x: &[S]) -> Vec<S> {
        self.matrix.transpose().mul_vec(x)
    }

    /// Pullback along a linear map `A` (new coordinates → these).
    pub fn pullback(&self, a: &Mat<S>, base: Vec<Mat<S>>) -> Self {
        TwoFormFiber { base, matrix: &(&a.transpose() * &self.matrix) * a }
    }
}

/// A skew bivector `Π_ij = π(e^i, e^j)` on dual coordinates.
#[derive(Clone, Debug)]
pub struct BivectorFiber<S> {
    pub base: Vec<Mat<S>>,
    matrix: Mat<S>,
}

impl<S: Scalar> BivectorFiber<S> {
    pub fn new(base: Vec<Mat<S>>, matrix: Mat<S>) -> Result<Self> {
        check_skew(&matrix, "bivector")?;
        Ok(BivectorFiber { base, matrix })
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.matrix
    }

    /// `π♯(α) = π(α, ·)`.
    pub fn sharp(&self, alpha: &[S]) -> Vec<S> {
        self.matrix.transpose().mul_vec(alpha)
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `L_ω = {(x, ω♭x)}`.
pub fn graph_two_form<S: Scalar>(omega: &TwoFormFiber<S>) -> DiracFiber<S> {
    let d = omega.matrix.rows();
    DiracFiber::from_parts(omega.base.clone(), &Mat::identity(d), &omega.matrix.transpose())
}

/// `L_π = {(π♯α, α)}`.
pub fn graph_bivector<S: Scalar>(pi: &BivectorFiber<S>) -> DiracFiber<S> {
    let d = pi.matrix.rows();
    DiracFiber::from_parts(pi.base.clone(), &pi.matrix.transpose(), &Mat::identity(d))
}

/// `A*L = {(x, Aᵀα) : (Ax, α) ∈ L}` for `A: T_M → T_N` and `L ⊂ T_N ⊕ T_N*`.
pub fn pullback_linear<S: Scalar>(fiber: &DiracFiber<S>, a: &Mat<S>, base: Vec<Mat<S>>) -> DiracFiber<S> {
    let (dn, dm) = (a.rows(), a.cols());
    assert_eq!(dn, fiber.tangent_dim, "map codomain does not match the fiber");
    let k = fiber.dim();
    // (x, c) with A x = Y c
    let system = a.hstack(&(-fiber.tangent_part()));
    let sol = kernel(&system);
    if sol.dim() == 0 {
        return DiracFiber::new(base, dm, &Mat::zeros(2 * dm, 0));
    }
    let xs = sol.basis().block(0, 0, dm, sol.dim());
    let cs = sol.basis().block(dm, 0, k, sol.dim());
    let alphas = &a.transpose() * &(&fiber.covector_part() * &cs);
    DiracFiber::new(base, dm, &xs.vstack(&alphas))
}

/// `A_*L = {(Ax, α) : (x, Aᵀα) ∈ L}` for `A: T_M → T_N` and `L ⊂ T_M ⊕ T_M*`.
///
/// Errors when the result is not Lagrangian, which cannot happen for a
/// Lagrangian input and so flags a malformed fiber.
pub fn pushforward_linear<S: Scalar>(fiber: &DiracFiber<S>, a: &Mat<S>, base: Vec<Mat<S>>) -> Result<DiracFiber<S>> {
    let (dn, dm) = (a.rows(), a.cols());
    assert_eq!(dm, fiber.tangent_dim, "map domain does not match the fiber");
    let k = fiber.dim();
    // (c, α) with B c = Aᵀ α
    let system = fiber.covector_part().hstack(&(-a.transpose()));
    let sol = kernel(&system);
    let out = if sol.dim() == 0 {
        DiracFiber::new(base, dn, &Mat::zeros(2 * dn, 0))
    } else {
        let cs = sol.basis().block(0, 0, k, sol.dim());
        let alphas = sol.basis().block(k, 0, dn, sol.dim());
        let xs = a * &(&fiber.tangent_part() * &cs);
        DiracFiber::new(base, dn, &xs.vstack(&alphas))
    };
    if fiber.dim() == dm && out.dim() != dn {
        return Err(Error::IllDefinedFiber(format!("pushforward has dimension {} instead of {dn}", out.dim())));
    }
    Ok(out)
}

/// Pullback of a fiber at `f(p)` along a pointed map.
pub fn pullback<S: Scalar>(ctx: &LieGroup, fiber: &DiracFiber<S>, f: &PointedMap<'_, S>, p: &[Mat<S>]) -> Result<DiracFiber<S>> {
    let jac = f.jacobian(ctx, p)?;
    Ok(pullback_linear(fiber, &jac, p.to_vec()))
}

/// Pushforward of a fiber at `p = fiber.base` along a pointed map.
pub fn pushforward<S: Scalar>(ctx: &LieGroup, fiber: &DiracFiber<S>, f: &PointedMap<'_, S>) -> Result<DiracFiber<S>> {
    let jac = f.jacobian(ctx, &fiber.base)?;
    pushforward_linear(fiber, &jac, f.apply(&fiber.base))
}

/// A section `p ↦ (X(p), α(p))`, covector part in dual coordinates.
pub struct DiracSection<'a, S: Scalar> {
    pub tangent: Box<CoordMap<'a, S>>,
    pub covector: Box<CoordMap<'a, S>>,
}

impl<'a, S: Scalar> DiracSection<'a, S> {
    pub fn new(
        tangent: impl Fn(&[Mat<diffcalc::Dual<S>>]) -> Vec<diffcalc::Dual<S>> + Send + Sync + 'a,
        covector: impl Fn(&[Mat<diffcalc::Dual<S>>]) -> Vec<diffcalc::Dual<S>> + Send + Sync + 'a,
    ) -> Self {
        DiracSection { tangent: Box::new(tangent), covector: Box::new(covector) }
    }

    pub fn at(&self, p: &[Mat<S>]) -> (Vec<S>, Vec<S>) {
        let lp = diffcalc::lift_point(p);
        let vals = |v: Vec<diffcalc::Dual<S>>| v.into_iter().map(|d| d.value).collect::<Vec<_>>();
        (vals((self.tangent)(&lp)), vals((self.covector)(&lp)))
    }
}

/// A 3-form evaluated at a point on three coordinate vectors.
pub type ThreeFormFamily<'a, S> = dyn Fn(&[Mat<S>], &[S], &[S], &[S]) -> S + Send + Sync + 'a;

/// The twisted Dorfman bracket `([X,Y], L_Xβ − ι_Y dα + H(X,Y,·))` at `p`.
///
/// The `DorfmanEta` corruption flips the sign of the twisting term.
pub fn dorfman<S: Scalar>(
    ctx: &LieGroup,
    space: &Space,
    s1: &DiracSection<'_, S>,
    s2: &DiracSection<'_, S>,
    twist: Option<&ThreeFormFamily<'_, S>>,
    p: &[Mat<S>],
) -> (Vec<S>, Vec<S>) {
    let d = space.dim(ctx);
    let tangent = diffcalc::lie_bracket(ctx, space, &*s1.tangent, &*s2.tangent, p);
    let lie = diffcalc::lie_derivative_covector(ctx, space, &*s1.tangent, &*s2.covector, p);
    let contraction = diffcalc::interior_d(ctx, space, &*s2.tangent, &*s1.covector, p);
    let mut covector: Vec<S> = lie.into_iter().zip(contraction).map(|(a, b)| a - b).collect();
    if let Some(h) = twist {
        let (x, _) = s1.at(p);
        let (y, _) = s2.at(p);
        let sign = if ctx.corruption() == Corruption::DorfmanEta { -S::one() } else { S::one() };
        for (k, c) in covector.iter_mut().enumerate() {
            let ek = diffcalc::unit::<S>(d, k);
            *c = c.clone() + sign.clone() * h(p, &x, &y, &ek);
        }
    }
    (tangent, covector)
}

/// The Cartan 3-form on `G` as a twisting family.
pub fn cartan_twist<S: Scalar>(ctx: &LieGroup) -> impl Fn(&[Mat<S>], &[S], &[S], &[S]) -> S + Send + Sync + '_ {
    move |_p, x, y, z| ctx.cartan_three_form(&ctx.from_coords(x), &ctx.from_coords(y), &ctx.from_coords(z))
}

/// `L_g = span{(ρ(ξ), σ(ξ))}` over the coordinate basis of `g`.
pub fn cartan_dirac<S: Scalar>(ctx: &LieGroup, g: &Mat<S>) -> DiracFiber<S> {
    let d = ctx.dim();
    let g_inv = g.inverse().expect("group elements are invertible");
    let mut tangent = Vec::with_capacity(d);
    let mut covector = Vec::with_capacity(d);
    for k in 0..d {
        let xi = ctx.basis_element::<S>(k);
        let rho = ctx.conj_field_with(g, &g_inv, &xi);
        tangent.push(ctx.coords(&rho.coord).expect("conjugation fields lie in g"));
        covector.push(ctx.sigma_with(g, &g_inv, &xi).dual_coords(ctx));
    }
    DiracFiber::from_parts(vec![g.clone()], &Mat::from_cols(d, &tangent), &Mat::from_cols(d, &covector))
}

/// The section `e_ξ = (ρ(ξ), σ(ξ))` of the Cartan–Dirac structure.
pub fn cartan_dirac_section<'a, S: Scalar>(ctx: &'a LieGroup, xi: &Mat<S>) -> DiracSection<'a, S> {
    let xi_t = diffcalc::lift_mat(xi);
    let xi_c = xi_t.clone();
    DiracSection::new(
        move |p| {
            let g_inv = p[0].inverse().expect("group elements are invertible");
            ctx.coords(&ctx.conj_field_with(&p[0], &g_inv, &xi_t).coord).expect("conjugation fields lie in g")
        },
        move |p| {
            let g_inv = p[0].inverse().expect("group elements are invertible");
            ctx.sigma_with(&p[0], &g_inv, &xi_c).dual_coords(ctx)
        },
    )
}

pub fn vectors_to_json<S: Scalar>(x: &[S], alpha: &[S]) -> Value {
    json!({"tangent": vec_to_json(x), "covector": vec_to_json(alpha)})
}

/// `L_g` is Lagrangian of dimension `dim G`.
pub fn cartan_dirac_check<S: Scalar>(ctx: &LieGroup, g: &Mat<S>) -> CheckOutcome {
    let fiber = cartan_dirac(ctx, g);
    match fiber.lagrangian_defect() {
        None if fiber.dim() == ctx.dim() => CheckOutcome::pass("cartan-dirac.lagrangian"),
        None => CheckOutcome::fail("cartan-dirac.lagrangian", json!({"dim": fiber.dim(), "expected": ctx.dim()})),
        Some(defect) => CheckOutcome::fail("cartan-dirac.lagrangian", defect.to_json()),
    }
}

/// `[[e_ξ, e_ζ]] − e_{[ξ,ζ]}` at `g`, tangent and covector parts stacked.
pub fn closure_defect<S: Scalar>(ctx: &LieGroup, g: &Mat<S>, xi: &Mat<S>, zeta: &Mat<S>) -> Vec<S> {
    let space = Space::group();
    let twist = cartan_twist::<S>(ctx);
    let p = [g.clone()];
    let (x, a) = dorfman(
        ctx,
        &space,
        &cartan_dirac_section(ctx, xi),
        &cartan_dirac_section(ctx, zeta),
        Some(&twist),
        &p,
    );
    let (y, b) = cartan_dirac_section(ctx, &ctx.bracket(xi, zeta)).at(&p);
    x.iter().chain(&a).zip(y.iter().chain(&b)).map(|(u, v)| u.clone() - v.clone()).collect()
}

/// Closure `[[e_ξ, e_ζ]] = e_{[ξ,ζ]}` on all basis pairs at `g`.
pub fn closure_check<S: Scalar>(ctx: &LieGroup, g: &Mat<S>) -> CheckOutcome {
    let d = ctx.dim();
    let space = Space::group();
    let twist = cartan_twist::<S>(ctx);
    let p = [g.clone()];
    let basis = ctx.basis::<S>();
    // the bracket at g only reads 1-jets, so each section is expanded once
    let sections: Vec<DiracSection<'_, S>> = basis
        .iter()
        .map(|xi| {
            let e = cartan_dirac_section(ctx, xi);
            DiracSection::new(
                diffcalc::linearize(ctx, &space, &*e.tangent, &p),
                diffcalc::linearize(ctx, &space, &*e.covector, &p),
            )
        })
        .collect();
    for i in 0..d {
        for j in 0..d {
            let (x, a) = dorfman(ctx, &space, &sections[i], &sections[j], Some(&twist), &p);
            let (y, b) = cartan_dirac_section(ctx, &ctx.bracket(&basis[i], &basis[j])).at(&p);
            let defect: Vec<S> = x.iter().chain(&a).zip(y.iter().chain(&b)).map(|(u, v)| u.clone() - v.clone()).collect();
            let scale = defect.iter().map(Scalar::modulus).fold(1.0, f64::max);
            if !defect.iter().all(|v| v.is_negligible(scale)) {
                return CheckOutcome::fail("cartan-dirac.closure", json!({"xi": i, "zeta": j, "defect": vec_to_json(&defect)}));
            }
        }
    }
    CheckOutcome::pass("cartan-dirac.closure")
}

/// The split-signature pairing on `g ⊕ g*` agrees with the metric one, is
/// symmetric, and is nondegenerate.
pub fn pairing_check<S: Scalar>(ctx: &LieGroup, x: &Mat<S>, a: &Mat<S>, y: &Mat<S>, b: &Mat<S>) -> CheckOutcome {
    let stack = |u: &Mat<S>, v: &Mat<S>| -> Vec<S> {
        ctx.coords(u).expect("algebra element").into_iter().chain(ctx.dual_coords(v)).collect()
    };
    let (e1, e2) = (stack(x, a), stack(y, b));
    let (p12, p21, metric) = (pairing(&e1, &e2), pairing(&e2, &e1), pairing_metric(ctx, x, a, y, b));
    if p12 != p21 && !(p12.clone() - p21.clone()).is_negligible(p12.modulus()) {
        return CheckOutcome::fail("pairing", json!({"reason": "not symmetric"}));
    }
    if !(p12.clone() - metric.clone()).is_negligible(p12.modulus().max(metric.modulus())) {
        return CheckOutcome::fail("pairing", json!({"dual": p12.to_json(), "metric": metric.to_json()}));
    }
    let d = ctx.dim();
    if pairing_matrix::<S>(d).rank() != 2 * d {
        return CheckOutcome::fail("pairing", json!({"reason": "degenerate"}));
    }
    CheckOutcome::pass("pairing")
}

#[cfg(test)]
mod tests;
