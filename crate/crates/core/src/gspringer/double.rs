//! The internal fusion double `D = G×G` with action
//! `(g₁,g₂)·(a,b) = (g₁ a g₂⁻¹, g₂ b g₂⁻¹)` and moment map `Φ(a,b) = (aba⁻¹, b⁻¹)`.
//!
//! The 2-form is built from the standard double form in coordinates
//! `(a′, b′) = (a, b a⁻¹)`,
//!
//! ```text
//! ω′ = ½(a′*θ, b′*θ̄) + ½(a′*θ̄, b′*θ)
//! ```
//!
//! pulled back along `(a, b) ↦ (a, b a⁻¹)` and negated. The sign is the one
//! compatible with the conjugation field `ξ − Ad_{g⁻¹}ξ`; at the identity
//! `ω((x₁,y₁),(x₂,y₂)) = (x₂,y₁) − (x₁,y₂)`.

use serde_json::{json, Value};

use crate::check::{all_of, CheckOutcome};
use crate::diffcalc::{self, Dual, Factor, PointedMap, Space};
use crate::dirac::{dot, TwoFormFiber};
use crate::error::Result;
use crate::io::{point_from_json, point_to_json, vec_to_json};
use crate::linalg::{kernel, Mat};
use crate::liegroup::{Corruption, LieGroup};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct DoublePoint<S> {
    pub a: Mat<S>,
    pub b: Mat<S>,
}

impl<S: Scalar> DoublePoint<S> {
    pub fn new(a: Mat<S>, b: Mat<S>) -> Self {
        DoublePoint { a, b }
    }

    pub fn as_point(&self) -> Vec<Mat<S>> {
        vec![self.a.clone(), self.b.clone()]
    }

    pub fn to_json(&self) -> Value {
        point_to_json(&["a", "b"], &self.as_point())
    }

    pub fn from_json(ctx: &LieGroup, v: &Value) -> Result<Self> {
        let p = point_from_json(&["a", "b"], v)?;
        for m in &p {
            ctx.check_element(m)?;
        }
        Ok(DoublePoint { a: p[0].clone(), b: p[1].clone() })
    }
}

pub fn double_space() -> Space {
    Space::new(&[Factor::G, Factor::G])
}

pub fn phi<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> (Mat<S>, Mat<S>) {
    let a_inv = a.inverse().expect("group elements are invertible");
    (&(a * b) * &a_inv, b.inverse().expect("group elements are invertible"))
}

pub fn phi_map<'a, S: Scalar>() -> PointedMap<'a, S> {
    PointedMap::new("phi", double_space(), double_space(), |p| {
        let (x, y) = phi(&p[0], &p[1]);
        vec![x, y]
    })
}

/// `(g₁,g₂)·(a,b)`.
pub fn act<S: Scalar>(g1: &Mat<S>, g2: &Mat<S>, p: &DoublePoint<S>) -> DoublePoint<S> {
    let g2_inv = g2.inverse().expect("group elements are invertible");
    DoublePoint { a: &(g1 * &p.a) * &g2_inv, b: &(g2 * &p.b) * &g2_inv }
}

/// Generating field of `(ξ₁, ξ₂)` at `(a, b)`:
/// `(ξ₂ − Ad_{a⁻¹}ξ₁, ξ₂ − Ad_{b⁻¹}ξ₂)` in stacked coordinates.
pub fn rho_double<S: Scalar>(ctx: &LieGroup, a: &Mat<S>, b: &Mat<S>, xi1: &Mat<S>, xi2: &Mat<S>) -> Vec<S> {
    let a_inv = a.inverse().expect("group elements are invertible");
    let b_inv = b.inverse().expect("group elements are invertible");
    let first = xi2 - &ctx.adjoint_with(&a_inv, a, xi1);
    let second = xi2 - &ctx.adjoint_with(&b_inv, b, xi2);
    let mut c = ctx.coords(&first).expect("generating fields lie in g");
    c.extend(ctx.coords(&second).expect("generating fields lie in g"));
    c
}

/// Matrix `Ω_ij = ω(e_i, e_j)` at `(a, b)`.
pub fn omega_double_matrix<S: Scalar>(ctx: &LieGroup, a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let d = ctx.dim();
    let k = ctx.metric::<S>();
    let a_inv = a.inverse().expect("group elements are invertible");
    let ad_a = ctx.adjoint_matrix(a);
    let ad_bp = ctx.adjoint_matrix(&(b * &a_inv));
    let sign = if ctx.corruption() == Corruption::OmegaSign { 1 } else { -1 };
    // ω′((x₁,y₁),(x₂,y₂)) = x₁ᵀ·N·y₂ − x₂ᵀ·N·y₁
    let n = (&(&k * &ad_bp) + &(&ad_a.transpose() * &k)).scale(&S::from_ratio(sign, 2));
    let zero = Mat::<S>::zeros(d, d);
    let prime = zero.hstack(&n).vstack(&(-n.transpose()).hstack(&zero));
    // (x, y) ↦ (x, Ad_a(y − x))
    let t = Mat::<S>::identity(d).hstack(&zero).vstack(&(-ad_a.clone()).hstack(&ad_a));
    &(&t.transpose() * &prime) * &t
}

pub fn omega_double<S: Scalar>(ctx: &LieGroup, p: &DoublePoint<S>) -> TwoFormFiber<S> {
    TwoFormFiber::new(p.as_point(), omega_double_matrix(ctx, &p.a, &p.b)).expect("ω is skew by construction")
}

/// ω as a point-dependent form for exact differentiation.
pub fn omega_family<S: Scalar>(
    ctx: &LieGroup,
) -> impl Fn(&[Mat<Dual<S>>], &[Dual<S>], &[Dual<S>]) -> Dual<S> + Send + Sync + '_ {
    move |p, u, v| dot(u, &omega_double_matrix(ctx, &p[0], &p[1]).mul_vec(v))
}

/// `ω♭(ρ(ξ₁,ξ₂))` and `Φ*(σ(ξ₁) ⊕ σ(ξ₂))` in dual coordinates.
pub fn moment_sides<S: Scalar>(ctx: &LieGroup, p: &DoublePoint<S>, xi1: &Mat<S>, xi2: &Mat<S>) -> (Vec<S>, Vec<S>) {
    let omega = omega_double(ctx, p);
    let lhs = omega.flat(&rho_double(ctx, &p.a, &p.b, xi1, xi2));
    let (m1, m2) = phi(&p.a, &p.b);
    let mut sigma = ctx.sigma(&m1, xi1).dual_coords(ctx);
    sigma.extend(ctx.sigma(&m2, xi2).dual_coords(ctx));
    let jac = phi_map::<S>().jacobian(ctx, &p.as_point()).expect("Φ is smooth on G×G");
    (lhs, jac.transpose().mul_vec(&sigma))
}

pub fn moment_condition_check<S: Scalar>(ctx: &LieGroup, p: &DoublePoint<S>, xi1: &Mat<S>, xi2: &Mat<S>) -> bool {
    let (lhs, rhs) = moment_sides(ctx, p, xi1, xi2);
    vectors_agree(&lhs, &rhs)
}

fn vectors_agree<S: Scalar>(a: &[S], b: &[S]) -> bool {
    let scale = a.iter().chain(b).map(Scalar::modulus).fold(0.0, f64::max);
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_negligible(scale))
}

/// (A1) on the basis of `g ⊕ g`.
pub fn axiom_moment<S: Scalar>(ctx: &LieGroup, p: &DoublePoint<S>) -> CheckOutcome {
    let d = ctx.dim();
    let zero = Mat::<S>::zeros(ctx.n(), ctx.n());
    for k in 0..2 * d {
        let e = ctx.basis_element::<S>(k % d);
        let (xi1, xi2) = if k < d { (e, zero.clone()) } else { (zero.clone(), e) };
        let (lhs, rhs) = moment_sides(ctx, p, &xi1, &xi2);
        if !vectors_agree(&lhs, &rhs) {
            return CheckOutcome::fail(
                "double.A1",
                json!({"basis_index": k, "omega_flat": vec_to_json(&lhs), "phi_sigma": vec_to_json(&rhs)}),
            );
        }
    }
    CheckOutcome::pass("double.A1")
}

/// `dω(x,y,z)` and `−Φ*(H ⊕ H)(x,y,z)`.
pub fn closedness_sides<S: Scalar>(ctx: &LieGroup, p: &DoublePoint<S>, x: &[S], y: &[S], z: &[S]) -> (S, S) {
    let d = ctx.dim();
    let point = p.as_point();
    let dw = diffcalc::d_two_form(ctx, &double_space(), &omega_family::<S>(ctx), &point, x, y, z);
    let jac = phi_map::<S>().jacobian(ctx, &point).expect("Φ is smooth on G×G");
    let (px, py, pz) = (jac.mul_vec(x), jac.mul_vec(y), jac.mul_vec(z));
    let h = |r: std::ops::Range<usize>| {
        ctx.cartan_three_form(
            &ctx.from_coords(&px[r.clone()]),
            &ctx.from_coords(&py[r.clone()]),
            &ctx.from_coords(&pz[r]),
        )
    };
    (dw, -(h(0..d) + h(d..2 * d)))
}

/// (A2) on one tangent triple.
pub fn axiom_closedness<S: Scalar>(ctx: &LieGroup, p: &DoublePoint<S>, x: &[S], y: &[S], z: &[S]) -> CheckOutcome {
    let (dw, target) = closedness_sides(ctx, p, x, y, z);
    let scale = dw.modulus().max(target.modulus());
    if (dw.clone() - target.clone()).is_negligible(scale) {
        CheckOutcome::pass("double.A2")
    } else {
        CheckOutcome::fail("double.A2", json!({"d_omega": dw.to_json(), "minus_phi_eta": target.to_json()}))
    }
}

/// (A3) `ker ω ∩ ker dΦ = 0`.
pub fn axiom_nondegeneracy<S: Scalar>(ctx: &LieGroup, p: &DoublePoint<S>) -> CheckOutcome {
    let omega = omega_double_matrix(ctx, &p.a, &p.b);
    let jac = phi_map::<S>().jacobian(ctx, &p.as_point()).expect("Φ is smooth on G×G");
    let common = kernel(&omega.transpose().vstack(&jac));
    if common.dim() == 0 {
        CheckOutcome::pass("double.A3")
    } else {
        CheckOutcome::fail("double.A3", json!({"intersection_dim": common.dim(), "basis": crate::io::mat_to_json(common.basis())}))
    }
}

/// (A4) `ω` is invariant under `(g₁, g₂)`.
pub fn axiom_invariance<S: Scalar>(ctx: &LieGroup, p: &DoublePoint<S>, g1: &Mat<S>, g2: &Mat<S>) -> CheckOutcome {
    let (h1, h2) = (diffcalc::lift_mat(g1), diffcalc::lift_mat(g2));
    let h2_inv = diffcalc::lift_mat(&g2.inverse().expect("group elements are invertible"));
    let action = PointedMap::<S>::new("act", double_space(), double_space(), move |q| {
        vec![&(&h1 * &q[0]) * &h2_inv, &(&h2 * &q[1]) * &h2_inv]
    });
    let moved = act(g1, g2, p);
    let jac = action.jacobian(ctx, &p.as_point()).expect("the action is smooth");
    let moved_omega = omega_double_matrix(ctx, &moved.a, &moved.b);
    let pulled = &(&jac.transpose() * &moved_omega) * &jac;
    let omega = omega_double_matrix(ctx, &p.a, &p.b);
    let scale = jac.max_modulus().powi(2) * moved_omega.max_modulus() * jac.rows() as f64;
    if pulled.approx_eq_at(&omega, scale.max(omega.max_modulus())) {
        CheckOutcome::pass("double.A4")
    } else {
        CheckOutcome::fail("double.A4", json!({"g1": crate::io::mat_to_json(g1), "g2": crate::io::mat_to_json(g2)}))
    }
}

/// All four axioms at one point; `triples` feed (A2), `actions` feed (A4).
pub fn double_axioms<S: Scalar>(
    ctx: &LieGroup,
    p: &DoublePoint<S>,
    triples: &[[Vec<S>; 3]],
    actions: &[(Mat<S>, Mat<S>)],
) -> Vec<CheckOutcome> {
    let a2 = triples.iter().map(|[x, y, z]| axiom_closedness(ctx, p, x, y, z)).collect();
    let a4 = actions.iter().map(|(g1, g2)| axiom_invariance(ctx, p, g1, g2)).collect();
    vec![
        axiom_moment(ctx, p),
        all_of("double.A2", a2),
        axiom_nondegeneracy(ctx, p),
        all_of("double.A4", a4),
    ]
}

#[cfg(test)]
mod tests;
