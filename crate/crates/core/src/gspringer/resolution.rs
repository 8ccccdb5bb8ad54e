//! `G̃ = G×_B B` as the quotient of `G×B ⊂ D_G` by `h·(g,b) = (gh⁻¹, hbh⁻¹)`,
//! with per-point charts and the checks that its Dirac structure
//! `L_G̃ = q_*j*L_D` is quasi-Poisson with moment map `μ`.
//!
//! Tangent coordinates on `G×B` are `(x, y)` with `x ∈ g` and `y ∈ b` in the
//! prefix coordinates of the Lie algebra basis.

use serde_json::{json, Value};

use super::double::{omega_double_matrix, phi_map, rho_double};
use crate::check::{all_of, CheckOutcome};
use crate::diffcalc::{self, Dual, Factor, PointedMap, Space};
use crate::dirac::{cartan_dirac, dot, graph_two_form, pushforward_linear, BivectorFiber, DiracFiber, TwoFormFiber};
use crate::error::{Error, Result};
use crate::io::{mat_to_json, point_from_json, point_to_json, vec_to_json};
use crate::linalg::{kernel, Mat, Subspace};
use crate::liegroup::{Covector, LieGroup, TangentVec};
use crate::scalar::Scalar;

/// A representative `(g, b)` of `[g:b] ∈ G̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct GSPoint<S> {
    pub g: Mat<S>,
    pub b: Mat<S>,
}

impl<S: Scalar> GSPoint<S> {
    pub fn new(ctx: &LieGroup, g: Mat<S>, b: Mat<S>) -> Result<Self> {
        ctx.check_element(&g)?;
        ctx.check_element(&b)?;
        if !ctx.is_in_borel(&b) {
            return Err(Error::NotInBorel);
        }
        Ok(GSPoint { g, b })
    }

    pub fn as_point(&self) -> Vec<Mat<S>> {
        vec![self.g.clone(), self.b.clone()]
    }

    pub fn to_json(&self) -> Value {
        point_to_json(&["g", "b"], &self.as_point())
    }

    pub fn from_json(ctx: &LieGroup, v: &Value) -> Result<Self> {
        let mut p = point_from_json(&["g", "b"], v)?;
        let b = p.pop().expect("two keys");
        let g = p.pop().expect("two keys");
        Self::new(ctx, g, b)
    }

    /// `(gh⁻¹, hbh⁻¹)`, another representative of the same class when `h ∈ B`.
    pub fn translate(&self, h: &Mat<S>) -> Self {
        let h_inv = h.inverse().expect("group elements are invertible");
        GSPoint { g: &self.g * &h_inv, b: &(h * &self.b) * &h_inv }
    }

    /// `[g₁:b₁] = [g₂:b₂]` iff `h = g₂⁻¹g₁ ∈ B` and `b₂ = h b₁ h⁻¹`.
    pub fn equivalent(&self, other: &Self) -> bool {
        let Some(g2_inv) = other.g.inverse() else {
            return false;
        };
        let h = &g2_inv * &self.g;
        if !h.is_upper_triangular() {
            return false;
        }
        let Some(h_inv) = h.inverse() else {
            return false;
        };
        other.b.approx_eq(&(&(&h * &self.b) * &h_inv))
    }
}

pub fn gxb_space() -> Space {
    Space::new(&[Factor::G, Factor::B])
}

/// `G×tU`, the preimage of a λ-level set.
pub fn leaf_space() -> Space {
    Space::new(&[Factor::G, Factor::U])
}

/// `T(G×B) → T(G×G)` in coordinates.
pub fn gxb_inclusion<S: Scalar>(ctx: &LieGroup) -> Mat<S> {
    let d = ctx.dim();
    let b = ctx.b_range();
    Mat::from_fn(2 * d, d + b.len(), |i, j| {
        let hit = if j < d { i == j } else { i == d + b.start + (j - d) };
        if hit { S::one() } else { S::zero() }
    })
}

/// `T(G×tU) → T(G×B)` in coordinates.
pub fn leaf_inclusion<S: Scalar>(ctx: &LieGroup) -> Mat<S> {
    let d = ctx.dim();
    let (b, u) = (ctx.b_range(), ctx.u_range());
    Mat::from_fn(d + b.len(), d + u.len(), |i, j| {
        let hit = if j < d { i == j } else { i == d + (u.start - b.start) + (j - d) };
        if hit { S::one() } else { S::zero() }
    })
}

pub fn mu<S: Scalar>(p: &GSPoint<S>) -> Mat<S> {
    let g_inv = p.g.inverse().expect("group elements are invertible");
    &(&p.g * &p.b) * &g_inv
}

pub fn lambda<S: Scalar>(p: &GSPoint<S>) -> Mat<S> {
    Mat::diag(&p.b.diagonal())
}

/// `(g, b) ↦ gbg⁻¹` on `G×B` (or on `G×tU` when `domain` says so).
pub fn mu_map<'a, S: Scalar>(domain: Space) -> PointedMap<'a, S> {
    PointedMap::new("mu", domain, Space::group(), |p| {
        let g_inv = p[0].inverse().expect("group elements are invertible");
        vec![&(&p[0] * &p[1]) * &g_inv]
    })
}

pub fn lambda_map<'a, S: Scalar>() -> PointedMap<'a, S> {
    PointedMap::new("lambda", gxb_space(), Space::new(&[Factor::T]), |p| vec![Mat::diag(&p[1].diagonal())])
}

/// `j*ω`, the double's form restricted to `T(G×B)`.
pub fn restricted_form_matrix<S: Scalar>(ctx: &LieGroup, g: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let j = gxb_inclusion::<S>(ctx);
    &(&j.transpose() * &omega_double_matrix(ctx, g, b)) * &j
}

/// `j*L_D = graph(j*ω)` at `(g, b)`.
pub fn restrict_to_gxb<S: Scalar>(ctx: &LieGroup, g: &Mat<S>, b: &Mat<S>) -> Result<DiracFiber<S>> {
    if !ctx.is_in_borel(b) {
        return Err(Error::NotInBorel);
    }
    let form = TwoFormFiber::new(vec![g.clone(), b.clone()], restricted_form_matrix(ctx, g, b))?;
    Ok(graph_two_form(&form))
}

/// `ρ_D(0, ξ) = (ξ, ξ − Ad_{b⁻¹}ξ)` for `ξ ∈ b`, in `G×B` coordinates.
pub fn vertical_field<S: Scalar>(ctx: &LieGroup, g: &Mat<S>, b: &Mat<S>, xi: &Mat<S>) -> Vec<S> {
    let d = ctx.dim();
    let full = rho_double(ctx, g, b, &Mat::zeros(ctx.n(), ctx.n()), xi);
    let mut out = full[..d].to_vec();
    out.extend(ctx.b_range().map(|k| full[d + k].clone()));
    out
}

fn vertical_span<S: Scalar>(ctx: &LieGroup, g: &Mat<S>, b: &Mat<S>, range: std::ops::Range<usize>) -> Mat<S> {
    let cols: Vec<Vec<S>> = range.map(|k| vertical_field(ctx, g, b, &ctx.basis_element(k))).collect();
    Mat::from_cols(ctx.dim() + ctx.b_range().len(), &cols)
}

/// `ρ(0⊕b) ∩ j*L` together with the expected answer `ρ(0⊕u)`.
pub fn regact_intersection<S: Scalar>(ctx: &LieGroup, p: &GSPoint<S>) -> Result<(Subspace<S>, Subspace<S>)> {
    let fiber = restrict_to_gxb(ctx, &p.g, &p.b)?;
    let vertical = Subspace::span(&vertical_span(ctx, &p.g, &p.b, ctx.b_range()));
    let inter = vertical.intersect(&fiber.kernel_part())?;
    let expected = Subspace::span(&vertical_span(ctx, &p.g, &p.b, ctx.u_range()));
    Ok((inter, expected))
}

pub fn regact_check<S: Scalar>(ctx: &LieGroup, p: &GSPoint<S>) -> CheckOutcome {
    let id = "regact.intersection";
    match regact_intersection(ctx, p) {
        Err(e) => CheckOutcome::fail(id, json!({"error": e.to_string()})),
        Ok((inter, expected)) => {
            let du = ctx.dims().unipotent;
            let w = json!({"dim": inter.dim(), "expected_dim": du});
            if inter.dim() == du && inter.equals(&expected) {
                CheckOutcome::pass(id).with_witness(w)
            } else {
                CheckOutcome::fail(id, w)
            }
        }
    }
}

/// Coordinates on `T_{[g:b]}G̃`: the vertical space `V` is completed by
/// coordinate directions `C`, and `A` (the last `dim G` rows of `[V|C]⁻¹`)
/// is the projection `q_*`. Quotient covectors in these coordinates pull back
/// to `Aᵀα`, which is exactly the annihilator of `V`.
#[derive(Clone, Debug)]
pub struct QuotientChart<S> {
    pub vertical: Mat<S>,
    pub complement: Mat<S>,
    pub complement_directions: Vec<usize>,
    pub projection: Mat<S>,
}

impl<S: Scalar> QuotientChart<S> {
    pub fn new(ctx: &LieGroup, p: &GSPoint<S>) -> Result<Self> {
        let vertical = vertical_span(ctx, &p.g, &p.b, ctx.b_range());
        let (n, db) = (vertical.rows(), vertical.cols());
        let pivots = S::independent_columns(&vertical.hstack(&Mat::identity(n)));
        if pivots.len() != n || pivots[..db] != (0..db).collect::<Vec<_>>()[..] {
            return Err(Error::IllDefinedFiber(format!(
                "vertical space has rank {} < {}",
                pivots.iter().filter(|&&k| k < db).count(),
                db
            )));
        }
        let complement_directions: Vec<usize> = pivots[db..].iter().map(|k| k - db).collect();
        let complement = Mat::<S>::identity(n).select_cols(&complement_directions);
        let inv = vertical.hstack(&complement).inverse().ok_or(Error::Singular)?;
        let projection = inv.select_rows(&(db..n).collect::<Vec<_>>());
        Ok(QuotientChart { vertical, complement, complement_directions, projection })
    }

    pub fn dim(&self) -> usize {
        self.projection.rows()
    }
}

/// Everything the theorem checks need at one point of `G̃`.
#[derive(Clone, Debug)]
pub struct Quotient<S> {
    pub point: GSPoint<S>,
    pub chart: QuotientChart<S>,
    /// `j*L_D` on `G×B`.
    pub restricted: DiracFiber<S>,
    /// `L_G̃ = q_*j*L_D` in chart coordinates.
    pub fiber: DiracFiber<S>,
    pub mu: Mat<S>,
    /// `D(g,b ↦ gbg⁻¹)` on `G×B`.
    pub d_mu_total: Mat<S>,
    /// `dμ` in chart coordinates.
    pub d_mu: Mat<S>,
    /// Columns `ρ_G̃(e_k) = q_*ρ_D(e_k, 0)`.
    pub rho: Mat<S>,
}

pub fn quotient<S: Scalar>(ctx: &LieGroup, p: &GSPoint<S>) -> Result<Quotient<S>> {
    let chart = QuotientChart::new(ctx, p)?;
    let restricted = restrict_to_gxb(ctx, &p.g, &p.b)?;
    let fiber = pushforward_linear(&restricted, &chart.projection, p.as_point())?;
    if !fiber.is_lagrangian() {
        return Err(Error::IllDefinedFiber(format!("pushforward has dimension {}", fiber.dim())));
    }
    let d_mu_total = mu_map::<S>(gxb_space()).jacobian(ctx, &p.as_point())?;
    let d_mu = &d_mu_total * &chart.complement;
    let d = ctx.dim();
    let zero = Mat::zeros(ctx.n(), ctx.n());
    let cols: Vec<Vec<S>> = (0..d)
        .map(|k| {
            let full = rho_double(ctx, &p.g, &p.b, &ctx.basis_element(k), &zero);
            let mut lifted = full[..d].to_vec();
            lifted.extend(ctx.b_range().map(|i| full[d + i].clone()));
            chart.projection.mul_vec(&lifted)
        })
        .collect();
    Ok(Quotient { mu: mu(p), point: p.clone(), chart, restricted, fiber, d_mu_total, d_mu, rho: Mat::from_cols(d, &cols) })
}

/// `(q_*` of `(x, y)`, representative change`)`: the chart map from the
/// quotient at `p` to the quotient at `(gh⁻¹, hbh⁻¹)`.
pub fn representative_change<S: Scalar>(
    ctx: &LieGroup,
    q: &Quotient<S>,
    other: &Quotient<S>,
    h: &Mat<S>,
) -> Result<Mat<S>> {
    let (hd, hd_inv) = (diffcalc::lift_mat(h), diffcalc::lift_mat(&h.inverse().ok_or(Error::Singular)?));
    let right = PointedMap::<S>::new("translate", gxb_space(), gxb_space(), move |p| {
        vec![&p[0] * &hd_inv, &(&hd * &p[1]) * &hd_inv]
    });
    let jac = right.jacobian(ctx, &q.point.as_point())?;
    Ok(&(&other.chart.projection * &jac) * &q.chart.complement)
}

/// Fibers computed from `(g,b)` and from `(gh⁻¹, hbh⁻¹)` agree under the
/// induced identification `(X, α) ↦ (MX, M⁻ᵀα)`.
pub fn representative_independence<S: Scalar>(ctx: &LieGroup, p: &GSPoint<S>, h: &Mat<S>) -> CheckOutcome {
    let id = "quotient.representative";
    let run = || -> Result<std::result::Result<(), Value>> {
        let q = quotient(ctx, p)?;
        let other_point = p.translate(h);
        let other = quotient(ctx, &other_point)?;
        let m = representative_change(ctx, &q, &other, h)?;
        let m_inv_t = m.inverse().ok_or(Error::Singular)?.transpose();
        let moved = DiracFiber::from_parts(
            other_point.as_point(),
            &(&m * &q.fiber.tangent_part()),
            &(&m_inv_t * &q.fiber.covector_part()),
        );
        if !moved.equals(&other.fiber) {
            return Ok(Err(json!({"h": mat_to_json(h), "reason": "fibers differ"})));
        }
        if q.mu != other.mu && !q.mu.approx_eq(&other.mu) {
            return Ok(Err(json!({"h": mat_to_json(h), "reason": "mu differs"})));
        }
        if !lambda(p).approx_eq(&lambda(&other_point)) {
            return Ok(Err(json!({"h": mat_to_json(h), "reason": "lambda differs"})));
        }
        Ok(Ok(()))
    };
    match run() {
        Ok(r) => CheckOutcome::from_result(id, r),
        Err(e) => CheckOutcome::fail(id, json!({"error": e.to_string()})),
    }
}

fn cartan_dirac_product<S: Scalar>(ctx: &LieGroup, g1: &Mat<S>, g2: &Mat<S>) -> DiracFiber<S> {
    let (l1, l2) = (cartan_dirac(ctx, g1), cartan_dirac(ctx, g2));
    let tangent = Mat::block_diag(&l1.tangent_part(), &l2.tangent_part());
    let covector = Mat::block_diag(&l1.covector_part(), &l2.covector_part());
    DiracFiber::from_parts(vec![g1.clone(), g2.clone()], &tangent, &covector)
}

fn sigma_dual<S: Scalar>(ctx: &LieGroup, g: &Mat<S>, k: usize) -> Vec<S> {
    ctx.sigma(g, &ctx.basis_element(k)).dual_coords(ctx)
}

/// The four statements of the main theorem at one point, plus the
/// Lagrangian property of the fiber.
pub fn theorem1_check<S: Scalar>(ctx: &LieGroup, q: &Quotient<S>) -> Vec<CheckOutcome> {
    let d = ctx.dim();
    let mut out = Vec::new();

    let lag = match q.fiber.lagrangian_defect() {
        None if q.fiber.dim() == d => Ok(()),
        None => Err(json!({"dim": q.fiber.dim(), "expected": d})),
        Some(defect) => Err(defect.to_json()),
    };
    out.push(CheckOutcome::from_result("gs-theorem1.lagrangian", lag));

    let forward = match pushforward_linear(&q.fiber, &q.d_mu, vec![q.mu.clone()]) {
        Ok(pushed) if pushed.equals(&cartan_dirac(ctx, &q.mu)) => Ok(()),
        Ok(pushed) => Err(json!({"pushforward": pushed.to_json(), "mu": mat_to_json(&q.mu)})),
        Err(e) => Err(json!({"error": e.to_string()})),
    };
    out.push(CheckOutcome::from_result("gs-theorem1.forward", forward));

    let nondeg = match q.fiber.kernel_part().intersect(&kernel(&q.d_mu)) {
        Ok(s) if s.dim() == 0 => Ok(()),
        Ok(s) => Err(json!({"intersection_dim": s.dim(), "basis": mat_to_json(s.basis())})),
        Err(e) => Err(json!({"error": e.to_string()})),
    };
    out.push(CheckOutcome::from_result("gs-theorem1.nondegenerate", nondeg));

    let action = (0..d)
        .find_map(|k| {
            let x = q.rho.col(k);
            let alpha = q.d_mu.transpose().mul_vec(&sigma_dual(ctx, &q.mu, k));
            (!q.fiber.contains(&x, &alpha))
                .then(|| json!({"basis_index": k, "field": vec_to_json(&x), "covector": vec_to_json(&alpha)}))
        })
        .map_or(Ok(()), Err);
    out.push(CheckOutcome::from_result("gs-theorem1.action", action));

    out.push(commutation_check(ctx, q));
    out
}

/// `μ_*q_*j*L_D = p_*Φ_*j*L_D` and `Φ_*L_D = L_G × L_G` at `j(p)`.
fn commutation_check<S: Scalar>(ctx: &LieGroup, q: &Quotient<S>) -> CheckOutcome {
    let id = "gs-theorem1.commutation";
    let d = ctx.dim();
    let run = || -> Result<std::result::Result<(), Value>> {
        let point = q.point.as_point();
        let d_phi = phi_map::<S>().jacobian(ctx, &point)?;
        let first = d_phi.select_rows(&(0..d).collect::<Vec<_>>());
        let via_double = pushforward_linear(&q.restricted, &(&first * &gxb_inclusion(ctx)), vec![q.mu.clone()])?;
        let via_quotient = pushforward_linear(&q.fiber, &q.d_mu, vec![q.mu.clone()])?;
        if !via_double.equals(&via_quotient) {
            return Ok(Err(json!({"reason": "p_*Φ_* and μ_*q_* differ"})));
        }
        let direct = pushforward_linear(&q.restricted, &q.d_mu_total, vec![q.mu.clone()])?;
        if !direct.equals(&via_quotient) {
            return Ok(Err(json!({"reason": "D(μ) and dμ∘q_* differ"})));
        }
        let omega = TwoFormFiber::new(point.clone(), omega_double_matrix(ctx, &q.point.g, &q.point.b))?;
        let (m1, m2) = super::double::phi(&q.point.g, &q.point.b);
        let pushed = pushforward_linear(&graph_two_form(&omega), &d_phi, vec![m1.clone(), m2.clone()])?;
        if !pushed.equals(&cartan_dirac_product(ctx, &m1, &m2)) {
            return Ok(Err(json!({"reason": "Φ_*L_D differs from L_G×L_G"})));
        }
        Ok(Ok(()))
    };
    match run() {
        Ok(r) => CheckOutcome::from_result(id, r),
        Err(e) => CheckOutcome::fail(id, json!({"error": e.to_string()})),
    }
}

/// `q_*T(G×tU)` at `[g:tu]`.
pub fn leaf_tangent<S: Scalar>(ctx: &LieGroup, q: &Quotient<S>) -> Subspace<S> {
    Subspace::span(&(&q.chart.projection * &leaf_inclusion(ctx)))
}

/// `dλ` in chart coordinates.
pub fn d_lambda<S: Scalar>(ctx: &LieGroup, q: &Quotient<S>) -> Result<Mat<S>> {
    Ok(&lambda_map::<S>().jacobian(ctx, &q.point.as_point())? * &q.chart.complement)
}

pub fn theorem2_check<S: Scalar>(ctx: &LieGroup, q: &Quotient<S>) -> Vec<CheckOutcome> {
    let dims = ctx.dims();
    let expected = dims.group - dims.rank;
    let projection = q.fiber.tangent_projection();
    let leaf = leaf_tangent(ctx, q);
    let w = json!({"projection_dim": projection.dim(), "leaf_dim": leaf.dim(), "expected_dim": expected});
    let leaf_check = if projection.dim() == expected && projection.equals(&leaf) {
        CheckOutcome::pass("gs-theorem2.leaf").with_witness(w)
    } else {
        CheckOutcome::fail("gs-theorem2.leaf", w)
    };
    let lambda_check = match d_lambda(ctx, q) {
        Ok(dl) if (&dl * projection.basis()).is_zero() && kernel(&dl).equals(&projection) => {
            CheckOutcome::pass("gs-theorem2.lambda")
        }
        Ok(dl) => CheckOutcome::fail("gs-theorem2.lambda", json!({"d_lambda_on_leaf": mat_to_json(&(&dl * projection.basis()))})),
        Err(e) => CheckOutcome::fail("gs-theorem2.lambda", json!({"error": e.to_string()})),
    };
    vec![leaf_check, lambda_check]
}

/// The presymplectic form on the leaf through `[g:b]`, on the basis `basis`
/// (chart coordinates) of the leaf's tangent space: `matrix[i][j] = α_i(s_j)`
/// where `(s_i, α_i) ∈ L_G̃`.
#[derive(Clone, Debug)]
pub struct LeafForm<S> {
    pub basis: Mat<S>,
    pub matrix: Mat<S>,
}

impl<S: Scalar> LeafForm<S> {
    pub fn to_fiber(&self, base: Vec<Mat<S>>) -> Result<TwoFormFiber<S>> {
        TwoFormFiber::new(base, self.matrix.clone())
    }

    /// `ω_S(x, y)` for chart vectors `x, y` tangent to the leaf.
    pub fn eval(&self, x: &[S], y: &[S]) -> Result<S> {
        let cx = self.basis.solve(x).ok_or_else(|| Error::NotInTangentSpace("vector is not tangent to the leaf".into()))?;
        let cy = self.basis.solve(y).ok_or_else(|| Error::NotInTangentSpace("vector is not tangent to the leaf".into()))?;
        Ok(dot(&cx, &self.matrix.mul_vec(&cy)))
    }
}

pub fn leaf_two_form<S: Scalar>(q: &Quotient<S>) -> Result<LeafForm<S>> {
    let basis = q.fiber.tangent_projection().basis().clone();
    let (tangent, covector) = (q.fiber.tangent_part(), q.fiber.covector_part());
    let alphas: Vec<Vec<S>> = (0..basis.cols())
        .map(|j| {
            let c = tangent
                .solve(&basis.col(j))
                .ok_or_else(|| Error::IllDefinedFiber("fiber is not graphical over the leaf".into()))?;
            Ok(covector.mul_vec(&c))
        })
        .collect::<Result<_>>()?;
    let m = basis.cols();
    let matrix = Mat::from_fn(m, m, |i, j| dot(&alphas[i], &basis.col(j)));
    Ok(LeafForm { basis, matrix })
}

/// `j*ω` restricted to `G×tU`, as a family on the leaf space.
pub fn leaf_form_family<S: Scalar>(
    ctx: &LieGroup,
) -> impl Fn(&[Mat<Dual<S>>], &[Dual<S>], &[Dual<S>]) -> Dual<S> + Send + Sync + '_ {
    let incl = &gxb_inclusion::<Dual<S>>(ctx) * &leaf_inclusion::<Dual<S>>(ctx);
    move |p, u, v| {
        let omega = omega_double_matrix(ctx, &p[0], &p[1]);
        dot(&incl.mul_vec(u), &omega.mul_vec(&incl.mul_vec(v)))
    }
}

/// `d(ω|_{G×tU})(x,y,z)` and `−(μ∘q)*H(x,y,z)`. Since `q: G×tU → G×_B tU` is
/// a submersion pulling `ω_S` back to `ω|_{G×tU}`, equality here is
/// `dω_S = −μ*H` on the leaf.
pub fn leaf_closedness_sides<S: Scalar>(ctx: &LieGroup, p: &GSPoint<S>, x: &[S], y: &[S], z: &[S]) -> Result<(S, S)> {
    let point = p.as_point();
    let dw = diffcalc::d_two_form(ctx, &leaf_space(), &leaf_form_family::<S>(ctx), &point, x, y, z);
    let jac = mu_map::<S>(leaf_space()).jacobian(ctx, &point)?;
    let h = ctx.cartan_three_form(
        &ctx.from_coords(&jac.mul_vec(x)),
        &ctx.from_coords(&jac.mul_vec(y)),
        &ctx.from_coords(&jac.mul_vec(z)),
    );
    Ok((dw, -h))
}

/// Skewness, the restricted moment identity, the pullback identity
/// `q*ω_S = ω|_{G×tU}` and `dω_S = −μ*H` on the given `G×tU` triples.
pub fn leaf_form_check<S: Scalar>(ctx: &LieGroup, q: &Quotient<S>, triples: &[[Vec<S>; 3]]) -> Vec<CheckOutcome> {
    let form = match leaf_two_form(q) {
        Ok(f) => f,
        Err(e) => return vec![CheckOutcome::fail("leaf-form.graphical", json!({"error": e.to_string()}))],
    };
    let mut out = Vec::new();
    let skew = &form.matrix + &form.matrix.transpose();
    out.push(if skew.is_zero() {
        CheckOutcome::pass("leaf-form.skew")
    } else {
        CheckOutcome::fail("leaf-form.skew", json!({"matrix": mat_to_json(&form.matrix)}))
    });

    let d = ctx.dim();
    let moment = (0..d).find_map(|k| {
        let Some(c) = form.basis.solve(&q.rho.col(k)) else {
            return Some(json!({"basis_index": k, "reason": "action field not tangent to the leaf"}));
        };
        let lhs = form.matrix.transpose().mul_vec(&c);
        let sig = sigma_dual(ctx, &q.mu, k);
        let rhs = (&q.d_mu * &form.basis).transpose().mul_vec(&sig);
        (!vectors_agree(&lhs, &rhs))
            .then(|| json!({"basis_index": k, "omega_flat": vec_to_json(&lhs), "mu_sigma": vec_to_json(&rhs)}))
    });
    out.push(CheckOutcome::from_result("leaf-form.moment", moment.map_or(Ok(()), Err)));

    let incl = leaf_inclusion::<S>(ctx);
    let pulled = &(&incl.transpose() * &restricted_form_matrix(ctx, &q.point.g, &q.point.b)) * &incl;
    let images = &q.chart.projection * &incl;
    let pullback = form.basis.solve_columns(&images).map(|c| &(&c.transpose() * &form.matrix) * &c);
    out.push(match pullback {
        Some(m) if m.approx_eq(&pulled) => CheckOutcome::pass("leaf-form.pullback"),
        Some(m) => CheckOutcome::fail("leaf-form.pullback", json!({"q_pullback": mat_to_json(&m), "restriction": mat_to_json(&pulled)})),
        None => CheckOutcome::fail("leaf-form.pullback", json!({"reason": "q_*T(G×tU) leaves the leaf"})),
    });

    let closed: Vec<CheckOutcome> = triples
        .iter()
        .map(|[x, y, z]| match leaf_closedness_sides(ctx, &q.point, x, y, z) {
            Ok((dw, target)) if (dw.clone() - target.clone()).is_negligible(dw.modulus().max(target.modulus())) => {
                CheckOutcome::pass("leaf-form.closed")
            }
            Ok((dw, target)) => CheckOutcome::fail("leaf-form.closed", json!({"d_omega": dw.to_json(), "minus_mu_h": target.to_json()})),
            Err(e) => CheckOutcome::fail("leaf-form.closed", json!({"error": e.to_string()})),
        })
        .collect();
    out.push(all_of("leaf-form.closed", closed));
    out
}

fn vectors_agree<S: Scalar>(a: &[S], b: &[S]) -> bool {
    let scale = a.iter().chain(b).map(Scalar::modulus).fold(0.0, f64::max);
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_negligible(scale))
}

/// `π^#` recovered from `L_G̃`, with the operators used to recover it.
#[derive(Clone, Debug)]
pub struct Reconstruction<S> {
    /// `π^#` in chart coordinates: `π^#(α) = sharp·α`.
    pub sharp: Mat<S>,
    /// `C = 1 − ¼ρ∘ρ^∨∘dμ`.
    pub c_op: Mat<S>,
    /// `σ^∨` at `μ(p)`, from dual coordinates to `g` coordinates.
    pub sigma_vee: Mat<S>,
}

impl<S: Scalar> Reconstruction<S> {
    pub fn bivector(&self, base: Vec<Mat<S>>) -> Result<BivectorFiber<S>> {
        BivectorFiber::new(base, self.sharp.transpose())
    }
}

/// Matrix of `σ^∨` at `g` from dual coordinates of `T*_gG` to `g`.
pub fn sigma_vee_matrix<S: Scalar>(ctx: &LieGroup, g: &Mat<S>) -> Mat<S> {
    let d = ctx.dim();
    let cols: Vec<Vec<S>> = (0..d)
        .map(|k| {
            let alpha = Covector { coord: ctx.from_dual_coords(&diffcalc::unit::<S>(d, k)) };
            ctx.coords(&ctx.sigma_adjoint(g, &alpha)).expect("σ^∨ takes values in g")
        })
        .collect();
    Mat::from_cols(d, &cols)
}

/// Matrix of `ρ^∨` at `g` on `T_gG`.
pub fn rho_vee_matrix<S: Scalar>(ctx: &LieGroup, g: &Mat<S>) -> Mat<S> {
    let d = ctx.dim();
    let cols: Vec<Vec<S>> = (0..d)
        .map(|k| {
            let v = TangentVec { coord: ctx.basis_element(k) };
            ctx.coords(&ctx.rho_adjoint(&v, g)).expect("ρ^∨ takes values in g")
        })
        .collect();
    Mat::from_cols(d, &cols)
}

/// For each covector `α`, the unique `X_α` with `(X_α, C*α) ∈ L_G̃` and
/// `dμ(X_α) = −(σ^∨)*ρ*α`.
pub fn reconstruct_bivector<S: Scalar>(ctx: &LieGroup, q: &Quotient<S>) -> std::result::Result<Reconstruction<S>, Value> {
    let d = ctx.dim();
    let sigma_vee = sigma_vee_matrix(ctx, &q.mu);
    let rho_vee = rho_vee_matrix(ctx, &q.mu);
    let quarter = S::from_ratio(1, 4);
    let c_op = &Mat::identity(d) - &(&(&q.rho * &rho_vee) * &q.d_mu).scale(&quarter);
    let (tangent, covector) = (q.fiber.tangent_part(), q.fiber.covector_part());
    let system = covector.vstack(&(&q.d_mu * &tangent));
    let ambiguity = &tangent * &kernel(&system).basis().clone();
    if !ambiguity.is_zero() {
        return Err(json!({"reason": "X_α is not unique", "ambiguity": mat_to_json(&ambiguity)}));
    }
    let target = -(&sigma_vee.transpose() * &q.rho.transpose());
    let cols: Vec<Vec<S>> = (0..d)
        .map(|k| {
            let mut rhs = c_op.transpose().col(k);
            rhs.extend(target.col(k));
            system
                .solve(&rhs)
                .map(|c| tangent.mul_vec(&c))
                .ok_or_else(|| json!({"reason": "no X_α", "covector_index": k}))
        })
        .collect::<std::result::Result<_, _>>()?;
    Ok(Reconstruction { sharp: Mat::from_cols(d, &cols), c_op, sigma_vee })
}

/// Skewness, `π^#∘Φ^* = ρ∘σ^∨`, and `{(π^#α + ρξ, C*α + μ*σξ)} = L_G̃`.
pub fn bivector_check<S: Scalar>(ctx: &LieGroup, q: &Quotient<S>) -> Vec<CheckOutcome> {
    let rec = match reconstruct_bivector(ctx, q) {
        Ok(r) => r,
        Err(w) => return vec![CheckOutcome::fail("bivector.solve", w)],
    };
    let mut out = vec![CheckOutcome::pass("bivector.solve")];
    out.push(if (&rec.sharp + &rec.sharp.transpose()).is_zero() {
        CheckOutcome::pass("bivector.skew")
    } else {
        CheckOutcome::fail("bivector.skew", json!({"sharp": mat_to_json(&rec.sharp)}))
    });
    let lhs = &rec.sharp * &q.d_mu.transpose();
    let rhs = &q.rho * &rec.sigma_vee;
    out.push(if lhs.approx_eq(&rhs) {
        CheckOutcome::pass("bivector.moment")
    } else {
        CheckOutcome::fail("bivector.moment", json!({"pi_phi": mat_to_json(&lhs), "rho_sigma_vee": mat_to_json(&rhs)}))
    });
    let d = ctx.dim();
    let sigmas: Vec<Vec<S>> = (0..d).map(|k| q.d_mu.transpose().mul_vec(&sigma_dual(ctx, &q.mu, k))).collect();
    let tangent = rec.sharp.hstack(&q.rho);
    let covector = rec.c_op.transpose().hstack(&Mat::from_cols(d, &sigmas));
    let generated = DiracFiber::from_parts(q.point.as_point(), &tangent, &covector);
    out.push(if generated.equals(&q.fiber) {
        CheckOutcome::pass("bivector.graph")
    } else {
        CheckOutcome::fail("bivector.graph", json!({"generated_dim": generated.dim(), "fiber_dim": q.fiber.dim()}))
    });
    out
}

/// For `b ∈ B` and `ξ = s + n ∈ t ⊕ u`: `(σ_b(ξ), x) = 0` for all `x ∈ b`
/// iff `s = 0`. Checked on the whole kernel and on each sample.
pub fn lemma_kernel_check<S: Scalar>(ctx: &LieGroup, b: &Mat<S>, samples: &[Vec<S>]) -> CheckOutcome {
    let id = "lemma-kernel";
    let (br, tr, ur) = (ctx.b_range(), ctx.t_range(), ctx.u_range());
    let db = br.len();
    let cols: Vec<Vec<S>> = br
        .clone()
        .map(|k| {
            let sigma = ctx.sigma(b, &ctx.basis_element(k)).dual_coords(ctx);
            br.clone().map(|i| sigma[i].clone()).collect()
        })
        .collect();
    let pairing = Mat::from_cols(db, &cols);
    let expected = Subspace::span_vectors(db, &ur.clone().map(|k| diffcalc::unit(db, k - br.start)).collect::<Vec<_>>());
    let ker = kernel(&pairing);
    if !ker.equals(&expected) {
        return CheckOutcome::fail(id, json!({"kernel_dim": ker.dim(), "expected_dim": ur.len(), "kernel": mat_to_json(ker.basis())}));
    }
    let basis: Vec<Vec<S>> = (0..db).map(|k| diffcalc::unit(db, k)).collect();
    for xi in basis.iter().chain(samples) {
        let condition = pairing.mul_vec(xi).iter().all(|v| v.is_zero());
        let toral_zero = tr.clone().all(|k| xi[k - br.start].is_zero());
        if condition != toral_zero {
            return CheckOutcome::fail(id, json!({"xi": vec_to_json(xi), "condition": condition, "toral_part_zero": toral_zero}));
        }
    }
    CheckOutcome::pass(id)
}
