//! Steinberg fibers `F_t = κ⁻¹(κ(t))`, the diagram `κ∘μ = κ_T∘λ`, and the
//! `|W|` points of `μ⁻¹(g)` over a regular semisimple `g`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde_json::json;

use super::resolution::{lambda, mu, GSPoint};
use crate::check::CheckOutcome;
use crate::error::{Error, Result};
use crate::io::vec_to_json;
use crate::linalg::Mat;
use crate::liegroup::{char_poly_elementary, LieGroup};
use crate::scalar::Scalar;

/// Relative eigenvalue separation below which an element counts as
/// non-regular.
pub const EIGEN_SEPARATION: f64 = 1e-6;

/// `κ(g)`: the Chevalley invariants of `g`.
pub fn kappa<S: Scalar>(ctx: &LieGroup, g: &Mat<S>) -> Vec<S> {
    ctx.chevalley(g)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SteinbergFiber<S> {
    pub t: Mat<S>,
    pub value: Vec<S>,
}

impl<S: Scalar> SteinbergFiber<S> {
    pub fn new(ctx: &LieGroup, t: Mat<S>) -> Result<Self> {
        ctx.check_element(&t)?;
        if !t.is_diagonal() {
            return Err(Error::NotInGroup("torus elements are diagonal".into()));
        }
        let value = kappa(ctx, &t);
        Ok(SteinbergFiber { t, value })
    }

    pub fn contains(&self, ctx: &LieGroup, g: &Mat<S>) -> bool {
        let k = kappa(ctx, g);
        let scale = k.iter().chain(&self.value).map(Scalar::modulus).fold(0.0, f64::max);
        k.iter().zip(&self.value).all(|(a, b)| (a.clone() - b.clone()).is_negligible(scale))
    }
}

pub fn steinberg_membership<S: Scalar>(ctx: &LieGroup, g: &Mat<S>, t: &Mat<S>) -> Result<bool> {
    ctx.check_element(g)?;
    Ok(SteinbergFiber::new(ctx, t.clone())?.contains(ctx, g))
}

/// `κ(μ(p)) = κ(λ(p))`, i.e. `μ(p) ∈ F_{λ(p)}`.
pub fn diagram_check<S: Scalar>(ctx: &LieGroup, p: &GSPoint<S>) -> CheckOutcome {
    let (m, l) = (mu(p), lambda(p));
    let (km, kl) = (kappa(ctx, &m), kappa(ctx, &l));
    if km == kl || (SteinbergFiber { t: l, value: kl.clone() }).contains(ctx, &m) {
        CheckOutcome::pass("diagram-gs.commutes")
    } else {
        CheckOutcome::fail("diagram-gs.commutes", json!({"kappa_mu": vec_to_json(&km), "kappa_lambda": vec_to_json(&kl)}))
    }
}

/// Unipotent elements lie in `F_e`.
pub fn unipotent_check<S: Scalar>(ctx: &LieGroup, u: &Mat<S>) -> CheckOutcome {
    match steinberg_membership(ctx, u, &Mat::identity(ctx.n())) {
        Ok(true) => CheckOutcome::pass("diagram-gs.unipotent"),
        Ok(false) => CheckOutcome::fail("diagram-gs.unipotent", json!({"kappa": vec_to_json(&kappa(ctx, u))})),
        Err(e) => CheckOutcome::fail("diagram-gs.unipotent", json!({"error": e.to_string()})),
    }
}

/// The conjugacy class through a regular semisimple `t` has codimension
/// equal to the rank.
pub fn codimension_check<S: Scalar>(ctx: &LieGroup, t: &Mat<S>) -> CheckOutcome {
    let dims = ctx.dims();
    let tangent = ctx.conj_field_matrix(t).rank();
    if tangent == dims.group - dims.rank {
        CheckOutcome::pass("diagram-gs.codimension")
    } else {
        CheckOutcome::fail("diagram-gs.codimension", json!({"class_dim": tangent, "expected": dims.group - dims.rank}))
    }
}

fn eval_poly(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    // coeffs[k] multiplies z^k
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (p, dp) = eval_poly(coeffs, z);
        if dp.norm() < 1e-300 || p.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

fn cubic_roots(a: Complex64, b: Complex64, c: Complex64) -> Vec<Complex64> {
    // λ³ + aλ² + bλ + c with λ = y − a/3
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut big = (-q / 2.0 + disc).cbrt();
    if big.norm() < 1e-14 {
        big = (-q / 2.0 - disc).cbrt();
    }
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    (0..3)
        .map(|k| {
            let ck = big * omega.powu(k);
            let y = if ck.norm() < 1e-14 { Complex64::zero() } else { ck - p / (3.0 * ck) };
            y - shift
        })
        .collect()
}

fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        let mut delta = 0.0_f64;
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval_poly(coeffs, z[i]).0 / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Eigenvalues of `g` from its characteristic polynomial: closed forms up to
/// degree three, Durand–Kerner beyond, each polished by Newton steps.
pub fn eigenvalues(g: &Mat<Complex64>) -> Vec<Complex64> {
    let n = g.rows();
    let e = char_poly_elementary(g);
    // det(λ − g) = Σ_k (−1)^k e_k λ^{n−k}
    let mut coeffs = vec![Complex64::zero(); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    for (k, ek) in e.iter().enumerate() {
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[n - k - 1] = ek * sign;
    }
    let raw = match n {
        1 => vec![-coeffs[0]],
        2 => {
            let (b, c) = (coeffs[1], coeffs[0]);
            let disc = (b * b - 4.0 * c).sqrt();
            vec![(-b + disc) / 2.0, (-b - disc) / 2.0]
        }
        3 => cubic_roots(coeffs[2], coeffs[1], coeffs[0]),
        _ => durand_kerner(&coeffs),
    };
    raw.into_iter().map(|z| polish(&coeffs, z)).collect()
}

/// Unit vector spanning `ker(g − λ)` for a simple eigenvalue `λ`.
fn eigenvector(g: &Mat<Complex64>, lambda: Complex64) -> Vec<Complex64> {
    let n = g.rows();
    let m = DMatrix::from_fn(n, n, |i, j| g[(i, j)] - if i == j { lambda } else { Complex64::zero() });
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let k = (0..n)
        .min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]))
        .expect("nonempty matrix");
    (0..n).map(|i| v_t[(k, i)].conj()).collect()
}

/// The `|W|` points `[P ẇ : ẇ⁻¹ t ẇ]` over a regular semisimple `g = P t P⁻¹`.
#[derive(Clone, Debug)]
pub struct WeylFiber {
    pub eigenvalues: Vec<Complex64>,
    pub points: Vec<GSPoint<Complex64>>,
    /// Largest relative entry of `μ(p) − g` over the points.
    pub residual: f64,
}

pub fn weyl_fiber_enum(ctx: &LieGroup, g: &Mat<Complex64>) -> Result<WeylFiber> {
    ctx.check_element(g)?;
    let n = ctx.n();
    let eigs = eigenvalues(g);
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() <= EIGEN_SEPARATION * scale {
                return Err(Error::NotRegularSemisimple(format!(
                    "eigenvalues {} and {} coincide to {:.1e}",
                    eigs[i],
                    eigs[j],
                    (eigs[i] - eigs[j]).norm()
                )));
            }
        }
    }
    let cols: Vec<Vec<Complex64>> = eigs.iter().map(|&l| eigenvector(g, l)).collect();
    let mut p0 = Mat::from_cols(n, &cols);
    let det = p0.det();
    if det.norm() < 1e-12 {
        return Err(Error::NotRegularSemisimple("eigenvectors are dependent".into()));
    }
    // normalize to det 1 so that P lies in SL as well
    for i in 0..n {
        p0[(i, 0)] /= det;
    }
    let t = Mat::diag(&eigs);
    let weyl = ctx.weyl_group();
    let gscale = g.max_modulus().max(1.0);
    let mut residual = 0.0_f64;
    let mut points = Vec::with_capacity(weyl.order());
    for k in 0..weyl.order() {
        let w: Mat<Complex64> = weyl.representative(k);
        let w_inv = w.inverse().ok_or(Error::Singular)?;
        let point = GSPoint { g: &p0 * &w, b: &(&w_inv * &t) * &w };
        residual = residual.max((&mu(&point) - g).max_modulus() / gscale);
        points.push(point);
    }
    Ok(WeylFiber { eigenvalues: eigs, points, residual })
}

/// `|W|` points, pairwise inequivalent, each in `B` and over `g`.
pub fn weyl_fiber_check(ctx: &LieGroup, g: &Mat<Complex64>, max_residual: f64) -> CheckOutcome {
    let id = "weyl-fiber";
    let fiber = match weyl_fiber_enum(ctx, g) {
        Ok(f) => f,
        Err(e) => return CheckOutcome::fail(id, json!({"error": e.to_string()})),
    };
    let order = ctx.weyl_group().order();
    let w = json!({"points": fiber.points.len(), "expected": order, "residual": fiber.residual});
    if fiber.points.len() != order || fiber.residual >= max_residual {
        return CheckOutcome::fail(id, w);
    }
    if let Some(bad) = fiber.points.iter().position(|p| !p.b.is_upper_triangular()) {
        return CheckOutcome::fail(id, json!({"not_in_borel": bad}));
    }
    for i in 0..order {
        for j in i + 1..order {
            if fiber.points[i].equivalent(&fiber.points[j]) {
                return CheckOutcome::fail(id, json!({"equivalent_pair": [i, j]}));
            }
        }
    }
    CheckOutcome::pass(id).with_witness(w)
}

#[cfg(test)]
mod tests;
