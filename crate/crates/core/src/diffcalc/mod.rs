//! Exact forward-mode differentiation of rational matrix maps.
//!
//! Points of a product space are lists of matrices, one per [`Factor`].
//! Tangent vectors are left-trivialized per factor and differentiated along the
//! first-order curve `p·(I + t·x)`; since every map here is rational in the
//! matrix entries, evaluating it on dual numbers gives exact first
//! derivatives. Vector fields and covector fields are coordinate maps on such
//! points; brackets and exterior derivatives use constant-coordinate
//! (left-invariant) extensions, with the structure-constant corrections that
//! this induces.

mod dual;

use std::sync::Arc;

pub use dual::{derivs, lift_mat, lift_vec, perturbed, values, Dual};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::liegroup::LieGroup;
use crate::scalar::Scalar;

/// Manifold factors. `U` stands for a coset `tU`, whose tangent directions are
/// `u` in left trivialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    G,
    B,
    T,
    U,
}

impl Factor {
    fn range(self, ctx: &LieGroup) -> std::ops::Range<usize> {
        match self {
            Factor::G => 0..ctx.dim(),
            Factor::B => ctx.b_range(),
            Factor::T => ctx.t_range(),
            Factor::U => ctx.u_range(),
        }
    }

    pub fn dim(self, ctx: &LieGroup) -> usize {
        self.range(ctx).len()
    }
}

/// A product of factors, e.g. `G×B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    factors: Vec<Factor>,
}

impl Space {
    pub fn new(factors: &[Factor]) -> Self {
        Space { factors: factors.to_vec() }
    }

    pub fn group() -> Self {
        Self::new(&[Factor::G])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self, ctx: &LieGroup) -> usize {
        self.factors.iter().map(|f| f.dim(ctx)).sum()
    }

    fn offsets(&self, ctx: &LieGroup) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.factors.len() + 1);
        off.push(0);
        for f in &self.factors {
            off.push(off.last().unwrap() + f.dim(ctx));
        }
        off
    }

    /// Algebra elements, one per factor, from stacked coordinates.
    pub fn embed<S: Scalar>(&self, ctx: &LieGroup, x: &[S]) -> Vec<Mat<S>> {
        assert_eq!(x.len(), self.dim(ctx), "tangent coordinate length mismatch");
        let off = self.offsets(ctx);
        self.factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut full = vec![S::zero(); ctx.dim()];
                for (k, idx) in f.range(ctx).enumerate() {
                    full[idx] = x[off[i] + k].clone();
                }
                ctx.from_coords(&full)
            })
            .collect()
    }

    /// Stacked coordinates of per-factor algebra elements; errors when an
    /// element is not tangent to its factor.
    pub fn coords<S: Scalar>(&self, ctx: &LieGroup, xs: &[Mat<S>]) -> Result<Vec<S>> {
        if xs.len() != self.factors.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} factors, {} tangent components",
                self.factors.len(),
                xs.len()
            )));
        }
        let mut out = Vec::with_capacity(self.dim(ctx));
        for (f, x) in self.factors.iter().zip(xs) {
            let full = ctx.coords(x).map_err(|e| Error::NotInTangentSpace(e.to_string()))?;
            let range = f.range(ctx);
            let scale = x.max_modulus();
            if let Some(bad) = full.iter().enumerate().find(|(k, c)| !range.contains(k) && !c.is_negligible(scale)) {
                return Err(Error::NotInTangentSpace(format!(
                    "component {} is nonzero outside the {:?} directions",
                    bad.0, f
                )));
            }
            out.extend(full[range].iter().cloned());
        }
        Ok(out)
    }

    /// Factorwise bracket of two coordinate vectors.
    pub fn bracket<S: Scalar>(&self, ctx: &LieGroup, x: &[S], y: &[S]) -> Vec<S> {
        let xs = self.embed(ctx, x);
        let ys = self.embed(ctx, y);
        let br: Vec<Mat<S>> = xs.iter().zip(&ys).map(|(a, b)| ctx.bracket(a, b)).collect();
        self.coords(ctx, &br).expect("factor algebras are closed under brackets")
    }

    /// Matrix of `y ↦ [x, y]` in stacked coordinates.
    pub fn ad_matrix<S: Scalar>(&self, ctx: &LieGroup, x: &[S]) -> Mat<S> {
        let d = self.dim(ctx);
        let cols: Vec<Vec<S>> = (0..d).map(|k| self.bracket(ctx, x, &unit(d, k))).collect();
        Mat::from_cols(d, &cols)
    }

    /// `p_i + ε·p_i·x_i` for each factor.
    pub fn curve<S: Scalar>(&self, ctx: &LieGroup, p: &[Mat<S>], x: &[S]) -> Vec<Mat<Dual<S>>> {
        let xs = self.embed(ctx, x);
        p.iter().zip(&xs).map(|(pi, xi)| perturbed(pi, &(pi * xi))).collect()
    }
}

pub fn unit<S: Scalar>(d: usize, k: usize) -> Vec<S> {
    (0..d).map(|i| if i == k { S::one() } else { S::zero() }).collect()
}

pub fn lift_point<S: Scalar>(p: &[Mat<S>]) -> Vec<Mat<Dual<S>>> {
    p.iter().map(lift_mat).collect()
}

/// Matrix-valued map evaluated on dual points.
pub type MatrixMap<'a, S> = dyn Fn(&[Mat<Dual<S>>]) -> Vec<Mat<Dual<S>>> + Send + Sync + 'a;

/// Coordinate-valued map (a vector field, a covector field, or a function).
pub type CoordMap<'a, S> = dyn Fn(&[Mat<Dual<S>>]) -> Vec<Dual<S>> + Send + Sync + 'a;

/// Point-dependent bilinear form evaluated on coordinates.
pub type TwoFormFamily<'a, S> =
    dyn Fn(&[Mat<Dual<S>>], &[Dual<S>], &[Dual<S>]) -> Dual<S> + Send + Sync + 'a;

/// A map between product spaces with its exact differential.
#[derive(Clone)]
pub struct PointedMap<'a, S: Scalar> {
    pub name: String,
    pub domain: Space,
    pub codomain: Space,
    map: Arc<MatrixMap<'a, S>>,
}

impl<'a, S: Scalar> PointedMap<'a, S> {
    pub fn new(
        name: impl Into<String>,
        domain: Space,
        codomain: Space,
        map: impl Fn(&[Mat<Dual<S>>]) -> Vec<Mat<Dual<S>>> + Send + Sync + 'a,
    ) -> Self {
        PointedMap { name: name.into(), domain, codomain, map: Arc::new(map) }
    }

    pub fn identity(domain: Space) -> Self {
        let codomain = domain.clone();
        Self::new("id", domain, codomain, |p| p.to_vec())
    }

    pub fn eval_dual(&self, p: &[Mat<Dual<S>>]) -> Vec<Mat<Dual<S>>> {
        (self.map)(p)
    }

    pub fn apply(&self, p: &[Mat<S>]) -> Vec<Mat<S>> {
        self.eval_dual(&lift_point(p)).iter().map(values).collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PointedMap<'a, S>) -> PointedMap<'a, S> {
        let outer = self.map.clone();
        let first = inner.map.clone();
        PointedMap {
            name: format!("{}∘{}", self.name, inner.name),
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            map: Arc::new(move |p| outer(&first(p))),
        }
    }

    /// Pushforward of one tangent vector, given as per-factor algebra elements.
    pub fn differential(&self, ctx: &LieGroup, p: &[Mat<S>], x: &[Mat<S>]) -> Result<Vec<Mat<S>>> {
        let xc = self.domain.coords(ctx, x)?;
        let out = self.differential_coords(ctx, p, &xc)?;
        Ok(self.codomain.embed(ctx, &out))
    }

    pub fn differential_coords(&self, ctx: &LieGroup, p: &[Mat<S>], x: &[S]) -> Result<Vec<S>> {
        let q = self.eval_dual(&self.domain.curve(ctx, p, x));
        let trivialized: Vec<Mat<S>> = q
            .iter()
            .map(|qi| {
                let inv = values(qi).inverse().ok_or(Error::Singular)?;
                Ok(&inv * &derivs(qi))
            })
            .collect::<Result<_>>()?;
        self.codomain.coords(ctx, &trivialized)
    }

    /// Jacobian in left-trivialized coordinates (codomain dim × domain dim).
    pub fn jacobian(&self, ctx: &LieGroup, p: &[Mat<S>]) -> Result<Mat<S>> {
        let d = self.domain.dim(ctx);
        let cols: Vec<Vec<S>> = (0..d)
            .map(|k| self.differential_coords(ctx, p, &unit(d, k)))
            .collect::<Result<_>>()?;
        Ok(Mat::from_cols(self.codomain.dim(ctx), &cols))
    }
}

/// Value at `p` and derivative along `x` of a coordinate map.
pub fn directional<S: Scalar>(
    ctx: &LieGroup,
    space: &Space,
    f: &CoordMap<'_, S>,
    p: &[Mat<S>],
    x: &[S],
) -> (Vec<S>, Vec<S>) {
    let out = f(&space.curve(ctx, p, x));
    (out.iter().map(|d| d.value.clone()).collect(), out.into_iter().map(|d| d.deriv).collect())
}

/// Value at `p` and Jacobian (column k = derivative along basis direction k).
pub fn jet<S: Scalar>(ctx: &LieGroup, space: &Space, f: &CoordMap<'_, S>, p: &[Mat<S>]) -> (Vec<S>, Mat<S>) {
    let d = space.dim(ctx);
    let value: Vec<S> = f(&lift_point(p)).into_iter().map(|v| v.value).collect();
    let cols: Vec<Vec<S>> = (0..d).map(|k| directional(ctx, space, f, p, &unit(d, k)).1).collect();
    (value.clone(), Mat::from_cols(value.len(), &cols))
}

/// First-order truncation of `f` at `p`.
///
/// Agrees with `f` on every dual point `space.curve(p, x)`, so brackets, Lie
/// derivatives and exterior derivatives at `p` are unchanged. Evaluating it
/// anywhere else panics.
pub fn linearize<'a, S: Scalar>(
    ctx: &'a LieGroup,
    space: &Space,
    f: &CoordMap<'_, S>,
    p: &[Mat<S>],
) -> impl Fn(&[Mat<Dual<S>>]) -> Vec<Dual<S>> + Send + Sync + 'a {
    let (value, jacobian) = jet(ctx, space, f, p);
    let base: Vec<Mat<S>> = p.to_vec();
    let base_inv: Vec<Mat<S>> = p.iter().map(|m| m.inverse().expect("points are invertible")).collect();
    let space = space.clone();
    move |q: &[Mat<Dual<S>>]| {
        let xs: Vec<Mat<S>> = q
            .iter()
            .zip(&base)
            .zip(&base_inv)
            .map(|((qi, pi), pi_inv)| {
                assert!(&qi.map(|d| d.value.clone()) == pi, "linearized map evaluated away from its base point");
                pi_inv * &qi.map(|d| d.deriv.clone())
            })
            .collect();
        let x = space.coords(ctx, &xs).expect("dual points come from tangent curves");
        let dv = jacobian.mul_vec(&x);
        value.iter().zip(dv).map(|(v, dv)| Dual::new(v.clone(), dv)).collect()
    }
}

/// `[X, Y](p)` in left-trivialized coordinates: `X(y) − Y(x) + [x, y]`.
pub fn lie_bracket<S: Scalar>(
    ctx: &LieGroup,
    space: &Space,
    x_field: &CoordMap<'_, S>,
    y_field: &CoordMap<'_, S>,
    p: &[Mat<S>],
) -> Vec<S> {
    let x: Vec<S> = x_field(&lift_point(p)).into_iter().map(|v| v.value).collect();
    let y: Vec<S> = y_field(&lift_point(p)).into_iter().map(|v| v.value).collect();
    let (_, x_of_y) = directional(ctx, space, y_field, p, &x);
    let (_, y_of_x) = directional(ctx, space, x_field, p, &y);
    let br = space.bracket(ctx, &x, &y);
    (0..x.len())
        .map(|k| x_of_y[k].clone() - y_of_x[k].clone() + br[k].clone())
        .collect()
}

/// `L_X β` at `p`, in dual coordinates. With `β(Y) = Σ b_j y_j`:
/// `(L_Xβ)_k = X(b_k) − β([X, e_k])` and `[X, e_k] = −e_k(x) + [x, e_k]`.
pub fn lie_derivative_covector<S: Scalar>(
    ctx: &LieGroup,
    space: &Space,
    x_field: &CoordMap<'_, S>,
    beta: &CoordMap<'_, S>,
    p: &[Mat<S>],
) -> Vec<S> {
    let (x, dx) = jet(ctx, space, x_field, p);
    let b: Vec<S> = beta(&lift_point(p)).into_iter().map(|v| v.value).collect();
    let (_, x_of_b) = directional(ctx, space, beta, p, &x);
    let ad = space.ad_matrix(ctx, &x);
    let dxt_b = dx.transpose().mul_vec(&b);
    let adt_b = ad.transpose().mul_vec(&b);
    (0..b.len())
        .map(|k| x_of_b[k].clone() + dxt_b[k].clone() - adt_b[k].clone())
        .collect()
}

/// `ι_Y dα` at `p`, in dual coordinates, from
/// `dα(Y, e_k) = Y(α(e_k)) − e_k(α(Y)) − α([Y, e_k])`.
pub fn interior_d<S: Scalar>(
    ctx: &LieGroup,
    space: &Space,
    y_field: &CoordMap<'_, S>,
    alpha: &CoordMap<'_, S>,
    p: &[Mat<S>],
) -> Vec<S> {
    let y: Vec<S> = y_field(&lift_point(p)).into_iter().map(|v| v.value).collect();
    let (a, da) = jet(ctx, space, alpha, p);
    let da_y = da.mul_vec(&y);
    let dat_y = da.transpose().mul_vec(&y);
    let adt_a = space.ad_matrix(ctx, &y).transpose().mul_vec(&a);
    (0..a.len())
        .map(|k| da_y[k].clone() - dat_y[k].clone() - adt_a[k].clone())
        .collect()
}

/// `dω(X, Y, Z)` for the constant-coordinate extensions of `x, y, z`:
/// `Σ_cyc X(ω(Y, Z)) − Σ_cyc ω([X, Y], Z)`.
pub fn d_two_form<S: Scalar>(
    ctx: &LieGroup,
    space: &Space,
    omega: &TwoFormFamily<'_, S>,
    p: &[Mat<S>],
    x: &[S],
    y: &[S],
    z: &[S],
) -> S {
    let along = |dir: &[S], u: &[S], v: &[S]| -> S {
        let (lu, lv) = (lift_vec(u), lift_vec(v));
        omega(&space.curve(ctx, p, dir), &lu, &lv).deriv
    };
    let at_p = |u: &[S], v: &[S]| -> S { omega(&lift_point(p), &lift_vec(u), &lift_vec(v)).value };
    let xy = space.bracket(ctx, x, y);
    let yz = space.bracket(ctx, y, z);
    let zx = space.bracket(ctx, z, x);
    along(x, y, z) + along(y, z, x) + along(z, x, y) - at_p(&xy, z) - at_p(&yz, x) - at_p(&zx, y)
}

#[cfg(test)]
mod tests;
