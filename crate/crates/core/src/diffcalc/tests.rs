use super::*;
use crate::sampling::{PointKind, Sampler};
use crate::scalar::Rational;
use num_traits::{ToPrimitive, Zero};

type Q = Rational;

fn sl2() -> LieGroup {
    LieGroup::parse("sl2").unwrap()
}

fn coords_of(ctx: &LieGroup, m: &Mat<Dual<Q>>) -> Vec<Dual<Q>> {
    ctx.coords(m).unwrap()
}

fn inversion<'a>() -> PointedMap<'a, Q> {
    PointedMap::new("inv", Space::group(), Space::group(), |p| vec![p[0].inverse().unwrap()])
}

fn fusion_moment<'a>() -> PointedMap<'a, Q> {
    let gg = Space::new(&[Factor::G, Factor::G]);
    PointedMap::new("phi", gg.clone(), gg, |p| {
        let a_inv = p[0].inverse().unwrap();
        vec![&(&p[0] * &p[1]) * &a_inv, p[1].inverse().unwrap()]
    })
}

/// Finite-difference oracle: left-trivialized derivative along the curve
/// `p(I + tx + t²x²/2)`, Richardson-extrapolated from two exact steps.
fn finite_difference(map: &PointedMap<'_, Q>, ctx: &LieGroup, p: &[Mat<Q>], x: &[Q]) -> Vec<f64> {
    let xs = map.domain.embed(ctx, x);
    let q0 = map.apply(p);
    let step = |t: Q| -> Vec<Mat<Q>> {
        let moved: Vec<Mat<Q>> = p
            .iter()
            .zip(&xs)
            .map(|(pi, xi)| {
                let n = pi.rows();
                let curve = &(&Mat::identity(n) + &xi.scale(&t)) + &(xi * xi).scale(&(t.clone() * t.clone() / Q::from_i64(2)));
                pi * &curve
            })
            .collect();
        map.apply(&moved)
            .iter()
            .zip(&q0)
            .map(|(qt, q)| (&q.inverse().unwrap() * &(qt - q)).scale(&(Q::from_i64(1) / t.clone())))
            .collect()
    };
    let h = Q::from_ratio(1, 1_000_000);
    let coarse = step(h.clone());
    let fine = step(h / Q::from_i64(2));
    let extrapolated: Vec<Mat<Q>> =
        coarse.iter().zip(&fine).map(|(c, f)| &f.scale(&Q::from_i64(2)) - c).collect();
    // project onto coordinates without membership checks
    extrapolated
        .iter()
        .zip(map.codomain.factors())
        .flat_map(|(m, _)| {
            let n = m.rows();
            let trace = m.trace() / Q::from_i64(n as i64);
            let m = if ctx.family() == crate::Family::Sl { m - &Mat::identity(n).scale(&trace) } else { m.clone() };
            ctx.coords(&m).unwrap()
        })
        .map(|v| v.to_f64().unwrap())
        .collect()
}

#[test]
fn identity_map_differential_is_identity() {
    let ctx = sl2();
    let mut s = Sampler::new(1);
    let g: Mat<Q> = s.point(&ctx, PointKind::G);
    let x: Vec<Q> = s.vector(3);
    let id = PointedMap::<Q>::identity(Space::group());
    assert_eq!(id.differential_coords(&ctx, &[g], &x).unwrap(), x);
}

#[test]
fn inversion_differential_is_minus_adjoint() {
    let ctx = LieGroup::parse("sl3").unwrap();
    let mut s = Sampler::new(2);
    let g: Mat<Q> = s.point(&ctx, PointKind::G);
    let x = s.algebra_element::<Q>(&ctx);
    let out = inversion().differential(&ctx, &[g.clone()], &[x.clone()]).unwrap();
    assert_eq!(out[0], -ctx.adjoint(&g, &x));
}

#[test]
fn fusion_moment_at_identity() {
    let ctx = sl2();
    let e = Mat::<Q>::identity(2);
    let mut s = Sampler::new(3);
    let x = s.algebra_element::<Q>(&ctx);
    let y = s.algebra_element::<Q>(&ctx);
    let out = fusion_moment().differential(&ctx, &[e.clone(), e], &[x, y.clone()]).unwrap();
    assert_eq!(out, vec![y.clone(), -y]);
}

#[test]
fn differential_matches_finite_differences() {
    for name in ["sl2", "gl2", "sl3"] {
        let ctx = LieGroup::parse(name).unwrap();
        let mut s = Sampler::new(4).with_height(3);
        let p: Vec<Mat<Q>> = vec![s.point(&ctx, PointKind::G), s.point(&ctx, PointKind::G)];
        let x: Vec<Q> = s.vector(2 * ctx.dim());
        let exact: Vec<f64> = fusion_moment()
            .differential_coords(&ctx, &p, &x)
            .unwrap()
            .iter()
            .map(|v| v.to_f64().unwrap())
            .collect();
        let approx = finite_difference(&fusion_moment(), &ctx, &p, &x);
        for (a, b) in exact.iter().zip(&approx) {
            assert!((a - b).abs() < 1e-6 * a.abs().max(1.0), "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn differential_is_linear_and_satisfies_chain_rule() {
    let ctx = LieGroup::parse("gl2").unwrap();
    let mut s = Sampler::new(5);
    let p: Vec<Mat<Q>> = vec![s.point(&ctx, PointKind::G), s.point(&ctx, PointKind::G)];
    let x: Vec<Q> = s.vector(8);
    let y: Vec<Q> = s.vector(8);
    let c: Q = s.rational();
    let phi = fusion_moment();
    let sum: Vec<Q> = x.iter().zip(&y).map(|(a, b)| a.clone() * c.clone() + b.clone()).collect();
    let lhs = phi.differential_coords(&ctx, &p, &sum).unwrap();
    let dx = phi.differential_coords(&ctx, &p, &x).unwrap();
    let dy = phi.differential_coords(&ctx, &p, &y).unwrap();
    let rhs: Vec<Q> = dx.iter().zip(&dy).map(|(a, b)| a.clone() * c.clone() + b.clone()).collect();
    assert_eq!(lhs, rhs);

    let twice = phi.compose(&phi);
    let direct = twice.jacobian(&ctx, &p).unwrap();
    let inner = phi.jacobian(&ctx, &p).unwrap();
    let outer = phi.jacobian(&ctx, &phi.apply(&p)).unwrap();
    assert_eq!(direct, &outer * &inner);
}

#[test]
fn differential_rejects_non_tangent_direction() {
    let ctx = sl2();
    let g = Mat::<Q>::identity(2);
    let bad = Mat::<Q>::identity(2);
    assert!(matches!(
        inversion().differential(&ctx, &[g], &[bad]),
        Err(Error::NotInTangentSpace(_))
    ));
}

fn left_invariant<'a>(ctx: &'a LieGroup, xi: Mat<Q>) -> Box<CoordMap<'a, Q>> {
    let c = lift_vec(&ctx.coords(&xi).unwrap());
    Box::new(move |_p| c.clone())
}

fn right_invariant<'a>(ctx: &'a LieGroup, xi: Mat<Q>) -> Box<CoordMap<'a, Q>> {
    let xi = lift_mat(&xi);
    Box::new(move |p| {
        let inv = p[0].inverse().unwrap();
        coords_of(ctx, &(&(&inv * &xi) * &p[0]))
    })
}

/// A non-invariant rational field: the traceless part of `p·m` (or `p·m` on
/// `GL`).
fn polynomial_field<'a>(ctx: &'a LieGroup, m: Mat<Q>) -> Box<CoordMap<'a, Q>> {
    let m = lift_mat(&m);
    Box::new(move |p| {
        let pm = &p[0] * &m;
        let n = pm.rows();
        let shifted = match ctx.family() {
            crate::Family::Sl => {
                let tr = pm.trace() / Dual::from_i64(n as i64);
                &pm - &Mat::identity(n).scale(&tr)
            }
            crate::Family::Gl => pm,
        };
        coords_of(ctx, &shifted)
    })
}

#[test]
fn brackets_of_invariant_fields() {
    let ctx = LieGroup::parse("sl3").unwrap();
    let space = Space::group();
    let mut s = Sampler::new(6);
    let g: Mat<Q> = s.point(&ctx, PointKind::G);
    let xi = s.algebra_element::<Q>(&ctx);
    let zeta = s.algebra_element::<Q>(&ctx);
    let p = [g];

    let left = lie_bracket(&ctx, &space, &*left_invariant(&ctx, xi.clone()), &*left_invariant(&ctx, zeta.clone()), &p);
    assert_eq!(left, ctx.coords(&ctx.bracket(&xi, &zeta)).unwrap());

    let mixed = lie_bracket(&ctx, &space, &*left_invariant(&ctx, xi.clone()), &*right_invariant(&ctx, zeta.clone()), &p);
    assert!(mixed.iter().all(|v| v.is_zero()));

    let f = polynomial_field(&ctx, s.point(&ctx, PointKind::G));
    assert!(lie_bracket(&ctx, &space, &*f, &*f, &p).iter().all(|v| v.is_zero()));
}

/// Fields that can be evaluated over nested duals, so that brackets of
/// brackets are differentiable.
enum Field {
    /// traceless part of `p·m`
    Poly(Vec<Vec<i64>>),
    /// `Ad_{p⁻¹} m`
    Right(Vec<Vec<i64>>),
}

impl Field {
    fn eval<S: Scalar>(&self, ctx: &LieGroup, p: &[Mat<Dual<S>>]) -> Vec<Dual<S>> {
        let int_mat = |m: &Vec<Vec<i64>>| {
            let n = m.len();
            Mat::from_fn(n, n, |i, j| Dual::<S>::from_i64(m[i][j]))
        };
        let out = match self {
            Field::Poly(m) => {
                let pm = &p[0] * &int_mat(m);
                let n = pm.rows();
                match ctx.family() {
                    crate::Family::Sl => {
                        let tr = pm.trace() / Dual::from_i64(n as i64);
                        &pm - &Mat::identity(n).scale(&tr)
                    }
                    crate::Family::Gl => pm,
                }
            }
            Field::Right(m) => {
                let inv = p[0].inverse().unwrap();
                &(&inv * &int_mat(m)) * &p[0]
            }
        };
        ctx.coords(&out).unwrap()
    }
}

fn bracket_field<'a>(
    ctx: &'a LieGroup,
    space: &'a Space,
    a: &'a Field,
    b: &'a Field,
) -> impl Fn(&[Mat<Dual<Q>>]) -> Vec<Dual<Q>> + Send + Sync + 'a {
    move |q: &[Mat<Dual<Q>>]| {
        let a_in = |r: &[Mat<Dual<Dual<Q>>>]| a.eval::<Dual<Q>>(ctx, r);
        let b_in = |r: &[Mat<Dual<Dual<Q>>>]| b.eval::<Dual<Q>>(ctx, r);
        lie_bracket::<Dual<Q>>(ctx, space, &a_in, &b_in, q)
    }
}

#[test]
fn jacobi_identity_for_sampled_fields() {
    for name in ["sl2", "gl2"] {
        let ctx = LieGroup::parse(name).unwrap();
        let space = Space::group();
        let mut s = Sampler::new(7);
        let n = ctx.n();
        let mut ints = |traceless: bool| -> Vec<Vec<i64>> {
            let mut m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| s.int(-3, 3)).collect()).collect();
            if traceless {
                let tr: i64 = (0..n - 1).map(|i| m[i][i]).sum();
                m[n - 1][n - 1] = -tr;
            }
            m
        };
        let sl = ctx.family() == crate::Family::Sl;
        let fields = [Field::Poly(ints(false)), Field::Right(ints(sl)), Field::Poly(ints(false))];
        let p = [s.point::<Q>(&ctx, PointKind::G)];

        let outer = |a: &Field, inner: &(dyn Fn(&[Mat<Dual<Q>>]) -> Vec<Dual<Q>> + Send + Sync)| {
            let a_q = |q: &[Mat<Dual<Q>>]| a.eval::<Q>(&ctx, q);
            lie_bracket(&ctx, &space, &a_q, inner, &p)
        };
        let [x, y, z] = &fields;
        let t1 = outer(x, &bracket_field(&ctx, &space, y, z));
        let t2 = outer(y, &bracket_field(&ctx, &space, z, x));
        let t3 = outer(z, &bracket_field(&ctx, &space, x, y));
        assert!(t1.iter().any(|v| !v.is_zero()), "{name}: degenerate sample");
        for k in 0..ctx.dim() {
            assert!((t1[k].clone() + t2[k].clone() + t3[k].clone()).is_zero(), "{name}");
        }
    }
}

#[test]
fn lie_derivative_examples() {
    let ctx = sl2();
    let space = Space::group();
    let mut s = Sampler::new(8);
    let g: Mat<Q> = s.point(&ctx, PointKind::G);
    let p = [g];
    let b_coords: Vec<Q> = s.vector(3);
    let bc = lift_vec(&b_coords);
    let beta: Box<CoordMap<'_, Q>> = Box::new(move |_p| bc.clone());
    let zero: Box<CoordMap<'_, Q>> = Box::new(|_p| lift_vec(&[Q::from_i64(0), Q::from_i64(0), Q::from_i64(0)]));
    assert!(lie_derivative_covector(&ctx, &space, &*zero, &*beta, &p).iter().all(|v| v.is_zero()));

    // constant β, left-invariant X = ξ^L: (L_Xβ)(e_k) = −β([ξ, e_k])
    let xi = s.algebra_element::<Q>(&ctx);
    let got = lie_derivative_covector(&ctx, &space, &*left_invariant(&ctx, xi.clone()), &*beta, &p);
    let e = Mat::<Q>::from_ints(&[&[0, 1], &[0, 0]]);
    let f = Mat::<Q>::from_ints(&[&[0, 0], &[1, 0]]);
    let h = Mat::<Q>::from_ints(&[&[1, 0], &[0, -1]]);
    for (k, ek) in [h, e, f].iter().enumerate() {
        let br = &(&xi * ek) - &(ek * &xi);
        // hand expansion of β on sl2 in the (h, e, f) basis
        let beta_br = b_coords[0].clone() * br[(0, 0)].clone()
            + b_coords[1].clone() * br[(0, 1)].clone()
            + b_coords[2].clone() * br[(1, 0)].clone();
        assert_eq!(got[k], -beta_br);
    }
}

#[test]
fn lie_derivative_leibniz() {
    let ctx = LieGroup::parse("gl2").unwrap();
    let space = Space::group();
    let mut s = Sampler::new(9);
    let p = [s.point::<Q>(&ctx, PointKind::G)];
    let x = polynomial_field(&ctx, s.point(&ctx, PointKind::G));
    let beta = right_invariant(&ctx, s.algebra_element(&ctx));
    let f_mat = lift_mat(&s.point::<Q>(&ctx, PointKind::G));
    let func = move |p: &[Mat<Dual<Q>>]| -> Vec<Dual<Q>> { vec![(&p[0] * &f_mat).trace()] };
    let f_beta = |p: &[Mat<Dual<Q>>]| -> Vec<Dual<Q>> {
        let fv = func(p)[0].clone();
        beta(p).into_iter().map(|b| b * fv.clone()).collect()
    };
    let lhs = lie_derivative_covector(&ctx, &space, &*x, &f_beta, &p);
    let xv: Vec<Q> = x(&lift_point(&p)).into_iter().map(|d| d.value).collect();
    let (fv, xf) = directional(&ctx, &space, &func, &p, &xv);
    let bv: Vec<Q> = beta(&lift_point(&p)).into_iter().map(|d| d.value).collect();
    let lb = lie_derivative_covector(&ctx, &space, &*x, &*beta, &p);
    for k in 0..4 {
        assert_eq!(lhs[k], xf[0].clone() * bv[k].clone() + fv[0].clone() * lb[k].clone());
    }
}

#[test]
fn d_of_constant_form_on_torus_vanishes() {
    let ctx = LieGroup::parse("gl3").unwrap();
    let space = Space::new(&[Factor::T]);
    let mut s = Sampler::new(10);
    let p = [s.point::<Q>(&ctx, PointKind::T)];
    let m = s.point::<Q>(&ctx, PointKind::G);
    let skew = lift_mat(&(&m - &m.transpose()));
    let omega = move |_p: &[Mat<Dual<Q>>], u: &[Dual<Q>], v: &[Dual<Q>]| -> Dual<Q> {
        let su = skew.mul_vec(v);
        u.iter().zip(&su).fold(Dual::from_i64(0), |acc, (a, b)| acc + a.clone() * b.clone())
    };
    let (x, y, z) = (s.vector::<Q>(3), s.vector::<Q>(3), s.vector::<Q>(3));
    assert!(d_two_form(&ctx, &space, &omega, &p, &x, &y, &z).is_zero());
}

#[test]
fn d_two_form_is_alternating() {
    let ctx = sl2();
    let space = Space::group();
    let mut s = Sampler::new(11);
    let p = [s.point::<Q>(&ctx, PointKind::G)];
    let ctx2 = ctx.clone();
    // ω_p(u, v) = (Ad_p u, v) − (Ad_p v, u): skew and not closed
    let omega = move |p: &[Mat<Dual<Q>>], u: &[Dual<Q>], v: &[Dual<Q>]| -> Dual<Q> {
        let (u, v) = (ctx2.from_coords(u), ctx2.from_coords(v));
        let pu = ctx2.adjoint(&p[0], &u);
        let pv = ctx2.adjoint(&p[0], &v);
        ctx2.form(&pu, &v) - ctx2.form(&pv, &u)
    };
    let (x, y, z) = (s.vector::<Q>(3), s.vector::<Q>(3), s.vector::<Q>(3));
    let a = d_two_form(&ctx, &space, &omega, &p, &x, &y, &z);
    let b = d_two_form(&ctx, &space, &omega, &p, &y, &x, &z);
    let c = d_two_form(&ctx, &space, &omega, &p, &x, &z, &y);
    assert_eq!(a.clone(), -b);
    assert_eq!(a, -c);
}
