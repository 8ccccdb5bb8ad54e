use num_traits::Zero;

use super::*;
use crate::diffcalc::{lift_vec, Factor};
use crate::sampling::{PointKind, Sampler};
use crate::scalar::GaussianRational;

type E = GaussianRational;

fn q(n: i64) -> E {
    E::from_i64(n)
}

fn sl2() -> LieGroup {
    LieGroup::parse("sl2").unwrap()
}

#[test]
fn pairing_examples() {
    let ctx = sl2();
    let e12 = Mat::<E>::from_ints(&[&[0, 1], &[0, 0]]);
    let e21 = Mat::<E>::from_ints(&[&[0, 0], &[1, 0]]);
    let z = Mat::<E>::zeros(2, 2);
    assert!(pairing_metric(&ctx, &e12, &z, &e12, &z).is_zero());
    assert!(pairing_metric(&ctx, &z, &e21, &z, &e21).is_zero());
    assert_eq!(pairing_metric(&ctx, &e12, &e21, &e12, &e21), q(2));

    // the dual-coordinate pairing agrees with the metric one
    let mut s = Sampler::new(1);
    for _ in 0..10 {
        let (x, a, y, b): (Mat<E>, Mat<E>, Mat<E>, Mat<E>) =
            (s.algebra_element(&ctx), s.algebra_element(&ctx), s.algebra_element(&ctx), s.algebra_element(&ctx));
        let e1: Vec<E> = ctx.coords(&x).unwrap().into_iter().chain(ctx.dual_coords(&a)).collect();
        let e2: Vec<E> = ctx.coords(&y).unwrap().into_iter().chain(ctx.dual_coords(&b)).collect();
        assert_eq!(pairing(&e1, &e2), pairing_metric(&ctx, &x, &a, &y, &b));
    }
}

#[test]
fn lagrangian_examples() {
    assert!(DiracFiber::<E>::tangent_space(vec![], 4).is_lagrangian());
    assert!(DiracFiber::<E>::cotangent_space(vec![], 4).is_lagrangian());
    let skew = Mat::<E>::from_ints(&[&[0, 2, -1], &[-2, 0, 5], &[1, -5, 0]]);
    assert!(graph_two_form(&TwoFormFiber::new(vec![], skew).unwrap()).is_lagrangian());

    let sym = Mat::<E>::from_ints(&[&[1, 0], &[0, 0]]);
    let fiber = DiracFiber::from_parts(vec![], &Mat::identity(2), &sym);
    assert!(matches!(fiber.lagrangian_defect(), Some(LagrangianDefect::NotIsotropic { .. })));
    let half = DiracFiber::<E>::new(vec![], 2, &Mat::from_ints(&[&[1], &[0], &[0], &[0]]));
    assert_eq!(half.lagrangian_defect(), Some(LagrangianDefect::Dimension { got: 1, expected: 2 }));
}

#[test]
fn skewness_is_enforced() {
    let not_skew = Mat::<E>::from_ints(&[&[0, 1], &[1, 0]]);
    assert!(matches!(TwoFormFiber::new(vec![], not_skew.clone()), Err(Error::NotSkew(_))));
    assert!(matches!(BivectorFiber::new(vec![], not_skew), Err(Error::NotSkew(_))));
}

#[test]
fn graph_two_form_examples() {
    let zero = TwoFormFiber::new(vec![], Mat::<E>::zeros(3, 3)).unwrap();
    assert!(graph_two_form(&zero).equals(&DiracFiber::tangent_space(vec![], 3)));

    let omega = TwoFormFiber::new(vec![], Mat::<E>::from_ints(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]])).unwrap();
    let g = graph_two_form(&omega);
    assert_eq!(g.dim(), 3);
    assert!(g.contains(&[q(0), q(0), q(1)], &[q(0), q(0), q(0)]));
    // (e1, ω(e1,·)) = (e1, e2*)
    assert!(g.contains(&[q(1), q(0), q(0)], &[q(0), q(1), q(0)]));
    assert_eq!(g.cotangent_part().dim(), 0);
    assert_eq!(g.kernel_part().dim(), 1);
}

#[test]
fn graph_bivector_examples() {
    let zero = BivectorFiber::new(vec![], Mat::<E>::zeros(2, 2)).unwrap();
    assert!(graph_bivector(&zero).equals(&DiracFiber::cotangent_space(vec![], 2)));

    let mut s = Sampler::new(2);
    for _ in 0..5 {
        let m: Mat<E> = Mat::from_fn(4, 4, |_, _| s.rational());
        let pi = &m - &m.transpose();
        let Some(inv) = pi.inverse() else { continue };
        let gb = graph_bivector(&BivectorFiber::new(vec![], pi).unwrap());
        assert!(gb.is_lagrangian());
        let gw = graph_two_form(&TwoFormFiber::new(vec![], inv).unwrap());
        assert!(gb.equals(&gw));
    }
}

fn inversion<'a>() -> PointedMap<'a, E> {
    PointedMap::new("inv", Space::group(), Space::group(), |p| vec![p[0].inverse().unwrap()])
}

#[test]
fn pullback_and_pushforward_identities() {
    let ctx = LieGroup::parse("sl3").unwrap();
    let mut s = Sampler::new(3);
    let g: Mat<E> = s.point(&ctx, PointKind::G);
    let cd = cartan_dirac(&ctx, &g);
    let id = PointedMap::<E>::identity(Space::group());
    assert!(pullback(&ctx, &cd, &id, &[g.clone()]).unwrap().equals(&cd));
    assert!(pushforward(&ctx, &cd, &id).unwrap().equals(&cd));

    // inversion is a diffeomorphism: pushing forward the pullback returns F
    let g_inv = g.inverse().unwrap();
    let back = pullback(&ctx, &cd, &inversion(), &[g_inv]).unwrap();
    let there = pushforward(&ctx, &back, &inversion()).unwrap();
    assert_eq!(there.base, vec![g]);
    assert!(there.equals(&cd));
}

#[test]
fn pushforward_along_projection() {
    let ctx = LieGroup::parse("gl2").unwrap();
    let mut s = Sampler::new(4);
    let p: Vec<Mat<E>> = vec![s.point(&ctx, PointKind::G), s.point(&ctx, PointKind::G)];
    let proj = PointedMap::<E>::new("pr1", Space::new(&[Factor::G, Factor::G]), Space::group(), |p| vec![p[0].clone()]);
    let t = DiracFiber::tangent_space(p.clone(), 8);
    let out = pushforward(&ctx, &t, &proj).unwrap();
    assert!(out.equals(&DiracFiber::tangent_space(vec![], 4)));
}

#[test]
fn pullback_of_graph_is_graph_of_pullback() {
    let mut s = Sampler::new(5);
    let m: Mat<E> = Mat::from_fn(5, 5, |_, _| s.rational());
    let omega = TwoFormFiber::new(vec![], &m - &m.transpose()).unwrap();
    // a non-surjective linear map R^3 → R^5
    let a: Mat<E> = Mat::from_fn(5, 3, |_, _| s.rational());
    let via_fiber = pullback_linear(&graph_two_form(&omega), &a, vec![]);
    let via_form = graph_two_form(&omega.pullback(&a, vec![]));
    assert!(via_fiber.equals(&via_form));
}

#[test]
fn pushforward_along_non_submersion_still_lagrangian() {
    let mut s = Sampler::new(6);
    let m: Mat<E> = Mat::from_fn(3, 3, |_, _| s.rational());
    let omega = TwoFormFiber::new(vec![], &m - &m.transpose()).unwrap();
    let a = Mat::<E>::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
    let out = pushforward_linear(&graph_two_form(&omega), &a, vec![]).unwrap();
    assert!(out.is_lagrangian());
}

#[test]
fn cartan_dirac_at_identity_is_cotangent() {
    for name in ["sl2", "sl3", "gl2"] {
        let ctx = LieGroup::parse(name).unwrap();
        let e = Mat::<E>::identity(ctx.n());
        assert!(cartan_dirac(&ctx, &e).equals(&DiracFiber::cotangent_space(vec![], ctx.dim())));
    }
}

#[test]
fn cartan_dirac_is_lagrangian_with_conjugacy_class_tangent() {
    for name in ["sl2", "sl3", "gl2"] {
        let ctx = LieGroup::parse(name).unwrap();
        let mut s = Sampler::new(7);
        for _ in 0..20 {
            let g: Mat<E> = s.point(&ctx, PointKind::G);
            let cd = cartan_dirac(&ctx, &g);
            assert!(cd.is_lagrangian(), "{name}: {:?}", cd.lagrangian_defect());
            // centralizer dimension from ker(Ad_g − id)
            let ad = &ctx.adjoint_matrix(&g) - &Mat::identity(ctx.dim());
            let centralizer = kernel(&ad).dim();
            assert_eq!(cd.tangent_projection().dim(), ctx.dim() - centralizer);
        }
        let t: Mat<E> = s.point(&ctx, PointKind::RegularSemisimpleT);
        let rank = ctx.dims().rank;
        assert_eq!(cartan_dirac(&ctx, &t).tangent_projection().dim(), ctx.dim() - rank);
    }
}

#[test]
fn dorfman_trivial_cases() {
    let ctx = LieGroup::parse("sl3").unwrap();
    let space = Space::group();
    let mut s = Sampler::new(8);
    let g: Mat<E> = s.point(&ctx, PointKind::G);
    let d = ctx.dim();
    let zero = || DiracSection::<E>::new(move |_| lift_vec(&vec![q(0); d]), move |_| lift_vec(&vec![q(0); d]));
    let twist = cartan_twist::<E>(&ctx);
    let (x, a) = dorfman(&ctx, &space, &zero(), &zero(), Some(&twist), &[g.clone()]);
    assert!(x.iter().chain(&a).all(|v| v.is_zero()));

    let xi: Mat<E> = s.algebra_element(&ctx);
    let zeta: Mat<E> = s.algebra_element(&ctx);
    let left = |m: &Mat<E>| {
        let c = lift_vec(&ctx.coords(m).unwrap());
        DiracSection::<E>::new(move |_| c.clone(), move |_| lift_vec(&vec![q(0); d]))
    };
    let (x, a) = dorfman(&ctx, &space, &left(&xi), &left(&zeta), None, &[g]);
    assert_eq!(x, ctx.coords(&ctx.bracket(&xi, &zeta)).unwrap());
    assert!(a.iter().all(|v| v.is_zero()));
}

/// `dorfman(e_ξ, e_ζ) − e_{[ξ,ζ]}` at `g`, as one stacked vector.
fn closure_defect(ctx: &LieGroup, g: &Mat<E>, xi: &Mat<E>, zeta: &Mat<E>) -> Vec<E> {
    let space = Space::group();
    let twist = cartan_twist::<E>(ctx);
    let (x, a) = dorfman(
        ctx,
        &space,
        &cartan_dirac_section(ctx, xi),
        &cartan_dirac_section(ctx, zeta),
        Some(&twist),
        &[g.clone()],
    );
    let (y, b) = cartan_dirac_section(ctx, &ctx.bracket(xi, zeta)).at(&[g.clone()]);
    x.iter().chain(&a).zip(y.iter().chain(&b)).map(|(u, v)| u.clone() - v.clone()).collect()
}

#[test]
fn dorfman_closure_of_cartan_dirac_sections() {
    let ctx = sl2();
    let mut s = Sampler::new(9);
    let basis = ctx.basis::<E>();
    for _ in 0..10 {
        let g: Mat<E> = s.point(&ctx, PointKind::G);
        for xi in &basis {
            for zeta in &basis {
                assert!(closure_defect(&ctx, &g, xi, zeta).iter().all(|v| v.is_zero()));
            }
        }
    }
    for name in ["sl3", "gl2"] {
        let ctx = LieGroup::parse(name).unwrap();
        let g: Mat<E> = s.point(&ctx, PointKind::G);
        let (xi, zeta): (Mat<E>, Mat<E>) = (s.algebra_element(&ctx), s.algebra_element(&ctx));
        assert!(closure_defect(&ctx, &g, &xi, &zeta).iter().all(|v| v.is_zero()), "{name}");
    }
}

#[test]
fn linearized_sections_have_the_same_bracket() {
    let mut s = Sampler::new(12);
    let space = Space::group();
    for name in ["sl2", "sl3", "gl2"] {
        let ctx = LieGroup::parse(name).unwrap();
        let twist = cartan_twist::<E>(&ctx);
        let p = [s.point::<E>(&ctx, PointKind::G)];
        let v: Vec<Mat<E>> = (0..4).map(|_| s.algebra_element(&ctx)).collect();
        // mixed sections, not contained in any Dirac structure
        let (e1, e2) = (cartan_dirac_section(&ctx, &v[0]), cartan_dirac_section(&ctx, &v[1]));
        let (f1, f2) = (cartan_dirac_section(&ctx, &v[2]), cartan_dirac_section(&ctx, &v[3]));
        let s1 = DiracSection { tangent: e1.tangent, covector: f1.covector };
        let s2 = DiracSection { tangent: f2.tangent, covector: e2.covector };
        let lin = |sec: &DiracSection<'_, E>| {
            DiracSection::new(
                diffcalc::linearize(&ctx, &space, &*sec.tangent, &p),
                diffcalc::linearize(&ctx, &space, &*sec.covector, &p),
            )
        };
        let direct = dorfman(&ctx, &space, &s1, &s2, Some(&twist), &p);
        let linear = dorfman(&ctx, &space, &lin(&s1), &lin(&s2), Some(&twist), &p);
        assert_eq!(direct, linear, "{name}");
        assert!(direct.1.iter().any(|c| !c.is_zero()));
    }
}

#[test]
fn closure_check_passes_and_catches_corruption() {
    let mut s = Sampler::new(13);
    for name in ["sl2", "sl3"] {
        let ctx = LieGroup::parse(name).unwrap();
        let g: Mat<E> = s.point(&ctx, PointKind::G);
        assert!(closure_check(&ctx, &g).passed, "{name}");
        assert!(!closure_check(&ctx.clone().with_corruption(Corruption::DorfmanEta), &g).passed, "{name}");
    }
}

#[test]
fn corrupted_conventions_break_closure() {
    let mut s = Sampler::new(10);
    for c in [Corruption::DorfmanEta, Corruption::SigmaHalf] {
        let ctx = sl2().with_corruption(c);
        let g: Mat<E> = s.point(&ctx, PointKind::G);
        let basis = ctx.basis::<E>();
        let broken = basis.iter().any(|xi| {
            basis.iter().any(|zeta| closure_defect(&ctx, &g, xi, zeta).iter().any(|v| !v.is_zero()))
        });
        assert!(broken, "{c}");
    }
}

#[test]
fn fiber_json_dump() {
    let ctx = sl2();
    let cd = cartan_dirac(&ctx, &Mat::<E>::identity(2));
    let v = cd.to_json();
    assert_eq!(v["tangent_dim"], 3);
    assert_eq!(v["basis"]["rows"], 6);
    assert_eq!(v["base"].as_array().unwrap().len(), 1);
}


#[test]
fn dorfman_defect_of_a_graph_is_d_omega() {
    // for L = graph(ω): [[(X, ι_Xω), (Y, ι_Yω)]] − ([X,Y], ι_{[X,Y]}ω) = (0, dω(X, Y, ·))
    use crate::diffcalc::{d_two_form, lift_mat, lift_point, unit, Dual};
    let ctx = sl2();
    let space = Space::group();
    let mut s = Sampler::new(11);
    let g: Mat<E> = s.point(&ctx, PointKind::G);
    let c2 = ctx.clone();
    let omega = move |p: &[Mat<Dual<E>>], u: &[Dual<E>], v: &[Dual<E>]| -> Dual<E> {
        let (u, v) = (c2.from_coords(u), c2.from_coords(v));
        c2.form(&c2.adjoint(&p[0], &u), &v) - c2.form(&c2.adjoint(&p[0], &v), &u)
    };
    let section = |m: Mat<E>| {
        let m = lift_mat(&m);
        let c = ctx.clone();
        let field = move |p: &[Mat<Dual<E>>]| {
            let pm = &p[0] * &m;
            let tr = pm.trace() / Dual::from_i64(2);
            c.coords(&(&pm - &Mat::identity(2).scale(&tr))).unwrap()
        };
        let f2 = field.clone();
        let om = omega.clone();
        DiracSection::new(field, move |p| {
            let x = f2(p);
            (0..3).map(|k| om(p, &x, &lift_vec(&unit::<E>(3, k)))).collect()
        })
    };
    let s1 = section(s.point(&ctx, PointKind::G));
    let s2 = section(s.point(&ctx, PointKind::G));
    let p = [g];
    let (br, cov) = dorfman(&ctx, &space, &s1, &s2, None, &p);
    let (x, _) = s1.at(&p);
    let (y, _) = s2.at(&p);
    for k in 0..3 {
        let ek = unit::<E>(3, k);
        let flat_br = omega(&lift_point(&p), &lift_vec(&br), &lift_vec(&ek)).value;
        let dw = d_two_form(&ctx, &space, &omega, &p, &x, &y, &ek);
        assert!(!dw.is_zero());
        assert_eq!(cov[k].clone() - flat_br, dw);
    }
}
