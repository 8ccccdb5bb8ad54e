use super::*;
use crate::diffcalc::{perturbed, unit};
use crate::sampling::{PointKind, Sampler};
use crate::scalar::GaussianRational;
use num_complex::Complex64;

type E = GaussianRational;

fn point(ctx: &LieGroup, s: &mut Sampler) -> DoublePoint<E> {
    DoublePoint::new(s.point(ctx, PointKind::G), s.point(ctx, PointKind::G))
}

#[test]
fn identity_anchor() {
    let ctx = LieGroup::parse("gl2").unwrap();
    let e = Mat::<E>::identity(2);
    let omega = omega_double(&ctx, &DoublePoint::new(e.clone(), e));
    let mut s = Sampler::new(3);
    for _ in 0..5 {
        let (x1, y1, x2, y2): (Mat<E>, Mat<E>, Mat<E>, Mat<E>) =
            (s.algebra_element(&ctx), s.algebra_element(&ctx), s.algebra_element(&ctx), s.algebra_element(&ctx));
        let u: Vec<E> = ctx.coords(&x1).unwrap().into_iter().chain(ctx.coords(&y1).unwrap()).collect();
        let v: Vec<E> = ctx.coords(&x2).unwrap().into_iter().chain(ctx.coords(&y2).unwrap()).collect();
        assert_eq!(omega.eval(&u, &v), ctx.form(&x2, &y1) - ctx.form(&x1, &y2));
    }
}

#[test]
fn phi_is_equivariant() {
    let ctx = LieGroup::parse("sl3").unwrap();
    let mut s = Sampler::new(4);
    let p = point(&ctx, &mut s);
    let (g1, g2): (Mat<E>, Mat<E>) = (s.point(&ctx, PointKind::G), s.point(&ctx, PointKind::G));
    let moved = act(&g1, &g2, &p);
    let (m1, m2) = phi(&p.a, &p.b);
    let (n1, n2) = phi(&moved.a, &moved.b);
    assert_eq!(n1, ctx.adjoint(&g1, &m1));
    assert_eq!(n2, ctx.adjoint(&g2, &m2));
}

#[test]
fn rho_double_is_the_infinitesimal_action() {
    let ctx = LieGroup::parse("gl2").unwrap();
    let mut s = Sampler::new(5);
    let p = point(&ctx, &mut s);
    let (xi1, xi2): (Mat<E>, Mat<E>) = (s.algebra_element(&ctx), s.algebra_element(&ctx));
    let one = Mat::<E>::identity(2);
    // exp(−εξ) to first order
    let h1 = perturbed(&one, &(-xi1.clone()));
    let h2 = perturbed(&one, &(-xi2.clone()));
    let h2_inv = perturbed(&one, &xi2);
    let a = &(&h1 * &diffcalc::lift_mat(&p.a)) * &h2_inv;
    let b = &(&h2 * &diffcalc::lift_mat(&p.b)) * &h2_inv;
    let left = |m: &Mat<Dual<E>>| {
        let v = diffcalc::values(m).inverse().unwrap();
        ctx.coords(&(&v * &diffcalc::derivs(m))).unwrap()
    };
    let expected: Vec<E> = left(&a).into_iter().chain(left(&b)).collect();
    assert_eq!(rho_double(&ctx, &p.a, &p.b, &xi1, &xi2), expected);
}

#[test]
fn axioms_hold_exactly() {
    for (name, points, triples) in [("sl2", 4, 3), ("gl2", 3, 3), ("sl3", 2, 1), ("gl3", 1, 1)] {
        let ctx = LieGroup::parse(name).unwrap();
        let d = 2 * ctx.dim();
        let mut s = Sampler::new(6);
        for _ in 0..points {
            let p = point(&ctx, &mut s);
            let tr: Vec<[Vec<E>; 3]> = (0..triples).map(|_| [s.vector(d), s.vector(d), s.vector(d)]).collect();
            let acts = vec![(s.point(&ctx, PointKind::G), s.point(&ctx, PointKind::G))];
            for outcome in double_axioms(&ctx, &p, &tr, &acts) {
                assert!(outcome.passed, "{name}: {outcome:?}");
            }
        }
    }
}

#[test]
fn closedness_on_basis_triples() {
    let ctx = LieGroup::parse("sl2").unwrap();
    let p = point(&ctx, &mut Sampler::new(7));
    let d = 2 * ctx.dim();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let (x, y, z) = (unit::<E>(d, i), unit(d, j), unit(d, k));
                assert!(axiom_closedness(&ctx, &p, &x, &y, &z).passed, "({i},{j},{k})");
            }
        }
    }
}

#[test]
fn moment_condition_with_float_backend() {
    let ctx = LieGroup::parse("sl3").unwrap();
    let mut s = Sampler::new(8).with_height(2);
    let p: DoublePoint<Complex64> = DoublePoint::new(s.point(&ctx, PointKind::G), s.point(&ctx, PointKind::G));
    let outcome = axiom_moment(&ctx, &p);
    assert!(outcome.passed, "{outcome:?}");
}

#[test]
fn corrupted_form_breaks_moment_and_closedness() {
    let ctx = LieGroup::parse("sl2").unwrap().with_corruption(Corruption::OmegaSign);
    let mut s = Sampler::new(9);
    let p = point(&ctx, &mut s);
    assert!(!axiom_moment(&ctx, &p).passed);
    let d = 2 * ctx.dim();
    let bad = (0..5).any(|_| {
        let (x, y, z) = (s.vector::<E>(d), s.vector(d), s.vector(d));
        !axiom_closedness(&ctx, &p, &x, &y, &z).passed
    });
    assert!(bad);
    // the sign flip is invisible to invariance and nondegeneracy
    assert!(axiom_nondegeneracy(&ctx, &p).passed);
}

#[test]
fn corrupted_sigma_breaks_moment() {
    for c in [Corruption::SigmaHalf, Corruption::SigmaSign] {
        let ctx = LieGroup::parse("gl2").unwrap().with_corruption(c);
        let p = point(&ctx, &mut Sampler::new(10));
        let outcome = axiom_moment(&ctx, &p);
        assert!(!outcome.passed);
        assert!(outcome.witness.unwrap()["basis_index"].is_number());
    }
}

#[test]
fn point_json_round_trip() {
    let ctx = LieGroup::parse("sl2").unwrap();
    let p = point(&ctx, &mut Sampler::new(11));
    assert_eq!(DoublePoint::from_json(&ctx, &p.to_json()).unwrap(), p);
    let bad = serde_json::json!({"a": crate::io::mat_to_json(&Mat::<E>::identity(3)), "b": crate::io::mat_to_json(&p.b)});
    assert!(DoublePoint::<E>::from_json(&ctx, &bad).is_err());
}

