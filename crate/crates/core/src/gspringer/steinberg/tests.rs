use super::*;
use crate::sampling::{PointKind, Sampler};
use crate::scalar::GaussianRational;

type E = GaussianRational;

#[test]
fn kappa_of_identity() {
    let ctx = LieGroup::parse("sl2").unwrap();
    assert_eq!(kappa(&ctx, &Mat::<E>::identity(2)), vec![E::from_i64(2)]);
    let gl = LieGroup::parse("gl3").unwrap();
    assert_eq!(kappa(&gl, &Mat::<E>::identity(3)), vec![E::from_i64(3), E::from_i64(3), E::from_i64(1)]);
}

#[test]
fn membership_examples() {
    let ctx = LieGroup::parse("sl2").unwrap();
    let mut s = Sampler::new(1);
    let u: Mat<E> = s.point(&ctx, PointKind::U);
    assert!(steinberg_membership(&ctx, &u, &Mat::identity(2)).unwrap());
    assert!(unipotent_check(&ctx, &u).passed);
    let a = Mat::<E>::from_ratios(&[&[(2, 1), (0, 1)], &[(0, 1), (1, 2)]]);
    let b = Mat::<E>::from_ratios(&[&[(3, 1), (0, 1)], &[(0, 1), (1, 3)]]);
    assert!(!steinberg_membership(&ctx, &a, &b).unwrap());
    // conjugates share a fiber
    let g: Mat<E> = s.point(&ctx, PointKind::G);
    assert!(steinberg_membership(&ctx, &ctx.adjoint(&g, &a), &a).unwrap());
    assert!(SteinbergFiber::new(&ctx, u).is_err());
}

#[test]
fn diagram_commutes() {
    for name in ["sl2", "sl3", "gl2", "gl3"] {
        let ctx = LieGroup::parse(name).unwrap();
        let mut s = Sampler::new(2);
        for _ in 0..5 {
            let p = GSPoint::new(&ctx, s.point::<E>(&ctx, PointKind::G), s.point(&ctx, PointKind::B)).unwrap();
            assert!(diagram_check(&ctx, &p).passed);
        }
        let t: Mat<E> = s.point(&ctx, PointKind::RegularSemisimpleT);
        assert!(codimension_check(&ctx, &t).passed);
        // the identity is not regular: its class is a point
        assert!(!codimension_check(&ctx, &Mat::<E>::identity(ctx.n())).passed);
    }
}

#[test]
fn eigenvalue_solvers() {
    for n in 1..=4 {
        let diag: Vec<Complex64> = (0..n).map(|k| Complex64::new(k as f64 + 2.0, 0.5 * k as f64)).collect();
        let mut eigs = eigenvalues(&Mat::diag(&diag));
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (a, b) in eigs.iter().zip(&diag) {
            assert!((a - b).norm() < 1e-10, "n={n}: {a} vs {b}");
        }
    }
    // a rotation has complex eigenvalues ±i
    let rot = Mat::from_vec(2, 2, vec![Complex64::zero(), Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::zero()]);
    let eigs = eigenvalues(&rot);
    assert!(eigs.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12));
}

#[test]
fn weyl_fiber_of_a_torus_element() {
    let ctx = LieGroup::parse("sl2").unwrap();
    let t = Mat::diag(&[Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0)]);
    let fiber = weyl_fiber_enum(&ctx, &t).unwrap();
    assert_eq!(fiber.points.len(), 2);
    assert!(fiber.residual < 1e-12);
    assert!(weyl_fiber_check(&ctx, &t, 1e-8).passed);
}

#[test]
fn weyl_fibers_of_random_regular_elements() {
    for (name, order) in [("sl2", 2), ("sl3", 6), ("gl3", 6)] {
        let ctx = LieGroup::parse(name).unwrap();
        let mut s = Sampler::new(3).with_height(3);
        for _ in 0..5 {
            let t: Mat<Complex64> = s.point(&ctx, PointKind::RegularSemisimpleT);
            let h: Mat<Complex64> = s.point(&ctx, PointKind::G);
            let g = ctx.adjoint(&h, &t);
            let o = weyl_fiber_check(&ctx, &g, 1e-8);
            assert!(o.passed, "{name}: {o:?}");
            assert_eq!(o.witness.unwrap()["points"], order);
        }
    }
}

#[test]
fn unipotent_input_is_rejected() {
    let ctx = LieGroup::parse("sl3").unwrap();
    let u: Mat<Complex64> = Sampler::new(4).point(&ctx, PointKind::U);
    let err = weyl_fiber_enum(&ctx, &u).unwrap_err();
    assert!(err.to_string().contains("not regular semisimple"));
}
