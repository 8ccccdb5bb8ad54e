use qpslab_core::check::CheckOutcome;
use qpslab_core::dirac::{cartan_dirac_check, closure_check, pairing_check};
use qpslab_core::gspringer::double::{double_axioms, DoublePoint};
use qpslab_core::gspringer::resolution::{
    bivector_check, leaf_form_check, lemma_kernel_check, quotient, regact_check, representative_independence, theorem1_check,
    theorem2_check, GSPoint,
};
use qpslab_core::gspringer::steinberg::{codimension_check, diagram_check, unipotent_check, weyl_fiber_check};
use qpslab_core::io::{element_to_json, mat_to_json};
use qpslab_core::sampling::{PointKind, Sampler};
use qpslab_core::scalar::DEFAULT_FLOAT_TOLERANCE;
use qpslab_core::{Exact, Float, LieGroup, Mat, Scalar};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Backend, CampaignConfig, Suite};
use crate::report::{CheckRecord, VerificationReport};
use crate::CliError;

/// Sampling height for the float backend; larger rationals make `Ad_g`
/// too ill-conditioned for double precision.
pub const FLOAT_HEIGHT: i64 = 2;

/// Residual bound for points of `μ⁻¹(g)` found by eigen-decomposition.
pub const WEYL_RESIDUAL: f64 = 1e-8;

/// Tangent triples per point for the closedness checks.
const TRIPLES: usize = 2;

/// Group elements per point for the invariance axiom.
const ACTIONS: usize = 10;

pub fn run_suite(config: &CampaignConfig) -> Result<VerificationReport, CliError> {
    let ctx = config.validate()?;
    if config.backend == Backend::Float {
        qpslab_core::scalar::set_float_tolerance(config.tolerance.unwrap_or(DEFAULT_FLOAT_TOLERANCE));
    }
    // the point stream: one seed per point, drawn up front
    let mut master = Sampler::new(config.seed);
    let seeds: Vec<u64> = (0..config.samples).map(|_| master.next_u64()).collect();

    let work = |(index, seed): (usize, u64)| -> Vec<CheckRecord> {
        let (point, outcomes) = match config.backend {
            Backend::Exact => run_point::<Exact>(config.suite, &ctx, index, Sampler::new(seed)),
            Backend::Float => run_point::<Float>(config.suite, &ctx, index, Sampler::new(seed).with_height(FLOAT_HEIGHT)),
        };
        outcomes
            .into_iter()
            .map(|o| CheckRecord { index, check_id: o.check_id, point: point.clone(), passed: o.passed, witness: o.witness })
            .collect()
    };
    let indexed: Vec<(usize, u64)> = seeds.into_iter().enumerate().collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", config.jobs)))?;
    // `collect` on an indexed parallel iterator keeps point order
    let per_point: Vec<Vec<CheckRecord>> = pool.install(|| indexed.into_par_iter().map(work).collect());
    Ok(VerificationReport::new(config.clone(), per_point.into_iter().flatten().collect()))
}

/// Torus part of the `index`-th resolution point: the identity first, then a
/// non-regular element, then generic ones.
fn stratum(index: usize) -> PointKind {
    match index {
        0 => PointKind::G,
        1 => PointKind::NonRegularT,
        _ => PointKind::T,
    }
}

fn gs_point<S: Scalar>(ctx: &LieGroup, s: &mut Sampler, index: usize) -> GSPoint<S> {
    let t: Mat<S> = match stratum(index) {
        PointKind::G => Mat::identity(ctx.n()),
        kind => s.point(ctx, kind),
    };
    let u: Mat<S> = s.point(ctx, PointKind::U);
    let g: Mat<S> = s.point(ctx, PointKind::G);
    GSPoint { g, b: &t * &u }
}

fn triples<S: Scalar>(s: &mut Sampler, d: usize) -> Vec<[Vec<S>; 3]> {
    (0..TRIPLES).map(|_| [s.vector(d), s.vector(d), s.vector(d)]).collect()
}

fn failed_setup(id: &str, e: qpslab_core::Error) -> Vec<CheckOutcome> {
    vec![CheckOutcome::fail(id, json!({"error": e.to_string()}))]
}

fn run_point<S: Scalar>(suite: Suite, ctx: &LieGroup, index: usize, mut s: Sampler) -> (Value, Vec<CheckOutcome>) {
    match suite {
        Suite::Pairing => {
            let v: Vec<Mat<S>> = (0..4).map(|_| s.algebra_element(ctx)).collect();
            let point = json!({"x": mat_to_json(&v[0]), "a": mat_to_json(&v[1]), "y": mat_to_json(&v[2]), "b": mat_to_json(&v[3])});
            (point, vec![pairing_check(ctx, &v[0], &v[1], &v[2], &v[3])])
        }
        Suite::CartanDirac | Suite::DorfmanClosure => {
            let g: Mat<S> = s.point(ctx, PointKind::G);
            let point = json!({"g": element_to_json(ctx, &g)});
            let mut out = Vec::new();
            if suite == Suite::CartanDirac {
                out.push(cartan_dirac_check(ctx, &g));
            }
            out.push(closure_check(ctx, &g));
            (point, out)
        }
        Suite::Double => {
            let p = DoublePoint::new(s.point::<S>(ctx, PointKind::G), s.point(ctx, PointKind::G));
            let tr = triples::<S>(&mut s, 2 * ctx.dim());
            let acts: Vec<(Mat<S>, Mat<S>)> =
                (0..ACTIONS).map(|_| (s.point(ctx, PointKind::G), s.point(ctx, PointKind::G))).collect();
            (p.to_json(), double_axioms(ctx, &p, &tr, &acts))
        }
        Suite::LemmaKernel => {
            let t: Mat<S> = match stratum(index) {
                PointKind::G => Mat::identity(ctx.n()),
                kind => s.point(ctx, kind),
            };
            let b = &t * &s.point::<S>(ctx, PointKind::U);
            let db = ctx.dims().borel;
            let samples: Vec<Vec<S>> = (0..4).map(|_| s.vector(db)).collect();
            (json!({"b": element_to_json(ctx, &b)}), vec![lemma_kernel_check(ctx, &b, &samples)])
        }
        Suite::Regact => {
            let p = gs_point::<S>(ctx, &mut s, index);
            (p.to_json(), vec![regact_check(ctx, &p)])
        }
        Suite::GsTheorem1 | Suite::GsTheorem2 | Suite::Bivector | Suite::LeafForm => {
            let p = gs_point::<S>(ctx, &mut s, index);
            let point = p.to_json();
            let q = match quotient(ctx, &p) {
                Ok(q) => q,
                Err(e) => return (point, failed_setup(&format!("{suite}.quotient"), e)),
            };
            let out = match suite {
                Suite::GsTheorem1 => {
                    let h: Mat<S> = s.point(ctx, PointKind::B);
                    let mut out = theorem1_check(ctx, &q);
                    out.push(representative_independence(ctx, &p, &h));
                    out
                }
                Suite::GsTheorem2 => theorem2_check(ctx, &q),
                Suite::Bivector => bivector_check(ctx, &q),
                _ => {
                    let tr = triples::<S>(&mut s, ctx.dim() + ctx.dims().unipotent);
                    leaf_form_check(ctx, &q, &tr)
                }
            };
            (point, out)
        }
        Suite::DiagramGs => {
            let p = gs_point::<S>(ctx, &mut s, index);
            let u: Mat<S> = s.point(ctx, PointKind::U);
            let t: Mat<S> = s.point(ctx, PointKind::RegularSemisimpleT);
            let mut out = vec![diagram_check(ctx, &p), unipotent_check(ctx, &u), codimension_check(ctx, &t)];
            out.push(weyl_check(ctx, &mut s));
            (p.to_json(), out)
        }
        Suite::WeylFiber => {
            let g = regular_semisimple(ctx, &mut s);
            let point = json!({"g": element_to_json(ctx, &g)});
            (point, vec![weyl_fiber_check(ctx, &g, WEYL_RESIDUAL)])
        }
    }
}

/// `h t h⁻¹` with `t` regular in the torus, in floating point. Drawn at
/// [`FLOAT_HEIGHT`] whatever the campaign backend.
fn regular_semisimple(ctx: &LieGroup, s: &mut Sampler) -> Mat<Float> {
    let mut s = Sampler::new(s.next_u64()).with_height(FLOAT_HEIGHT);
    let t: Mat<Float> = s.point(ctx, PointKind::RegularSemisimpleT);
    let h: Mat<Float> = s.point(ctx, PointKind::G);
    ctx.adjoint(&h, &t)
}

fn weyl_check(ctx: &LieGroup, s: &mut Sampler) -> CheckOutcome {
    let g = regular_semisimple(ctx, s);
    weyl_fiber_check(ctx, &g, WEYL_RESIDUAL)
}
