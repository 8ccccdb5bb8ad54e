use std::fmt;
use std::str::FromStr;

use qpslab_core::gspringer::resolution::{leaf_two_form, quotient, GSPoint};
use qpslab_core::gspringer::steinberg::{kappa, weyl_fiber_enum, SteinbergFiber};
use qpslab_core::io::{element_from_json, mat_to_json};
use qpslab_core::{Exact, ExactMat, FloatMat, LieGroup};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalKind {
    Steinberg,
    FiberEnum,
    LeafForm,
    Kappa,
}

impl FromStr for EvalKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "steinberg" => Ok(EvalKind::Steinberg),
            "fiber-enum" => Ok(EvalKind::FiberEnum),
            "leaf-form" => Ok(EvalKind::LeafForm),
            "kappa" => Ok(EvalKind::Kappa),
            other => Err(CliError::Usage(format!("unknown eval kind {other:?}"))),
        }
    }
}

impl fmt::Display for EvalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalKind::Steinberg => "steinberg",
            EvalKind::FiberEnum => "fiber-enum",
            EvalKind::LeafForm => "leaf-form",
            EvalKind::Kappa => "kappa",
        })
    }
}

fn bad_input(e: qpslab_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Evaluates one command on parsed JSON inputs. `input` is a group element
/// (kappa, steinberg, fiber-enum) or a GSPoint (leaf-form); `torus` is the
/// torus element of a Steinberg membership query.
pub fn eval_command(kind: EvalKind, ctx: &LieGroup, input: &Value, torus: Option<&Value>) -> Result<Value, CliError> {
    match kind {
        EvalKind::Kappa => {
            let g: ExactMat = element_from_json(ctx, input).map_err(bad_input)?;
            Ok(json!({"kappa": kappa(ctx, &g).iter().map(ToString::to_string).collect::<Vec<_>>()}))
        }
        EvalKind::Steinberg => {
            let torus = torus.ok_or_else(|| CliError::Usage("steinberg needs --torus".into()))?;
            let g: ExactMat = element_from_json(ctx, input).map_err(bad_input)?;
            let t: ExactMat = element_from_json(ctx, torus).map_err(bad_input)?;
            let fiber = SteinbergFiber::new(ctx, t).map_err(bad_input)?;
            Ok(json!({
                "member": fiber.contains(ctx, &g),
                "kappa_g": kappa(ctx, &g).iter().map(ToString::to_string).collect::<Vec<_>>(),
                "kappa_t": fiber.value.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }))
        }
        EvalKind::FiberEnum => {
            let g: FloatMat = element_from_json(ctx, input).map_err(bad_input)?;
            let fiber = weyl_fiber_enum(ctx, &g).map_err(bad_input)?;
            Ok(json!({
                "count": fiber.points.len(),
                "eigenvalues": fiber.eigenvalues.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
                "points": fiber.points.iter().map(GSPoint::to_json).collect::<Vec<_>>(),
                "residual": fiber.residual,
            }))
        }
        EvalKind::LeafForm => {
            let p: GSPoint<Exact> = GSPoint::from_json(ctx, input).map_err(bad_input)?;
            let q = quotient(ctx, &p)?;
            let form = leaf_two_form(&q)?;
            Ok(json!({"point": p.to_json(), "basis": mat_to_json(&form.basis), "matrix": mat_to_json(&form.matrix)}))
        }
    }
}
