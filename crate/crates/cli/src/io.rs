//! JSON forms of models and solutions, input resolution and number formatting.

use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use qes_core::bae::Solution;
use qes_core::{ExtendedSpec, ModelSpec, Poly, C64};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::ModelArgs;
use crate::presets::{self, Target};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpecJson {
    #[serde(rename = "P")]
    pub p: Vec<[f64; 2]>,
    #[serde(rename = "Q")]
    pub q: Vec<[f64; 2]>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendedSpecJson {
    pub ell: u32,
    pub alpha: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolutionJson {
    pub roots: Vec<[f64; 2]>,
    pub energy: [f64; 2],
    pub residual: f64,
    pub seed_index: usize,
}

pub fn c2(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn poly_json(p: &Poly) -> Vec<[f64; 2]> {
    p.coeffs().iter().map(|&c| c2(c)).collect()
}

fn poly_from(coeffs: &[[f64; 2]]) -> Poly {
    Poly::new(coeffs.iter().map(|&[re, im]| C64::new(re, im)).collect())
}

/// A real number as JSON, with infinities spelled out.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn solution_json(s: &Solution) -> SolutionJson {
    SolutionJson {
        roots: s.rootset.roots().iter().map(|&r| c2(r)).collect(),
        energy: c2(s.energy),
        residual: s.rootset.residual_norm(),
        seed_index: s.seed_index,
    }
}

pub fn target_json(target: &Target) -> Value {
    match target {
        Target::Model(spec) => serde_json::to_value(ModelSpecJson {
            p: poly_json(&spec.p),
            q: poly_json(&spec.q),
            n: spec.n,
            label: spec.label.clone(),
        })
        .expect("spec serializes"),
        Target::Extended(s) => serde_json::to_value(ExtendedSpecJson { ell: s.ell, alpha: s.alpha }).expect("spec serializes"),
    }
}

/// Parses a model (`P`, `Q`, `N`) or extended (`ell`, `alpha`) spec.
pub fn parse_target(text: &str) -> Result<Target> {
    let value: Value = serde_json::from_str(text).context("malformed JSON spec")?;
    if value.get("ell").is_some() {
        let e: ExtendedSpecJson = serde_json::from_value(value).context("invalid extended spec")?;
        return Ok(Target::Extended(ExtendedSpec::new(e.ell, e.alpha)?));
    }
    let m: ModelSpecJson = serde_json::from_value(value).context("invalid model spec")?;
    if m.p.iter().chain(&m.q).flatten().any(|v| !v.is_finite()) {
        bail!("spec coefficients must be finite");
    }
    Ok(Target::Model(ModelSpec::new(poly_from(&m.p), poly_from(&m.q), m.n, m.label)?))
}

/// Resolves `--preset`/`--spec` plus overrides into a target.
pub fn resolve(args: &ModelArgs) -> Result<Target> {
    let target = match (&args.preset, &args.spec) {
        (Some(name), None) => presets::find(name)?.build(&args.params, args.n.unwrap_or(0))?,
        (None, Some(spec)) => {
            let text = if spec.trim_start().starts_with('{') {
                spec.clone()
            } else {
                fs::read_to_string(spec).with_context(|| format!("reading spec file {spec}"))?
            };
            let given: Vec<&str> = ["a", "b", "c", "ell", "alpha", "beta", "gamma"]
                .into_iter()
                .filter(|n| args.params.get(n).is_some())
                .collect();
            if !given.is_empty() {
                bail!("preset parameters ({}) need --preset", given.join(", "));
            }
            match parse_target(&text)? {
                Target::Model(spec) => Target::Model(match args.n {
                    Some(n) => spec.with_level(n),
                    None => spec,
                }),
                t => t,
            }
        }
        _ => return Err(anyhow!("give exactly one of --preset or --spec")),
    };
    Ok(target)
}

pub fn model_spec(target: Target) -> Result<ModelSpec> {
    match target {
        Target::Model(m) => Ok(m),
        Target::Extended(_) => bail!("this command needs a (P, Q) model; use `extended` for x-laguerre"),
    }
}

/// Fixed-width exponent form with 17 significant digits.
pub fn fmt(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}
