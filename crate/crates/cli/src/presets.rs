//! Named models with default parameters.

use anyhow::{bail, Result};
use qes_core::{c64, ExtendedSpec, ModelSpec};

use crate::args::PresetParams;

/// What a preset or spec file resolves to.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Model(ModelSpec),
    Extended(ExtendedSpec),
}

pub struct Preset {
    pub name: &'static str,
    /// Parameter names with their defaults.
    pub params: &'static [(&'static str, f64)],
    pub doc: &'static str,
    build: fn(&[f64], usize) -> Result<Target>,
}

impl Preset {
    pub fn build(&self, given: &PresetParams, n: usize) -> Result<Target> {
        for (name, value) in given.iter() {
            if value.is_some() && !self.params.iter().any(|(p, _)| *p == name) {
                bail!("parameter --{name} is not used by preset {}", self.name);
            }
        }
        let values: Vec<f64> = self
            .params
            .iter()
            .map(|(name, default)| given.get(name).unwrap_or(*default))
            .collect();
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            bail!("preset parameters must be finite, got {bad}");
        }
        (self.build)(&values, n)
    }

    pub fn with_defaults(&self, n: usize) -> Result<Target> {
        self.build(&PresetParams::default(), n)
    }
}

impl PresetParams {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.iter().find(|(n, _)| *n == name).and_then(|(_, v)| v)
    }

    fn iter(&self) -> impl Iterator<Item = (&'static str, Option<f64>)> {
        [
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("ell", self.ell),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ]
        .into_iter()
    }
}

fn model(spec: ModelSpec) -> Result<Target> {
    Ok(Target::Model(spec))
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "harmonic",
        params: &[("b", 1.0)],
        doc: "Harmonic oscillator V = b^2 x^2 on the line. P = b z, Q = 1; E = b(2N + 1), roots are scaled Hermite zeros.",
        build: |v, n| model(ModelSpec::harmonic(v[0], n)),
    },
    Preset {
        name: "qnm-harmonic",
        params: &[("c", 2.0)],
        doc: "Inverted oscillator V = -c^2 x^2 / 4 with quasinormal modes. P = -i (c/2) z, Q = 1; E = -i c (N + 1/2).",
        build: |v, n| model(ModelSpec::qnm_harmonic(v[0], n)),
    },
    Preset {
        name: "radial",
        params: &[("a", 1.0), ("ell", 2.0)],
        doc: "Radial oscillator V = a^2 x^2 + l(l - 1)/x^2 on x > 0. P = 2a z - 2l, Q = 4z; E = a(4N + 2l + 1), roots are scaled Laguerre zeros.",
        build: |v, n| model(ModelSpec::radial(v[0], v[1], n)),
    },
    Preset {
        name: "qnm-radial",
        params: &[("a", 1.0), ("ell", 2.0)],
        doc: "Radial oscillator with a -> -i a: quasinormal modes of an inverted radial well. P = -2i a z - 2l, Q = 4z.",
        build: |v, n| model(ModelSpec::qnm_radial(v[0], v[1], n)),
    },
    Preset {
        name: "sextic",
        params: &[("a", 1.0), ("b", 1.0)],
        doc: "Sextic oscillator V = a^2 x^6 + 2ab x^4 + (b^2 - (4N + 3)a) x^2 on x > 0. P = 2a z^2 + 2b z, Q = 4z; N + 1 algebraic states.",
        build: |v, n| model(ModelSpec::sextic(v[0], v[1], n)),
    },
    Preset {
        name: "pt-quartic",
        params: &[("alpha", 1.0), ("beta", 2.0), ("gamma", 1.0)],
        doc: "PT-symmetric quartic on the line. P = i alpha z^2 + beta z + i gamma, Q = 1; the usual level label J equals N + 1. Energies are real (unbroken) or come in conjugate pairs (broken).",
        build: |v, n| model(ModelSpec::pt_quartic(v[0], v[1], v[2], n)),
    },
    Preset {
        name: "sextic-imag-b",
        params: &[("a", 1.0), ("beta", 1.0)],
        doc: "Sextic oscillator with imaginary b = i beta. P = 2a z^2 + 2i beta z, Q = 4z. No reference values; checked by residuals and the gauged matrix only.",
        build: |v, n| model(ModelSpec::sextic_complex(c64(v[0], 0.0), c64(0.0, v[1]), n)),
    },
    Preset {
        name: "x-laguerre",
        params: &[("ell", 1.0), ("alpha", -2.5)],
        doc: "Rationally extended radial oscillator deformed by xi = L_l^(alpha)(x^2), alpha < -l; E = 4(n - alpha - l).",
        build: |v, _| {
            let ell = v[0];
            if ell < 0.0 || ell.fract() != 0.0 || ell > u32::MAX as f64 {
                bail!("--ell must be a non-negative integer for x-laguerre, got {ell}");
            }
            Ok(Target::Extended(ExtendedSpec::new(ell as u32, v[1])?))
        },
    },
];

pub fn find(name: &str) -> Result<&'static Preset> {
    match PRESETS.iter().find(|p| p.name == name) {
        Some(p) => Ok(p),
        None => {
            let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
            bail!("unknown preset {name:?}; available: {}", names.join(", "))
        }
    }
}
