use anyhow::{bail, Result};
use qes_core::bae::{default_starts, enumerate_solutions, Enumeration};
use qes_core::model::{MapKind, PrepotentialTerm};
use qes_core::oracle::{fd_spectrum, gauged_energies, schrodinger_residual};
use qes_core::spectrum::{build_state, orthogonality, sample_state};
use qes_core::xrational::radial_reference;
use qes_core::{ExtendedSpec, GridSpec, Model, ModelSpec, Poly, QesState, Solvability, C64};
use serde_json::{json, Value};

use crate::args::{ExtendedArgs, Format, ModelArgs, OutputArgs, PlotArgs, SolveArgs, StatesArgs};
use crate::io::{c2, fmt, model_spec, num, poly_json, resolve, solution_json, target_json};
use crate::presets::{self, Target, PRESETS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerances of the `verify` checks.
pub mod tol {
    pub const BAE_RESIDUAL: f64 = 1e-10;
    pub const GAUGED: f64 = 1e-9;
    pub const REAL: f64 = 1e-10;
    pub const FD: f64 = 5e-3;
    pub const SCHRODINGER: f64 = 1e-6;
    pub const ORTHOGONALITY: f64 = 1e-6;
    pub const NORM: f64 = 1e-6;
    pub const REDUCTION: f64 = 1e-12;
}

/// Rendered command output and its exit code.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub code: i32,
}

impl Report {
    fn json(command: &str, target: &Target, result: Value, code: i32) -> Self {
        let v = json!({
            "tool": "qes",
            "version": VERSION,
            "command": command,
            "spec": target_json(target),
            "result": result,
        });
        Report { text: serde_json::to_string_pretty(&v).expect("json renders") + "\n", code }
    }
}

fn format_or(out: &OutputArgs, default: Format) -> Format {
    out.format.unwrap_or(default)
}

fn json_only(out: &OutputArgs, command: &str) -> Result<()> {
    if format_or(out, Format::Json) == Format::Csv {
        bail!("{command} has no csv output");
    }
    Ok(())
}

fn solvability_name(s: Solvability) -> &'static str {
    match s {
        Solvability::ExactlySolvable => "ExactlySolvable",
        Solvability::QuasiExactlySolvable => "QuasiExactlySolvable",
        Solvability::SingleState => "SingleState",
    }
}

pub fn classify(args: &ModelArgs) -> Result<Report> {
    json_only(&args.output, "classify")?;
    let target = resolve(args)?;
    let spec = model_spec(target.clone())?;
    let (m, n) = spec.degrees();
    let normalizable = match Model::new(spec.clone()) {
        Ok(model) => json!(model.normalizable()),
        Err(e) => json!({ "unknown": e.to_string() }),
    };
    let result = json!({
        "solvability": solvability_name(spec.classify()),
        "degrees": { "m": m, "n": n },
        "normalizable": normalizable,
    });
    Ok(Report::json("classify", &target, result, EXIT_OK))
}

pub fn build(args: &ModelArgs) -> Result<Report> {
    json_only(&args.output, "build")?;
    let target = resolve(args)?;
    let model = Model::new(model_spec(target.clone())?)?;
    let pot = model.potential();
    let map = model.map();
    let kind = match map.kind {
        MapKind::Linear { gamma } => json!({ "kind": "Linear", "gamma": gamma }),
        MapKind::Quadratic { beta } => json!({ "kind": "Quadratic", "beta": beta }),
        MapKind::Quadratic2 { alpha, delta, form } => {
            json!({ "kind": "Quadratic2", "alpha": alpha, "delta": delta, "form": format!("{form:?}") })
        }
    };
    let w0: Vec<Value> = model
        .prepotential()
        .terms
        .iter()
        .map(|t| match t {
            PrepotentialTerm::Polynomial(p) => json!({ "polynomial": poly_json(p) }),
            PrepotentialTerm::Log { coeff, root } => json!({ "log": { "coeff": c2(*coeff), "root": c2(*root) } }),
            PrepotentialTerm::Inverse { coeff, root } => {
                json!({ "inverse": { "coeff": c2(*coeff), "root": c2(*root) } })
            }
        })
        .collect();
    let poles: Vec<Value> = pot
        .pole_terms
        .iter()
        .map(|t| json!({ "location": c2(t.location), "order": t.order, "coeff": c2(t.coeff) }))
        .collect();
    let result = json!({
        "solvability": solvability_name(model.classify()),
        "normalizable": model.normalizable(),
        "domain": [num(map.domain.lo), num(map.domain.hi)],
        "coordinate_map": { "map": kind, "shift": map.shift },
        "S": poly_json(&pot.s),
        "S0": c2(pot.s0),
        "pole_terms": poles,
        "n_terms": {
            "linear": c2(pot.linear_n_term),
            "q2": c2(pot.q2),
            "A1": c2(pot.a1),
            "A2": c2(pot.a2),
            "energy": "E = -(S0 + q2 N^2 - 2 A1 N - 2 A2 sum_k z_k)",
            "potential": "V = S(z) - S0 + poles - 2 A2 N z",
        },
        "W0_terms": w0,
    });
    Ok(Report::json("build", &target, result, EXIT_OK))
}

fn solve_model(spec: &ModelSpec, args: &SolveArgs) -> Result<(Model, Enumeration)> {
    let model = Model::new(spec.clone())?;
    let starts = args.starts.unwrap_or_else(|| default_starts(spec.n));
    if starts == 0 {
        bail!("--starts must be positive");
    }
    let en = enumerate_solutions(&model, starts, args.rng_seed);
    Ok((model, en))
}

fn real_tol(e: C64) -> f64 {
    tol::REAL * e.norm().max(1.0)
}

/// Reality of a non-Hermitian spectrum: all real, closed under conjugation, or neither.
fn pt_report(spec: &ModelSpec, energies: &[C64]) -> Option<Value> {
    if spec.is_hermitian() {
        return None;
    }
    let all_real = energies.iter().all(|e| e.im.abs() <= real_tol(*e));
    let paired = energies
        .iter()
        .all(|e| energies.iter().any(|f| (e.conj() - f).norm() <= real_tol(*e)));
    let status = if all_real {
        "PT unbroken"
    } else if paired {
        "PT broken"
    } else {
        "complex"
    };
    Some(json!({ "all_real": all_real, "conjugate_pairs": paired, "status": status }))
}

fn enumeration_json(en: &Enumeration) -> Value {
    let solutions: Vec<Value> = en
        .solutions
        .iter()
        .map(|s| serde_json::to_value(solution_json(s)).expect("solution serializes"))
        .collect();
    json!({
        "expected": en.expected,
        "found": en.solutions.len(),
        "complete": en.complete(),
        "starts": en.starts_budget,
        "starts_used": en.starts_used,
        "rng_seed": en.rng_seed,
        "solutions": solutions,
    })
}

fn enumeration_code(en: &Enumeration) -> i32 {
    if en.solutions.is_empty() || !en.complete() {
        EXIT_NONCONVERGENCE
    } else {
        EXIT_OK
    }
}

pub fn solve(args: &SolveArgs) -> Result<Report> {
    let target = resolve(&args.model)?;
    let spec = model_spec(target.clone())?;
    let (_, en) = solve_model(&spec, args)?;
    let code = enumeration_code(&en);
    if format_or(&args.model.output, Format::Json) == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["solution", "energy_re", "energy_im", "residual", "seed_index", "root_re", "root_im"])?;
        for (i, s) in en.solutions.iter().enumerate() {
            for r in s.rootset.roots() {
                w.write_record([
                    i.to_string(),
                    fmt(s.energy.re),
                    fmt(s.energy.im),
                    fmt(s.rootset.residual_norm()),
                    s.seed_index.to_string(),
                    fmt(r.re),
                    fmt(r.im),
                ])?;
            }
        }
        return Ok(Report { text: String::from_utf8(w.into_inner()?)?, code });
    }
    let mut result = enumeration_json(&en);
    if let Some(pt) = pt_report(&spec, &en.energies()) {
        result["pt_symmetry"] = pt;
    }
    Ok(Report::json("solve", &target, result, code))
}

#[derive(Debug)]
struct Check {
    name: String,
    value: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance, pass: value <= tolerance }
    }

    fn flag(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), value: if pass { 0.0 } else { 1.0 }, tolerance: 0.0, pass }
    }

    fn json(&self) -> Value {
        json!({ "name": self.name, "value": num(self.value), "tolerance": self.tolerance, "pass": self.pass })
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Grid for the finite-difference oracle. Even maps that are regular at the
/// origin are mirrored onto the full line so both parities are present.
fn fd_grid(model: &Model) -> GridSpec {
    let d = model.domain();
    match model.map().kind {
        MapKind::Quadratic { .. } if d.lo.is_finite() && !model.singular_at_end(d.lo) => GridSpec::full_line(),
        _ => GridSpec::for_model(model),
    }
}

fn states_for(model: &Model, en: &Enumeration, grid: &GridSpec) -> Result<Vec<QesState>> {
    let mut out = Vec::with_capacity(en.solutions.len());
    for s in &en.solutions {
        out.push(if model.normalizable() {
            build_state(model, &s.rootset, grid)?
        } else {
            let mut st = sample_state(model, &s.rootset, grid)?;
            let peak = max_of(st.samples.iter().map(|v| v.norm()));
            if peak > 0.0 && peak.is_finite() {
                st.samples.iter_mut().for_each(|v| *v /= peak);
            }
            st
        });
    }
    Ok(out)
}

const RADIAL_NOTE: &str = "Bethe ansatz equations for Q = 4z, P = 2a z - 2l are used in the form \
2a z_k - (2l + 1) - 4 sum_{j != k} z_k / (z_k - z_j) = 0, obtained by substituting P and Q into the \
general equations; its roots are the zeros of L_N^(l - 1/2)(a z). The sign pattern \
2a z_k + 2l + 1 + 4 sum z_k / (z_k - z_j) = 0 is a sign typo and is not used.";

fn model_checks(model: &Model, en: &Enumeration, grid: &GridSpec) -> Result<(Vec<Check>, Vec<String>)> {
    let spec = model.spec();
    let mut checks = vec![Check {
        name: "enumeration_complete".into(),
        value: en.solutions.len() as f64,
        tolerance: en.expected.map_or(f64::NAN, |e| e as f64),
        pass: en.complete() && !en.solutions.is_empty(),
    }];
    let energies = en.energies();
    checks.push(Check::at_most(
        "bae_residual",
        max_of(en.solutions.iter().map(|s| s.rootset.residual_norm())),
        tol::BAE_RESIDUAL,
    ));

    let gauged = gauged_energies(model, spec.n)?;
    let dist = |e: &C64, set: &[C64]| set.iter().map(|g| (e - g).norm() / e.norm().max(1.0)).fold(f64::INFINITY, f64::min);
    let mut gap = max_of(energies.iter().map(|e| dist(e, &gauged)));
    if model.classify() == Solvability::QuasiExactlySolvable && !energies.is_empty() {
        gap = gap.max(max_of(gauged.iter().map(|g| dist(g, &energies))));
    }
    checks.push(Check::at_most("gauged_matrix_agreement", gap, tol::GAUGED));

    let hermitian = spec.is_hermitian();
    if hermitian {
        checks.push(Check::at_most(
            "energies_real",
            max_of(energies.iter().map(|e| e.im.abs() / e.norm().max(1.0))),
            tol::REAL,
        ));
    }

    let states = states_for(model, en, grid)?;
    for (i, st) in states.iter().enumerate() {
        let r = schrodinger_residual(|x| model.potential_at(x), st.energy, &st.samples, grid);
        checks.push(Check::at_most(format!("schrodinger_residual[{i}]"), r, tol::SCHRODINGER));
    }

    if hermitian && model.normalizable() {
        let gram = orthogonality(&states, grid);
        checks.push(Check::at_most("orthogonality", gram.max_off_diagonal(), tol::ORTHOGONALITY));
        let nodes: Vec<usize> = states.iter().filter_map(|s| s.nodes).collect();
        checks.push(Check::flag(
            "nodes_increase_with_energy",
            nodes.len() == states.len() && nodes.windows(2).all(|w| w[0] <= w[1]),
        ));
        let g = fd_grid(model);
        let k = 2 * spec.n + 8;
        let fd = fd_spectrum(|x| model.potential_at(x).re, &g, k)?;
        let off = max_of(energies.iter().map(|e| {
            fd.eigenvalues.iter().map(|f| (f - e.re).abs()).fold(f64::INFINITY, f64::min)
        }));
        checks.push(Check::at_most("finite_difference_agreement", off, tol::FD));
    }

    let mut notes = Vec::new();
    if matches!(model.map().kind, MapKind::Quadratic { .. }) && spec.p.degree() <= 1 {
        notes.push(RADIAL_NOTE.to_string());
    }
    if !model.normalizable() {
        notes.push("exp(-W0) is not square integrable: states are checked by the Schrödinger residual only".into());
    }
    Ok((checks, notes))
}

fn checks_report(command: &str, target: &Target, checks: &[Check], notes: &[String], mut extra: Value) -> Report {
    let pass = checks.iter().all(|c| c.pass);
    extra["checks"] = checks.iter().map(Check::json).collect();
    extra["notes"] = json!(notes);
    extra["pass"] = json!(pass);
    Report::json(command, target, extra, if pass { EXIT_OK } else { EXIT_VERIFY })
}

pub fn verify(args: &SolveArgs) -> Result<Report> {
    json_only(&args.model.output, "verify")?;
    let target = resolve(&args.model)?;
    let spec = match &target {
        Target::Extended(x) => {
            let grid = args.grid.map_or_else(GridSpec::half_line, |g| g.0);
            let (checks, body) = extended_checks(x, 4, &grid)?;
            return Ok(checks_report("verify", &target, &checks, &[], body));
        }
        Target::Model(m) => m.clone(),
    };
    let (model, en) = solve_model(&spec, args)?;
    let grid = args.grid.map_or_else(|| GridSpec::for_model(&model), |g| g.0);
    let (checks, notes) = model_checks(&model, &en, &grid)?;
    let mut body = json!({ "energies": en.energies().iter().map(|&e| c2(e)).collect::<Vec<_>>() });
    if let Some(pt) = pt_report(&spec, &en.energies()) {
        body["pt_symmetry"] = pt;
    }
    Ok(checks_report("verify", &target, &checks, &notes, body))
}

fn sample_rows(
    w: &mut csv::Writer<Vec<u8>>,
    prefix: &[String],
    grid: &GridSpec,
    samples: &[C64],
    potential: impl Fn(f64) -> C64,
    magnify: f64,
    stride: usize,
) -> Result<()> {
    for i in (0..grid.points).step_by(stride) {
        let x = grid.x(i);
        let v = potential(x);
        let phi = samples[i] * magnify;
        let mut rec = prefix.to_vec();
        rec.extend([fmt(x), fmt(v.re), fmt(v.im), fmt(phi.re), fmt(phi.im)]);
        w.write_record(&rec)?;
    }
    Ok(())
}

fn check_stride(stride: usize) -> Result<()> {
    if stride == 0 {
        bail!("--stride must be positive");
    }
    Ok(())
}

pub fn states(args: &StatesArgs) -> Result<Report> {
    check_stride(args.stride)?;
    let target = resolve(&args.solve.model)?;
    let spec = model_spec(target.clone())?;
    let (model, en) = solve_model(&spec, &args.solve)?;
    let grid = args.solve.grid.map_or_else(|| GridSpec::for_model(&model), |g| g.0);
    let states = states_for(&model, &en, &grid)?;
    let code = enumeration_code(&en);
    if format_or(&args.solve.model.output, Format::Csv) == Format::Json {
        let list: Vec<Value> = states
            .iter()
            .map(|s| {
                json!({
                    "energy": c2(s.energy),
                    "norm": s.norm,
                    "normalized": model.normalizable(),
                    "nodes": s.nodes,
                    "residual": schrodinger_residual(|x| model.potential_at(x), s.energy, &s.samples, &grid),
                })
            })
            .collect();
        let result = json!({ "grid": [grid.x_min, grid.x_max, grid.points], "states": list });
        return Ok(Report::json("states", &target, result, code));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["state", "energy_re", "energy_im", "x", "V_re", "V_im", "phi_re", "phi_im"])?;
    for (i, s) in states.iter().enumerate() {
        let prefix = [i.to_string(), fmt(s.energy.re), fmt(s.energy.im)];
        sample_rows(&mut w, &prefix, &grid, &s.samples, |x| model.potential_at(x), args.magnify, args.stride)?;
    }
    Ok(Report { text: String::from_utf8(w.into_inner()?)?, code })
}

pub fn plot_data(args: &PlotArgs) -> Result<Report> {
    check_stride(args.stride)?;
    json_only_csv(&args.solve.model.output)?;
    let base = model_spec(resolve(&args.solve.model)?)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["N", "state", "energy_re", "energy_im", "x", "V_re", "V_im", "phi_re", "phi_im"])?;
    let mut code = EXIT_OK;
    for &n in &args.levels {
        let spec = base.with_level(n);
        let level_args = SolveArgs { starts: args.solve.starts, rng_seed: args.solve.rng_seed, grid: args.solve.grid, model: dummy_model_args() };
        let (model, en) = solve_model(&spec, &level_args)?;
        if !model.normalizable() {
            bail!("plot-data needs a normalizable model");
        }
        if enumeration_code(&en) != EXIT_OK {
            code = EXIT_NONCONVERGENCE;
        }
        let grid = args.solve.grid.map_or_else(|| GridSpec::for_model(&model), |g| g.0);
        for (i, s) in states_for(&model, &en, &grid)?.iter().enumerate() {
            let prefix = [n.to_string(), i.to_string(), fmt(s.energy.re), fmt(s.energy.im)];
            sample_rows(&mut w, &prefix, &grid, &s.samples, |x| model.potential_at(x), args.magnify, args.stride)?;
        }
    }
    Ok(Report { text: String::from_utf8(w.into_inner()?)?, code })
}

fn json_only_csv(out: &OutputArgs) -> Result<()> {
    if format_or(out, Format::Csv) == Format::Json {
        bail!("plot-data has no json output");
    }
    Ok(())
}

fn dummy_model_args() -> ModelArgs {
    ModelArgs {
        preset: None,
        spec: None,
        params: Default::default(),
        n: None,
        output: OutputArgs { out: None, format: None },
    }
}

fn extended_target(args: &ModelArgs) -> Result<Target> {
    if args.preset.is_none() && args.spec.is_none() {
        return presets::find("x-laguerre")?.build(&args.params, 0);
    }
    resolve(args)
}

/// Residuals, orthogonality, degrees, spacing, zero check and the `l -> 0` reduction.
fn extended_checks(x: &ExtendedSpec, n_max: usize, grid: &GridSpec) -> Result<(Vec<Check>, Value)> {
    let mut checks = Vec::new();
    let (zero_free, xi) = match x.xi() {
        Ok(xi) => (true, xi),
        Err(_) => (false, qes_core::poly::laguerre(x.ell as usize, x.alpha)),
    };
    checks.push(Check::flag("xi_zero_free", zero_free));
    let xi_roots = if xi.degree() > 0 { xi.roots()? } else { Vec::new() };
    let mut states = Vec::new();
    let mut list = Vec::new();
    for n in 0..=n_max {
        let st = x.extended_state(n, grid)?;
        let r = schrodinger_residual(|t| C64::new(x.potential(t), 0.0), st.energy, &st.samples, grid);
        let deg = x.p_ln(n).degree();
        checks.push(Check::at_most(format!("schrodinger_residual[{n}]"), r, tol::SCHRODINGER));
        checks.push(Check::flag(format!("degree_p[{n}]"), deg == (x.ell as usize + n) as isize));
        if n > 0 {
            checks.push(Check::flag(format!("spacing[{n}]"), x.energy(n) - x.energy(n - 1) == 4.0));
        }
        list.push(json!({ "n": n, "energy": x.energy(n), "degree_p": deg, "residual": r, "norm": st.norm, "nodes": st.nodes }));
        states.push(st);
    }
    let gram = orthogonality(&states, grid);
    checks.push(Check::at_most("orthogonality", gram.max_off_diagonal(), tol::ORTHOGONALITY));
    let diag = max_of((0..states.len()).map(|i| (gram[(i, i)].re - 1.0).abs()));
    checks.push(Check::at_most("normalization", diag, tol::NORM));
    let undeformed = ExtendedSpec { ell: 0, alpha: x.alpha };
    let one = Poly::from_real(&[1.0]);
    let reduction = max_of((1..=100).map(|i| {
        let t = 0.05 * i as f64;
        (undeformed.potential_with(&one, t) - radial_reference(x.alpha, t)).abs() / radial_reference(x.alpha, t).abs().max(1.0)
    }));
    checks.push(Check::at_most("reduction_to_radial", reduction, tol::REDUCTION));
    let body = json!({
        "xi": poly_json(&xi),
        "xi_roots": xi_roots.iter().map(|&r| c2(r)).collect::<Vec<_>>(),
        "states": list,
        "grid": [grid.x_min, grid.x_max, grid.points],
    });
    Ok((checks, body))
}

pub fn extended(args: &ExtendedArgs) -> Result<Report> {
    check_stride(args.stride)?;
    let target = extended_target(&args.model)?;
    let Target::Extended(x) = target else {
        bail!("extended needs the x-laguerre preset or an {{\"ell\", \"alpha\"}} spec");
    };
    let grid = args.grid.map_or_else(GridSpec::half_line, |g| g.0);
    if format_or(&args.model.output, Format::Json) == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "energy", "x", "V_re", "V_im", "phi_re", "phi_im"])?;
        for n in 0..=args.n_max {
            let st = x.extended_state(n, &grid)?;
            let prefix = [n.to_string(), fmt(x.energy(n))];
            sample_rows(&mut w, &prefix, &grid, &st.samples, |t| C64::new(x.potential(t), 0.0), args.magnify, args.stride)?;
        }
        return Ok(Report { text: String::from_utf8(w.into_inner()?)?, code: EXIT_OK });
    }
    let (checks, body) = extended_checks(&x, args.n_max, &grid)?;
    Ok(checks_report("extended", &target, &checks, &[], body))
}

pub fn list_presets(out: &OutputArgs) -> Result<Report> {
    json_only(out, "presets")?;
    let list: Vec<Value> = PRESETS
        .iter()
        .map(|p| {
            let params: serde_json::Map<String, Value> =
                p.params.iter().map(|(n, d)| (n.to_string(), json!(d))).collect();
            json!({ "name": p.name, "params": params, "doc": p.doc })
        })
        .collect();
    let v = json!({ "tool": "qes", "version": VERSION, "presets": list });
    Ok(Report { text: serde_json::to_string_pretty(&v)? + "\n", code: EXIT_OK })
}
