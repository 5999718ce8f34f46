use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use kraus_landscape::analysis::{
    classify_critical, level_transfer, levelset_connect_with, multi_start_from, multi_start_points, optimize,
    Classification, Direction, LevelSetConfig, PathStatus,
};
use kraus_landscape::io;
use kraus_landscape::landscape::{
    classify_eigenvalues, critical_point, hessian_eigenvalues, hessian_form, lagrange_certificate, objective_diag,
    objective_frame, objective_uv, objective_via_trace, predicted_morse, predicted_value, riemannian_gradient, to_diag,
};
use kraus_landscape::linalg::C64;
use kraus_landscape::qcore::{
    bloch_to_density, completeness_residual, density_to_bloch, dilate, objective_trace, reduce_target,
    verify_dilation,
};
use kraus_landscape::stiefel::{
    derive_seed, kraus_to_point, orthonormal_tangent_basis, random_kraus_point, random_kraus_set, random_point,
    retract, TangentVector,
};
use kraus_landscape::{
    BlochVector, CriticalManifoldId, KrausPoint, LandscapeParams, ManifoldTag, MorseSignature, Retraction,
};

use crate::args::{Cli, Command, Format, GlobalArgs};
use crate::config::{self, parse_floats, Tolerances};
use crate::output::{emit, json as to_json, num, Csv};
use crate::Failure;

pub fn run(cli: Cli) -> Result<(), Failure> {
    let tol = Tolerances::parse(&cli.global.tol)?;
    let g = &cli.global;
    match &cli.command {
        Command::Evaluate { kraus, theta } => evaluate(g, &tol, kraus, theta.as_deref()),
        Command::Optimize { direction, starts, start_file, trajectory, retraction } => {
            optimize_cmd(g, &tol, direction, *starts, start_file.as_deref(), trajectory.as_deref(), retraction)
        }
        Command::Morse { manifold, z } => morse(g, &tol, manifold, z.as_deref()),
        Command::Levelset { mu } => levelset(g, &tol, *mu),
        Command::Dilate { kraus, random } => dilate_cmd(g, &tol, kraus.as_deref(), *random),
        Command::Scan { base, range1, range2, samples1, samples2 } => {
            scan(g, base, range1, range2, *samples1, *samples2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn format_or(g: &GlobalArgs, default: Format) -> Format {
    g.format.unwrap_or(default)
}

fn quantity_csv(rows: &[(&str, f64)]) -> String {
    let mut csv = Csv::new(&["quantity", "value"]);
    for (k, v) in rows {
        csv.row([k.to_string(), num(*v)]);
    }
    csv.finish()
}

fn evaluate(g: &GlobalArgs, tol: &Tolerances, kraus: &Path, theta: Option<&Path>) -> Result<(), Failure> {
    let params = config::params(g)?;
    let k = io::kraus_set_from_json_unchecked(&read(kraus)?)?;
    let residual = completeness_residual(&k);
    if residual > tol.completeness {
        return Err(Failure::input(format!(
            "infeasible Kraus set: completeness residual {residual:e} exceeds {:e}",
            tol.completeness
        )));
    }
    let k = k.tolerance(tol.completeness);
    let p = kraus_to_point(&k)?;
    let uv = objective_uv(&p, &params);
    let trace = objective_via_trace(&p, &params)?;
    let diag = objective_diag(&to_diag(&p, &params), &params);

    let mut rows = vec![
        ("completeness_residual", residual),
        ("j_uv", uv),
        ("j_trace", trace),
        ("j_diag", diag),
        ("residual_uv_trace", (uv - trace).abs()),
        ("residual_uv_diag", (uv - diag).abs()),
    ];
    let mut report = json!({
        "w": params.w.components(),
        "m": k.m(),
        "completeness_residual": residual,
        "objective": { "uv": uv, "trace": trace, "diag": diag },
        "residuals": { "uv_trace": (uv - trace).abs(), "uv_diag": (uv - diag).abs() },
    });
    if let Some(path) = theta {
        let target = io::target_from_json(&read(path)?)?;
        let rho = bloch_to_density(&params.w);
        let direct = objective_trace(&k, &rho, &target)?;
        let red = reduce_target(&target);
        let (k2, rho2) = red.rotate_problem(&k, &rho)?;
        let rotated = LandscapeParams::new(density_to_bloch(&rho2));
        let reduced = red.scale * objective_uv(&kraus_to_point(&k2)?, &rotated) + red.offset;
        report["target"] = json!({
            "direct": direct,
            "reduced": reduced,
            "scale": red.scale,
            "offset": red.offset,
            "flat": red.is_flat(),
            "residual": (direct - reduced).abs(),
        });
        rows.extend([("j_target_direct", direct), ("j_target_reduced", reduced), ("residual_target", (direct - reduced).abs())]);
    }
    let text = match format_or(g, Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => quantity_csv(&rows),
    };
    emit(g.out.as_deref(), &text)
}

/// Start files hold a point, a list of points, or a report with a "point" field.
fn load_starts(path: &Path) -> Result<Vec<KrausPoint>, Failure> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let starts = match v.get("point") {
        Some(p) => vec![io::point_from_json(&p.to_string())?],
        None => io::points_from_json(&text)?,
    };
    if starts.is_empty() {
        return Err(Failure::input("start file holds no points"));
    }
    Ok(starts)
}

fn trajectory_path(g: &GlobalArgs, explicit: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| {
        g.out.as_ref().map(|o| {
            let mut s = o.as_os_str().to_owned();
            s.push(".trajectory.csv");
            PathBuf::from(s)
        })
    })
}

fn optimize_cmd(
    g: &GlobalArgs,
    tol: &Tolerances,
    direction: &str,
    starts: usize,
    start_file: Option<&Path>,
    trajectory: Option<&Path>,
    retraction: &str,
) -> Result<(), Failure> {
    let params = config::params(g)?;
    let mut cfg = tol.optimizer;
    cfg.direction = direction.parse::<Direction>()?;
    cfg.retraction = if retraction == "polar" { Retraction::Polar } else { Retraction::Qr };
    let (points, seed) = match start_file {
        Some(path) => (load_starts(path)?, g.seed.unwrap_or(0)),
        None => {
            let seed = config::seed(g, "optimize")?;
            if starts == 0 {
                return Err(Failure::input("--starts must be at least 1"));
            }
            (multi_start_points(starts, seed), seed)
        }
    };
    let report = multi_start_from(&points, &params, seed, &cfg)?;
    let best = optimize(&points[report.best_start], &params, &cfg)?;

    let text = match format_or(g, Format::Json) {
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("report serializes");
            v["w"] = json!(params.w.components());
            v["config"] = serde_json::to_value(cfg).expect("config serializes");
            v["best_final_point"] = io::point_to_json_value(&best.last().point);
            to_json(&v)
        }
        Format::Csv => {
            let mut csv = Csv::new(&["start", "final_j", "gap", "termination", "iterations"]);
            let target = cfg.direction.global_value();
            for (i, v) in report.final_values.iter().enumerate() {
                let term = serde_json::to_value(report.terminations[i]).expect("serializes");
                csv.row([
                    i.to_string(),
                    num(*v),
                    num((v - target).abs()),
                    term.as_str().unwrap_or_default().to_string(),
                    report.iterations[i].to_string(),
                ]);
            }
            csv.finish()
        }
    };
    emit(g.out.as_deref(), &text)?;

    if let Some(path) = trajectory_path(g, trajectory) {
        let mut csv = Csv::new(&["iteration", "j", "grad_norm"]);
        for (i, it) in best.iterates.iter().enumerate() {
            csv.row([i.to_string(), num(it.value), num(it.grad_norm)]);
        }
        emit(Some(&path), &csv.finish())?;
    }
    Ok(())
}

fn manifold_id(name: &str, z: Option<&str>) -> Result<CriticalManifoldId, Failure> {
    let tag: ManifoldTag = name.parse()?;
    match (tag, z) {
        (ManifoldTag::MixedSaddle, Some(z)) => {
            let [re, im] = parse_floats::<2>(z, "--z")?;
            Ok(CriticalManifoldId::mixed(Some(C64::new(re, im))))
        }
        (_, Some(_)) => Err(Failure::input("--z applies only to the mixed saddle")),
        (tag, None) => Ok(CriticalManifoldId::new(tag)),
    }
}

fn signature_json(s: &MorseSignature) -> Value {
    json!({ "nu_plus": s.nu_plus, "nu_minus": s.nu_minus, "nu_zero": s.nu_zero })
}

fn morse(g: &GlobalArgs, tol: &Tolerances, manifold: &str, z: Option<&str>) -> Result<(), Failure> {
    let params = config::params(g)?;
    let id = manifold_id(manifold, z)?;
    id.check_legal(&params)?;
    let seed = config::seed(g, "morse")?;
    let p = critical_point(&id, &params, seed)?;

    let basis = orthonormal_tangent_basis(&p.to_stiefel());
    let eigs = hessian_eigenvalues(&hessian_form(&p, &params, &basis)?);
    let computed = classify_eigenvalues(&eigs, tol.zero_tau);
    let predicted = if id.tag.is_saddle() { Some(predicted_morse(&id, &params)?) } else { None };
    // extrema have no fixed signature across cases; check semidefiniteness instead
    let pass = match (id.tag, predicted) {
        (_, Some(want)) => computed == want,
        (ManifoldTag::GlobalMin, None) => computed.nu_minus == 0,
        (_, None) => computed.nu_plus == 0,
    };
    let value = objective_uv(&p, &params);
    let cert = lagrange_certificate(&p, &params);

    let text = match format_or(g, Format::Json) {
        Format::Json => to_json(&json!({
            "manifold": id.tag.name(),
            "z": id.z.map(|z| [z.re, z.im]),
            "w": params.w.components(),
            "seed": seed,
            "value": value,
            "predicted_value": predicted_value(&id, &params)?,
            "gradient_norm": riemannian_gradient(&p, &params).norm(),
            "computed": signature_json(&computed),
            "predicted": predicted.as_ref().map(signature_json),
            "zero_tau": tol.zero_tau,
            "eigenvalues": eigs,
            "lagrange": {
                "eta1": cert.eta1,
                "eta2": cert.eta2,
                "eta3": [cert.eta3.re, cert.eta3.im],
                "stationarity_residual": cert.stationarity_residual,
                "constraint_residual": cert.constraint_residual,
            },
            "pass": pass,
            "point": io::point_to_json_value(&p),
        })),
        Format::Csv => {
            let mut csv = Csv::new(&["index", "eigenvalue"]);
            for (i, e) in eigs.iter().enumerate() {
                csv.row([i.to_string(), num(*e)]);
            }
            csv.finish()
        }
    };
    emit(g.out.as_deref(), &text)?;
    let want = predicted.map(|s| s.to_string()).unwrap_or_else(|| "semidefinite".into());
    eprintln!("{}: computed {computed}, predicted {want}: {}", id.tag.name(), if pass { "PASS" } else { "FAIL" });
    if !pass {
        return Err(Failure::verification(format!("Morse signature {computed} does not match {want}")));
    }
    Ok(())
}

fn levelset(g: &GlobalArgs, tol: &Tolerances, mu: f64) -> Result<(), Failure> {
    let params = config::params(g)?;
    let seed = config::seed(g, "levelset")?;
    let cfg = LevelSetConfig { seed, ..tol.levelset };
    kraus_landscape::analysis::check_level(mu, &params, cfg.guard_band)?;
    let endpoint = |slot: u64| -> Result<KrausPoint, Failure> {
        let s = derive_seed(seed, slot);
        if mu == 0.0 || mu == 1.0 {
            let tag = if mu == 1.0 { ManifoldTag::GlobalMax } else { ManifoldTag::GlobalMin };
            Ok(critical_point(&CriticalManifoldId::new(tag), &params, s)?)
        } else {
            Ok(level_transfer(&random_kraus_point(s), &params, mu)?)
        }
    };
    let (a, b) = (endpoint(0)?, endpoint(1)?);
    let path = levelset_connect_with(&a, &b, &params, mu, &cfg)?;
    let status = if path.status == PathStatus::Connected { "connected" } else { "failed" };

    let rows: Vec<(f64, f64, f64)> = path
        .waypoints
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let j = objective_uv(p, &params);
            let step = if i == 0 { 0.0 } else { path.waypoints[i - 1].distance(p) };
            (j, (j - mu).abs(), step)
        })
        .collect();
    let text = match format_or(g, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(&["index", "j", "deviation", "chordal_step"]);
            for (i, (j, d, s)) in rows.iter().enumerate() {
                csv.row([i.to_string(), num(*j), num(*d), num(*s)]);
            }
            csv.row([
                "status".into(),
                status.into(),
                num(path.max_value_deviation),
                num(path.max_step_length),
            ]);
            csv.finish()
        }
        Format::Json => to_json(&json!({
            "mu": mu,
            "w": params.w.components(),
            "seed": seed,
            "status": status,
            "waypoints": path.waypoints.len(),
            "max_value_deviation": path.max_value_deviation,
            "max_step_length": path.max_step_length,
            "max_constraint_residual": path.max_constraint_residual,
            "diagnostics": path.diagnostics,
            "rows": rows.iter().map(|(j, d, s)| json!({ "j": j, "deviation": d, "chordal_step": s })).collect::<Vec<_>>(),
        })),
    };
    emit(g.out.as_deref(), &text)?;
    match path.status {
        PathStatus::Connected => Ok(()),
        PathStatus::Failed => Err(Failure::tracer(format!(
            "level-set tracer failed: {}",
            path.diagnostics.unwrap_or_default()
        ))),
    }
}

fn test_states() -> Vec<kraus_landscape::DensityMatrix> {
    [(0.0, 0.0, 1.0), (0.0, 0.0, -1.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 0.0), (0.2, 0.4, 0.2)]
        .iter()
        .map(|&(a, b, c)| bloch_to_density(&BlochVector::new(a, b, c).expect("inside the ball")))
        .collect()
}

fn dilate_cmd(g: &GlobalArgs, tol: &Tolerances, kraus: Option<&Path>, random: Option<usize>) -> Result<(), Failure> {
    let k = match (kraus, random) {
        (Some(path), _) => {
            let k = io::kraus_set_from_json_unchecked(&read(path)?)?;
            let residual = completeness_residual(&k);
            if residual > tol.completeness {
                return Err(Failure::input(format!("infeasible Kraus set: completeness residual {residual:e}")));
            }
            k.tolerance(tol.completeness)
        }
        (None, Some(m)) => random_kraus_set(m, config::seed(g, "dilate --random")?)?,
        (None, None) => return Err(Failure::input("either --kraus or --random is required")),
    };
    let u = dilate(&k)?;
    let unitarity = u.unitarity_residual();
    let mut partial: f64 = 0.0;
    for rho in test_states() {
        partial = partial.max(verify_dilation(&u, &k, &rho)?);
    }
    let text = match format_or(g, Format::Json) {
        Format::Json => {
            let unitary: Value = serde_json::from_str(&io::unitary_to_json(&u)).expect("own output parses");
            to_json(&json!({
                "unitary": unitary,
                "unitarity_residual": unitarity,
                "partial_trace_residual": partial,
            }))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["row", "col", "re", "im"]);
            let e = u.entries();
            for r in 0..u.dim() {
                for c in 0..u.dim() {
                    csv.row([r.to_string(), c.to_string(), num(e[(r, c)].re), num(e[(r, c)].im)]);
                }
            }
            csv.finish()
        }
    };
    emit(g.out.as_deref(), &text)?;
    if unitarity >= tol.unitarity || partial >= tol.partial_trace {
        return Err(Failure::verification(format!(
            "dilation check failed: unitarity {unitarity:e}, partial trace {partial:e}"
        )));
    }
    Ok(())
}

/// Two seeded, real-orthonormal tangent directions at the base point.
fn slice_directions(x: &kraus_landscape::StiefelPoint, seed: u64) -> Result<(TangentVector, TangentVector), Failure> {
    let basis = orthonormal_tangent_basis(x);
    let coeffs = random_point(basis.len(), 2, seed)?;
    let column = |j: usize| -> Vec<f64> { (0..basis.len()).map(|i| coeffs.frame()[(i, j)].re).collect() };
    let t1 = basis.combine(&column(0));
    let t1 = t1.scaled(1.0 / t1.norm());
    let raw = basis.combine(&column(1));
    let mut t2 = raw.clone();
    t2.delta -= &t1.delta * C64::from(t1.dot(&raw));
    let n = t2.norm();
    Ok((t1, t2.scaled(1.0 / n)))
}

fn grid(range: &str, samples: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let [lo, hi] = parse_floats::<2>(range, what)?;
    if samples < 2 {
        return Err(Failure::input(format!("{what}: at least 2 samples are required")));
    }
    if lo > hi {
        return Err(Failure::input(format!("{what}: lower bound exceeds upper bound")));
    }
    Ok((0..samples).map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64).collect())
}

fn scan(g: &GlobalArgs, base: &str, range1: &str, range2: &str, samples1: usize, samples2: usize) -> Result<(), Failure> {
    let params = config::params(g)?;
    let seed = config::seed(g, "scan")?;
    let s1 = grid(range1, samples1, "--range1")?;
    let s2 = grid(range2, samples2, "--range2")?;
    let p = if base == "random" {
        random_kraus_point(derive_seed(seed, 0))
    } else {
        critical_point(&manifold_id(base, None)?, &params, seed)?
    };
    let x = p.to_stiefel();
    let (t1, t2) = slice_directions(&x, derive_seed(seed, 1))?;

    let mut rows = Vec::with_capacity(s1.len() * s2.len());
    for &a in &s1 {
        for &b in &s2 {
            let delta = &t1.delta * C64::from(a) + &t2.delta * C64::from(b);
            let y = retract(&x, &TangentVector { base: x.clone(), delta }, Retraction::Qr)?;
            rows.push((a, b, objective_frame(y.frame(), &params)));
        }
    }
    let text = match format_or(g, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(&["s1", "s2", "j"]);
            for (a, b, j) in &rows {
                csv.row([num(*a), num(*b), num(*j)]);
            }
            csv.finish()
        }
        Format::Json => {
            let base_class = match classify_critical(&p, &params) {
                Ok(Classification::Critical { id, .. }) => json!(id.tag.name()),
                _ => Value::Null,
            };
            to_json(&json!({
                "w": params.w.components(),
                "seed": seed,
                "base": base,
                "base_classification": base_class,
                "base_point": io::point_to_json_value(&p),
                "rows": rows.iter().map(|(a, b, j)| [*a, *b, *j]).collect::<Vec<_>>(),
            }))
        }
    };
    emit(g.out.as_deref(), &text)
}
