use std::fs;
use std::path::Path;
use std::time::Instant;

use mlti_core::{
    classify_stability_with, min_energy_input_with, obs_gramian_finite, obs_gramian_infinite,
    observability_tensor, reach_gramian_finite, reach_gramian_infinite, reachability_tensor,
    u_eigen_with, DenseTensor, Error, MltiSystem, PairedTensor, StabilityClass, Tolerance,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::{self, SystemFile, TensorFile, TrajectoryFile, TRAJECTORY_VERSION};
use crate::report::{render, ReportFile};
use crate::{Cli, Command, GramianArgs, SimulateArgs, SteerArgs, Which};

/// Runs the command and returns the rendered document.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let tol = tolerance(cli.tol)?;
    let doc = match &cli.command {
        Command::Eig { system, eigentensors } => {
            let echo = json!({ "name": "eig", "system": path_str(system), "eigentensors": eigentensors });
            report(cli, system, echo, &tol, |sys| eig(sys, &tol, *eigentensors))?
        }
        Command::Analyze { system } => {
            let echo = json!({ "name": "analyze", "system": path_str(system) });
            report(cli, system, echo, &tol, |sys| analyze(sys, &tol))?
        }
        Command::Gramian(args) => {
            let echo = json!({
                "name": "gramian",
                "system": path_str(&args.system),
                "horizon": args.horizon,
                "infinite": args.infinite,
                "which": which_str(args.which),
            });
            report(cli, &args.system, echo, &tol, |sys| gramian(sys, args, &tol))?
        }
        Command::Steer(args) => {
            let echo = json!({
                "name": "steer",
                "system": path_str(&args.system),
                "x0": path_str(&args.x0),
                "x1": path_str(&args.x1),
                "horizon": args.horizon,
                "inputs_out": args.inputs_out.as_deref().map(path_str),
            });
            report(cli, &args.system, echo, &tol, |sys| steer(sys, args, &tol))?
        }
        Command::Simulate(args) => {
            let file = load_system(&args.system)?;
            if cli.layout_check {
                layout_report(&file, json!({ "name": "simulate", "system": path_str(&args.system) }), &tol)?
            } else {
                simulate(&file.to_system()?, args)?
            }
        }
    };
    Ok(render(&doc, cli.format))
}

fn tolerance(base: Option<f64>) -> Result<Tolerance, CliError> {
    match base {
        None => Ok(Tolerance::default()),
        Some(t) if t.is_finite() && t > 0.0 && t < 1.0 => Ok(Tolerance::with_base(t)),
        Some(t) => Err(CliError::validation(format!("--tol: {t} must lie in (0, 1)"))),
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn which_str(w: Which) -> &'static str {
    match w {
        Which::Reach => "reach",
        Which::Obs => "obs",
    }
}

fn read(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::validation(format!("{what} {}: {e}", path.display())))
}

pub fn load_system(path: &Path) -> Result<SystemFile, CliError> {
    SystemFile::parse(&read(path, "system file")?)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn load_tensor(path: &Path, what: &str) -> Result<DenseTensor, CliError> {
    TensorFile::parse(&read(path, what)?)
        .and_then(|f| f.to_tensor(what))
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn report(
    cli: &Cli,
    path: &Path,
    echo: Value,
    tol: &Tolerance,
    body: impl FnOnce(&MltiSystem) -> Result<Value, CliError>,
) -> Result<Value, CliError> {
    let file = load_system(path)?;
    if cli.layout_check {
        return layout_report(&file, echo, tol);
    }
    let start = Instant::now();
    let sys = file.to_system()?;
    let results = body(&sys)?;
    let report = ReportFile::new(echo, tol, results, start.elapsed().as_secs_f64());
    Ok(serde_json::to_value(report).expect("report serializes"))
}

fn layout_report(file: &SystemFile, echo: Value, tol: &Tolerance) -> Result<Value, CliError> {
    let operators = file.layout_check()?;
    let report = ReportFile::new(echo, tol, json!({ "layout": "ok", "operators": operators }), 0.0);
    Ok(serde_json::to_value(report).expect("report serializes"))
}

fn eigenvalue_pairs(eigs: &[mlti_core::Complex64]) -> Value {
    eigs.iter().map(|z| json!([z.re, z.im])).collect()
}

fn eig(sys: &MltiSystem, tol: &Tolerance, with_tensors: bool) -> Result<Value, CliError> {
    let spectrum = u_eigen_with(sys.a(), tol)?;
    let radius = spectrum.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut out = json!({
        "count": spectrum.eigenvalues.len(),
        "eigenvalues": eigenvalue_pairs(&spectrum.eigenvalues),
        "spectral_radius": radius,
    });
    if with_tensors {
        out["eigentensors"] = spectrum
            .eigentensors
            .iter()
            .map(|x| {
                json!({
                    "shape": x.extents(),
                    "re": x.data().iter().map(|z| z.re).collect::<Vec<_>>(),
                    "im": x.data().iter().map(|z| z.im).collect::<Vec<_>>(),
                })
            })
            .collect();
    }
    Ok(out)
}

fn extremes(w: &PairedTensor<f64>, tol: &Tolerance) -> Value {
    let (lo, hi) = w.symmetric_eigen_extremes();
    json!({
        "min_symmetric_eigenvalue": lo,
        "max_symmetric_eigenvalue": hi,
        "positive_definite": w.is_u_positive_definite_with(tol),
    })
}

fn analyze(sys: &MltiSystem, tol: &Tolerance) -> Result<Value, CliError> {
    let verdict = classify_stability_with(sys.a(), tol)?;
    let eigs = &verdict.eigenvalues.eigenvalues;
    let radius = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let n = sys.state_len();
    let reach_rank = reachability_tensor(sys)?.rank_u_with(tol);
    let obs_rank = observability_tensor(sys)?.rank_u_with(tol);

    let gramians = if verdict.class != StabilityClass::AsymptoticallyStable {
        json!({ "omitted": format!("spectral radius {radius} is not below 1; infinite-horizon Gramians do not exist") })
    } else {
        match (reach_gramian_infinite(sys, tol), obs_gramian_infinite(sys, tol)) {
            (Ok(wr), Ok(wo)) => json!({ "reach": extremes(&wr, tol), "obs": extremes(&wo, tol) }),
            (Err(e), _) | (_, Err(e)) => json!({ "omitted": e.to_string() }),
        }
    };
    let marginal: Vec<Value> = verdict
        .marginal_detail
        .iter()
        .map(|m| {
            json!({
                "eigenvalue": [m.eigenvalue.re, m.eigenvalue.im],
                "algebraic_multiplicity": m.algebraic,
                "geometric_multiplicity": m.geometric,
            })
        })
        .collect();
    Ok(json!({
        "stability": {
            "class": verdict.class.as_str(),
            "spectral_radius": radius,
            "marginal_clusters": marginal,
        },
        "eigenvalues": eigenvalue_pairs(eigs),
        "reachability": { "rank_u": reach_rank, "state_dimension": n, "reachable": reach_rank == n },
        "observability": { "rank_u": obs_rank, "state_dimension": n, "observable": obs_rank == n },
        "gramians": gramians,
    }))
}

fn gramian(sys: &MltiSystem, args: &GramianArgs, tol: &Tolerance) -> Result<Value, CliError> {
    let w = match (args.horizon, args.which) {
        (Some(t), Which::Reach) => reach_gramian_finite(sys, 0, t)?,
        (Some(t), Which::Obs) => obs_gramian_finite(sys, 0, t)?,
        (None, which) => {
            let result = match which {
                Which::Reach => reach_gramian_infinite(sys, tol),
                Which::Obs => obs_gramian_infinite(sys, tol),
            };
            result.map_err(|e| match e {
                Error::NoUniqueSolution { spectral_radius } => CliError::numerical(format!(
                    "refusing infinite-horizon Gramian: spectral radius rho(A) = {spectral_radius} is not below 1"
                )),
                other => other.into(),
            })?
        }
    };
    let mut out = extremes(&w, tol);
    out["which"] = json!(which_str(args.which));
    out["horizon"] = match args.horizon {
        Some(t) => json!(t),
        None => json!("infinite"),
    };
    out["rank_u"] = json!(w.rank_u_with(tol));
    out["gramian"] = json!({
        "pairs": w.pairs().iter().map(|&(r, c)| [r, c]).collect::<Vec<_>>(),
        "data": w.data(),
    });
    Ok(out)
}

fn steer(sys: &MltiSystem, args: &SteerArgs, tol: &Tolerance) -> Result<Value, CliError> {
    let x0 = load_tensor(&args.x0, "x0")?;
    let x1 = load_tensor(&args.x1, "x1")?;
    let inputs = min_energy_input_with(sys, &x0, &x1, args.horizon, tol).map_err(|e| match e {
        Error::Unreachable { .. } | Error::Singular { .. } => {
            let rank = reachability_tensor(sys).map(|r| r.rank_u_with(tol));
            let diag = match rank {
                Ok(r) => format!("rank_u(R) = {r} of {}", sys.state_len()),
                Err(_) => "rank_u(R) unavailable".into(),
            };
            CliError::numerical(format!(
                "{e}; horizon {} Gramian cannot be inverted ({diag})",
                args.horizon
            ))
        }
        other => other.into(),
    })?;
    let traj = sys.simulate(&x0, &inputs, args.horizon)?;
    let terminal = &traj.states[args.horizon];
    let error = terminal.sub(&x1)?.frobenius_norm();
    let energy: f64 = inputs.iter().map(|u| u.frobenius_norm().powi(2)).sum();
    let files: Vec<TensorFile> = inputs.iter().map(TensorFile::from_tensor).collect();

    let mut out = json!({
        "horizon": args.horizon,
        "terminal_error": error,
        "relative_terminal_error": error / x1.frobenius_norm().max(f64::MIN_POSITIVE),
        "input_energy": energy,
    });
    match &args.inputs_out {
        Some(path) => {
            fs::write(path, format::to_canonical(&files))
                .map_err(|e| CliError::validation(format!("inputs file {}: {e}", path.display())))?;
            out["inputs_file"] = json!(path_str(path));
        }
        None => out["inputs"] = json!(files),
    }
    Ok(out)
}

fn simulate(sys: &MltiSystem, args: &SimulateArgs) -> Result<Value, CliError> {
    let x0 = load_tensor(&args.x0, "x0")?;
    let inputs = match &args.inputs {
        Some(path) => format::parse_inputs(&read(path, "input file")?)
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?,
        None => vec![DenseTensor::zeros(sys.input_shape()); args.steps],
    };
    let traj = if sys.tucker_factors().is_some() {
        sys.simulate_factored(&x0, &inputs, args.steps)?
    } else {
        sys.simulate(&x0, &inputs, args.steps)?
    };
    let deviation = if args.verify_closed_form {
        let mut worst = 0.0f64;
        for (k, x) in traj.states.iter().enumerate() {
            let closed = sys.solution_at(&x0, &inputs, k)?;
            worst = worst.max(closed.sub(x)?.frobenius_norm() / x.frobenius_norm().max(1.0));
        }
        Some(worst)
    } else {
        None
    };
    let file = TrajectoryFile {
        version: TRAJECTORY_VERSION.into(),
        steps: args.steps,
        states: traj.states.iter().map(TensorFile::from_tensor).collect(),
        outputs: traj.outputs.iter().map(TensorFile::from_tensor).collect(),
        inputs: traj.inputs.iter().map(TensorFile::from_tensor).collect(),
        closed_form_max_deviation: deviation,
    };
    Ok(serde_json::to_value(file).expect("trajectory serializes"))
}
