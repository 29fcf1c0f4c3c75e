use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use super::{
    CliError, Command, DensityMapArgs, EvolveArgs, Format, Method, Ordering, OutputArgs, ParadoxArgs, PhysicsArgs,
    RunManifest, SolveArgs, System, VerifyArgs, EXIT_CHECK_FAILED, EXIT_OK,
};
use crate::algebra::cases::IdentityCase;
use crate::gaussian::{
    constant_force_gaussian, evolve_harmonic, harmonic_gaussian, program_constant_force, program_constant_force_alt,
    run_program, ComplexGaussian, GaussianError, HarmonicOrdering, PhysicalParameters, Prefactor,
};
use crate::grid::{
    hermite_evolve, l2_distance, paradox_run, split_step, steps_for, taylor_propagate, GridError, GridWaveFunction,
    PotentialSpec, SpatialGrid,
};
use crate::solver::{compare, integrate, CaseId, CaseParameters, SolverError};

const MAX_VERIFY_ORDER: usize = 12;
const SOLVE_TOLERANCE: f64 = 1e-6;
const ROW_INTEGRAL_TOLERANCE: f64 = 1e-6;

impl From<GaussianError> for CliError {
    fn from(e: GaussianError) -> Self {
        match e {
            GaussianError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Check(e.to_string()),
        }
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        match e {
            GridError::InvalidGrid(_) | GridError::InvalidParameter(_) | GridError::Resolution { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Check(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::NonFinite(_) | SolverError::Singular(_) => CliError::Check(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub(super) fn dispatch(cmd: &Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Evolve(a) => cmd_evolve(a, stdout),
        Command::Paradox(a) => cmd_paradox(a, stdout),
        Command::Densitymap(a) => cmd_densitymap(a, stdout),
    }
}

/// Creates the output directory, if one was requested.
fn out_dir(out: &OutputArgs) -> Result<Option<&Path>, CliError> {
    match &out.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            Ok(Some(dir.as_path()))
        }
        None => Ok(None),
    }
}

fn format_of(out: &OutputArgs) -> Format {
    out.format.unwrap_or(Format::Csv)
}

fn print_json<T: Serialize>(stdout: &mut dyn Write, value: &T) -> Result<(), CliError> {
    writeln!(stdout, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn identity_case(a: &VerifyArgs) -> Result<IdentityCase, CliError> {
    let (m, omega, hbar, force) = (a.m.clone(), a.omega.clone(), a.hbar.clone(), a.force.clone());
    let case = match a.case.as_str() {
        "bch" => IdentityCase::Bch { delta: a.delta.clone() },
        "case1" => IdentityCase::Case1 { k: a.k.clone() },
        "case2-bab" => IdentityCase::Case2Bab { gamma: a.gamma.clone() },
        "case2-aba" => IdentityCase::Case2Aba { gamma: a.gamma.clone() },
        "case2-cab" => IdentityCase::Case2Cab { gamma: a.gamma.clone() },
        "case2-cab-hyperbolic" => IdentityCase::Case2CabHyperbolic { kappa: a.kappa.clone() },
        "ho-bab" => IdentityCase::HarmonicBab { m, omega, hbar },
        "ho-aba" => IdentityCase::HarmonicAba { m, omega, hbar },
        "ho-cab" => IdentityCase::HarmonicCab { m, omega, hbar },
        "force" => IdentityCase::ForcePxp { m, hbar, force },
        "force-xpp" => IdentityCase::ForceXpp { m, hbar, force },
        other => return Err(CliError::Usage(format!("unknown identity case {other:?}"))),
    };
    Ok(case)
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    if a.order > MAX_VERIFY_ORDER {
        return Err(CliError::Usage(format!("order {} exceeds the maximum {MAX_VERIFY_ORDER}", a.order)));
    }
    let case = identity_case(a)?;
    let fact = case.factorization(a.order).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = fact.verify().map_err(|e| CliError::Check(e.to_string()))?;
    let mismatch = report.first_mismatch.as_ref().map(|mm| {
        json!({
            "order": mm.order,
            "word": fact.table.format_word(&mm.word),
            "lhs": mm.lhs.to_string(),
            "rhs": mm.rhs.to_string(),
        })
    });
    let factors: Vec<&str> = fact.factors.iter().map(|f| f.label.as_str()).collect();
    let out = json!({
        "case": case.name(),
        "order": a.order,
        "params": serde_json::to_value(a)?,
        "factors": factors,
        "equal": report.equal,
        "first_mismatch": mismatch,
    });
    print_json(stdout, &out)?;
    if let Some(dir) = out_dir(&a.output)? {
        write_json(&dir.join("report.json"), &out)?;
        let mut manifest = RunManifest::new("verify", serde_json::to_value(a)?);
        manifest.outputs.push("report.json".into());
        manifest.write(dir)?;
    }
    Ok(if report.equal { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_solve(a: &SolveArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let case: CaseId = a.case.parse()?;
    let params = CaseParameters { delta: a.delta, k: a.k, gamma: a.gamma };
    let cmp = compare(case, &params, a.xi_end, a.step)?;
    let named =
        |v: &[(&'static str, f64)]| v.iter().map(|(k, x)| (k.to_string(), json!(x))).collect::<serde_json::Map<_, _>>();
    let passed = cmp.max_abs_error <= SOLVE_TOLERANCE;
    let out = json!({
        "case": case.name(),
        "params": params,
        "xi_end": a.xi_end,
        "step": a.step,
        "max_abs_error": cmp.max_abs_error,
        "per_component_error": named(&cmp.per_component),
        "values_at_end": named(&cmp.values_at_end),
        "closed_form_at_end": named(&cmp.closed_form_at_end),
        "tolerance": SOLVE_TOLERANCE,
        "passed": passed,
    });
    print_json(stdout, &out)?;
    if let Some(dir) = out_dir(&a.output)? {
        let mut manifest = RunManifest::new("solve", serde_json::to_value(a)?);
        write_json(&dir.join("report.json"), &out)?;
        manifest.outputs.push("report.json".into());
        let sol = integrate(case, &params, a.xi_end, a.step)?;
        let names = case.component_names();
        match format_of(&a.output) {
            Format::Csv => {
                let mut w =
                    csv::Writer::from_path(dir.join("trajectory.csv")).map_err(|e| CliError::Io(e.to_string()))?;
                let header: Vec<&str> = std::iter::once("xi").chain(names.iter().copied()).collect();
                w.write_record(&header).map_err(|e| CliError::Io(e.to_string()))?;
                for (xi, y) in sol.xi_grid.iter().zip(&sol.values) {
                    let row: Vec<String> =
                        std::iter::once(*xi).chain(y.values.iter().copied()).map(|v| format!("{v:.16e}")).collect();
                    w.write_record(&row).map_err(|e| CliError::Io(e.to_string()))?;
                }
                w.flush()?;
                manifest.outputs.push("trajectory.csv".into());
            }
            Format::Json => {
                let values: Vec<&[f64]> = sol.values.iter().map(|y| y.values.as_slice()).collect();
                write_json(
                    &dir.join("trajectory.json"),
                    &json!({ "components": names, "xi": sol.xi_grid, "values": values, "method": sol.method }),
                )?;
                manifest.outputs.push("trajectory.json".into());
            }
        }
        manifest.write(dir)?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn physical(p: &PhysicsArgs, system: System) -> PhysicalParameters {
    PhysicalParameters {
        m: p.m,
        omega: p.omega,
        force: if system == System::Free { 0.0 } else { p.force },
        hbar: p.hbar,
        t: 0.0,
        sigma: p.sigma,
    }
}

fn check_method(system: System, method: Method, physics: &PhysicsArgs) -> Result<(), CliError> {
    match (system, method) {
        (System::Free | System::Force, Method::Eigenstates) => {
            Err(CliError::Usage("the eigenstates method needs --system harmonic".into()))
        }
        (System::Force | System::Harmonic, Method::Taylor) => {
            Err(CliError::Usage("the taylor method is only available for --system free".into()))
        }
        (_, Method::ClosedForm) if physics.x0 != 0.0 || physics.k0 != 0.0 => {
            Err(CliError::Usage("the closed-form method needs a centred packet (x0 = k0 = 0)".into()))
        }
        _ => Ok(()),
    }
}

fn applicable(system: System, method: Method, physics: &PhysicsArgs) -> bool {
    check_method(system, method, physics).is_ok()
}

fn analytic_state(
    system: System,
    p: &PhysicalParameters,
    ordering: Ordering,
    psi0: &ComplexGaussian,
) -> Result<ComplexGaussian, CliError> {
    let psi = match system {
        System::Harmonic => {
            let ordering = match ordering {
                Ordering::Bab => HarmonicOrdering::Bab,
                Ordering::Aba => HarmonicOrdering::Aba,
                Ordering::Cab => HarmonicOrdering::Cab,
            };
            evolve_harmonic(p, ordering, psi0)?
        }
        System::Free | System::Force => {
            let prog = match ordering {
                Ordering::Aba => program_constant_force_alt(p)?,
                _ => program_constant_force(p)?,
            };
            run_program(&prog, psi0)?
        }
    };
    Ok(psi)
}

fn potential(system: System, p: &PhysicalParameters) -> PotentialSpec {
    match system {
        System::Free => PotentialSpec::free(p.m, p.hbar),
        System::Force => PotentialSpec::linear(p.force, p.m, p.hbar),
        System::Harmonic => PotentialSpec::harmonic(p.omega, p.m, p.hbar),
    }
}

/// Wave function at time `t` on `grid` by `method`.
fn evolve_one(a: &EvolveArgs, method: Method, grid: SpatialGrid, t: f64) -> Result<GridWaveFunction, CliError> {
    let base = physical(&a.physics, a.system);
    let p = base.at(t);
    let psi0 = ComplexGaussian::displaced(a.physics.sigma, a.physics.x0, a.physics.k0);
    let initial = || GridWaveFunction::from_gaussian(grid, &psi0);
    let psi = match method {
        Method::Factorized => GridWaveFunction::from_gaussian(grid, &analytic_state(a.system, &p, a.ordering, &psi0)?),
        Method::ClosedForm => {
            let g = match a.system {
                System::Harmonic => harmonic_gaussian(&p, Prefactor::Unitary)?,
                System::Free | System::Force => constant_force_gaussian(&p, Prefactor::Unitary)?,
            };
            GridWaveFunction::from_gaussian(grid, &g)
        }
        Method::SplitStep => {
            let (steps, dt) = steps_for(t, a.grid.dt);
            split_step(&initial(), &potential(a.system, &base), dt, steps)?.psi
        }
        Method::Eigenstates => hermite_evolve(&initial(), p.m, p.omega, p.hbar, t, a.n_max)?,
        Method::Taylor => taylor_propagate(&initial(), p.m, p.hbar, t, a.order)?,
    };
    if psi.values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(CliError::Check(format!("{} produced non-finite values at t = {t}", method_name(method))));
    }
    Ok(psi)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Factorized => "factorized",
        Method::ClosedForm => "closed-form",
        Method::SplitStep => "split-step",
        Method::Eigenstates => "eigenstates",
        Method::Taylor => "taylor",
    }
}

/// `min_φ ‖a − e^{iφ} b‖`, attained at `φ = arg⟨b|a⟩`.
fn l2_up_to_phase(a: &GridWaveFunction, b: &GridWaveFunction) -> Result<f64, GridError> {
    let overlap: Complex64 = b.values.iter().zip(&a.values).map(|(u, v)| u.conj() * v).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    l2_distance(a, &b.scaled(phase))
}

fn write_wave(dir: &Path, name: &str, format: Format, t: f64, psi: &GridWaveFunction) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let file = format!("{name}.csv");
            psi.write_csv(BufWriter::new(File::create(dir.join(&file))?))?;
            Ok(file)
        }
        Format::Json => {
            let file = format!("{name}.json");
            let re: Vec<f64> = psi.values.iter().map(|v| v.re).collect();
            let im: Vec<f64> = psi.values.iter().map(|v| v.im).collect();
            write_json(
                &dir.join(&file),
                &json!({ "t": t, "x": psi.grid.xs(), "re": re, "im": im, "density": psi.density() }),
            )?;
            Ok(file)
        }
    }
}

fn cmd_evolve(a: &EvolveArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    check_method(a.system, a.method, &a.physics)?;
    physical(&a.physics, a.system).validate()?;
    if a.system == System::Harmonic && !(a.physics.omega > 0.0 && a.physics.omega.is_finite()) {
        return Err(CliError::Usage("omega must be positive".into()));
    }
    if a.times.iter().any(|t| !t.is_finite()) {
        return Err(CliError::Usage("times must be finite".into()));
    }
    let grid = a.grid.grid()?;
    let dir = out_dir(&a.output)?;
    let format = format_of(&a.output);
    let mut manifest = RunManifest::new("evolve", serde_json::to_value(a)?);

    let mut methods = vec![a.method];
    if a.compare {
        for m in [Method::Factorized, Method::ClosedForm, Method::SplitStep, Method::Eigenstates] {
            if m != a.method && applicable(a.system, m, &a.physics) {
                methods.push(m);
            }
        }
    }

    let mut summary = Vec::new();
    let mut table = Vec::new();
    for (idx, &t) in a.times.iter().enumerate() {
        let mut states = Vec::with_capacity(methods.len());
        for &m in &methods {
            states.push(evolve_one(a, m, grid, t)?);
        }
        let psi = &states[0];
        let norm = psi.norm();
        let density = psi.density();
        let centre = if norm > 0.0 {
            grid.xs().iter().zip(&density).map(|(x, d)| x * d).sum::<f64>() * grid.h() / norm
        } else {
            0.0
        };
        summary.push(json!({ "t": t, "norm": norm, "center": centre }));
        if let Some(dir) = dir {
            let file = write_wave(dir, &format!("psi_{}_{idx:03}", method_name(a.method)), format, t, psi)?;
            manifest.outputs.push(file);
        }
        for i in 0..methods.len() {
            for j in i + 1..methods.len() {
                table.push(json!({
                    "t": t,
                    "a": method_name(methods[i]),
                    "b": method_name(methods[j]),
                    "l2": l2_distance(&states[i], &states[j])?,
                    "l2_up_to_phase": l2_up_to_phase(&states[i], &states[j])?,
                }));
            }
        }
    }

    let mut out = json!({
        "system": a.system,
        "method": method_name(a.method),
        "grid": grid,
        "times": summary,
    });
    if a.compare {
        out["comparison"] = json!(table);
        if let Some(dir) = dir {
            match format {
                Format::Csv => {
                    let mut w =
                        csv::Writer::from_path(dir.join("compare.csv")).map_err(|e| CliError::Io(e.to_string()))?;
                    w.write_record(["t", "a", "b", "l2", "l2_up_to_phase"]).map_err(|e| CliError::Io(e.to_string()))?;
                    for row in &table {
                        let rec = [
                            format!("{:.16e}", row["t"].as_f64().unwrap_or(f64::NAN)),
                            row["a"].as_str().unwrap_or_default().to_string(),
                            row["b"].as_str().unwrap_or_default().to_string(),
                            format!("{:.16e}", row["l2"].as_f64().unwrap_or(f64::NAN)),
                            format!("{:.16e}", row["l2_up_to_phase"].as_f64().unwrap_or(f64::NAN)),
                        ];
                        w.write_record(&rec).map_err(|e| CliError::Io(e.to_string()))?;
                    }
                    w.flush()?;
                    manifest.outputs.push("compare.csv".into());
                }
                Format::Json => {
                    write_json(&dir.join("compare.json"), &table)?;
                    manifest.outputs.push("compare.json".into());
                }
            }
        }
    }
    print_json(stdout, &out)?;
    if let Some(dir) = dir {
        manifest.write(dir)?;
    }
    Ok(EXIT_OK)
}

fn cmd_paradox(a: &ParadoxArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let grid = a.grid.grid()?;
    let (report, taylor, split) = paradox_run(a.a, &grid, a.m, a.hbar, a.t, a.order, a.grid.dt)?;
    print_json(stdout, &report)?;
    if let Some(dir) = out_dir(&a.output)? {
        let format = format_of(&a.output);
        let mut manifest = RunManifest::new("paradox", serde_json::to_value(a)?);
        write_json(&dir.join("report.json"), &report)?;
        manifest.outputs.push("report.json".into());
        manifest.outputs.push(write_wave(dir, "taylor", format, a.t, &taylor)?);
        manifest.outputs.push(write_wave(dir, "splitstep", format, a.t, &split)?);
        manifest.write(dir)?;
    }
    let ok = report.mass_outside_support_taylor == 0.0 && report.max_support_taylor <= report.support_bound;
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// `|ψ(x, t)|²` sampled on a time list and an x grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityMap {
    pub times: Vec<f64>,
    pub x_grid: Vec<f64>,
    pub densities: Vec<Vec<f64>>,
}

impl DensityMap {
    /// Trapezoid-rule integral of each row.
    pub fn row_integrals(&self) -> Vec<f64> {
        self.densities.iter().map(|row| trapezoid(&self.x_grid, row)).collect()
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1])).sum()
}

/// Density of the evolved Gaussian packet at `steps + 1` equally spaced times
/// in `[t_start, t_end]` and `nx` equally spaced points in `[x_min, x_max]`.
#[allow(clippy::too_many_arguments)]
pub fn density_map(
    system: System,
    p: &PhysicalParameters,
    x0: f64,
    k0: f64,
    t_start: f64,
    t_end: f64,
    steps: usize,
    x_min: f64,
    x_max: f64,
    nx: usize,
) -> Result<DensityMap, GaussianError> {
    if steps == 0 || nx < 2 || !(x_max > x_min) || !t_start.is_finite() || !t_end.is_finite() {
        return Err(GaussianError::InvalidParameter("density map needs steps >= 1, nx >= 2 and x_max > x_min"));
    }
    let psi0 = ComplexGaussian::displaced(p.sigma, x0, k0);
    let times: Vec<f64> = (0..=steps).map(|i| t_start + (t_end - t_start) * i as f64 / steps as f64).collect();
    let x_grid: Vec<f64> = (0..nx).map(|j| x_min + (x_max - x_min) * j as f64 / (nx - 1) as f64).collect();
    let mut densities = Vec::with_capacity(times.len());
    for &t in &times {
        let pt = p.at(t);
        let psi = match system {
            System::Harmonic => evolve_harmonic(&pt, HarmonicOrdering::Bab, &psi0)?,
            System::Force | System::Free => run_program(&program_constant_force(&pt)?, &psi0)?,
        };
        densities.push(x_grid.iter().map(|&x| psi.density(x)).collect());
    }
    Ok(DensityMap { times, x_grid, densities })
}

fn cmd_densitymap(a: &DensityMapArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    if a.system == System::Free {
        return Err(CliError::Usage("densitymap supports --system harmonic or force".into()));
    }
    let p = physical(&a.physics, a.system);
    p.validate()?;
    if a.system == System::Harmonic && !(a.physics.omega > 0.0 && a.physics.omega.is_finite()) {
        return Err(CliError::Usage("omega must be positive".into()));
    }
    let t_end = a.t_end.unwrap_or(match a.system {
        System::Harmonic => 4.0 * std::f64::consts::PI / a.physics.omega,
        _ => 2.0,
    });
    let map = density_map(a.system, &p, a.physics.x0, a.physics.k0, a.t_start, t_end, a.steps, a.x_min, a.x_max, a.nx)?;
    let integrals = map.row_integrals();
    let worst = integrals.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let negative = map.densities.iter().flatten().any(|d| *d < 0.0 || !d.is_finite());
    let passed = worst <= ROW_INTEGRAL_TOLERANCE && !negative;
    let out = json!({
        "system": a.system,
        "rows": map.times.len(),
        "columns": map.x_grid.len(),
        "t_start": a.t_start,
        "t_end": t_end,
        "max_row_integral_error": worst,
        "tolerance": ROW_INTEGRAL_TOLERANCE,
        "passed": passed,
    });
    print_json(stdout, &out)?;
    if let Some(dir) = out_dir(&a.output)? {
        let mut manifest = RunManifest::new("densitymap", serde_json::to_value(a)?);
        match format_of(&a.output) {
            Format::Csv => {
                let mut w =
                    csv::Writer::from_path(dir.join("densitymap.csv")).map_err(|e| CliError::Io(e.to_string()))?;
                let header: Vec<String> =
                    std::iter::once("t".to_string()).chain(map.x_grid.iter().map(|x| format!("{x:.16e}"))).collect();
                w.write_record(&header).map_err(|e| CliError::Io(e.to_string()))?;
                for (t, row) in map.times.iter().zip(&map.densities) {
                    let rec: Vec<String> = std::iter::once(t).chain(row).map(|v| format!("{v:.16e}")).collect();
                    w.write_record(&rec).map_err(|e| CliError::Io(e.to_string()))?;
                }
                w.flush()?;
                manifest.outputs.push("densitymap.csv".into());
            }
            Format::Json => {
                write_json(&dir.join("densitymap.json"), &map)?;
                manifest.outputs.push("densitymap.json".into());
            }
        }
        manifest.write(dir)?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}
