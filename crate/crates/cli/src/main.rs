//! Command-line front end: reproducible experiment runs against a strict
//! JSON config with flag overrides.
//!
//! Exit codes: 0 success, 1 verdict failure (a residual above tolerance),
//! 2 configuration error.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qcondense::kernel::{self, TestFunction};
use qcondense::statistics::{self, DensityOutcome, MuBound};
use qcondense::temperature::dimension_condition;
use qcondense::{mu_solver, observables, BetaZeroLimit, CMatrix, MatrixModel};

use config::{ProfileConfig, RunConfig};

#[derive(Parser)]
#[command(
    name = "qcondense",
    version,
    about = "Condensation of q-particles under energy-dependent inverse temperatures",
    long_about = None,
    after_help = "CSV outputs start with '#' provenance lines (version, resolved config, \
                  column schema). JSON outputs embed the same fields. Relative output paths \
                  resolve against QCONDENSE_OUT_DIR when set."
)]
struct Cli {
    /// JSON config file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a config entry, e.g. --set model.stats.q=0.5
    /// or --set numerics.sweep_sides=[4,8,16]. Flags win over the file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output file (overrides output.path).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Also write an SVG heatmap (condensate-map only).
    #[arg(long, global = true)]
    heatmap: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical density rho_c^(q) for q in (0, 1] at mu = -ln q.
    CriticalDensity,
    /// Sub-critical density rho(beta, mu) for the configured statistics.
    Density,
    /// Critical chemical potential mu_q for the configured convention.
    CriticalMu,
    /// Chemical potential with Fermi density equal to numerics.rho_target.
    FermiMu,
    /// Finite-volume sweep: mu(L) and condensate estimates (CSV).
    Sweep,
    /// Local-equilibrium residuals of the configured kernel over random
    /// test pairs.
    LepCheck,
    /// Local density over a position grid (CSV).
    DensityProfile,
    /// Mollified momentum-space condensate map over (k1, k2) (CSV).
    CondensateMap,
    /// LEQ/KMS identities and Bohr-frequency ratios for a matrix model.
    FiniteDimCheck,
    /// Profile admissibility probe and dimension conditions.
    Admissibility,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match config::resolve(cli.config.as_deref(), &cli.sets) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &cli.output {
        cfg.output.path = Some(path.display().to_string());
    }
    match run(&cli, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
    }
}

type CmdResult = Result<ExitCode, Box<dyn std::error::Error>>;

/// Any error bubbling out of here is a configuration/precondition problem.
fn run(cli: &Cli, cfg: &RunConfig) -> CmdResult {
    match cli.command {
        Command::CriticalDensity => critical_density(cfg),
        Command::Density => density(cfg),
        Command::CriticalMu => critical_mu(cfg),
        Command::FermiMu => fermi_mu(cfg),
        Command::Sweep => sweep(cfg),
        Command::LepCheck => lep_check(cfg),
        Command::DensityProfile => density_profile(cfg),
        Command::CondensateMap => condensate_map(cfg, cli.heatmap.as_deref()),
        Command::FiniteDimCheck => finite_dim_check(cfg),
        Command::Admissibility => admissibility(cfg),
    }
}

fn emit_json(cfg: &RunConfig, text: String) -> std::io::Result<()> {
    report::emit(&cfg.output, &text)
}

fn density_record(cfg: &RunConfig, out: DensityOutcome) -> String {
    match out {
        DensityOutcome::Finite { value, error_bound } => report::json_record(
            cfg,
            Some(value),
            Some(error_bound),
            "finite",
            &[],
            serde_json::json!({}),
        ),
        DensityOutcome::Infinite { diagnostic } => report::json_record(
            cfg,
            None,
            None,
            "infinite",
            &[diagnostic],
            serde_json::json!({}),
        ),
    }
}

fn critical_density(cfg: &RunConfig) -> CmdResult {
    let out = statistics::critical_density(
        cfg.model.stats.q,
        &cfg.profile()?,
        &cfg.dispersion()?,
        cfg.numerics.rel_tol,
    )?;
    emit_json(cfg, density_record(cfg, out))?;
    Ok(ExitCode::SUCCESS)
}

fn density(cfg: &RunConfig) -> CmdResult {
    let out = statistics::density(
        &cfg.stats()?,
        &cfg.profile()?,
        &cfg.dispersion()?,
        cfg.numerics.rel_tol,
    )?;
    emit_json(cfg, density_record(cfg, out))?;
    Ok(ExitCode::SUCCESS)
}

fn critical_mu(cfg: &RunConfig) -> CmdResult {
    let result = statistics::critical_mu(cfg.model.stats.q, &cfg.profile()?, cfg.convention()?)?;
    let (value, verdict) = match result.bound {
        MuBound::Finite(v) => (Some(v), "finite"),
        MuBound::Unbounded => (None, "unbounded"),
    };
    let mut diagnostics = Vec::new();
    if result.no_solution {
        diagnostics.push("no root of the sup-equation within the bracket; mu_q = 0".to_string());
    }
    if let Some(limit) = result.beta_zero_limit {
        diagnostics.push(match limit {
            BetaZeroLimit::Finite(v) => format!("limsup beta(0+) probe: {v}"),
            BetaZeroLimit::Unbounded => "limsup beta(0+) probe: unbounded".to_string(),
        });
    }
    let record = report::json_record(
        cfg,
        value,
        None,
        verdict,
        &diagnostics,
        serde_json::json!({
            "noSolution": result.no_solution,
            "literatureCriterionNoSolution": result.literature_criterion_no_solution,
        }),
    );
    emit_json(cfg, record)?;
    Ok(ExitCode::SUCCESS)
}

fn fermi_mu(cfg: &RunConfig) -> CmdResult {
    let rho = cfg
        .numerics
        .rho_target
        .ok_or("fermi-mu needs numerics.rho_target")?;
    let profile = cfg.profile()?;
    let disp = cfg.dispersion()?;
    let mu = statistics::fermi_solve_mu(&profile, &disp, rho, cfg.numerics.rel_tol)?;
    let achieved = statistics::density(
        &qcondense::QStatistics::fermi(mu),
        &profile,
        &disp,
        cfg.numerics.rel_tol,
    )?
    .value()
    .unwrap_or(f64::NAN);
    let record = report::json_record(
        cfg,
        Some(mu),
        None,
        "finite",
        &[],
        serde_json::json!({ "residual": (achieved - rho).abs() }),
    );
    emit_json(cfg, record)?;
    Ok(ExitCode::SUCCESS)
}

fn sweep(cfg: &RunConfig) -> CmdResult {
    let profile = cfg.profile()?;
    let disp = cfg.dispersion()?;
    let rho_c = mu_solver::box_critical_density(&profile, &disp, cfg.numerics.rel_tol)?;
    let rho_c_value = rho_c.value();
    let rho_target = match cfg.numerics.rho_target {
        Some(r) => r,
        None => {
            2.0 * rho_c_value
                .ok_or("sweep: critical density divergent; set numerics.rho_target explicitly")?
        }
    };
    let sides: Vec<f64> = cfg
        .numerics
        .sweep_sides
        .clone()
        .unwrap_or_else(|| mu_solver::DEFAULT_SWEEP_SIDES.to_vec());
    let table = mu_solver::thermodynamic_sweep(&profile, &disp, rho_target, &sides)?;
    let rows: Vec<String> = table
        .rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{}",
                r.side,
                r.mu,
                rho_c_value.map_or("inf".to_string(), |v| v.to_string()),
                r.condensate_estimate,
                r.residual
            )
        })
        .collect();
    let notes = vec![format!("rho_target: {rho_target}")];
    let csv = report::csv_grid(
        cfg,
        "L,mu,rho_c,condensate_estimate,residual",
        &rows,
        &notes,
    );
    report::emit(&cfg.output, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn random_test_function(rng: &mut StdRng, d: usize) -> TestFunction {
    let center: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 1.6 - 0.8).collect();
    let radius = 0.7 + 0.6 * rng.random::<f64>();
    let base = TestFunction::bump(center.clone(), radius).expect("valid bump");
    match rng.random_range(0..5) {
        0 => {
            let mut powers = vec![0u32; d];
            powers[rng.random_range(0..d)] = 1;
            TestFunction::bump_times_poly(center, radius, powers).expect("valid bump")
        }
        1 => {
            let x: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 2.4 - 1.2).collect();
            base.translate(x).expect("matching dimension")
        }
        _ => base,
    }
}

fn lep_check(cfg: &RunConfig) -> CmdResult {
    let kernel = cfg.kernel()?;
    let validation = kernel::validate(&kernel);
    let mut pairs = Vec::new();
    let mut max_rel = 0.0_f64;
    let mut failures = 0usize;
    if validation.ok {
        let mut rng = StdRng::seed_from_u64(cfg.numerics.seed);
        for i in 0..cfg.numerics.pairs {
            let f = random_test_function(&mut rng, kernel.d());
            let g = random_test_function(&mut rng, kernel.d());
            let r = kernel::lep_residual(&kernel, &f, &g)?;
            let rel = if r.scale > 1e-12 {
                r.residual.norm() / r.scale
            } else {
                0.0
            };
            if rel > cfg.numerics.lep_tol {
                failures += 1;
            }
            max_rel = max_rel.max(rel);
            pairs.push(serde_json::json!({
                "pair": i,
                "residual": r.residual.norm(),
                "scale": r.scale,
                "relative": rel,
            }));
        }
    }
    let pass = validation.ok && failures == 0;
    let record = report::json_record(
        cfg,
        Some(max_rel),
        None,
        if pass { "pass" } else { "fail" },
        &validation.violations,
        serde_json::json!({
            "tolerance": cfg.numerics.lep_tol,
            "validationOk": validation.ok,
            "pairs": pairs,
        }),
    );
    emit_json(cfg, record)?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn density_profile(cfg: &RunConfig) -> CmdResult {
    let kernel = cfg.kernel()?;
    let d = kernel.d();
    let profile = observables::density_profile(&kernel)?;
    let (bulk, verdict, mut notes) = match &profile.bulk {
        observables::BulkVerdict::Finite { value, .. } => (*value, "finite", vec![]),
        observables::BulkVerdict::Infinite { diagnostic } => (
            0.0,
            "infinite_bulk",
            vec![format!(
                "bulk divergent: {diagnostic}; value column carries the condensate only"
            )],
        ),
    };
    notes.push(format!("bulk verdict: {verdict}"));
    let n = cfg.numerics.grid;
    let extent = cfg.numerics.extent;
    let law = observables::condensate_law(&kernel);
    let mut rows = Vec::with_capacity(n * n);
    for iy in 0..n {
        for ix in 0..n {
            let x = -extent + 2.0 * extent * ix as f64 / (n - 1) as f64;
            let y = -extent + 2.0 * extent * iy as f64 / (n - 1) as f64;
            let mut pos = vec![0.0; d];
            pos[0] = x;
            if d > 1 {
                pos[1] = y;
            }
            let value = bulk + law.at(&pos);
            rows.push(format!("{x},{y},{value}"));
        }
    }
    let csv = report::csv_grid(cfg, "x,y,value", &rows, &notes);
    report::emit(&cfg.output, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn condensate_map(cfg: &RunConfig, heatmap: Option<&std::path::Path>) -> CmdResult {
    let kernel = cfg.kernel()?;
    let n = cfg.numerics.grid;
    let extent = cfg.numerics.extent;
    let eps = cfg.numerics.mollifier_width;
    let mut grid = Vec::with_capacity(n * n);
    for iy in 0..n {
        for ix in 0..n {
            let k1 = -extent + 2.0 * extent * ix as f64 / (n - 1) as f64;
            let k2 = -extent + 2.0 * extent * iy as f64 / (n - 1) as f64;
            grid.push((k1, k2));
        }
    }
    let values = observables::condensate_map(&kernel, eps, &grid)?;
    let rows: Vec<String> = grid
        .iter()
        .zip(&values)
        .map(|(&(a, b), v)| format!("{a},{b},{v}"))
        .collect();
    let notes = vec![format!("mollifier width: {eps}")];
    let csv = report::csv_grid(cfg, "k1,k2,value", &rows, &notes);
    report::emit(&cfg.output, &csv)?;
    if let Some(path) = heatmap {
        let svg = report::svg_heatmap(n, extent, &values, "condensate density (momentum space)");
        std::fs::write(path, svg)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn finite_dim_check(cfg: &RunConfig) -> CmdResult {
    let profile = cfg.profile()?;
    let mut rng = StdRng::seed_from_u64(cfg.numerics.seed);
    let eigenvalues = match &cfg.numerics.eigenvalues {
        Some(list) => list.clone(),
        None => {
            let n = cfg.numerics.matrix_n;
            let mut e = 0.1 + rng.random::<f64>() * 0.3;
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push(e);
                e += 0.05 + rng.random::<f64>() * 0.7;
            }
            v
        }
    };
    let model = MatrixModel::new(eigenvalues.clone(), profile)?;
    let n = model.n();
    let mut max_leq = 0.0_f64;
    let mut max_kms = 0.0_f64;
    let mut max_ratio_dev = 0.0_f64;
    for _ in 0..cfg.numerics.pairs {
        let a = CMatrix::random(n, &mut rng);
        let b = CMatrix::random(n, &mut rng);
        for t in [0.0, 0.3, 1.7, -0.9] {
            for i in 0..n {
                for j in 0..n {
                    max_leq = max_leq.max(model.leq_residual(&a, i, j, t)?.norm());
                }
            }
            max_kms = max_kms.max(model.kms_residual(&a, &b, t)?.norm());
        }
        for line in model.bohr_measures(&a)? {
            if line.nu_weight > 0.0 {
                let ratio = line.mu_weight / line.nu_weight;
                let want = (-line.frequency).exp();
                max_ratio_dev = max_ratio_dev.max((ratio - want).abs() / want.max(1e-300));
            }
        }
    }
    let tol = cfg.numerics.finite_dim_tol;
    let pass = max_leq <= tol && max_kms <= tol && max_ratio_dev <= tol;
    let record = report::json_record(
        cfg,
        Some(max_leq.max(max_kms).max(max_ratio_dev)),
        None,
        if pass { "pass" } else { "fail" },
        &[],
        serde_json::json!({
            "eigenvalues": eigenvalues,
            "maxLeqResidual": max_leq,
            "maxKmsResidual": max_kms,
            "maxBohrRatioDeviation": max_ratio_dev,
            "tolerance": tol,
        }),
    );
    emit_json(cfg, record)?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn admissibility(cfg: &RunConfig) -> CmdResult {
    let profile = cfg.profile()?;
    let disp = cfg.dispersion()?;
    let probe = profile.check_admissibility(&disp, disp.d)?;
    let dimension = match cfg.model.profile {
        ProfileConfig::Constant { .. } => disp
            .power_exponent()
            .map(|s| dimension_condition(s, disp.d, 0.0, f64::INFINITY)),
        ProfileConfig::PowerLog { alpha0, alpha_inf } => disp
            .power_exponent()
            .map(|s| dimension_condition(s, disp.d, alpha0, alpha_inf)),
        ProfileConfig::ZeroAt { .. } => None,
    };
    let verdict = if probe.all_ok() {
        "admissible"
    } else {
        "inadmissible"
    };
    let record = report::json_record(
        cfg,
        None,
        None,
        verdict,
        &probe.diagnostics,
        serde_json::json!({
            "continuityOk": probe.continuity_ok,
            "infZeroOk": probe.inf_zero_ok,
            "zeroSetFinite": probe.zero_set_finite,
            "tailIntegrable": probe.tail_integrable,
            "dimensionCondition": dimension.map(|v| serde_json::json!({
                "convergesAtZero": v.converges_at_zero,
                "convergesAtInfinity": v.converges_at_infinity,
                "condensationPossible": v.condensation_possible,
            })),
        }),
    );
    emit_json(cfg, record)?;
    Ok(ExitCode::SUCCESS)
}
