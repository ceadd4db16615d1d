//! Command-line driver: wires JSON configs to the experiment modules and
//! emits CSV tables plus JSON summaries.
//!
//! Exit codes: 0 = success with all certifications passing, 2 = a
//! certification failed (reports are still written), 1 = usage or
//! configuration error (nothing is written).

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use traceform::ball;
use traceform::config::{ExperimentConfig, KatoMeasureConfig, KernelConfig};
use traceform::error::{Error, Result};
use traceform::graph1d;
use traceform::kato::{self, KatoVerdict};
use traceform::measures::{geometric_weights, Measure};
use traceform::potentials::{
    hardy_constant_bounds, operator_difference_check, operator_matrix, EvaluationGrid,
};
use traceform::report::{config_hash, fmt_f64, unix_timestamp, write_json_summary, CsvReport};
use traceform::spectra::{convergence_experiment, eigendecompose};
use traceform::stationary::{
    harmonicity_residual, resolvent_identity_residual, stationary_compare, stationary_solve,
};

#[derive(Parser)]
#[command(
    name = "traceform",
    version,
    about = "Exact spectra, potentials, and convergence certification for weighted Green-kernel trace forms"
)]
struct Cli {
    /// Worker threads for grid sweeps and per-term parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized certifications (never affects core results).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for report files.
    #[arg(long, global = true, default_value = "traceform-out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, energies, and Hardy bounds of one (kernel, measure) pair.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
    },
    /// Convergence experiment over a monotone measure sequence.
    Converge {
        #[arg(long)]
        config: PathBuf,
        /// Random test functions per term for the operator-difference bound.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Cross-validate the lattice trace form against the kernel matrix.
    Graph1dValidate {
        /// Geometric weight rate: a_k = rate^|k|.
        #[arg(long)]
        rate: f64,
        /// One-sided atom count (matrices are (2n+1) x (2n+1)).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Limit eigenvalue of the unit-ball spectrum for harmonic degree m.
    BallEig {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Boundary-shell potential gaps and their decay slope.
    AnnulusGap {
        /// Shell indices, comma separated (shell width 1/n).
        #[arg(long, value_delimiter = ',')]
        n: Vec<u32>,
        #[arg(long, default_value_t = 4000)]
        quadrature_points: usize,
    },
    /// Stationary solutions on concentric spheres: solve or compare.
    Stationary {
        #[arg(long)]
        config: PathBuf,
        /// Override the config alpha.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Measure admissibility via the sup-integral criterion.
    KatoCheck {
        /// Kernel name: exponential1d, newtonian, or riesz.
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Path to a measure JSON (atomic, spheres, or lebesgue).
        #[arg(long)]
        measure: PathBuf,
        /// Decreasing radius schedule, comma separated.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 0.2)]
        tol: f64,
        /// Optional volume-growth exponent to estimate c'.
        #[arg(long)]
        growth_s: Option<f64>,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        grid_lo: f64,
        #[arg(long, default_value_t = 5.0)]
        grid_hi: f64,
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("certification failed (reports written)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn canonical_hash(value: &serde_json::Value) -> String {
    config_hash(&value.to_string())
}

fn stamp(csv: &mut CsvReport, hash: &str) {
    csv.comment("generated-unix", &unix_timestamp().to_string());
    csv.comment("schema-version", traceform::report::SCHEMA_VERSION);
    csv.comment("config-hash", hash);
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Spectrum { config } => cmd_spectrum(cli, config),
        Command::Converge { config, trials } => cmd_converge(cli, config, *trials),
        Command::Graph1dValidate { rate, n, tol } => cmd_graph1d(cli, *rate, *n, *tol),
        Command::BallEig { m, tol } => cmd_ball_eig(cli, *m, *tol),
        Command::AnnulusGap {
            n,
            quadrature_points,
        } => cmd_annulus(cli, n, *quadrature_points),
        Command::Stationary { config, alpha } => cmd_stationary(cli, config, *alpha),
        Command::KatoCheck {
            kernel,
            d,
            alpha,
            measure,
            radii,
            tol,
            growth_s,
            grid_lo,
            grid_hi,
            grid_step,
        } => cmd_kato(
            cli, kernel, *d, *alpha, measure, radii, *tol, *growth_s, *grid_lo, *grid_hi,
            *grid_step,
        ),
    }
}

fn load_config(path: &Path) -> Result<(ExperimentConfig, String)> {
    let cfg = ExperimentConfig::from_path(path)?;
    let value = serde_json::to_value(&cfg).map_err(|e| Error::ConfigParse(e.to_string()))?;
    Ok((cfg, canonical_hash(&value)))
}

fn cmd_spectrum(cli: &Cli, config: &Path) -> Result<bool> {
    let (cfg, hash) = load_config(config)?;
    let kernel = cfg.kernel.build()?;
    let measure = cfg.require_measure()?.build()?;
    let grid = cfg.grid.build(kernel.dim())?.with_support(&measure)?;
    let op = operator_matrix(&kernel, &measure)?;
    let spec = eigendecompose(&op, cfg.multiplicity_tol)?;
    let (hardy_lo, hardy_hi) = hardy_constant_bounds(&kernel, &measure, &grid)?;

    let mut csv = CsvReport::new(&["k", "lambda", "energy", "group"]);
    stamp(&mut csv, &hash);
    let groups = spec.multiplicity_groups();
    for (g, range) in groups.iter().enumerate() {
        for k in range.clone() {
            csv.push_row(vec![
                k.to_string(),
                fmt_f64(spec.lambdas()[k]),
                fmt_f64(spec.energies()[k]),
                g.to_string(),
            ]);
        }
    }
    csv.write_to(&cli.out.join("spectrum.csv"))?;
    write_json_summary(
        &cli.out.join("summary.json"),
        &hash,
        serde_json::json!({
            "command": "spectrum",
            "size": spec.len(),
            "hardy_lower": hardy_lo,
            "hardy_upper": hardy_hi,
            "multiplicity_groups": groups.len(),
            "grid_step": cfg.grid.step,
        }),
    )?;
    println!(
        "spectrum: {} eigenvalues, best Hardy constant in [{}, {}]",
        spec.len(),
        fmt_f64(hardy_lo),
        fmt_f64(hardy_hi)
    );
    Ok(true)
}

fn cmd_converge(cli: &Cli, config: &Path, trials: usize) -> Result<bool> {
    let (cfg, hash) = load_config(config)?;
    let kernel = cfg.kernel.build()?;
    let seq = cfg.require_sequence()?.build()?;
    let grid = cfg.grid.build(kernel.dim())?;
    let report = convergence_experiment(&kernel, &seq, cfg.k_max, &grid, cfg.multiplicity_tol)?;
    let opdiff = operator_difference_check(&kernel, &seq, &grid, trials, cli.seed)?;

    let mut csv = CsvReport::new(&["n", "k", "E_n_k", "bound_n", "gap_k", "ratio_k"]);
    stamp(&mut csv, &hash);
    for row in &report.rows {
        for k in 0..row.energies.len() {
            csv.push_row(vec![
                row.label.to_string(),
                k.to_string(),
                fmt_f64(row.energies[k]),
                fmt_f64(row.bound),
                fmt_f64(row.gaps[k]),
                fmt_f64(row.ratios[k]),
            ]);
        }
    }
    csv.write_to(&cli.out.join("report.csv"))?;

    let mut cert = CsvReport::new(&["n", "bound", "worst_gap", "pass"]);
    stamp(&mut cert, &hash);
    for row in &opdiff {
        cert.push_row(vec![
            row.label.to_string(),
            fmt_f64(row.bound),
            fmt_f64(row.worst_gap),
            row.pass.to_string(),
        ]);
    }
    cert.write_to(&cli.out.join("operator_bound.csv"))?;

    let opdiff_pass = opdiff.iter().all(|r| r.pass);
    let identity_ok = report.summary.identity_max_err < 1e-10;
    let pass = report.summary.ground_monotone
        && report.summary.ratios_finite
        && identity_ok
        && report.summary.stable_from.is_some()
        && opdiff_pass;

    write_json_summary(
        &cli.out.join("summary.json"),
        &hash,
        serde_json::json!({
            "command": "converge",
            "limit_energies": report.limit_energies,
            "max_ratio": report.summary.max_ratio,
            "ratios_finite": report.summary.ratios_finite,
            "final_gaps": report.summary.final_gaps,
            "ground_monotone": report.summary.ground_monotone,
            "identity_max_err": report.summary.identity_max_err,
            "count_interval": [report.summary.count_interval.0, report.summary.count_interval.1],
            "limit_count": report.summary.limit_count,
            "stable_from": report.summary.stable_from,
            "operator_bound_pass": opdiff_pass,
            "grid_step": report.grid_step,
            "trials": trials,
            "seed": cli.seed,
            "pass": pass,
        }),
    )?;
    println!(
        "converge: {} terms, empirical c = {}, ground monotone = {}, dimension stable from = {:?}",
        report.rows.len(),
        fmt_f64(report.summary.max_ratio),
        report.summary.ground_monotone,
        report.summary.stable_from
    );
    Ok(pass)
}

fn cmd_graph1d(cli: &Cli, rate: f64, n: usize, tol: f64) -> Result<bool> {
    let hash = canonical_hash(&serde_json::json!({
        "command": "graph1d-validate", "rate": rate, "n": n, "tol": tol,
    }));
    let weights = geometric_weights(rate, n)?;
    let report = graph1d::cross_validate(&weights, tol)?;

    let mut csv = CsvReport::new(&["k", "energy_form", "energy_kernel", "rel_discrepancy"]);
    stamp(&mut csv, &hash);
    for k in 0..report.form_energies.len() {
        let rel = (report.form_energies[k] - report.kernel_energies[k]).abs()
            / report.kernel_energies[k].abs().max(f64::MIN_POSITIVE);
        csv.push_row(vec![
            k.to_string(),
            fmt_f64(report.form_energies[k]),
            fmt_f64(report.kernel_energies[k]),
            fmt_f64(rel),
        ]);
    }
    csv.write_to(&cli.out.join("graph1d.csv"))?;
    write_json_summary(
        &cli.out.join("summary.json"),
        &hash,
        serde_json::json!({
            "command": "graph1d-validate",
            "n": report.n,
            "max_rel_discrepancy": report.max_rel_discrepancy,
            "bare_boundary_discrepancy": report.bare_boundary_discrepancy,
            "tol": report.tol,
            "pass": report.pass,
        }),
    )?;
    println!(
        "graph1d-validate: max discrepancy {} (bare-boundary variant {}), pass = {}",
        fmt_f64(report.max_rel_discrepancy),
        fmt_f64(report.bare_boundary_discrepancy),
        report.pass
    );
    Ok(report.pass)
}

fn cmd_ball_eig(cli: &Cli, m: u32, tol: f64) -> Result<bool> {
    let hash = canonical_hash(&serde_json::json!({
        "command": "ball-eig", "m": m, "tol": tol,
    }));
    let eig = ball::ball_eigenvalue(m, tol)?;
    let mut csv = CsvReport::new(&["k", "zero"]);
    stamp(&mut csv, &hash);
    for (k, z) in eig.zeros.iter().enumerate() {
        csv.push_row(vec![(k + 1).to_string(), fmt_f64(*z)]);
    }
    csv.write_to(&cli.out.join("ball_zeros.csv"))?;
    write_json_summary(
        &cli.out.join("summary.json"),
        &hash,
        serde_json::json!({
            "command": "ball-eig",
            "m": eig.m,
            "value": eig.value,
            "tail_bound": eig.tail_bound,
            "multiplicity": eig.multiplicity,
            "zeros_used": eig.zeros.len(),
        }),
    )?;
    println!(
        "ball-eig: m = {m}, value = {} (tail bound {}), multiplicity {}",
        fmt_f64(eig.value),
        fmt_f64(eig.tail_bound),
        eig.multiplicity
    );
    Ok(true)
}

fn cmd_annulus(cli: &Cli, ns: &[u32], quadrature_points: usize) -> Result<bool> {
    let hash = canonical_hash(&serde_json::json!({
        "command": "annulus-gap", "n": ns, "quadrature_points": quadrature_points,
    }));
    let (gaps, slope) = ball::annulus_gap_schedule(ns, quadrature_points)?;
    let mut csv = CsvReport::new(&["n", "gap"]);
    stamp(&mut csv, &hash);
    for (n, g) in &gaps {
        csv.push_row(vec![n.to_string(), fmt_f64(*g)]);
    }
    csv.write_to(&cli.out.join("gap.csv"))?;

    let slope_ok = match (gaps.len() >= 3, slope) {
        (true, Some(s)) => Some((s + 1.0).abs() <= 0.1),
        _ => None,
    };
    write_json_summary(
        &cli.out.join("summary.json"),
        &hash,
        serde_json::json!({
            "command": "annulus-gap",
            "gaps": gaps.iter().map(|(n, g)| serde_json::json!({"n": n, "gap": g})).collect::<Vec<_>>(),
            "slope": slope,
            "slope_ok": slope_ok,
            "quadrature_points": quadrature_points,
        }),
    )?;
    match slope {
        Some(s) => println!(
            "annulus-gap: {} shells, log-log slope = {}",
            gaps.len(),
            fmt_f64(s)
        ),
        None => println!("annulus-gap: single shell, gap = {}", fmt_f64(gaps[0].1)),
    }
    Ok(slope_ok.unwrap_or(true))
}

fn cmd_stationary(cli: &Cli, config: &Path, alpha_override: Option<f64>) -> Result<bool> {
    let (cfg, hash) = load_config(config)?;
    let alpha = alpha_override.unwrap_or(cfg.alpha);
    let datum = cfg.data;

    if let Some(seq_cfg) = &cfg.sequence {
        let seq = seq_cfg.build()?;
        let grid_cfg = &cfg.grid;
        let radii: Vec<f64> = {
            let lo = grid_cfg.lo.max(0.0);
            let count = ((grid_cfg.hi - lo) / grid_cfg.step).floor() as usize + 1;
            (0..count).map(|i| lo + i as f64 * grid_cfg.step).collect()
        };
        let rows = stationary_compare(&seq, alpha, |_| datum, &radii)?;
        let mut csv = CsvReport::new(&["n", "sup_diff", "bound", "identity_residual", "pass"]);
        stamp(&mut csv, &hash);
        for row in &rows {
            csv.push_row(vec![
                row.label.to_string(),
                fmt_f64(row.sup_diff),
                fmt_f64(row.bound),
                fmt_f64(row.identity_residual),
                row.pass.to_string(),
            ]);
        }
        csv.write_to(&cli.out.join("stationary_compare.csv"))?;
        let pass = rows.iter().all(|r| r.pass && r.identity_residual < 1e-10);
        write_json_summary(
            &cli.out.join("summary.json"),
            &hash,
            serde_json::json!({
                "command": "stationary",
                "mode": "compare",
                "alpha": alpha,
                "terms": rows.len(),
                "pass": pass,
            }),
        )?;
        println!(
            "stationary: compared {} terms at alpha = {}, pass = {pass}",
            rows.len(),
            fmt_f64(alpha)
        );
        return Ok(pass);
    }

    let measure = cfg.require_measure()?.build()?;
    let spheres = match &measure {
        Measure::Spheres(s) => s.clone(),
        _ => {
            return Err(Error::ConfigParse(
                "stationary solve needs a sphere-family measure".into(),
            ))
        }
    };
    let data: Vec<f64> = spheres.radii().iter().map(|_| datum).collect();
    let field = stationary_solve(&spheres, alpha, &data)?;

    let lo = cfg.grid.lo.max(0.0);
    let count = ((cfg.grid.hi - lo) / cfg.grid.step).floor() as usize + 1;
    let radii: Vec<f64> = (0..count).map(|i| lo + i as f64 * cfg.grid.step).collect();
    let mut csv = CsvReport::new(&["r", "u"]);
    stamp(&mut csv, &hash);
    for &r in &radii {
        csv.push_row(vec![fmt_f64(r), fmt_f64(field.evaluate_radial(r))]);
    }
    csv.write_to(&cli.out.join("stationary_field.csv"))?;

    let mut identity_points: Vec<Vec<f64>> = radii.iter().map(|&r| vec![r, 0.0, 0.0]).collect();
    for &r in spheres.radii() {
        identity_points.push(vec![r, 0.0, 0.0]);
    }
    let identity = resolvent_identity_residual(&field, &data, &identity_points)?;
    // Harmonicity is certified where the 7-point stencil's own truncation
    // term (~3.5 h²/r⁴ relative for a B/r field) sits below the tolerance:
    // inside the innermost sphere and well outside the outermost one.
    let h = 1e-3;
    let r_min = spheres.radii().first().copied().unwrap_or(0.0);
    let r_max = spheres.radii().last().copied().unwrap_or(0.0);
    let off_support: Vec<Vec<f64>> = radii
        .iter()
        .filter(|&&r| r < r_min - 2.5 * h || r > 1.7 * r_max)
        .map(|&r| vec![r, 0.0, 0.0])
        .collect();
    let harmonicity = harmonicity_residual(&field, &off_support, h)?;
    let pass = identity < 1e-10 && harmonicity < 1e-6;
    write_json_summary(
        &cli.out.join("summary.json"),
        &hash,
        serde_json::json!({
            "command": "stationary",
            "mode": "solve",
            "alpha": alpha,
            "identity_residual": identity,
            "harmonicity_residual": harmonicity,
            "pass": pass,
        }),
    )?;
    println!(
        "stationary: identity residual {}, harmonicity residual {}, pass = {pass}",
        fmt_f64(identity),
        fmt_f64(harmonicity)
    );
    Ok(pass)
}

#[allow(clippy::too_many_arguments)]
fn cmd_kato(
    cli: &Cli,
    kernel_name: &str,
    d: Option<u32>,
    alpha: Option<f64>,
    measure_path: &Path,
    radii: &[f64],
    tol: f64,
    growth_s: Option<f64>,
    grid_lo: f64,
    grid_hi: f64,
    grid_step: f64,
) -> Result<bool> {
    let kernel_cfg = match kernel_name {
        "exponential1d" => KernelConfig::Exponential1d,
        "newtonian" => KernelConfig::Newtonian {
            d: d.ok_or_else(|| Error::ConfigParse("newtonian kernel needs --d".into()))?,
        },
        "riesz" => KernelConfig::Riesz {
            d: d.ok_or_else(|| Error::ConfigParse("riesz kernel needs --d".into()))?,
            alpha: alpha.ok_or_else(|| Error::ConfigParse("riesz kernel needs --alpha".into()))?,
        },
        other => {
            return Err(Error::ConfigParse(format!(
                "unknown kernel {other:?}; expected exponential1d, newtonian, or riesz"
            )))
        }
    };
    let kernel = kernel_cfg.build()?;
    let text = std::fs::read_to_string(measure_path)
        .map_err(|e| Error::ConfigParse(format!("{}: {e}", measure_path.display())))?;
    let measure_cfg: KatoMeasureConfig =
        serde_json::from_str(&text).map_err(|e| Error::ConfigParse(e.to_string()))?;
    let measure = measure_cfg.build()?;
    let hash = canonical_hash(&serde_json::json!({
        "command": "kato-check",
        "kernel": kernel_name, "d": d, "alpha": alpha,
        "measure": serde_json::to_value(&measure_cfg).map_err(|e| Error::ConfigParse(e.to_string()))?,
        "radii": radii, "tol": tol, "growth_s": growth_s,
    }));

    let mut grid = match kernel.dim() {
        1 => EvaluationGrid::line(grid_lo, grid_hi, grid_step)?,
        3 => EvaluationGrid::radial(grid_lo.max(0.0), grid_hi, grid_step)?,
        d => {
            return Err(Error::InvalidParameter(format!(
                "no grid layout for dimension {d}"
            )))
        }
    };
    match &measure {
        kato::KatoMeasure::Admissible(m) => {
            grid = grid.with_support(m)?;
        }
        kato::KatoMeasure::LebesgueInterval { a, b } => {
            let extras: Vec<Vec<f64>> = [0.25, 0.5, 0.75]
                .iter()
                .map(|t| vec![a + t * (b - a)])
                .collect();
            grid = grid.with_extra(&extras)?;
        }
    }

    let report = kato::kato_check(&kernel, &measure, radii, &grid, tol, growth_s)?;
    let mut csv = CsvReport::new(&["r", "sup_integral"]);
    stamp(&mut csv, &hash);
    for (r, v) in report.radii.iter().zip(&report.sup_integrals) {
        csv.push_row(vec![fmt_f64(*r), fmt_f64(*v)]);
    }
    csv.write_to(&cli.out.join("kato.csv"))?;

    let verdict = match report.verdict {
        KatoVerdict::Pass => "pass",
        KatoVerdict::Fail => "fail",
        KatoVerdict::Inconclusive => "inconclusive",
    };
    write_json_summary(
        &cli.out.join("summary.json"),
        &hash,
        serde_json::json!({
            "command": "kato-check",
            "verdict": verdict,
            "note": report.note,
            "growth": report.growth.map(|(s, c)| serde_json::json!({"s": s, "c_prime": c})),
            "tol": tol,
        }),
    )?;
    println!("kato-check: verdict = {verdict}");
    Ok(report.verdict == KatoVerdict::Pass)
}
