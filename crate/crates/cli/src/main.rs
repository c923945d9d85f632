//! `mscsim` — drop-based uplink cooperation simulator.
//!
//! Subcommands: `run` (single scenario), `sweep` (density sweep),
//! `compare` (per-variant gains over direct transmission), `validate`
//! (analytic-versus-Monte-Carlo oracle checks).
//!
//! Exit codes: 0 success; 1 usage or configuration error; 2 numerical
//! failure; 3 oracle validation failure.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use mscsim_core::config::ScenarioConfig;
use mscsim_core::error::SimError;
use mscsim_core::experiment::{
    compare_schemes, run_scenario, run_sweep, validate_analytics, SweepSpec, SweepVar,
};
use mscsim_core::report;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

/// Acceptance bar for the oracle checks, in standard-error units.
const VALIDATE_MAX_SE: f64 = 4.0;

#[derive(Parser)]
#[command(
    name = "mscsim",
    version,
    about = "Energy-efficiency simulator for cooperative uplink schemes in mobile small cells"
)]
struct Cli {
    /// Scenario config file (key = value lines); defaults apply if omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed override.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Drops override (defaults: 100 for run/compare, 20 for sweep).
    #[arg(long, global = true, value_name = "N")]
    drops: Option<u32>,

    /// Output directory for CSV and plot files.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Monte-Carlo trials for `validate`.
    #[arg(long, global = true, value_name = "N", default_value_t = 1_000_000)]
    mc_trials: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one scenario and emit results.csv (+ grouped slice).
    Run,
    /// Sweep a deployment density across a value list.
    Sweep {
        /// Swept variable: bs_density or ue_density.
        #[arg(long, value_name = "VAR")]
        var: String,
        /// Comma-separated, strictly increasing positive values (per km^2).
        #[arg(long, value_name = "A,B,C", value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Run the scenario and report percent gains relative to DT.
    Compare,
    /// Cross-check closed forms against Monte Carlo; exits 3 on >4 SE.
    Validate,
}

fn exit_code_for(e: &SimError) -> u8 {
    match e {
        SimError::Config(_) | SimError::InvalidParameter { .. } | SimError::Io(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig, SimError> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    match cli.drops {
        Some(d) => cfg.drops = d,
        None => {
            // Sweeps default to fewer drops than the headline comparison
            // unless the config file or flag says otherwise.
            if matches!(cli.cmd, Cmd::Sweep { .. }) && cli.config.is_none() {
                cfg.drops = 20;
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn ensure_out_dir(dir: &Path) -> Result<(), SimError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| SimError::Config(format!("cannot create {}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), SimError> {
    std::fs::write(path, text)
        .map_err(|e| SimError::Config(format!("cannot write {}: {e}", path.display())))
}

fn emit_plots(
    out: &Path,
    stem: &str,
    csv_file: &str,
    sweep_var: &str,
) -> Result<(), SimError> {
    let ee = report::render_plot_script(csv_file, sweep_var, "mean_ee_mbps_per_w", "ci95_ee");
    let tput = report::render_plot_script(csv_file, sweep_var, "mean_tput_mbps", "ci95_tput");
    write_text(&out.join(format!("{stem}_plot_ee.txt")), &ee)?;
    write_text(&out.join(format!("{stem}_plot_tput.txt")), &tput)?;
    Ok(())
}

fn cmd_run(cli: &Cli) -> Result<(), SimError> {
    let cfg = load_config(cli)?;
    ensure_out_dir(&cli.out)?;
    let result = run_scenario(&cfg, 0)?;
    let rows = report::rows_from_scenario(&result);
    report::write_csv(&cli.out.join("run.csv"), &rows)?;
    let grouped = report::grouped_rows_from_scenario(&result);
    if !grouped.is_empty() {
        report::write_csv(&cli.out.join("run_grouped.csv"), &grouped)?;
    }
    emit_plots(&cli.out, "run", "run.csv", "none")?;
    println!("wrote {}", cli.out.join("run.csv").display());
    for s in &result.summaries {
        println!(
            "{:<12} ee {:>10.2} Mbps/W (ci {:.2})  tput {:>7.3} Mbps (ci {:.3})  outage {:.3}  drops {}",
            s.variant.label(),
            s.ee.mean,
            s.ee.ci95,
            s.tput_mbps.mean,
            s.tput_mbps.ci95,
            s.outage_frac,
            s.drops_used
        );
    }
    Ok(())
}

fn cmd_sweep(cli: &Cli, var: &str, values: &[f64]) -> Result<(), SimError> {
    let cfg = load_config(cli)?;
    ensure_out_dir(&cli.out)?;
    let spec = SweepSpec {
        var: SweepVar::parse(var)?,
        values: values.to_vec(),
    };
    let sweep = run_sweep(&cfg, &spec)?;
    let mut failures = 0usize;
    for point in &sweep.points {
        if let Err(e) = &point.result {
            failures += 1;
            eprintln!("sweep point {} failed: {e}", point.value);
        }
    }
    let rows = report::rows_from_sweep(&sweep);
    if rows.is_empty() {
        return Err(SimError::numerical("sweep", "every sweep point failed"));
    }
    let stem = format!("sweep_{}", spec.var.as_str());
    let csv_name = format!("{stem}.csv");
    report::write_csv(&cli.out.join(&csv_name), &rows)?;
    let grouped = report::grouped_rows_from_sweep(&sweep);
    if !grouped.is_empty() {
        report::write_csv(&cli.out.join(format!("{stem}_grouped.csv")), &grouped)?;
    }
    emit_plots(&cli.out, &stem, &csv_name, spec.var.as_str())?;
    println!(
        "wrote {} ({} points, {} failed)",
        cli.out.join(&csv_name).display(),
        sweep.points.len(),
        failures
    );
    Ok(())
}

fn cmd_compare(cli: &Cli) -> Result<(), SimError> {
    let cfg = load_config(cli)?;
    ensure_out_dir(&cli.out)?;
    let (result, gains) = compare_schemes(&cfg)?;
    let rows = report::rows_from_scenario(&result);
    report::write_csv(&cli.out.join("compare.csv"), &rows)?;
    let grouped = report::grouped_rows_from_scenario(&result);
    if !grouped.is_empty() {
        report::write_csv(&cli.out.join("compare_grouped.csv"), &grouped)?;
    }
    write_text(
        &cli.out.join("gains.csv"),
        &report::render_gains_csv(&gains)?,
    )?;
    emit_plots(&cli.out, "compare", "compare.csv", "none")?;
    println!("wrote {}", cli.out.join("gains.csv").display());
    for g in &gains {
        let fmt = |v: Option<f64>| match v {
            Some(x) => format!("{x:+.1}%"),
            None => "na".to_string(),
        };
        println!(
            "{:<12} ee {:>9}  tput {:>9}",
            g.variant.label(),
            fmt(g.ee_gain_pct),
            fmt(g.tput_gain_pct)
        );
    }
    Ok(())
}

fn cmd_validate(cli: &Cli) -> Result<bool, SimError> {
    let seed = cli.seed.unwrap_or(ScenarioConfig::default().seed);
    let checks = validate_analytics(cli.mc_trials, seed)?;
    let mut all_ok = true;
    println!(
        "{:<44} {:>12} {:>12} {:>10} {:>7}",
        "check", "analytic", "monte-carlo", "se", "dev/se"
    );
    for c in &checks {
        let dev = c.deviation_se();
        let ok = dev <= VALIDATE_MAX_SE;
        all_ok &= ok;
        println!(
            "{:<44} {:>12.6} {:>12.6} {:>10.2e} {:>6.2} {}",
            c.name,
            c.analytic,
            c.mc_mean,
            c.mc_std_error,
            dev,
            if ok { "ok" } else { "FAIL" }
        );
    }
    Ok(all_ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot build thread pool: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let outcome = match &cli.cmd {
        Cmd::Run => cmd_run(&cli).map(|()| true),
        Cmd::Sweep { var, values } => {
            let (var, values) = (var.clone(), values.clone());
            cmd_sweep(&cli, &var, &values).map(|()| true)
        }
        Cmd::Compare => cmd_compare(&cli).map(|()| true),
        Cmd::Validate => cmd_validate(&cli),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed: an oracle check exceeded {VALIDATE_MAX_SE} SE");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
