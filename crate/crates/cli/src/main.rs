//! `verify`: run the verification suites against a model file and emit a
//! machine-readable report.
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed,
//! 2 configuration or schema error, 3 internal error.

use clap::Parser;
use ioa_core::branched::path::{build_gamma, build_sigma, PathParams};
use ioa_core::rational::parse_rational;
use ioa_core::suites::{run, Mode, RunConfig, RunError, SuiteName};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "verify",
    version,
    about = "Exact verification of delta identities, branch relations, class-matrix equations and the six-order Jacobi checks on desk-scale models"
)]
struct Args {
    /// Comma-separated list: formal,paths,branches,moore-seiberg,jacobi,s3
    #[arg(long, default_value = "formal")]
    suites: String,

    /// Model configuration file (JSON)
    #[arg(long)]
    model: Option<PathBuf>,

    /// Truncation / window order for series checks
    #[arg(long, default_value_t = 8)]
    cutoff: i64,

    /// Arithmetic mode
    #[arg(long, default_value = "exact", value_parser = ["exact", "float"])]
    mode: String,

    /// Comparison tolerance in float mode
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,

    /// Seed for the randomized parts of the suites
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Write the JSON report here (stdout gets a line per check either way)
    #[arg(long)]
    report: Option<PathBuf>,

    /// Loop radii a0,b0,a1,b1,a2,b2,a3,b3 (rationals)
    #[arg(long, value_name = "LIST")]
    path_params: Option<String>,

    /// Export sampled loop coordinates as CSV files into this directory
    #[arg(long, value_name = "DIR")]
    dump_paths: Option<PathBuf>,

    /// Include per-suite timing markers in the report (not byte-stable)
    #[arg(long, default_value_t = false)]
    timings: bool,
}

fn parse_params(text: &str) -> Result<PathParams, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 8 {
        return Err(format!(
            "expected 8 comma-separated values for --path-params, got {}",
            parts.len()
        ));
    }
    let mut vals = Vec::with_capacity(8);
    for p in parts {
        vals.push(parse_rational(p)?);
    }
    PathParams::new([
        vals[0].clone(),
        vals[1].clone(),
        vals[2].clone(),
        vals[3].clone(),
        vals[4].clone(),
        vals[5].clone(),
        vals[6].clone(),
        vals[7].clone(),
    ])
    .map_err(|e| e.to_string())
}

fn dump_paths(dir: &PathBuf, params: &PathParams) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    for (name, built) in [("gamma", build_gamma(params)), ("sigma", build_sigma(params))] {
        let path = built.map_err(|e| e.to_string())?;
        let mut file = std::fs::File::create(dir.join(format!("{name}.csv")))
            .map_err(|e| e.to_string())?;
        writeln!(file, "t,re_z1,im_z1,re_z2,im_z2").map_err(|e| e.to_string())?;
        for (t, z1, z2) in path.sample_table(256) {
            writeln!(file, "{t},{},{},{},{}", z1.re, z1.im, z2.re, z2.im)
                .map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();

    let mut suites = Vec::new();
    for s in args.suites.split(',') {
        match SuiteName::parse(s) {
            Ok(name) => suites.push(name),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    let path_params = match &args.path_params {
        None => PathParams::default_params(),
        Some(text) => match parse_params(text) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    };
    if let Some(dir) = &args.dump_paths {
        if let Err(e) = dump_paths(dir, &path_params) {
            eprintln!("error: failed to export path samples: {e}");
            return ExitCode::from(2);
        }
    }
    let model_json = match &args.model {
        None => None,
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => {
                eprintln!("error: cannot read model file {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
    };

    let cfg = RunConfig {
        suites,
        model_json,
        model_path: args.model.as_ref().map(|p| p.display().to_string()),
        cutoff: args.cutoff,
        mode: if args.mode == "float" {
            Mode::Float
        } else {
            Mode::Exact
        },
        tolerance: args.tolerance,
        seed: args.seed,
        path_params,
        timings: args.timings,
    };

    let outcome = std::panic::catch_unwind(|| run(&cfg));
    let report = match outcome {
        Ok(Ok(r)) => r,
        Ok(Err(RunError::Config(msg))) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Ok(Err(RunError::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            return ExitCode::from(3);
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            eprintln!("internal error: {msg}");
            return ExitCode::from(3);
        }
    };

    for check in &report.checks {
        println!("[{}] {}: {}", check.status.to_uppercase(), check.suite, check.name);
    }
    println!(
        "{} checks: {} passed, {} failed, {} errored",
        report.summary.total, report.summary.pass, report.summary.fail, report.summary.error
    );

    let json = report.to_json_string();
    match &args.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write report to {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => println!("{json}"),
    }

    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
