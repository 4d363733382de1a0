//! Runs a job and collects its console output and files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use curvsieve_core::evolution::{certify_monotone, velocity_from_expr, MonotoneVerdict, Velocity};
use curvsieve_core::flowsim::{
    constants_for, rows_to_csv, run_flow, run_rescaled, FlowOptions, Stop,
};
use curvsieve_core::ratpoly::{format_rational, Poly2, RatFn2};
use curvsieve_core::sieve::{run_sieve, STEPS};

use crate::config::{Job, JobConfig};
use crate::expr::Expr;
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub path: PathBuf,
    pub contents: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub artifacts: Vec<Artifact>,
}

fn ratfn(flag: &str, e: &Expr) -> Result<RatFn2, CliError> {
    e.elaborate().map_err(|err| CliError::Input(format!("--{flag}: {err}")))
}

fn velocity(e: &Expr) -> Result<Velocity, CliError> {
    let f = ratfn("velocity", e)?;
    velocity_from_expr(&f).map_err(|err| CliError::Input(format!("--velocity: {err}")))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

/// JSON sidecar next to a CSV file.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    if csv.extension().is_some_and(|e| e == "json") {
        let mut s = csv.as_os_str().to_owned();
        s.push(".meta.json");
        PathBuf::from(s)
    } else {
        csv.with_extension("json")
    }
}

/// Runs the job without touching the file system.
pub fn dispatch(config: &JobConfig) -> Result<Outcome, CliError> {
    let mut out = String::new();
    let mut artifacts = Vec::new();
    let mut status = EXIT_OK;
    match &config.job {
        Job::Sieve {
            velocity: v,
            space,
            certify,
        } => {
            let v = velocity(v)?;
            let run = run_sieve(&v, space, *certify, config.threads)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let width = run.reports.iter().map(|r| r.candidate.len()).max().unwrap_or(9).max(9);
            writeln!(out, "{:<width$}  {:<9}  certified", "candidate", "last step").unwrap();
            for r in &run.reports {
                let cert = match (&r.certificate, r.survivor) {
                    (Some(c), _) if c.verdict.is_certified() => "yes",
                    (Some(_), _) => "no",
                    (None, true) => "not run",
                    (None, false) => "-",
                };
                writeln!(out, "{:<width$}  {:<9}  {cert}", r.candidate, r.last_step_passed).unwrap();
            }
            let counts = run.pass_counts();
            let line: Vec<String> = STEPS.iter().map(|s| format!("{s}:{}", counts[*s])).collect();
            writeln!(out, "candidates {}, passing per step {}", run.reports.len(), line.join(" ")).unwrap();
            let certified = run.reports.iter().filter(|r| r.is_certified()).count();
            writeln!(out, "survivors {}, certified {certified}", run.survivors().count()).unwrap();
            for (step, rate) in run.stats.throughput() {
                writeln!(out, "throughput {step}: {rate:.0} tests/s").unwrap();
            }
            if let Some(p) = &config.out {
                artifacts.push(Artifact {
                    path: p.clone(),
                    contents: json(&run.reports),
                });
            }
        }
        Job::Certify {
            velocity: v,
            quantity,
        } => {
            let v = velocity(v)?;
            let w = ratfn("quantity", quantity)?;
            let cert = certify_monotone(&v, &w).map_err(|e| CliError::Input(e.to_string()))?;
            let verdict = match &cert.verdict {
                MonotoneVerdict::CertifiedMonotone => "certified-monotone".to_string(),
                MonotoneVerdict::Refuted { witness } => {
                    status = EXIT_NOT_CERTIFIED;
                    format!(
                        "refuted: {} = {} at (l1, l2) = ({}, {})",
                        witness.coefficient,
                        format_rational(&witness.value.0),
                        format_rational(&witness.l1.0),
                        format_rational(&witness.l2.0)
                    )
                }
                MonotoneVerdict::Indefinite { reason } => {
                    status = EXIT_NOT_CERTIFIED;
                    format!("indefinite: {reason}")
                }
            };
            writeln!(out, "verdict: {verdict}").unwrap();
            writeln!(out, "reaction: {}", cert.reaction).unwrap();
            writeln!(out, "c1: {}", cert.c1).unwrap();
            match &config.out {
                Some(p) => artifacts.push(Artifact {
                    path: p.clone(),
                    contents: json(&cert),
                }),
                None => out.push_str(&json(&cert)),
            }
        }
        Job::Flow {
            velocity: v,
            quantity,
            profile,
            grid,
            cfl,
            stop_radius,
            seed,
        } => {
            let v = velocity(v)?;
            let w = quantity.as_ref().map(|q| ratfn("quantity", q)).transpose()?;
            let opts = FlowOptions {
                grid_size: *grid,
                cfl: *cfl,
                ..FlowOptions::default()
            };
            let mut run = run_flow(profile, &v, w.as_ref(), Stop::InnerRadius(*stop_radius), &opts)
                .map_err(|e| CliError::Run(e.to_string()))?;
            run.metadata.seed = *seed;
            let first = &run.rows[0];
            let last = run.rows.last().unwrap();
            writeln!(out, "steps {}, final t {:.9}", run.metadata.steps, last.t).unwrap();
            match run.estimated_t {
                Some(t) => writeln!(out, "estimated T {t:.9}").unwrap(),
                None => writeln!(out, "estimated T unavailable").unwrap(),
            }
            writeln!(out, "max_w {:.6e} -> {:.6e}", first.max_w, last.max_w).unwrap();
            writeln!(out, "min_lambda {:.6e} -> {:.6e}", first.min_lambda, last.min_lambda).unwrap();
            writeln!(out, "pinch_ratio {:.9} -> {:.9}", first.pinch_ratio, last.pinch_ratio).unwrap();
            if let Some(p) = &config.out {
                artifacts.push(Artifact {
                    path: p.clone(),
                    contents: rows_to_csv(&run.rows),
                });
                artifacts.push(Artifact {
                    path: sidecar_path(p),
                    contents: json(&run.metadata),
                });
            }
        }
        Job::Rescaled {
            velocity: v,
            l,
            amplitude,
            grid,
            cfl,
            max_tau,
        } => {
            if let Some(v) = v {
                if ratfn("velocity", v)? != RatFn2::from_poly(Poly2::q()) {
                    return Err(CliError::Input(
                        "--velocity: the rescaled flow is defined for Q only".into(),
                    ));
                }
            }
            let opts = FlowOptions {
                grid_size: *grid,
                cfl: *cfl,
                ..FlowOptions::default()
            };
            let run = run_rescaled(*l, *amplitude, *max_tau, &opts).map_err(|e| match e {
                curvsieve_core::flowsim::FlowError::InvalidProfile(m) => CliError::Input(m),
                e => CliError::Run(e.to_string()),
            })?;
            writeln!(out, "l = {l}, decay exponent {:.6}", run.exponent).unwrap();
            if let Some(p) = &config.out {
                artifacts.push(Artifact {
                    path: p.clone(),
                    contents: json(&run),
                });
            }
        }
        Job::Constants {
            velocity: v,
            quantity,
        } => {
            let v = velocity(v)?;
            let w = ratfn("quantity", quantity)?;
            let row = constants_for(&v, &w).map_err(|e| CliError::Input(e.to_string()))?;
            let [ch, c1, ca, cd, ex] = row.values().map(format_rational);
            writeln!(out, "c_h = {ch}\nc_1 = {c1}\nc_alpha = {ca}\nc_d = {cd}\nexponent = {ex}").unwrap();
            writeln!(out, "(c_h, c_1, c_d, exponent) = ({ch}, {c1}, {cd}, {ex})").unwrap();
            if let Some(p) = &config.out {
                artifacts.push(Artifact {
                    path: p.clone(),
                    contents: json(&row),
                });
            }
        }
    }
    Ok(Outcome {
        status,
        stdout: out,
        artifacts,
    })
}

/// Writes all artifacts from the calling thread.
pub fn write_artifacts(artifacts: &[Artifact]) -> Result<(), CliError> {
    for a in artifacts {
        if let Some(dir) = a.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
        std::fs::write(&a.path, &a.contents).map_err(|e| CliError::Io(format!("{}: {e}", a.path.display())))?;
    }
    Ok(())
}
