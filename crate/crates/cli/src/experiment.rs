use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use qdds_core::{run, stopband_max_db, trial_seed, Objective, RunResult, TracePoint};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentObjective};
use crate::error::{HarnessError, Result};
use crate::plot::{convergence_plot, emit_plot, response_plot};
use crate::report::{emit_report, FirSummary, ObjectiveInfo, Report, TrialRecord};
use crate::stats::aggregate_stats;
use crate::trace::emit_traces;

pub const TRACE_FILE: &str = "trace.csv";
pub const CONVERGENCE_FILE: &str = "convergence.svg";
pub const RESPONSE_FILE: &str = "response.svg";
pub const COEFFICIENTS_FILE: &str = "coefficients.csv";
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub report: Report,
    pub results: Vec<RunResult>,
    pub artifacts: Vec<PathBuf>,
    /// Wall-clock time of the trials; never written to the report.
    pub elapsed: Duration,
}

fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let probe = dir.join(".qdds-write-check");
    fs::write(&probe, b"").map_err(|e| HarnessError::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| HarnessError::io(&probe, e))
}

fn fir_summary(objective: &ExperimentObjective, solution: &[f64]) -> Option<FirSummary> {
    let fir = objective.as_fir()?;
    let spec = fir.spec();
    let eval = fir.report(solution);
    let coefficients = spec.expand(solution);
    Some(FirSummary {
        stopband_max_db: stopband_max_db(&coefficients, spec),
        coefficients,
        e_p: eval.e_p,
        e_s: eval.e_s,
        gamma: eval.gamma,
        delta_db: eval.delta_db,
    })
}

/// Runs every trial of `config`, aggregates the final best costs and
/// writes the requested artifacts into `config.out`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    if config.emit.any() {
        ensure_writable(&config.out)?;
    }
    let objective = config.build_objective()?;
    let init_range = config.swarm_config(0)?.resolve_init_range(&objective)?;

    let seeds: Vec<u64> = (0..config.trials as u64)
        .map(|i| trial_seed(config.seed, i))
        .collect();
    let started = Instant::now();
    let run_all = || -> Result<Vec<RunResult>> {
        seeds
            .par_iter()
            .map(|&seed| Ok(run(&config.swarm_config(seed)?, &objective)?))
            .collect()
    };
    let results = if config.workers == 0 {
        run_all()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?
            .install(run_all)?
    };
    let elapsed = started.elapsed();

    let finals: Vec<f64> = results.iter().map(|r| r.best_cost).collect();
    let stats = aggregate_stats(&finals)?;
    let best_trial = finals
        .iter()
        .enumerate()
        .fold(0, |best, (i, &c)| if c < finals[best] { i } else { best });

    let trials: Vec<TrialRecord> = results
        .iter()
        .enumerate()
        .map(|(i, r)| TrialRecord {
            trial: i,
            seed: r.seed,
            lambda: r.well.lambda,
            best_cost: r.best_cost,
            best_solution: r.best_solution.clone(),
            eval_count: r.eval_count,
            events: r.events,
            fir: fir_summary(&objective, &r.best_solution),
        })
        .collect();
    let report = Report {
        tool: "qdds".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        objective: ObjectiveInfo {
            name: objective.name().to_string(),
            dimension: objective.dimension(),
            init_range: [init_range.lo, init_range.hi],
        },
        stats,
        best_trial,
        fir: trials[best_trial].fir.clone(),
        trials,
    };

    let artifacts = write_artifacts(config, &report, &results)?;
    Ok(ExperimentOutcome {
        report,
        results,
        artifacts,
        elapsed,
    })
}

fn write_artifacts(
    config: &ExperimentConfig,
    report: &Report,
    results: &[RunResult],
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let out = &config.out;
    if config.emit.traces {
        let path = out.join(TRACE_FILE);
        emit_traces(results.iter().enumerate(), &path)?;
        written.push(path);
    }
    if config.emit.plots {
        let path = out.join(CONVERGENCE_FILE);
        let title = format!(
            "{} (dimension={}, population={}, {} trials)",
            report.objective.name, report.objective.dimension, config.pop, config.trials
        );
        let traces: Vec<&[TracePoint]> = results.iter().map(|r| r.trace.as_slice()).collect();
        emit_plot(&convergence_plot(&title, &traces, config.log_plot), &path)?;
        written.push(path);
        if let Some(fir) = &report.fir {
            let path = out.join(RESPONSE_FILE);
            let title = format!(
                "{}-tap FIR response (best of {} trials)",
                config.order, config.trials
            );
            emit_plot(
                &response_plot(
                    &title,
                    &fir.coefficients,
                    &config.filter_spec(),
                    fir.delta_db,
                ),
                &path,
            )?;
            written.push(path);
        }
    }
    if let Some(fir) = &report.fir {
        if config.emit.report {
            let path = out.join(COEFFICIENTS_FILE);
            let mut buf = Vec::new();
            qdds_core::write_coefficients(&mut buf, &fir.coefficients)
                .map_err(|e| HarnessError::io(&path, e))?;
            fs::write(&path, buf).map_err(|e| HarnessError::io(&path, e))?;
            written.push(path);
        }
    }
    if config.emit.report {
        let path = out.join(REPORT_FILE);
        emit_report(report, &path)?;
        written.push(path);
    }
    Ok(written)
}
