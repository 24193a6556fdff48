//! Convergence traces as CSV: `trial,iter,best_cost,eval_count`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use qdds_core::RunResult;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub trial: usize,
    pub iter: usize,
    pub best_cost: f64,
    pub eval_count: u64,
}

fn rows(trial: usize, result: &RunResult) -> impl Iterator<Item = TraceRow> + '_ {
    result.trace.iter().map(move |p| TraceRow {
        trial,
        iter: p.iter,
        best_cost: p.best_cost,
        eval_count: p.eval_count,
    })
}

/// Writes the header and one row per iteration of every `(trial, result)`.
pub fn write_trace<'a, W: Write>(
    out: W,
    results: impl IntoIterator<Item = (usize, &'a RunResult)>,
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for (trial, result) in results {
        for row in rows(trial, result) {
            w.serialize(row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Trace file of a single run.
pub fn emit_trace(result: &RunResult, trial: usize, path: &Path) -> Result<()> {
    emit_traces([(trial, result)], path)
}

/// One trace file covering several trials.
pub fn emit_traces<'a>(
    results: impl IntoIterator<Item = (usize, &'a RunResult)>,
    path: &Path,
) -> Result<()> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let csv_err = |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(file);
    write_trace(&mut out, results).map_err(csv_err)?;
    out.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn read_trace<R: Read>(input: R) -> std::result::Result<Vec<TraceRow>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}
