//! JSON experiment report. Contains no wall-clock data, so identical
//! configurations produce identical bytes.

use std::path::Path;

use qdds_core::EventCounters;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::stats::TrialStats;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveInfo {
    pub name: String,
    pub dimension: usize,
    /// Interval the particles were initialised from.
    pub init_range: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirSummary {
    /// Full impulse response of the best solution.
    pub coefficients: Vec<f64>,
    pub e_p: f64,
    pub e_s: f64,
    pub gamma: f64,
    /// Tallest stopband lobe in dB.
    #[serde(with = "db")]
    pub delta_db: f64,
    /// Largest stopband magnitude in dB, transition skirt included.
    #[serde(with = "db")]
    pub stopband_max_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    /// λ drawn for this trial.
    pub lambda: f64,
    pub best_cost: f64,
    pub best_solution: Vec<f64>,
    pub eval_count: u64,
    pub events: EventCounters,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fir: Option<FirSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub objective: ObjectiveInfo,
    pub stats: TrialStats,
    pub best_trial: usize,
    pub trials: Vec<TrialRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fir: Option<FirSummary>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serialisable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub fn emit_report(report: &Report, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_json()).map_err(|e| HarnessError::io(path, e))
}

pub fn read_report(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    Report::from_json(&text).map_err(|source| HarnessError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// dB values: -∞ (an all-zero response) is written as `null`.
mod db {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::aggregate_stats;

    fn sample() -> Report {
        let fir = FirSummary {
            coefficients: vec![0.1 + 0.2, -1.0 / 3.0, 2.0f64.sqrt()],
            e_p: 1.0e-7 / 3.0,
            e_s: 0.4,
            gamma: 0.2,
            delta_db: f64::NEG_INFINITY,
            stopband_max_db: -17.736_271_133_1,
        };
        Report {
            tool: "qdds".into(),
            version: "0.0.0".into(),
            config: ExperimentConfig::default(),
            objective: ObjectiveInfo {
                name: "fir".into(),
                dimension: 3,
                init_range: [-1.0, 1.0],
            },
            stats: aggregate_stats(&[0.3, 0.1, 0.7]).unwrap(),
            best_trial: 1,
            trials: vec![TrialRecord {
                trial: 0,
                seed: u64::MAX,
                lambda: -4.123e-4,
                best_cost: std::f64::consts::PI,
                best_solution: vec![1.0 / 7.0, -0.0, 5e-324],
                eval_count: 42,
                events: EventCounters::default(),
                fir: Some(fir.clone()),
            }],
            fir: Some(fir),
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let report = sample();
        let text = report.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json(), text);
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn infinite_attenuation_is_null() {
        let text = sample().to_json();
        assert!(text.contains("\"delta_db\": null"));
    }

    #[test]
    fn file_round_trip_and_error_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        emit_report(&sample(), &path).unwrap();
        assert_eq!(read_report(&path).unwrap(), sample());
        let missing = dir.path().join("nope/report.json");
        let err = emit_report(&sample(), &missing).unwrap_err();
        assert!(err.to_string().contains("nope"));
    }
}
