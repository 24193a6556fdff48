//! Deterministic oracle suite behind `qdds validate`.

use std::fmt;

use qdds_core::{
    confinement_integral, delta_of_r, expand_symmetric, fir_band_errors, r_of_delta,
    stopband_attenuation_db, FilterSpec, WaveProbe,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Free half of the reference 10-tap design.
#[allow(clippy::excessive_precision)]
pub const REFERENCE_10_TAP: [f64; 5] = [
    0.070824792496751651,
    -0.063184376757871669,
    -0.038806613903081974,
    0.013227497402604124,
    0.39889122413816075,
];

/// Free half of the reference 20-tap design.
#[allow(clippy::excessive_precision)]
pub const REFERENCE_20_TAP: [f64; 10] = [
    0.011566963779404912,
    0.0077331878563942523,
    -0.0094736298940968737,
    -0.0068424142182682956,
    0.024047530227972496,
    0.04099248691610477,
    0.14983102243854188,
    0.0057626071427242216,
    -0.0038505536917844913,
    0.28023279944300716,
];

/// Reference stopband attenuation of the two designs, in dB.
pub const REFERENCE_10_TAP_DB: f64 = -13.6466;
pub const REFERENCE_20_TAP_DB: f64 = -17.7398;
pub const ATTENUATION_TOL_DB: f64 = 0.1;

pub const ROUND_TRIP_SAMPLES: usize = 100_000;
pub const CONFINEMENT_PROBES: usize = 100;
pub const CONFINEMENT_POINTS: usize = 100_000;
pub const CONFINEMENT_REL_TOL: f64 = 1e-6;
pub const ANALYTIC_TOL: f64 = 1e-4;

const SEED: u64 = 0x0_5ac1e;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}: {}", self.name, self.detail)
    }
}

/// Worst relative round-trip error over `samples` draws of r in [-5, 5], k in [1, 10].
pub fn round_trip_check(samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for _ in 0..samples {
        let r = rng.random_range(-5.0..=5.0);
        let k = rng.random_range(1.0..=10.0);
        let err = delta_of_r(r, k)
            .and_then(|d| r_of_delta(d, k, qdds_core::DEFAULT_SOLVE_TOL))
            .map(|back| (back - r).abs() / r.abs().max(1.0));
        match err {
            Ok(e) => worst = worst.max(e),
            Err(_) => failures += 1,
        }
    }
    Check {
        name: "inverse round trip",
        passed: failures == 0 && worst <= 1e-9,
        detail: format!("{samples} samples, worst scaled error {worst:.3e}, {failures} solver errors (tol 1e-9)"),
    }
}

/// ψ² integrated over (-r, r) against 0.5g for random probes.
pub fn confinement_check(probes: usize, points: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for _ in 0..probes {
        let r = 2.0 - rng.random_range(0.0..2.0);
        let g = rng.random_range(1.0..2.0);
        let k = rng.random_range(1.0..=10.0);
        let err = WaveProbe::new(r, g, k)
            .and_then(|p| confinement_integral(&p, points))
            .map(|mass| (mass - 0.5 * g).abs() / (0.5 * g));
        match err {
            Ok(e) => worst = worst.max(e),
            Err(_) => failures += 1,
        }
    }
    Check {
        name: "confinement identity",
        passed: failures == 0 && worst <= CONFINEMENT_REL_TOL,
        detail: format!(
            "{probes} probes at {points} points, worst relative error {worst:.3e} (tol {CONFINEMENT_REL_TOL:e})"
        ),
    }
}

pub fn attenuation_check(name: &'static str, half: &[f64], expected_db: f64) -> Check {
    let spec = FilterSpec::new(2 * half.len());
    let got = stopband_attenuation_db(&expand_symmetric(half), &spec);
    Check {
        name,
        passed: (got - expected_db).abs() <= ATTENUATION_TOL_DB,
        detail: format!(
            "{got:.4} dB vs {expected_db} dB (tol {ATTENUATION_TOL_DB} dB, grid {})",
            spec.attenuation_grid
        ),
    }
}

/// Impulse gives (E_p, E_s) = (0, 0.4); the zero filter gives (0.3, 0).
pub fn analytic_fir_check() -> Check {
    let spec = FilterSpec::new(11);
    let mut impulse = vec![0.0; 11];
    impulse[0] = 1.0;
    let (ip, is) = fir_band_errors(&impulse, &spec);
    let (zp, zs) = fir_band_errors(&[0.0; 11], &spec);
    let worst = [ip, is - 0.4, zp - 0.3, zs]
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));
    Check {
        name: "analytic FIR errors",
        passed: worst <= ANALYTIC_TOL,
        detail: format!(
            "impulse ({ip:.6}, {is:.6}), zero ({zp:.6}, {zs:.6}), worst {worst:.2e} (tol {ANALYTIC_TOL:e})"
        ),
    }
}

pub fn run_validation() -> Vec<Check> {
    vec![
        round_trip_check(ROUND_TRIP_SAMPLES, SEED),
        confinement_check(CONFINEMENT_PROBES, CONFINEMENT_POINTS, SEED),
        attenuation_check(
            "10-tap attenuation golden",
            &REFERENCE_10_TAP,
            REFERENCE_10_TAP_DB,
        ),
        attenuation_check(
            "20-tap attenuation golden",
            &REFERENCE_20_TAP,
            REFERENCE_20_TAP_DB,
        ),
        analytic_fir_check(),
    ]
}
