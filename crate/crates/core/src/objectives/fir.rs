//! Low-pass FIR design cost: weighted passband/stopband squared magnitude
//! error of the coefficient vector, plus stopband attenuation reporting.

use std::f64::consts::PI;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Interval, Objective};
use crate::error::{QddsError, Result};
use crate::quad::trapezoid_samples;

pub const DEFAULT_COST_GRID: usize = 2048;
pub const DEFAULT_ATTENUATION_GRID: usize = 8192;

/// Low-pass design problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    /// Total coefficient count N_c.
    pub taps: usize,
    /// Passband edge in radians.
    pub omega_p: f64,
    /// Stopband edge in radians.
    pub omega_s: f64,
    /// Passband weight η of the cost.
    pub eta: f64,
    /// Samples per band for the error integrals.
    pub grid_points: usize,
    /// Samples across the stopband when measuring attenuation.
    pub attenuation_grid: usize,
    /// Enforce h(n) = h(N_c - 1 - n).
    pub symmetric: bool,
}

impl FilterSpec {
    pub fn new(taps: usize) -> Self {
        Self {
            taps,
            omega_p: 0.3 * PI,
            omega_s: 0.6 * PI,
            eta: 0.5,
            grid_points: DEFAULT_COST_GRID,
            attenuation_grid: DEFAULT_ATTENUATION_GRID,
            symmetric: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.taps == 0 {
            return Err(QddsError::Config("filter needs at least one tap".into()));
        }
        if !(0.0 < self.omega_p && self.omega_p < self.omega_s && self.omega_s < PI) {
            return Err(QddsError::Config(format!(
                "band edges must satisfy 0 < wp < ws < pi, got wp = {}, ws = {}",
                self.omega_p, self.omega_s
            )));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(QddsError::Config(format!(
                "eta must lie in [0, 1], got {}",
                self.eta
            )));
        }
        if self.grid_points < 2 || self.attenuation_grid < 2 {
            return Err(QddsError::Config("grid sizes must be >= 2".into()));
        }
        Ok(())
    }

    /// Number of optimisation variables.
    pub fn free_coefficients(&self) -> usize {
        if self.symmetric {
            self.taps.div_ceil(2)
        } else {
            self.taps
        }
    }

    /// Full impulse response from the optimisation variables.
    pub fn expand(&self, free: &[f64]) -> Vec<f64> {
        if !self.symmetric {
            return free.to_vec();
        }
        let mut full = free.to_vec();
        let mirrored = if self.taps % 2 == 1 {
            &free[..free.len().saturating_sub(1)]
        } else {
            free
        };
        full.extend(mirrored.iter().rev());
        full
    }
}

/// Band errors, cost and attenuation of one coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterEval {
    pub e_p: f64,
    pub e_s: f64,
    pub gamma: f64,
    pub delta_db: f64,
}

/// Mirror `half` into an even-length linear-phase response.
pub fn expand_symmetric(half: &[f64]) -> Vec<f64> {
    let mut full = half.to_vec();
    full.extend(half.iter().rev());
    full
}

/// |H(e^{jω})| = |Σ h(n) e^{-jωn}|.
pub fn fir_response_magnitude(h: &[f64], omega: f64) -> f64 {
    let (re, im) = h.iter().enumerate().fold((0.0, 0.0), |(re, im), (n, &c)| {
        let phase = omega * n as f64;
        (re + c * phase.cos(), im - c * phase.sin())
    });
    re.hypot(im)
}

fn band_frequency(lo: f64, hi: f64, points: usize, i: usize) -> f64 {
    lo + (hi - lo) * i as f64 / (points - 1) as f64
}

fn band_error(mag: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize, target: f64) -> f64 {
    let samples: Vec<f64> = (0..points)
        .map(|i| {
            let e = target - mag(band_frequency(lo, hi, points, i));
            e * e
        })
        .collect();
    trapezoid_samples(&samples, (hi - lo) / (points - 1) as f64) / PI
}

/// (E_p, E_s): (1/π)∫₀^{ωp}(1 - |H|)² and (1/π)∫_{ωs}^{π}|H|², trapezoidal on `grid_points` samples.
pub fn fir_band_errors(h: &[f64], spec: &FilterSpec) -> (f64, f64) {
    let mag = |w: f64| fir_response_magnitude(h, w);
    (
        band_error(mag, 0.0, spec.omega_p, spec.grid_points, 1.0),
        band_error(mag, spec.omega_s, PI, spec.grid_points, 0.0),
    )
}

/// γ = η·E_p + (1 - η)·E_s.
pub fn fir_cost(h: &[f64], spec: &FilterSpec) -> f64 {
    let (e_p, e_s) = fir_band_errors(h, spec);
    weighted_cost(e_p, e_s, spec.eta)
}

fn weighted_cost(e_p: f64, e_s: f64, eta: f64) -> f64 {
    eta * e_p + (1.0 - eta) * e_s
}

fn stopband_magnitudes(h: &[f64], spec: &FilterSpec) -> Vec<f64> {
    let n = spec.attenuation_grid;
    (0..n)
        .map(|i| fir_response_magnitude(h, band_frequency(spec.omega_s, PI, n, i)))
        .collect()
}

fn to_db(mag: f64) -> f64 {
    if mag > 0.0 {
        20.0 * mag.log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// Largest |H| anywhere on the stopband grid, in dB. Includes the skirt of
/// the transition band at ω_s.
pub fn stopband_max_db(h: &[f64], spec: &FilterSpec) -> f64 {
    to_db(stopband_magnitudes(h, spec).into_iter().fold(0.0, f64::max))
}

/// Maximum stopband attenuation Δ in dB: the height of the tallest stopband
/// lobe (a local maximum of |H| on the grid, or a rise into ω = π). When the
/// stopband has no lobe the band maximum is used. All-zero `h` gives -∞.
pub fn stopband_attenuation_db(h: &[f64], spec: &FilterSpec) -> f64 {
    let mags = stopband_magnitudes(h, spec);
    let n = mags.len();
    let mut peak: Option<f64> = None;
    for i in 1..n {
        let rising = mags[i] > mags[i - 1];
        let lobe = if i + 1 < n {
            rising && mags[i] >= mags[i + 1]
        } else {
            rising
        };
        if lobe {
            peak = Some(peak.map_or(mags[i], |p: f64| p.max(mags[i])));
        }
    }
    to_db(peak.unwrap_or_else(|| mags.iter().copied().fold(0.0, f64::max)))
}

/// All reported figures for `h`.
pub fn evaluate_filter(h: &[f64], spec: &FilterSpec) -> FilterEval {
    let (e_p, e_s) = fir_band_errors(h, spec);
    FilterEval {
        e_p,
        e_s,
        gamma: weighted_cost(e_p, e_s, spec.eta),
        delta_db: stopband_attenuation_db(h, spec),
    }
}

/// Writes one coefficient per line with 17 significant digits.
pub fn write_coefficients<W: Write>(mut out: W, h: &[f64]) -> io::Result<()> {
    for c in h {
        writeln!(out, "{c:.16e}")?;
    }
    Ok(())
}

/// Reads one coefficient per line. Blank lines and `#` comments are skipped.
pub fn read_coefficients<R: BufRead>(input: R) -> io::Result<Vec<f64>> {
    let mut out = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v = t.parse::<f64>().map_err(|e| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {}: '{t}': {e}", lineno + 1),
            )
        })?;
        out.push(v);
    }
    Ok(out)
}

/// Precomputed cos/sin table for one band.
#[derive(Debug, Clone)]
struct BandTable {
    cos: Vec<f64>,
    sin: Vec<f64>,
    taps: usize,
    lo: f64,
    hi: f64,
    points: usize,
}

impl BandTable {
    fn new(lo: f64, hi: f64, points: usize, taps: usize) -> Self {
        let mut cos = Vec::with_capacity(points * taps);
        let mut sin = Vec::with_capacity(points * taps);
        for i in 0..points {
            let w = band_frequency(lo, hi, points, i);
            for n in 0..taps {
                let phase = w * n as f64;
                cos.push(phase.cos());
                sin.push(phase.sin());
            }
        }
        Self {
            cos,
            sin,
            taps,
            lo,
            hi,
            points,
        }
    }

    fn error(&self, h: &[f64], target: f64) -> f64 {
        let samples: Vec<f64> = (0..self.points)
            .map(|i| {
                let row = i * self.taps..(i + 1) * self.taps;
                let (re, im) = h
                    .iter()
                    .zip(&self.cos[row.clone()])
                    .zip(&self.sin[row])
                    .fold((0.0, 0.0), |(re, im), ((&c, &cs), &sn)| {
                        (re + c * cs, im - c * sn)
                    });
                let e = target - re.hypot(im);
                e * e
            })
            .collect();
        trapezoid_samples(&samples, (self.hi - self.lo) / (self.points - 1) as f64) / PI
    }
}

/// FIR design cost as an engine objective. Positions are the free
/// coefficients; the response tables are built once.
#[derive(Debug, Clone)]
pub struct FirObjective {
    spec: FilterSpec,
    range: Interval,
    passband: BandTable,
    stopband: BandTable,
}

impl FirObjective {
    pub fn new(spec: FilterSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            spec,
            range: Interval::symmetric(1.0),
            passband: BandTable::new(0.0, spec.omega_p, spec.grid_points, spec.taps),
            stopband: BandTable::new(spec.omega_s, PI, spec.grid_points, spec.taps),
        })
    }

    pub fn spec(&self) -> &FilterSpec {
        &self.spec
    }

    pub fn band_errors(&self, free: &[f64]) -> (f64, f64) {
        let h = self.spec.expand(free);
        (self.passband.error(&h, 1.0), self.stopband.error(&h, 0.0))
    }

    /// Band errors, cost and attenuation for the given free coefficients.
    pub fn report(&self, free: &[f64]) -> FilterEval {
        let (e_p, e_s) = self.band_errors(free);
        FilterEval {
            e_p,
            e_s,
            gamma: weighted_cost(e_p, e_s, self.spec.eta),
            delta_db: stopband_attenuation_db(&self.spec.expand(free), &self.spec),
        }
    }
}

impl Objective for FirObjective {
    fn name(&self) -> &str {
        "fir"
    }

    fn dimension(&self) -> usize {
        self.spec.free_coefficients()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        let (e_p, e_s) = self.band_errors(x);
        weighted_cost(e_p, e_s, self.spec.eta)
    }

    fn init_range(&self) -> Interval {
        self.range
    }
}
