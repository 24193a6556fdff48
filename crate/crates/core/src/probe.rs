//! Even bound-state wavefunction of two delta wells co-located at the origin,
//! used to check that B² = kg/δ(r) really confines probability mass 0.5g
//! to the vicinity (-r, r).

use serde::{Deserialize, Serialize};

use crate::error::{QddsError, Result};
use crate::quad::trapezoid;
use crate::well::delta_of_r;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveProbe {
    pub r_boundary: f64,
    pub g: f64,
    pub k: f64,
    pub b_squared: f64,
}

impl WaveProbe {
    /// Builds a probe with B² = k·g/δ(r_boundary).
    ///
    /// `g` is accepted on the closed interval [1, 2] so the 50% boundary
    /// case (g = 1) can be probed.
    pub fn new(r_boundary: f64, g: f64, k: f64) -> Result<Self> {
        if !(r_boundary.is_finite() && r_boundary > 0.0) {
            return Err(QddsError::Domain(format!(
                "probe boundary must be > 0, got {r_boundary}"
            )));
        }
        if !(1.0..=2.0).contains(&g) {
            return Err(QddsError::Domain(format!(
                "confinement factor g must lie in [1, 2], got {g}"
            )));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(QddsError::Domain(format!("k must be > 0, got {k}")));
        }
        let delta = delta_of_r(r_boundary, k)?;
        if delta <= 0.0 {
            return Err(QddsError::Domain(format!("δ(r) = {delta} is not positive")));
        }
        Ok(Self {
            r_boundary,
            g,
            k,
            b_squared: k * g / delta,
        })
    }

    /// Probe with an explicit B, bypassing the confinement normalisation.
    pub fn with_amplitude(r_boundary: f64, k: f64, b: f64) -> Result<Self> {
        if !(r_boundary.is_finite() && r_boundary > 0.0 && k > 0.0 && b > 0.0) {
            return Err(QddsError::Domain(format!(
                "invalid probe: r = {r_boundary}, k = {k}, B = {b}"
            )));
        }
        Ok(Self {
            r_boundary,
            g: f64::NAN,
            k,
            b_squared: b * b,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.b_squared.sqrt()
    }

    fn validate(&self) -> Result<()> {
        if self.r_boundary > 0.0
            && self.k > 0.0
            && self.b_squared > 0.0
            && self.b_squared.is_finite()
        {
            Ok(())
        } else {
            Err(QddsError::Domain(format!("invalid probe {self:?}")))
        }
    }

    /// ψ(x) on the closed vicinity; x = 0 takes the common limit 2B.
    fn psi(&self, x: f64) -> f64 {
        let b = self.amplitude();
        if x >= 0.0 {
            2.0 * b * (-self.k * x).exp()
        } else {
            b * ((-self.k * x).exp() + (self.k * x).exp())
        }
    }
}

/// ψ_e(x) for -r < x < r: 2B·e^{-kx} right of the wells, B(e^{-kx} + e^{kx}) left of them.
pub fn psi_even(x: f64, probe: &WaveProbe) -> Result<f64> {
    probe.validate()?;
    if x.is_nan() || x.abs() >= probe.r_boundary {
        return Err(QddsError::Domain(format!(
            "psi_even defined for |x| < {}, got x = {x}",
            probe.r_boundary
        )));
    }
    Ok(probe.psi(x))
}

/// ∫ψ² over (-r, r) by the composite trapezoidal rule, split at the kink
/// x = 0. `quad_points` subintervals are shared evenly between both halves.
pub fn confinement_integral(probe: &WaveProbe, quad_points: usize) -> Result<f64> {
    probe.validate()?;
    if quad_points == 0 {
        return Err(QddsError::Domain("quad_points must be positive".into()));
    }
    let per_side = (quad_points / 2).max(1);
    let density = |x: f64| {
        let v = probe.psi(x);
        v * v
    };
    let r = probe.r_boundary;
    Ok(trapezoid(density, -r, 0.0, per_side) + trapezoid(density, 0.0, r, per_side))
}
