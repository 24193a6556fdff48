//! The δ(r) map of the co-located double delta well, its inverse, the
//! learning-rate schedule and the band-gated δ update.

use serde::{Deserialize, Serialize};

use crate::error::{QddsError, Result};

/// Largest admissible |2kr|. Keeps e^{2kr} inside the f64 range.
pub const OVERFLOW_GUARD: f64 = 700.0;

/// Default relative tolerance of the inverse solve.
pub const DEFAULT_SOLVE_TOL: f64 = 1e-12;

/// Lower edge of the confinement band: δ_{t-1} < 0.5·δ_{t-2} is out of band.
pub const BAND_LOW: f64 = 0.5;
/// Upper edge of the confinement band: δ_{t-1} > 2·δ_{t-2} is out of band.
pub const BAND_HIGH: f64 = 2.0;

const MAX_SOLVER_ITERS: usize = 200;

/// Physics-derived constants of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellParams {
    pub k: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub max_iter: usize,
}

impl WellParams {
    pub fn new(k: f64, epsilon: f64, lambda: f64, max_iter: usize) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(QddsError::Config(format!(
                "k must be finite and > 0, got {k}"
            )));
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(QddsError::Config(format!(
                "epsilon must lie in [0, 1), got {epsilon}"
            )));
        }
        if !lambda.is_finite() {
            return Err(QddsError::Config(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        if max_iter < 3 {
            return Err(QddsError::Config(format!(
                "max_iter must be at least 3, got {max_iter}"
            )));
        }
        Ok(Self {
            k,
            epsilon,
            lambda,
            max_iter,
        })
    }

    /// Largest |r| accepted by [`delta_of_r`] for this k.
    pub fn position_limit(&self) -> f64 {
        position_limit(self.k)
    }
}

/// Largest |r| accepted by [`delta_of_r`] for stiffness `k`.
pub fn position_limit(k: f64) -> f64 {
    OVERFLOW_GUARD / (2.0 * k)
}

/// Two-deep δ history of one particle dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaHistory {
    /// δ at iteration t-1.
    pub delta_prev: f64,
    /// δ at iteration t-2.
    pub delta_prev2: f64,
}

impl DeltaHistory {
    pub fn new(delta_prev: f64, delta_prev2: f64) -> Self {
        Self {
            delta_prev,
            delta_prev2,
        }
    }

    /// Discrete difference δ_{t-1} - δ_{t-2}.
    pub fn gradient(&self) -> f64 {
        self.delta_prev - self.delta_prev2
    }

    /// Push a new δ, dropping the oldest.
    pub fn shift(&mut self, delta_new: f64) {
        self.delta_prev2 = self.delta_prev;
        self.delta_prev = delta_new;
    }
}

/// δ(r) = e^{2kr} - 5e^{-2kr} + 4kr + 4.
pub fn delta_of_r(r: f64, k: f64) -> Result<f64> {
    if !(r.is_finite() && k.is_finite()) || (2.0 * k * r).abs() > OVERFLOW_GUARD {
        return Err(QddsError::Domain(format!(
            "delta_of_r outside overflow guard |2kr| <= {OVERFLOW_GUARD}: r = {r}, k = {k}"
        )));
    }
    Ok(delta_unchecked(r, k))
}

#[inline]
fn delta_unchecked(r: f64, k: f64) -> f64 {
    let kr2 = 2.0 * k * r;
    kr2.exp() - 5.0 * (-kr2).exp() + 2.0 * kr2 + 4.0
}

/// dδ/dr = 2k e^{2kr} + 10k e^{-2kr} + 4k, strictly positive for k > 0.
#[inline]
pub fn delta_slope(r: f64, k: f64) -> f64 {
    let kr2 = 2.0 * k * r;
    2.0 * k * kr2.exp() + 10.0 * k * (-kr2).exp() + 4.0 * k
}

/// Outcome of an inverse solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseSolution {
    pub r: f64,
    pub newton_steps: usize,
    /// Iterations where the Newton step left the bracket and bisection was used.
    pub bisection_steps: usize,
}

/// Position r with δ(r) = `delta`.
pub fn r_of_delta(delta: f64, k: f64, tol: f64) -> Result<f64> {
    solve_r(delta, k, tol).map(|s| s.r)
}

/// Safeguarded Newton iteration on δ(r) - target, with bisection whenever
/// the Newton step leaves the current bracket.
pub fn solve_r(delta: f64, k: f64, tol: f64) -> Result<InverseSolution> {
    if !(k.is_finite() && k > 0.0) {
        return Err(QddsError::Contract(format!(
            "r_of_delta needs k > 0, got {k}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(QddsError::Contract(format!(
            "r_of_delta needs tol > 0, got {tol}"
        )));
    }
    let limit = position_limit(k);
    let lo_delta = delta_unchecked(-limit, k);
    let hi_delta = delta_unchecked(limit, k);
    if !(delta.is_finite() && lo_delta <= delta && delta <= hi_delta) {
        return Err(QddsError::Unsolvable {
            delta,
            k,
            lo: lo_delta,
            hi: hi_delta,
        });
    }
    if delta == 0.0 {
        return Ok(InverseSolution {
            r: 0.0,
            newton_steps: 0,
            bisection_steps: 0,
        });
    }

    let f = |r: f64| delta_unchecked(r, k) - delta;
    let threshold = tol * delta.abs().max(1.0);

    let x0 = initial_guess(delta, k).clamp(-limit, limit);
    let (mut lo, mut hi) = expand_bracket(&f, x0, k, limit);

    let mut x = x0;
    let mut newton_steps = 0;
    let mut bisection_steps = 0;
    for _ in 0..MAX_SOLVER_ITERS {
        let fx = f(x);
        if fx.abs() <= threshold {
            break;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let candidate = x - fx / delta_slope(x, k);
        let next = if candidate > lo && candidate < hi {
            newton_steps += 1;
            candidate
        } else {
            bisection_steps += 1;
            0.5 * (lo + hi)
        };
        if next == x || hi - lo <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            x = next;
            break;
        }
        x = next;
    }
    Ok(InverseSolution {
        r: x,
        newton_steps,
        bisection_steps,
    })
}

/// Asymptotic inverse: the dominant exponential for large |δ|, the
/// linearisation δ ≈ 16kr near the origin.
fn initial_guess(delta: f64, k: f64) -> f64 {
    if delta > 16.0 {
        delta.ln() / (2.0 * k)
    } else if delta < -16.0 {
        -(-delta / 5.0).ln() / (2.0 * k)
    } else {
        delta / (16.0 * k)
    }
}

fn expand_bracket(f: &impl Fn(f64) -> f64, x0: f64, k: f64, limit: f64) -> (f64, f64) {
    let mut lo = x0;
    let mut step = 0.5 / k;
    while f(lo) > 0.0 && lo > -limit {
        lo = (x0 - step).max(-limit);
        step *= 2.0;
    }
    let mut hi = x0;
    step = 0.5 / k;
    while f(hi) < 0.0 && hi < limit {
        hi = (x0 + step).min(limit);
        step *= 2.0;
    }
    (lo, hi)
}

/// θ = (1 - ε)(max_iter - iter)/max_iter + ε.
pub fn learning_rate(iter: usize, max_iter: usize, epsilon: f64) -> Result<f64> {
    if max_iter == 0 || iter > max_iter {
        return Err(QddsError::Contract(format!(
            "learning_rate needs 0 <= iter <= max_iter, got iter = {iter}, max_iter = {max_iter}"
        )));
    }
    let remaining = (max_iter - iter) as f64 / max_iter as f64;
    Ok((1.0 - epsilon) * remaining + epsilon)
}

/// Which correction of the gated update fires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandBranch {
    /// δ_{t-1} > 2δ_{t-2}, ∇ > 0: subtract.
    AboveRising,
    /// δ_{t-1} > 2δ_{t-2}, ∇ < 0: add.
    AboveFalling,
    /// δ_{t-1} < 0.5δ_{t-2}, ∇ < 0: subtract.
    BelowFalling,
    /// δ_{t-1} < 0.5δ_{t-2}, ∇ > 0: add.
    BelowRising,
}

/// Branch selected for `hist`, or `None` when δ is in band or ∇ = 0.
pub fn band_branch(hist: &DeltaHistory) -> Option<BandBranch> {
    let grad = hist.gradient();
    let above = hist.delta_prev > BAND_HIGH * hist.delta_prev2;
    let below = hist.delta_prev < BAND_LOW * hist.delta_prev2;
    match (above, below) {
        (true, _) if grad > 0.0 => Some(BandBranch::AboveRising),
        (true, _) if grad < 0.0 => Some(BandBranch::AboveFalling),
        (_, true) if grad < 0.0 => Some(BandBranch::BelowFalling),
        (_, true) if grad > 0.0 => Some(BandBranch::BelowRising),
        _ => None,
    }
}

/// Band-gated δ update. Out-of-band values are corrected by ±θ·∇·λ, with
/// the sign chosen per branch; in-band values pass through unchanged.
pub fn delta_update(hist: &DeltaHistory, theta: f64, lambda: f64) -> f64 {
    let step = theta * hist.gradient() * lambda;
    match band_branch(hist) {
        Some(BandBranch::AboveRising) | Some(BandBranch::BelowFalling) => hist.delta_prev - step,
        Some(BandBranch::AboveFalling) | Some(BandBranch::BelowRising) => hist.delta_prev + step,
        None => hist.delta_prev,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Independent oracle: bisection on the forward map only.
    fn bisect_oracle(delta: f64, k: f64) -> f64 {
        let limit = position_limit(k);
        let (mut lo, mut hi) = (-limit, limit);
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if delta_of_r(mid, k).unwrap() < delta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn forward_map_values() {
        assert_eq!(delta_of_r(0.0, 5.0).unwrap(), 0.0);
        let a = delta_of_r(0.1, 5.0).unwrap();
        let b = delta_of_r(0.2, 5.0).unwrap();
        assert!((a - 6.878884622601833).abs() < 1e-13);
        assert!((b - 14.712379682747587).abs() < 1e-12);
        assert!(b > a);
    }

    #[test]
    fn forward_map_guard() {
        assert!(delta_of_r(70.0, 5.0).is_ok());
        let err = delta_of_r(70.1, 5.0).unwrap_err();
        assert!(matches!(err, QddsError::Domain(ref m) if m.contains("70.1")));
        assert!(delta_of_r(-70.1, 5.0).is_err());
        assert!(delta_of_r(f64::NAN, 5.0).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(r_of_delta(0.0, 5.0, DEFAULT_SOLVE_TOL).unwrap(), 0.0);
        let r = r_of_delta(6.878884622601833, 5.0, DEFAULT_SOLVE_TOL).unwrap();
        assert!((r - 0.1).abs() < 1e-12);
        let r = r_of_delta(-3.0, 5.0, DEFAULT_SOLVE_TOL).unwrap();
        assert!(r < 0.0);
        assert!((r - bisect_oracle(-3.0, 5.0)).abs() < 1e-12);
        assert!((delta_of_r(r, 5.0).unwrap() + 3.0).abs() < 1e-11);
    }

    #[test]
    fn inverse_rejects_out_of_guard() {
        let big = delta_of_r(70.0, 5.0).unwrap() * 1.5;
        assert!(matches!(
            r_of_delta(big, 5.0, DEFAULT_SOLVE_TOL),
            Err(QddsError::Unsolvable { .. })
        ));
        let low = delta_of_r(-70.0, 5.0).unwrap() * 1.5;
        assert!(matches!(
            r_of_delta(low, 5.0, DEFAULT_SOLVE_TOL),
            Err(QddsError::Unsolvable { .. })
        ));
        assert!(r_of_delta(1.0, 0.0, 1e-12).is_err());
        assert!(r_of_delta(1.0, 5.0, 0.0).is_err());
    }

    #[test]
    fn inverse_at_guard_edges() {
        for &r in &[70.0, -70.0, 69.999] {
            let d = delta_of_r(r, 5.0).unwrap();
            let back = r_of_delta(d, 5.0, DEFAULT_SOLVE_TOL).unwrap();
            assert!((back - r).abs() < 1e-9 * r.abs(), "{r} -> {back}");
        }
    }

    #[test]
    fn learning_rate_schedule() {
        assert_eq!(learning_rate(0, 500, 0.3).unwrap(), 1.0);
        assert!((learning_rate(500, 500, 0.3).unwrap() - 0.3).abs() < 1e-15);
        assert!((learning_rate(250, 500, 0.3).unwrap() - 0.65).abs() < 1e-15);
        assert!(learning_rate(501, 500, 0.3).is_err());
        let step = -(1.0 - 0.3) / 500.0;
        for i in 0..500 {
            let d = learning_rate(i + 1, 500, 0.3).unwrap() - learning_rate(i, 500, 0.3).unwrap();
            assert!((d - step).abs() < 1e-14);
        }
    }

    #[test]
    fn delta_update_examples() {
        let in_band = DeltaHistory::new(1.0, 0.9);
        assert_eq!(delta_update(&in_band, 1.0, 0.001), 1.0);
        let above = DeltaHistory::new(2.5, 1.0);
        assert_eq!(band_branch(&above), Some(BandBranch::AboveRising));
        assert!((delta_update(&above, 1.0, 0.001) - 2.4985).abs() < 1e-15);
        let below = DeltaHistory::new(0.4, 1.0);
        assert_eq!(band_branch(&below), Some(BandBranch::BelowFalling));
        assert!((delta_update(&below, 0.5, 0.001) - 0.4003).abs() < 1e-15);
    }

    #[test]
    fn delta_update_signed_branches() {
        // Negative history: -1 > 2·(-3) and ∇ = 2 > 0.
        let h = DeltaHistory::new(-1.0, -3.0);
        assert_eq!(band_branch(&h), Some(BandBranch::AboveRising));
        // -3 < 0.5·(-1) and ∇ = -2 < 0.
        let h = DeltaHistory::new(-3.0, -1.0);
        assert_eq!(band_branch(&h), Some(BandBranch::BelowFalling));
        // 1 > 2·(-0.2) with ∇ = 1.2 > 0.
        let h = DeltaHistory::new(1.0, -0.2);
        assert_eq!(band_branch(&h), Some(BandBranch::AboveRising));
        // Both zero: ∇ = 0, nothing fires.
        let h = DeltaHistory::new(0.0, 0.0);
        assert_eq!(band_branch(&h), None);
        assert_eq!(delta_update(&h, 1.0, 1.0), 0.0);
    }

    #[test]
    fn well_params_validation() {
        assert!(WellParams::new(5.0, 0.3, 1e-3, 250).is_ok());
        assert!(WellParams::new(0.0, 0.3, 1e-3, 250).is_err());
        assert!(WellParams::new(5.0, 1.0, 1e-3, 250).is_err());
        assert!(WellParams::new(5.0, -0.1, 1e-3, 250).is_err());
        assert!(WellParams::new(5.0, 0.3, 1e-3, 2).is_err());
        assert_eq!(
            WellParams::new(5.0, 0.3, 0.0, 3).unwrap().position_limit(),
            70.0
        );
    }

    proptest! {
        #[test]
        fn strictly_increasing(a in -60.0f64..60.0, b in -60.0f64..60.0, k in 0.1f64..5.8) {
            prop_assume!(a < b);
            prop_assert!(delta_of_r(a, k).unwrap() < delta_of_r(b, k).unwrap());
        }

        #[test]
        fn sign_matches_position(r in -5.0f64..5.0, k in 1.0f64..10.0) {
            let d = delta_of_r(r, k).unwrap();
            prop_assert_eq!(d > 0.0, r > 0.0);
            prop_assert_eq!(d < 0.0, r < 0.0);
        }

        #[test]
        fn round_trip(r in -5.0f64..5.0, k in 1.0f64..10.0) {
            let back = r_of_delta(delta_of_r(r, k).unwrap(), k, DEFAULT_SOLVE_TOL).unwrap();
            prop_assert!((back - r).abs() <= 1e-9 * r.abs().max(1.0));
        }

        #[test]
        fn in_band_is_identity(prev2 in 0.0f64..10.0, t in 0.0f64..1.0, theta in 0.0f64..1.0, lambda in -1.0f64..1.0) {
            // Signed comparisons: the band is empty when δ_{t-2} < 0.
            let prev = 0.5 * prev2 + t * 1.5 * prev2;
            prop_assume!(0.5 * prev2 <= prev && prev <= 2.0 * prev2);
            let h = DeltaHistory::new(prev, prev2);
            prop_assert_eq!(delta_update(&h, theta, lambda), prev);
        }

        #[test]
        fn band_push_back(prev2 in 1e-3f64..10.0, factor in 2.001f64..50.0, shrink in 0.001f64..0.499,
                          theta in 0.0f64..1.0, lambda in 0.0f64..0.01) {
            let high = DeltaHistory::new(factor * prev2, prev2);
            prop_assert!(delta_update(&high, theta, lambda) <= high.delta_prev);
            let low = DeltaHistory::new(shrink * prev2, prev2);
            prop_assert!(delta_update(&low, theta, lambda) >= low.delta_prev);
        }
    }
}
