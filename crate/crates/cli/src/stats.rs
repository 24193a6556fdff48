use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Summary of the final best costs of independent trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single trial.
    pub std: f64,
    pub best: f64,
    pub worst: f64,
}

pub fn aggregate_stats(final_costs: &[f64]) -> Result<TrialStats> {
    if final_costs.is_empty() {
        return Err(HarnessError::Config(
            "aggregate_stats needs at least one trial".into(),
        ));
    }
    let n = final_costs.len();
    let best = final_costs.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = final_costs
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    // Rounding can push the mean of equal values one ulp outside [best, worst].
    let mean = (final_costs.iter().sum::<f64>() / n as f64).clamp(best, worst);
    let std = if n > 1 {
        let ss: f64 = final_costs.iter().map(|c| (c - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(TrialStats {
        count: n,
        mean,
        std,
        best,
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let s = aggregate_stats(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.std, s.best, s.worst), (2.0, 1.0, 1.0, 3.0));
        let s = aggregate_stats(&[5.0]).unwrap();
        assert_eq!((s.mean, s.std, s.best, s.worst), (5.0, 0.0, 5.0, 5.0));
        assert_eq!(aggregate_stats(&[0.1; 7]).unwrap().std, 0.0);
        assert!(aggregate_stats(&[]).is_err());
    }

    proptest! {
        #[test]
        fn ordering_and_shift(xs in prop::collection::vec(-1e3f64..1e3, 1..30), c in -1e3f64..1e3) {
            let s = aggregate_stats(&xs).unwrap();
            prop_assert!(s.best <= s.mean && s.mean <= s.worst && s.std >= 0.0);
            let shifted: Vec<f64> = xs.iter().map(|x| x + c).collect();
            let t = aggregate_stats(&shifted).unwrap();
            prop_assert!((s.std - t.std).abs() <= 1e-9 * (1.0 + s.std));
        }

        #[test]
        fn order_independent(mut xs in prop::collection::vec(-1e3f64..1e3, 1..30)) {
            let a = aggregate_stats(&xs).unwrap();
            xs.reverse();
            let b = aggregate_stats(&xs).unwrap();
            prop_assert_eq!(a.best, b.best);
            prop_assert_eq!(a.worst, b.worst);
            prop_assert!((a.mean - b.mean).abs() <= 1e-12 * (1.0 + a.mean.abs()));
        }
    }
}
