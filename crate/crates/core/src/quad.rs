//! Composite trapezoidal rule.

/// ∫_a^b f with `intervals` equal panels.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let inner: f64 = (1..intervals).map(|i| f(a + i as f64 * h)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}

/// Trapezoidal rule over equally spaced samples.
pub fn trapezoid_samples(samples: &[f64], spacing: f64) -> f64 {
    match samples {
        [] | [_] => 0.0,
        [first, inner @ .., last] => spacing * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_linear() {
        assert!((trapezoid(|x| 3.0 * x + 1.0, 0.0, 2.0, 3) - 8.0).abs() < 1e-14);
        assert!((trapezoid_samples(&[1.0, 4.0, 7.0], 1.0) - 8.0).abs() < 1e-14);
        assert_eq!(trapezoid_samples(&[2.0], 1.0), 0.0);
    }

    #[test]
    fn second_order_convergence() {
        let exact = 1.0 - (-1.0f64).exp();
        let e1 = (trapezoid(|x| (-x).exp(), 0.0, 1.0, 50) - exact).abs();
        let e2 = (trapezoid(|x| (-x).exp(), 0.0, 1.0, 100) - exact).abs();
        assert!((e1 / e2 - 4.0).abs() < 0.01);
    }
}
