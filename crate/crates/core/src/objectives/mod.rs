//! Cost functions driven by the engine: four classic benchmarks and the
//! low-pass FIR design cost.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QddsError, Result};

pub mod fir;

pub use fir::{FilterEval, FilterSpec, FirObjective};

/// Closed interval used for per-dimension initialisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(QddsError::Config(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn symmetric(half_width: f64) -> Self {
        Self {
            lo: -half_width,
            hi: half_width,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Intersection with [-limit, limit], or `None` if empty.
    pub fn clip_symmetric(&self, limit: f64) -> Option<Self> {
        let lo = self.lo.max(-limit);
        let hi = self.hi.min(limit);
        (lo <= hi).then_some(Self { lo, hi })
    }
}

/// Location and value of a known global minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownMin {
    pub location: Vec<f64>,
    pub value: f64,
}

/// A named cost function over a fixed-dimension box.
pub trait Objective: Sync {
    fn name(&self) -> &str;
    fn dimension(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> f64;
    fn init_range(&self) -> Interval;
    fn known_min(&self) -> Option<KnownMin> {
        None
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn evaluate(&self, x: &[f64]) -> f64 {
        (**self).evaluate(x)
    }
    fn init_range(&self) -> Interval {
        (**self).init_range()
    }
    fn known_min(&self) -> Option<KnownMin> {
        (**self).known_min()
    }
}

/// Rastrigin with A = 10.
pub fn rastrigin(x: &[f64]) -> f64 {
    const A: f64 = 10.0;
    A * x.len() as f64
        + x.iter()
            .map(|&xi| xi * xi - A * (2.0 * PI * xi).cos())
            .sum::<f64>()
}

/// Rosenbrock valley. Defined for n ≥ 2; shorter inputs cost 0.
pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let a = w[1] - w[0] * w[0];
            let b = 1.0 - w[0];
            100.0 * a * a + b * b
        })
        .sum()
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|xi| xi * xi).sum()
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum: f64 = x.iter().map(|xi| xi * xi).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, xi)| (xi / ((i + 1) as f64).sqrt()).cos())
        .product();
    1.0 + sum - prod
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkKind {
    Rastrigin,
    Rosenbrock,
    Sphere,
    Griewank,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 4] = [
        BenchmarkKind::Rosenbrock,
        BenchmarkKind::Rastrigin,
        BenchmarkKind::Sphere,
        BenchmarkKind::Griewank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::Rastrigin => "rastrigin",
            BenchmarkKind::Rosenbrock => "rosenbrock",
            BenchmarkKind::Sphere => "sphere",
            BenchmarkKind::Griewank => "griewank",
        }
    }

    /// Conventional search domain, used for initialisation only.
    pub fn canonical_range(self) -> Interval {
        match self {
            BenchmarkKind::Rastrigin => Interval::symmetric(5.12),
            BenchmarkKind::Rosenbrock => Interval::symmetric(2.048),
            BenchmarkKind::Sphere => Interval::symmetric(100.0),
            BenchmarkKind::Griewank => Interval::symmetric(600.0),
        }
    }

    fn min_dimension(self) -> usize {
        match self {
            BenchmarkKind::Rosenbrock => 2,
            _ => 1,
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            BenchmarkKind::Rastrigin => rastrigin(x),
            BenchmarkKind::Rosenbrock => rosenbrock(x),
            BenchmarkKind::Sphere => sphere(x),
            BenchmarkKind::Griewank => griewank(x),
        }
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkKind {
    type Err = QddsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rastrigin" | "rastrigrin" => Ok(BenchmarkKind::Rastrigin),
            "rosenbrock" => Ok(BenchmarkKind::Rosenbrock),
            "sphere" => Ok(BenchmarkKind::Sphere),
            "griewank" => Ok(BenchmarkKind::Griewank),
            other => Err(QddsError::Config(format!(
                "unknown benchmark function '{other}'"
            ))),
        }
    }
}

/// One of the benchmark functions at a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Benchmark {
    kind: BenchmarkKind,
    dimension: usize,
    range: Interval,
}

impl Benchmark {
    pub fn new(kind: BenchmarkKind, dimension: usize) -> Result<Self> {
        if dimension < kind.min_dimension() {
            return Err(QddsError::Config(format!(
                "{kind} needs dimension >= {}, got {dimension}",
                kind.min_dimension()
            )));
        }
        Ok(Self {
            kind,
            dimension,
            range: kind.canonical_range(),
        })
    }

    pub fn with_range(mut self, range: Interval) -> Self {
        self.range = range;
        self
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }
}

impl Objective for Benchmark {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.kind.eval(x)
    }

    fn init_range(&self) -> Interval {
        self.range
    }

    fn known_min(&self) -> Option<KnownMin> {
        let location = match self.kind {
            BenchmarkKind::Rosenbrock => vec![1.0; self.dimension],
            _ => vec![0.0; self.dimension],
        };
        Some(KnownMin {
            location,
            value: 0.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rastrigin_values() {
        assert_eq!(rastrigin(&[0.0; 7]), 0.0);
        assert!((rastrigin(&[1.0, 1.0]) - 2.0).abs() < 1e-12);
        assert!((rastrigin(&[0.5]) - 20.25).abs() < 1e-12);
    }

    #[test]
    fn rosenbrock_values() {
        assert_eq!(rosenbrock(&[1.0; 6]), 0.0);
        assert_eq!(rosenbrock(&[0.0, 0.0]), 1.0);
        assert_eq!(rosenbrock(&[0.0; 10]), 9.0);
        assert!(Benchmark::new(BenchmarkKind::Rosenbrock, 1).is_err());
    }

    #[test]
    fn sphere_values() {
        assert_eq!(sphere(&[0.0; 3]), 0.0);
        assert_eq!(sphere(&[3.0, 4.0]), 25.0);
    }

    #[test]
    fn griewank_values() {
        assert_eq!(griewank(&[0.0; 5]), 0.0);
        assert!((griewank(&[PI]) - 2.0024674011002723).abs() < 1e-12);
    }

    #[test]
    fn known_minima() {
        for kind in BenchmarkKind::ALL {
            for dim in [2, 10, 30] {
                let b = Benchmark::new(kind, dim).unwrap();
                let m = b.known_min().unwrap();
                assert!(
                    (b.evaluate(&m.location) - m.value).abs() < 1e-12,
                    "{kind} d={dim}"
                );
            }
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            "Rastrigin".parse::<BenchmarkKind>().unwrap(),
            BenchmarkKind::Rastrigin
        );
        assert_eq!(
            "rastrigrin".parse::<BenchmarkKind>().unwrap(),
            BenchmarkKind::Rastrigin
        );
        assert!("ackley".parse::<BenchmarkKind>().is_err());
    }

    #[test]
    fn clip_interval() {
        let i = Interval::symmetric(100.0).clip_symmetric(70.0).unwrap();
        assert_eq!((i.lo, i.hi), (-70.0, 70.0));
        assert!(Interval::new(80.0, 90.0)
            .unwrap()
            .clip_symmetric(70.0)
            .is_none());
        assert!(Interval::new(1.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn sphere_is_quadratic(x in prop::collection::vec(-50.0f64..50.0, 1..20)) {
            let doubled: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
            let s = sphere(&x);
            prop_assert!((sphere(&doubled) - 4.0 * s).abs() <= 1e-12 * s.max(1.0));
        }

        #[test]
        fn benchmarks_are_pure(x in prop::collection::vec(-5.0f64..5.0, 2..12)) {
            for kind in BenchmarkKind::ALL {
                prop_assert_eq!(kind.eval(&x).to_bits(), kind.eval(&x).to_bits());
            }
        }
    }
}
