use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qdds_core::{
    Benchmark, BenchmarkKind, FilterSpec, FirObjective, Interval, KnownMin, Objective,
    RebindPolicy, SwarmConfig, UpdateMode, DEFAULT_SOLVE_TOL,
};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Function {
    Rastrigin,
    Rosenbrock,
    Sphere,
    Griewank,
    Fir,
}

impl Function {
    pub fn benchmark(self) -> Option<BenchmarkKind> {
        match self {
            Function::Rastrigin => Some(BenchmarkKind::Rastrigin),
            Function::Rosenbrock => Some(BenchmarkKind::Rosenbrock),
            Function::Sphere => Some(BenchmarkKind::Sphere),
            Function::Griewank => Some(BenchmarkKind::Griewank),
            Function::Fir => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self.benchmark() {
            Some(kind) => kind.name(),
            None => "fir",
        }
    }
}

impl From<BenchmarkKind> for Function {
    fn from(kind: BenchmarkKind) -> Self {
        match kind {
            BenchmarkKind::Rastrigin => Function::Rastrigin,
            BenchmarkKind::Rosenbrock => Function::Rosenbrock,
            BenchmarkKind::Sphere => Function::Sphere,
            BenchmarkKind::Griewank => Function::Griewank,
        }
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Function {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("fir") {
            return Ok(Function::Fir);
        }
        s.parse::<BenchmarkKind>()
            .map(Function::from)
            .map_err(|_| HarnessError::Config(format!("unknown function '{s}'")))
    }
}

/// Which artifacts an experiment writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmitFlags {
    pub traces: bool,
    pub plots: bool,
    pub report: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        Self {
            traces: true,
            plots: true,
            report: true,
        }
    }
}

impl EmitFlags {
    pub const NONE: EmitFlags = EmitFlags {
        traces: false,
        plots: false,
        report: false,
    };

    pub fn any(&self) -> bool {
        self.traces || self.plots || self.report
    }
}

impl FromStr for EmitFlags {
    type Err = HarnessError;

    /// Comma separated subset of `traces,plots,report`, or `none`.
    fn from_str(s: &str) -> Result<Self> {
        let mut flags = EmitFlags::NONE;
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item {
                "traces" | "trace" => flags.traces = true,
                "plots" | "plot" => flags.plots = true,
                "report" => flags.report = true,
                "none" => {}
                other => {
                    return Err(HarnessError::Config(format!(
                        "unknown emit target '{other}'"
                    )))
                }
            }
        }
        Ok(flags)
    }
}

/// Everything that determines an experiment. Mirrors the JSON config file;
/// band edges `wp`/`ws` are fractions of π.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub function: Function,
    /// Benchmark dimension. FIR runs derive theirs from `order` and `symmetric`.
    pub dim: usize,
    pub pop: usize,
    pub iters: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: UpdateMode,
    pub rebind: RebindPolicy,
    pub lambda_abs: bool,
    /// Fixed λ for every trial instead of a per-trial draw.
    pub lambda: Option<f64>,
    pub k: f64,
    pub epsilon: f64,
    /// Per-dimension initial interval; `None` uses the objective's domain.
    pub init_range: Option<[f64; 2]>,
    pub solver_tol: f64,
    /// Total FIR coefficient count.
    pub order: usize,
    pub wp: f64,
    pub ws: f64,
    pub eta: f64,
    pub grid: usize,
    pub attenuation_grid: usize,
    pub symmetric: bool,
    pub out: PathBuf,
    pub emit: EmitFlags,
    pub log_plot: bool,
    /// Worker threads for trials; 0 picks the number of CPUs.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            function: Function::Rastrigin,
            dim: 10,
            pop: 20,
            iters: 250,
            trials: 10,
            seed: 42,
            mode: UpdateMode::Literal,
            rebind: RebindPolicy::Post,
            lambda_abs: false,
            lambda: None,
            k: 5.0,
            epsilon: 0.3,
            init_range: None,
            solver_tol: DEFAULT_SOLVE_TOL,
            order: 10,
            wp: 0.3,
            ws: 0.6,
            eta: 0.5,
            grid: qdds_core::objectives::fir::DEFAULT_COST_GRID,
            attenuation_grid: qdds_core::objectives::fir::DEFAULT_ATTENUATION_GRID,
            symmetric: true,
            out: PathBuf::from("out"),
            emit: EmitFlags::default(),
            log_plot: true,
            workers: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn benchmark(function: BenchmarkKind, dim: usize, pop: usize, iters: usize) -> Self {
        Self {
            function: function.into(),
            dim,
            pop,
            iters,
            ..Self::default()
        }
    }

    /// FIR design with `order` total coefficients.
    pub fn fir(order: usize, pop: usize, iters: usize) -> Self {
        Self {
            function: Function::Fir,
            order,
            pop,
            iters,
            ..Self::default()
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    pub fn filter_spec(&self) -> FilterSpec {
        FilterSpec {
            taps: self.order,
            omega_p: self.wp * PI,
            omega_s: self.ws * PI,
            eta: self.eta,
            grid_points: self.grid,
            attenuation_grid: self.attenuation_grid,
            symmetric: self.symmetric,
        }
    }

    pub fn build_objective(&self) -> Result<ExperimentObjective> {
        match self.function.benchmark() {
            Some(kind) => Ok(ExperimentObjective::Benchmark(Benchmark::new(
                kind, self.dim,
            )?)),
            None => Ok(ExperimentObjective::Fir(FirObjective::new(
                self.filter_spec(),
            )?)),
        }
    }

    pub fn objective_dimension(&self) -> usize {
        match self.function {
            Function::Fir => self.filter_spec().free_coefficients(),
            _ => self.dim,
        }
    }

    /// Engine configuration for one trial.
    pub fn swarm_config(&self, seed: u64) -> Result<SwarmConfig> {
        let init_range = self
            .init_range
            .map(|[lo, hi]| Interval::new(lo, hi))
            .transpose()?;
        Ok(SwarmConfig {
            k: self.k,
            epsilon: self.epsilon,
            max_iter: self.iters,
            population: self.pop,
            dimension: self.objective_dimension(),
            init_range,
            seed,
            mode: self.mode,
            rebind: self.rebind,
            lambda_abs: self.lambda_abs,
            lambda: self.lambda,
            solver_tol: self.solver_tol,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be >= 1".into()));
        }
        if self.pop == 0 {
            return Err(HarnessError::Config("pop must be >= 1".into()));
        }
        if self.iters < 3 {
            return Err(HarnessError::Config(format!(
                "iters must be >= 3, got {}",
                self.iters
            )));
        }
        let objective = self.build_objective()?;
        self.swarm_config(0)?.resolve_init_range(&objective)?;
        qdds_core::WellParams::new(self.k, self.epsilon, self.lambda.unwrap_or(0.0), self.iters)?;
        Ok(())
    }
}

/// Objective selected by an experiment.
#[derive(Debug, Clone)]
pub enum ExperimentObjective {
    Benchmark(Benchmark),
    Fir(FirObjective),
}

impl ExperimentObjective {
    pub fn as_fir(&self) -> Option<&FirObjective> {
        match self {
            ExperimentObjective::Fir(f) => Some(f),
            ExperimentObjective::Benchmark(_) => None,
        }
    }

    fn inner(&self) -> &dyn Objective {
        match self {
            ExperimentObjective::Benchmark(b) => b,
            ExperimentObjective::Fir(f) => f,
        }
    }
}

impl Objective for ExperimentObjective {
    fn name(&self) -> &str {
        self.inner().name()
    }

    fn dimension(&self) -> usize {
        self.inner().dimension()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.inner().evaluate(x)
    }

    fn init_range(&self) -> Interval {
        self.inner().init_range()
    }

    fn known_min(&self) -> Option<KnownMin> {
        self.inner().known_min()
    }
}
