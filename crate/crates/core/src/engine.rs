//! The swarm loop: particles carry a position and a per-dimension δ history;
//! every update gates δ against the confinement band, solves back for the
//! raw position, blends it toward the global best and keeps the best cost.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{QddsError, Result};
use crate::objectives::{Interval, Objective};
use crate::well::{
    band_branch, delta_of_r, delta_update, learning_rate, position_limit, solve_r, DeltaHistory,
    WellParams, DEFAULT_SOLVE_TOL,
};

/// Standard deviation of the normal draw behind λ.
pub const LAMBDA_SIGMA: f64 = 0.5;
/// Scale applied to the normal draw behind λ.
pub const LAMBDA_SCALE: f64 = 1e-3;
/// Iteration at which the optimisation phase starts; 1 and 2 seed the history.
pub const FIRST_STEP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum UpdateMode {
    /// One randomly selected particle per iteration.
    #[default]
    Literal,
    /// Every particle, in index order, per iteration.
    Sweep,
}

/// What the δ history stores after blending moves a particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RebindPolicy {
    /// δ of the blended position, so δ_t = δ(r_t) always holds.
    #[default]
    Post,
    /// The gated δ itself, before blending.
    Pre,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmConfig {
    pub k: f64,
    pub epsilon: f64,
    pub max_iter: usize,
    pub population: usize,
    pub dimension: usize,
    /// Per-dimension initial interval. `None` uses the objective's range
    /// clipped to the overflow guard.
    pub init_range: Option<Interval>,
    pub seed: u64,
    pub mode: UpdateMode,
    pub rebind: RebindPolicy,
    /// Force λ ≥ 0.
    pub lambda_abs: bool,
    /// Fixed λ instead of the normal draw.
    pub lambda: Option<f64>,
    pub solver_tol: f64,
}

impl SwarmConfig {
    pub fn new(dimension: usize, population: usize, max_iter: usize, seed: u64) -> Self {
        Self {
            k: 5.0,
            epsilon: 0.3,
            max_iter,
            population,
            dimension,
            init_range: None,
            seed,
            mode: UpdateMode::Literal,
            rebind: RebindPolicy::Post,
            lambda_abs: false,
            lambda: None,
            solver_tol: DEFAULT_SOLVE_TOL,
        }
    }

    /// Initial interval actually used against `objective`.
    pub fn resolve_init_range(&self, objective: &dyn Objective) -> Result<Interval> {
        let limit = position_limit(self.k);
        match self.init_range {
            Some(r) => {
                if r.lo < -limit || r.hi > limit {
                    return Err(QddsError::Config(format!(
                        "init range [{}, {}] exceeds the overflow guard |r| <= {limit}",
                        r.lo, r.hi
                    )));
                }
                Interval::new(r.lo, r.hi)
            }
            None => objective.init_range().clip_symmetric(limit).ok_or_else(|| {
                QddsError::Config(format!(
                    "objective range of {} lies outside the overflow guard |r| <= {limit}",
                    objective.name()
                ))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub position: Vec<f64>,
    pub history: Vec<DeltaHistory>,
}

/// Random choices of one particle update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepContext {
    pub selected_particle: usize,
    pub rho: f64,
    pub theta: f64,
}

/// What one particle update did.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateRecord {
    pub context: StepContext,
    /// Position solved from the gated δ, before blending.
    pub raw_position: Vec<f64>,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EventCounters {
    /// Particle updates performed.
    pub updates: u64,
    /// Per-dimension δ updates where no band branch fired.
    pub in_band_noops: u64,
    /// Inverse solves that needed at least one bisection step.
    pub solver_fallbacks: u64,
    /// Inverse solves rejected by the overflow guard; the dimension kept its position.
    pub guard_clamps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iter: usize,
    pub best_cost: f64,
    pub eval_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_cost: f64,
    pub best_solution: Vec<f64>,
    /// Best cost when the iteration counter reads 1, 2, …, max_iter.
    pub trace: Vec<TracePoint>,
    pub eval_count: u64,
    pub events: EventCounters,
    /// Constants of the run, including the λ actually drawn.
    pub well: WellParams,
    pub seed: u64,
}

/// ρ·raw + (1 - ρ)·gbest, elementwise.
pub fn blend_with_gbest(raw: &[f64], gbest: &[f64], rho: f64) -> Result<Vec<f64>> {
    if raw.len() != gbest.len() {
        return Err(QddsError::Contract(format!(
            "blend of vectors with {} and {} dimensions",
            raw.len(),
            gbest.len()
        )));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(QddsError::Contract(format!(
            "blend weight {rho} outside [0, 1]"
        )));
    }
    Ok(raw
        .iter()
        .zip(gbest)
        .map(|(&a, &b)| {
            if a == b {
                a
            } else {
                (rho * a + (1.0 - rho) * b).clamp(a.min(b), a.max(b))
            }
        })
        .collect())
}

/// Running swarm.
#[derive(Debug, Clone)]
pub struct Swarm {
    config: SwarmConfig,
    well: WellParams,
    rng: ChaCha8Rng,
    particles: Vec<ParticleState>,
    best_cost: f64,
    best_solution: Vec<f64>,
    iteration: usize,
    eval_count: u64,
    events: EventCounters,
    trace: Vec<TracePoint>,
}

impl Swarm {
    /// Draws λ and two positions per particle and dimension, seeds the δ
    /// histories from them and records the better of the two evaluated
    /// position vectors per particle as the initial best.
    pub fn init(config: &SwarmConfig, objective: &dyn Objective) -> Result<Self> {
        if config.population == 0 || config.dimension == 0 {
            return Err(QddsError::Config(format!(
                "population and dimension must be >= 1, got {} and {}",
                config.population, config.dimension
            )));
        }
        if objective.dimension() != config.dimension {
            return Err(QddsError::Config(format!(
                "objective {} has dimension {}, swarm configured for {}",
                objective.name(),
                objective.dimension(),
                config.dimension
            )));
        }
        if !(config.solver_tol.is_finite() && config.solver_tol > 0.0) {
            return Err(QddsError::Config(format!(
                "solver tolerance must be > 0, got {}",
                config.solver_tol
            )));
        }
        // Validate k, ε and max_iter before anything is drawn.
        WellParams::new(config.k, config.epsilon, 0.0, config.max_iter)?;
        let range = config.resolve_init_range(objective)?;

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut lambda = match config.lambda {
            Some(l) => l,
            None => {
                let normal = Normal::new(0.0, LAMBDA_SIGMA).expect("valid sigma");
                normal.sample(&mut rng) * LAMBDA_SCALE
            }
        };
        if config.lambda_abs {
            lambda = lambda.abs();
        }
        let well = WellParams::new(config.k, config.epsilon, lambda, config.max_iter)?;

        let width = range.hi - range.lo;
        let mut first = Vec::with_capacity(config.population);
        let mut particles = Vec::with_capacity(config.population);
        for _ in 0..config.population {
            let mut r1 = Vec::with_capacity(config.dimension);
            let mut r2 = Vec::with_capacity(config.dimension);
            let mut history = Vec::with_capacity(config.dimension);
            for _ in 0..config.dimension {
                let a = range.lo + width * rng.random::<f64>();
                let b = range.lo + width * rng.random::<f64>();
                history.push(DeltaHistory::new(
                    delta_of_r(b, well.k)?,
                    delta_of_r(a, well.k)?,
                ));
                r1.push(a);
                r2.push(b);
            }
            first.push(r1);
            particles.push(ParticleState {
                position: r2,
                history,
            });
        }

        let mut swarm = Swarm {
            config: config.clone(),
            well,
            rng,
            best_cost: f64::INFINITY,
            best_solution: first[0].clone(),
            particles,
            iteration: 1,
            eval_count: 0,
            events: EventCounters::default(),
            trace: Vec::with_capacity(config.max_iter),
        };
        for candidate in &first {
            swarm.consider(objective, candidate);
        }
        swarm.record();
        swarm.iteration = 2;
        for i in 0..swarm.particles.len() {
            let candidate = swarm.particles[i].position.clone();
            swarm.consider(objective, &candidate);
        }
        swarm.record();
        swarm.iteration = FIRST_STEP;
        swarm.record();
        Ok(swarm)
    }

    fn consider(&mut self, objective: &dyn Objective, x: &[f64]) -> f64 {
        let cost = objective.evaluate(x);
        self.eval_count += 1;
        if cost < self.best_cost {
            self.best_cost = cost;
            self.best_solution.clear();
            self.best_solution.extend_from_slice(x);
        }
        cost
    }

    fn record(&mut self) {
        self.trace.push(TracePoint {
            iter: self.iteration,
            best_cost: self.best_cost,
            eval_count: self.eval_count,
        });
    }

    /// One iteration: one random particle (literal) or all particles (sweep).
    pub fn step(&mut self, objective: &dyn Objective) -> Result<Vec<UpdateRecord>> {
        if self.iteration >= self.well.max_iter {
            return Err(QddsError::Contract(format!(
                "step called at iteration {} with max_iter {}",
                self.iteration, self.well.max_iter
            )));
        }
        let theta = learning_rate(self.iteration, self.well.max_iter, self.well.epsilon)?;
        let records = match self.config.mode {
            UpdateMode::Literal => {
                let p = self.rng.random_range(0..self.particles.len());
                vec![self.update_particle(objective, p, theta)?]
            }
            UpdateMode::Sweep => (0..self.particles.len())
                .map(|p| self.update_particle(objective, p, theta))
                .collect::<Result<_>>()?,
        };
        self.iteration += 1;
        self.record();
        Ok(records)
    }

    fn update_particle(
        &mut self,
        objective: &dyn Objective,
        index: usize,
        theta: f64,
    ) -> Result<UpdateRecord> {
        let WellParams { k, lambda, .. } = self.well;
        let dims = self.config.dimension;
        let mut raw = Vec::with_capacity(dims);
        let mut gated = Vec::with_capacity(dims);
        {
            let particle = &self.particles[index];
            for (hist, &pos) in particle.history.iter().zip(&particle.position) {
                if band_branch(hist).is_none() {
                    self.events.in_band_noops += 1;
                }
                let delta_new = delta_update(hist, theta, lambda);
                match solve_r(delta_new, k, self.config.solver_tol) {
                    Ok(sol) => {
                        if sol.bisection_steps > 0 {
                            self.events.solver_fallbacks += 1;
                        }
                        raw.push(sol.r);
                        gated.push(delta_new);
                    }
                    Err(QddsError::Unsolvable { .. }) => {
                        self.events.guard_clamps += 1;
                        raw.push(pos);
                        gated.push(hist.delta_prev);
                    }
                    Err(e) => return Err(e),
                }
            }
        }

        let rho = self.rng.random::<f64>();
        let limit = position_limit(k);
        let blended: Vec<f64> = blend_with_gbest(&raw, &self.best_solution, rho)?
            .into_iter()
            .map(|x| x.clamp(-limit, limit))
            .collect();
        let cost = self.consider(objective, &blended);
        self.events.updates += 1;

        let rebind = self.config.rebind;
        let particle = &mut self.particles[index];
        for (d, hist) in particle.history.iter_mut().enumerate() {
            let stored = match rebind {
                RebindPolicy::Post => delta_of_r(blended[d], k)?,
                RebindPolicy::Pre => gated[d],
            };
            hist.shift(stored);
        }
        particle.position = blended;

        Ok(UpdateRecord {
            context: StepContext {
                selected_particle: index,
                rho,
                theta,
            },
            raw_position: raw,
            cost,
        })
    }

    pub fn is_finished(&self) -> bool {
        self.iteration >= self.well.max_iter
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn well(&self) -> &WellParams {
        &self.well
    }

    pub fn config(&self) -> &SwarmConfig {
        &self.config
    }

    pub fn particles(&self) -> &[ParticleState] {
        &self.particles
    }

    pub fn best_cost(&self) -> f64 {
        self.best_cost
    }

    pub fn best_solution(&self) -> &[f64] {
        &self.best_solution
    }

    pub fn eval_count(&self) -> u64 {
        self.eval_count
    }

    pub fn events(&self) -> &EventCounters {
        &self.events
    }

    pub fn into_result(self) -> RunResult {
        RunResult {
            best_cost: self.best_cost,
            best_solution: self.best_solution,
            trace: self.trace,
            eval_count: self.eval_count,
            events: self.events,
            well: self.well,
            seed: self.config.seed,
        }
    }
}

/// Initialise, then step until the iteration counter reaches max_iter.
pub fn run(config: &SwarmConfig, objective: &dyn Objective) -> Result<RunResult> {
    let mut swarm = Swarm::init(config, objective)?;
    while !swarm.is_finished() {
        swarm.step(objective)?;
    }
    Ok(swarm.into_result())
}
