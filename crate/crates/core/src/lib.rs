//! Quantum double delta swarm (QDDS) optimisation.
//!
//! Each particle dimension carries δ = e^{2kr} - 5e^{-2kr} + 4kr + 4, the
//! normaliser of a bound state confined between two co-located delta wells.
//! The swarm nudges δ back into the band (0.5δ_{t-1}, 2δ_{t-1}), solves the
//! transcendental map back to a position and blends it with the global best.
//!
//! ```
//! use qdds_core::{run, Benchmark, BenchmarkKind, SwarmConfig};
//!
//! let objective = Benchmark::new(BenchmarkKind::Sphere, 4).unwrap();
//! let result = run(&SwarmConfig::new(4, 10, 100, 42), &objective).unwrap();
//! assert!(result.best_cost.is_finite());
//! ```

pub mod engine;
pub mod error;
pub mod objectives;
pub mod probe;
pub mod quad;
pub mod rng;
pub mod well;

pub use engine::{
    blend_with_gbest, run, EventCounters, ParticleState, RebindPolicy, RunResult, StepContext,
    Swarm, SwarmConfig, TracePoint, UpdateMode, UpdateRecord,
};
pub use error::{QddsError, Result};
pub use objectives::fir::{
    evaluate_filter, expand_symmetric, fir_band_errors, fir_cost, fir_response_magnitude,
    read_coefficients, stopband_attenuation_db, stopband_max_db, write_coefficients,
};
pub use objectives::{
    Benchmark, BenchmarkKind, FilterEval, FilterSpec, FirObjective, Interval, KnownMin, Objective,
};
pub use probe::{confinement_integral, psi_even, WaveProbe};
pub use rng::trial_seed;
pub use well::{
    delta_of_r, delta_update, learning_rate, r_of_delta, DeltaHistory, WellParams,
    DEFAULT_SOLVE_TOL, OVERFLOW_GUARD,
};
