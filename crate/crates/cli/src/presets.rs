//! Canonical experiment cells: every benchmark at populations 20/40/80 and
//! dimensions 10/20/30, plus the two FIR designs.

use qdds_core::BenchmarkKind;

use crate::config::ExperimentConfig;

pub const POPULATIONS: [usize; 3] = [20, 40, 80];
pub const DIMENSIONS: [usize; 3] = [10, 20, 30];
pub const FIR_POPULATION: usize = 1000;

/// Iteration budget paired with each benchmark dimension.
pub fn iterations_for(dim: usize) -> usize {
    match dim {
        10 => 250,
        20 => 375,
        _ => 500,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub config: ExperimentConfig,
}

pub fn all_presets() -> Vec<Preset> {
    let mut presets = Vec::with_capacity(38);
    for kind in BenchmarkKind::ALL {
        for pop in POPULATIONS {
            for dim in DIMENSIONS {
                presets.push(Preset {
                    name: format!("{}-p{pop}-d{dim}", kind.name()),
                    config: ExperimentConfig::benchmark(kind, dim, pop, iterations_for(dim)),
                });
            }
        }
    }
    for (order, iters) in [(10, 250), (20, 500)] {
        presets.push(Preset {
            name: format!("fir-{order}"),
            config: ExperimentConfig::fir(order, FIR_POPULATION, iters),
        });
    }
    presets
}

pub fn find_preset(name: &str) -> Option<Preset> {
    all_presets().into_iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Function;
    use std::collections::HashSet;

    #[test]
    fn enumerates_every_cell() {
        let presets = all_presets();
        assert_eq!(presets.len(), 38);
        let names: HashSet<_> = presets.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names.len(), 38);
        assert_eq!(
            presets
                .iter()
                .filter(|p| p.config.function == Function::Fir)
                .count(),
            2
        );
        for p in &presets {
            assert!(p.config.validate().is_ok(), "{}", p.name);
            assert_eq!(p.config.trials, 10);
        }
    }

    #[test]
    fn lookup() {
        let p = find_preset("griewank-p40-d20").unwrap();
        assert_eq!((p.config.pop, p.config.dim, p.config.iters), (40, 20, 375));
        let fir = find_preset("fir-20").unwrap();
        assert_eq!(
            (fir.config.order, fir.config.pop, fir.config.iters),
            (20, 1000, 500)
        );
        assert!(find_preset("sphere-p10-d10").is_none());
    }
}
