//! Full optimization runs: firefly-only, DE-only, and the hybrid that
//! evolves two subpopulations per iteration.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::de::de_generation;
use super::{
    clamp_to_bounds, fa_iteration, rank_best_first, HfaConfig, Objective, OptimizationTrace,
    Orientation, SolutionVector,
};
use crate::error::OptimError;

struct RunState {
    population: Vec<SolutionVector>,
    best: SolutionVector,
    trace: Vec<f64>,
    evaluations: u64,
}

impl RunState {
    /// Uniform random initialization within bounds, with the first
    /// `injected.len()` members replaced by the injected candidates
    /// (clamped). Every member is evaluated once.
    fn init(
        config: &HfaConfig,
        objective: &dyn Objective,
        injected: &[Vec<f64>],
        rng: &mut ChaCha8Rng,
    ) -> Result<Self, OptimError> {
        config.validate()?;
        if injected.len() > config.population_size {
            return Err(OptimError::InvalidConfig(format!(
                "{} injected candidates exceed population size {}",
                injected.len(),
                config.population_size
            )));
        }
        let mut population = Vec::with_capacity(config.population_size);
        for i in 0..config.population_size {
            let mut position: Vec<f64> = config
                .bounds
                .iter()
                .map(|(lo, hi)| rng.gen_range(*lo..*hi))
                .collect();
            if let Some(seeded) = injected.get(i) {
                if seeded.len() != config.dimension {
                    return Err(OptimError::DimensionMismatch {
                        expected: config.dimension,
                        got: seeded.len(),
                    });
                }
                position = seeded.clone();
                clamp_to_bounds(&mut position, &config.bounds);
            }
            let fitness = objective.evaluate(&position);
            population.push(SolutionVector { position, fitness });
        }
        let best = best_of(&population, config.orientation).clone();
        Ok(Self {
            evaluations: config.population_size as u64,
            population,
            best,
            trace: Vec::with_capacity(config.max_iterations),
        })
    }

    /// Records the iteration's global best; the tracked best only ever
    /// improves, so the trace is monotone by construction.
    fn close_iteration(&mut self, orientation: Orientation) {
        let candidate = best_of(&self.population, orientation);
        if orientation.is_better(candidate.fitness, self.best.fitness) {
            self.best = candidate.clone();
        }
        self.trace.push(self.best.fitness);
    }

    fn finish(self) -> OptimizationTrace {
        OptimizationTrace {
            best_per_iteration: self.trace,
            best_solution: self.best,
            evaluations: self.evaluations,
        }
    }
}

fn best_of(population: &[SolutionVector], orientation: Orientation) -> &SolutionVector {
    population
        .iter()
        .reduce(|a, b| {
            if orientation.is_better(b.fitness, a.fitness) {
                b
            } else {
                a
            }
        })
        .expect("non-empty population")
}

/// Firefly-only run over the whole population.
pub fn fa_run(
    config: &HfaConfig,
    objective: &dyn Objective,
) -> Result<OptimizationTrace, OptimError> {
    let mut master = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut state = RunState::init(config, objective, &[], &mut master)?;
    let mut run_rng = ChaCha8Rng::seed_from_u64(master.gen());
    for iteration in 0..config.max_iterations {
        state.evaluations += fa_iteration(
            &mut state.population,
            &config.firefly,
            &config.bounds,
            config.orientation,
            iteration,
            objective,
            &mut run_rng,
        );
        state.close_iteration(config.orientation);
    }
    Ok(state.finish())
}

/// DE-only run over the whole population. Donors come from the
/// start-of-generation snapshot, per the classic generation semantics.
pub fn de_run(
    config: &HfaConfig,
    objective: &dyn Objective,
) -> Result<OptimizationTrace, OptimError> {
    let mut master = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut state = RunState::init(config, objective, &[], &mut master)?;
    let mut run_rng = ChaCha8Rng::seed_from_u64(master.gen());
    for _ in 0..config.max_iterations {
        let snapshot = state.population.clone();
        state.evaluations += de_generation(
            &mut state.population,
            &snapshot,
            0,
            &config.de,
            &config.bounds,
            config.orientation,
            objective,
            &mut run_rng,
        )?;
        state.close_iteration(config.orientation);
    }
    Ok(state.finish())
}

/// Hybrid run: FA on the first half, DE on the second half, each iteration,
/// then merge and randomly re-split.
pub fn hfa_run(
    config: &HfaConfig,
    objective: &dyn Objective,
) -> Result<OptimizationTrace, OptimError> {
    hfa_run_seeded(config, objective, &[])
}

/// `hfa_run` with caller-provided candidates planted into the initial
/// population (used to inject known-good baselines).
pub fn hfa_run_seeded(
    config: &HfaConfig,
    objective: &dyn Objective,
    injected: &[Vec<f64>],
) -> Result<OptimizationTrace, OptimError> {
    let mut master = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut state = RunState::init(config, objective, injected, &mut master)?;
    let half = config.population_size / 2;

    // First split: rank best-first and deal round-robin, ranks 0,2,4,... to
    // G1 and 1,3,5,... to G2. The population vector stays physically
    // partitioned as [G1 | G2].
    rank_best_first(&mut state.population, config.orientation);
    let mut arranged = Vec::with_capacity(state.population.len());
    for i in (0..state.population.len()).step_by(2) {
        arranged.push(state.population[i].clone());
    }
    for i in (1..state.population.len()).step_by(2) {
        arranged.push(state.population[i].clone());
    }
    state.population = arranged;

    // Each group owns a stream forked from the master seed, so concurrent
    // and sequential group evolution produce identical results.
    let mut g1_rng = ChaCha8Rng::seed_from_u64(master.gen());
    let mut g2_rng = ChaCha8Rng::seed_from_u64(master.gen());

    for iteration in 0..config.max_iterations {
        // Snapshot of the whole population: DE donors are drawn from it so
        // a half-sized group still has enough distinct donors, and the FA
        // half cannot race with the DE half.
        let snapshot = state.population.clone();
        let (g1, g2) = state.population.split_at_mut(half);
        let (fa_evals, de_result) = rayon::join(
            || {
                fa_iteration(
                    g1,
                    &config.firefly,
                    &config.bounds,
                    config.orientation,
                    iteration,
                    objective,
                    &mut g1_rng,
                )
            },
            || {
                de_generation(
                    g2,
                    &snapshot,
                    half,
                    &config.de,
                    &config.bounds,
                    config.orientation,
                    objective,
                    &mut g2_rng,
                )
            },
        );
        state.evaluations += fa_evals + de_result?;
        state.close_iteration(config.orientation);
        // Merge and arbitrarily re-split: a master-stream shuffle keeps the
        // [G1 | G2] layout while randomizing membership.
        state.population.shuffle(&mut master);
    }
    Ok(state.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn config(n: usize, d: usize, iters: usize, seed: u64) -> HfaConfig {
        let mut c = HfaConfig::new(d, vec![(-5.12, 5.12); d], seed);
        c.population_size = n;
        c.max_iterations = iters;
        c
    }

    #[test]
    fn single_iteration_never_worsens_initial_best() {
        let c = config(4, 1, 1, 7);
        let trace = hfa_run(&c, &sphere).unwrap();
        assert_eq!(trace.best_per_iteration.len(), 1);
        assert!(trace.evaluations >= 4);
    }

    #[test]
    fn traces_are_monotone() {
        for seed in [1u64, 2, 3] {
            let c = config(8, 3, 40, seed);
            for trace in [
                fa_run(&c, &sphere).unwrap(),
                de_run(&c, &sphere).unwrap(),
                hfa_run(&c, &sphere).unwrap(),
            ] {
                for w in trace.best_per_iteration.windows(2) {
                    assert!(w[1] <= w[0]);
                }
                assert_eq!(
                    trace.best_solution.fitness,
                    *trace.best_per_iteration.last().unwrap()
                );
            }
        }
    }

    #[test]
    fn identical_seeds_give_identical_traces() {
        let c = config(8, 2, 25, 99);
        let a = hfa_run(&c, &sphere).unwrap();
        let b = hfa_run(&c, &sphere).unwrap();
        assert_eq!(a.best_per_iteration, b.best_per_iteration);
        assert_eq!(a.best_solution.position, b.best_solution.position);
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn de_run_reaches_sphere_tolerance() {
        // sanity threshold checked against an independent classic-DE
        // reference at the same budget
        let mut c = config(8, 2, 200, 5);
        c.bounds = vec![(-5.12, 5.12); 2];
        let trace = de_run(&c, &sphere).unwrap();
        assert!(trace.best_solution.fitness <= 1e-3);
    }

    #[test]
    fn fa_run_identical_population_stays_constant_without_noise() {
        let mut c = config(4, 1, 5, 3);
        c.firefly.eta0 = 0.0;
        // Force an all-identical initial population via injection.
        let trace = hfa_run_seeded(&c, &sphere, &vec![vec![1.0]; 4]).unwrap();
        let first = trace.best_per_iteration[0];
        assert!(trace.best_per_iteration.iter().all(|v| *v == first));
    }

    #[test]
    fn injected_candidate_bounds_are_clamped() {
        let c = config(4, 1, 1, 3);
        let trace = hfa_run_seeded(&c, &sphere, &[vec![100.0]]).unwrap();
        assert!(trace.best_solution.position[0].abs() <= 5.12);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(config(3, 1, 1, 0).validate().is_err()); // odd and < 4
        assert!(config(6, 1, 0, 0).validate().is_err()); // zero iterations
        let mut c = config(4, 2, 1, 0);
        c.bounds = vec![(0.0, 1.0)];
        assert!(c.validate().is_err()); // bounds length mismatch
    }

    #[test]
    fn bound_closure_holds_everywhere() {
        let c = config(8, 2, 30, 17);
        let checked = |x: &[f64]| {
            for v in x {
                assert!((-5.12..=5.12).contains(v), "out of bounds: {v}");
            }
            sphere(x)
        };
        hfa_run(&c, &checked).unwrap();
        fa_run(&c, &checked).unwrap();
        de_run(&c, &checked).unwrap();
    }
}
