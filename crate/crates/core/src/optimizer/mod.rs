//! Firefly, differential-evolution, and hybrid optimizers over box-bounded
//! continuous search spaces.
//!
//! The hybrid runs the firefly sweep and a DE generation on disjoint halves
//! of the population each iteration, then merges and reshuffles. Each half
//! owns its own random stream forked from the master seed, so the two halves
//! may evolve concurrently without changing results.

mod de;
mod runs;

pub use de::{de_crossover, de_generation, de_mutate, de_select, select_donors};
pub use runs::{de_run, fa_run, hfa_run, hfa_run_seeded};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::OptimError;

/// Whether larger or smaller objective values win.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Maximize,
    Minimize,
}

impl Orientation {
    /// True when `a` is strictly better than `b`.
    pub fn is_better(self, a: f64, b: f64) -> bool {
        match self {
            Orientation::Maximize => a > b,
            Orientation::Minimize => a < b,
        }
    }

    /// True when `a` is at least as good as `b` (greedy acceptance uses this).
    pub fn is_not_worse(self, a: f64, b: f64) -> bool {
        match self {
            Orientation::Maximize => a >= b,
            Orientation::Minimize => a <= b,
        }
    }
}

/// One optimizer candidate: a bounded real vector with its cached fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionVector {
    pub position: Vec<f64>,
    pub fitness: f64,
}

/// Distribution of the firefly random-walk term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepDistribution {
    /// Heavy-tailed steps via Mantegna's construction, stability index 1.5,
    /// scaled by 1% of the per-dimension bound width.
    Levy,
    /// Uniform in [-0.5, 0.5] scaled by the per-dimension bound width.
    Uniform,
    /// Standard normal scaled by 1% of the per-dimension bound width.
    Gaussian,
}

/// Firefly dynamics parameters.
#[derive(Debug, Clone)]
pub struct FireflyParams {
    /// The attractiveness scale; the per-move beta0 is drawn fresh as
    /// `beta0_scale * U(0, 1)` for every pairwise attraction event.
    pub beta0_scale: f64,
    /// Light absorption coefficient, defaulting to 1/S^2 where S is the
    /// mean bound width across dimensions.
    pub gamma: f64,
    /// Initial randomization weight.
    pub eta0: f64,
    /// Multiplicative decay of the randomization weight per iteration.
    pub eta_decay: f64,
    pub step_distribution: StepDistribution,
}

impl FireflyParams {
    /// Defaults with `gamma` derived from the bounds.
    pub fn for_bounds(bounds: &[(f64, f64)]) -> Self {
        let mean_width = bounds.iter().map(|(lo, hi)| hi - lo).sum::<f64>()
            / bounds.len().max(1) as f64;
        let s = if mean_width > 0.0 { mean_width } else { 1.0 };
        Self {
            beta0_scale: 2.0,
            gamma: 1.0 / (s * s),
            eta0: 0.2,
            eta_decay: 0.95,
            step_distribution: StepDistribution::Levy,
        }
    }

    /// Randomization weight at the given iteration: `eta0 * decay^iteration`.
    pub fn eta_at(&self, iteration: usize) -> f64 {
        self.eta0 * self.eta_decay.powi(iteration as i32)
    }
}

/// Classic DE/rand/1/bin parameters.
#[derive(Debug, Clone)]
pub struct DeParams {
    /// Difference-vector amplification F in [0, 2].
    pub f_scale: f64,
    /// Binomial crossover constant Cr in [0, 1].
    pub crossover_rate: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            f_scale: 0.5,
            crossover_rate: 0.9,
        }
    }
}

/// Full configuration for a run of any of the three optimizers.
#[derive(Debug, Clone)]
pub struct HfaConfig {
    pub population_size: usize,
    pub dimension: usize,
    pub max_iterations: usize,
    pub bounds: Vec<(f64, f64)>,
    pub rng_seed: u64,
    pub firefly: FireflyParams,
    pub de: DeParams,
    pub orientation: Orientation,
}

impl HfaConfig {
    /// Defaults: population 40, 2000 iterations, minimization.
    pub fn new(dimension: usize, bounds: Vec<(f64, f64)>, rng_seed: u64) -> Self {
        let firefly = FireflyParams::for_bounds(&bounds);
        Self {
            population_size: 40,
            dimension,
            max_iterations: 2000,
            bounds,
            rng_seed,
            firefly,
            de: DeParams::default(),
            orientation: Orientation::Minimize,
        }
    }

    pub fn validate(&self) -> Result<(), OptimError> {
        if self.population_size < 4 {
            return Err(OptimError::InvalidConfig(format!(
                "population_size {} < 4 (DE needs 3 donors plus a target)",
                self.population_size
            )));
        }
        if self.population_size % 2 != 0 {
            return Err(OptimError::InvalidConfig(format!(
                "population_size {} must be even (two equal groups)",
                self.population_size
            )));
        }
        if self.max_iterations == 0 {
            return Err(OptimError::InvalidConfig("max_iterations must be >= 1".into()));
        }
        if self.dimension == 0 || self.bounds.len() != self.dimension {
            return Err(OptimError::InvalidConfig(format!(
                "bounds length {} does not match dimension {}",
                self.bounds.len(),
                self.dimension
            )));
        }
        if self.bounds.iter().any(|(lo, hi)| !(lo < hi)) {
            return Err(OptimError::InvalidConfig("each bound needs lower < upper".into()));
        }
        if !(self.firefly.gamma > 0.0) {
            return Err(OptimError::InvalidConfig("gamma must be > 0".into()));
        }
        if self.firefly.eta0 < 0.0
            || !(self.firefly.eta_decay > 0.0 && self.firefly.eta_decay <= 1.0)
        {
            return Err(OptimError::InvalidConfig(
                "need eta0 >= 0 and 0 < eta_decay <= 1".into(),
            ));
        }
        if !(0.0..=2.0).contains(&self.de.f_scale) {
            return Err(OptimError::InvalidConfig("f_scale must lie in [0, 2]".into()));
        }
        if !(0.0..=1.0).contains(&self.de.crossover_rate) {
            return Err(OptimError::InvalidConfig("crossover_rate must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Per-iteration global best plus the winning solution and evaluation count.
#[derive(Debug, Clone)]
pub struct OptimizationTrace {
    pub best_per_iteration: Vec<f64>,
    pub best_solution: SolutionVector,
    pub evaluations: u64,
}

/// Objective functions must be pure: no shared mutable state, same output
/// for the same input.
pub trait Objective: Sync {
    fn evaluate(&self, x: &[f64]) -> f64;
}

impl<F: Fn(&[f64]) -> f64 + Sync> Objective for F {
    fn evaluate(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// Clamps each component to its box bound.
pub fn clamp_to_bounds(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, (lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(*lo, *hi);
    }
}

/// Distance-attenuated attractiveness `beta0 * exp(-gamma * r^2)`.
pub fn attractiveness(beta0: f64, gamma: f64, r: f64) -> f64 {
    beta0 * (-gamma * r * r).exp()
}

/// Euclidean distance between two equal-length vectors.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64, OptimError> {
    if a.len() != b.len() {
        return Err(OptimError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Mantegna stability index for the Levy step generator.
const LEVY_ALPHA: f64 = 1.5;

fn levy_sigma() -> f64 {
    use statrs::function::gamma::gamma;
    let num = gamma(1.0 + LEVY_ALPHA) * (std::f64::consts::PI * LEVY_ALPHA / 2.0).sin();
    let den = gamma((1.0 + LEVY_ALPHA) / 2.0) * LEVY_ALPHA * 2f64.powf((LEVY_ALPHA - 1.0) / 2.0);
    (num / den).powf(1.0 / LEVY_ALPHA)
}

/// Heavy-tailed random vector via Mantegna's construction: `u / |v|^(1/alpha)`
/// with `u ~ N(0, sigma_u)`, `v ~ N(0, 1)`.
pub fn levy_step(rng: &mut ChaCha8Rng, dimension: usize) -> Vec<f64> {
    let sigma = levy_sigma();
    (0..dimension)
        .map(|_| {
            let u: f64 = sample_standard_normal(rng) * sigma;
            let v: f64 = sample_standard_normal(rng);
            u / v.abs().powf(1.0 / LEVY_ALPHA)
        })
        .collect()
}

/// Box-Muller standard normal draw (two uniforms per sample).
fn sample_standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // avoid ln(0)
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// One random-walk component for dimension `d`, scaled per the configured
/// distribution and the width of that dimension's bound.
fn walk_component(
    distribution: StepDistribution,
    width: f64,
    rng: &mut ChaCha8Rng,
) -> f64 {
    match distribution {
        StepDistribution::Levy => {
            let sigma = levy_sigma();
            let u = sample_standard_normal(rng) * sigma;
            let v = sample_standard_normal(rng);
            (u / v.abs().powf(1.0 / LEVY_ALPHA)) * 0.01 * width
        }
        StepDistribution::Uniform => (rng.gen::<f64>() - 0.5) * width,
        StepDistribution::Gaussian => sample_standard_normal(rng) * 0.01 * width,
    }
}

/// Moves firefly `xi` toward the brighter `xj` per the attraction update,
/// adding the decayed random walk and clamping to bounds.
///
/// `beta0` is the already-drawn attractiveness scale for this pairwise event;
/// the sweep draws it as `beta0_scale * U(0, 1)` per event.
pub fn firefly_move(
    xi: &[f64],
    xj: &[f64],
    beta0: f64,
    params: &FireflyParams,
    bounds: &[(f64, f64)],
    iteration: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let r = euclidean_distance(xi, xj).expect("equal dimensions");
    let beta = attractiveness(beta0, params.gamma, r);
    let eta = params.eta_at(iteration);
    let mut out: Vec<f64> = xi
        .iter()
        .zip(xj)
        .zip(bounds)
        .map(|((a, b), (lo, hi))| {
            let eps = if eta == 0.0 {
                0.0
            } else {
                walk_component(params.step_distribution, hi - lo, rng)
            };
            a + beta * (b - a) + eta * eps
        })
        .collect();
    clamp_to_bounds(&mut out, bounds);
    out
}

/// One full firefly sweep: for every pair (i, j), if j outshines i, move i
/// toward j and re-evaluate in place. Ranks the population best-first at the
/// end. Returns the number of objective evaluations.
pub fn fa_iteration(
    population: &mut [SolutionVector],
    params: &FireflyParams,
    bounds: &[(f64, f64)],
    orientation: Orientation,
    iteration: usize,
    objective: &dyn Objective,
    rng: &mut ChaCha8Rng,
) -> u64 {
    let n = population.len();
    let mut evals = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if orientation.is_better(population[j].fitness, population[i].fitness) {
                let beta0 = params.beta0_scale * rng.gen::<f64>();
                let moved = firefly_move(
                    &population[i].position,
                    &population[j].position,
                    beta0,
                    params,
                    bounds,
                    iteration,
                    rng,
                );
                population[i].fitness = objective.evaluate(&moved);
                population[i].position = moved;
                evals += 1;
            }
        }
    }
    rank_best_first(population, orientation);
    evals
}

/// Stable sort, best fitness first under the given orientation.
pub(crate) fn rank_best_first(population: &mut [SolutionVector], orientation: Orientation) {
    population.sort_by(|a, b| {
        let ord = a.fitness.partial_cmp(&b.fitness).unwrap_or(std::cmp::Ordering::Equal);
        match orientation {
            Orientation::Minimize => ord,
            Orientation::Maximize => ord.reverse(),
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn attractiveness_at_zero_distance_is_beta0() {
        assert_eq!(attractiveness(1.0, 1.0, 0.0), 1.0);
    }

    #[test]
    fn attractiveness_matches_independent_evaluation() {
        // exp(-1) and 2*exp(-2) evaluated independently
        assert!((attractiveness(1.0, 1.0, 1.0) - 0.36787944117144233).abs() < 1e-15);
        assert!((attractiveness(2.0, 0.5, 2.0) - 0.2706705664732254).abs() < 1e-15);
    }

    #[test]
    fn euclidean_distance_basics() {
        assert_eq!(euclidean_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(
            euclidean_distance(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]).unwrap(),
            0.0
        );
        // sqrt(8) by hand
        assert!((euclidean_distance(&[2.0, 0.0], &[0.0, 2.0]).unwrap() - 2.8284271247461903).abs() < 1e-15);
        assert!(euclidean_distance(&[1.0], &[1.0, 2.0]).is_err());
    }

    fn params_no_noise(gamma: f64) -> FireflyParams {
        FireflyParams {
            beta0_scale: 2.0,
            gamma,
            eta0: 0.0,
            eta_decay: 0.95,
            step_distribution: StepDistribution::Levy,
        }
    }

    #[test]
    fn firefly_move_identical_positions_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = params_no_noise(1.0);
        let out = firefly_move(&[0.3], &[0.3], 1.0, &p, &[(0.0, 1.0)], 0, &mut rng);
        assert_eq!(out, vec![0.3]);
    }

    #[test]
    fn firefly_move_full_attraction_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = params_no_noise(1e-300);
        let out = firefly_move(&[0.0], &[1.0], 1.0, &p, &[(0.0, 1.0)], 0, &mut rng);
        assert!((out[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn firefly_move_matches_hand_value() {
        // r=2 so beta = exp(-0.25*4) = exp(-1); 0 + exp(-1)*2 = 0.735758...
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = params_no_noise(0.25);
        let out = firefly_move(&[0.0], &[2.0], 1.0, &p, &[(-10.0, 10.0)], 0, &mut rng);
        assert!((out[0] - 0.7357588823428847).abs() < 1e-15);
    }

    #[test]
    fn eta_schedule_is_exact() {
        let p = FireflyParams::for_bounds(&[(0.0, 1.0)]);
        for k in 0..50 {
            assert_eq!(p.eta_at(k), 0.2 * 0.95f64.powi(k as i32));
        }
    }

    #[test]
    fn gamma_defaults_to_inverse_mean_width_squared() {
        let p = FireflyParams::for_bounds(&[(-5.0, 5.0), (0.0, 20.0)]);
        // mean width = (10 + 20) / 2 = 15
        assert!((p.gamma - 1.0 / 225.0).abs() < 1e-15);
    }

    #[test]
    fn levy_step_is_deterministic_and_shaped() {
        let a = levy_step(&mut ChaCha8Rng::seed_from_u64(7), 3);
        let b = levy_step(&mut ChaCha8Rng::seed_from_u64(7), 3);
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn levy_tail_is_heavier_than_gaussian() {
        // Monte-Carlo oracle: a unit normal has P(|X| > 10) ~ 1.5e-23,
        // so even a handful of exceedances clears a 10x margin. We compare
        // observed tail fractions directly.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 1_000_000usize;
        let levy_hits = levy_step(&mut rng, n).iter().filter(|v| v.abs() > 10.0).count();
        let mut grng = ChaCha8Rng::seed_from_u64(100);
        let gauss_hits = (0..n)
            .filter(|_| sample_standard_normal(&mut grng).abs() > 10.0)
            .count();
        assert!(levy_hits as f64 >= 10.0 * (gauss_hits.max(1) as f64) || gauss_hits == 0 && levy_hits > 100,
            "levy tail {} not heavier than gaussian tail {}", levy_hits, gauss_hits);
    }

    #[test]
    fn fa_iteration_identical_population_is_fixed_point() {
        let p = params_no_noise(1.0);
        let member = SolutionVector {
            position: vec![0.5, 0.5],
            fitness: 0.5,
        };
        let mut pop = vec![member.clone(); 4];
        let obj = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let evals = fa_iteration(
            &mut pop,
            &p,
            &[(0.0, 1.0), (0.0, 1.0)],
            Orientation::Minimize,
            0,
            &obj,
            &mut ChaCha8Rng::seed_from_u64(3),
        );
        assert_eq!(evals, 0);
        assert!(pop.iter().all(|m| *m == member));
    }

    #[test]
    fn fa_iteration_single_member_is_unchanged() {
        let p = params_no_noise(1.0);
        let mut pop = vec![SolutionVector {
            position: vec![0.25],
            fitness: 0.0625,
        }];
        let obj = |x: &[f64]| x[0] * x[0];
        fa_iteration(
            &mut pop,
            &p,
            &[(0.0, 1.0)],
            Orientation::Minimize,
            0,
            &obj,
            &mut ChaCha8Rng::seed_from_u64(3),
        );
        assert_eq!(pop[0].position, vec![0.25]);
    }

    #[test]
    fn fa_iteration_worse_member_moves_toward_better() {
        // d=1 sphere, minimize: member at 0.8 must move toward 0.1 and the
        // group best must not worsen. Hand re-execution of the double loop:
        // only i=worse has a brighter j, so exactly one move happens.
        let p = params_no_noise(1.0);
        let obj = |x: &[f64]| x[0] * x[0];
        let mut pop = vec![
            SolutionVector { position: vec![0.1], fitness: 0.01 },
            SolutionVector { position: vec![0.8], fitness: 0.64 },
        ];
        let evals = fa_iteration(
            &mut pop,
            &p,
            &[(0.0, 1.0)],
            Orientation::Minimize,
            0,
            &obj,
            &mut ChaCha8Rng::seed_from_u64(11),
        );
        assert_eq!(evals, 1);
        // ranked best first; the group best never worsens
        assert!(pop[0].fitness <= 0.01);
        assert!(pop.iter().all(|m| m.position[0] < 0.8));
        assert!(pop[1].fitness < 0.64);
    }
}
