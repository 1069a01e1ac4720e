//! Benchmark harness: FA vs DE vs the hybrid on standard continuous test
//! functions, with per-run convergence traces and aggregate CSV output.

use rayon::prelude::*;

use crate::error::OptimError;
use crate::optimizer::{de_run, fa_run, hfa_run, HfaConfig, OptimizationTrace};

/// One continuous test function with its canonical box bounds.
#[derive(Debug, Clone)]
pub struct BenchmarkFunction {
    pub name: &'static str,
    pub dimension: usize,
    /// Identical (lower, upper) for every dimension.
    pub bounds: (f64, f64),
    pub evaluate: fn(&[f64]) -> f64,
    pub known_optimum: f64,
}

impl BenchmarkFunction {
    pub fn bounds_vec(&self) -> Vec<(f64, f64)> {
        vec![self.bounds; self.dimension]
    }

    /// The known optimizer point (origin, except all-ones for Rosenbrock).
    pub fn optimum_position(&self) -> Vec<f64> {
        let v = if self.name == "rosenbrock" { 1.0 } else { 0.0 };
        vec![v; self.dimension]
    }
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|v| v * v - 10.0 * (std::f64::consts::TAU * v).cos())
            .sum::<f64>()
}

pub fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sum_sq = x.iter().map(|v| v * v).sum::<f64>() / d;
    let sum_cos = x.iter().map(|v| (std::f64::consts::TAU * v).cos()).sum::<f64>() / d;
    -20.0 * (-0.2 * sum_sq.sqrt()).exp() - sum_cos.exp() + 20.0 + std::f64::consts::E
}

/// Sphere, Rosenbrock, Rastrigin, and Ackley at the given dimension, all
/// with known optimum 0.
pub fn standard_suite(dimension: usize) -> Vec<BenchmarkFunction> {
    vec![
        BenchmarkFunction {
            name: "sphere",
            dimension,
            bounds: (-5.12, 5.12),
            evaluate: sphere,
            known_optimum: 0.0,
        },
        BenchmarkFunction {
            name: "rosenbrock",
            dimension,
            bounds: (-5.0, 10.0),
            evaluate: rosenbrock,
            known_optimum: 0.0,
        },
        BenchmarkFunction {
            name: "rastrigin",
            dimension,
            bounds: (-5.12, 5.12),
            evaluate: rastrigin,
            known_optimum: 0.0,
        },
        BenchmarkFunction {
            name: "ackley",
            dimension,
            bounds: (-32.768, 32.768),
            evaluate: ackley,
            known_optimum: 0.0,
        },
    ]
}

pub fn function_by_name(name: &str, dimension: usize) -> Option<BenchmarkFunction> {
    standard_suite(dimension).into_iter().find(|f| f.name == name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Fa,
    De,
    Hfa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Fa, Algorithm::De, Algorithm::Hfa];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fa => "FA",
            Algorithm::De => "DE",
            Algorithm::Hfa => "HFA",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "FA" => Some(Algorithm::Fa),
            "DE" => Some(Algorithm::De),
            "HFA" => Some(Algorithm::Hfa),
            _ => None,
        }
    }
}

/// The experimental protocol: which algorithms on which functions, how many
/// independent runs, and the shared budget.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub algorithms: Vec<Algorithm>,
    pub functions: Vec<BenchmarkFunction>,
    pub runs: usize,
    pub iterations: usize,
    pub population: usize,
    pub base_seed: u64,
}

impl ExperimentSpec {
    /// Defaults matching the reference protocol: 30 runs, 2000 iterations,
    /// population 40, dimension 30.
    pub fn standard(base_seed: u64) -> Self {
        Self {
            algorithms: Algorithm::ALL.to_vec(),
            functions: standard_suite(30),
            runs: 30,
            iterations: 2000,
            population: 40,
            base_seed,
        }
    }
}

/// Stable per-cell seed: FNV-1a over (base_seed, algorithm, function, run).
pub fn cell_seed(base_seed: u64, algorithm: Algorithm, function: &str, run: usize) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    let mut eat = |bytes: &[u8]| {
        for b in bytes {
            h ^= *b as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    eat(&base_seed.to_le_bytes());
    eat(algorithm.name().as_bytes());
    eat(function.as_bytes());
    eat(&(run as u64).to_le_bytes());
    h
}

/// One (algorithm, function, run) outcome.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub algorithm: Algorithm,
    pub function: &'static str,
    pub run: usize,
    pub outcome: Result<OptimizationTrace, OptimError>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub cells: Vec<CellResult>,
}

/// Executes every cell of the spec. Cells run concurrently; the result
/// vector order is a pure function of the spec, so output is deterministic
/// regardless of worker count.
pub fn run_experiment(spec: &ExperimentSpec) -> ExperimentResults {
    let mut jobs = Vec::new();
    for algorithm in &spec.algorithms {
        for function in &spec.functions {
            for run in 0..spec.runs {
                jobs.push((*algorithm, function.clone(), run));
            }
        }
    }
    let cells = jobs
        .into_par_iter()
        .map(|(algorithm, function, run)| {
            let mut config = HfaConfig::new(
                function.dimension,
                function.bounds_vec(),
                cell_seed(spec.base_seed, algorithm, function.name, run),
            );
            config.population_size = spec.population;
            config.max_iterations = spec.iterations;
            let objective = function.evaluate;
            let outcome = match algorithm {
                Algorithm::Fa => fa_run(&config, &objective),
                Algorithm::De => de_run(&config, &objective),
                Algorithm::Hfa => hfa_run(&config, &objective),
            };
            CellResult {
                algorithm,
                function: function.name,
                run,
                outcome,
            }
        })
        .collect();
    ExperimentResults { cells }
}

impl ExperimentResults {
    /// Final best fitness per successful run of (algorithm, function).
    pub fn finals(&self, algorithm: Algorithm, function: &str) -> Vec<f64> {
        self.cells
            .iter()
            .filter(|c| c.algorithm == algorithm && c.function == function)
            .filter_map(|c| c.outcome.as_ref().ok())
            .map(|t| t.best_solution.fitness)
            .collect()
    }

    /// Summary CSV: one row per (algorithm, function) aggregate.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from(
            "algorithm,function,runs,mean_final,std_final,best_final,worst_final,mean_evaluations\n",
        );
        let mut keys: Vec<(Algorithm, &'static str)> = Vec::new();
        for c in &self.cells {
            if !keys.contains(&(c.algorithm, c.function)) {
                keys.push((c.algorithm, c.function));
            }
        }
        for (algorithm, function) in keys {
            let group: Vec<&CellResult> = self
                .cells
                .iter()
                .filter(|c| c.algorithm == algorithm && c.function == function)
                .collect();
            let finals: Vec<f64> = group
                .iter()
                .filter_map(|c| c.outcome.as_ref().ok())
                .map(|t| t.best_solution.fitness)
                .collect();
            let evals: Vec<f64> = group
                .iter()
                .filter_map(|c| c.outcome.as_ref().ok())
                .map(|t| t.evaluations as f64)
                .collect();
            let n = finals.len();
            let (mean, std, best, worst, mean_evals) = if n == 0 {
                (f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN)
            } else {
                let mean = finals.iter().sum::<f64>() / n as f64;
                let var = finals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                    / (n.max(2) - 1) as f64;
                let best = finals.iter().cloned().fold(f64::INFINITY, f64::min);
                let worst = finals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mean_evals = evals.iter().sum::<f64>() / n as f64;
                (mean, var.sqrt(), best, worst, mean_evals)
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                algorithm.name(),
                function,
                group.len(),
                mean,
                std,
                best,
                worst,
                mean_evals
            ));
        }
        out
    }

    /// Convergence CSV: one row per iteration of every run; failed cells
    /// emit a single flagged row so no cell is silently omitted.
    pub fn convergence_csv(&self) -> String {
        let mut out = String::from("algorithm,function,run,iteration,best_fitness\n");
        for c in &self.cells {
            match &c.outcome {
                Ok(trace) => {
                    for (iteration, best) in trace.best_per_iteration.iter().enumerate() {
                        out.push_str(&format!(
                            "{},{},{},{},{}\n",
                            c.algorithm.name(),
                            c.function,
                            c.run,
                            iteration,
                            best
                        ));
                    }
                }
                Err(_) => {
                    out.push_str(&format!(
                        "{},{},{},0,failed\n",
                        c.algorithm.name(),
                        c.function,
                        c.run
                    ));
                }
            }
        }
        out
    }
}
