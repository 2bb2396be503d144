//! Genetic-algorithm wrapper feature selection over bit strings.
//!
//! A chromosome marks selected features with set bits; fitness is the
//! classification performance of the selected subset minus a signed size
//! penalty `w * (|X| - d)`, so subsets smaller than the target size collect
//! a bonus. Offspring replace population members by the three-case rule:
//! superior to both parents → replace the more similar parent (Hamming);
//! between the two → replace the inferior parent; otherwise → replace the
//! worst member of the population.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bit-string feature mask; bit k selects feature k (0-based internally,
/// 1-based in rendered reports).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chromosome {
    bits: Vec<bool>,
}

impl Chromosome {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn random(dim: usize, rng: &mut impl Rng) -> Self {
        Self {
            bits: (0..dim).map(|_| rng.random::<bool>()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// 0-based indices of the selected features, ascending.
    pub fn decode(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }

    /// 1-based positions for reports, matching the usual prose convention
    /// where `00101000` selects features {3, 5}.
    pub fn decode_one_based(&self) -> Vec<usize> {
        self.decode().iter().map(|&i| i + 1).collect()
    }

    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Config(alloc::format!(
                    "bit string may contain only 0/1, found {c:?}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(Self { bits })
    }

    pub fn hamming(&self, other: &Chromosome) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Whether the size penalty keeps its sign (bonus below the target size) or
/// uses the absolute deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyMode {
    Signed,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_prob: f64,
    /// Per-bit flip probability.
    pub mutation_rate: f64,
    /// Penalty coefficient w.
    pub penalty_w: f64,
    /// Target subset size d.
    pub target_size: usize,
    pub generations: usize,
    pub rng_seed: u64,
    pub penalty_mode: PenaltyMode,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 30,
            crossover_prob: 1.0,
            mutation_rate: 0.1,
            penalty_w: 0.5,
            target_size: 4,
            generations: 100,
            rng_seed: 0,
            penalty_mode: PenaltyMode::Signed,
        }
    }
}

impl GaConfig {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.population_size < 2 || self.population_size % 2 != 0 {
            return Err(Error::Config(String::from(
                "population_size must be even and >= 2",
            )));
        }
        if self.generations == 0 {
            return Err(Error::Config(String::from("generations must be >= 1")));
        }
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(alloc::format!("{name} must be in [0, 1]")));
            }
        }
        if dim < 2 {
            return Err(Error::Config(String::from(
                "feature dimension must be >= 2",
            )));
        }
        Ok(())
    }
}

/// One fitness evaluation; `fitness == j - penalty` except for the empty
/// subset, which is pinned to −∞ so it can never be selected as best.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub chromosome: Chromosome,
    /// Classification performance of the subset, in [0, 1].
    pub j: f64,
    pub fitness: f64,
    pub generation: usize,
}

/// The size penalty for a subset of `size` features.
pub fn penalty(cfg: &GaConfig, size: usize) -> f64 {
    let deviation = size as f64 - cfg.target_size as f64;
    match cfg.penalty_mode {
        PenaltyMode::Signed => cfg.penalty_w * deviation,
        PenaltyMode::Absolute => cfg.penalty_w * deviation.abs(),
    }
}

/// Combine performance and size into fitness.
pub fn fitness_value(cfg: &GaConfig, j: f64, size: usize) -> f64 {
    j - penalty(cfg, size)
}

/// Evaluate one chromosome through the subset evaluator `j_fn`.
pub fn evaluate_fitness(
    chromosome: &Chromosome,
    j_fn: &mut dyn FnMut(&[usize]) -> Result<f64>,
    cfg: &GaConfig,
    generation: usize,
) -> Result<FitnessReport> {
    let subset = chromosome.decode();
    if subset.is_empty() {
        return Ok(FitnessReport {
            chromosome: chromosome.clone(),
            j: 0.0,
            fitness: f64::NEG_INFINITY,
            generation,
        });
    }
    let j = j_fn(&subset)?;
    Ok(FitnessReport {
        chromosome: chromosome.clone(),
        j,
        fitness: fitness_value(cfg, j, subset.len()),
        generation,
    })
}

/// Rank-based roulette wheel: individuals sorted by ascending fitness get
/// ranks 1..=N (ties broken by index), and are drawn with probability
/// rank / Σranks. Returns the chosen population index.
pub fn rank_roulette(fitnesses: &[f64], rng: &mut impl Rng) -> usize {
    debug_assert!(!fitnesses.is_empty());
    let n = fitnesses.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fitnesses[a].total_cmp(&fitnesses[b]).then(a.cmp(&b)));
    let total = (n * (n + 1) / 2) as f64;
    let mut target = rng.random::<f64>() * total;
    for (pos, &idx) in order.iter().enumerate() {
        let rank = (pos + 1) as f64;
        if target < rank {
            return idx;
        }
        target -= rank;
    }
    order[n - 1]
}

/// Single-point crossover at a uniform cut in `1..len`; the children are the
/// two complementary recombinations.
pub fn crossover(
    a: &Chromosome,
    b: &Chromosome,
    rng: &mut impl Rng,
) -> Result<(Chromosome, Chromosome)> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let cut = rng.random_range(1..a.len());
    let mut c1 = a.bits.clone();
    let mut c2 = b.bits.clone();
    c1[cut..].copy_from_slice(&b.bits[cut..]);
    c2[cut..].copy_from_slice(&a.bits[cut..]);
    Ok((Chromosome::new(c1), Chromosome::new(c2)))
}

/// Flip each bit independently with probability `rate`.
pub fn mutate(c: &Chromosome, rate: f64, rng: &mut impl Rng) -> Chromosome {
    Chromosome {
        bits: c
            .bits
            .iter()
            .map(|&b| if rng.random::<f64>() < rate { !b } else { b })
            .collect(),
    }
}

/// Apply the replacement rule for one offspring whose parents sit at
/// `parent_a`/`parent_b`. Exactly one member is overwritten; its index is
/// returned. Ties (equal fitness, equal Hamming distance) resolve to the
/// lower population index.
pub fn replace(
    population: &mut [FitnessReport],
    parent_a: usize,
    parent_b: usize,
    offspring: FitnessReport,
) -> usize {
    let fa = population[parent_a].fitness;
    let fb = population[parent_b].fitness;
    let fc = offspring.fitness;
    let target = if fc > fa.max(fb) {
        // Similar parent: smaller Hamming distance to the offspring.
        let da = offspring.chromosome.hamming(&population[parent_a].chromosome);
        let db = offspring.chromosome.hamming(&population[parent_b].chromosome);
        if da < db || (da == db && parent_a <= parent_b) {
            parent_a
        } else {
            parent_b
        }
    } else if fc > fa.min(fb) {
        // Inferior parent.
        if fa < fb || (fa == fb && parent_a <= parent_b) {
            parent_a
        } else {
            parent_b
        }
    } else {
        // Worst member of the whole population.
        let mut worst = 0usize;
        for i in 1..population.len() {
            if population[i].fitness < population[worst].fitness {
                worst = i;
            }
        }
        worst
    };
    population[target] = offspring;
    target
}

/// Full GA run and its evaluation trail.
#[derive(Debug, Clone, PartialEq)]
pub struct GaRun {
    /// Best-ever individual across the whole run.
    pub best: FitnessReport,
    /// Every evaluation in order: the initial population (generation 0)
    /// followed by each generation's offspring.
    pub history: Vec<FitnessReport>,
}

impl GaRun {
    /// Running best fitness after each generation, for monotonicity checks.
    pub fn best_fitness_per_generation(&self) -> Vec<f64> {
        let generations = self.history.iter().map(|r| r.generation).max().unwrap_or(0);
        let mut out = Vec::with_capacity(generations + 1);
        let mut best = f64::NEG_INFINITY;
        for g in 0..=generations {
            for r in self.history.iter().filter(|r| r.generation == g) {
                if r.fitness > best {
                    best = r.fitness;
                }
            }
            out.push(best);
        }
        out
    }
}

/// Run the GA: random initial population (each bit a fair coin from the
/// seed), then per generation `population_size / 2` parent pairs drawn by
/// rank roulette, recombined with probability `crossover_prob`, mutated
/// bit-wise, evaluated, and inserted by [`replace`]. Evaluations are cached
/// by bit string, so a subset revisited in any generation costs nothing.
pub fn run_ga(
    dim: usize,
    cfg: &GaConfig,
    j_fn: &mut dyn FnMut(&[usize]) -> Result<f64>,
) -> Result<GaRun> {
    cfg.validate(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut cache: BTreeMap<Vec<bool>, f64> = BTreeMap::new();

    let mut evaluate = |c: &Chromosome,
                        generation: usize,
                        cache: &mut BTreeMap<Vec<bool>, f64>|
     -> Result<FitnessReport> {
        if c.ones() == 0 {
            return Ok(FitnessReport {
                chromosome: c.clone(),
                j: 0.0,
                fitness: f64::NEG_INFINITY,
                generation,
            });
        }
        let j = match cache.get(c.bits()) {
            Some(&j) => j,
            None => {
                let j = j_fn(&c.decode()).map_err(|e| Error::Evaluator {
                    generation,
                    source: Box::new(e),
                })?;
                cache.insert(c.bits().to_vec(), j);
                j
            }
        };
        Ok(FitnessReport {
            chromosome: c.clone(),
            j,
            fitness: fitness_value(cfg, j, c.ones()),
            generation,
        })
    };

    let mut history = Vec::new();
    let mut population = Vec::with_capacity(cfg.population_size);
    for _ in 0..cfg.population_size {
        let c = Chromosome::random(dim, &mut rng);
        let report = evaluate(&c, 0, &mut cache)?;
        history.push(report.clone());
        population.push(report);
    }
    let mut best = population
        .iter()
        .max_by(|a, b| a.fitness.total_cmp(&b.fitness))
        .expect("population is non-empty")
        .clone();

    for generation in 1..=cfg.generations {
        for _ in 0..cfg.population_size / 2 {
            let fitnesses: Vec<f64> = population.iter().map(|r| r.fitness).collect();
            let pa = rank_roulette(&fitnesses, &mut rng);
            let pb = rank_roulette(&fitnesses, &mut rng);
            let (c1, c2) = if rng.random::<f64>() < cfg.crossover_prob {
                crossover(
                    &population[pa].chromosome,
                    &population[pb].chromosome,
                    &mut rng,
                )?
            } else {
                (
                    population[pa].chromosome.clone(),
                    population[pb].chromosome.clone(),
                )
            };
            for child in [c1, c2] {
                let mutated = mutate(&child, cfg.mutation_rate, &mut rng);
                let report = evaluate(&mutated, generation, &mut cache)?;
                history.push(report.clone());
                if report.fitness > best.fitness {
                    best = report.clone();
                }
                replace(&mut population, pa, pb, report);
            }
        }
    }

    Ok(GaRun { best, history })
}
