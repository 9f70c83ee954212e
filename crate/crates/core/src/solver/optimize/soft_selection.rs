//! Evolutionary global search with soft selection.
//!
//! A population of `mu` parents produces `lambda` Gaussian-mutated offspring
//! per generation. Parents are drawn with probability proportional to a
//! fitness weight, so worse individuals still reproduce, only less often. The
//! next population is the best individual seen so far plus `mu - 1` offspring
//! sampled the same way. The best individual is finally polished with
//! Rosenbrock's method.

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BoxBounds, Minimizer, Minimum, ObjectiveFn, Rosenbrock, RosenbrockParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SoftSelectionParams {
    pub mu: usize,
    pub lambda: usize,
    pub generations: usize,
    /// Initial mutation scale as a fraction of each interval width.
    pub sigma: f64,
    /// Per-generation multiplier on the mutation scale.
    pub sigma_decay: f64,
    /// Fraction of the interval where the first individual starts when no
    /// start point is given.
    pub init_fraction: f64,
    /// Run Rosenbrock's method from the best individual.
    pub polish: bool,
}

impl Default for SoftSelectionParams {
    fn default() -> Self {
        SoftSelectionParams {
            mu: 20,
            lambda: 140,
            generations: 200,
            sigma: 0.1,
            sigma_decay: 0.99,
            init_fraction: 0.62,
            polish: true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SoftSelection {
    pub params: SoftSelectionParams,
    pub polish: RosenbrockParams,
}

struct Individual {
    x: Vec<f64>,
    value: f64,
}

/// Selection weights `exp(-(f - f_best) / spread)`, where `spread` is the
/// distance from the best to the median value.
fn fitness_weights(values: &[f64]) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let best = sorted[0];
    let spread = sorted[sorted.len() / 2] - best;
    values
        .iter()
        .map(|&v| {
            if spread > 0.0 && spread.is_finite() {
                (-(v - best) / spread).exp()
            } else if v == best {
                1.0
            } else {
                0.0
            }
        })
        .map(|w| w.max(1e-300))
        .collect()
}

fn sample_inside<R: Rng>(rng: &mut R, bounds: &BoxBounds) -> Vec<f64> {
    (0..bounds.dim())
        .map(|d| loop {
            let u: f64 = rng.random();
            if u > 0.0 {
                break bounds.lo[d] + u * bounds.width(d);
            }
        })
        .collect()
}

impl SoftSelection {
    pub fn new(params: SoftSelectionParams, polish: RosenbrockParams) -> Self {
        SoftSelection { params, polish }
    }

    fn mutate<R: Rng>(&self, rng: &mut R, parent: &[f64], scale: f64, bounds: &BoxBounds) -> Vec<f64> {
        parent
            .iter()
            .enumerate()
            .map(|(d, &v)| {
                let sd = scale * bounds.width(d);
                for _ in 0..16 {
                    let z: f64 = rng.sample(StandardNormal);
                    let y = v + sd * z;
                    if bounds.lo[d] < y && y < bounds.hi[d] {
                        return y;
                    }
                }
                v
            })
            .collect()
    }
}

impl Minimizer for SoftSelection {
    fn name(&self) -> &'static str {
        "soft-selection"
    }

    fn minimize(&self, f: &ObjectiveFn<'_>, bounds: &BoxBounds, start: Option<&[f64]>, seed: u64) -> Minimum {
        let p = &self.params;
        let mu = p.mu.max(1);
        let lambda = p.lambda.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let mut xs: Vec<Vec<f64>> = Vec::with_capacity(mu);
        xs.push(start.map(<[f64]>::to_vec).unwrap_or_else(|| bounds.at(p.init_fraction)));
        while xs.len() < mu {
            xs.push(sample_inside(&mut rng, bounds));
        }
        let values: Vec<f64> = xs.par_iter().map(|x| f(x)).collect();
        let mut evals = xs.len();
        let mut population: Vec<Individual> = xs.into_iter().zip(values).map(|(x, value)| Individual { x, value }).collect();
        let best_index = |pop: &[Individual]| {
            (0..pop.len())
                .min_by(|&a, &b| pop[a].value.total_cmp(&pop[b].value))
                .unwrap()
        };
        let mut elite = {
            let b = best_index(&population);
            Individual {
                x: population[b].x.clone(),
                value: population[b].value,
            }
        };
        let mut trace = vec![elite.value];

        let mut scale = p.sigma;
        for _ in 0..p.generations {
            let weights = fitness_weights(&population.iter().map(|i| i.value).collect::<Vec<_>>());
            let pick = WeightedIndex::new(&weights).expect("positive weights");
            let children: Vec<Vec<f64>> = (0..lambda)
                .map(|_| {
                    let parent = &population[pick.sample(&mut rng)].x;
                    self.mutate(&mut rng, parent, scale, bounds)
                })
                .collect();
            let values: Vec<f64> = children.par_iter().map(|x| f(x)).collect();
            evals += children.len();
            let offspring: Vec<Individual> = children.into_iter().zip(values).map(|(x, value)| Individual { x, value }).collect();

            let b = best_index(&offspring);
            if offspring[b].value < elite.value {
                elite = Individual {
                    x: offspring[b].x.clone(),
                    value: offspring[b].value,
                };
            }
            let weights = fitness_weights(&offspring.iter().map(|i| i.value).collect::<Vec<_>>());
            let pick = WeightedIndex::new(&weights).expect("positive weights");
            let mut next = Vec::with_capacity(mu);
            next.push(Individual {
                x: elite.x.clone(),
                value: elite.value,
            });
            while next.len() < mu {
                let k = pick.sample(&mut rng);
                next.push(Individual {
                    x: offspring[k].x.clone(),
                    value: offspring[k].value,
                });
            }
            population = next;
            trace.push(population[best_index(&population)].value);
            scale *= p.sigma_decay;
        }

        if p.polish {
            let mut polished = Rosenbrock::new(self.polish.clone()).run(f, bounds, &elite.x);
            polished.evaluations += evals;
            let mut full = trace;
            full.extend(polished.trace.iter().skip(1));
            polished.trace = full;
            polished
        } else {
            Minimum {
                x: elite.x,
                value: elite.value,
                evaluations: evals,
                termination: super::Termination::ValueTolerance,
                trace,
            }
        }
    }
}
