//! Rosenbrock's method of rotating coordinates.
//!
//! Each stage probes along an orthonormal set of directions, expanding the
//! step after a success and reversing and contracting it after a failure.
//! Once every direction has seen a success followed by a failure, the
//! directions are rotated by Gram-Schmidt so that the first one points along
//! the progress made during the stage.

use serde::{Deserialize, Serialize};

use super::{BoxBounds, Minimizer, Minimum, ObjectiveFn, Termination};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RosenbrockParams {
    /// Step multiplier after a success.
    pub expansion: f64,
    /// Step multiplier after a failure (negative: the direction reverses).
    pub contraction: f64,
    /// Initial step as a fraction of each coordinate's interval width.
    pub initial_step: f64,
    /// Stop when every step is below this fraction of the mean interval width.
    pub tol_step: f64,
    /// Stop when a stage improves the value by less than this relative amount.
    pub tol_f: f64,
    /// Evaluation budget per unknown.
    pub max_evals_per_dim: usize,
}

impl Default for RosenbrockParams {
    fn default() -> Self {
        RosenbrockParams {
            expansion: 3.0,
            contraction: -0.5,
            initial_step: 0.1,
            tol_step: 1e-10,
            tol_f: 1e-14,
            max_evals_per_dim: 100_000,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Rosenbrock {
    pub params: RosenbrockParams,
}

impl Rosenbrock {
    pub fn new(params: RosenbrockParams) -> Self {
        Rosenbrock { params }
    }

    pub fn run(&self, f: &ObjectiveFn<'_>, bounds: &BoxBounds, start: &[f64]) -> Minimum {
        let p = &self.params;
        let n = bounds.dim();
        assert!(bounds.contains(start), "start must lie strictly inside the bounds");
        let max_evals = p.max_evals_per_dim.saturating_mul(n.max(1));
        let floor = p.tol_step * bounds.mean_width();

        let mut x = start.to_vec();
        let mut fx = f(&x);
        let mut evals = 1;
        let mut dirs: Vec<Vec<f64>> = (0..n)
            .map(|k| (0..n).map(|d| if d == k { 1.0 } else { 0.0 }).collect())
            .collect();
        let mut steps: Vec<f64> = (0..n).map(|k| p.initial_step * bounds.width(k)).collect();
        let mut progress = vec![0.0; n];
        let mut succeeded = vec![false; n];
        let mut finished = vec![false; n];
        let mut stage_start = fx;
        let mut trace = vec![fx];
        let mut trial = vec![0.0; n];

        let termination = 'outer: loop {
            for k in 0..n {
                if steps.iter().all(|s| s.abs() < floor) {
                    break 'outer Termination::StepTolerance;
                }
                if evals >= max_evals {
                    break 'outer Termination::MaxEvaluationsExceeded;
                }
                for d in 0..n {
                    trial[d] = x[d] + steps[k] * dirs[k][d];
                }
                let better = bounds.contains(&trial) && {
                    evals += 1;
                    let ft = f(&trial);
                    if ft <= fx {
                        fx = ft;
                        true
                    } else {
                        false
                    }
                };
                if better {
                    x.copy_from_slice(&trial);
                    progress[k] += steps[k];
                    steps[k] *= p.expansion;
                    succeeded[k] = true;
                } else {
                    steps[k] *= p.contraction;
                    if succeeded[k] {
                        finished[k] = true;
                    }
                }
            }
            if finished.iter().all(|&b| b) {
                trace.push(fx);
                if stage_start - fx <= p.tol_f * stage_start.abs() {
                    break Termination::ValueTolerance;
                }
                stage_start = fx;
                dirs = rotate(&dirs, &progress);
                for s in steps.iter_mut() {
                    *s = s.abs();
                }
                progress.iter_mut().for_each(|v| *v = 0.0);
                succeeded.iter_mut().for_each(|v| *v = false);
                finished.iter_mut().for_each(|v| *v = false);
            }
        };
        Minimum {
            x,
            value: fx,
            evaluations: evals,
            termination,
            trace,
        }
    }
}

/// New orthonormal directions from the stage's accumulated progress.
fn rotate(dirs: &[Vec<f64>], progress: &[f64]) -> Vec<Vec<f64>> {
    let n = dirs.len();
    let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(2 * n);
    for k in 0..n {
        if progress[k] != 0.0 {
            let mut a = vec![0.0; n];
            for j in k..n {
                for d in 0..n {
                    a[d] += progress[j] * dirs[j][d];
                }
            }
            candidates.push(a);
        }
    }
    candidates.extend(dirs.iter().cloned());
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(n);
    for mut v in candidates {
        if out.len() == n {
            break;
        }
        let norm0 = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm0 == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for u in &out {
                let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= dot * b);
            }
        }
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-10 * norm0 {
            v.iter_mut().for_each(|c| *c /= norm);
            out.push(v);
        }
    }
    debug_assert_eq!(out.len(), n);
    out
}

impl Minimizer for Rosenbrock {
    fn name(&self) -> &'static str {
        "rosenbrock"
    }

    fn minimize(&self, f: &ObjectiveFn<'_>, bounds: &BoxBounds, start: Option<&[f64]>, _seed: u64) -> Minimum {
        let x0 = start.map(<[f64]>::to_vec).unwrap_or_else(|| bounds.at(0.5));
        self.run(f, bounds, &x0)
    }
}
