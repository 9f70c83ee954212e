//! Ways of choosing the radius vector, selectable by name.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bounds::RadiusBounds;
use super::objective::{Objective, Reduction};
use super::optimize::{BoxBounds, Minimizer, MinimizerRegistry, Minimum, OptimizerParams};
use crate::complex::Complex;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadiusMode {
    /// Optimize the radii so each simplex's circles meet in one point.
    #[serde(rename = "exact")]
    ExactIntersection,
    /// Mid-interval radii; vertices are plain radical centers.
    #[serde(rename = "radical")]
    RadicalCenter,
    /// One radius for every point; vertices become circumcenters.
    #[serde(rename = "equal")]
    EqualRadii,
}

impl RadiusMode {
    pub fn name(self) -> &'static str {
        match self {
            RadiusMode::ExactIntersection => "exact",
            RadiusMode::RadicalCenter => "radical",
            RadiusMode::EqualRadii => "equal",
        }
    }
}

impl fmt::Display for RadiusMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RadiusMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(RadiusMode::ExactIntersection),
            "radical" => Ok(RadiusMode::RadicalCenter),
            "equal" => Ok(RadiusMode::EqualRadii),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusVector {
    pub r: Vec<f64>,
    pub mode: RadiusMode,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions<'a> {
    pub seed: u64,
    /// Starting radii for the optimizer; ignored by the other strategies.
    pub warm_start: Option<&'a [f64]>,
    pub reduction: Reduction,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub radii: RadiusVector,
    /// Intervals used, when the strategy needs them.
    pub bounds: Option<Vec<RadiusBounds>>,
    pub objective: f64,
    /// Largest per-simplex scaled power mismatch.
    pub max_residual: f64,
    /// Optimizer report, for optimizing strategies.
    pub minimum: Option<Minimum>,
}

impl Solution {
    pub fn converged(&self) -> bool {
        self.minimum.as_ref().is_none_or(Minimum::converged)
    }
}

pub trait RadiusStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn mode(&self) -> RadiusMode;
    fn solve(&self, complex: &dyn Complex, opts: &SolveOptions<'_>) -> Result<Solution>;
}

fn finish(complex: &dyn Complex, r: Vec<f64>, mode: RadiusMode, bounds: Option<Vec<RadiusBounds>>, minimum: Option<Minimum>, reduction: Reduction) -> Result<Solution> {
    let obj = Objective::new(complex)?.with_reduction(reduction);
    Ok(Solution {
        objective: obj.value(&r),
        max_residual: obj.max_residual(&r),
        radii: RadiusVector { r, mode },
        bounds,
        minimum,
    })
}

/// Global search followed by local polish.
pub struct ExactStrategy {
    minimizer: Arc<dyn Minimizer>,
}

impl ExactStrategy {
    pub fn new(minimizer: Arc<dyn Minimizer>) -> Self {
        ExactStrategy { minimizer }
    }
}

/// Move a start point strictly inside the box.
fn interior_start(start: &[f64], bounds: &BoxBounds) -> Vec<f64> {
    start
        .iter()
        .enumerate()
        .map(|(d, &v)| {
            let t = ((v - bounds.lo[d]) / bounds.width(d)).clamp(1e-6, 1.0 - 1e-6);
            if bounds.lo[d] < v && v < bounds.hi[d] {
                v
            } else {
                bounds.at(t)[d]
            }
        })
        .collect()
}

impl RadiusStrategy for ExactStrategy {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn mode(&self) -> RadiusMode {
        RadiusMode::ExactIntersection
    }

    fn solve(&self, complex: &dyn Complex, opts: &SolveOptions<'_>) -> Result<Solution> {
        let bounds = complex.bounds()?;
        let obj = Objective::new(complex)?;
        let boxb = BoxBounds::new(bounds.iter().map(|b| b.lo).collect(), bounds.iter().map(|b| b.hi).collect());
        let start = match opts.warm_start {
            Some(w) if w.len() != complex.n_points() => {
                return Err(Error::LengthMismatch {
                    expected: complex.n_points(),
                    found: w.len(),
                })
            }
            Some(w) => Some(interior_start(w, &boxb)),
            None => None,
        };
        let f = |r: &[f64]| obj.value(r);
        let m = self.minimizer.minimize(&f, &boxb, start.as_deref(), opts.seed);
        finish(complex, m.x.clone(), self.mode(), Some(bounds), Some(m), opts.reduction)
    }
}

/// `r_i = (lo_i + hi_i) / 2`.
pub struct RadicalStrategy;

impl RadiusStrategy for RadicalStrategy {
    fn name(&self) -> &'static str {
        "radical"
    }

    fn mode(&self) -> RadiusMode {
        RadiusMode::RadicalCenter
    }

    fn solve(&self, complex: &dyn Complex, opts: &SolveOptions<'_>) -> Result<Solution> {
        let bounds = complex.bounds()?;
        let r = bounds.iter().map(|b| b.at(0.5)).collect();
        finish(complex, r, self.mode(), Some(bounds), None, opts.reduction)
    }
}

/// Half the shortest Delaunay edge for every point. Radius intervals are not
/// consulted.
pub struct EqualStrategy;

impl RadiusStrategy for EqualStrategy {
    fn name(&self) -> &'static str {
        "equal"
    }

    fn mode(&self) -> RadiusMode {
        RadiusMode::EqualRadii
    }

    fn solve(&self, complex: &dyn Complex, opts: &SolveOptions<'_>) -> Result<Solution> {
        let r = vec![0.5 * complex.shortest_edge(); complex.n_points()];
        finish(complex, r, self.mode(), None, None, opts.reduction)
    }
}

#[derive(Clone, Default)]
pub struct StrategyRegistry {
    entries: BTreeMap<&'static str, Arc<dyn RadiusStrategy>>,
}

impl StrategyRegistry {
    /// `exact` (soft selection with Rosenbrock polish), `radical` and `equal`.
    pub fn with_defaults(params: &OptimizerParams) -> Self {
        let minimizers = MinimizerRegistry::with_defaults(params);
        let mut reg = StrategyRegistry::default();
        reg.register(Arc::new(ExactStrategy::new(minimizers.get("soft-selection").expect("registered"))));
        reg.register(Arc::new(RadicalStrategy));
        reg.register(Arc::new(EqualStrategy));
        reg
    }

    pub fn register(&mut self, s: Arc<dyn RadiusStrategy>) {
        self.entries.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn RadiusStrategy>> {
        self.entries.get(name).cloned().ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

/// Solve with the default strategy for `mode`.
pub fn solve_radii(complex: &dyn Complex, mode: RadiusMode, opts: &SolveOptions<'_>, params: &OptimizerParams) -> Result<Solution> {
    StrategyRegistry::with_defaults(params).get(mode.name())?.solve(complex, opts)
}
