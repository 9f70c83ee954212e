//! Derivative-free minimizers over an open box, selectable by name.

mod rosenbrock;
mod soft_selection;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use rosenbrock::{Rosenbrock, RosenbrockParams};
pub use soft_selection::{SoftSelection, SoftSelectionParams};

use crate::error::{Error, Result};

/// Open box `lo < x < hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        BoxBounds { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| l < v && v < h)
    }

    pub fn width(&self, d: usize) -> f64 {
        self.hi[d] - self.lo[d]
    }

    /// Interior point at fraction `t` along every coordinate.
    pub fn at(&self, t: f64) -> Vec<f64> {
        (0..self.dim()).map(|d| self.lo[d] + t * self.width(d)).collect()
    }

    pub fn mean_width(&self) -> f64 {
        (0..self.dim()).map(|d| self.width(d)).sum::<f64>() / self.dim().max(1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// All step lengths fell below the step tolerance.
    StepTolerance,
    /// A full stage improved the value by less than the value tolerance.
    ValueTolerance,
    /// The evaluation budget ran out; the result is the best point seen.
    MaxEvaluationsExceeded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub termination: Termination,
    /// Best value per generation (population methods) or per stage.
    pub trace: Vec<f64>,
}

impl Minimum {
    pub fn converged(&self) -> bool {
        self.termination != Termination::MaxEvaluationsExceeded
    }
}

/// Objective handle: must be finite everywhere inside the box.
pub type ObjectiveFn<'a> = dyn Fn(&[f64]) -> f64 + Sync + 'a;

pub trait Minimizer: Send + Sync {
    fn name(&self) -> &'static str;

    /// Minimize `f` over the open box. `start`, when given, must lie inside
    /// the box; `seed` drives any randomness.
    fn minimize(&self, f: &ObjectiveFn<'_>, bounds: &BoxBounds, start: Option<&[f64]>, seed: u64) -> Minimum;
}

/// Tunables for every registered minimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerParams {
    pub rosenbrock: RosenbrockParams,
    pub soft_selection: SoftSelectionParams,
}

/// Minimizers addressable by name.
#[derive(Clone, Default)]
pub struct MinimizerRegistry {
    entries: BTreeMap<&'static str, Arc<dyn Minimizer>>,
}

impl MinimizerRegistry {
    /// `rosenbrock` and `soft-selection` (which polishes with Rosenbrock).
    pub fn with_defaults(params: &OptimizerParams) -> Self {
        let mut reg = MinimizerRegistry::default();
        reg.register(Arc::new(Rosenbrock::new(params.rosenbrock.clone())));
        reg.register(Arc::new(SoftSelection::new(params.soft_selection.clone(), params.rosenbrock.clone())));
        reg
    }

    pub fn register(&mut self, m: Arc<dyn Minimizer>) {
        self.entries.insert(m.name(), m);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Minimizer>> {
        self.entries.get(name).cloned().ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let reg = MinimizerRegistry::with_defaults(&OptimizerParams::default());
        assert_eq!(reg.names(), vec!["rosenbrock", "soft-selection"]);
        assert_eq!(reg.get("rosenbrock").unwrap().name(), "rosenbrock");
        assert!(matches!(reg.get("nelder-mead"), Err(Error::UnknownStrategy(_))));
    }
}
