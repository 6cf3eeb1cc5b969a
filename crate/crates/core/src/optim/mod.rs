//! Minimisation over products of probability simplices and intervals.
//!
//! Two tiers share one problem interface: [`grid_search`] enumerates every
//! lattice point with a fixed denominator and is the ground truth for small
//! parametrisations; [`multistart_search`] refines seeded random starts with a
//! compass search and handles the full auxiliary tensors.

mod compass;
mod domain;
mod grid;
mod line;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use compass::{multistart_search, multistart_search_seeded};
pub use domain::{Block, SearchDomain};
pub use grid::grid_search;
pub use line::{golden_section_max, maximize_1d};

/// An objective with an optional inequality constraint.
///
/// A point is feasible when `violation` is `<= 0`. Objective values of
/// `f64::INFINITY` (or NaN) mark points outside the objective's domain; both
/// tiers skip them.
pub trait SearchProblem: Sync {
    fn objective(&self, point: &[f64]) -> f64;

    fn violation(&self, _point: &[f64]) -> f64 {
        0.0
    }

    /// Key compared lexicographically to break ties between equal values.
    fn tie_key(&self, point: &[f64]) -> Vec<f64> {
        point.to_vec()
    }
}

/// Adapts a closure into an unconstrained [`SearchProblem`].
pub struct FnProblem<F>(pub F);

impl<F: Fn(&[f64]) -> f64 + Sync> SearchProblem for FnProblem<F> {
    fn objective(&self, point: &[f64]) -> f64 {
        (self.0)(point)
    }
}

/// Adapts an objective closure and a violation closure.
pub struct ConstrainedFn<F, G> {
    pub objective: F,
    pub violation: G,
}

impl<F, G> SearchProblem for ConstrainedFn<F, G>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> f64 + Sync,
{
    fn objective(&self, point: &[f64]) -> f64 {
        (self.objective)(point)
    }

    fn violation(&self, point: &[f64]) -> f64 {
        (self.violation)(point)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Denominator of the grid-oracle lattice.
    pub grid_resolution: usize,
    /// Random starts for the multi-start tier.
    pub starts: usize,
    /// Poll sweeps per start.
    pub max_iterations: usize,
    /// Compass step at which a start is declared converged.
    pub step_tolerance: f64,
    pub seed: u64,
    /// Merit cost, in bits per bit of constraint violation, used while probing.
    pub penalty_weight: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid_resolution: 12,
            starts: 200,
            max_iterations: 5000,
            step_tolerance: 1e-6,
            seed: 0,
            penalty_weight: 64.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_resolution < 2 {
            return Err(Error::Domain("grid_resolution must be at least 2".into()));
        }
        if self.starts == 0 || self.max_iterations == 0 {
            return Err(Error::Domain("starts and max_iterations must be positive".into()));
        }
        if !(self.step_tolerance > 0.0) || !(self.penalty_weight > 0.0) {
            return Err(Error::Domain(
                "step_tolerance and penalty_weight must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn with_grid_resolution(mut self, resolution: usize) -> Self {
        self.grid_resolution = resolution;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub evaluations: u64,
    pub converged: bool,
}

/// Strict "a beats b": smaller value, then lexicographically smaller key.
pub(crate) fn beats(a_value: f64, a_key: &[f64], b_value: f64, b_key: &[f64]) -> bool {
    match a_value.partial_cmp(&b_value) {
        Some(std::cmp::Ordering::Less) => true,
        Some(std::cmp::Ordering::Greater) => false,
        _ => a_key
            .iter()
            .zip(b_key)
            .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
            .is_some_and(|o| o.is_lt()),
    }
}
