//! The doubly symmetric binary source with a binary auxiliary.
//!
//! With `P_XY = DSBS(p)` and `|U| = 2`, parametrise `P_Ũ(1) = β` and the
//! crossovers `q0`, `q1` of `Ỹ` given `Ũ`. The exponent is then bounded above
//! by
//!
//! ```text
//! min  (1−β)·D_b(q0‖p) + β·D_b(q1‖p) + |1 − h(β) − R2|⁺
//! s.t. h((1−β)(1−q0) + β·q1) ≤ R1
//! ```
//!
//! over the closed cube `[0, 1]³`. The chain `Ũ − Ỹ − X̃` holds exactly when
//! `q0 = q1`, which gives the Markov-constrained variant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::optim::{
    grid_search, multistart_search_seeded, Block, ConstrainedFn, SearchDomain, SolverConfig,
};
use crate::probkit::{binary_entropy, binary_kl, JointPmf2};

/// Random starts used by the refinement stage; the grid argmin is always one
/// of the seeds, so a handful suffices.
const REFINE_STARTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DsbsParams {
    pub p: f64,
    pub beta: f64,
    pub q0: f64,
    pub q1: f64,
}

impl DsbsParams {
    pub fn new(p: f64, beta: f64, q0: f64, q1: f64) -> Result<Self> {
        check_crossover(p)?;
        for (name, v) in [("beta", beta), ("q0", q0), ("q1", q1)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        Ok(Self { p, beta, q0, q1 })
    }
}

/// One abscissa of the rate sweep with both minima and their minimisers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DsbsPoint {
    pub r1: f64,
    pub unconstrained: f64,
    pub constrained: f64,
    /// `(β, q0, q1)`
    pub argmin_unconstrained: (f64, f64, f64),
    /// `(β, q)`
    pub argmin_constrained: (f64, f64),
}

fn check_crossover(p: f64) -> Result<()> {
    if p > 0.0 && p < 0.5 {
        Ok(())
    } else {
        Err(Error::Domain(format!("crossover {p} is outside (0, 1/2)")))
    }
}

/// Uniform `X` observed through a binary symmetric channel with crossover `p`.
pub fn dsbs_source(p: f64) -> Result<JointPmf2> {
    check_crossover(p)?;
    let (same, flip) = ((1.0 - p) / 2.0, p / 2.0);
    JointPmf2::new(2, 2, vec![same, flip, flip, same])
}

fn objective(p: f64, beta: f64, q0: f64, q1: f64, r2: f64) -> f64 {
    (1.0 - beta) * binary_kl(q0, p)
        + beta * binary_kl(q1, p)
        + (1.0 - binary_entropy(beta) - r2).max(0.0)
}

fn constraint(beta: f64, q0: f64, q1: f64) -> f64 {
    binary_entropy((1.0 - beta) * (1.0 - q0) + beta * q1)
}

pub fn dsbs_objective(params: &DsbsParams, r2: f64) -> f64 {
    objective(params.p, params.beta, params.q0, params.q1, r2)
}

/// `H(X̃|Ũ)` under the parametrisation.
pub fn dsbs_constraint_value(params: &DsbsParams) -> f64 {
    constraint(params.beta, params.q0, params.q1)
}

/// Minimum of [`dsbs_objective`] subject to `dsbs_constraint_value ≤ r1`:
/// full box lattice at `config.grid_resolution`, then compass refinement
/// seeded with the lattice argmin. With `markov_constrained` the search runs
/// over `(β, q)` with `q0 = q1 = q`.
pub fn dsbs_exponent(
    p: f64,
    r1: f64,
    r2: f64,
    markov_constrained: bool,
    config: &SolverConfig,
) -> Result<(f64, DsbsParams)> {
    check_crossover(p)?;
    if !(r1 >= 0.0 && r2 >= 0.0) || !r1.is_finite() || !r2.is_finite() {
        return Err(Error::Domain(format!("rates ({r1}, {r2}) must be finite and non-negative")));
    }
    let unpack = |x: &[f64]| {
        if markov_constrained {
            (x[0], x[1], x[1])
        } else {
            (x[0], x[1], x[2])
        }
    };
    let problem = ConstrainedFn {
        objective: |x: &[f64]| {
            let (b, q0, q1) = unpack(x);
            objective(p, b, q0, q1, r2)
        },
        violation: |x: &[f64]| {
            let (b, q0, q1) = unpack(x);
            constraint(b, q0, q1) - r1
        },
    };
    let dim = if markov_constrained { 2 } else { 3 };
    let domain = SearchDomain::new(vec![Block::Box { lower: 0.0, upper: 1.0 }; dim])?;
    let coarse = grid_search(&domain, &problem, config.grid_resolution)?;
    // β = 1/2 with unperturbed crossovers zeroes the objective whenever the
    // rate constraint allows it.
    let mut neutral = vec![0.5, p];
    if !markov_constrained {
        neutral.push(p);
    }
    let refine = SolverConfig {
        starts: config.starts.min(REFINE_STARTS),
        ..config.clone()
    };
    let fine = multistart_search_seeded(&domain, &problem, &refine, &[coarse.argmin, neutral])?;
    let (beta, q0, q1) = unpack(&fine.argmin);
    Ok((fine.value, DsbsParams { p, beta, q0, q1 }))
}

/// Both minima at every `r1` of an ascending grid.
///
/// Points are solved independently, then a pass in grid order carries each
/// minimiser forward while it stays cheaper (a point feasible at `r1` is
/// feasible at every larger `r1`), and caps the unconstrained value by the
/// constrained one. Both curves are therefore non-increasing and ordered.
pub fn figure2_sweep(p: f64, r2: f64, r1_grid: &[f64], config: &SolverConfig) -> Result<Vec<DsbsPoint>> {
    check_crossover(p)?;
    if r1_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("r1 grid must be strictly ascending".into()));
    }
    let solved = exec::map_collect(r1_grid.len(), |i| -> Result<_> {
        let u = dsbs_exponent(p, r1_grid[i], r2, false, config)?;
        let c = dsbs_exponent(p, r1_grid[i], r2, true, config)?;
        Ok((u, c))
    });
    let mut points: Vec<DsbsPoint> = Vec::with_capacity(r1_grid.len());
    for (i, s) in solved.into_iter().enumerate() {
        let ((mut vu, mut au), (mut vc, mut ac)) = s?;
        if let Some(prev) = points.last() {
            if prev.constrained < vc {
                vc = prev.constrained;
                let (b, q) = prev.argmin_constrained;
                ac = DsbsParams { p, beta: b, q0: q, q1: q };
            }
            if prev.unconstrained < vu {
                vu = prev.unconstrained;
                let (b, q0, q1) = prev.argmin_unconstrained;
                au = DsbsParams { p, beta: b, q0, q1 };
            }
        }
        if vc < vu {
            vu = vc;
            au = ac;
        }
        points.push(DsbsPoint {
            r1: r1_grid[i],
            unconstrained: vu,
            constrained: vc,
            argmin_unconstrained: (au.beta, au.q0, au.q1),
            argmin_constrained: (ac.beta, ac.q0),
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probkit::mutual_information;

    #[test]
    fn source_shape() {
        let s = dsbs_source(0.1).unwrap();
        assert_eq!(s.marginal_x().probs(), &[0.5, 0.5]);
        assert!((mutual_information(&s) - 0.5310044064107188).abs() < 1e-12);
        assert!(dsbs_source(0.5).is_err());
        assert!(dsbs_source(0.0).is_err());
    }

    #[test]
    fn objective_examples() {
        let r2 = 1.0 - binary_entropy(0.2);
        let zero = DsbsParams::new(0.1, 0.2, 0.1, 0.1).unwrap();
        assert!(dsbs_objective(&zero, r2).abs() < 1e-12);
        let kl = DsbsParams::new(0.1, 0.0, 0.2, 0.7).unwrap();
        assert!((dsbs_objective(&kl, 1.0) - 0.06405999884615018).abs() < 1e-12);
        assert!((dsbs_constraint_value(&zero) - 0.8267463724926178).abs() < 1e-12);
        let half = DsbsParams::new(0.1, 0.3, 0.5, 0.5).unwrap();
        assert!((dsbs_constraint_value(&half) - 1.0).abs() < 1e-12);
        assert_eq!(dsbs_constraint_value(&DsbsParams::new(0.1, 0.0, 0.0, 0.3).unwrap()), 0.0);
        assert!(DsbsParams::new(0.1, 1.2, 0.0, 0.0).is_err());
    }

    #[test]
    fn mirror_symmetry() {
        let a = DsbsParams::new(0.15, 0.3, 0.2, 0.7).unwrap();
        let b = DsbsParams::new(0.15, 0.7, 0.7, 0.2).unwrap();
        assert!((dsbs_objective(&a, 0.3) - dsbs_objective(&b, 0.3)).abs() < 1e-12);
        assert!((dsbs_constraint_value(&a) - dsbs_constraint_value(&b)).abs() < 1e-12);
    }

    #[test]
    fn vacuous_constraint_gives_zero() {
        let cfg = SolverConfig::default();
        let r2 = 1.0 - binary_entropy(0.2);
        for markov in [false, true] {
            let (v, _) = dsbs_exponent(0.1, 1.0, r2, markov, &cfg).unwrap();
            assert!(v.abs() < 1e-9, "{markov}: {v}");
        }
        let (v, arg) = dsbs_exponent(0.1, 0.83, r2, true, &cfg).unwrap();
        assert!(v < 1e-6, "{v} at {arg:?}");
    }

    #[test]
    fn sweep_is_ordered_and_monotone() {
        let r2 = 1.0 - binary_entropy(0.2);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let pts = figure2_sweep(0.1, r2, &grid, &SolverConfig::default()).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].unconstrained <= w[0].unconstrained);
            assert!(w[1].constrained <= w[0].constrained);
        }
        for pt in &pts {
            assert!(pt.constrained >= pt.unconstrained);
        }
        assert!(pts.iter().any(|pt| pt.constrained - pt.unconstrained > 1e-3));
    }
}
