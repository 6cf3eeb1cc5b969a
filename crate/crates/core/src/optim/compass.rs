use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::domain::normalize;
use super::{beats, Block, SearchDomain, SearchProblem, SearchResult, SolverConfig};
use crate::error::{Error, Result};
use crate::exec;

const INITIAL_STEP: f64 = 0.25;
const MAX_STEP: f64 = 0.5;
/// Random poll directions per sweep (each also tried negated).
const RANDOM_DIRECTIONS: usize = 3;

#[derive(Debug, Clone)]
enum Direction {
    /// Move probability mass between two coordinates of one simplex block.
    Transfer { from: usize, to: usize, block: usize },
    /// Move one interval coordinate up or down.
    Axis { coord: usize, up: bool, width: f64 },
    /// A zero-sum-per-simplex direction with `max |d_i| = 1` per block.
    Dense(Vec<f64>),
}

struct Layout<'a> {
    domain: &'a SearchDomain,
    simplices: Vec<(usize, usize)>,
    fixed: Vec<Direction>,
}

impl<'a> Layout<'a> {
    fn new(domain: &'a SearchDomain) -> Self {
        let mut simplices = Vec::new();
        let mut fixed = Vec::new();
        for (off, b) in domain.layout() {
            match b {
                Block::Simplex(n) => {
                    let block = simplices.len();
                    simplices.push((off, n));
                    for i in 0..n {
                        for j in 0..n {
                            if i != j {
                                fixed.push(Direction::Transfer {
                                    from: off + i,
                                    to: off + j,
                                    block,
                                });
                            }
                        }
                    }
                }
                Block::Box { lower, upper } if upper > lower => {
                    for up in [true, false] {
                        fixed.push(Direction::Axis {
                            coord: off,
                            up,
                            width: upper - lower,
                        });
                    }
                }
                Block::Box { .. } => {}
            }
        }
        Self {
            domain,
            simplices,
            fixed,
        }
    }

    fn random_direction<R: Rng>(&self, rng: &mut R) -> Direction {
        let mut d = vec![0.0; self.domain.dim()];
        for (off, b) in self.domain.layout() {
            match b {
                Block::Simplex(n) if n > 1 => {
                    let s = &mut d[off..off + n];
                    s.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
                    let mean = s.iter().sum::<f64>() / n as f64;
                    s.iter_mut().for_each(|v| *v -= mean);
                    let peak = s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    if peak > 0.0 {
                        s.iter_mut().for_each(|v| *v /= peak);
                    }
                }
                Block::Box { lower, upper } => {
                    d[off] = rng.gen_range(-1.0..1.0) * (upper - lower);
                }
                Block::Simplex(_) => {}
            }
        }
        Direction::Dense(d)
    }

    /// The trial point `x + step·d`, shortened to stay in the domain. `None`
    /// when the move is blocked.
    fn apply(&self, x: &[f64], d: &Direction, step: f64) -> Option<Vec<f64>> {
        let mut y = x.to_vec();
        match *d {
            Direction::Transfer { from, to, block } => {
                let amount = step.min(x[from]);
                if !(amount > 0.0) {
                    return None;
                }
                if amount >= x[from] {
                    y[from] = 0.0;
                } else {
                    y[from] -= amount;
                }
                y[to] += amount;
                let (off, n) = self.simplices[block];
                normalize(&mut y[off..off + n]);
            }
            Direction::Axis { coord, up, width } => {
                let Block::Box { lower, upper } = self.block_of(coord) else {
                    unreachable!("axis direction on a simplex coordinate")
                };
                let delta = if up { step * width } else { -step * width };
                y[coord] = (x[coord] + delta).clamp(lower, upper);
                if y[coord] == x[coord] {
                    return None;
                }
            }
            Direction::Dense(ref dir) => {
                let mut t = step;
                for &(off, n) in &self.simplices {
                    for k in off..off + n {
                        if dir[k] < 0.0 {
                            t = t.min(x[k] / -dir[k]);
                        }
                    }
                }
                if !(t > 1e-300) {
                    return None;
                }
                for (k, v) in y.iter_mut().enumerate() {
                    *v += t * dir[k];
                }
                for &(off, n) in &self.simplices {
                    for k in off..off + n {
                        if dir[k] < 0.0 && x[k] / -dir[k] <= t {
                            y[k] = 0.0;
                        }
                    }
                    normalize(&mut y[off..off + n]);
                }
                self.domain.project(&mut y);
                if y == x {
                    return None;
                }
            }
        }
        Some(y)
    }

    fn block_of(&self, coord: usize) -> Block {
        self.domain
            .layout()
            .take_while(|(off, _)| *off <= coord)
            .last()
            .map(|(_, b)| b)
            .expect("coordinate inside the domain")
    }
}

struct LocalOutcome {
    best: Option<(f64, Vec<f64>)>,
    evaluations: u64,
    converged: bool,
}

fn compass_search<P: SearchProblem + ?Sized>(
    layout: &Layout<'_>,
    problem: &P,
    start: Vec<f64>,
    config: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> LocalOutcome {
    let mut evaluations = 0u64;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut probe = |x: &[f64], best: &mut Option<(f64, Vec<f64>)>| -> f64 {
        evaluations += 1;
        let f = problem.objective(x);
        if !f.is_finite() {
            return f64::INFINITY;
        }
        let v = problem.violation(x);
        if v <= 0.0 {
            let wins = match best {
                None => true,
                Some((bv, bx)) => beats(f, x, *bv, bx),
            };
            if wins {
                *best = Some((f, x.to_vec()));
            }
            f
        } else {
            f + config.penalty_weight * v
        }
    };

    let mut current = start;
    let mut merit = probe(&current, &mut best);
    if !merit.is_finite() {
        return LocalOutcome {
            best,
            evaluations,
            converged: false,
        };
    }
    let mut step = INITIAL_STEP;
    let mut converged = false;
    let mut last_success: Option<Direction> = None;
    for _ in 0..config.max_iterations {
        if step < config.step_tolerance {
            converged = true;
            break;
        }
        let mut polls: Vec<Direction> = Vec::with_capacity(layout.fixed.len() + 2 * RANDOM_DIRECTIONS + 1);
        polls.extend(last_success.take());
        polls.extend(layout.fixed.iter().cloned());
        for _ in 0..RANDOM_DIRECTIONS {
            if let Direction::Dense(d) = layout.random_direction(rng) {
                polls.push(Direction::Dense(d.iter().map(|v| -v).collect()));
                polls.push(Direction::Dense(d));
            }
        }
        let mut moved = false;
        for d in polls {
            let Some(trial) = layout.apply(&current, &d, step) else {
                continue;
            };
            let m = probe(&trial, &mut best);
            if m < merit {
                current = trial;
                merit = m;
                last_success = Some(d);
                moved = true;
                break;
            }
        }
        step = if moved { (2.0 * step).min(MAX_STEP) } else { 0.5 * step };
    }
    LocalOutcome {
        best,
        evaluations,
        converged,
    }
}

/// [`multistart_search_seeded`] without caller-provided starts.
pub fn multistart_search<P: SearchProblem + ?Sized>(
    domain: &SearchDomain,
    problem: &P,
    config: &SolverConfig,
) -> Result<SearchResult> {
    multistart_search_seeded(domain, problem, config, &[])
}

/// Compass search from each seed and from `config.starts` uniform random
/// points.
///
/// Every start has its own ChaCha stream keyed by `(config.seed, index)`, so
/// the result is a deterministic function of the inputs. Moves are accepted on
/// the penalised merit `f + penalty_weight·violation`; only feasible points
/// with a finite objective are eligible as the returned minimum, and its value
/// never exceeds that of any feasible seed.
pub fn multistart_search_seeded<P: SearchProblem + ?Sized>(
    domain: &SearchDomain,
    problem: &P,
    config: &SolverConfig,
    seeds: &[Vec<f64>],
) -> Result<SearchResult> {
    config.validate()?;
    for s in seeds {
        if s.len() != domain.dim() {
            return Err(Error::Dimension(format!(
                "seed of length {} for a domain of dimension {}",
                s.len(),
                domain.dim()
            )));
        }
    }
    let layout = Layout::new(domain);
    let total = seeds.len() + config.starts;
    let outcomes = exec::map_collect(total, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(i as u64);
        let start = match seeds.get(i) {
            Some(s) => {
                let mut s = s.clone();
                if !domain.contains(&s) {
                    domain.project(&mut s);
                }
                s
            }
            None => domain.sample(&mut rng),
        };
        compass_search(&layout, problem, start, config, &mut rng)
    });

    let mut evaluations = 0;
    let mut winner: Option<(f64, Vec<f64>, Vec<f64>, bool)> = None;
    for o in outcomes {
        evaluations += o.evaluations;
        if let Some((v, x)) = o.best {
            let key = problem.tie_key(&x);
            let wins = match &winner {
                None => true,
                Some((bv, _, bk, _)) => beats(v, &key, *bv, bk),
            };
            if wins {
                winner = Some((v, x, key, o.converged));
            }
        }
    }
    let (value, argmin, _, converged) = winner.ok_or(Error::Infeasible)?;
    Ok(SearchResult {
        argmin,
        value,
        evaluations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::{grid_search, ConstrainedFn, FnProblem};

    fn quadratic_box() -> (SearchDomain, impl Fn(&[f64]) -> f64 + Sync) {
        let d = SearchDomain::new(vec![
            Block::Box { lower: -1.0, upper: 2.0 },
            Block::Box { lower: 0.0, upper: 1.0 },
        ])
        .unwrap();
        let f = |x: &[f64]| (x[0] - 0.37).powi(2) + 2.0 * (x[1] - 0.81).powi(2) + 0.5 * (x[0] - 0.37) * (x[1] - 0.81);
        (d, f)
    }

    #[test]
    fn convex_quadratic_over_box() {
        let (d, f) = quadratic_box();
        let cfg = SolverConfig::default().with_starts(20);
        let r = multistart_search(&d, &FnProblem(&f), &cfg).unwrap();
        assert!((r.argmin[0] - 0.37).abs() < 1e-5, "{:?}", r.argmin);
        assert!((r.argmin[1] - 0.81).abs() < 1e-5);
        assert!(r.converged);
        assert_eq!(r.value, f(&r.argmin));
    }

    #[test]
    fn seeds_change_starts_not_answer() {
        let (d, f) = quadratic_box();
        let a = multistart_search(&d, &FnProblem(&f), &SolverConfig::default().with_starts(20).with_seed(1)).unwrap();
        let b = multistart_search(&d, &FnProblem(&f), &SolverConfig::default().with_starts(20).with_seed(2)).unwrap();
        assert!((a.value - b.value).abs() < 1e-9);
    }

    #[test]
    fn bit_identical_across_runs_and_strategies() {
        let d = SearchDomain::new(vec![Block::Simplex(3), Block::Simplex(2)]).unwrap();
        let p = FnProblem(|x: &[f64]| (x[0] - 0.2).abs() + (x[3] * x[1] - 0.1).powi(2));
        let cfg = SolverConfig::default().with_starts(16).with_seed(5);
        let a = multistart_search(&d, &p, &cfg).unwrap();
        let b = multistart_search(&d, &p, &cfg).unwrap();
        let c = exec::sequential(|| multistart_search(&d, &p, &cfg).unwrap());
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn linear_objective_reaches_vertex() {
        let d = SearchDomain::new(vec![Block::Simplex(4)]).unwrap();
        let c = [0.7, 0.3, 0.9, 0.5];
        let p = FnProblem(|x: &[f64]| x.iter().zip(&c).map(|(a, b)| a * b).sum());
        let r = multistart_search(&d, &p, &SolverConfig::default().with_starts(4)).unwrap();
        assert!((r.value - 0.3).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn constraint_is_respected() {
        // minimise -x0 subject to x0 <= 0.3 on a simplex
        let d = SearchDomain::new(vec![Block::Simplex(3)]).unwrap();
        let p = ConstrainedFn {
            objective: |x: &[f64]| -x[0] + 0.1 * x[1],
            violation: |x: &[f64]| x[0] - 0.3,
        };
        let r = multistart_search(&d, &p, &SolverConfig::default().with_starts(16)).unwrap();
        assert!(r.argmin[0] <= 0.3);
        assert!((r.value + 0.3).abs() < 1e-5, "{}", r.value);
        let g = grid_search(&d, &p, 12).unwrap();
        assert!(r.value <= g.value + 1e-9);
    }

    #[test]
    fn all_starts_infeasible() {
        let d = SearchDomain::new(vec![Block::Simplex(2)]).unwrap();
        let p = FnProblem(|_: &[f64]| f64::INFINITY);
        assert!(matches!(
            multistart_search(&d, &p, &SolverConfig::default().with_starts(3)),
            Err(Error::Infeasible)
        ));
    }

    #[test]
    fn feasible_seed_bounds_the_result() {
        let d = SearchDomain::new(vec![Block::Simplex(3)]).unwrap();
        let p = FnProblem(|x: &[f64]| (x[0] - 1.0 / 3.0).powi(2) * 1e3 + x[1].sin());
        let seed = vec![1.0 / 3.0, 0.0, 2.0 / 3.0];
        let r = multistart_search_seeded(&d, &p, &SolverConfig::default().with_starts(1), std::slice::from_ref(&seed)).unwrap();
        assert!(r.value <= p.objective(&seed));
    }
}
