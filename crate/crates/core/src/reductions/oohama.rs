use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::optim::{golden_section_max, multistart_search_seeded, Block, SearchDomain, SearchProblem, SolverConfig};
use crate::probkit::JointPmf2;
use crate::wak::RatePair;

/// Points per axis of the uniform `(μ, α)` grid on `[0, 1]²`.
pub const MU_ALPHA_GRID: usize = 41;
/// Random starts for each inner minimisation over the test-channel set.
const OMEGA_STARTS: usize = 12;

/// `ω(μ, α)` over the set of auxiliaries with `U − Y − X` and
/// `P_X̃|Ỹ = P_X|Y`. Free parameters: `P_Ỹ` on the support of `P_Y` and the
/// channel `P_Ũ|Ỹ`. Symbols `y` with `P_Y(y) = 0` are left out.
struct OmegaProblem<'a> {
    support: &'a [usize],
    p_y: &'a [f64],
    /// `P_X|Y(x|y)` at `x * ny + y`.
    p_x_given_y: &'a [f64],
    nx: usize,
    ny: usize,
    nu: usize,
    mu: f64,
    alpha: f64,
}

impl SearchProblem for OmegaProblem<'_> {
    fn objective(&self, point: &[f64]) -> f64 {
        let (ns, nu, nx, ny) = (self.support.len(), self.nu, self.nx, self.ny);
        let q_y = &point[..ns];
        let w = &point[ns..];
        let mut q_u = vec![0.0; nu];
        for s in 0..ns {
            for u in 0..nu {
                q_u[u] += q_y[s] * w[s * nu + u];
            }
        }
        let mut q_x_given_u = vec![0.0; nu * nx];
        for u in 0..nu {
            if q_u[u] > 0.0 {
                for (s, &y) in self.support.iter().enumerate() {
                    let q_y_given_u = q_y[s] * w[s * nu + u] / q_u[u];
                    for x in 0..nx {
                        q_x_given_u[u * nx + x] += q_y_given_u * self.p_x_given_y[x * ny + y];
                    }
                }
            }
        }
        let (a, m) = (self.alpha, self.mu);
        let mut total = 0.0;
        for (s, &y) in self.support.iter().enumerate() {
            if !(q_y[s] > 0.0) {
                continue;
            }
            let log_ratio_y = (self.p_y[y] / q_y[s]).log2();
            for u in 0..nu {
                let joint_uy = q_y[s] * w[s * nu + u];
                if !(joint_uy > 0.0) {
                    continue;
                }
                let log_ratio_yu = (self.p_y[y] * q_u[u] / joint_uy).log2();
                for x in 0..nx {
                    let p = joint_uy * self.p_x_given_y[x * ny + y];
                    if p > 0.0 {
                        let neg_tau = (1.0 - a) * log_ratio_y
                            + a * m * log_ratio_yu
                            + a * (1.0 - m) * q_x_given_u[u * nx + x].log2();
                        total += p * neg_tau.exp2();
                    }
                }
            }
        }
        -total.log2()
    }
}

/// Oohama's bound for one source: `Ω(μ, α)` tabulated on the
/// [`MU_ALPHA_GRID`]² grid, reusable across rate pairs.
pub struct OohamaBound {
    support: Vec<usize>,
    p_y: Vec<f64>,
    p_x_given_y: Vec<f64>,
    nx: usize,
    ny: usize,
    nu: usize,
    config: SolverConfig,
    omega: Vec<f64>,
}

/// Value of the bound and the maximising `(μ, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OohamaValue {
    pub value: f64,
    pub mu: f64,
    pub alpha: f64,
}

fn grid_point(i: usize) -> f64 {
    i as f64 / (MU_ALPHA_GRID - 1) as f64
}

impl OohamaBound {
    pub fn new(src: &JointPmf2, nu: usize, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        let (nx, ny) = (src.nx(), src.ny());
        if nu == 0 || nu > ny {
            return Err(Error::Domain(format!("auxiliary size {nu} must lie in 1..={ny}")));
        }
        let p_y = src.marginal_y_vec();
        let support: Vec<usize> = (0..ny).filter(|&y| p_y[y] > 0.0).collect();
        let mut p_x_given_y = vec![0.0; nx * ny];
        for x in 0..nx {
            for &y in &support {
                p_x_given_y[x * ny + y] = src.get(x, y) / p_y[y];
            }
        }
        let mut bound = Self {
            support,
            p_y,
            p_x_given_y,
            nx,
            ny,
            nu,
            config: SolverConfig {
                starts: config.starts.min(OMEGA_STARTS),
                ..config.clone()
            },
            omega: Vec::new(),
        };
        let cells = MU_ALPHA_GRID * MU_ALPHA_GRID;
        let omega = exec::map_collect(cells, |c| {
            bound.omega_at(grid_point(c / MU_ALPHA_GRID), grid_point(c % MU_ALPHA_GRID))
        });
        bound.omega = omega.into_iter().collect::<Result<_>>()?;
        Ok(bound)
    }

    /// `Ω(μ, α)`: minimum of `ω` over the test-channel set.
    pub fn omega_at(&self, mu: f64, alpha: f64) -> Result<f64> {
        let ns = self.support.len();
        let problem = OmegaProblem {
            support: &self.support,
            p_y: &self.p_y,
            p_x_given_y: &self.p_x_given_y,
            nx: self.nx,
            ny: self.ny,
            nu: self.nu,
            mu,
            alpha,
        };
        let mut blocks = vec![Block::Simplex(ns)];
        blocks.extend(std::iter::repeat_n(Block::Simplex(self.nu), ns));
        let domain = SearchDomain::new(blocks)?;
        let matched: Vec<f64> = self.support.iter().map(|&y| self.p_y[y]).collect();
        let mut constant = matched.clone();
        let mut identity = matched;
        for s in 0..ns {
            constant.extend((0..self.nu).map(|u| f64::from(u8::from(u == 0))));
            identity.extend((0..self.nu).map(|u| f64::from(u8::from(u == s.min(self.nu - 1)))));
        }
        Ok(multistart_search_seeded(&domain, &problem, &self.config, &[constant, identity])?.value)
    }

    fn ratio(omega: f64, mu: f64, alpha: f64, rates: RatePair) -> f64 {
        (omega - alpha * ((1.0 - mu) * rates.r1 + mu * rates.r2)) / (2.0 + alpha * (1.0 - mu))
    }

    /// `sup over (μ, α) of (Ω − α((1−μ)R1 + μR2)) / (2 + α(1−μ))`: grid
    /// maximum, then golden refinement in `μ` and in `α` over the
    /// neighbouring cells.
    pub fn evaluate(&self, rates: RatePair) -> Result<OohamaValue> {
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for i in 0..MU_ALPHA_GRID {
            for j in 0..MU_ALPHA_GRID {
                let (mu, alpha) = (grid_point(i), grid_point(j));
                let v = Self::ratio(self.omega[i * MU_ALPHA_GRID + j], mu, alpha, rates);
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        let (mut value, i, j) = best;
        let (mut mu, mut alpha) = (grid_point(i), grid_point(j));
        let h = grid_point(1);
        let tol = 1e-6;

        let along_mu = |m: f64| {
            self.omega_at(m, alpha)
                .map_or(f64::NEG_INFINITY, |o| Self::ratio(o, m, alpha, rates))
        };
        let (m, v) = golden_section_max(along_mu, (mu - h).max(0.0), (mu + h).min(1.0), tol);
        if v > value {
            value = v;
            mu = m;
        }
        let along_alpha = |a: f64| {
            self.omega_at(mu, a)
                .map_or(f64::NEG_INFINITY, |o| Self::ratio(o, mu, a, rates))
        };
        let (a, v) = golden_section_max(along_alpha, (alpha - h).max(0.0), (alpha + h).min(1.0), tol);
        if v > value {
            value = v;
            alpha = a;
        }
        Ok(OohamaValue {
            value: value.max(0.0),
            mu,
            alpha,
        })
    }
}

/// One-shot [`OohamaBound::evaluate`].
pub fn oohama_wak_bound(
    src: &JointPmf2,
    rates: RatePair,
    nu: usize,
    config: &SolverConfig,
) -> Result<OohamaValue> {
    OohamaBound::new(src, nu, config)?.evaluate(rates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probkit::Pmf;
    use crate::reductions::{oohama_single, s_theta, ThetaGrid};

    #[test]
    fn trivial_side_information_reduces_to_single_user() {
        let p = Pmf::new(vec![0.7, 0.2, 0.1]).unwrap();
        let src = JointPmf2::without_side_information(&p);
        let cfg = SolverConfig::default().with_starts(4);
        let bound = OohamaBound::new(&src, 1, &cfg).unwrap();
        // Ω(μ, α) = −s(−α(1−μ)) when |Y| = 1
        for (mu, alpha) in [(0.0, 1.0), (0.3, 0.6), (1.0, 1.0)] {
            let o = bound.omega_at(mu, alpha).unwrap();
            assert!((o + s_theta(&p, -alpha * (1.0 - mu))).abs() < 1e-12);
        }
        for r1 in [0.0, 0.4, 0.9] {
            let v = bound.evaluate(RatePair::new(r1, 0.0).unwrap()).unwrap();
            let s = oohama_single(&p, r1, &ThetaGrid::standard()).unwrap();
            assert!((v.value - s.value).abs() < 1e-3, "{r1}: {} vs {}", v.value, s.value);
        }
    }

    #[test]
    fn rejects_large_auxiliary() {
        let src = JointPmf2::new(2, 2, vec![0.25; 4]).unwrap();
        assert!(OohamaBound::new(&src, 3, &SolverConfig::default()).is_err());
    }

    #[test]
    fn zero_alpha_column_is_zero() {
        let src = JointPmf2::new(2, 2, vec![0.4, 0.1, 0.2, 0.3]).unwrap();
        let bound = OohamaBound::new(&src, 2, &SolverConfig::default().with_starts(4)).unwrap();
        for i in 0..MU_ALPHA_GRID {
            assert!(bound.omega[i * MU_ALPHA_GRID].abs() < 1e-12);
        }
        let v = bound.evaluate(RatePair::new(2.0, 2.0).unwrap()).unwrap();
        assert!(v.value >= 0.0 && v.value < 1e-12);
    }
}
