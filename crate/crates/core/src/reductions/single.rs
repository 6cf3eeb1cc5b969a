use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::{grid_search, maximize_1d, multistart_search_seeded, Block, FnProblem, SearchDomain, SolverConfig};
use crate::probkit::{entropy, entropy_of, kl_of, Pmf};

/// Abscissae `θ ≤ 0`, descending from 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaGrid {
    abscissae: Vec<f64>,
}

impl ThetaGrid {
    pub fn new(abscissae: Vec<f64>) -> Result<Self> {
        if abscissae.iter().any(|t| !(t.is_finite() && *t <= 0.0)) {
            return Err(Error::Domain("θ grid entries must be finite and nonpositive".into()));
        }
        if abscissae.windows(2).any(|w| !(w[0] > w[1])) {
            return Err(Error::Domain("θ grid must be strictly descending".into()));
        }
        if !abscissae.contains(&0.0) || !abscissae.contains(&-1.0) {
            return Err(Error::Domain("θ grid must contain 0 and -1".into()));
        }
        Ok(Self { abscissae })
    }

    /// `{0} ∪ −logspace(−4, 4, 161)`: twenty points per decade down to `−1e4`.
    pub fn standard() -> Self {
        let mut abscissae = vec![0.0];
        abscissae.extend((0..=160).map(|k| -(10f64.powf(-4.0 + 0.05 * k as f64))));
        abscissae[81] = -1.0;
        Self { abscissae }
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    /// Entries in `[−1, 0]`.
    pub fn unit_interval(&self) -> Vec<f64> {
        self.abscissae.iter().copied().filter(|t| *t >= -1.0).collect()
    }
}

impl Default for ThetaGrid {
    fn default() -> Self {
        Self::standard()
    }
}

/// `s(θ) = log2 Σ p(x)^(1−θ)`, via a shifted log-sum-exp so large `|θ|` do
/// not underflow. Zero-probability atoms contribute nothing, and `s(0) = 0`
/// exactly.
pub fn s_theta(p: &Pmf, theta: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let exps: Vec<f64> = p
        .probs()
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|q| (1.0 - theta) * q.log2())
        .collect();
    let peak = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    peak + exps.iter().map(|e| (e - peak).exp2()).sum::<f64>().log2()
}

/// Location and value of a maximum over `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaMax {
    pub theta: f64,
    pub value: f64,
}

fn check_rate(r1: f64) -> Result<()> {
    if !(r1 >= 0.0 && r1.is_finite()) {
        return Err(Error::Domain(format!("rate {r1} must be finite and nonnegative")));
    }
    Ok(())
}

/// `min over P̃ of D(P̃ || p) + |H(P̃) − R1|⁺`, by direct search.
pub fn exponent_single_direct(p: &Pmf, r1: f64, config: &SolverConfig) -> Result<f64> {
    check_rate(r1)?;
    config.validate()?;
    let n = p.alphabet_size();
    let problem = FnProblem(|q: &[f64]| {
        let d = kl_of(q, p.probs());
        if d.is_finite() {
            d + (entropy_of(q).max(0.0) - r1).max(0.0)
        } else {
            d
        }
    });
    let domain = SearchDomain::new(vec![Block::Simplex(n)])?;
    let mut seeds = vec![p.probs().to_vec()];
    seeds.extend((0..n).map(|i| Pmf::point_mass(n, i).map(|m| m.probs().to_vec())).collect::<Result<Vec<_>>>()?);
    seeds.push(grid_search(&domain, &problem, config.grid_resolution)?.argmin);
    Ok(multistart_search_seeded(&domain, &problem, config, &seeds)?.value)
}

fn tight_ratio(p: &Pmf, r1: f64, theta: f64) -> f64 {
    (-s_theta(p, theta) + theta * r1) / (1.0 - theta)
}

fn oohama_ratio(p: &Pmf, r1: f64, theta: f64) -> f64 {
    (-s_theta(p, theta) + theta * r1) / (2.0 - theta)
}

/// `max over θ ≤ 0 of (−s(θ) + θ R1) / (1 − θ)` on `grid` with golden
/// refinement.
pub fn exponent_single_parametric(p: &Pmf, r1: f64, grid: &ThetaGrid) -> Result<ThetaMax> {
    check_rate(r1)?;
    let (theta, value) = maximize_1d(|t| tight_ratio(p, r1, t), grid.abscissae())
        .ok_or_else(|| Error::Domain("θ grid is empty".into()))?;
    Ok(ThetaMax { theta, value })
}

/// `max over θ ∈ [−1, 0] of (−s(θ) + θ R1) / (2 − θ)`: Oohama's bound with
/// `θ = −α(1 − μ)`.
pub fn oohama_single(p: &Pmf, r1: f64, grid: &ThetaGrid) -> Result<ThetaMax> {
    check_rate(r1)?;
    let (theta, value) = maximize_1d(|t| oohama_ratio(p, r1, t), &grid.unit_interval())
        .ok_or_else(|| Error::Domain("θ grid has no points in [-1, 0]".into()))?;
    Ok(ThetaMax { theta, value })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub f_oohama: f64,
    pub f_tight: f64,
    pub gap: f64,
    pub argmax_theta_oohama: f64,
    pub argmax_theta_tight: f64,
}

/// Compares Oohama's single-user bound with the tight exponent for
/// `R1 < H(p)`, where the former is strictly smaller.
pub fn gap_check(p: &Pmf, r1: f64) -> Result<GapReport> {
    check_rate(r1)?;
    let h = entropy(p);
    if r1 >= h {
        return Err(Error::Domain(format!("rate {r1} is not below H(X) = {h}")));
    }
    let grid = ThetaGrid::standard();
    let tight = exponent_single_parametric(p, r1, &grid)?;
    let oohama = oohama_single(p, r1, &grid)?;
    Ok(GapReport {
        f_oohama: oohama.value,
        f_tight: tight.value,
        gap: tight.value - oohama.value,
        argmax_theta_oohama: oohama.theta,
        argmax_theta_tight: tight.theta,
    })
}
