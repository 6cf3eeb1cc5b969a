//! The tight strong converse exponent
//!
//! ```text
//! F(R1, R2 | P_XY) = min { D(P_ŨX̃Ỹ || P_Ũ|Ỹ P_XY) + |I(Ũ ∧ Ỹ) − R2|⁺ : R1 ≥ H(X̃|Ũ) }
//! ```
//!
//! over auxiliary joints with `|U| ≤ |X||Y| + 2`, together with the
//! achievable rate region it vanishes on.
//!
//! The divergence splits as `D(P_X̃Ỹ || P_XY) + I(Ũ ∧ X̃ | Ỹ)`: a source
//! mismatch term plus a soft Markov term that is zero exactly when
//! `Ũ − Ỹ − X̃` is a Markov chain.
//!
//! The solver does not enforce `R1 ≥ H(X̃|Ũ)` as a constraint. Refining `Ũ`
//! with an erased copy of `X̃` (see [`erasure_refinement`]) lowers `H(X̃|Ũ)`
//! by `t` bits while raising the rest of the objective by at most `t`, so
//!
//! ```text
//! F = min { D(P_ŨX̃Ỹ || P_Ũ|Ỹ P_XY) + |I(Ũ ∧ Ỹ) − R2|⁺ + |H(X̃|Ũ) − R1|⁺ }
//! ```
//!
//! over the same auxiliary alphabet, with no constraint. The search minimises
//! this form and converts its minimiser into a feasible witness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::optim::{
    grid_search, multistart_search_seeded, Block, FnProblem, SearchDomain, SearchProblem, SolverConfig,
};
use crate::probkit::{
    aux_measures, conditional_entropy, entropy, entropy_of, kl_of, AuxJointPmf, JointPmf2,
};

/// Slack, in bits, when testing `R1 ≥ min R1(R2)`.
pub const REGION_TOLERANCE: f64 = 1e-6;
/// Exponent values at or below this are reported as zero by callers that
/// classify rate pairs.
pub const ZERO_TOLERANCE: f64 = 2e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1.is_finite() && r2.is_finite() && r1 >= 0.0 && r2 >= 0.0) {
            return Err(Error::Domain(format!("rates ({r1}, {r2}) must be finite and nonnegative")));
        }
        Ok(Self { r1, r2 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDiagnostics {
    pub evaluations: u64,
    pub converged: bool,
}

/// Optimal value of the exponent program and how it splits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentBreakdown {
    pub value: f64,
    /// `D(P_X̃Ỹ || P_XY)`
    pub kl_term: f64,
    /// `I(Ũ ∧ X̃ | Ỹ)`
    pub soft_markov_term: f64,
    /// `|I(Ũ ∧ Ỹ) − R2|⁺`
    pub rate2_term: f64,
    /// `R1 − H(X̃|Ũ)`
    pub constraint_slack: f64,
    pub argmin: AuxJointPmf,
    #[serde(flatten)]
    pub diagnostics: SearchDiagnostics,
}

fn check_dims(a: &AuxJointPmf, src: &JointPmf2) -> Result<()> {
    if a.nx() != src.nx() || a.ny() != src.ny() {
        return Err(Error::Dimension(format!(
            "auxiliary joint on {}x{} against a {}x{} source",
            a.nx(),
            a.ny(),
            src.nx(),
            src.ny()
        )));
    }
    Ok(())
}

/// `D(P_ŨX̃Ỹ || P_Ũ|Ỹ P_XY)`, summed directly from the log-ratio.
pub fn wak_divergence_term(a: &AuxJointPmf, src: &JointPmf2) -> Result<f64> {
    check_dims(a, src)?;
    let (nu, nx, ny) = (a.nu(), a.nx(), a.ny());
    let mut p_uy = vec![0.0; nu * ny];
    let mut p_y = vec![0.0; ny];
    for u in 0..nu {
        for x in 0..nx {
            for y in 0..ny {
                p_uy[u * ny + y] += a.get(u, x, y);
                p_y[y] += a.get(u, x, y);
            }
        }
    }
    let mut d = 0.0;
    for u in 0..nu {
        for x in 0..nx {
            for y in 0..ny {
                let p = a.get(u, x, y);
                if p > 0.0 {
                    let reference = p_uy[u * ny + y] / p_y[y] * src.get(x, y);
                    if !(reference > 0.0) {
                        return Ok(f64::INFINITY);
                    }
                    d += p * (p / reference).log2();
                }
            }
        }
    }
    Ok(d.max(0.0))
}

/// The pair `(D(P_X̃Ỹ || P_XY), I(Ũ ∧ X̃ | Ỹ))`.
pub fn soft_markov_decompose(a: &AuxJointPmf, src: &JointPmf2) -> Result<(f64, f64)> {
    check_dims(a, src)?;
    let m = aux_measures(a);
    Ok((kl_of(m.marginal_xy.probs(), src.probs()), m.cond_mi_u_x_given_y))
}

pub fn wak_objective(a: &AuxJointPmf, src: &JointPmf2, r2: f64) -> Result<f64> {
    let d = wak_divergence_term(a, src)?;
    let m = aux_measures(a);
    Ok(d + (m.mi_u_y - r2).max(0.0))
}

/// `min(|X||Y| + 2, 4)`.
pub fn default_nu(src: &JointPmf2) -> usize {
    (src.nx() * src.ny() + 2).min(4)
}

/// `|X||Y| + 2`, the auxiliary cardinality that makes the minimum exact.
pub fn full_nu(src: &JointPmf2) -> usize {
    src.nx() * src.ny() + 2
}

/// The exponent program in mixture coordinates: `P_Ũ` followed by one
/// conditional block `P_X̃Ỹ|Ũ=u` per auxiliary symbol.
struct WakProblem<'a> {
    src: &'a JointPmf2,
    rates: RatePair,
    nu: usize,
}

struct WakTerms {
    divergence: f64,
    mi_u_y: f64,
    h_x_given_u: f64,
}

impl WakProblem<'_> {
    fn block(&self) -> usize {
        self.src.nx() * self.src.ny()
    }

    fn terms(&self, point: &[f64]) -> WakTerms {
        let (nx, ny, nu, bs) = (self.src.nx(), self.src.ny(), self.nu, self.block());
        let weights = &point[..nu];
        let blocks = &point[nu..];
        let mut col = vec![0.0; nu * ny];
        let mut p_y = vec![0.0; ny];
        let mut h_x_given_u = 0.0;
        let mut row = vec![0.0; nx];
        for u in 0..nu {
            let b = &blocks[u * bs..(u + 1) * bs];
            for x in 0..nx {
                row[x] = 0.0;
                for y in 0..ny {
                    col[u * ny + y] += b[x * ny + y];
                    row[x] += b[x * ny + y];
                }
            }
            if weights[u] > 0.0 {
                h_x_given_u += weights[u] * entropy_of(&row);
                for y in 0..ny {
                    p_y[y] += weights[u] * col[u * ny + y];
                }
            }
        }
        let mut divergence = 0.0;
        let mut mi_u_y = 0.0;
        for u in 0..nu {
            let w = weights[u];
            if !(w > 0.0) {
                continue;
            }
            let b = &blocks[u * bs..(u + 1) * bs];
            let mut du = 0.0;
            for x in 0..nx {
                for y in 0..ny {
                    let p = b[x * ny + y];
                    if p > 0.0 {
                        let s = self.src.get(x, y);
                        if !(s > 0.0) {
                            return WakTerms {
                                divergence: f64::INFINITY,
                                mi_u_y: 0.0,
                                h_x_given_u,
                            };
                        }
                        du += p * (p * p_y[y] / (col[u * ny + y] * s)).log2();
                    }
                }
            }
            divergence += w * du;
            let mut iu = 0.0;
            for y in 0..ny {
                let c = col[u * ny + y];
                if c > 0.0 {
                    iu += c * (c / p_y[y]).log2();
                }
            }
            mi_u_y += w * iu;
        }
        WakTerms {
            divergence: divergence.max(0.0),
            mi_u_y: mi_u_y.max(0.0),
            h_x_given_u: h_x_given_u.max(0.0),
        }
    }

    fn domain(&self) -> Result<SearchDomain> {
        let mut blocks = vec![Block::Simplex(self.nu)];
        blocks.extend(std::iter::repeat_n(Block::Simplex(self.block()), self.nu));
        SearchDomain::new(blocks)
    }

    fn to_joint(&self, point: &[f64]) -> Result<AuxJointPmf> {
        AuxJointPmf::from_mixture(self.src.nx(), self.src.ny(), &point[..self.nu], &point[self.nu..])
    }

    /// Mixture coordinates of `a`, padded with zero-weight symbols.
    fn embed(&self, a: &AuxJointPmf) -> Option<Vec<f64>> {
        if a.nu() > self.nu || a.nx() != self.src.nx() || a.ny() != self.src.ny() {
            return None;
        }
        let bs = self.block();
        let mut weights = vec![0.0; self.nu];
        let mut blocks = Vec::with_capacity(self.nu * bs);
        for (u, weight) in weights.iter_mut().enumerate() {
            let chunk = (u < a.nu()).then(|| &a.probs()[u * bs..(u + 1) * bs]);
            let w: f64 = chunk.map_or(0.0, |c| c.iter().sum());
            *weight = w;
            match chunk {
                Some(c) if w > 0.0 => blocks.extend(c.iter().map(|p| p / w)),
                _ => blocks.extend_from_slice(self.src.probs()),
            }
        }
        weights.extend(blocks);
        Some(weights)
    }

    /// `P_XY · W(u|y)` in mixture coordinates, `channel[y * k + u]`, `k ≤ nu`.
    fn markov_point(&self, channel: &[f64], k: usize) -> Option<Vec<f64>> {
        let a = AuxJointPmf::markov(self.src, k, channel).ok()?;
        self.embed(&a)
    }
}

impl SearchProblem for WakProblem<'_> {
    fn objective(&self, point: &[f64]) -> f64 {
        let t = self.terms(point);
        t.divergence + (t.mi_u_y - self.rates.r2).max(0.0) + (t.h_x_given_u - self.rates.r1).max(0.0)
    }

    fn tie_key(&self, point: &[f64]) -> Vec<f64> {
        let bs = self.block();
        (0..self.nu)
            .flat_map(|u| {
                let w = point[u];
                point[self.nu + u * bs..self.nu + (u + 1) * bs].iter().map(move |p| w * p)
            })
            .collect()
    }
}

/// Largest `|X||Y|` for which restricted seeds start from the grid oracle.
const SEED_GRID_MAX_CELLS: usize = 9;
/// Random starts for each restricted seed problem.
const SEED_STARTS: usize = 32;

/// Minimiser of `objective` over joints `Q_X̃Ỹ`: lattice search on small
/// alphabets, then compass refinement from the lattice point and the source.
fn minimise_over_joints<F>(src: &JointPmf2, config: &SolverConfig, objective: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let cells = src.nx() * src.ny();
    let problem = FnProblem(objective);
    let domain = SearchDomain::new(vec![Block::Simplex(cells)])?;
    let mut seeds = vec![src.probs().to_vec()];
    if cells <= SEED_GRID_MAX_CELLS {
        seeds.push(grid_search(&domain, &problem, config.grid_resolution)?.argmin);
    }
    let cfg = SolverConfig {
        starts: config.starts.min(SEED_STARTS),
        ..config.clone()
    };
    Ok(multistart_search_seeded(&domain, &problem, &cfg, &seeds)?.argmin)
}

/// `H(X)` and `H(Y)` of a row-major joint.
fn marginal_entropies(q: &[f64], nx: usize, ny: usize) -> (f64, f64) {
    let mut p_x = vec![0.0; nx];
    let mut p_y = vec![0.0; ny];
    for x in 0..nx {
        for y in 0..ny {
            p_x[x] += q[x * ny + y];
            p_y[y] += q[x * ny + y];
        }
    }
    (entropy_of(&p_x), entropy_of(&p_y))
}

/// Best joints for two auxiliary structures, as seeds for the full search:
/// constant `Ũ`, where the objective is `D(Q || P_XY) + |H(X̃) − R1|⁺`, and
/// `Ũ = Ỹ`, where it is `D(Q || P_XY) + |H(Ỹ) − R2|⁺ + |H(X̃|Ỹ) − R1|⁺`.
fn restricted_seeds(src: &JointPmf2, rates: RatePair, config: &SolverConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let (nx, ny) = (src.nx(), src.ny());
    let constant = minimise_over_joints(src, config, |q| {
        let d = kl_of(q, src.probs());
        if !d.is_finite() {
            return d;
        }
        let (hx, _) = marginal_entropies(q, nx, ny);
        d + (hx - rates.r1).max(0.0)
    })?;
    let copy_y = minimise_over_joints(src, config, |q| {
        let d = kl_of(q, src.probs());
        if !d.is_finite() {
            return d;
        }
        let (_, hy) = marginal_entropies(q, nx, ny);
        let h_x_given_y = (entropy_of(q) - hy).max(0.0);
        d + (hy - rates.r2).max(0.0) + (h_x_given_y - rates.r1).max(0.0)
    })?;
    Ok((constant, copy_y))
}

/// [`wak_exponent_seeded`] without warm starts.
pub fn wak_exponent(
    src: &JointPmf2,
    rates: RatePair,
    config: &SolverConfig,
    nu: usize,
) -> Result<ExponentBreakdown> {
    wak_exponent_seeded(src, rates, config, nu, &[])
}

/// Replaces `Ũ` by `(Ũ, V)` where `V` reveals `X̃` with probability `1 − e`
/// and is an erasure otherwise, with `e` chosen so that `H(X̃|Ũ, V) = r1`.
///
/// The exponent objective of the result is at most that of `a` plus
/// `H(X̃|Ũ) − r1`. Joints already meeting the rate are returned unchanged;
/// otherwise the result has at most `nu·(nx + 1)` symbols, those of zero mass
/// dropped.
pub fn erasure_refinement(a: &AuxJointPmf, r1: f64) -> Result<AuxJointPmf> {
    let h = aux_measures(a).cond_entropy_x_given_u;
    if h <= r1 {
        return Ok(a.clone());
    }
    let e = (r1 / h).max(0.0);
    let (nu, nx, ny) = (a.nu(), a.nx(), a.ny());
    let mut probs = Vec::new();
    for u in 0..nu {
        // V = x reveals the letter; V = nx is the erasure.
        for v in 0..=nx {
            let block: Vec<f64> = (0..nx)
                .flat_map(|x| {
                    (0..ny).map(move |y| {
                        let p = a.get(u, x, y);
                        if v == nx {
                            e * p
                        } else if v == x {
                            (1.0 - e) * p
                        } else {
                            0.0
                        }
                    })
                })
                .collect();
            if block.iter().any(|&p| p > 0.0) {
                probs.extend(block);
            }
        }
    }
    let nu_out = probs.len() / (nx * ny);
    AuxJointPmf::new(nu_out, nx, ny, probs)
}

/// Minimises the exponent over auxiliary joints with `nu` symbols and returns
/// a feasible minimiser.
///
/// The search runs on the unconstrained form (module docs), seeded with
/// constant `Ũ`, `Ũ = Ỹ`, the Markov witness of the rate-region boundary at
/// `R2`, random Markov channels, `config.starts` random points and every entry
/// of `warm` (joints with at most `nu` symbols, padded). Its minimiser is then
/// passed through [`erasure_refinement`], so `argmin` may have up to
/// `nu·(|X| + 1)` symbols. The value never exceeds the objective of any seed
/// that meets the rate. With `nu < |X||Y| + 2` the result is an upper bound
/// on `F`.
pub fn wak_exponent_seeded(
    src: &JointPmf2,
    rates: RatePair,
    config: &SolverConfig,
    nu: usize,
    warm: &[AuxJointPmf],
) -> Result<ExponentBreakdown> {
    config.validate()?;
    if nu == 0 {
        return Err(Error::Domain("auxiliary alphabet must be nonempty".into()));
    }
    if nu < full_nu(src) {
        log::debug!(
            "|U| = {nu} is below |X||Y|+2 = {}; the result is an upper bound",
            full_nu(src)
        );
    }
    let problem = WakProblem { src, rates, nu };
    let domain = problem.domain()?;
    let ny = src.ny();

    let mut seeds = Vec::new();
    let (tilted, tilted_copy) = restricted_seeds(src, rates, config)?;
    for q in [src.probs(), &tilted[..]] {
        let mut constant = vec![0.0; nu];
        constant[0] = 1.0;
        for _ in 0..nu {
            constant.extend_from_slice(q);
        }
        seeds.push(constant);
    }
    if nu >= ny {
        let channel: Vec<f64> = (0..ny)
            .flat_map(|y| (0..ny).map(move |u| f64::from(u8::from(u == y))))
            .collect();
        seeds.extend(problem.markov_point(&channel, ny));
        let block = src.nx() * ny;
        let copy: Vec<f64> = (0..ny * block)
            .map(|i| if (i % block) % ny == i / block { tilted_copy[i % block] } else { 0.0 })
            .collect();
        if let Ok(a) = AuxJointPmf::new(ny, src.nx(), ny, copy) {
            seeds.extend(problem.embed(&a));
        }
    }
    let k = (ny + 1).min(nu);
    let region_cfg = SolverConfig {
        starts: config.starts.min(64),
        ..config.clone()
    };
    if let Ok(w) = region_solve(src, rates.r2, k, &region_cfg) {
        seeds.extend(problem.markov_point(&w.channel, k));
    }
    let markov_starts = config.starts / 4;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x6d61726b6f76);
    let channel_domain = SearchDomain::new(vec![Block::Simplex(nu); ny])?;
    for _ in 0..markov_starts {
        seeds.extend(problem.markov_point(&channel_domain.sample(&mut rng), nu));
    }
    seeds.extend(warm.iter().filter_map(|a| problem.embed(a)));

    let search_cfg = SolverConfig {
        starts: (config.starts - markov_starts).max(1),
        ..config.clone()
    };
    let found = multistart_search_seeded(&domain, &problem, &search_cfg, &seeds)?;
    let argmin = erasure_refinement(&problem.to_joint(&found.argmin)?, rates.r1)?;
    let (kl_term, soft_markov_term) = soft_markov_decompose(&argmin, src)?;
    let m = aux_measures(&argmin);
    let rate2_term = (m.mi_u_y - rates.r2).max(0.0);
    Ok(ExponentBreakdown {
        value: kl_term + soft_markov_term + rate2_term,
        kl_term,
        soft_markov_term,
        rate2_term,
        constraint_slack: rates.r1 - m.cond_entropy_x_given_u,
        argmin,
        diagnostics: SearchDiagnostics {
            evaluations: found.evaluations,
            converged: found.converged,
        },
    })
}

/// Channel rows `W(u|y)` for `y` in the source's `Y` alphabet.
struct RegionProblem<'a> {
    src: &'a JointPmf2,
    p_y: Vec<f64>,
    r2: f64,
    k: usize,
}

impl RegionProblem<'_> {
    fn h_x_given_u(&self, w: &[f64]) -> f64 {
        let (nx, ny, k) = (self.src.nx(), self.src.ny(), self.k);
        let mut p_ux = vec![0.0; k * nx];
        let mut p_u = vec![0.0; k];
        for x in 0..nx {
            for y in 0..ny {
                let s = self.src.get(x, y);
                for u in 0..k {
                    let p = s * w[y * k + u];
                    p_ux[u * nx + x] += p;
                    p_u[u] += p;
                }
            }
        }
        (entropy_of(&p_ux) - entropy_of(&p_u)).max(0.0)
    }

    fn mi_u_y(&self, w: &[f64]) -> f64 {
        let (ny, k) = (self.src.ny(), self.k);
        let mut p_u = vec![0.0; k];
        for y in 0..ny {
            for u in 0..k {
                p_u[u] += self.p_y[y] * w[y * k + u];
            }
        }
        let mut i = 0.0;
        for y in 0..ny {
            for u in 0..k {
                let p = self.p_y[y] * w[y * k + u];
                if p > 0.0 {
                    i += p * (w[y * k + u] / p_u[u]).log2();
                }
            }
        }
        i.max(0.0)
    }
}

impl SearchProblem for RegionProblem<'_> {
    fn objective(&self, point: &[f64]) -> f64 {
        self.h_x_given_u(point)
    }

    fn violation(&self, point: &[f64]) -> f64 {
        self.mi_u_y(point) - self.r2
    }
}

pub(crate) struct RegionWitness {
    pub min_r1: f64,
    /// `W(u|y)` at `y * k + u`.
    pub channel: Vec<f64>,
}

fn identity_channel(ny: usize, k: usize) -> Vec<f64> {
    (0..ny)
        .flat_map(|y| (0..k).map(move |u| f64::from(u8::from(u == y.min(k - 1)))))
        .collect()
}

fn region_solve(src: &JointPmf2, r2: f64, k: usize, config: &SolverConfig) -> Result<RegionWitness> {
    let ny = src.ny();
    let problem = RegionProblem {
        src,
        p_y: src.marginal_y_vec(),
        r2,
        k,
    };
    let constant: Vec<f64> = (0..ny).flat_map(|_| (0..k).map(|u| f64::from(u8::from(u == 0)))).collect();
    let identity = identity_channel(ny, k);
    if k > ny && r2 >= problem.mi_u_y(&identity) {
        return Ok(RegionWitness {
            min_r1: conditional_entropy(src),
            channel: identity,
        });
    }
    if r2 <= 0.0 {
        return Ok(RegionWitness {
            min_r1: entropy(&src.marginal_x()),
            channel: constant,
        });
    }
    let domain = SearchDomain::new(vec![Block::Simplex(k); ny])?;
    let found = multistart_search_seeded(&domain, &problem, config, &[constant, identity])?;
    Ok(RegionWitness {
        min_r1: found.value,
        channel: found.argmin,
    })
}

/// Smallest `R1` with `(R1, R2)` achievable: the minimum of `H(X|U)` over
/// channels `P_U|Y` with `|U| ≤ |Y| + 1` and `I(Y ∧ U) ≤ R2`, the Markov chain
/// `U − Y − X` holding by construction.
pub fn region_min_r1(src: &JointPmf2, r2: f64, config: &SolverConfig) -> Result<f64> {
    if !(r2 >= 0.0) {
        return Err(Error::Domain(format!("rate {r2} must be nonnegative")));
    }
    config.validate()?;
    let lower = conditional_entropy(src);
    let upper = entropy(&src.marginal_x());
    Ok(region_solve(src, r2, src.ny() + 1, config)?.min_r1.clamp(lower, upper))
}

pub fn region_contains(src: &JointPmf2, rates: RatePair, config: &SolverConfig) -> Result<bool> {
    Ok(rates.r1 >= region_min_r1(src, rates.r2, config)? - REGION_TOLERANCE)
}

/// Lower boundary of the achievable region, `R2` ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCurve {
    pub points: Vec<(f64, f64)>,
}

/// Samples the region boundary on an ascending `R2` grid. A channel feasible
/// at one rate is feasible at every larger rate, so each point is the best
/// witness found at or below its rate.
pub fn region_curve(src: &JointPmf2, r2_grid: &[f64], config: &SolverConfig) -> Result<RegionCurve> {
    if r2_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Domain("R2 grid must be ascending".into()));
    }
    let values = exec::map_collect(r2_grid.len(), |i| region_min_r1(src, r2_grid[i], config));
    let mut points = Vec::with_capacity(values.len());
    let mut running = f64::INFINITY;
    for (&r2, v) in r2_grid.iter().zip(values) {
        running = running.min(v?);
        points.push((r2, running));
    }
    Ok(RegionCurve { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probkit::{binary_entropy, Pmf};
    use rand::Rng;

    fn dsbs(p: f64) -> JointPmf2 {
        JointPmf2::new(2, 2, vec![(1.0 - p) / 2.0, p / 2.0, p / 2.0, (1.0 - p) / 2.0]).unwrap()
    }

    fn random_aux(rng: &mut ChaCha8Rng, nu: usize, nx: usize, ny: usize) -> AuxJointPmf {
        let v: Vec<f64> = (0..nu * nx * ny).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let s: f64 = v.iter().sum();
        AuxJointPmf::new(nu, nx, ny, v.into_iter().map(|x| x / s).collect()).unwrap()
    }

    #[test]
    fn divergence_term_examples() {
        let src = dsbs(0.1);
        // Ũ independent of (X̃, Ỹ) with P_X̃Ỹ = src
        let indep = AuxJointPmf::markov(&src, 2, &[0.3, 0.7, 0.3, 0.7]).unwrap();
        assert!(wak_divergence_term(&indep, &src).unwrap() < 1e-15);

        // Ũ = X̃
        let mut probs = vec![0.0; 8];
        for x in 0..2 {
            for y in 0..2 {
                probs[(x * 2 + x) * 2 + y] = src.get(x, y);
            }
        }
        let copy_x = AuxJointPmf::new(2, 2, 2, probs).unwrap();
        assert!((wak_divergence_term(&copy_x, &src).unwrap() - 0.468996).abs() < 1e-6);

        let off_support = JointPmf2::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let a = AuxJointPmf::new(1, 2, 2, vec![0.25; 4]).unwrap();
        assert_eq!(wak_divergence_term(&a, &off_support).unwrap(), f64::INFINITY);
        let wrong = AuxJointPmf::new(1, 3, 1, vec![0.2, 0.3, 0.5]).unwrap();
        assert!(matches!(wak_divergence_term(&wrong, &src), Err(Error::Dimension(_))));
    }

    #[test]
    fn decomposition_examples() {
        let src = dsbs(0.3);
        let markov = AuxJointPmf::markov(&src, 3, &[0.2, 0.5, 0.3, 0.6, 0.1, 0.3]).unwrap();
        let (_, cmi) = soft_markov_decompose(&markov, &src).unwrap();
        assert!(cmi < 1e-12);

        let uniform = JointPmf2::product(&Pmf::uniform(2), &Pmf::uniform(2));
        let mut probs = vec![0.0; 8];
        probs[0] = 0.5;
        probs[7] = 0.5;
        let diag = AuxJointPmf::new(2, 2, 2, probs).unwrap();
        let (kl, cmi) = soft_markov_decompose(&diag, &uniform).unwrap();
        assert!((kl - 1.0).abs() < 1e-12);
        assert!(cmi.abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let a = random_aux(&mut rng, 3, 2, 3);
            let s = AuxJointPmf::new(1, 2, 3, random_aux(&mut rng, 1, 2, 3).probs().to_vec())
                .unwrap()
                .marginal_xy();
            let (kl, cmi) = soft_markov_decompose(&a, &s).unwrap();
            assert!((kl + cmi - wak_divergence_term(&a, &s).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn objective_examples() {
        let src = dsbs(0.1);
        let constant = AuxJointPmf::new(1, 2, 2, src.probs().to_vec()).unwrap();
        assert!(wak_objective(&constant, &src, 0.0).unwrap().abs() < 1e-15);

        let copy_y = AuxJointPmf::markov(&src, 2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((wak_objective(&copy_y, &src, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(wak_objective(&copy_y, &src, 1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn search_objective_matches_tensor_route() {
        let src = dsbs(0.15);
        let problem = WakProblem {
            src: &src,
            rates: RatePair::new(0.4, 0.1).unwrap(),
            nu: 3,
        };
        let domain = problem.domain().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let x = domain.sample(&mut rng);
            let a = problem.to_joint(&x).unwrap();
            let h = aux_measures(&a).cond_entropy_x_given_u;
            let direct = wak_objective(&a, &src, 0.1).unwrap() + (h - 0.4).max(0.0);
            assert!((problem.objective(&x) - direct).abs() < 1e-12);
            let back = problem.embed(&a).unwrap();
            assert!((problem.objective(&back) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn erasure_refinement_trades_entropy_for_divergence() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let a = random_aux(&mut rng, 2, 3, 2);
            let src = random_aux(&mut rng, 1, 3, 2).marginal_xy();
            let h = aux_measures(&a).cond_entropy_x_given_u;
            let r1 = rng.gen::<f64>() * h;
            let b = erasure_refinement(&a, r1).unwrap();
            assert!(b.nu() <= 2 * 4);
            for (p, q) in b.marginal_xy().probs().iter().zip(a.marginal_xy().probs()) {
                assert!((p - q).abs() < 1e-15);
            }
            assert!((aux_measures(&b).cond_entropy_x_given_u - r1).abs() < 1e-12);
            let r2 = rng.gen::<f64>();
            let before = wak_objective(&a, &src, r2).unwrap() + (h - r1);
            assert!(wak_objective(&b, &src, r2).unwrap() <= before + 1e-12);
        }
        let a = random_aux(&mut rng, 2, 2, 2);
        assert_eq!(erasure_refinement(&a, 5.0).unwrap(), a);
    }

    #[test]
    fn zero_rate_without_encoding_limit() {
        // r1 = 0 with the side information fully available: the tilted source
        // concentrating X on Y costs −log2(0.9).
        let src = dsbs(0.1);
        let cfg = SolverConfig::default().with_starts(32);
        let b = wak_exponent(&src, RatePair::new(0.0, 2.0).unwrap(), &cfg, 4).unwrap();
        assert!((b.value - 0.15200309344504995).abs() < 1e-4, "{}", b.value);
        assert!(b.constraint_slack >= -1e-9);
    }

    #[test]
    fn zero_when_r1_covers_entropy() {
        let src = dsbs(0.1);
        let cfg = SolverConfig::default().with_starts(8);
        let b = wak_exponent(&src, RatePair::new(1.0, 0.0).unwrap(), &cfg, 2).unwrap();
        assert!(b.value.abs() < 1e-12);
        assert!(b.constraint_slack >= -1e-9);
    }

    #[test]
    fn breakdown_is_consistent() {
        let src = dsbs(0.1);
        let cfg = SolverConfig::default().with_starts(24);
        let b = wak_exponent(&src, RatePair::new(0.3, 0.1).unwrap(), &cfg, 3).unwrap();
        assert!((b.value - (b.kl_term + b.soft_markov_term + b.rate2_term)).abs() < 1e-9);
        assert!(b.constraint_slack >= -1e-9);
        assert!(b.value > 0.0);
        let json = serde_json::to_value(&b).unwrap();
        for key in ["value", "kl_term", "soft_markov_term", "rate2_term", "constraint_slack", "argmin", "evaluations", "converged"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let back: ExponentBreakdown = serde_json::from_value(json).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn warm_start_bounds_the_result() {
        let src = dsbs(0.2);
        let cfg = SolverConfig::default().with_starts(8);
        let rates = RatePair::new(0.5, 0.2).unwrap();
        let small = wak_exponent(&src, rates, &cfg, 2).unwrap();
        let big = wak_exponent_seeded(&src, rates, &cfg, 3, std::slice::from_ref(&small.argmin)).unwrap();
        assert!(big.value <= small.value + 1e-12);
    }

    #[test]
    fn region_endpoints() {
        let src = dsbs(0.1);
        let cfg = SolverConfig::default();
        assert_eq!(region_min_r1(&src, 0.0, &cfg).unwrap(), 1.0);
        let h = conditional_entropy(&src);
        assert!((region_min_r1(&src, 1.0, &cfg).unwrap() - h).abs() < 1e-12);
        assert!(region_contains(&src, RatePair::new(1.0, 0.0).unwrap(), &cfg).unwrap());
        assert!(region_contains(&src, RatePair::new(h, 1.0).unwrap(), &cfg).unwrap());
        assert!(!region_contains(&src, RatePair::new(h - 0.05, 5.0).unwrap(), &cfg).unwrap());
    }

    #[test]
    fn region_interior_point_matches_symmetric_channel() {
        // For the DSBS, binary symmetric test channels are optimal:
        // min H(X|U) at I(U;Y) = 1 − h(a) is h(p ⋆ a).
        let src = dsbs(0.1);
        let r2 = 1.0 - binary_entropy(0.2);
        let v = region_min_r1(&src, r2, &SolverConfig::default()).unwrap();
        let conv = 0.1 * 0.8 + 0.9 * 0.2;
        assert!((v - binary_entropy(conv)).abs() < 1e-4, "{v}");
    }

    #[test]
    fn curve_is_monotone() {
        let src = dsbs(0.25);
        let grid: Vec<f64> = (0..8).map(|i| i as f64 * 0.05).collect();
        let cfg = SolverConfig::default().with_starts(32);
        let c = region_curve(&src, &grid, &cfg).unwrap();
        assert!(c.points.windows(2).all(|w| w[1].1 <= w[0].1));
        let lo = conditional_entropy(&src);
        assert!(c.points.iter().all(|p| p.1 >= lo - 1e-12 && p.1 <= 1.0 + 1e-12));
    }
}
