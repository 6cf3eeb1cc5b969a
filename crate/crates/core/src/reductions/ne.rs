use crate::error::{Error, Result};
use crate::optim::{grid_search, multistart_search_seeded, Block, SearchDomain, SolverConfig, FnProblem};
use crate::probkit::{entropy_of, kl_of, JointPmf2};

/// Largest `|X||Y|` for which the grid oracle provides the starting point.
const GRID_ORACLE_MAX_CELLS: usize = 9;

/// `min over P_X̃Ỹ of D(P_X̃Ỹ || P_XY) + |H(X̃|Ỹ) − R1|⁺`.
pub fn exponent_ne(src: &JointPmf2, r1: f64, config: &SolverConfig) -> Result<f64> {
    if !(r1 >= 0.0) {
        return Err(Error::Domain(format!("rate {r1} must be nonnegative")));
    }
    config.validate()?;
    let (nx, ny) = (src.nx(), src.ny());
    let objective = |p: &[f64]| {
        let d = kl_of(p, src.probs());
        if !d.is_finite() {
            return d;
        }
        let mut p_y = vec![0.0; ny];
        for row in p.chunks(ny) {
            for (acc, v) in p_y.iter_mut().zip(row) {
                *acc += v;
            }
        }
        let h = (entropy_of(p) - entropy_of(&p_y)).max(0.0);
        d + (h - r1).max(0.0)
    };
    let problem = FnProblem(objective);
    let domain = SearchDomain::new(vec![Block::Simplex(nx * ny)])?;
    let mut seeds = vec![src.probs().to_vec()];
    if nx * ny <= GRID_ORACLE_MAX_CELLS {
        seeds.push(grid_search(&domain, &problem, config.grid_resolution)?.argmin);
    }
    Ok(multistart_search_seeded(&domain, &problem, config, &seeds)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probkit::{conditional_entropy, Pmf};

    #[test]
    fn zero_above_conditional_entropy() {
        let src = JointPmf2::new(2, 2, vec![0.45, 0.05, 0.05, 0.45]).unwrap();
        let h = conditional_entropy(&src);
        let cfg = SolverConfig::default().with_starts(8);
        assert_eq!(exponent_ne(&src, h + 1e-9, &cfg).unwrap(), 0.0);
        assert!(exponent_ne(&src, h - 0.1, &cfg).unwrap() > 0.0);
    }

    #[test]
    fn uniform_independent_closed_form() {
        let src = JointPmf2::product(&Pmf::uniform(2), &Pmf::uniform(2));
        let cfg = SolverConfig::default().with_starts(32);
        for r1 in [0.0, 0.25, 0.5, 0.75] {
            let v = exponent_ne(&src, r1, &cfg).unwrap();
            assert!((v - (1.0 - r1)).abs() < 1e-4, "r1 {r1}: {v}");
        }
    }
}
