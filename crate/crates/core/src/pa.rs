//! Security of privacy amplification against an eavesdropper with bounded
//! storage.
//!
//! Alice and Bob hash `n` symbols of `X` to a key of `n·R1` bits while Eve
//! keeps an `n·R2`-bit description of the correlated `Y`. With slack `δ > 0`,
//! the total variation distance between the real and an ideal key satisfies
//!
//! ```text
//! Δ ≤ 2^(−n·F(R1 + δ, R2 | P_XY)) + ½·2^(−n·δ/2)
//! ```
//!
//! from the generic split `Δ ≤ P[tail] + ½·2^((n·R1 − τ)/2)` at `τ = n(R1 + δ)`.
//! Terms are combined in log2 space so large `n` neither underflows nor loses
//! the smaller term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::optim::SolverConfig;
use crate::probkit::{AuxJointPmf, JointPmf2};
use crate::wak::{wak_exponent_seeded, RatePair};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaBoundReport {
    pub n: u64,
    pub r1: f64,
    pub r2: f64,
    pub delta: f64,
    /// `F(r1 + delta, r2 | P_XY)`
    pub exponent: f64,
    /// `2^(−n·exponent)`
    pub tail_term: f64,
    /// `½·2^(−n·delta/2)`
    pub hash_term: f64,
    pub total: f64,
    pub log2_total: f64,
    /// Set when `total ≥ 1`, i.e. the bound says nothing.
    pub vacuous: bool,
}

/// `log2(2^a + 2^b)`.
fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// `tail_probability + ½·2^((n·r1 − tau)/2)`.
pub fn pa_generic_bound(tail_probability: f64, tau: f64, n: u64, r1: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&tail_probability) {
        return Err(Error::Domain(format!("tail probability {tail_probability} is outside [0, 1]")));
    }
    if !(tau >= 0.0 && r1 >= 0.0) {
        return Err(Error::Domain("tau and r1 must be nonnegative".into()));
    }
    Ok(tail_probability + 0.5 * ((n as f64 * r1 - tau) / 2.0).exp2())
}

/// The report for a known exponent `F(r1 + delta, r2)`.
pub fn pa_bound_from_exponent(exponent: f64, rates: RatePair, delta: f64, n: u64) -> Result<PaBoundReport> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!("slack delta = {delta} must be positive")));
    }
    if n == 0 {
        return Err(Error::Domain("blocklength must be positive".into()));
    }
    if !(exponent >= 0.0) {
        return Err(Error::Domain(format!("exponent {exponent} must be nonnegative")));
    }
    let nf = n as f64;
    let log2_tail = -nf * exponent;
    let log2_hash = -1.0 - nf * delta / 2.0;
    let tail_term = log2_tail.exp2();
    let hash_term = log2_hash.exp2();
    let total = tail_term + hash_term;
    Ok(PaBoundReport {
        n,
        r1: rates.r1,
        r2: rates.r2,
        delta,
        exponent,
        tail_term,
        hash_term,
        total,
        log2_total: log2_add(log2_tail, log2_hash),
        vacuous: total >= 1.0,
    })
}

/// Solves the exponent at `(r1 + delta, r2)` with `nu` auxiliary symbols and
/// evaluates the bound.
pub fn pa_security_bound(
    src: &JointPmf2,
    rates: RatePair,
    delta: f64,
    n: u64,
    config: &SolverConfig,
    nu: usize,
) -> Result<PaBoundReport> {
    pa_security_bound_seeded(src, rates, delta, n, config, nu, &[]).map(|(report, _)| report)
}

fn pa_security_bound_seeded(
    src: &JointPmf2,
    rates: RatePair,
    delta: f64,
    n: u64,
    config: &SolverConfig,
    nu: usize,
    warm: &[AuxJointPmf],
) -> Result<(PaBoundReport, AuxJointPmf)> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!("slack delta = {delta} must be positive")));
    }
    let shifted = RatePair::new(rates.r1 + delta, rates.r2)?;
    let e = wak_exponent_seeded(src, shifted, config, nu, warm)?;
    Ok((pa_bound_from_exponent(e.value, rates, delta, n)?, e.argmin))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffRow {
    pub r2: f64,
    /// Largest grid key rate meeting the target, if any.
    pub max_r1: Option<f64>,
    /// Bound at `max_r1`; absent when no rate qualifies or the target is
    /// trivially met.
    pub total_bound: Option<f64>,
}

/// For each storage rate, the largest `r1` on `r1_grid` whose bound is at
/// most `target`.
///
/// A target of at least 1 is met by every key (total variation never exceeds
/// 1), and a target below the hash term alone is met by none; neither case
/// solves any exponent. Within one `r2` the grid is solved in ascending order,
/// each solve warm-started from the previous minimiser.
#[allow(clippy::too_many_arguments)]
pub fn pa_rate_tradeoff(
    src: &JointPmf2,
    target: f64,
    n: u64,
    delta: f64,
    r2_grid: &[f64],
    r1_grid: &[f64],
    config: &SolverConfig,
    nu: usize,
) -> Result<Vec<TradeoffRow>> {
    if !(target > 0.0) {
        return Err(Error::Domain(format!("target {target} must be positive")));
    }
    if r1_grid.is_empty() || r1_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("r1 grid must be nonempty and strictly ascending".into()));
    }
    let hash_only = pa_bound_from_exponent(f64::INFINITY, RatePair::new(0.0, 0.0)?, delta, n)?;
    let top = r1_grid[r1_grid.len() - 1];
    let rows = exec::map_collect(r2_grid.len(), |i| -> Result<TradeoffRow> {
        let r2 = r2_grid[i];
        RatePair::new(0.0, r2)?;
        if target >= 1.0 {
            return Ok(TradeoffRow { r2, max_r1: Some(top), total_bound: None });
        }
        let mut row = TradeoffRow { r2, max_r1: None, total_bound: None };
        if hash_only.total > target {
            return Ok(row);
        }
        let mut warm: Vec<AuxJointPmf> = Vec::new();
        for &r1 in r1_grid {
            let (report, argmin) =
                pa_security_bound_seeded(src, RatePair::new(r1, r2)?, delta, n, config, nu, &warm)?;
            if report.total <= target {
                row.max_r1 = Some(r1);
                row.total_bound = Some(report.total);
            }
            warm = vec![argmin];
        }
        Ok(row)
    });
    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_bound_examples() {
        assert_eq!(pa_generic_bound(0.0, 10.0, 10, 1.0).unwrap(), 0.5);
        let v = pa_generic_bound(0.1, 3.0 + 20.0, 10, 0.3).unwrap();
        assert!((v - (0.1 + 0.5 * 2f64.powi(-10))).abs() < 1e-15);
        assert!(pa_generic_bound(0.0, 1.0, 10, 0.3).unwrap() > 0.5);
        assert!(pa_generic_bound(1.5, 1.0, 10, 0.3).is_err());
    }

    #[test]
    fn injected_exponent_arithmetic() {
        let r = pa_bound_from_exponent(0.05, RatePair::new(0.3, 0.2).unwrap(), 0.02, 100).unwrap();
        assert!((r.total - 0.28125).abs() <= 1e-12 * 0.28125);
        assert!((r.log2_total.exp2() - 0.28125).abs() <= 1e-12 * 0.28125);
        assert!(!r.vacuous);
        let r2 = pa_bound_from_exponent(0.05, RatePair::new(0.3, 0.2).unwrap(), 0.02, 200).unwrap();
        assert!(r2.total < r.total);
    }

    #[test]
    fn huge_blocklength_stays_finite_in_log_space() {
        let r = pa_bound_from_exponent(0.1, RatePair::new(0.3, 0.2).unwrap(), 0.02, 1_000_000).unwrap();
        assert_eq!(r.total, 0.0);
        assert!((r.log2_total - (-1.0 - 10_000.0)).abs() < 1e-9);
    }

    #[test]
    fn zero_exponent_is_vacuous() {
        let r = pa_bound_from_exponent(0.0, RatePair::new(0.3, 0.2).unwrap(), 0.02, 10).unwrap();
        assert!(r.vacuous);
        assert!(r.total > 1.0);
    }

    #[test]
    fn rejects_nonpositive_slack() {
        let rates = RatePair::new(0.3, 0.2).unwrap();
        assert!(matches!(pa_bound_from_exponent(0.1, rates, 0.0, 10), Err(Error::Domain(_))));
        let src = JointPmf2::new(2, 2, vec![0.45, 0.05, 0.05, 0.45]).unwrap();
        assert!(matches!(
            pa_security_bound(&src, rates, -0.1, 10, &SolverConfig::default(), 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tradeoff_short_circuits() {
        let src = JointPmf2::new(2, 2, vec![0.45, 0.05, 0.05, 0.45]).unwrap();
        let cfg = SolverConfig::default();
        let grid = [0.0, 0.5, 1.0];
        let rows = pa_rate_tradeoff(&src, 1.0, 10, 0.02, &[0.0, 0.3], &grid, &cfg, 2).unwrap();
        assert!(rows.iter().all(|r| r.max_r1 == Some(1.0)));
        let rows = pa_rate_tradeoff(&src, 0.1, 10, 0.02, &[0.0, 0.3], &grid, &cfg, 2).unwrap();
        assert!(rows.iter().all(|r| r.max_r1.is_none()));
    }
}
