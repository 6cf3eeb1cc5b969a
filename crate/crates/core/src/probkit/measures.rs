use serde::{Deserialize, Serialize};

use super::pmf::{AuxJointPmf, JointPmf2, Pmf};
use crate::error::{Error, Result};

#[inline]
pub(crate) fn plog2p(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

pub(crate) fn entropy_of(probs: &[f64]) -> f64 {
    -probs.iter().map(|&p| plog2p(p)).sum::<f64>()
}

/// `Σ p log2(p/q)` over equal-length slices, `INFINITY` off the support of `q`.
pub(crate) fn kl_of(p: &[f64], q: &[f64]) -> f64 {
    let mut d = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            d += a * (a / b).log2();
        }
    }
    d.max(0.0)
}

pub fn entropy(p: &Pmf) -> f64 {
    entropy_of(p.probs()).max(0.0)
}

pub fn joint_entropy(j: &JointPmf2) -> f64 {
    entropy_of(j.probs()).max(0.0)
}

/// `H(X|Y) = H(X,Y) − H(Y)`.
pub fn conditional_entropy(j: &JointPmf2) -> f64 {
    (entropy_of(j.probs()) - entropy_of(&j.marginal_y_vec())).max(0.0)
}

/// `I(X ∧ Y) = H(X) + H(Y) − H(X,Y)`.
pub fn mutual_information(j: &JointPmf2) -> f64 {
    (entropy_of(&j.marginal_x_vec()) + entropy_of(&j.marginal_y_vec()) - entropy_of(j.probs()))
        .max(0.0)
}

pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.alphabet_size() != q.alphabet_size() {
        return Err(Error::Dimension(format!(
            "alphabet sizes {} and {}",
            p.alphabet_size(),
            q.alphabet_size()
        )));
    }
    Ok(kl_of(p.probs(), q.probs()))
}

/// Binary entropy `h(a)`.
pub fn binary_entropy(a: f64) -> f64 {
    entropy_of(&[a, 1.0 - a]).max(0.0)
}

/// Binary divergence `D(q || p) = q log(q/p) + (1−q) log((1−q)/(1−p))`.
pub fn binary_kl(q: f64, p: f64) -> f64 {
    kl_of(&[q, 1.0 - q], &[p, 1.0 - p])
}

pub fn tv_distance(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.alphabet_size() != q.alphabet_size() {
        return Err(Error::Dimension(format!(
            "alphabet sizes {} and {}",
            p.alphabet_size(),
            q.alphabet_size()
        )));
    }
    Ok(0.5 * p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Information quantities of an auxiliary joint `P_ŨX̃Ỹ` that enter the
/// exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxMeasures {
    /// `H(X̃|Ũ)`
    pub cond_entropy_x_given_u: f64,
    /// `I(Ũ ∧ Ỹ)`
    pub mi_u_y: f64,
    /// `I(Ũ ∧ X̃ | Ỹ)`
    pub cond_mi_u_x_given_y: f64,
    /// `P_X̃Ỹ`
    pub marginal_xy: JointPmf2,
}

pub fn aux_measures(a: &AuxJointPmf) -> AuxMeasures {
    let (nu, nx, ny) = (a.nu(), a.nx(), a.ny());
    let mut p_ux = vec![0.0; nu * nx];
    let mut p_uy = vec![0.0; nu * ny];
    let mut p_u = vec![0.0; nu];
    let mut p_y = vec![0.0; ny];
    for u in 0..nu {
        for x in 0..nx {
            for y in 0..ny {
                let p = a.get(u, x, y);
                p_ux[u * nx + x] += p;
                p_uy[u * ny + y] += p;
                p_u[u] += p;
                p_y[y] += p;
            }
        }
    }
    let marginal_xy = a.marginal_xy();
    let h_uxy = entropy_of(a.probs());
    let h_ux = entropy_of(&p_ux);
    let h_uy = entropy_of(&p_uy);
    let h_xy = entropy_of(marginal_xy.probs());
    let h_u = entropy_of(&p_u);
    let h_y = entropy_of(&p_y);
    AuxMeasures {
        cond_entropy_x_given_u: (h_ux - h_u).max(0.0),
        mi_u_y: (h_u + h_y - h_uy).max(0.0),
        cond_mi_u_x_given_y: (h_uy + h_xy - h_uxy - h_y).max(0.0),
        marginal_xy,
    }
}
