//! Finite probability mass functions and base-2 information measures.
//!
//! Conventions: `0·log 0 = 0`, `0·log(0/0) = 0`, and a divergence term with
//! `p > 0` against `q = 0` evaluates to `f64::INFINITY`, the marker optimisers
//! treat as an infeasible point.

mod measures;
mod pmf;

pub use measures::{
    aux_measures, binary_entropy, binary_kl, conditional_entropy, entropy, joint_entropy,
    kl_divergence, mutual_information, tv_distance, AuxMeasures,
};
pub(crate) use measures::{entropy_of, kl_of};
pub use pmf::{AuxJointPmf, JointPmf2, Pmf, JSON_SUM_TOLERANCE, PMF_TOLERANCE};
