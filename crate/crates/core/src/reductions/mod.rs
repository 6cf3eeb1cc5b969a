//! Special cases of the exponent and the comparison bound.
//!
//! - [`exponent_ne`]: side information available uncoded (`R2 ≥ log|Y|`).
//! - [`exponent_single_direct`] / [`exponent_single_parametric`]: no side
//!   information, as a divergence minimisation and as a maximisation over the
//!   tilting parameter `θ ≤ 0` of `s(θ) = log2 Σ P(x)^(1−θ)`.
//! - [`oohama_single`], [`oohama_wak_bound`]: Oohama's parametric lower bound,
//!   and [`gap_check`] comparing it with the tight single-user exponent.

mod ne;
mod oohama;
mod single;

pub use ne::exponent_ne;
pub use oohama::{oohama_wak_bound, OohamaBound, OohamaValue, MU_ALPHA_GRID};
pub use single::{
    exponent_single_direct, exponent_single_parametric, gap_check, oohama_single, s_theta,
    GapReport, ThetaGrid, ThetaMax,
};
