//! Strong converse exponents for lossless source coding with encoded side
//! information (the Wyner–Ahlswede–Körner problem) over finite alphabets.
//!
//! The crate is organised bottom-up:
//!
//! - [`probkit`]: probability mass functions and base-2 information measures.
//! - [`optim`]: grid oracles and seeded multi-start compass search over
//!   products of simplices and boxes, plus a 1-D maximiser.
//! - [`wak`]: the tight exponent `F(R1, R2 | P_XY)`, its soft-Markov
//!   decomposition and the achievable rate region.
//! - [`reductions`]: non-encoded side information, the single-user exponent in
//!   direct and parametric form, and Oohama's lower bound.
//! - [`dsbs`]: the three-parameter doubly symmetric binary source study.
//! - [`pa`]: the privacy-amplification security bound.
//! - [`cli`]: the `wakexp` command-line front end.
//!
//! All logarithms are base 2; every information quantity is in bits.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dsbs;
pub mod error;
pub mod exec;
pub mod optim;
pub mod pa;
pub mod probkit;
pub mod reductions;
pub mod wak;

pub use error::{Error, Result};
pub use optim::{SearchDomain, SearchResult, SolverConfig};
pub use probkit::{AuxJointPmf, JointPmf2, Pmf};
pub use wak::{ExponentBreakdown, RatePair};
