use rand::Rng;

use crate::error::{Error, Result};

/// One factor of a search domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Block {
    /// Probability vectors with this many components.
    Simplex(usize),
    /// A single coordinate in `[lower, upper]`.
    Box { lower: f64, upper: f64 },
}

impl Block {
    pub fn width(&self) -> usize {
        match self {
            Block::Simplex(n) => *n,
            Block::Box { .. } => 1,
        }
    }
}

/// An ordered product of simplices and intervals; points are the
/// concatenation of the block coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchDomain {
    blocks: Vec<Block>,
    offsets: Vec<usize>,
    dim: usize,
}

impl SearchDomain {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Domain("search domain has no blocks".into()));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            match *b {
                Block::Simplex(0) => {
                    return Err(Error::Domain("simplex block needs at least one component".into()))
                }
                Block::Box { lower, upper } if !(lower <= upper) || !lower.is_finite() || !upper.is_finite() => {
                    return Err(Error::Domain(format!("box [{lower}, {upper}] is empty")))
                }
                _ => {}
            }
            offsets.push(dim);
            dim += b.width();
        }
        Ok(Self {
            blocks,
            offsets,
            dim,
        })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(offset, block)` pairs.
    pub fn layout(&self) -> impl Iterator<Item = (usize, Block)> + '_ {
        self.offsets.iter().copied().zip(self.blocks.iter().copied())
    }

    /// Simplex sums within `1e-12`, nonnegative entries, boxes exactly.
    pub fn contains(&self, point: &[f64]) -> bool {
        if point.len() != self.dim {
            return false;
        }
        self.layout().all(|(off, b)| match b {
            Block::Simplex(n) => {
                let s = &point[off..off + n];
                s.iter().all(|&p| p >= 0.0) && (s.iter().sum::<f64>() - 1.0).abs() <= 1e-12
            }
            Block::Box { lower, upper } => point[off] >= lower && point[off] <= upper,
        })
    }

    /// Uniform sample: Dirichlet(1) on simplices via normalised exponentials,
    /// uniform on intervals.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        for (off, b) in self.layout() {
            match b {
                Block::Simplex(n) => {
                    let s = &mut x[off..off + n];
                    for v in s.iter_mut() {
                        *v = -(1.0 - rng.gen::<f64>()).ln();
                    }
                    let total: f64 = s.iter().sum();
                    s.iter_mut().for_each(|v| *v /= total);
                    normalize(s);
                }
                Block::Box { lower, upper } => {
                    x[off] = lower + (upper - lower) * rng.gen::<f64>();
                }
            }
        }
        x
    }

    /// Maps an arbitrary vector of the right length onto the domain.
    pub fn project(&self, point: &mut [f64]) {
        for (off, b) in self.layout() {
            match b {
                Block::Simplex(n) => normalize(&mut point[off..off + n]),
                Block::Box { lower, upper } => point[off] = point[off].clamp(lower, upper),
            }
        }
    }
}

/// Clears negatives and rescales to unit sum.
pub(crate) fn normalize(s: &mut [f64]) {
    for v in s.iter_mut() {
        if !(*v > 0.0) {
            *v = 0.0;
        }
    }
    let total: f64 = s.iter().sum();
    if total > 0.0 {
        s.iter_mut().for_each(|v| *v /= total);
    } else {
        let n = s.len() as f64;
        s.iter_mut().for_each(|v| *v = 1.0 / n);
    }
}
