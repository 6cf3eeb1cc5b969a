use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sum-to-one tolerance applied on construction.
pub const PMF_TOLERANCE: f64 = 1e-12;
/// Sum-to-one tolerance applied when reading distributions from JSON.
pub const JSON_SUM_TOLERANCE: f64 = 1e-9;

fn validate(probs: &[f64], tolerance: f64) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidPmf("empty alphabet".into()));
    }
    let mut sum = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidPmf(format!("entry {i} is {p}")));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > tolerance {
        return Err(Error::InvalidPmf(format!("entries sum to {sum}")));
    }
    Ok(())
}

/// A distribution on `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, PMF_TOLERANCE)
    }

    /// Accepts entries summing to `1 ± tolerance`, stored as given.
    pub fn with_tolerance(probs: Vec<f64>, tolerance: f64) -> Result<Self> {
        validate(&probs, tolerance)?;
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs a nonempty alphabet");
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::Dimension(format!("symbol {at} outside alphabet of size {n}")));
        }
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Pmf::with_tolerance(probs, JSON_SUM_TOLERANCE)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Self {
        p.probs
    }
}

/// A joint distribution `P_XY` stored row-major, index `x * ny + y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointPmf2Repr")]
pub struct JointPmf2 {
    nx: usize,
    ny: usize,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct JointPmf2Repr {
    nx: usize,
    ny: usize,
    probs: Vec<f64>,
}

impl TryFrom<JointPmf2Repr> for JointPmf2 {
    type Error = Error;

    fn try_from(r: JointPmf2Repr) -> Result<Self> {
        JointPmf2::with_tolerance(r.nx, r.ny, r.probs, JSON_SUM_TOLERANCE)
    }
}

impl JointPmf2 {
    pub fn new(nx: usize, ny: usize, probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(nx, ny, probs, PMF_TOLERANCE)
    }

    pub fn with_tolerance(nx: usize, ny: usize, probs: Vec<f64>, tolerance: f64) -> Result<Self> {
        if nx == 0 || ny == 0 || probs.len() != nx * ny {
            return Err(Error::Dimension(format!(
                "{} entries for a {nx}x{ny} alphabet",
                probs.len()
            )));
        }
        validate(&probs, tolerance)?;
        Ok(Self { nx, ny, probs })
    }

    /// `P_X × P_Y`.
    pub fn product(px: &Pmf, py: &Pmf) -> Self {
        let (nx, ny) = (px.alphabet_size(), py.alphabet_size());
        let mut probs = Vec::with_capacity(nx * ny);
        for &a in px.probs() {
            for &b in py.probs() {
                probs.push(a * b);
            }
        }
        Self { nx, ny, probs }
    }

    /// `P_X` on a trivial side-information alphabet, `|Y| = 1`.
    pub fn without_side_information(px: &Pmf) -> Self {
        Self {
            nx: px.alphabet_size(),
            ny: 1,
            probs: px.probs().to_vec(),
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.ny + y]
    }

    pub(crate) fn marginal_x_vec(&self) -> Vec<f64> {
        self.probs.chunks(self.ny).map(|row| row.iter().sum()).collect()
    }

    pub(crate) fn marginal_y_vec(&self) -> Vec<f64> {
        let mut py = vec![0.0; self.ny];
        for row in self.probs.chunks(self.ny) {
            for (acc, &p) in py.iter_mut().zip(row) {
                *acc += p;
            }
        }
        py
    }

    pub fn marginal_x(&self) -> Pmf {
        Pmf {
            probs: self.marginal_x_vec(),
        }
    }

    pub fn marginal_y(&self) -> Pmf {
        Pmf {
            probs: self.marginal_y_vec(),
        }
    }

    /// The same distribution viewed as a flat pmf on `nx * ny` symbols.
    pub fn flatten(&self) -> Pmf {
        Pmf {
            probs: self.probs.clone(),
        }
    }
}

/// A joint distribution `P_UXY`, index `(u * nx + x) * ny + y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxJointPmf {
    nu: usize,
    nx: usize,
    ny: usize,
    probs: Vec<f64>,
}

impl AuxJointPmf {
    pub fn new(nu: usize, nx: usize, ny: usize, probs: Vec<f64>) -> Result<Self> {
        if nu == 0 || nx == 0 || ny == 0 || probs.len() != nu * nx * ny {
            return Err(Error::Dimension(format!(
                "{} entries for a {nu}x{nx}x{ny} alphabet",
                probs.len()
            )));
        }
        validate(&probs, PMF_TOLERANCE)?;
        Ok(Self { nu, nx, ny, probs })
    }

    /// Builds `P_U(u) · P_XY|U(x, y | u)` from a weight vector and one
    /// row-major `nx * ny` block per symbol of `U`.
    pub fn from_mixture(nx: usize, ny: usize, weights: &[f64], blocks: &[f64]) -> Result<Self> {
        let nu = weights.len();
        let block = nx * ny;
        if blocks.len() != nu * block {
            return Err(Error::Dimension(format!(
                "{} block entries for {nu} blocks of {block}",
                blocks.len()
            )));
        }
        let probs = weights
            .iter()
            .zip(blocks.chunks(block))
            .flat_map(|(&w, b)| b.iter().map(move |&p| w * p))
            .collect();
        Self::new(nu, nx, ny, probs)
    }

    /// `P_XY · P_U|Y` for a channel given row-wise, `channel[y * nu + u]`.
    pub fn markov(src: &JointPmf2, nu: usize, channel: &[f64]) -> Result<Self> {
        let (nx, ny) = (src.nx(), src.ny());
        if channel.len() != ny * nu {
            return Err(Error::Dimension(format!(
                "channel has {} entries, expected {}",
                channel.len(),
                ny * nu
            )));
        }
        let mut probs = vec![0.0; nu * nx * ny];
        for u in 0..nu {
            for x in 0..nx {
                for y in 0..ny {
                    probs[(u * nx + x) * ny + y] = src.get(x, y) * channel[y * nu + u];
                }
            }
        }
        Self::new(nu, nx, ny, probs)
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, u: usize, x: usize, y: usize) -> f64 {
        self.probs[(u * self.nx + x) * self.ny + y]
    }

    /// `P_X̃Ỹ`, by exact summation over `u`.
    pub fn marginal_xy(&self) -> JointPmf2 {
        let block = self.nx * self.ny;
        let mut probs = vec![0.0; block];
        for chunk in self.probs.chunks(block) {
            for (acc, &p) in probs.iter_mut().zip(chunk) {
                *acc += p;
            }
        }
        JointPmf2 {
            nx: self.nx,
            ny: self.ny,
            probs,
        }
    }

    pub fn marginal_u(&self) -> Pmf {
        Pmf {
            probs: self
                .probs
                .chunks(self.nx * self.ny)
                .map(|c| c.iter().sum())
                .collect(),
        }
    }
}
