use super::{beats, Block, SearchDomain, SearchProblem, SearchResult};
use crate::error::{Error, Result};
use crate::exec;

/// Lattice size above which the oracle refuses to run.
const MAX_GRID_POINTS: u64 = 1 << 34;

/// All compositions of `resolution` into `n` parts, lexicographically
/// ascending, as fractions.
fn simplex_lattice(n: usize, resolution: usize) -> Vec<Vec<f64>> {
    fn rec(n: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(n - 1, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut ints = Vec::new();
    rec(n, resolution, &mut Vec::with_capacity(n), &mut ints);
    let r = resolution as f64;
    ints.into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / r).collect())
        .collect()
}

fn box_lattice(lower: f64, upper: f64, resolution: usize) -> Vec<Vec<f64>> {
    let r = resolution as f64;
    (0..=resolution)
        .map(|k| {
            let v = if k == resolution {
                upper
            } else {
                lower + (upper - lower) * (k as f64 / r)
            };
            vec![v]
        })
        .collect()
}

/// Exhaustive minimum over every lattice point whose simplex coordinates are
/// multiples of `1/resolution` and whose box coordinates split each interval
/// into `resolution` equal steps.
///
/// Infeasible points and points with a non-finite objective are skipped. Ties
/// go to the lexicographically smallest point, so the result does not depend
/// on the execution strategy.
pub fn grid_search<P: SearchProblem + ?Sized>(
    domain: &SearchDomain,
    problem: &P,
    resolution: usize,
) -> Result<SearchResult> {
    if resolution == 0 {
        return Err(Error::Domain("grid resolution must be positive".into()));
    }
    let lattices: Vec<Vec<Vec<f64>>> = domain
        .blocks()
        .iter()
        .map(|b| match *b {
            Block::Simplex(n) => simplex_lattice(n, resolution),
            Block::Box { lower, upper } => box_lattice(lower, upper, resolution),
        })
        .collect();
    let mut total: u64 = 1;
    for l in &lattices {
        total = total
            .checked_mul(l.len() as u64)
            .filter(|&t| t <= MAX_GRID_POINTS)
            .ok_or_else(|| Error::Domain("grid too large for the oracle".into()))?;
    }
    let dim = domain.dim();
    let decode = |mut index: u64, point: &mut Vec<f64>| {
        point.clear();
        point.resize(dim, 0.0);
        let mut end = dim;
        for l in lattices.iter().rev() {
            let k = (index % l.len() as u64) as usize;
            index /= l.len() as u64;
            let part = &l[k];
            point[end - part.len()..end].copy_from_slice(part);
            end -= part.len();
        }
    };

    let best = exec::map_best(
        total,
        |i| {
            let mut point = Vec::with_capacity(dim);
            decode(i, &mut point);
            if problem.violation(&point) > 0.0 {
                return None;
            }
            let v = problem.objective(&point);
            v.is_finite().then_some((v, i))
        },
        // lattice order is lexicographic order, so the index breaks ties
        |a, b| beats(a.0, &[a.1 as f64], b.0, &[b.1 as f64]),
    );
    let (value, index) = best.ok_or(Error::Infeasible)?;
    let mut argmin = Vec::with_capacity(dim);
    decode(index, &mut argmin);
    Ok(SearchResult {
        argmin,
        value,
        evaluations: total,
        converged: true,
    })
}
