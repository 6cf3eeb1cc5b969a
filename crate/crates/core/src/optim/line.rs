use crate::exec;

const GOLDEN_ITERATIONS: usize = 200;

/// Golden-section maximisation of a unimodal `f` on `[a, b]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tolerance: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_ITERATIONS {
        if hi - lo <= tolerance {
            break;
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Maximum of `f` over `grid`, refined by golden section on the interval
/// between the neighbours of the best grid point.
///
/// Ties go to the first grid point. The refined point replaces the grid point
/// only when it is strictly better, so the result never falls below the grid
/// maximum. Returns `None` for an empty grid or when `f` is nowhere finite.
pub fn maximize_1d<F>(f: F, grid: &[f64]) -> Option<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let values = exec::map_collect(grid.len(), |i| f(grid[i]));
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if v.is_finite() && best.is_none_or(|b| *v > values[b]) {
            best = Some(i);
        }
    }
    let i = best?;
    let (mut arg, mut val) = (grid[i], values[i]);
    let left = grid[i.saturating_sub(1)];
    let right = grid[(i + 1).min(grid.len() - 1)];
    if left != right {
        let span = (right - left).abs();
        let (a, v) = golden_section_max(&f, left, right, span * 1e-12);
        if v > val {
            arg = a;
            val = v;
        }
    }
    Some((arg, val))
}
