//! Richardson extrapolation in the cutoff `N`.

use num_complex::Complex64;

use super::Estimate;
use crate::error::{Error, Result};

/// Extrapolates values computed at cutoffs `n_top / 2^j` (listed coarse to
/// fine, so the last entry belongs to `n_top`) assuming an error expansion in
/// integer powers of `1/N`. The error estimate is the change made by the
/// final elimination step.
pub fn richardson(values: &[Complex64]) -> Estimate {
    match values.len() {
        0 => Estimate::zero(),
        1 => Estimate::new(values[0], f64::INFINITY),
        _ => {
            let mut row = values.to_vec();
            let mut prev_best = row[row.len() - 1];
            let mut best = prev_best;
            for m in 1..values.len() {
                let f = (1u64 << m) as f64;
                let next: Vec<Complex64> = row
                    .windows(2)
                    .map(|w| w[1] + (w[1] - w[0]) / (f - 1.0))
                    .collect();
                prev_best = best;
                best = next[next.len() - 1];
                row = next;
            }
            Estimate::new(best, (best - prev_best).norm())
        }
    }
}

/// Evaluates `f` at `n_top / 2^j` for `j = levels-1 .. 0` and extrapolates.
pub fn extrapolate_in_n<F>(n_top: usize, levels: usize, mut f: F) -> Result<Estimate>
where
    F: FnMut(usize) -> Result<Complex64>,
{
    if levels == 0 || n_top >> (levels - 1) < 2 {
        return Err(Error::InvalidArgument(format!(
            "cannot extrapolate from N = {n_top} with {levels} levels"
        )));
    }
    let mut values = Vec::with_capacity(levels);
    for j in (0..levels).rev() {
        values.push(f(n_top >> j)?);
    }
    Ok(richardson(&values))
}
