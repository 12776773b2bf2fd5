//! Nested inverse-power sums over ordered point sequences.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Points closer than this to zero are treated as poles.
pub const POLE_EPS: f64 = 1e-12;

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

fn two_sum(sum: &mut f64, comp: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: Complex64) {
        two_sum(&mut self.sum.re, &mut self.comp.re, v.re);
        two_sum(&mut self.sum.im, &mut self.comp.im, v.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// For points `p_1 ≺ p_2 ≺ ...` given in ascending order, returns for every
/// suffix `k_i, ..., k_r` of `k` the chain sum
/// `Σ_{q_i ≻ ... ≻ q_r} q_i^{-k_i} ... q_r^{-k_r}` over the points;
/// `out[r] = 1`.
pub fn suffix_nested_sums<I>(points: I, k: &[u32]) -> Result<Vec<Complex64>>
where
    I: IntoIterator<Item = Complex64>,
{
    let r = k.len();
    let mut partial = vec![CompensatedSum::new(); r];
    if r == 0 {
        return Ok(vec![Complex64::new(1.0, 0.0)]);
    }
    let one = Complex64::new(1.0, 0.0);
    for p in points {
        if p.norm() < POLE_EPS {
            return Err(Error::Pole(format!("summand point {p} is zero")));
        }
        let inv = p.inv();
        // ascending i reads partial[i + 1] before this point updates it
        for i in 0..r {
            let inner = if i + 1 == r {
                one
            } else {
                partial[i + 1].value()
            };
            if inner == Complex64::new(0.0, 0.0) {
                continue;
            }
            partial[i].add(inner * inv.powi(k[i] as i32));
        }
    }
    let mut out: Vec<Complex64> = partial.iter().map(CompensatedSum::value).collect();
    out.push(one);
    Ok(out)
}

/// The full chain sum for `k` (the `i = 0` entry of [`suffix_nested_sums`]).
pub fn nested_sum<I>(points: I, k: &[u32]) -> Result<Complex64>
where
    I: IntoIterator<Item = Complex64>,
{
    Ok(suffix_nested_sums(points, k)?[0])
}
