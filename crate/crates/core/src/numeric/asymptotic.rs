//! Multiple Hurwitz zeta values via truncated sums plus Euler–Maclaurin tails.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::nested::suffix_nested_sums;
use super::Estimate;
use crate::error::{Error, Result};

/// Highest power of `1/a` kept in tail expansions.
pub const TAIL_ORDER: usize = 40;

const BERNOULLI_MAX: usize = 64;

/// Bernoulli numbers `B_0 .. B_64` with `B_1 = -1/2`.
pub fn bernoulli_rational() -> &'static [BigRational] {
    static CELL: OnceLock<Vec<BigRational>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut b: Vec<BigRational> = Vec::with_capacity(BERNOULLI_MAX + 1);
        b.push(BigRational::one());
        for m in 1..=BERNOULLI_MAX {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

fn bernoulli_f64() -> &'static [f64] {
    static CELL: OnceLock<Vec<f64>> = OnceLock::new();
    CELL.get_or_init(|| {
        bernoulli_rational()
            .iter()
            .map(|b| b.to_f64().unwrap_or(f64::NAN))
            .collect()
    })
}

/// Adds `weight * Z(s; a)` to `out`, where `Z(s; a) = Σ_{n≥1} (a+n)^{-s}`
/// and `out[p]` is the coefficient of `a^{-p}`.
fn add_hurwitz_tail(s: usize, weight: f64, out: &mut [f64]) {
    debug_assert!(s >= 2);
    let len = out.len();
    if s - 1 < len {
        out[s - 1] += weight / (s - 1) as f64;
    }
    if s < len {
        out[s] -= weight / 2.0;
    }
    let b = bernoulli_f64();
    // ratio = (s)_{2j-1} / (2j)!
    let mut ratio = s as f64 / 2.0;
    let mut j = 1;
    loop {
        let p = s + 2 * j - 1;
        if p >= len || 2 * j > BERNOULLI_MAX {
            break;
        }
        out[p] += weight * b[2 * j] * ratio;
        let sj = (s + 2 * j - 1) as f64;
        ratio *= sj * (sj + 1.0) / (((2 * j + 1) * (2 * j + 2)) as f64);
        j += 1;
    }
}

/// Expansion coefficients of `Σ_{m_1 > ... > m_j ≥ 1} Π (a+m_i)^{-k_i}`
/// in powers of `1/a`, for every prefix `k_1..k_j`, `j = 1..r`.
fn prefix_tail_expansions(k: &[u32]) -> Vec<Vec<f64>> {
    let len = TAIL_ORDER + 1;
    let mut f = vec![0.0; len];
    f[0] = 1.0;
    let mut out = Vec::with_capacity(k.len());
    for &ki in k {
        let ki = ki as usize;
        let mut g = vec![0.0; len];
        for (p, &c) in f.iter().enumerate().take(len.saturating_sub(ki)) {
            if c != 0.0 {
                add_hurwitz_tail(p + ki, c, &mut g);
            }
        }
        out.push(g.clone());
        f = g;
    }
    out
}

fn cached_tails(k: &[u32]) -> std::sync::Arc<Vec<Vec<f64>>> {
    type Cache = RwLock<HashMap<Vec<u32>, std::sync::Arc<Vec<Vec<f64>>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().ok().and_then(|c| c.get(k).cloned()) {
        return v;
    }
    let v = std::sync::Arc::new(prefix_tail_expansions(k));
    if let Ok(mut c) = cache.write() {
        c.insert(k.to_vec(), v.clone());
    }
    v
}

/// Evaluates an expansion `Σ c_p a^{-p}`; the error is the size of the last
/// two retained terms plus rounding.
fn eval_expansion(coeffs: &[f64], a: Complex64) -> Estimate {
    let inv = a.inv();
    let mut value = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut abs_sum = 0.0;
    let mut last = [0.0f64; 2];
    for &c in coeffs {
        let term = pow * c;
        value += term;
        abs_sum += term.norm();
        last = [last[1], term.norm()];
        pow *= inv;
    }
    Estimate::new(value, last[0] + last[1] + abs_sum * 4.0 * f64::EPSILON)
}

/// Default truncation point used before switching to the tail expansion.
pub fn default_cutoff(x: Complex64) -> usize {
    64 + 2 * x.norm().ceil() as usize
}

/// `ζ(k; x) = Σ_{n_1 > ... > n_r > 0} Π (n_i + x)^{-k_i}` for admissible `k`.
pub fn multiple_hurwitz(k: &[u32], x: Complex64) -> Result<Estimate> {
    multiple_hurwitz_with_cutoff(k, x, default_cutoff(x), true)
}

/// As [`multiple_hurwitz`] with an explicit cutoff; without the tail
/// correction the magnitude of the omitted tail is reported as the error.
pub fn multiple_hurwitz_with_cutoff(
    k: &[u32],
    x: Complex64,
    cutoff: usize,
    tail_correction: bool,
) -> Result<Estimate> {
    if k.is_empty() {
        return Ok(Estimate::exact(Complex64::new(1.0, 0.0)));
    }
    if k[0] < 2 || k.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "multiple Hurwitz value needs an admissible index, got {k:?}"
        )));
    }
    let cutoff = cutoff.max(2);
    let y = x + (cutoff - 1) as f64;
    if y.re <= x.norm() {
        return Err(Error::InvalidArgument(format!(
            "cutoff {cutoff} too small for shift {x}"
        )));
    }
    let points = (1..cutoff).map(|n| x + n as f64);
    let partial = suffix_nested_sums(points, k)?;
    let tails = cached_tails(k);
    let mut value = partial[0];
    let mut error = partial[0].norm() * 1e-15;
    for j in 1..=k.len() {
        let t = eval_expansion(&tails[j - 1], y);
        let w = partial[j];
        if tail_correction {
            value += t.value * w;
            error += t.error * w.norm();
        } else {
            error += (t.value * w).norm();
        }
    }
    Ok(Estimate::new(value, error))
}

/// `Φ(z) = ψ(1+z)` for large `|z|` away from the negative axis.
fn digamma_shifted_asymptotic(z: Complex64) -> Complex64 {
    let b = bernoulli_f64();
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut value = z.ln() + inv * 0.5;
    let mut pow = inv2;
    for j in 1..=15 {
        value -= pow * (b[2 * j] / (2 * j) as f64);
        pow *= inv2;
    }
    value
}

/// `T(x) = Σ_{n≥1} (1/(n+x) - 1/n)`, the regularized single value `ζ*(1; x)`.
pub fn harmonic_reg(x: Complex64) -> Result<Estimate> {
    let cutoff = default_cutoff(x);
    let mut acc = super::nested::CompensatedSum::new();
    for n in 1..cutoff {
        let p = x + n as f64;
        if p.norm() < super::nested::POLE_EPS {
            return Err(Error::Pole(format!("T(x) has a pole at x = {x}")));
        }
        acc.add(-x / (p * n as f64));
    }
    let tail = digamma_shifted_asymptotic(Complex64::new((cutoff - 1) as f64, 0.0))
        - digamma_shifted_asymptotic(x + (cutoff - 1) as f64);
    let v = acc.value() + tail;
    Ok(Estimate::new(v, 1e-15 * (1.0 + v.norm())))
}
