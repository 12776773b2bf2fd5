//! Multiple divisor sums `g`, `ĝ` and monotangent q-series.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qseries::QSeries;
use crate::error::{Error, Result};
use crate::mzv::MzvElem;
use crate::word::Index;

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `g(k) = Σ_{m_1 > ... > m_r > 0, n_i > 0} Π n_i^{k_i-1}/(k_i-1)! q^{Σ m_i n_i}`
/// up to `q^order`, exactly.
///
/// The sum is built over `m` in increasing order, keeping for every suffix of
/// `k` the partial series; each step costs `O(order² / m)` per entry, so the
/// whole expansion costs `O(r · order² · log order)` big-integer operations.
pub fn g_series(k: &Index, order: usize) -> QSeries<BigRational> {
    let ks = k.entries();
    let r = ks.len();
    let mut partial: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); order + 1]; r + 1];
    partial[r][0] = BigInt::one();
    let powers: Vec<Vec<BigInt>> = ks
        .iter()
        .map(|&ki| (0..=order).map(|d| BigInt::from(d).pow(ki - 1)).collect())
        .collect();
    for m in 1..=order {
        for i in 0..r {
            let (lo, hi) = partial.split_at_mut(i + 1);
            let dst = &mut lo[i];
            let src = &hi[0];
            let start = match src.iter().position(|c| !c.is_zero()) {
                Some(s) => s,
                None => continue,
            };
            let mut e = m;
            let mut d = 1;
            while e + start <= order {
                let a = &powers[i][d];
                for j in start..=order - e {
                    if !src[j].is_zero() {
                        dst[e + j] += a * &src[j];
                    }
                }
                e += m;
                d += 1;
            }
        }
    }
    let denom: BigInt = ks.iter().map(|&ki| factorial(ki - 1)).product();
    let coeffs = partial
        .swap_remove(0)
        .into_iter()
        .map(|c| BigRational::new(c, denom.clone()))
        .collect();
    QSeries::from_coeffs(coeffs, order)
}

/// `ĝ(k) = E^{|k|} g(k)` with `E = -2πi`.
pub fn ghat_series(k: &Index, order: usize) -> QSeries<MzvElem> {
    let e = MzvElem::e_power(k.weight());
    g_series(k, order).map(|c| e.scale(c))
}

/// `Ψ(k; mτ) = E^k/(k-1)! Σ_{d>0} d^{k-1} q^{md}` for `k ≥ 2`.
pub fn monotangent_series(k: u32, m: usize, order: usize) -> Result<QSeries<MzvElem>> {
    if k < 2 {
        return Err(Error::InvalidArgument(
            "the monotangent Ψ(1) has no Lipschitz expansion".into(),
        ));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let e = MzvElem::e_power(k);
    let denom = factorial(k - 1);
    let mut s = QSeries::zero(order);
    let mut d = 1usize;
    while m * d <= order {
        let c = BigRational::new(BigInt::from(d).pow(k - 1), denom.clone());
        s.set_coeff(m * d, e.scale(&c));
        d += 1;
    }
    Ok(s)
}

/// `Ψ(k; τ) = Σ_{n ∈ Z} (τ + n)^{-k}` for `k ≥ 2` from the Lipschitz formula.
pub fn monotangent_value(k: u32, tau: Complex64) -> Result<Complex64> {
    if k < 2 {
        return Err(Error::InvalidArgument(
            "the monotangent Ψ(1) has no Lipschitz expansion".into(),
        ));
    }
    let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau).exp();
    if q.norm() >= 1.0 {
        return Err(Error::InvalidArgument(
            "τ must lie in the upper half plane".into(),
        ));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qd = q;
    let mut d = 1f64;
    loop {
        let t = qd * d.powi(k as i32 - 1);
        acc += t;
        if t.norm() < 1e-20 * acc.norm().max(1e-300) || d > 1e7 {
            break;
        }
        qd *= q;
        d += 1.0;
    }
    let fact: f64 = (1..k).map(f64::from).product();
    let e = Complex64::new(0.0, -2.0 * std::f64::consts::PI);
    Ok(e.powu(k) * acc / fact)
}

/// Coefficients of `g(k)` in `f64`, with the same recursion as [`g_series`].
pub fn g_series_f64(k: &Index, order: usize) -> Vec<f64> {
    let ks = k.entries();
    let r = ks.len();
    let mut partial = vec![vec![0.0f64; order + 1]; r + 1];
    partial[r][0] = 1.0;
    let inv_fact: Vec<f64> = ks
        .iter()
        .map(|&ki| 1.0 / (1..ki).map(f64::from).product::<f64>())
        .collect();
    for m in 1..=order {
        for i in 0..r {
            let (lo, hi) = partial.split_at_mut(i + 1);
            let dst = &mut lo[i];
            let src = &hi[0];
            let Some(start) = src.iter().position(|c| *c != 0.0) else {
                continue;
            };
            let mut e = m;
            let mut d = 1usize;
            while e + start <= order {
                let a = (d as f64).powi(ks[i] as i32 - 1) * inv_fact[i];
                for j in start..=order - e {
                    dst[e + j] += a * src[j];
                }
                e += m;
                d += 1;
            }
        }
    }
    partial.swap_remove(0)
}

/// Evaluates a real polynomial `Σ c_n x^n` by Horner's rule.
pub fn eval_real(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::rat;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    fn divisor_sum(n: usize, p: u32) -> i64 {
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .map(|d| (d as i64).pow(p))
            .sum()
    }

    #[test]
    fn single_letter_series_are_divisor_sums() {
        let g2 = g_series(&idx("2"), 12);
        assert_eq!(*g2.coeff(1), rat(1));
        assert_eq!(*g2.coeff(2), rat(3));
        assert_eq!(*g2.coeff(4), rat(7));
        let g1 = g_series(&idx("z1"), 12);
        assert_eq!(*g1.coeff(4), rat(3));
        let g3 = g_series(&idx("3"), 12);
        for n in 1..=12 {
            assert_eq!(
                *g3.coeff(n),
                BigRational::new(divisor_sum(n, 2).into(), 2.into())
            );
        }
        assert_eq!(*g3.coeff(0), rat(0));
    }

    /// Direct enumeration of `m_1 > ... > m_r > 0`, `n_i > 0`.
    fn brute(k: &[u32], order: usize) -> Vec<BigRational> {
        fn rec(
            k: &[u32],
            below: usize,
            left: usize,
            weight: BigRational,
            out: &mut Vec<BigRational>,
            order: usize,
        ) {
            match k.split_first() {
                None => {
                    let e = order - left;
                    out[e] += weight;
                }
                Some((&ki, rest)) => {
                    let f: i64 = (1..ki as i64).product();
                    for m in 1..below {
                        let mut n = 1;
                        while m * n <= left {
                            let w =
                                &weight * BigRational::new(BigInt::from(n).pow(ki - 1), f.into());
                            rec(rest, m, left - m * n, w, out, order);
                            n += 1;
                        }
                    }
                }
            }
        }
        let mut out = vec![BigRational::zero(); order + 1];
        rec(k, order + 1, order, BigRational::one(), &mut out, order);
        out
    }

    #[test]
    fn nested_series_match_enumeration() {
        for k in ["2,1", "3,2", "1,1,2", "2,2,2"] {
            let k = idx(k);
            let s = g_series(&k, 14);
            assert_eq!(s.coeffs(), &brute(k.entries(), 14)[..], "{k}");
        }
        let g21 = g_series(&idx("2,1"), 5);
        assert_eq!(*g21.coeff(2), rat(0));
        assert_eq!(*g21.coeff(3), rat(1));
    }

    #[test]
    fn float_series_match_exact() {
        let k = idx("3,2");
        let exact = g_series(&k, 40);
        let approx = g_series_f64(&k, 40);
        for (a, b) in exact.coeffs().iter().zip(&approx) {
            let a = num_traits::ToPrimitive::to_f64(a).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn monotangent_series_shape() {
        let s = monotangent_series(2, 3, 10).unwrap();
        for n in 0..=10 {
            assert_eq!(s.coeff(n).is_zero(), n % 3 != 0 || n == 0, "{n}");
        }
        assert_eq!(s.coeff(6).to_string(), "2*E^2");
        assert!(monotangent_series(1, 1, 10).is_err());
    }

    #[test]
    fn sum_of_monotangents_is_ghat() {
        let order = 30;
        for k in 2..5 {
            let mut acc = QSeries::zero(order);
            for m in 1..=order {
                acc = acc.add(&monotangent_series(k, m, order).unwrap()).unwrap();
            }
            assert_eq!(acc, ghat_series(&Index::single(k), order));
        }
    }

    #[test]
    fn lipschitz_value_matches_lattice_sum() {
        let tau = Complex64::new(0.3, 0.7);
        let direct: Complex64 = (-200_000i64..=200_000)
            .map(|n| (tau + n as f64).powi(-3))
            .sum();
        assert!((monotangent_value(3, tau).unwrap() - direct).norm() < 1e-9);
    }
}
