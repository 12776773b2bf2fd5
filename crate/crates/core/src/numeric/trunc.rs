//! Truncated objects: finite sums over cut-off ranges.

use num_complex::Complex64;

use super::extrapolate::extrapolate_in_n;
use super::nested::nested_sum;
use super::Estimate;
use crate::error::{Error, Result};
use crate::hopf::{convolve, IteratedConvolution, LinearMap};
use crate::word::{Index, Word};

fn cplx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `ζ_N(k; x) = Σ_{N > n_1 > ... > n_r > 0} Π (x + n_i)^{-k_i}`.
pub fn hurwitz_trunc(k: &Index, x: Complex64, n: usize) -> Result<Complex64> {
    nested_sum((1..n).map(|j| x + j as f64), k.entries())
}

/// `ζ^-_N(k; x) = Σ_{0 > n_1 > ... > n_r > -N} Π (x + n_i)^{-k_i}`.
pub fn zeta_minus_trunc(k: &Index, x: Complex64, n: usize) -> Result<Complex64> {
    let n = n as i64;
    nested_sum((1 - n..0).map(|j| x + j as f64), k.entries())
}

/// `C(k; x)`: `1` on the empty word, `x^{-k}` on a single letter, `0` otherwise.
pub fn c_map(k: &Index, x: Complex64) -> Result<Complex64> {
    match k.entries() {
        [] => Ok(cplx(1.0)),
        [k1] => {
            if x.norm() < super::nested::POLE_EPS {
                Err(Error::Pole("C(k; x) at x = 0".into()))
            } else {
                Ok(x.powi(-(*k1 as i32)))
            }
        }
        _ => Ok(cplx(0.0)),
    }
}

/// `Ψ_N(k; x) = Σ_{N > n_1 > ... > n_r > -N} Π (x + n_i)^{-k_i}` by direct summation.
pub fn multitangent_trunc(k: &Index, x: Complex64, n: usize) -> Result<Complex64> {
    let n = n as i64;
    nested_sum((1 - n..n).map(|j| x + j as f64), k.entries())
}

/// `Ψ_N(k; x)` as the convolution `ζ_N ⋆ C ⋆ ζ^-_N`.
pub fn multitangent_conv(k: &Index, x: Complex64, n: usize) -> Result<Complex64> {
    let plus = move |w: &Index| hurwitz_trunc(w, x, n);
    let c = move |w: &Index| c_map(w, x);
    let minus = move |w: &Index| zeta_minus_trunc(w, x, n);
    convolve(convolve(plus, c), minus).eval(k)
}

/// The lattice points `mτ + n` with `|m| < M`, `|n| < N` that are `≻ 0`,
/// in increasing order for `≻`.
pub fn positive_lattice(tau: Complex64, m: usize, n: usize) -> impl Iterator<Item = Complex64> {
    let (m, n) = (m as i64, n as i64);
    let first = (1..n).map(move |j| cplx(j as f64));
    let rest = (1..m).flat_map(move |i| (1 - n..n).map(move |j| tau * i as f64 + j as f64));
    first.chain(rest)
}

/// `G_{M,N}(k; τ)`, the nested lattice sum over `λ_1 ≻ ... ≻ λ_r ≻ 0`.
pub fn mes_trunc(k: &Index, tau: Complex64, m: usize, n: usize) -> Result<Complex64> {
    nested_sum(positive_lattice(tau, m, n), k.entries())
}

/// `ĝ_{M,N} = Ψ_N(-; (M-1)τ) ⋆ ... ⋆ Ψ_N(-; τ)`.
pub fn ghat_trunc(k: &Index, tau: Complex64, m: usize, n: usize) -> Result<Complex64> {
    let factors: Vec<Box<dyn LinearMap<Complex64> + Send + Sync>> = (1..m)
        .rev()
        .map(|i| {
            let x = tau * i as f64;
            Box::new(move |w: &Index| multitangent_trunc(w, x, n))
                as Box<dyn LinearMap<Complex64> + Send + Sync>
        })
        .collect();
    IteratedConvolution::new(factors).eval(k)
}

/// `ĝ_{M,N}` as the sum over compositions of `k` into consecutive blocks
/// `w_1 ... w_j` and `M > m_1 > ... > m_j > 0` of `Π Ψ_N(w_i; m_i τ)`.
pub fn ghat_trunc_compositions(k: &Index, tau: Complex64, m: usize, n: usize) -> Result<Complex64> {
    fn rec(k: &Index, start: usize, below: usize, tau: Complex64, n: usize) -> Result<Complex64> {
        if start == k.len() {
            return Ok(cplx(1.0));
        }
        let mut acc = cplx(0.0);
        for end in start + 1..=k.len() {
            let block = k.sub_word(start, end);
            for mi in 1..below {
                let inner = rec(k, end, mi, tau, n)?;
                if inner != cplx(0.0) {
                    acc += multitangent_trunc(&block, tau * mi as f64, n)? * inner;
                }
            }
        }
        Ok(acc)
    }
    rec(k, 0, m, tau, n)
}

/// `G_{M,N}` as the convolution `ĝ_{M,N} ⋆ ζ_N`.
pub fn mes_conv(k: &Index, tau: Complex64, m: usize, n: usize) -> Result<Complex64> {
    let g = move |w: &Index| ghat_trunc(w, tau, m, n);
    let z = move |w: &Index| hurwitz_trunc(w, cplx(0.0), n);
    convolve(g, z).eval(k)
}

/// Levels used when extrapolating truncated sums in `N`.
pub const EXTRAPOLATION_LEVELS: usize = 3;

/// `lim_N Ψ_N(k; x)` by Richardson extrapolation over `N = n_top / 2^j`.
pub fn multitangent_trunc_extrapolated(k: &Index, x: Complex64, n_top: usize) -> Result<Estimate> {
    extrapolate_in_n(n_top, EXTRAPOLATION_LEVELS, |n| multitangent_trunc(k, x, n))
}

/// `lim_N G_{M,N}(k; τ)` at fixed `M` by Richardson extrapolation in `N`.
pub fn mes_trunc_extrapolated(
    k: &Index,
    tau: Complex64,
    m: usize,
    n_top: usize,
) -> Result<Estimate> {
    extrapolate_in_n(n_top, EXTRAPOLATION_LEVELS, |n| mes_trunc(k, tau, m, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::Mode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0)
    }

    fn random_index(rng: &mut ChaCha8Rng, max_weight: u32) -> Index {
        let weight = rng.gen_range(1..=max_weight);
        let mut entries = Vec::new();
        let mut left = weight;
        while left > 0 {
            let k = rng.gen_range(1..=left);
            entries.push(k);
            left -= k;
        }
        Index::new(entries).unwrap()
    }

    #[test]
    fn small_values() {
        let i = Complex64::new(0.0, 1.0);
        let v = zeta_minus_trunc(&idx("2"), i, 2).unwrap();
        assert!((v - (i - 1.0).powi(-2)).norm() < 1e-15);
        assert_eq!(c_map(&Index::empty(), i).unwrap(), cplx(1.0));
        assert_eq!(c_map(&idx("3,2"), i).unwrap(), cplx(0.0));
    }

    #[test]
    fn monotangent_decomposition() {
        let x = Complex64::new(0.2, 0.7);
        for k in 1..5u32 {
            let w = Index::single(k);
            let direct = multitangent_trunc(&w, x, 12).unwrap();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let parts = hurwitz_trunc(&w, x, 12).unwrap()
                + x.powi(-(k as i32))
                + hurwitz_trunc(&w, -x, 12).unwrap() * sign;
            assert!(close(direct, parts, 1e-14));
        }
    }

    #[test]
    fn reflection_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let w = random_index(&mut rng, 6);
            let x = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.1..2.0));
            let lhs = zeta_minus_trunc(&w, x, 9).unwrap();
            let sign = if w.weight().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            let rhs = hurwitz_trunc(&w.reversed(), -x, 9).unwrap() * sign;
            assert!(close(lhs, rhs, 1e-14), "{w}");
        }
    }

    #[test]
    fn truncated_factorizations() {
        let tau = Complex64::new(0.2, 0.8);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..15 {
            let w = random_index(&mut rng, 6);
            let x = tau * 1.5;
            let n = rng.gen_range(1..=8);
            let m = rng.gen_range(1..=8);
            assert!(close(
                multitangent_trunc(&w, x, n).unwrap(),
                multitangent_conv(&w, x, n).unwrap(),
                1e-12
            ));
            assert!(close(
                mes_trunc(&w, tau, m, n).unwrap(),
                mes_conv(&w, tau, m, n).unwrap(),
                1e-12
            ));
        }
    }

    #[test]
    fn ghat_paths_agree() {
        let tau = Complex64::new(0.2, 0.8);
        for w in ["3,2", "1,2,1", "2,1,1,2"] {
            let w = idx(w);
            let a = ghat_trunc(&w, tau, 6, 5).unwrap();
            let b = ghat_trunc_compositions(&w, tau, 6, 5).unwrap();
            assert!(close(a, b, 1e-13), "{w}");
        }
        assert_eq!(ghat_trunc(&Index::empty(), tau, 6, 5).unwrap(), cplx(1.0));
    }

    #[test]
    fn mes_with_single_row_is_truncated_mzv() {
        let tau = Complex64::new(0.0, 1.0);
        let w = idx("2,1,3");
        let a = mes_trunc(&w, tau, 1, 9).unwrap();
        let b = hurwitz_trunc(&w, cplx(0.0), 9).unwrap();
        assert!(close(a, b, 1e-15));
    }

    #[test]
    fn truncated_maps_are_stuffle_homomorphisms() {
        let tau = Complex64::new(0.2, 0.8);
        let x = Complex64::new(0.3, 0.4);
        for (u, v) in [("2", "3"), ("1,2", "1"), ("2,1", "1,1")] {
            let (u, v) = (idx(u), idx(v));
            let prod = Mode::Stuffle.product(&u, &v);
            let z = |w: &Index| hurwitz_trunc(w, x, 7);
            assert!(close(
                z.eval_poly(&prod).unwrap(),
                z(&u).unwrap() * z(&v).unwrap(),
                1e-12
            ));
            let g = |w: &Index| mes_trunc(w, tau, 4, 5);
            assert!(close(
                g.eval_poly(&prod).unwrap(),
                g(&u).unwrap() * g(&v).unwrap(),
                1e-12
            ));
            let p = |w: &Index| multitangent_trunc(w, x, 6);
            assert!(close(
                p.eval_poly(&prod).unwrap(),
                p(&u).unwrap() * p(&v).unwrap(),
                1e-12
            ));
        }
    }
}
