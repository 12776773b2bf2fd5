//! Reduction of multitangent functions to monotangent functions.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::gseries::monotangent_value;
use crate::error::{Error, Result};
use crate::mzv::{MzvElem, NumericConfig};
use crate::numeric::Estimate;
use crate::regularization::{binomial, bounded_compositions};
use crate::word::{Index, Subspace, Word};

/// `Ψ(k; τ) = Σ_l c_l Ψ(l; τ)` with the `Ψ(1)` coefficient kept separately.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reduction {
    pub index: Index,
    /// Coefficients `c_l` for `l ≥ 2`.
    pub terms: BTreeMap<u32, MzvElem>,
    /// Coefficient of `Ψ(1)`, which vanishes as a real number.
    pub psi1: MzvElem,
}

impl Reduction {
    /// `Σ_l c_l Ψ(l; τ)`.
    pub fn eval(&self, tau: Complex64, cfg: &NumericConfig) -> Result<Estimate> {
        let mut acc = Estimate::zero();
        for (&l, c) in &self.terms {
            let psi = monotangent_value(l, tau)?;
            acc = acc.add(&c.eval(cfg)?.scale(psi));
        }
        Ok(acc)
    }
}

/// Applies the reduction theorem to `k ∈ H^2` without checking the `Ψ(1)` term.
pub fn multitangent_reduce_raw(k: &Index) -> Result<Reduction> {
    if k.subspace() != Subspace::H2 || k.is_empty() {
        return Err(Error::Subspace {
            what: format!("multitangent reduction of {k}"),
            required: Subspace::H2,
            found: k.subspace(),
        });
    }
    let ks = k.entries();
    let r = ks.len();
    let total = k.weight();
    let mut by_l: BTreeMap<u32, MzvElem> = BTreeMap::new();
    for j in 0..r {
        let lower: Vec<u32> = ks
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &k)| k)
            .collect();
        let min_rest: u32 = lower.iter().sum();
        for rest in min_rest..total {
            let lj = total - rest;
            for ls in bounded_compositions(rest, &lower) {
                let (left, right) = ls.split_at(j);
                let mut coeff = BigRational::one();
                for (l, kk) in ls.iter().zip(&lower) {
                    coeff *= binomial(*l as i64 - 1, *kk as i64 - 1);
                }
                let sign = left.iter().sum::<u32>() + ks[j] + total;
                if sign % 2 == 1 {
                    coeff = -coeff;
                }
                let a = MzvElem::zeta(&Index::new(left.to_vec())?)?;
                let mut rev = right.to_vec();
                rev.reverse();
                let b = MzvElem::zeta(&Index::new(rev)?)?;
                by_l.entry(lj)
                    .or_insert_with(MzvElem::zero)
                    .add_scaled(&(&a * &b), &coeff);
            }
        }
    }
    let psi1 = by_l.remove(&1).unwrap_or_else(MzvElem::zero);
    by_l.retain(|_, c| !c.is_zero());
    Ok(Reduction {
        index: k.clone(),
        terms: by_l,
        psi1,
    })
}

/// [`multitangent_reduce_raw`], failing unless the `Ψ(1)` coefficient
/// vanishes numerically within `cfg.tolerance`.
pub fn multitangent_reduce(k: &Index, cfg: &NumericConfig) -> Result<Reduction> {
    let red = multitangent_reduce_raw(k)?;
    let v = red.psi1.eval(cfg)?;
    if v.value.norm() > cfg.tolerance {
        return Err(Error::Invariant(format!(
            "Ψ(1) coefficient of the reduction of {k} is {} (|.| = {:e})",
            red.psi1,
            v.value.norm()
        )));
    }
    Ok(red)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::extrapolate::extrapolate_in_n;
    use crate::numeric::trunc::multitangent_trunc;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn example_depth_two() {
        let cfg = NumericConfig::default();
        let red = multitangent_reduce(&idx("3,2"), &cfg).unwrap();
        assert_eq!(red.terms.len(), 2);
        assert_eq!(red.terms[&2].to_string(), "3*ζ(3)");
        assert_eq!(red.terms[&3].to_string(), "ζ(2)");
        assert!(red.psi1.is_zero());
    }

    #[test]
    fn depth_one_is_identity() {
        let red = multitangent_reduce_raw(&idx("4")).unwrap();
        assert_eq!(red.terms.len(), 1);
        assert_eq!(red.terms[&4], MzvElem::one());
    }

    #[test]
    fn rejects_words_outside_h2() {
        assert!(multitangent_reduce_raw(&idx("2,1")).is_err());
        assert!(multitangent_reduce_raw(&Index::empty()).is_err());
    }

    #[test]
    fn matches_lattice_sums() {
        let cfg = NumericConfig::default();
        let tau = Complex64::new(0.1, 0.9);
        for k in ["2,2", "2,3", "2,2,2"] {
            let k = idx(k);
            let red = multitangent_reduce(&k, &cfg).unwrap();
            let sym = red.eval(tau, &cfg).unwrap().value;
            let num = extrapolate_in_n(2048, 4, |n| multitangent_trunc(&k, tau, n)).unwrap();
            assert!(
                (sym - num.value).norm() < 1e-8,
                "{k}: {sym} vs {}",
                num.value
            );
        }
    }
}
