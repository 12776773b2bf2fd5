//! Regularization: `H^1` as a polynomial ring over `H^0` in `z_1`, lifted
//! homomorphisms, regularized multiple zeta values and the map `ρ`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hopf::{LinearMap, Mode};
use crate::mzv::MzvElem;
use crate::ring::Ring;
use crate::word::{FreePoly, Index, Subspace, Word};

/// Coefficient types of [`TPoly`]: additive groups with a rational action.
pub trait Module: Clone + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, r: &BigRational) -> Self;
}

impl<R: Ring> Module for R {
    fn zero() -> Self {
        R::zero()
    }

    fn is_zero(&self) -> bool {
        Ring::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        Ring::add(self, other)
    }

    fn scale(&self, r: &BigRational) -> Self {
        Ring::scale(self, r)
    }
}

impl Module for FreePoly<Index> {
    fn zero() -> Self {
        FreePoly::zero()
    }

    fn is_zero(&self) -> bool {
        FreePoly::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn scale(&self, r: &BigRational) -> Self {
        FreePoly::scale(self, r)
    }
}

/// Polynomial `c_0 + c_1 T + ... + c_m T^m`; the leading coefficient is
/// nonzero unless the polynomial is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Module> TPoly<C> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c T^degree`.
    pub fn monomial(c: C, degree: usize) -> Self {
        let mut coeffs = vec![C::zero(); degree];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(C::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> C {
        self.coeffs.get(j).cloned().unwrap_or_else(C::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|j| self.coeff(j).add(&other.coeff(j))).collect())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.scale(r)).collect())
    }

    /// Multiplication by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Product with the coefficient multiplication `mul`.
    pub fn mul_with(&self, other: &Self, mul: impl Fn(&C, &C) -> C) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&mul(a, b));
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn map<D: Module>(&self, f: impl Fn(&C) -> D) -> TPoly<D> {
        TPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<D: Module>(&self, f: impl Fn(&C) -> Result<D>) -> Result<TPoly<D>> {
        Ok(TPoly::from_coeffs(
            self.coeffs.iter().map(f).collect::<Result<_>>()?,
        ))
    }
}

impl<R: Ring> TPoly<R> {
    /// Substitutes `T = t`.
    pub fn eval_at(&self, t: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }
}

impl<R: Ring> Ring for TPoly<R> {
    fn zero() -> Self {
        TPoly::zero()
    }

    fn one() -> Self {
        TPoly::constant(R::one())
    }

    fn is_zero(&self) -> bool {
        TPoly::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        TPoly::add(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        self.mul_with(other, |a, b| a.mul(b))
    }

    fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    fn from_rational(r: &BigRational) -> Self {
        TPoly::constant(R::from_rational(r))
    }

    fn scale(&self, r: &BigRational) -> Self {
        TPoly::scale(self, r)
    }
}

impl<C: Module + fmt::Display> fmt::Display for TPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let compound = s.contains(" + ") || s.contains(" - ");
            let body = match j {
                0 => s.clone(),
                _ => {
                    let t = if j == 1 {
                        "T".to_string()
                    } else {
                        format!("T^{j}")
                    };
                    if s == "1" {
                        t
                    } else if s == "-1" {
                        format!("-{t}")
                    } else if compound {
                        format!("({s})*{t}")
                    } else {
                        format!("{s}*{t}")
                    }
                }
            };
            if first {
                f.write_str(&body)?;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl<C: Module + Serialize> Serialize for TPoly<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a, C> {
            degree: usize,
            coeff: &'a C,
        }
        let v: Vec<_> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(degree, coeff)| Term { degree, coeff })
            .collect();
        v.serialize(s)
    }
}

type RegCache = RwLock<HashMap<(Mode, Index), Arc<TPoly<FreePoly<Index>>>>>;

fn reg_cache() -> &'static RegCache {
    static CACHE: OnceLock<RegCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Writes `w = Σ_j c_j • z_1^{•j}` with `c_j ∈ H^0`, returned as `Σ c_j T^j`.
pub fn reg_decompose(w: &Index, mode: Mode) -> Result<TPoly<FreePoly<Index>>> {
    Ok(reg_word(w, mode).as_ref().clone())
}

fn reg_word(w: &Index, mode: Mode) -> Arc<TPoly<FreePoly<Index>>> {
    let key = (mode, w.clone());
    if let Some(p) = reg_cache().read().ok().and_then(|c| c.get(&key).cloned()) {
        return p;
    }
    let a = w.leading_ones();
    let out = if a == 0 {
        TPoly::constant(FreePoly::from_word(w.clone()))
    } else {
        // z_1 • v = a z_1^a u + R, with R having fewer leading z_1
        let v = w.sub_word(1, w.len());
        let z1 = Index::single(1);
        let mut rest = mode.product(&z1, &v);
        let a_rat = BigRational::from_integer(BigInt::from(a));
        debug_assert_eq!(rest.coeff(w), a_rat);
        rest.add_term(w.clone(), -a_rat.clone());
        let mut acc = reg_word(&v, mode).shift(1);
        for (u, c) in rest.terms() {
            acc = acc.add(&reg_word(u, mode).scale(&-c));
        }
        acc.scale(&(BigRational::one() / a_rat))
    };
    let out = Arc::new(out);
    if let Ok(mut c) = reg_cache().write() {
        c.insert(key, out.clone());
    }
    out
}

/// [`reg_decompose`] extended linearly; inputs must lie in `H^1`.
pub fn reg_decompose_poly(p: &FreePoly<Index>, mode: Mode) -> Result<TPoly<FreePoly<Index>>> {
    let mut acc = TPoly::zero();
    for (w, c) in p.terms() {
        acc = acc.add(&reg_word(w, mode).scale(c));
    }
    Ok(acc)
}

/// [`reg_decompose_poly`] for a word given in `x`, `y` letters; the word
/// must end in `y`.
pub fn reg_decompose_xy(
    p: &FreePoly<crate::word::XyWord>,
    mode: Mode,
) -> Result<TPoly<FreePoly<Index>>> {
    let sub = p.subspace_with(crate::word::XyWord::subspace);
    if !sub.is_within(Subspace::H1) {
        return Err(Error::Subspace {
            what: p.to_string(),
            required: Subspace::H1,
            found: sub,
        });
    }
    reg_decompose_poly(&p.decode()?, mode)
}

/// `Σ_j c_j • z_1^{•j}`, the inverse of [`reg_decompose`].
pub fn reconstruct(p: &TPoly<FreePoly<Index>>, mode: Mode) -> FreePoly<Index> {
    let z1 = FreePoly::from_word(Index::single(1));
    let mut power = FreePoly::one();
    let mut out = FreePoly::zero();
    for c in p.coeffs() {
        out = &out + &mode.product_poly(c, &power);
        power = mode.product_poly(&power, &z1);
    }
    out
}

/// `f^•(w) = Σ_j f(c_j(w)) T^j` for a map `f` defined on `H^0`.
pub fn lift_map<R: Ring, F: LinearMap<R>>(f: &F, w: &Index, mode: Mode) -> Result<TPoly<R>> {
    reg_word(w, mode).try_map(|c| f.eval_poly(c))
}

/// The lift of a map on `H^0` to a map into `R[T]`.
#[derive(Clone, Copy, Debug)]
pub struct Lifted<F> {
    pub map: F,
    pub mode: Mode,
}

impl<R: Ring, F: LinearMap<R>> LinearMap<TPoly<R>> for Lifted<F> {
    fn eval(&self, w: &Index) -> Result<TPoly<R>> {
        lift_map(&self.map, w, self.mode)
    }
}

fn zeta_symbol(w: &Index) -> Result<MzvElem> {
    MzvElem::zeta(w)
}

/// `ζ^*(w)` or `ζ^⧢(w)` as a polynomial in `T` over the MZV ring.
pub fn zeta_reg(w: &Index, mode: Mode) -> Result<TPoly<MzvElem>> {
    lift_map(&zeta_symbol, w, mode)
}

/// [`zeta_reg`] extended linearly.
pub fn zeta_reg_poly(p: &FreePoly<Index>, mode: Mode) -> Result<TPoly<MzvElem>> {
    Lifted {
        map: zeta_symbol,
        mode,
    }
    .eval_poly(p)
}

/// `ρ` on `T`-polynomials up to a fixed degree, stored as the images of `T^m`.
#[derive(Clone, Debug)]
pub struct RhoMap {
    images: Vec<TPoly<MzvElem>>,
}

pub const DEFAULT_RHO_DEGREE: usize = 8;

impl RhoMap {
    pub fn new(max_degree: usize) -> Self {
        // A(u) = exp(Σ_{n≥2} (-1)^n ζ(n) u^n / n) = Σ A_j u^j
        let mut a: Vec<MzvElem> = vec![MzvElem::one()];
        for j in 1..=max_degree {
            let mut acc = MzvElem::zero();
            for n in 2..=j {
                let z = MzvElem::zeta(&Index::single(n as u32)).expect("ζ(n), n ≥ 2");
                let sign = if n % 2 == 0 { 1 } else { -1 };
                acc.add_scaled(&(&z * &a[j - n]), &BigRational::from_integer(sign.into()));
            }
            a.push(acc.scale(&BigRational::new(1.into(), BigInt::from(j))));
        }
        // ρ(T^m) = Σ_j m!/(m-j)! A_j T^{m-j}
        let images = (0..=max_degree)
            .map(|m| {
                let mut coeffs = vec![MzvElem::zero(); m + 1];
                let mut falling = BigInt::from(1);
                for (j, aj) in a.iter().enumerate().take(m + 1) {
                    coeffs[m - j] = aj.scale(&BigRational::from_integer(falling.clone()));
                    falling *= BigInt::from(m - j);
                }
                TPoly::from_coeffs(coeffs)
            })
            .collect();
        Self { images }
    }

    pub fn max_degree(&self) -> usize {
        self.images.len() - 1
    }

    /// `ρ(T^m)`.
    pub fn image(&self, m: usize) -> Option<&TPoly<MzvElem>> {
        self.images.get(m)
    }

    pub fn apply(&self, p: &TPoly<MzvElem>) -> Result<TPoly<MzvElem>> {
        if let Some(d) = p.degree() {
            if d > self.max_degree() {
                return Err(Error::InvalidArgument(format!(
                    "degree {d} exceeds the ρ table size {}",
                    self.max_degree()
                )));
            }
        }
        let mut acc = TPoly::zero();
        for (m, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = self.images[m].map(|a| a * c);
            acc = acc.add(&img);
        }
        Ok(acc)
    }
}

impl Default for RhoMap {
    fn default() -> Self {
        Self::new(DEFAULT_RHO_DEGREE)
    }
}

/// `ρ(p)` with a table large enough for `p`.
pub fn rho_apply(p: &TPoly<MzvElem>) -> TPoly<MzvElem> {
    let d = p.degree().unwrap_or(0).max(DEFAULT_RHO_DEGREE);
    RhoMap::new(d).apply(p).expect("table covers the degree")
}

/// Binomial coefficient `C(n, k)` as a rational, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigRational {
    if k < 0 || n < 0 || k > n {
        return <BigRational as Ring>::zero();
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

/// Compositions `(l_1, ..., l_s)` of `total` with `l_i ≥ lower[i]`.
pub fn bounded_compositions(total: u32, lower: &[u32]) -> Vec<Vec<u32>> {
    fn rec(total: u32, lower: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        match lower.split_first() {
            None => {
                if total == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&lo, rest)) => {
                let rest_min: u32 = rest.iter().sum();
                if total < lo + rest_min {
                    return;
                }
                for l in lo..=total - rest_min {
                    cur.push(l);
                    rec(total - l, rest, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(total, lower, &mut Vec::new(), &mut out);
    out
}

/// The left-hand side of the antipode relation among shuffle-regularized
/// multiple zeta values attached to `k = (k_1, ..., k_r)`:
/// `Σ_j Σ_l (-1)^{e_j} Π_{i≠j} C(l_i-1, k_i-1) ζ^⧢(l_1..l_{j-1}) ζ^⧢(l_r..l_{j+1})`
/// with `Σ_{i≠j} l_i = k - 1` and `e_j = l_1 + ... + l_{j-1} + k_j`.
pub fn mzv_antipode_relation(k: &Index) -> Result<TPoly<MzvElem>> {
    let ks = k.entries();
    let r = ks.len();
    let total = k.weight();
    if total == 0 {
        return Err(Error::InvalidArgument(
            "relation needs a nonempty index".into(),
        ));
    }
    let mut acc: TPoly<MzvElem> = TPoly::zero();
    for j in 0..r {
        let lower: Vec<u32> = ks
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &k)| k)
            .collect();
        for ls in bounded_compositions(total - 1, &lower) {
            let (left, right) = ls.split_at(j);
            let mut coeff = BigRational::one();
            for (l, kk) in ls.iter().zip(lower.iter()) {
                coeff *= binomial(*l as i64 - 1, *kk as i64 - 1);
            }
            let e: u32 = left.iter().sum::<u32>() + ks[j];
            if e % 2 == 1 {
                coeff = -coeff;
            }
            let a = zeta_reg(&Index::new(left.to_vec())?, Mode::Shuffle)?;
            let mut rev = right.to_vec();
            rev.reverse();
            let b = zeta_reg(&Index::new(rev)?, Mode::Shuffle)?;
            acc = acc.add(&Ring::mul(&a, &b).scale(&coeff));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mzv::NumericConfig;
    use crate::word::rat;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let a = reg_decompose(&idx("3,2"), Mode::Stuffle).unwrap();
        assert_eq!(a.degree(), Some(0));
        assert_eq!(a.to_string(), "z3z2");
        let s = reg_decompose(&idx("1,2"), Mode::Stuffle).unwrap();
        assert_eq!(s.to_string(), "z2*T - z2z1 - z3");
        let h = reg_decompose(&idx("1,2"), Mode::Shuffle).unwrap();
        assert_eq!(h.to_string(), "z2*T - 2*z2z1");
        assert_eq!(
            reg_decompose(&idx("z1"), Mode::Stuffle)
                .unwrap()
                .to_string(),
            "T"
        );
    }

    #[test]
    fn reconstruction_for_small_weights() {
        for mode in [Mode::Stuffle, Mode::Shuffle] {
            for w in Index::all_up_to_weight(6) {
                let p = reg_decompose(&w, mode).unwrap();
                for c in p.coeffs() {
                    assert!(c.subspace().is_within(Subspace::H0), "{w}: {c}");
                }
                assert_eq!(
                    reconstruct(&p, mode),
                    FreePoly::from_word(w.clone()),
                    "{mode} {w}"
                );
            }
        }
    }

    #[test]
    fn decomposition_is_multiplicative() {
        for mode in [Mode::Stuffle, Mode::Shuffle] {
            let words = Index::all_up_to_weight(3);
            for u in &words {
                for v in &words {
                    if u.weight() + v.weight() > 5 {
                        continue;
                    }
                    let lhs = reg_decompose_poly(&mode.product(u, v), mode).unwrap();
                    let rhs = reg_decompose(u, mode)
                        .unwrap()
                        .mul_with(&reg_decompose(v, mode).unwrap(), |a, b| {
                            mode.product_poly(a, b)
                        });
                    assert_eq!(lhs, rhs, "{mode}: {u} • {v}");
                }
            }
        }
    }

    #[test]
    fn regularized_zeta_examples() {
        assert_eq!(
            zeta_reg(&idx("2"), Mode::Stuffle).unwrap().to_string(),
            "ζ(2)"
        );
        assert_eq!(
            zeta_reg(&idx("z1"), Mode::Stuffle).unwrap().to_string(),
            "T"
        );
        assert_eq!(
            zeta_reg(&idx("1,2"), Mode::Stuffle).unwrap().to_string(),
            "ζ(2)*T - ζ(2,1) - ζ(3)"
        );
        assert_eq!(
            zeta_reg(&idx("1,2"), Mode::Shuffle).unwrap().to_string(),
            "ζ(2)*T - 2*ζ(2,1)"
        );
    }

    #[test]
    fn rho_low_degrees() {
        let rho = RhoMap::default();
        assert_eq!(rho.image(0).unwrap().to_string(), "1");
        assert_eq!(rho.image(1).unwrap().to_string(), "T");
        assert_eq!(rho.image(2).unwrap().to_string(), "T^2 + ζ(2)");
        // ρ(T^3) = T^3 + 3ζ(2)T - 2ζ(3)
        assert_eq!(rho.image(3).unwrap().to_string(), "T^3 + 3*ζ(2)*T - 2*ζ(3)");
    }

    fn max_numeric_deviation(p: &TPoly<MzvElem>, cfg: &NumericConfig) -> f64 {
        p.coeffs()
            .iter()
            .map(|c| c.eval(cfg).unwrap().value.norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn rho_maps_stuffle_to_shuffle_regularization() {
        let cfg = NumericConfig::default();
        for w in Index::all_up_to_weight(4) {
            let star = zeta_reg(&w, Mode::Stuffle).unwrap();
            let sh = zeta_reg(&w, Mode::Shuffle).unwrap();
            let diff = rho_apply(&star).add(&sh.scale(&rat(-1)));
            assert!(max_numeric_deviation(&diff, &cfg) < 1e-10, "{w}");
        }
    }

    #[test]
    fn antipode_relation_vanishes() {
        let cfg = NumericConfig::default();
        for w in Index::all_up_to_weight(5) {
            if w.is_empty() || w == idx("z1") {
                continue;
            }
            let rel = mzv_antipode_relation(&w).unwrap();
            assert!(max_numeric_deviation(&rel, &cfg) < 1e-10, "{w}: {rel}");
        }
        // the single letter z1 corresponds to an empty x-y word
        assert_eq!(mzv_antipode_relation(&idx("z1")).unwrap().to_string(), "-1");
    }

    #[test]
    fn compositions_and_binomials() {
        assert_eq!(
            bounded_compositions(4, &[2, 1]),
            vec![vec![2, 2], vec![3, 1]]
        );
        assert_eq!(binomial(4, 2), rat(6));
        assert_eq!(binomial(2, 3), rat(0));
    }
}
