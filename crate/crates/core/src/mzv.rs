//! The coefficient ring spanned by multiple zeta values and powers of
//! `E = -2πi`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hopf::Mode;
use crate::numeric::asymptotic::multiple_hurwitz_with_cutoff;
use crate::numeric::Estimate;
use crate::ring::Ring;
use crate::word::{FreePoly, Index, Subspace, Word};

/// `ζ(index) · E^e`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MzvMonomial {
    pub index: Index,
    pub e_power: u32,
}

impl MzvMonomial {
    pub fn weight(&self) -> u32 {
        self.index.weight() + self.e_power
    }
}

impl fmt::Display for MzvMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.index.is_empty() {
            let entries: Vec<String> = self.index.entries().iter().map(u32::to_string).collect();
            parts.push(format!("ζ({})", entries.join(",")));
        }
        match self.e_power {
            0 => {}
            1 => parts.push("E".into()),
            e => parts.push(format!("E^{e}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Rational combination of [`MzvMonomial`]s; every index is admissible.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MzvElem {
    terms: BTreeMap<MzvMonomial, BigRational>,
}

impl MzvElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(c: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(
            MzvMonomial {
                index: Index::empty(),
                e_power: 0,
            },
            c,
        );
        out
    }

    /// `ζ(k)` for an admissible index.
    pub fn zeta(k: &Index) -> Result<Self> {
        if !k.is_admissible() {
            return Err(Error::Subspace {
                what: format!("ζ({k})"),
                required: Subspace::H0,
                found: k.subspace(),
            });
        }
        let mut out = Self::zero();
        out.add_term(
            MzvMonomial {
                index: k.clone(),
                e_power: 0,
            },
            BigRational::one(),
        );
        Ok(out)
    }

    /// `ζ` applied linearly to a combination of admissible words.
    pub fn zeta_poly(p: &FreePoly<Index>) -> Result<Self> {
        let mut out = Self::zero();
        for (w, c) in p.terms() {
            out.add_scaled(&Self::zeta(w)?, c);
        }
        Ok(out)
    }

    pub fn e_power(e: u32) -> Self {
        let mut out = Self::zero();
        out.add_term(
            MzvMonomial {
                index: Index::empty(),
                e_power: e,
            },
            BigRational::one(),
        );
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MzvMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &MzvMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The rational number this element equals, if it has no ζ or E factor.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.index.is_empty() && m.e_power == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: MzvMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Multiplies every monomial by `E^e`.
    pub fn shift_e(&self, e: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(
                MzvMonomial {
                    index: m.index.clone(),
                    e_power: m.e_power + e,
                },
                c.clone(),
            );
        }
        out
    }

    /// Product with ζ symbols multiplied through the stuffle product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                let e_power = a.e_power + b.e_power;
                for (index, s) in Mode::Stuffle.product(&a.index, &b.index).terms() {
                    out.add_term(
                        MzvMonomial {
                            index: index.clone(),
                            e_power,
                        },
                        &c * s,
                    );
                }
            }
        }
        out
    }

    /// Weights `weight(index) + e` occurring in the element.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(MzvMonomial::weight).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// Numeric value with `E = -2πi`.
    pub fn eval(&self, cfg: &NumericConfig) -> Result<Estimate> {
        let e = Complex64::new(0.0, -2.0 * std::f64::consts::PI);
        let mut acc = Estimate::zero();
        for (m, c) in &self.terms {
            let z = mzv_value(&m.index, cfg)?;
            let coeff = Complex64::from_rational(c) * e.powu(m.e_power);
            acc = acc.add(&z.scale(coeff));
        }
        if acc.error > cfg.tolerance {
            return Err(Error::Tolerance {
                what: format!("evaluation of {self}"),
                tolerance: cfg.tolerance,
                estimate: acc.error,
            });
        }
        Ok(acc)
    }
}

impl Ring for MzvElem {
    fn zero() -> Self {
        MzvElem::zero()
    }

    fn one() -> Self {
        MzvElem::one()
    }

    fn is_zero(&self) -> bool {
        MzvElem::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &BigRational::one());
        out
    }

    fn mul(&self, other: &Self) -> Self {
        MzvElem::mul(self, other)
    }

    fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    fn from_rational(r: &BigRational) -> Self {
        MzvElem::rational(r.clone())
    }

    fn scale(&self, r: &BigRational) -> Self {
        MzvElem::scale(self, r)
    }
}

impl std::ops::Add for &MzvElem {
    type Output = MzvElem;
    fn add(self, rhs: &MzvElem) -> MzvElem {
        Ring::add(self, rhs)
    }
}

impl std::ops::Sub for &MzvElem {
    type Output = MzvElem;
    fn sub(self, rhs: &MzvElem) -> MzvElem {
        Ring::sub(self, rhs)
    }
}

impl std::ops::Mul for &MzvElem {
    type Output = MzvElem;
    fn mul(self, rhs: &MzvElem) -> MzvElem {
        MzvElem::mul(self, rhs)
    }
}

impl std::ops::Neg for &MzvElem {
    type Output = MzvElem;
    fn neg(self) -> MzvElem {
        Ring::neg(self)
    }
}

impl fmt::Display for MzvElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::word::write_linear_combination(f, self.terms.iter())
    }
}

#[derive(Serialize)]
struct MonomialJson<'a> {
    index: &'a Index,
    e: u32,
    coeff: String,
}

impl Serialize for MzvElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| MonomialJson {
                index: &m.index,
                e: m.e_power,
                coeff: c.to_string(),
            })
            .collect();
        v.serialize(s)
    }
}

/// Numeric settings for multiple zeta values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericConfig {
    /// Absolute tolerance every reported value must certify.
    pub tolerance: f64,
    /// Number of leading terms summed directly before the tail takes over.
    pub cutoff: usize,
    /// Whether the asymptotic tail of the outer sums is added.
    pub tail_correction: bool,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            cutoff: 64,
            tail_correction: true,
        }
    }
}

impl NumericConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 || self.tolerance.is_infinite() {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.cutoff < 2 || self.cutoff > 10_000_000 {
            return Err(Error::InvalidArgument(format!(
                "cutoff {} outside 2..=10^7",
                self.cutoff
            )));
        }
        Ok(())
    }
}

/// `ζ(k)` for an admissible index, cached across calls.
pub fn mzv_value(k: &Index, cfg: &NumericConfig) -> Result<Estimate> {
    type Key = (Index, usize, bool);
    static CACHE: OnceLock<RwLock<HashMap<Key, Estimate>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if k.is_empty() {
        return Ok(Estimate::exact(Complex64::new(1.0, 0.0)));
    }
    let key = (k.clone(), cfg.cutoff, cfg.tail_correction);
    if let Some(v) = cache.read().ok().and_then(|c| c.get(&key).copied()) {
        return Ok(v);
    }
    let v = multiple_hurwitz_with_cutoff(
        k.entries(),
        Complex64::new(0.0, 0.0),
        cfg.cutoff,
        cfg.tail_correction,
    )?;
    if let Ok(mut c) = cache.write() {
        c.insert(key, v);
    }
    Ok(v)
}

/// `|eval(a - b)| ≤ tolerance`.
pub fn mzv_eq_numeric(a: &MzvElem, b: &MzvElem, cfg: &NumericConfig) -> Result<bool> {
    let d = (a - b).eval(cfg)?;
    Ok(d.value.norm() <= cfg.tolerance)
}

/// Deviation of the computed `ζ(2)` from `π²/6`.
pub fn self_test(cfg: &NumericConfig) -> Result<f64> {
    let z2 = mzv_value(&Index::single(2), cfg)?;
    let dev = (z2.value - Complex64::new(std::f64::consts::PI.powi(2) / 6.0, 0.0)).norm();
    if dev > cfg.tolerance {
        return Err(Error::Invariant(format!(
            "ζ(2) self-test deviates from π²/6 by {dev:e}"
        )));
    }
    Ok(dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::rat;
    use proptest::prelude::*;

    fn z(s: &str) -> MzvElem {
        MzvElem::zeta(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn stuffle_normal_form() {
        let p = &z("2") * &z("3");
        assert_eq!(p.to_string(), "ζ(2,3) + ζ(3,2) + ζ(5)");
        assert_eq!(&MzvElem::one() * &z("2"), z("2"));
        let a = &z("2") * &MzvElem::e_power(2);
        let b = &z("3") * &MzvElem::e_power(3);
        assert_eq!((&a * &b), p.shift_e(5));
    }

    #[test]
    fn display_forms() {
        let a = &z("3").scale(&rat(3)) * &MzvElem::e_power(2);
        assert_eq!(a.to_string(), "3*ζ(3)*E^2");
        assert_eq!(MzvElem::e_power(1).to_string(), "E");
        assert_eq!(MzvElem::zero().to_string(), "0");
        assert_eq!(MzvElem::one().to_string(), "1");
    }

    #[test]
    fn rejects_non_admissible_symbols() {
        assert!(MzvElem::zeta(&"1,2".parse().unwrap()).is_err());
    }

    #[test]
    fn numeric_values() {
        let cfg = NumericConfig::default();
        assert!(self_test(&cfg).unwrap() < 1e-14);
        assert_eq!(
            MzvElem::one().eval(&cfg).unwrap().value,
            Complex64::new(1.0, 0.0)
        );
        assert!(mzv_eq_numeric(&z("2,1"), &z("3"), &cfg).unwrap());
        assert!(!mzv_eq_numeric(&z("2"), &z("3"), &cfg).unwrap());
        let e = MzvElem::e_power(1).eval(&cfg).unwrap().value;
        assert!((e - Complex64::new(0.0, -2.0 * std::f64::consts::PI)).norm() < 1e-15);
    }

    #[test]
    fn evaluation_is_multiplicative() {
        let cfg = NumericConfig::default();
        for (a, b) in [("2", "3"), ("2,1", "3"), ("3,1,2", "2,2")] {
            let (a, b) = (z(a), z(b));
            let lhs = (&a * &b).eval(&cfg).unwrap().value;
            let rhs = a.eval(&cfg).unwrap().value * b.eval(&cfg).unwrap().value;
            assert!((lhs - rhs).norm() <= 2.0 * cfg.tolerance);
        }
    }

    #[test]
    fn untailed_sum_fails_to_certify() {
        let cfg = NumericConfig {
            tail_correction: false,
            cutoff: 1000,
            ..NumericConfig::default()
        };
        assert!(matches!(z("2").eval(&cfg), Err(Error::Tolerance { .. })));
    }

    fn admissible(max_weight: u32) -> impl Strategy<Value = MzvElem> {
        let words: Vec<Index> = Index::all_up_to_weight(max_weight)
            .into_iter()
            .filter(Index::is_admissible)
            .collect();
        proptest::collection::vec((0..words.len(), -3i64..4, 0u32..2), 1..3).prop_map(
            move |terms| {
                let mut out = MzvElem::zero();
                for (i, c, e) in terms {
                    let m = MzvElem::zeta(&words[i]).unwrap().shift_e(e);
                    out.add_scaled(&m, &rat(c));
                }
                out
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn product_is_commutative_and_associative(
            a in admissible(3), b in admissible(3), c in admissible(2)
        ) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn products_stay_admissible(a in admissible(4), b in admissible(4)) {
            for (m, _) in (&a * &b).terms() {
                prop_assert!(m.index.is_admissible());
            }
        }
    }
}
