//! `ĝ^*` on `H^2` and Fourier expansions of multiple Eisenstein series.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::gseries::ghat_series;
use super::qseries::{qseries_eval, QSeries};
use super::reduce::{multitangent_reduce, Reduction};
use crate::error::{Error, Result};
use crate::hopf::{convolve, LinearMap};
use crate::mzv::{MzvElem, NumericConfig};
use crate::numeric::Estimate;
use crate::ring::Ring;
use crate::word::{Index, Subspace, Word};

/// Polynomials in the symbols `ĝ(l)` with coefficients in the MZV ring.
/// A monomial is the sorted list of its symbols; `[]` is the constant.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GhatPoly {
    terms: BTreeMap<Vec<Index>, MzvElem>,
}

impl GhatPoly {
    pub fn constant(c: MzvElem) -> Self {
        let mut p = Self::default();
        p.add_term(Vec::new(), c);
        p
    }

    /// `c · ĝ(l)`.
    pub fn symbol(l: Index, c: MzvElem) -> Self {
        let mut p = Self::default();
        p.add_term(vec![l], c);
        p
    }

    pub fn add_term(&mut self, mut monomial: Vec<Index>, c: MzvElem) {
        if c.is_zero() {
            return;
        }
        monomial.sort();
        let entry = self.terms.entry(monomial.clone()).or_default();
        *entry = Ring::add(entry, &c);
        if entry.is_zero() {
            self.terms.remove(&monomial);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Index>, &MzvElem)> {
        self.terms.iter()
    }

    /// Largest number of `ĝ` symbols in one monomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> MzvElem {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    /// Replaces every `ĝ(l)` by its q-series.
    pub fn to_qseries(&self, order: usize) -> Result<QSeries<MzvElem>> {
        let mut acc = QSeries::zero(order);
        for (mono, c) in &self.terms {
            let mut s = QSeries::constant(c.clone(), order);
            for l in mono {
                s = s.mul(&ghat_series(l, order))?;
            }
            acc = acc.add(&s)?;
        }
        Ok(acc)
    }
}

impl Ring for GhatPoly {
    fn zero() -> Self {
        Self::default()
    }

    fn one() -> Self {
        Self::constant(MzvElem::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                m.extend(mb.iter().cloned());
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    fn from_rational(r: &BigRational) -> Self {
        Self::constant(MzvElem::rational(r.clone()))
    }
}

fn require_h2(w: &Index, what: &str) -> Result<()> {
    if w.subspace() != Subspace::H2 {
        return Err(Error::Subspace {
            what: format!("{what} of {w}"),
            required: Subspace::H2,
            found: w.subspace(),
        });
    }
    Ok(())
}

/// `ĝ^*(w)` for `w ∈ H^2` as an MZV-linear combination of `ĝ` symbols:
/// every block of a composition of `w` is reduced to monotangents, and the
/// ordered sums over the block multipliers become `ĝ` of the chosen weights.
pub fn gstar_symbolic(w: &Index, cfg: &NumericConfig) -> Result<GhatPoly> {
    require_h2(w, "ĝ^*")?;
    let n = w.len();
    if n == 0 {
        return Ok(GhatPoly::one());
    }
    let mut reductions: BTreeMap<(usize, usize), Reduction> = BTreeMap::new();
    for s in 0..n {
        for t in s + 1..=n {
            reductions.insert((s, t), multitangent_reduce(&w.sub_word(s, t), cfg)?);
        }
    }
    // tails[s]: Σ over compositions of w[s..] as (coefficient, chosen weights)
    let mut tails: Vec<Vec<(MzvElem, Vec<u32>)>> = vec![Vec::new(); n + 1];
    tails[n].push((MzvElem::one(), Vec::new()));
    for s in (0..n).rev() {
        let mut acc = Vec::new();
        for t in s + 1..=n {
            let red = &reductions[&(s, t)];
            for (&l, c) in &red.terms {
                for (c2, ls) in &tails[t] {
                    let mut v = Vec::with_capacity(ls.len() + 1);
                    v.push(l);
                    v.extend_from_slice(ls);
                    acc.push((c * c2, v));
                }
            }
        }
        tails[s] = acc;
    }
    let mut out = GhatPoly::default();
    for (c, ls) in tails.swap_remove(0) {
        out.add_term(vec![Index::new(ls)?], c);
    }
    Ok(out)
}

/// `ĝ^*(w)` and its q-expansion up to `q^order`.
pub fn gstar_series(
    w: &Index,
    order: usize,
    cfg: &NumericConfig,
) -> Result<(GhatPoly, QSeries<MzvElem>)> {
    let sym = gstar_symbolic(w, cfg)?;
    let series = sym.to_qseries(order)?;
    Ok((sym, series))
}

/// One term `α · ζ(zeta_index) · ĝ(g_index)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MiddleTerm {
    #[serde(serialize_with = "ser_bigint")]
    pub alpha: BigInt,
    pub zeta_index: Index,
    pub g_index: Index,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(v) {
        Ok(i) => s.serialize_i64(i),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

/// `G(k) = ζ(k) + Σ α ζ(l_1..l_j) ĝ(l_{j+1}..l_r) + ĝ(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierExpansion {
    pub index: Index,
    pub zeta_term: MzvElem,
    pub middle: Vec<MiddleTerm>,
    /// Coefficient of `ĝ(k)`.
    pub g_term: BigInt,
    pub q_coefficients: QSeries<MzvElem>,
}

/// Fourier expansion of `G(w)` for `w ∈ H^2` up to `q^order`, from the
/// convolution `ĝ^* ⋆ ζ`.
pub fn fourier_expansion(w: &Index, order: usize, cfg: &NumericConfig) -> Result<FourierExpansion> {
    require_h2(w, "Fourier expansion")?;
    let gstar = |u: &Index| gstar_symbolic(u, cfg);
    let zeta = |u: &Index| MzvElem::zeta(u).map(GhatPoly::constant);
    let poly = convolve(gstar, zeta).eval(w)?;
    if poly.degree() > 1 {
        return Err(Error::Invariant(format!(
            "expansion of G({w}) is not linear in ĝ"
        )));
    }
    let weight = w.weight();
    let mut middle = Vec::new();
    let mut g_term = BigInt::from(0);
    let mut zeta_term = MzvElem::zero();
    for (mono, c) in poly.terms() {
        let Some(g) = mono.first() else {
            zeta_term = c.clone();
            continue;
        };
        for (m, a) in c.terms() {
            if m.e_power != 0 || m.index.weight() + g.weight() != weight {
                return Err(Error::Invariant(format!(
                    "term {a}*{m}*ĝ({g}) breaks the weight grading of G({w})"
                )));
            }
            if !a.is_integer() {
                return Err(Error::Invariant(format!(
                    "coefficient {a} of {m}*ĝ({g}) in G({w}) is not an integer"
                )));
            }
            if m.index.is_empty() && g == w {
                g_term = a.to_integer();
            } else {
                middle.push(MiddleTerm {
                    alpha: a.to_integer(),
                    zeta_index: m.index.clone(),
                    g_index: g.clone(),
                });
            }
        }
    }
    middle.sort_by(|a, b| {
        b.zeta_index
            .weight()
            .cmp(&a.zeta_index.weight())
            .then_with(|| a.zeta_index.cmp(&b.zeta_index))
            .then_with(|| a.g_index.cmp(&b.g_index))
    });
    let q_coefficients = poly.to_qseries(order)?;
    Ok(FourierExpansion {
        index: w.clone(),
        zeta_term,
        middle,
        g_term,
        q_coefficients,
    })
}

impl std::fmt::Display for GhatPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (mono, c) in &self.terms {
            let symbols: Vec<String> = mono.iter().map(|l| format!("ĝ({})", join(l))).collect();
            let coeff = if c.len() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            parts.push(match (symbols.is_empty(), coeff.as_str()) {
                (true, _) => coeff,
                (false, "1") => symbols.join("*"),
                (false, "-1") => format!("-{}", symbols.join("*")),
                (false, _) => format!("{coeff}*{}", symbols.join("*")),
            });
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

#[derive(Serialize)]
struct GhatTermJson<'a> {
    symbols: &'a [Index],
    coeff: &'a MzvElem,
}

impl Serialize for GhatPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(
            self.terms
                .iter()
                .map(|(symbols, coeff)| GhatTermJson { symbols, coeff }),
        )
    }
}

impl FourierExpansion {
    /// Numeric value at `τ` from the truncated q-expansion.
    pub fn eval(&self, tau: Complex64, cfg: &NumericConfig) -> Result<Estimate> {
        qseries_eval(&self.q_coefficients, tau, cfg)
    }

    /// `ζ(3,2) + 3*ζ(3)*ĝ(2) + ...`.
    pub fn structured(&self) -> String {
        let mut parts = vec![self.zeta_term.to_string()];
        for m in &self.middle {
            let zeta = if m.zeta_index.is_empty() {
                String::new()
            } else {
                format!("ζ({})*", join(&m.zeta_index))
            };
            let alpha = if m.alpha == BigInt::one() {
                String::new()
            } else {
                format!("{}*", m.alpha)
            };
            parts.push(format!("{alpha}{zeta}ĝ({})", join(&m.g_index)));
        }
        if self.g_term == BigInt::one() {
            parts.push(format!("ĝ({})", join(&self.index)));
        } else if self.g_term != BigInt::from(0) {
            parts.push(format!("{}*ĝ({})", self.g_term, join(&self.index)));
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn join(k: &Index) -> String {
    k.entries()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Serialize)]
struct FourierJson<'a> {
    index: &'a Index,
    zeta_term: &'a MzvElem,
    middle: &'a [MiddleTerm],
    #[serde(serialize_with = "ser_bigint")]
    g_term: &'a BigInt,
    order: usize,
    q_coefficients: Vec<super::qseries::QCoefficient<'a>>,
}

impl Serialize for FourierExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FourierJson {
            index: &self.index,
            zeta_term: &self.zeta_term,
            middle: &self.middle,
            g_term: &self.g_term,
            order: self.q_coefficients.order(),
            q_coefficients: self.q_coefficients.json_coefficients(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::Mode;
    use crate::word::rat;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn gstar_examples() {
        let cfg = NumericConfig::default();
        let g = gstar_symbolic(&idx("4"), &cfg).unwrap();
        assert_eq!(g, GhatPoly::symbol(idx("4"), MzvElem::one()));
        let g = gstar_symbolic(&idx("3,2"), &cfg).unwrap();
        let z = |s: &str| MzvElem::zeta(&idx(s)).unwrap();
        let mut expected = GhatPoly::symbol(idx("3,2"), MzvElem::one());
        expected = Ring::add(
            &expected,
            &GhatPoly::symbol(idx("2"), z("3").scale(&rat(3))),
        );
        expected = Ring::add(&expected, &GhatPoly::symbol(idx("3"), z("2")));
        assert_eq!(g, expected);
    }

    #[test]
    fn fourier_of_depth_one() {
        let cfg = NumericConfig::default();
        let f = fourier_expansion(&idx("4"), 10, &cfg).unwrap();
        assert_eq!(f.structured(), "ζ(4) + ĝ(4)");
        assert!(f.middle.is_empty());
    }

    #[test]
    fn fourier_of_three_two() {
        let cfg = NumericConfig::default();
        let f = fourier_expansion(&idx("3,2"), 10, &cfg).unwrap();
        assert_eq!(
            f.structured(),
            "ζ(3,2) + 3*ζ(3)*ĝ(2) + 2*ζ(2)*ĝ(3) + ĝ(3,2)"
        );
        assert_eq!(f.g_term, BigInt::one());
    }

    #[test]
    fn gstar_is_multiplicative_coefficientwise() {
        let cfg = NumericConfig::default();
        let order = 12;
        let (_, a) = gstar_series(&idx("2"), order, &cfg).unwrap();
        let (_, b) = gstar_series(&idx("3"), order, &cfg).unwrap();
        let lhs = a.mul(&b).unwrap();
        let mut rhs = QSeries::zero(order);
        for (w, c) in Mode::Stuffle.product(&idx("2"), &idx("3")).terms() {
            rhs = rhs
                .add(&gstar_series(w, order, &cfg).unwrap().1.scale(c))
                .unwrap();
        }
        for n in 0..=order {
            let d = (lhs.coeff(n) - rhs.coeff(n))
                .eval(&cfg)
                .unwrap()
                .value
                .norm();
            let scale = lhs.coeff(n).eval(&cfg).unwrap().value.norm().max(1.0);
            assert!(d < 1e-9 * scale, "q^{n}: {d}");
        }
    }

    #[test]
    fn rejects_words_outside_h2() {
        let cfg = NumericConfig::default();
        assert!(fourier_expansion(&idx("2,1"), 5, &cfg).is_err());
    }
}
