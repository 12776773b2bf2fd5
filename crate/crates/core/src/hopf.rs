//! Quasi-shuffle products, the deconcatenation coproduct, the antipode and
//! convolution of linear maps.
//!
//! For letters `a, b` and words `w, v` the quasi-shuffle product is the
//! bilinear product with unit **1** and
//!
//! ```text
//! aw * bv = a(w * bv) + b(aw * v) + (a ◇ b)(w * v)
//! ```
//!
//! With `z_a ◇ z_b = z_{a+b}` this is the stuffle product on `H^1`; with the
//! trivial `◇` on `{x, y}` it is the shuffle product on `H`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::word::{FreePoly, Index, Word, XyWord};

/// Commutative, associative product on the span of the letters.
pub trait Diamond<L> {
    /// `a ◇ b` as a rational combination of letters (empty for zero).
    fn diamond(&self, a: &L, b: &L) -> Vec<(L, BigRational)>;

    /// `true` when `a ◇ b = 0` for all letters.
    fn is_trivial(&self) -> bool {
        false
    }
}

/// `a ◇ b = 0`: the shuffle product.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialDiamond;

impl<L> Diamond<L> for TrivialDiamond {
    fn diamond(&self, _: &L, _: &L) -> Vec<(L, BigRational)> {
        Vec::new()
    }

    fn is_trivial(&self) -> bool {
        true
    }
}

/// `z_a ◇ z_b = z_{a+b}`: the stuffle (harmonic) product.
#[derive(Clone, Copy, Debug, Default)]
pub struct StuffleDiamond;

impl Diamond<u32> for StuffleDiamond {
    fn diamond(&self, a: &u32, b: &u32) -> Vec<(u32, BigRational)> {
        vec![(a + b, BigRational::one())]
    }
}

/// Quasi-shuffle product of two words.
pub fn quasi_shuffle<W, D>(w: &W, v: &W, d: &D) -> FreePoly<W>
where
    W: Word,
    D: Diamond<W::Letter>,
{
    let mut memo = HashMap::new();
    qsh_rec(w.letters(), v.letters(), 0, 0, d, &mut memo)
}

fn qsh_rec<W, D>(
    a: &[W::Letter],
    b: &[W::Letter],
    i: usize,
    j: usize,
    d: &D,
    memo: &mut HashMap<(usize, usize), FreePoly<W>>,
) -> FreePoly<W>
where
    W: Word,
    D: Diamond<W::Letter>,
{
    if i == a.len() {
        return FreePoly::from_word(W::from_letters(b[j..].to_vec()));
    }
    if j == b.len() {
        return FreePoly::from_word(W::from_letters(a[i..].to_vec()));
    }
    if let Some(p) = memo.get(&(i, j)) {
        return p.clone();
    }
    let mut out = qsh_rec(a, b, i + 1, j, d, memo).prepend(&a[i]);
    out += &qsh_rec(a, b, i, j + 1, d, memo).prepend(&b[j]);
    let stuffed = d.diamond(&a[i], &b[j]);
    if !stuffed.is_empty() {
        let rest = qsh_rec(a, b, i + 1, j + 1, d, memo);
        for (c, coef) in stuffed {
            out.add_scaled(&rest.prepend(&c), &coef);
        }
    }
    memo.insert((i, j), out.clone());
    out
}

/// Bilinear extension of [`quasi_shuffle`].
pub fn quasi_shuffle_poly<W, D>(p: &FreePoly<W>, q: &FreePoly<W>, d: &D) -> FreePoly<W>
where
    W: Word,
    D: Diamond<W::Letter>,
{
    let mut out = FreePoly::zero();
    for (w, a) in p.terms() {
        for (v, b) in q.terms() {
            out.add_scaled(&quasi_shuffle(w, v, d), &(a * b));
        }
    }
    out
}

/// All deconcatenations `w = uv`, left to right, starting with `(1, w)`.
pub fn coproduct<W: Word>(w: &W) -> Vec<(W, W)> {
    (0..=w.len())
        .map(|i| (w.sub_word(0, i), w.sub_word(i, w.len())))
        .collect()
}

/// Antipode of the quasi-shuffle Hopf algebra, computed as the convolution
/// inverse of the identity: `S(1) = 1` and `Σ_{uv=w} S(u) * v = 0` for
/// nonempty `w`.
pub fn antipode<W, D>(w: &W, d: &D) -> FreePoly<W>
where
    W: Word,
    D: Diamond<W::Letter>,
{
    let n = w.len();
    let mut prefix: Vec<FreePoly<W>> = Vec::with_capacity(n + 1);
    prefix.push(FreePoly::one());
    for len in 1..=n {
        let mut s = FreePoly::zero();
        for (i, p) in prefix.iter().enumerate() {
            let tail = FreePoly::from_word(w.sub_word(i, len));
            s += &quasi_shuffle_poly(p, &tail, d);
        }
        prefix.push(-s);
    }
    prefix.pop().unwrap()
}

/// Closed form `S(a_1...a_r) = (-1)^r a_r...a_1` for the trivial `◇`.
pub fn antipode_shuffle<W: Word>(w: &W) -> FreePoly<W> {
    let sign = if w.len().is_multiple_of(2) { 1 } else { -1 };
    FreePoly::monomial(w.reversed(), crate::word::rat(sign))
}

/// Antipode, using the closed form when `d` is trivial.
pub fn antipode_auto<W, D>(w: &W, d: &D) -> FreePoly<W>
where
    W: Word,
    D: Diamond<W::Letter>,
{
    if d.is_trivial() {
        antipode_shuffle(w)
    } else {
        antipode(w, d)
    }
}

/// `(f ⋆ g)(w)` for endomorphisms of the Hopf algebra itself, multiplied with
/// the quasi-shuffle product.
pub fn convolve_endo<W, D>(
    w: &W,
    f: impl Fn(&W) -> FreePoly<W>,
    g: impl Fn(&W) -> FreePoly<W>,
    d: &D,
) -> FreePoly<W>
where
    W: Word,
    D: Diamond<W::Letter>,
{
    let mut out = FreePoly::zero();
    for (u, v) in coproduct(w) {
        out += &quasi_shuffle_poly(&f(&u), &g(&v), d);
    }
    out
}

/// `Σ_{i=0}^m (-1)^i a_i...a_1 ⧢ a_{i+1}...a_m`, which vanishes for every
/// nonempty word.
pub fn antipode_word_relation<W: Word>(w: &W) -> FreePoly<W> {
    let m = w.len();
    let mut out = FreePoly::zero();
    for i in 0..=m {
        let left = w.sub_word(0, i).reversed();
        let right = w.sub_word(i, m);
        let sign = crate::word::rat(if i % 2 == 0 { 1 } else { -1 });
        out.add_scaled(&quasi_shuffle(&left, &right, &TrivialDiamond), &sign);
    }
    out
}

/// The two products on `H^1` used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Harmonic product `*` on index words.
    Stuffle,
    /// Shuffle product `⧢`, computed on the `x`/`y` encoding.
    Shuffle,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Stuffle => "stuffle",
            Mode::Shuffle => "shuffle",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stuffle" | "harmonic" => Ok(Mode::Stuffle),
            "shuffle" => Ok(Mode::Shuffle),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

type ProductCache = RwLock<HashMap<(Mode, Index, Index), FreePoly<Index>>>;

fn product_cache() -> &'static ProductCache {
    static CACHE: OnceLock<ProductCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl Mode {
    /// Product of two index words in `H^1`.
    pub fn product(self, w: &Index, v: &Index) -> FreePoly<Index> {
        if w.is_empty() {
            return FreePoly::from_word(v.clone());
        }
        if v.is_empty() {
            return FreePoly::from_word(w.clone());
        }
        let key = if w <= v {
            (self, w.clone(), v.clone())
        } else {
            (self, v.clone(), w.clone())
        };
        if let Some(p) = product_cache().read().unwrap().get(&key) {
            return p.clone();
        }
        let p = match self {
            Mode::Stuffle => quasi_shuffle(w, v, &StuffleDiamond),
            Mode::Shuffle => quasi_shuffle(&w.encode_xy(), &v.encode_xy(), &TrivialDiamond)
                .decode()
                .expect("shuffle of words ending in y ends in y"),
        };
        product_cache().write().unwrap().insert(key, p.clone());
        p
    }

    pub fn product_poly(self, p: &FreePoly<Index>, q: &FreePoly<Index>) -> FreePoly<Index> {
        let mut out = FreePoly::zero();
        for (w, a) in p.terms() {
            for (v, b) in q.terms() {
                out.add_scaled(&self.product(w, v), &(a * b));
            }
        }
        out
    }

    /// Antipode on index words. In shuffle mode the result generally leaves
    /// `H^1`, so it is returned on `x`/`y` words.
    pub fn antipode(self, w: &Index) -> AntipodeValue {
        match self {
            Mode::Stuffle => AntipodeValue::Index(antipode(w, &StuffleDiamond)),
            Mode::Shuffle => AntipodeValue::Xy(antipode_shuffle(&w.encode_xy())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AntipodeValue {
    Index(FreePoly<Index>),
    Xy(FreePoly<XyWord>),
}

impl fmt::Display for AntipodeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AntipodeValue::Index(p) => p.fmt(f),
            AntipodeValue::Xy(p) => p.fmt(f),
        }
    }
}

/// A `Q`-linear map from `H^1` into a commutative ring, given by its values
/// on index words. The empty word must map to the unit.
pub trait LinearMap<R: Ring> {
    fn eval(&self, w: &Index) -> Result<R>;

    fn eval_poly(&self, p: &FreePoly<Index>) -> Result<R> {
        let mut acc = R::zero();
        for (w, c) in p.terms() {
            acc = acc.add(&self.eval(w)?.scale(c));
        }
        Ok(acc)
    }
}

impl<R: Ring, F> LinearMap<R> for F
where
    F: Fn(&Index) -> Result<R>,
{
    fn eval(&self, w: &Index) -> Result<R> {
        self(w)
    }
}

/// `f ⋆ g = m ∘ (f ⊗ g) ∘ Δ`.
#[derive(Clone, Copy, Debug)]
pub struct Convolution<F, G> {
    pub left: F,
    pub right: G,
}

pub fn convolve<F, G>(left: F, right: G) -> Convolution<F, G> {
    Convolution { left, right }
}

impl<R: Ring, F: LinearMap<R>, G: LinearMap<R>> LinearMap<R> for Convolution<F, G> {
    fn eval(&self, w: &Index) -> Result<R> {
        let mut acc = R::zero();
        for (u, v) in coproduct(w) {
            acc = acc.add(&self.left.eval(&u)?.mul(&self.right.eval(&v)?));
        }
        Ok(acc)
    }
}

/// `f_0 ⋆ f_1 ⋆ ... ⋆ f_{n-1}`, evaluated with one pass per factor over the
/// suffixes of the argument. The empty product is the counit.
pub struct IteratedConvolution<'a, R> {
    factors: Vec<Box<dyn LinearMap<R> + Send + Sync + 'a>>,
}

impl<'a, R: Ring> IteratedConvolution<'a, R> {
    pub fn new(factors: Vec<Box<dyn LinearMap<R> + Send + Sync + 'a>>) -> Self {
        IteratedConvolution { factors }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

impl<R: Ring> LinearMap<R> for IteratedConvolution<'_, R> {
    fn eval(&self, w: &Index) -> Result<R> {
        let n = w.len();
        // acc[s]: value of the product of the factors processed so far on w[s..]
        let mut acc: Vec<R> = (0..=n)
            .map(|s| if s == n { R::one() } else { R::zero() })
            .collect();
        for f in self.factors.iter().rev() {
            let mut next = Vec::with_capacity(n + 1);
            for s in 0..=n {
                let mut v = R::zero();
                for (t, a) in acc.iter().enumerate().skip(s) {
                    if a.is_zero() {
                        continue;
                    }
                    v = v.add(&f.eval(&w.sub_word(s, t))?.mul(a));
                }
                next.push(v);
            }
            acc = next;
        }
        Ok(acc.swap_remove(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{rat, XyLetter};

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn stuffle_example() {
        let p = quasi_shuffle(&idx("2"), &idx("3"), &StuffleDiamond);
        assert_eq!(p.to_string(), "z2z3 + z3z2 + z5");
    }

    #[test]
    fn shuffle_example_on_indices() {
        let p = Mode::Shuffle.product(&idx("2"), &idx("3"));
        assert_eq!(p.to_string(), "z2z3 + 3*z3z2 + 6*z4z1");
    }

    #[test]
    fn shuffle_example_on_xy() {
        let a: XyWord = "xy".parse().unwrap();
        let b: XyWord = "xxy".parse().unwrap();
        let p = quasi_shuffle(&a, &b, &TrivialDiamond);
        let mut expected = FreePoly::zero();
        expected.add_term("xyxxy".parse().unwrap(), rat(1));
        expected.add_term("xxyxy".parse().unwrap(), rat(3));
        expected.add_term("xxxyy".parse().unwrap(), rat(6));
        assert_eq!(p, expected);
    }

    #[test]
    fn unit_law() {
        let w = idx("3,1,2");
        assert_eq!(
            quasi_shuffle(&w, &Index::empty(), &StuffleDiamond),
            FreePoly::from_word(w.clone())
        );
        assert_eq!(
            Mode::Shuffle.product(&Index::empty(), &w),
            FreePoly::from_word(w)
        );
    }

    #[test]
    fn coproduct_examples() {
        let splits = coproduct(&idx("3,2"));
        let s: Vec<(String, String)> = splits
            .iter()
            .map(|(u, v)| (u.to_string(), v.to_string()))
            .collect();
        assert_eq!(
            s,
            [("1", "z3z2"), ("z3", "z2"), ("z3z2", "1")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
        );
        assert_eq!(
            coproduct(&Index::empty()),
            vec![(Index::empty(), Index::empty())]
        );
        assert_eq!(coproduct(&idx("1,1,2")).len(), 4);
    }

    #[test]
    fn antipode_examples() {
        let xy = XyWord::new(vec![XyLetter::X, XyLetter::Y]);
        assert_eq!(antipode(&xy, &TrivialDiamond).to_string(), "yx");
        assert_eq!(antipode_shuffle(&xy).to_string(), "yx");
        for k in 1..5 {
            assert_eq!(
                antipode(&Index::single(k), &StuffleDiamond).to_string(),
                format!("-z{k}")
            );
        }
        assert_eq!(
            antipode(&idx("1,2"), &StuffleDiamond).to_string(),
            "z2z1 + z3"
        );
    }

    #[test]
    fn antipode_closed_form_matches_recursion() {
        for idx in Index::all_up_to_weight(6) {
            let w = idx.encode_xy();
            assert_eq!(antipode(&w, &TrivialDiamond), antipode_shuffle(&w));
            assert_eq!(antipode(&idx, &TrivialDiamond), antipode_shuffle(&idx));
        }
    }

    #[test]
    fn antipode_word_relation_vanishes() {
        for s in ["xy", "xxy", "xyxy", "yxx", "x"] {
            let w: XyWord = s.parse().unwrap();
            assert!(antipode_word_relation(&w).is_zero(), "{s}");
        }
        // length 1 by hand: x·1 - x·1 on the two sides
        let w: XyWord = "xy".parse().unwrap();
        let expanded = &(&FreePoly::from_word(w.clone())
            - &quasi_shuffle(
                &"x".parse().unwrap(),
                &"y".parse().unwrap(),
                &TrivialDiamond,
            ))
            + &FreePoly::from_word("yx".parse::<XyWord>().unwrap());
        assert!(expanded.is_zero());
    }

    #[test]
    fn closure_of_subspaces() {
        let words = Index::all_up_to_weight(5);
        for a in &words {
            for b in &words {
                let st = Mode::Stuffle.product(a, b);
                let sh = Mode::Shuffle.product(a, b);
                if a.subspace() == crate::Subspace::H2 && b.subspace() == crate::Subspace::H2 {
                    assert_eq!(st.subspace(), crate::Subspace::H2);
                }
                if a.is_admissible() && b.is_admissible() {
                    assert!(st.subspace().is_within(crate::Subspace::H0));
                    assert!(sh.subspace().is_within(crate::Subspace::H0));
                }
            }
        }
        // H^2 is not closed under shuffle
        let p = Mode::Shuffle.product(&idx("2"), &idx("3"));
        assert!(!p.coeff(&idx("4,1")).is_zero());
        assert_eq!(p.subspace(), crate::Subspace::H0);
    }

    #[test]
    fn convolution_unit_and_example() {
        let f = |w: &Index| -> Result<BigRational> { Ok(rat(w.weight() as i64 + 1)) };
        let g = |w: &Index| -> Result<BigRational> { Ok(rat(if w.is_empty() { 1 } else { 2 })) };
        let h = convolve(f, g);
        assert_eq!(h.eval(&Index::empty()).unwrap(), rat(1));
        // splits of z3z2: f(1)g(z3z2) + f(z3)g(z2) + f(z3z2)g(1) = 2 + 8 + 6
        assert_eq!(h.eval(&idx("3,2")).unwrap(), rat(16));
    }

    #[test]
    fn iterated_convolution_matches_nested() {
        let f1 = |w: &Index| -> Result<BigRational> { Ok(rat(w.weight() as i64 + 1)) };
        let f2 = |w: &Index| -> Result<BigRational> { Ok(rat(w.depth() as i64 * 3 + 1)) };
        let f3 = |w: &Index| -> Result<BigRational> {
            Ok(rat(w.entries().first().copied().unwrap_or(0) as i64 + 1))
        };
        let nested = convolve(f1, convolve(f2, f3));
        let it = IteratedConvolution::new(vec![Box::new(f1), Box::new(f2), Box::new(f3)]);
        for w in Index::all_up_to_weight(5) {
            assert_eq!(nested.eval(&w).unwrap(), it.eval(&w).unwrap());
        }
        let empty: IteratedConvolution<BigRational> = IteratedConvolution::new(vec![]);
        assert_eq!(empty.eval(&Index::empty()).unwrap(), rat(1));
        assert_eq!(empty.eval(&idx("2")).unwrap(), rat(0));
    }
}
