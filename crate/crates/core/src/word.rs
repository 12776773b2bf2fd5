//! Words over `L_z = {z_1, z_2, ...}` and `L_xy = {x, y}`, and free
//! noncommutative polynomials with exact rational coefficients.
//!
//! An [`Index`] `(k_1, ..., k_r)` is the word `z_{k_1} ... z_{k_r}`. It is the
//! canonical representation for everything in `H^1`; the `x`/`y` form only
//! exists at the [`Index::encode_xy`] / [`XyWord::decode`] boundary, via
//! `z_k <-> x^{k-1} y`.

use std::cmp::Ordering;
use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Words with a letter sequence. Implemented by [`Index`] and [`XyWord`].
pub trait Word: Clone + Ord + fmt::Display + fmt::Debug {
    type Letter: Clone + Eq + fmt::Debug;

    fn letters(&self) -> &[Self::Letter];

    fn from_letters(letters: Vec<Self::Letter>) -> Self;

    fn empty() -> Self {
        Self::from_letters(Vec::new())
    }

    fn len(&self) -> usize {
        self.letters().len()
    }

    fn is_empty(&self) -> bool {
        self.letters().is_empty()
    }

    fn sub_word(&self, start: usize, end: usize) -> Self {
        Self::from_letters(self.letters()[start..end].to_vec())
    }

    fn reversed(&self) -> Self {
        let mut l = self.letters().to_vec();
        l.reverse();
        Self::from_letters(l)
    }
}

/// Smallest of the nested subspaces `H^2 ⊂ H^0 ⊂ H^1 ⊂ H` containing a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Subspace {
    H2,
    H0,
    H1,
    H,
}

impl Subspace {
    /// `true` if `self` is contained in `other`.
    pub fn is_within(self, other: Subspace) -> bool {
        self <= other
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Subspace::H2 => "H2",
            Subspace::H0 => "H0",
            Subspace::H1 => "H1",
            Subspace::H => "H",
        };
        f.write_str(s)
    }
}

/// An index `(k_1, ..., k_r)` with all `k_i >= 1`; the empty index is the
/// empty word **1**.
///
/// Ordered by weight first, then lexicographically on the entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::Parse(format!(
                "index {entries:?} has an entry 0; H^1 requires k_i >= 1"
            )));
        }
        Ok(Index(entries))
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    pub fn single(k: u32) -> Self {
        assert!(k >= 1, "index entries must be >= 1");
        Index(vec![k])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight_depth(&self) -> (u32, usize) {
        (self.weight(), self.depth())
    }

    /// `k_1 >= 2` or empty.
    pub fn is_admissible(&self) -> bool {
        self.0.first().is_none_or(|&k| k >= 2)
    }

    pub fn subspace(&self) -> Subspace {
        if self.0.iter().all(|&k| k >= 2) {
            Subspace::H2
        } else if self.is_admissible() {
            Subspace::H0
        } else {
            Subspace::H1
        }
    }

    /// Number of leading `z_1` letters.
    pub fn leading_ones(&self) -> usize {
        self.0.iter().take_while(|&&k| k == 1).count()
    }

    pub fn concat(&self, other: &Index) -> Index {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Index(v)
    }

    pub fn prepend(&self, k: u32) -> Index {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(k);
        v.extend_from_slice(&self.0);
        Index(v)
    }

    pub fn encode_xy(&self) -> XyWord {
        let mut letters = Vec::with_capacity(self.weight() as usize);
        for &k in &self.0 {
            letters.extend(std::iter::repeat_n(XyLetter::X, k as usize - 1));
            letters.push(XyLetter::Y);
        }
        XyWord(letters)
    }

    /// All indices of exactly the given weight (the compositions of `weight`).
    pub fn all_of_weight(weight: u32) -> Vec<Index> {
        fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
            if rest == 0 {
                out.push(Index(cur.clone()));
                return;
            }
            for k in 1..=rest {
                cur.push(k);
                rec(rest - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(weight, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// All indices of weight `<= max_weight`, including the empty index.
    pub fn all_up_to_weight(max_weight: u32) -> Vec<Index> {
        (0..=max_weight).flat_map(Index::all_of_weight).collect()
    }
}

impl<const N: usize> From<[u32; N]> for Index {
    fn from(entries: [u32; N]) -> Self {
        Index::new(entries.to_vec()).expect("index entries must be >= 1")
    }
}

impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word for Index {
    type Letter = u32;

    fn letters(&self) -> &[u32] {
        &self.0
    }

    fn from_letters(letters: Vec<u32>) -> Self {
        debug_assert!(letters.iter().all(|&k| k >= 1));
        Index(letters)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for k in &self.0 {
            write!(f, "z{k}")?;
        }
        Ok(())
    }
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Accepts `"3,2"`, `"z3 z2"`, `"z3z2"`; `""`, `"()"` and `"∅"` are the empty
/// word. A bare `"1"` is the one-letter word `z_1`, not the unit.
impl FromStr for Index {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "∅" || t == "()" {
            return Ok(Index::empty());
        }
        let t = t.trim_start_matches('(').trim_end_matches(')');
        let pieces: Vec<&str> = if t.starts_with('z') {
            t.split('z')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .collect()
        } else {
            t.split(',').map(str::trim).collect()
        };
        let mut entries = Vec::with_capacity(pieces.len());
        for p in pieces {
            let k: i64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad index entry {p:?} in {s:?}")))?;
            if k < 1 {
                return Err(Error::Parse(format!(
                    "index entry {k} in {s:?}: words of H^1 need every k_i >= 1"
                )));
            }
            entries.push(k as u32);
        }
        Index::new(entries)
    }
}

/// A letter of `L_xy`. `Y` sorts before `X`, which makes the word order agree
/// with the [`Index`] order under the encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XyLetter {
    Y,
    X,
}

/// A word over `{x, y}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct XyWord(Vec<XyLetter>);

impl XyWord {
    pub fn new(letters: Vec<XyLetter>) -> Self {
        XyWord(letters)
    }

    /// Inverse of [`Index::encode_xy`]; rejects words not in `H^1`.
    pub fn decode(&self) -> Result<Index> {
        if self.0.is_empty() {
            return Ok(Index::empty());
        }
        if self.0.last() != Some(&XyLetter::Y) {
            return Err(Error::Subspace {
                what: format!("word {self}"),
                required: Subspace::H1,
                found: Subspace::H,
            });
        }
        let mut entries = Vec::new();
        let mut run = 0u32;
        for l in &self.0 {
            match l {
                XyLetter::X => run += 1,
                XyLetter::Y => {
                    entries.push(run + 1);
                    run = 0;
                }
            }
        }
        Ok(Index(entries))
    }

    pub fn subspace(&self) -> Subspace {
        self.decode().map_or(Subspace::H, |i| i.subspace())
    }
}

impl Ord for XyWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for XyWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word for XyWord {
    type Letter = XyLetter;

    fn letters(&self) -> &[XyLetter] {
        &self.0
    }

    fn from_letters(letters: Vec<XyLetter>) -> Self {
        XyWord(letters)
    }
}

impl fmt::Display for XyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            f.write_str(match l {
                XyLetter::X => "x",
                XyLetter::Y => "y",
            })?;
        }
        Ok(())
    }
}

impl Serialize for XyWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for XyWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(XyWord::default());
        }
        t.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'x' => Ok(XyLetter::X),
                'y' => Ok(XyLetter::Y),
                _ => Err(Error::Parse(format!("letter {c:?} not in {{x, y}}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(XyWord)
    }
}

/// Finite `Q`-linear combination of words. Zero coefficients are never stored
/// and terms iterate in the word order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreePoly<W: Word> {
    terms: BTreeMap<W, BigRational>,
}

impl<W: Word> Default for FreePoly<W> {
    fn default() -> Self {
        FreePoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<W: Word> FreePoly<W> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty word with coefficient 1.
    pub fn one() -> Self {
        Self::from_word(W::empty())
    }

    pub fn from_word(w: W) -> Self {
        Self::monomial(w, BigRational::one())
    }

    pub fn monomial(w: W, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> btree_map::Iter<'_, W, BigRational> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &W> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &W) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, w: W, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &other.terms {
            self.add_term(w.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Applies a word-to-word map linearly.
    pub fn map_words<V: Word>(&self, f: impl Fn(&W) -> V) -> FreePoly<V> {
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w), c.clone());
        }
        out
    }

    /// Prepends a letter to every word.
    pub fn prepend(&self, letter: &W::Letter) -> Self {
        self.map_words(|w| {
            let mut l = Vec::with_capacity(w.len() + 1);
            l.push(letter.clone());
            l.extend_from_slice(w.letters());
            W::from_letters(l)
        })
    }

    /// Largest subspace among the words, `H2` for the zero polynomial.
    pub fn subspace_with(&self, f: impl Fn(&W) -> Subspace) -> Subspace {
        self.terms.keys().map(f).max().unwrap_or(Subspace::H2)
    }
}

impl FreePoly<Index> {
    pub fn subspace(&self) -> Subspace {
        self.subspace_with(Index::subspace)
    }

    pub fn encode_xy(&self) -> FreePoly<XyWord> {
        self.map_words(Index::encode_xy)
    }
}

impl FreePoly<XyWord> {
    pub fn decode(&self) -> Result<FreePoly<Index>> {
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.decode()?, c.clone());
        }
        Ok(out)
    }
}

impl<W: Word> From<W> for FreePoly<W> {
    fn from(w: W) -> Self {
        FreePoly::from_word(w)
    }
}

impl<W: Word> AddAssign<&FreePoly<W>> for FreePoly<W> {
    fn add_assign(&mut self, rhs: &FreePoly<W>) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl<W: Word> Add<&FreePoly<W>> for &FreePoly<W> {
    type Output = FreePoly<W>;

    fn add(self, rhs: &FreePoly<W>) -> FreePoly<W> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<W: Word> Add for FreePoly<W> {
    type Output = FreePoly<W>;

    fn add(mut self, rhs: FreePoly<W>) -> FreePoly<W> {
        self += &rhs;
        self
    }
}

impl<W: Word> Sub<&FreePoly<W>> for &FreePoly<W> {
    type Output = FreePoly<W>;

    fn sub(self, rhs: &FreePoly<W>) -> FreePoly<W> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigRational::one());
        out
    }
}

impl<W: Word> Sub for FreePoly<W> {
    type Output = FreePoly<W>;

    fn sub(self, rhs: FreePoly<W>) -> FreePoly<W> {
        &self - &rhs
    }
}

impl<W: Word> Neg for &FreePoly<W> {
    type Output = FreePoly<W>;

    fn neg(self) -> FreePoly<W> {
        self.scale(&-BigRational::one())
    }
}

impl<W: Word> Neg for FreePoly<W> {
    type Output = FreePoly<W>;

    fn neg(self) -> FreePoly<W> {
        -&self
    }
}

impl<W: Word> Zero for FreePoly<W> {
    fn zero() -> Self {
        FreePoly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Writes `c*w` terms joined by ` + ` / ` - `; unit coefficients are omitted.
pub(crate) fn write_linear_combination<'a, T: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (T, &'a BigRational)>,
) -> fmt::Result {
    let mut first = true;
    for (w, c) in terms {
        let neg = c.is_negative();
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        let a = c.abs();
        if a.is_one() {
            write!(f, "{w}")?;
        } else {
            write!(f, "{a}*{w}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl<W: Word> fmt::Display for FreePoly<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear_combination(f, self.terms.iter())
    }
}

#[derive(Serialize)]
struct TermJson<'a, W: Serialize> {
    word: &'a W,
    coeff: String,
}

impl<W: Word + Serialize> Serialize for FreePoly<W> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<_> = self
            .terms
            .iter()
            .map(|(w, c)| TermJson {
                word: w,
                coeff: c.to_string(),
            })
            .collect();
        v.serialize(s)
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
