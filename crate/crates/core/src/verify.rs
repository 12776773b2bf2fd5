//! Identity suites over the algebraic and numeric layers.
//!
//! Every suite returns a [`Report`] made of [`Check`]s. Exact checks count
//! violations (threshold `0`); numeric checks record the largest deviation.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::{
    antipode, antipode_shuffle, antipode_word_relation, convolve_endo, coproduct, quasi_shuffle,
    Diamond, LinearMap, Mode, StuffleDiamond, TrivialDiamond,
};
use crate::mzv::{MzvElem, NumericConfig};
use crate::numeric::regularized::mes_star;
use crate::numeric::trunc::{
    ghat_trunc, ghat_trunc_compositions, hurwitz_trunc, mes_conv, mes_trunc,
    mes_trunc_extrapolated, multitangent_conv, multitangent_trunc, multitangent_trunc_extrapolated,
    zeta_minus_trunc,
};
use crate::numeric::EvalContext;
use crate::qexp::{fourier_expansion, multitangent_reduce_raw};
use crate::regularization::{
    mzv_antipode_relation, reconstruct, reg_decompose, rho_apply, zeta_reg, TPoly,
};
use crate::word::{FreePoly, Index, Subspace, Word, XyWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hopf,
    TruncIdentities,
    Reduction,
    RegRho,
    Gstar,
    Fourier,
    AntipodeMzv,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Hopf,
        Suite::TruncIdentities,
        Suite::Reduction,
        Suite::RegRho,
        Suite::Gstar,
        Suite::Fourier,
        Suite::AntipodeMzv,
    ];

    /// Weight bound used when none is given.
    pub fn default_max_weight(self) -> u32 {
        match self {
            Suite::Hopf => 5,
            Suite::TruncIdentities => 6,
            Suite::Reduction => 6,
            Suite::RegRho => 4,
            Suite::Gstar => 5,
            Suite::Fourier => 5,
            Suite::AntipodeMzv => 5,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Hopf => "hopf",
            Suite::TruncIdentities => "trunc-identities",
            Suite::Reduction => "reduction",
            Suite::RegRho => "reg-rho",
            Suite::Gstar => "gstar",
            Suite::Fourier => "fourier",
            Suite::AntipodeMzv => "antipode-mzv",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// One identity family checked over a range of cases.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub max_deviation: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Up to five offending cases.
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>, threshold: f64) -> Self {
        Self {
            name: name.into(),
            cases: 0,
            max_deviation: 0.0,
            threshold,
            passed: true,
            failures: Vec::new(),
        }
    }

    fn exact(name: impl Into<String>) -> Self {
        Self::new(name, 0.0)
    }

    fn record(&mut self, case: impl fmt::Display, deviation: f64) {
        self.cases += 1;
        let ok = deviation <= self.threshold;
        if deviation > self.max_deviation || deviation.is_nan() {
            self.max_deviation = deviation;
        }
        if !ok {
            self.passed = false;
            if self.failures.len() < 5 {
                self.failures.push(format!("{case}: {deviation:e}"));
            }
        }
    }

    fn record_eq<T: PartialEq>(&mut self, case: impl fmt::Display, a: &T, b: &T) {
        self.record(case, if a == b { 0.0 } else { 1.0 });
    }

    fn record_error(&mut self, case: impl fmt::Display, e: &Error) {
        self.cases += 1;
        self.passed = false;
        self.max_deviation = f64::INFINITY;
        if self.failures.len() < 5 {
            self.failures.push(format!("{case}: {e}"));
        }
    }

    fn record_result(&mut self, case: impl fmt::Display, r: Result<f64>) {
        match r {
            Ok(d) => self.record(case, d),
            Err(e) => self.record_error(case, &e),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} ({} cases, max deviation {:e}, threshold {:e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.max_deviation,
            self.threshold
        )?;
        for fail in &self.failures {
            write!(f, "\n    {fail}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub max_weight: u32,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (max weight {})", self.suite, self.max_weight)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_weight: Option<u32>,
    pub ctx: EvalContext,
    pub cfg: NumericConfig,
    pub seed: u64,
    /// Number of random words for sampled checks.
    pub samples: usize,
    /// Top truncation used when extrapolating lattice sums in `N`.
    pub n_extrapolate: usize,
    /// Row truncation `M` for lattice-sum oracles.
    pub m_lattice: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_weight: None,
            ctx: EvalContext::default(),
            cfg: NumericConfig::default(),
            seed: 2024,
            samples: 50,
            n_extrapolate: 10_000,
            m_lattice: 40,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Report> {
    opts.ctx.validate()?;
    opts.cfg.validate()?;
    let w = opts
        .max_weight
        .unwrap_or_else(|| suite.default_max_weight());
    let checks = match suite {
        Suite::Hopf => hopf_checks(w),
        Suite::TruncIdentities => trunc_checks(w, opts),
        Suite::Reduction => reduction_checks(w, opts),
        Suite::RegRho => reg_checks(w, opts),
        Suite::Gstar => gstar_checks(w, opts),
        Suite::Fourier => fourier_checks(w, opts),
        Suite::AntipodeMzv => antipode_mzv_checks(w, opts),
    };
    Ok(Report {
        suite,
        max_weight: w,
        checks,
    })
}

/// Index words of weight `1..=max_weight` with every entry at most `max_letter`.
pub fn words_over(max_letter: u32, max_weight: u32) -> Vec<Index> {
    Index::all_up_to_weight(max_weight)
        .into_iter()
        .filter(|w| !w.is_empty() && w.entries().iter().all(|&k| k <= max_letter))
        .collect()
}

fn rel_dev(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn counit<W: Word>(w: &W) -> FreePoly<W> {
    if w.is_empty() {
        FreePoly::one()
    } else {
        FreePoly::zero()
    }
}

fn identity<W: Word>(w: &W) -> FreePoly<W> {
    FreePoly::from_word(w.clone())
}

fn coassociativity<W: Word>(w: &W) -> bool {
    let mut left: Vec<(W, W, W)> = coproduct(w)
        .into_iter()
        .flat_map(|(a, b)| {
            coproduct(&a)
                .into_iter()
                .map(move |(a1, a2)| (a1, a2, b.clone()))
        })
        .collect();
    let mut right: Vec<(W, W, W)> = coproduct(w)
        .into_iter()
        .flat_map(|(a, b)| {
            coproduct(&b)
                .into_iter()
                .map(move |(b1, b2)| (a.clone(), b1, b2))
        })
        .collect();
    left.sort();
    right.sort();
    left == right
}

fn antipode_checks<D: Diamond<u32>>(label: &str, words: &[Index], d: &D) -> Vec<Check> {
    let mut inverse = Check::exact(format!("{label}: S ⋆ id = id ⋆ S = ε"));
    let s = |w: &Index| antipode(w, d);
    for w in std::iter::once(Index::empty()).chain(words.iter().cloned()) {
        let left = convolve_endo(&w, s, identity, d);
        let right = convolve_endo(&w, identity, s, d);
        let e = counit(&w);
        inverse.record_eq(&w, &(left == e && right == e), &true);
    }
    let mut comm = Check::exact(format!("{label}: commutativity"));
    let mut assoc = Check::exact(format!("{label}: associativity"));
    let max_w = words.iter().map(Index::weight).max().unwrap_or(0);
    for u in words {
        for v in words {
            comm.record_eq(
                format_args!("{u}, {v}"),
                &quasi_shuffle(u, v, d),
                &quasi_shuffle(v, u, d),
            );
        }
    }
    for u in words {
        for v in words {
            for x in words {
                if u.weight() + v.weight() + x.weight() > max_w + 1 {
                    continue;
                }
                let l = quasi_shuffle_left(u, v, x, d);
                let r = quasi_shuffle_right(u, v, x, d);
                assoc.record_eq(format_args!("{u}, {v}, {x}"), &l, &r);
            }
        }
    }
    vec![inverse, comm, assoc]
}

fn quasi_shuffle_left<D: Diamond<u32>>(u: &Index, v: &Index, x: &Index, d: &D) -> FreePoly<Index> {
    crate::hopf::quasi_shuffle_poly(&quasi_shuffle(u, v, d), &FreePoly::from_word(x.clone()), d)
}

fn quasi_shuffle_right<D: Diamond<u32>>(u: &Index, v: &Index, x: &Index, d: &D) -> FreePoly<Index> {
    crate::hopf::quasi_shuffle_poly(&FreePoly::from_word(u.clone()), &quasi_shuffle(v, x, d), d)
}

/// The products displayed as worked examples: `z_2 * z_3`, `xy ⧢ xxy`, `z_2 ⧢ z_3`.
pub fn example_checks() -> Check {
    let mut c = Check::exact("worked product examples");
    let idx = |s: &str| s.parse::<Index>().expect("literal");
    let xy = |s: &str| s.parse::<XyWord>().expect("literal");
    let stuffle = Mode::Stuffle.product(&idx("2"), &idx("3"));
    c.record_eq(
        "z2 * z3",
        &stuffle.to_string(),
        &"z2z3 + z3z2 + z5".to_string(),
    );
    let sh = quasi_shuffle(&xy("xy"), &xy("xxy"), &TrivialDiamond);
    c.record_eq(
        "xy ⧢ xxy",
        &sh.to_string(),
        &"xyxxy + 3*xxyxy + 6*xxxyy".to_string(),
    );
    let sh = Mode::Shuffle.product(&idx("2"), &idx("3"));
    c.record_eq(
        "z2 ⧢ z3",
        &sh.to_string(),
        &"z2z3 + 3*z3z2 + 6*z4z1".to_string(),
    );
    c
}

fn hopf_checks(max_weight: u32) -> Vec<Check> {
    let words = words_over(3, max_weight);
    let mut checks = vec![example_checks()];

    let mut coassoc = Check::exact("coassociativity of deconcatenation");
    let mut relation = Check::exact("antipode word relation");
    let mut closed = Check::exact("shuffle antipode recursion = (-1)^n reversal");
    for w in &words {
        coassoc.record_eq(w, &coassociativity(w), &true);
        relation.record_eq(w, &antipode_word_relation(w).is_zero(), &true);
        let xy = w.encode_xy();
        coassoc.record_eq(&xy, &coassociativity(&xy), &true);
        relation.record_eq(&xy, &antipode_word_relation(&xy).is_zero(), &true);
        closed.record_eq(w, &antipode(w, &TrivialDiamond), &antipode_shuffle(w));
        closed.record_eq(&xy, &antipode(&xy, &TrivialDiamond), &antipode_shuffle(&xy));
    }
    checks.extend([coassoc, relation, closed]);
    checks.extend(antipode_checks("stuffle", &words, &StuffleDiamond));
    checks.extend(antipode_checks("shuffle", &words, &TrivialDiamond));

    let mut closure = Check::exact("subspace closure (H^0, H^2 under *; H^0 under ⧢)");
    let mut witness = false;
    for u in &words {
        for v in &words {
            if u.weight() + v.weight() > max_weight + 1 {
                continue;
            }
            let lowest = u.subspace().max(v.subspace());
            let st = Mode::Stuffle.product(u, v).subspace();
            closure.record_eq(format_args!("{u} * {v}"), &st.is_within(lowest), &true);
            let sh = Mode::Shuffle.product(u, v).subspace();
            let sh_ok = sh.is_within(lowest.max(Subspace::H0));
            closure.record_eq(format_args!("{u} ⧢ {v}"), &sh_ok, &true);
            witness |= lowest == Subspace::H2 && sh != Subspace::H2;
        }
    }
    if max_weight >= 5 {
        closure.record_eq("H^2 not closed under ⧢", &witness, &true);
    }
    checks.push(closure);
    checks
}

fn random_word(rng: &mut ChaCha8Rng, max_weight: u32) -> Index {
    let weight = rng.gen_range(1..=max_weight);
    let mut entries = Vec::new();
    let mut left = weight;
    while left > 0 {
        let k = rng.gen_range(1..=left);
        entries.push(k);
        left -= k;
    }
    Index::new(entries).expect("positive entries")
}

/// `τ = (1 + 4i)/5`, the sample point for the truncated factorizations.
pub fn sample_tau() -> Complex64 {
    Complex64::new(0.2, 0.8)
}

fn trunc_checks(max_weight: u32, opts: &VerifyOptions) -> Vec<Check> {
    let tau = sample_tau();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut psi = Check::new("Ψ_N = ζ_N ⋆ C ⋆ ζ^-_N (relative)", 1e-12);
    let mut mes = Check::new("G_{M,N} = ĝ_{M,N} ⋆ ζ_N (relative)", 1e-12);
    let mut ghat = Check::new(
        "ĝ_{M,N}: iterated convolution = block sum (relative)",
        1e-12,
    );
    let mut refl = Check::new("ζ^-_N(k; x) = (-1)^|k| ζ_N(rev k; -x) (relative)", 1e-12);
    for _ in 0..opts.samples {
        let w = random_word(&mut rng, max_weight);
        let m = rng.gen_range(1..=8);
        let n = rng.gen_range(1..=8);
        let x = tau * rng.gen_range(1..=3) as f64 + rng.gen_range(-2.0..2.0);
        let case = format!("{w} M={m} N={n}");
        psi.record_result(
            &case,
            (|| {
                Ok(rel_dev(
                    multitangent_trunc(&w, x, n)?,
                    multitangent_conv(&w, x, n)?,
                ))
            })(),
        );
        mes.record_result(
            &case,
            (|| Ok(rel_dev(mes_trunc(&w, tau, m, n)?, mes_conv(&w, tau, m, n)?)))(),
        );
        ghat.record_result(
            &case,
            (|| {
                Ok(rel_dev(
                    ghat_trunc(&w, tau, m, n)?,
                    ghat_trunc_compositions(&w, tau, m, n)?,
                ))
            })(),
        );
        refl.record_result(
            &case,
            (|| {
                let sign = if w.weight().is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                Ok(rel_dev(
                    zeta_minus_trunc(&w, x, n)?,
                    hurwitz_trunc(&w.reversed(), -x, n)? * sign,
                ))
            })(),
        );
    }
    vec![psi, mes, ghat, refl]
}

/// Words of `H^2` with weight `2..=max_weight`.
pub fn h2_words(max_weight: u32) -> Vec<Index> {
    Index::all_up_to_weight(max_weight)
        .into_iter()
        .filter(|w| !w.is_empty() && w.subspace() == Subspace::H2)
        .collect()
}

fn reduction_checks(max_weight: u32, opts: &VerifyOptions) -> Vec<Check> {
    let tau = opts.ctx.tau;
    let mut value = Check::new("reduction vs extrapolated Ψ_N", 1e-6);
    let mut psi1 = Check::new("Ψ(1) coefficient vanishes", 1e-8);
    for k in h2_words(max_weight) {
        let red = match multitangent_reduce_raw(&k) {
            Ok(r) => r,
            Err(e) => {
                value.record_error(&k, &e);
                continue;
            }
        };
        psi1.record_result(&k, red.psi1.eval(&opts.cfg).map(|e| e.value.norm()));
        value.record_result(
            &k,
            (|| {
                let sym = red.eval(tau, &opts.cfg)?.value;
                let num = multitangent_trunc_extrapolated(&k, tau, opts.n_extrapolate)?.value;
                Ok((sym - num).norm())
            })(),
        );
    }
    vec![value, psi1]
}

fn tpoly_numeric_dev(a: &TPoly<MzvElem>, b: &TPoly<MzvElem>, cfg: &NumericConfig) -> Result<f64> {
    let n = a.coeffs().len().max(b.coeffs().len());
    let mut dev: f64 = 0.0;
    for j in 0..n {
        let d = &a.coeff(j) - &b.coeff(j);
        dev = dev.max(d.eval(cfg)?.value.norm());
    }
    Ok(dev)
}

fn reg_checks(max_weight: u32, opts: &VerifyOptions) -> Vec<Check> {
    let words: Vec<Index> = Index::all_up_to_weight(max_weight)
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();
    let mut rho = Check::new("ρ(ζ^*(w)) = ζ^⧢(w), coefficient-wise in T", 1e-6);
    let mut recon = Check::exact("w = Σ_j reg_j(w) • z_1^{•j}");
    let mut hom = Check::exact("ζ^* multiplicative on reg (symbolic)");
    for w in &words {
        rho.record_result(
            w,
            (|| {
                let st = rho_apply(&zeta_reg(w, Mode::Stuffle)?);
                let sh = zeta_reg(w, Mode::Shuffle)?;
                tpoly_numeric_dev(&st, &sh, &opts.cfg)
            })(),
        );
        for mode in [Mode::Stuffle, Mode::Shuffle] {
            match reg_decompose(w, mode) {
                Ok(p) => recon.record_eq(
                    format_args!("{w} ({mode})"),
                    &reconstruct(&p, mode),
                    &FreePoly::from_word(w.clone()),
                ),
                Err(e) => recon.record_error(w, &e),
            }
        }
    }
    for u in &words {
        for v in &words {
            if u.weight() + v.weight() > max_weight {
                continue;
            }
            let r: Result<bool> = (|| {
                let prod = crate::regularization::zeta_reg_poly(
                    &Mode::Stuffle.product(u, v),
                    Mode::Stuffle,
                )?;
                let sep = crate::ring::Ring::mul(
                    &zeta_reg(u, Mode::Stuffle)?,
                    &zeta_reg(v, Mode::Stuffle)?,
                );
                Ok(prod == sep)
            })();
            match r {
                Ok(b) => hom.record_eq(format_args!("{u} * {v}"), &b, &true),
                Err(e) => hom.record_error(format_args!("{u} * {v}"), &e),
            }
        }
    }
    vec![rho, recon, hom]
}

fn antipode_mzv_checks(max_weight: u32, opts: &VerifyOptions) -> Vec<Check> {
    let mut rel = Check::new("antipode relation among ζ^⧢ (k ≠ (1))", 1e-6);
    for k in Index::all_up_to_weight(max_weight) {
        if k.is_empty() || k == Index::single(1) {
            continue;
        }
        rel.record_result(
            &k,
            (|| {
                let p = mzv_antipode_relation(&k)?;
                tpoly_numeric_dev(&p, &TPoly::zero(), &opts.cfg)
            })(),
        );
    }
    vec![rel]
}

fn gstar_checks(max_weight: u32, opts: &VerifyOptions) -> Vec<Check> {
    let ctx = &opts.ctx;
    let words: Vec<Index> = Index::all_up_to_weight(max_weight)
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();
    let g = |w: &Index| mes_star(w, ctx).map(|e| e.value);
    let mut hom = Check::new("G^*(u * v) = G^*(u) G^*(v)", 1e-6);
    for u in &words {
        for v in &words {
            if u > v || u.weight() + v.weight() > max_weight {
                continue;
            }
            hom.record_result(
                format_args!("{u}, {v}"),
                (|| {
                    let lhs = g.eval_poly(&Mode::Stuffle.product(u, v))?;
                    Ok((lhs - g(u)? * g(v)?).norm())
                })(),
            );
        }
    }
    let mut h2 = Check::new("G^* = G on H^2 (vs extrapolated G_{M,N})", 1e-5);
    for k in h2_words(max_weight) {
        h2.record_result(
            &k,
            (|| {
                let a = g(&k)?;
                let b =
                    mes_trunc_extrapolated(&k, ctx.tau, opts.m_lattice, opts.n_extrapolate)?.value;
                Ok((a - b).norm())
            })(),
        );
    }
    vec![hom, h2]
}

/// Structural form of the expansion of `G(3,2)`.
pub const G32_STRUCTURE: &str = "ζ(3,2) + 3*ζ(3)*ĝ(2) + 2*ζ(2)*ĝ(3) + ĝ(3,2)";

fn fourier_checks(max_weight: u32, opts: &VerifyOptions) -> Vec<Check> {
    let ctx = &opts.ctx;
    let order = 30;
    let mut golden = Check::exact("G(3,2) structure");
    match fourier_expansion(&Index::from([3, 2]), order, &opts.cfg) {
        Ok(f) => golden.record_eq("(3,2)", &f.structured(), &G32_STRUCTURE.to_string()),
        Err(e) => golden.record_error("(3,2)", &e),
    }
    let mut lattice = Check::new("Fourier expansion vs extrapolated G_{M,N}", 1e-5);
    let mut star = Check::new("Fourier expansion vs G^*", 1e-6);
    for k in h2_words(max_weight) {
        let f = match fourier_expansion(&k, order, &opts.cfg) {
            Ok(f) => f,
            Err(e) => {
                lattice.record_error(&k, &e);
                continue;
            }
        };
        lattice.record_result(
            &k,
            (|| {
                let a = f.eval(ctx.tau, &opts.cfg)?.value;
                let b =
                    mes_trunc_extrapolated(&k, ctx.tau, opts.m_lattice, opts.n_extrapolate)?.value;
                Ok((a - b).norm())
            })(),
        );
        star.record_result(
            &k,
            (|| {
                let a = f.eval(ctx.tau, &opts.cfg)?.value;
                Ok((a - mes_star(&k, ctx)?.value).norm())
            })(),
        );
    }
    vec![golden, lattice, star]
}
