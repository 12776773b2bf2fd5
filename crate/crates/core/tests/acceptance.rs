//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mzv_hopf::hopf::{quasi_shuffle, LinearMap, TrivialDiamond};
use mzv_hopf::mzv::mzv_value;
use mzv_hopf::numeric::regularized::mes_star;
use mzv_hopf::numeric::trunc::{
    mes_conv, mes_trunc, mes_trunc_extrapolated, multitangent_conv, multitangent_trunc,
    multitangent_trunc_extrapolated,
};
use mzv_hopf::qexp::{fourier_expansion, g_series_f64, multitangent_reduce_raw};
use mzv_hopf::regularization::{mzv_antipode_relation, rho_apply, zeta_reg};
use mzv_hopf::verify::{run_suite, Suite, VerifyOptions};
use mzv_hopf::word::rat;
use mzv_hopf::{EvalContext, FreePoly, Index, Mode, MzvElem, NumericConfig, Subspace, XyWord};

struct Outcome {
    passed: bool,
    detail: String,
}

fn idx(s: &str) -> Index {
    s.parse().unwrap()
}

fn poly<W: mzv_hopf::word::Word>(terms: &[(W, i64)]) -> FreePoly<W> {
    let mut p = FreePoly::zero();
    for (w, c) in terms {
        p.add_term(w.clone(), rat(*c));
    }
    p
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn h2_words(max_weight: u32) -> Vec<Index> {
    Index::all_up_to_weight(max_weight)
        .into_iter()
        .filter(|w| w.depth() > 0 && w.subspace() == Subspace::H2)
        .collect()
}

fn nonempty_words(max_weight: u32) -> Vec<Index> {
    Index::all_up_to_weight(max_weight)
        .into_iter()
        .filter(|w| w.depth() > 0)
        .collect()
}

fn examples() -> Outcome {
    let start = Instant::now();
    let x = |s: &str| s.parse::<XyWord>().unwrap();
    let stuffle = Mode::Stuffle.product(&idx("2"), &idx("3"));
    let stuffle_ok = stuffle == poly(&[(idx("2,3"), 1), (idx("3,2"), 1), (idx("5"), 1)]);
    let xy = quasi_shuffle(&x("xy"), &x("xxy"), &TrivialDiamond);
    let xy_ok = xy == poly(&[(x("xyxxy"), 1), (x("xxyxy"), 3), (x("xxxyy"), 6)]);
    let sh = Mode::Shuffle.product(&idx("2"), &idx("3"));
    let sh_ok = sh == poly(&[(idx("2,3"), 1), (idx("3,2"), 3), (idx("4,1"), 6)]);
    let elapsed = start.elapsed();
    Outcome {
        passed: stuffle_ok && xy_ok && sh_ok && elapsed < Duration::from_secs(1),
        detail: format!(
            "z2*z3 = {stuffle} [{}]; xy⧢xxy = {xy} [{}]; z2⧢z3 = {sh} [{}]; {:.1} ms (limit 1 s)",
            ok(stuffle_ok),
            ok(xy_ok),
            ok(sh_ok),
            elapsed.as_secs_f64() * 1e3
        ),
    }
}

fn hopf_suite() -> Outcome {
    let start = Instant::now();
    let opts = VerifyOptions {
        max_weight: Some(5),
        ..Default::default()
    };
    let report = run_suite(Suite::Hopf, &opts).expect("suite runs");
    let elapsed = start.elapsed();
    let cases: usize = report.checks.iter().map(|c| c.cases).sum();
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    Outcome {
        passed: report.passed() && elapsed < Duration::from_secs(60),
        detail: format!(
            "{} checks, {cases} exact cases over letters z1..z3, weight ≤ 5, stuffle and shuffle; failed: {:?}; {:.2} s (limit 60 s)",
            report.checks.len(),
            failed,
            elapsed.as_secs_f64()
        ),
    }
}

fn random_word(rng: &mut ChaCha8Rng) -> Index {
    let weight = rng.gen_range(1..=6u32);
    let mut entries = Vec::new();
    let mut left = weight;
    while left > 0 {
        let k = rng.gen_range(1..=left);
        entries.push(k);
        left -= k;
    }
    Index::new(entries).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

fn factorizations() -> Outcome {
    let start = Instant::now();
    let tau = Complex64::new(1.0, 4.0) / 5.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut psi_max, mut mes_max) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let w = random_word(&mut rng);
        let m = rng.gen_range(1..=8);
        let n = rng.gen_range(1..=8);
        psi_max = psi_max.max(rel(
            multitangent_trunc(&w, tau, n).unwrap(),
            multitangent_conv(&w, tau, n).unwrap(),
        ));
        mes_max = mes_max.max(rel(
            mes_trunc(&w, tau, m, n).unwrap(),
            mes_conv(&w, tau, m, n).unwrap(),
        ));
    }
    let elapsed = start.elapsed();
    Outcome {
        passed: psi_max <= 1e-12 && mes_max <= 1e-12 && elapsed < Duration::from_secs(60),
        detail: format!(
            "50 random words, τ = (1+4i)/5: max rel. dev. Ψ_N {psi_max:.2e}, G_(M,N) {mes_max:.2e} (limit 1e-12); {:.2} s",
            elapsed.as_secs_f64()
        ),
    }
}

fn g32_golden() -> Outcome {
    let cfg = NumericConfig::default();
    let f = fourier_expansion(&idx("3,2"), 30, &cfg).unwrap();
    let alpha = |z: &str, g: &str| {
        f.middle
            .iter()
            .find(|m| m.zeta_index == idx(z) && m.g_index == idx(g))
            .map(|m| m.alpha.clone())
    };
    let structure_ok = f.zeta_term == MzvElem::zeta(&idx("3,2")).unwrap()
        && f.middle.len() == 2
        && alpha("3", "2") == Some(BigInt::from(3))
        && alpha("2", "3") == Some(BigInt::from(2))
        && f.g_term == BigInt::from(1);
    let value = f.eval(i(), &cfg).unwrap().value;
    let raw = mes_trunc(&idx("3,2"), i(), 40, 10_000).unwrap();
    let ext = mes_trunc_extrapolated(&idx("3,2"), i(), 40, 10_000).unwrap();
    let raw_dev = (value - raw).norm();
    let ext_dev = (value - ext.value).norm();
    Outcome {
        passed: structure_ok && ext_dev <= 1e-5,
        detail: format!(
            "{} [{}]; |G - G_(40,N)| at τ = i, N_max = 30: extrapolated from N = 10^4 {ext_dev:.2e} (limit 1e-5), raw N = 10^4 {raw_dev:.2e}",
            f.structured(),
            ok(structure_ok)
        ),
    }
}

fn reduction() -> Outcome {
    let cfg = NumericConfig::default();
    let (mut raw_max, mut ext_max, mut psi1_max) = (0.0f64, 0.0f64, 0.0f64);
    let words = h2_words(6);
    for k in &words {
        let red = multitangent_reduce_raw(k).unwrap();
        psi1_max = psi1_max.max(red.psi1.eval(&cfg).unwrap().value.norm());
        let sym = red.eval(i(), &cfg).unwrap().value;
        raw_max = raw_max.max((sym - multitangent_trunc(k, i(), 10_000).unwrap()).norm());
        ext_max = ext_max.max(
            (sym - multitangent_trunc_extrapolated(k, i(), 10_000)
                .unwrap()
                .value)
                .norm(),
        );
    }
    Outcome {
        passed: ext_max <= 1e-6 && psi1_max <= 1e-8,
        detail: format!(
            "{} words of H^2, weight ≤ 6, τ = i: max |reduced - Ψ_N| extrapolated from N = 10^4 {ext_max:.2e} (limit 1e-6), raw N = 10^4 {raw_max:.2e}; max |Ψ(1) coeff.| {psi1_max:.1e} (limit 1e-8)",
            words.len()
        ),
    }
}

fn regularization() -> Outcome {
    let cfg = NumericConfig::default();
    let coeff_dev = |a: &mzv_hopf::TPoly<MzvElem>, b: &mzv_hopf::TPoly<MzvElem>| {
        let n = a.coeffs().len().max(b.coeffs().len());
        (0..n)
            .map(|j| (&a.coeff(j) - &b.coeff(j)).eval(&cfg).unwrap().value.norm())
            .fold(0.0f64, f64::max)
    };
    let words = nonempty_words(4);
    let mut rho_max = 0.0f64;
    for w in &words {
        let st = rho_apply(&zeta_reg(w, Mode::Stuffle).unwrap());
        let sh = zeta_reg(w, Mode::Shuffle).unwrap();
        rho_max = rho_max.max(coeff_dev(&st, &sh));
    }
    let mut rel_max = 0.0f64;
    let mut count = 0;
    for k in nonempty_words(5) {
        if k == Index::single(1) {
            continue;
        }
        count += 1;
        rel_max = rel_max.max(coeff_dev(
            &mzv_antipode_relation(&k).unwrap(),
            &mzv_hopf::TPoly::zero(),
        ));
    }
    let degenerate = mzv_antipode_relation(&Index::single(1)).unwrap();
    Outcome {
        passed: rho_max <= 1e-6 && rel_max <= 1e-6,
        detail: format!(
            "ρ∘ζ* vs ζ^⧢ on {} words of weight ≤ 4: {rho_max:.2e} (limit 1e-6); antipode relation on {count} indices of weight 2..5: {rel_max:.2e} (limit 1e-6); k = (1) has an empty underlying word and gives {degenerate}",
            words.len()
        ),
    }
}

fn gstar() -> Outcome {
    let ctx = EvalContext::with_tau(i());
    let cfg = NumericConfig::default();
    let g = |w: &Index| mes_star(w, &ctx).map(|e| e.value);
    let words = nonempty_words(5);
    let mut hom_max = 0.0f64;
    let mut pairs = 0;
    for u in &words {
        for v in &words {
            if u > v || u.weight() + v.weight() > 5 {
                continue;
            }
            pairs += 1;
            let lhs = g.eval_poly(&Mode::Stuffle.product(u, v)).unwrap();
            hom_max = hom_max.max((lhs - g(u).unwrap() * g(v).unwrap()).norm());
        }
    }
    let (mut four_max, mut lattice_max) = (0.0f64, 0.0f64);
    let h2 = h2_words(5);
    for k in &h2 {
        let star = g(k).unwrap();
        let four = fourier_expansion(k, 30, &cfg)
            .unwrap()
            .eval(i(), &cfg)
            .unwrap()
            .value;
        let lattice = mes_trunc_extrapolated(k, i(), 40, 10_000).unwrap().value;
        four_max = four_max.max((star - four).norm());
        lattice_max = lattice_max.max((star - lattice).norm());
    }
    let z1 = g(&idx("z1")).unwrap();
    Outcome {
        passed: hom_max <= 1e-6 && four_max <= 1e-5 && lattice_max <= 1e-5,
        detail: format!(
            "{pairs} pairs of combined weight ≤ 5 at τ = i (G*(z1) = {z1:.6}): {hom_max:.2e} (limit 1e-6); G* vs G on {} words of H^2: Fourier {four_max:.2e}, extrapolated G_(40,N) {lattice_max:.2e} (limit 1e-5)",
            h2.len()
        ),
    }
}

fn q_analogue() -> Outcome {
    let cfg = NumericConfig::default();
    let q = 0.995f64;
    let scaled = |k: &Index| {
        let c = g_series_f64(k, 5000);
        let mut acc = 0.0;
        let mut qn = 1.0;
        for cn in &c {
            acc += cn * qn;
            qn *= q;
        }
        (1.0 - q).powi(k.weight() as i32) * acc
    };
    let z2 = mzv_value(&idx("2"), &cfg).unwrap().value.re;
    let z32 = mzv_value(&idx("3,2"), &cfg).unwrap().value.re;
    let (a, b) = (scaled(&idx("2")), scaled(&idx("3,2")));
    let (ra, rb) = ((a - z2).abs() / z2, (b - z32).abs() / z32);
    Outcome {
        passed: ra <= 0.05 && rb <= 0.05,
        detail: format!(
            "q = 0.995, N_max = 5000: (1-q)^2 g(2) = {a:.6} vs ζ(2) = {z2:.6} ({:.2}%), (1-q)^5 g(3,2) = {b:.6} vs ζ(3,2) = {z32:.6} ({:.2}%) (limit 5%)",
            100.0 * ra,
            100.0 * rb
        ),
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISMATCH"
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("worked product examples", examples),
        ("Hopf suite", hopf_suite),
        ("finite-sum factorizations", factorizations),
        ("G(3,2) golden test", g32_golden),
        ("multitangent reduction", reduction),
        ("regularization comparison", regularization),
        ("stuffle homomorphism of G*", gstar),
        ("q-analogue smoke test", q_analogue),
    ];
    let mut all = true;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let out = f();
        all &= out.passed;
        println!(
            "criterion {} {} {name}: {}",
            n + 1,
            if out.passed { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
