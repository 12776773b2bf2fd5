//! Regularized objects: `ζ^*(-; x)`, `Ψ^*`, `ĝ^*` and `G^*`.

use num_complex::Complex64;

use super::asymptotic::{harmonic_reg, multiple_hurwitz};
use super::{Estimate, EvalContext, LimitPolicy};
use crate::error::{Error, Result};
use crate::hopf::Mode;
use crate::mzv::NumericConfig;
use crate::regularization::{reg_decompose, zeta_reg};
use crate::ring::Ring;
use crate::word::{FreePoly, Index, Word};

fn one() -> Estimate {
    Estimate::exact(Complex64::new(1.0, 0.0))
}

fn eval_h0(
    p: &FreePoly<Index>,
    f: &mut impl FnMut(&Index) -> Result<Estimate>,
) -> Result<Estimate> {
    let mut acc = Estimate::zero();
    for (w, c) in p.terms() {
        acc = acc.add(&f(w)?.scale(Complex64::from_rational(c)));
    }
    Ok(acc)
}

/// Evaluates the stuffle lift `Σ_j f(c_j(w)) t^j` of a map `f` on `H^0`.
fn lift_numeric(
    w: &Index,
    t: Estimate,
    mut f: impl FnMut(&Index) -> Result<Estimate>,
) -> Result<Estimate> {
    let p = reg_decompose(w, Mode::Stuffle)?;
    let mut acc = Estimate::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&t).add(&eval_h0(c, &mut f)?);
    }
    Ok(acc)
}

/// `ζ^*(k; x)`: the limit of `ζ_N(k; x)` on admissible words, extended to
/// `H^1` by `ζ^*(1; x) = Σ_{n>0} (1/(n+x) - 1/n)`.
pub fn hurwitz_reg(k: &Index, x: Complex64) -> Result<Estimate> {
    if k.is_admissible() {
        return multiple_hurwitz(k.entries(), x);
    }
    let t = harmonic_reg(x)?;
    lift_numeric(k, t, |u| multiple_hurwitz(u.entries(), x))
}

/// `ζ^{-,*}(k; x) = (-1)^{|k|} ζ^*(k_r, ..., k_1; -x)`.
pub fn zeta_minus_reg(k: &Index, x: Complex64) -> Result<Estimate> {
    let v = hurwitz_reg(&k.reversed(), -x)?;
    Ok(if k.weight().is_multiple_of(2) {
        v
    } else {
        v.scale(Complex64::new(-1.0, 0.0))
    })
}

/// `Ψ^*(w[s..t]; x)` for all `0 ≤ s ≤ t ≤ len(w)`, indexed `[s][t]`.
pub fn multitangent_reg_table(w: &Index, x: Complex64) -> Result<Vec<Vec<Estimate>>> {
    let n = w.len();
    if x.norm() < super::nested::POLE_EPS {
        return Err(Error::Pole("Ψ^* at x = 0".into()));
    }
    let mut plus = vec![vec![Estimate::zero(); n + 1]; n + 1];
    let mut minus = vec![vec![Estimate::zero(); n + 1]; n + 1];
    for s in 0..=n {
        for t in s..=n {
            let sub = w.sub_word(s, t);
            plus[s][t] = hurwitz_reg(&sub, x)?;
            minus[s][t] = zeta_minus_reg(&sub, x)?;
        }
    }
    let inv_pow: Vec<Complex64> = w.entries().iter().map(|&k| x.powi(-(k as i32))).collect();
    let mut table = vec![vec![Estimate::zero(); n + 1]; n + 1];
    for s in 0..=n {
        for t in s..=n {
            let mut acc = Estimate::zero();
            for a in s..=t {
                acc = acc.add(&plus[s][a].mul(&minus[a][t]));
                if a < t {
                    acc = acc.add(&plus[s][a].mul(&minus[a + 1][t]).scale(inv_pow[a]));
                }
            }
            table[s][t] = acc;
        }
    }
    Ok(table)
}

/// `Ψ^* = ζ^* ⋆ C ⋆ ζ^{-,*}` at `x`.
pub fn multitangent_reg(w: &Index, x: Complex64) -> Result<Estimate> {
    Ok(multitangent_reg_table(w, x)?[0][w.len()])
}

/// `ĝ^*(z_1; τ) = -2πi Σ_{m,n ≥ 1} q^{mn}`.
pub fn ghat_one(tau: Complex64) -> Result<Estimate> {
    if tau.im.is_nan() || tau.im <= 0.0 {
        return Err(Error::InvalidArgument(
            "τ must have positive imaginary part".into(),
        ));
    }
    let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau).exp();
    let mut acc = super::nested::CompensatedSum::new();
    let mut qm = q;
    let mut m = 1u64;
    loop {
        let term = qm / (Complex64::new(1.0, 0.0) - qm);
        acc.add(term);
        if term.norm() < 1e-18 || m > 1_000_000 {
            break;
        }
        qm *= q;
        m += 1;
    }
    let e = Complex64::new(0.0, -2.0 * std::f64::consts::PI);
    let v = acc.value() * e;
    Ok(Estimate::new(
        v,
        1e-15 * (1.0 + v.norm()) + 1e-17 * m as f64,
    ))
}

/// `ĝ^*(w; τ) = lim_M ĝ^*_M(w; τ)` for `w ∈ H^0`.
fn gstar_h0(w: &Index, ctx: &EvalContext) -> Result<Estimate> {
    let n = w.len();
    let mut v = vec![Estimate::zero(); n + 1];
    v[n] = one();
    if n == 0 {
        return Ok(one());
    }
    let mut quiet = 0;
    let mut last_delta;
    let mut m = 1usize;
    loop {
        // v holds ĝ^*_m on the suffixes of w; fold in the factor Ψ^*(-; mτ)
        let table = multitangent_reg_table(w, ctx.tau * m as f64)?;
        let mut next = vec![Estimate::zero(); n + 1];
        for s in 0..=n {
            let mut acc = Estimate::zero();
            for t in s..=n {
                acc = acc.add(&table[s][t].mul(&v[t]));
            }
            next[s] = acc;
        }
        last_delta = (next[0].value - v[0].value).norm();
        v = next;
        m += 1;
        match ctx.policy {
            LimitPolicy::Fixed => {
                if m >= ctx.m {
                    break;
                }
            }
            LimitPolicy::Adaptive => {
                if m >= ctx.m && last_delta <= 0.01 * ctx.tolerance {
                    quiet += 1;
                    if quiet >= 2 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                if m >= ctx.m_budget {
                    return Err(Error::NonConvergence(format!(
                        "ĝ^*({w}) not stable up to M = {m} (last change {last_delta:e})"
                    )));
                }
            }
        }
    }
    let err = v[0].error + last_delta;
    Ok(Estimate::new(v[0].value, err))
}

/// `ĝ^*(w; τ)` on `H^1`: the limit in `M` on `H^0`, lifted with
/// `T ↦ ĝ^*(z_1; τ)` elsewhere.
pub fn gstar_numeric(w: &Index, ctx: &EvalContext) -> Result<Estimate> {
    ctx.validate()?;
    if w.is_admissible() {
        return gstar_h0(w, ctx);
    }
    let t = ghat_one(ctx.tau)?;
    lift_numeric(w, t, |u| gstar_h0(u, ctx))
}

/// `ĝ^*_M(w; τ)` for a fixed `M` on `H^0`, or with the lift elsewhere.
pub fn gstar_fixed(w: &Index, ctx: &EvalContext, m: usize) -> Result<Estimate> {
    let fixed = EvalContext {
        m,
        m_budget: ctx.m_budget.max(m),
        policy: LimitPolicy::Fixed,
        ..ctx.clone()
    };
    gstar_numeric(w, &fixed)
}

/// Stuffle-regularized multiple zeta value `ζ^*(w)` with `T = t`.
pub fn zeta_star_at(w: &Index, t: Complex64, cfg: &NumericConfig) -> Result<Estimate> {
    let p = zeta_reg(w, Mode::Stuffle)?;
    let mut acc = Estimate::zero();
    let t = Estimate::exact(t);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&t).add(&c.eval(cfg)?);
    }
    Ok(acc)
}

/// `G^* = ĝ^* ⋆ ζ^*` with `T` specialised to `ctx.t_value`.
pub fn mes_star(w: &Index, ctx: &EvalContext) -> Result<Estimate> {
    ctx.validate()?;
    let cfg = NumericConfig::with_tolerance(ctx.tolerance);
    let mut acc = Estimate::zero();
    for s in 0..=w.len() {
        let (u, v) = (w.sub_word(0, s), w.sub_word(s, w.len()));
        let g = gstar_numeric(&u, ctx)?;
        let z = zeta_star_at(&v, ctx.t_value, &cfg)?;
        acc = acc.add(&g.mul(&z));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::trunc::{hurwitz_trunc, multitangent_trunc_extrapolated};

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    fn i() -> Complex64 {
        Complex64::new(0.0, 1.0)
    }

    #[test]
    fn regularized_hurwitz_values() {
        let v = hurwitz_reg(&idx("z1"), Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.value + 1.0).norm() < 1e-13);
        let a = hurwitz_reg(&idx("2"), i()).unwrap().value;
        let b = hurwitz_trunc(&idx("2"), i(), 200_000).unwrap();
        // ζ_N(2; x) misses about 1/N
        assert!((a - b).norm() < 1e-5 * 1.01 && (a - b).norm() > 1e-6);
    }

    #[test]
    fn regularized_hurwitz_is_stuffle_multiplicative() {
        let x = Complex64::new(0.3, 0.9);
        let words = Index::all_up_to_weight(2);
        for u in &words {
            for v in &words {
                let prod = Mode::Stuffle.product(u, v);
                let mut lhs = Complex64::new(0.0, 0.0);
                for (w, c) in prod.terms() {
                    lhs += hurwitz_reg(w, x).unwrap().value * Complex64::from_rational(c);
                }
                let rhs = hurwitz_reg(u, x).unwrap().value * hurwitz_reg(v, x).unwrap().value;
                assert!((lhs - rhs).norm() < 1e-10, "{u} * {v}");
            }
        }
    }

    #[test]
    fn monotangent_one_is_cotangent() {
        let x = Complex64::new(0.25, 0.6);
        let v = multitangent_reg(&idx("z1"), x).unwrap().value;
        let pi = std::f64::consts::PI;
        let cot = (pi * x).cos() / (pi * x).sin() * pi;
        assert!((v - cot).norm() < 1e-12);
    }

    #[test]
    fn regularized_multitangent_matches_truncation_on_h2() {
        let x = Complex64::new(0.1, 0.8);
        let a = multitangent_reg(&idx("2,3"), x).unwrap().value;
        let b = multitangent_trunc_extrapolated(&idx("2,3"), x, 4096)
            .unwrap()
            .value;
        assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        assert_eq!(
            multitangent_reg(&Index::empty(), x).unwrap().value,
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn ghat_one_is_the_lifted_value() {
        let ctx = EvalContext::default();
        let a = gstar_numeric(&idx("z1"), &ctx).unwrap().value;
        let b = ghat_one(i()).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn gstar_of_h0_word_stabilizes() {
        let ctx = EvalContext::default();
        let v = gstar_numeric(&idx("2,1"), &ctx).unwrap();
        assert!(v.error < 1e-8);
        let w = gstar_fixed(&idx("2,1"), &ctx, 30).unwrap();
        assert!((v.value - w.value).norm() < 1e-10);
    }

    #[test]
    fn mes_star_unit() {
        let ctx = EvalContext::default();
        assert_eq!(
            mes_star(&Index::empty(), &ctx).unwrap().value,
            Complex64::new(1.0, 0.0)
        );
    }
}
