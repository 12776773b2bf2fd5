//! Truncated power series in `q`.

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mzv::{MzvElem, NumericConfig};
use crate::numeric::Estimate;
use crate::ring::Ring;

/// `c_0 + c_1 q + ... + c_N q^N` with `N = order`; nothing beyond `q^N` is
/// ever read or produced.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> QSeries<R> {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![R::zero(); order + 1],
        }
    }

    pub fn constant(c: R, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Takes `coeffs[n]` as the coefficient of `q^n`, padding or cutting to `order`.
    pub fn from_coeffs(mut coeffs: Vec<R>, order: usize) -> Self {
        coeffs.resize(order + 1, R::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &R {
        &self.coeffs[0]
    }

    pub fn set_coeff(&mut self, n: usize, c: R) {
        if n <= self.order() {
            self.coeffs[n] = c;
        }
    }

    /// Cuts to a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::InvalidArgument(format!(
                "q-series orders differ: {} vs {}",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale_by(&self, c: &R) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.scale(r)).collect(),
        }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
            }
        }
        Ok(out)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> QSeries<S> {
        QSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Result<S>) -> Result<QSeries<S>> {
        Ok(QSeries {
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

impl QSeries<Complex64> {
    /// `Σ c_n q^n` with a tail bound extrapolated from the highest
    /// coefficients, assuming polynomial growth of degree `growth`.
    pub fn eval(&self, q: Complex64, growth: u32) -> Estimate {
        let mut acc = crate::numeric::nested::CompensatedSum::new();
        let mut qn = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            acc.add(c * qn);
            qn *= q;
        }
        Estimate::new(acc.value(), self.tail_bound(q.norm(), growth))
    }

    fn tail_bound(&self, r: f64, growth: u32) -> f64 {
        let n = self.order();
        if r >= 1.0 {
            return f64::INFINITY;
        }
        // C = max |c_m| / m^growth over the upper half of the coefficients
        let mut scale: f64 = 0.0;
        for m in (n / 2).max(1)..=n {
            scale = scale.max(self.coeffs[m].norm() / (m as f64).powi(growth as i32));
        }
        let mut tail = 0.0;
        let mut rm = r.powi(n as i32 + 1);
        for m in n + 1..n + 1 + 10_000 {
            let t = scale * (m as f64).powi(growth as i32) * rm;
            tail += t;
            if t < 1e-30 * (1.0 + tail) {
                break;
            }
            rm *= r;
        }
        let mut rounding = 0.0;
        let mut rm = 1.0;
        for c in &self.coeffs {
            rounding += c.norm() * rm;
            rm *= r;
        }
        tail + 4.0 * f64::EPSILON * rounding
    }
}

/// Numeric value of a series with symbolic coefficients at `τ`.
pub fn qseries_eval(s: &QSeries<MzvElem>, tau: Complex64, cfg: &NumericConfig) -> Result<Estimate> {
    if tau.im.is_nan() || tau.im <= 0.0 {
        return Err(Error::InvalidArgument(
            "τ must lie in the upper half plane".into(),
        ));
    }
    let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau).exp();
    let mut coeff_err = 0.0;
    let numeric = s.try_map(|c| {
        let e = c.eval(cfg)?;
        Ok(e.value)
    })?;
    for c in s.coeffs() {
        coeff_err += c.eval(cfg)?.error;
    }
    let growth = s
        .coeffs()
        .iter()
        .flat_map(|c| c.weights())
        .max()
        .unwrap_or(0);
    let e = numeric.eval(q, growth);
    if e.error > cfg.tolerance {
        return Err(Error::Tolerance {
            what: format!("q-series tail at order {}", s.order()),
            tolerance: cfg.tolerance,
            estimate: e.error,
        });
    }
    Ok(Estimate::new(e.value, e.error + coeff_err))
}

/// JSON-facing view of a coefficient list.
#[derive(Serialize)]
pub struct QCoefficient<'a> {
    pub n: usize,
    pub coeff: &'a MzvElem,
}

impl QSeries<MzvElem> {
    pub fn json_coefficients(&self) -> Vec<QCoefficient<'_>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, coeff)| QCoefficient { n, coeff })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::rat;

    fn series(v: &[i64], order: usize) -> QSeries<BigRational> {
        QSeries::from_coeffs(v.iter().map(|&c| rat(c)).collect(), order)
    }

    #[test]
    fn truncated_product() {
        let a = series(&[1, 1], 3);
        let p = a.mul(&a).unwrap().mul(&a).unwrap().mul(&a).unwrap();
        assert_eq!(p, series(&[1, 4, 6, 4], 3));
    }

    #[test]
    fn truncation_commutes_with_products() {
        let a = series(&[1, 2, -1, 3, 5, 7], 5);
        let b = series(&[0, 1, 4, -2, 1, 1], 5);
        let full = a.mul(&b).unwrap().truncate(3);
        let cut = a.truncate(3).mul(&b.truncate(3)).unwrap();
        assert_eq!(full, cut);
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn constant_series_evaluates_to_itself() {
        let s = QSeries::constant(MzvElem::one(), 5);
        let cfg = NumericConfig::default();
        let v = qseries_eval(&s, Complex64::new(0.0, 1.0), &cfg).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_mismatched_orders() {
        assert!(series(&[1], 2).add(&series(&[1], 3)).is_err());
    }
}
