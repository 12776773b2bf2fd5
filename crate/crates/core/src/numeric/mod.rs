//! Floating-point evaluation of truncated and regularized objects.

pub mod asymptotic;
pub mod extrapolate;
pub mod nested;
pub mod regularized;
pub mod trunc;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// A complex value with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: Complex64, error: f64) -> Self {
        Self { value, error }
    }

    pub fn exact(value: Complex64) -> Self {
        Self { value, error: 0.0 }
    }

    pub fn zero() -> Self {
        Self::exact(Complex64::new(0.0, 0.0))
    }

    pub fn add(&self, other: &Estimate) -> Estimate {
        Estimate::new(self.value + other.value, self.error + other.error)
    }

    pub fn mul(&self, other: &Estimate) -> Estimate {
        Estimate::new(
            self.value * other.value,
            self.error * other.value.norm()
                + other.error * self.value.norm()
                + self.error * other.error,
        )
    }

    pub fn scale(&self, c: Complex64) -> Estimate {
        Estimate::new(self.value * c, self.error * c.norm())
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}i (± {:.1e})",
            fmt_f64(self.value.re),
            if self.value.im < 0.0 { "-" } else { "+" },
            fmt_f64(self.value.im.abs()),
            self.error
        )
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.15e}")
}

impl Serialize for Estimate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Estimate", 3)?;
        st.serialize_field("value_re", &self.value.re)?;
        st.serialize_field("value_im", &self.value.im)?;
        st.serialize_field("error_estimate", &self.error)?;
        st.end()
    }
}

/// How the outer limit `M → ∞` is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitPolicy {
    /// Use exactly the configured `m`.
    Fixed,
    /// Grow `m` until successive values agree to the tolerance.
    Adaptive,
}

impl std::str::FromStr for LimitPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fixed" => Ok(LimitPolicy::Fixed),
            "adaptive" => Ok(LimitPolicy::Adaptive),
            other => Err(Error::Parse(format!("unknown limit policy '{other}'"))),
        }
    }
}

/// Parameters shared by every numeric evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalContext {
    #[serde(serialize_with = "ser_complex")]
    pub tau: Complex64,
    /// Inner truncation `N` for truncated objects.
    pub n: usize,
    /// Outer truncation `M` (starting value under the adaptive policy).
    pub m: usize,
    pub tolerance: f64,
    /// Value substituted for `T` in regularized multiple zeta values.
    #[serde(serialize_with = "ser_complex")]
    pub t_value: Complex64,
    pub policy: LimitPolicy,
    /// Largest `M` tried by the adaptive policy.
    pub m_budget: usize,
}

fn ser_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &c.re)?;
    st.serialize_field("im", &c.im)?;
    st.end()
}

impl Default for EvalContext {
    fn default() -> Self {
        Self {
            tau: Complex64::new(0.0, 1.0),
            n: 1000,
            m: 20,
            tolerance: 1e-8,
            t_value: Complex64::new(0.0, 0.0),
            policy: LimitPolicy::Adaptive,
            m_budget: 400,
        }
    }
}

impl EvalContext {
    pub fn with_tau(tau: Complex64) -> Self {
        Self {
            tau,
            ..Self::default()
        }
    }

    /// Checks that the parameters describe a well-posed evaluation.
    pub fn validate(&self) -> Result<()> {
        if self.tau.im.is_nan()
            || self.tau.im <= 0.0
            || !self.tau.re.is_finite()
            || !self.tau.im.is_finite()
        {
            return Err(Error::InvalidArgument(format!(
                "tau must lie in the upper half plane, got {}",
                self.tau
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidArgument("M must be positive".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 || self.tolerance.is_infinite() {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !self.t_value.re.is_finite() || !self.t_value.im.is_finite() {
            return Err(Error::InvalidArgument("T value must be finite".into()));
        }
        if self.m_budget < self.m {
            return Err(Error::InvalidArgument(format!(
                "M budget {} is below M = {}",
                self.m_budget, self.m
            )));
        }
        Ok(())
    }

    /// `q = e^{2πiτ}`.
    pub fn q(&self) -> Complex64 {
        (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * self.tau).exp()
    }
}

/// Parses `a+bi`, `a-bi`, `bi`, `i`, or a plain real number.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse(format!("cannot parse complex number '{s}'"));
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix(['i', 'I']) else {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| err());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let parse_im = |p: &str| -> Result<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| err()),
        }
    };
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| err())?;
            Ok(Complex64::new(re, parse_im(&body[i..])?))
        }
        None => Ok(Complex64::new(0.0, parse_im(body)?)),
    }
}
