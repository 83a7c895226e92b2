//! Tropical and log semirings over negative-log weights.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Which semiring a weight (or a whole machine) lives in.
///
/// Both semirings store costs as negative natural-log probabilities, so
/// `times` is ordinary addition and `zero` is `+inf` in each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semiring {
    /// `(min, +, +inf, 0)`
    Tropical,
    /// `(-ln(e^-a + e^-b), +, +inf, 0)`
    Log,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemiringError {
    #[error("semiring mismatch: {0} vs {1}")]
    Mismatch(Semiring, Semiring),
    #[error("unknown semiring `{0}`")]
    Unknown(String),
}

impl Semiring {
    #[inline]
    pub fn zero(self) -> f64 {
        f64::INFINITY
    }

    #[inline]
    pub fn one(self) -> f64 {
        0.0
    }

    #[inline]
    pub fn plus(self, a: f64, b: f64) -> f64 {
        match self {
            Semiring::Tropical => a.min(b),
            Semiring::Log => neg_log_sum_exp(a, b),
        }
    }

    #[inline]
    pub fn times(self, a: f64, b: f64) -> f64 {
        // inf + -inf never occurs: weights are costs in (-inf, +inf].
        a + b
    }

    pub fn name(self) -> &'static str {
        match self {
            Semiring::Tropical => "tropical",
            Semiring::Log => "log",
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semiring {
    type Err = SemiringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tropical" => Ok(Semiring::Tropical),
            "log" => Ok(Semiring::Log),
            other => Err(SemiringError::Unknown(other.to_string())),
        }
    }
}

/// `-ln(e^-a + e^-b)` in the max-factored form.
#[inline]
pub fn neg_log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::INFINITY {
        return b;
    }
    if b == f64::INFINITY {
        return a;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    lo - (-(hi - lo)).exp().ln_1p()
}

/// Natural-log `ln(e^a + e^b)`, the probability-domain counterpart used by
/// the CTC recursions.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    -neg_log_sum_exp(-a, -b)
}

/// A weight tagged with its semiring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weight {
    pub value: f64,
    pub semiring: Semiring,
}

impl Weight {
    pub fn new(value: f64, semiring: Semiring) -> Self {
        Weight { value, semiring }
    }

    pub fn zero(semiring: Semiring) -> Self {
        Weight::new(semiring.zero(), semiring)
    }

    pub fn one(semiring: Semiring) -> Self {
        Weight::new(semiring.one(), semiring)
    }

    pub fn is_zero(&self) -> bool {
        self.value == f64::INFINITY
    }

    pub fn plus(self, other: Weight) -> Result<Weight, SemiringError> {
        self.check(other)?;
        Ok(Weight::new(self.semiring.plus(self.value, other.value), self.semiring))
    }

    pub fn times(self, other: Weight) -> Result<Weight, SemiringError> {
        self.check(other)?;
        Ok(Weight::new(self.semiring.times(self.value, other.value), self.semiring))
    }

    fn check(self, other: Weight) -> Result<(), SemiringError> {
        if self.semiring != other.semiring {
            return Err(SemiringError::Mismatch(self.semiring, other.semiring));
        }
        Ok(())
    }
}

/// Free-function form of `⊕`.
pub fn semiring_plus(a: Weight, b: Weight) -> Result<Weight, SemiringError> {
    a.plus(b)
}

/// Free-function form of `⊗`.
pub fn semiring_times(a: Weight, b: Weight) -> Result<Weight, SemiringError> {
    a.times(b)
}
