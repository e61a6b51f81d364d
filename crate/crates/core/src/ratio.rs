//! Exact rationals for guarantees and achieved ratios.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

/// An approximation guarantee, always kept exact.
pub type Alpha = Ratio<u64>;

/// Serializes an [`Alpha`] as `"num/den"`.
pub fn serialize_alpha<S: Serializer>(a: &Alpha, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", a.numer(), a.denom()))
}

pub fn alpha_decimal(a: &Alpha) -> f64 {
    *a.numer() as f64 / *a.denom() as f64
}

/// Achieved score ratio of a mechanism against an optimum.
///
/// Exact when both scores are integral; an empty optimum counts as ratio 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScoreRatio {
    Exact(Ratio<u128>),
    Approx(f64),
}

impl ScoreRatio {
    pub fn new(score: f64, opt: f64) -> Self {
        if opt == 0.0 {
            return ScoreRatio::Exact(Ratio::from_integer(1));
        }
        match (as_exact(score), as_exact(opt)) {
            (Some(s), Some(o)) => ScoreRatio::Exact(Ratio::new(s, o)),
            _ => ScoreRatio::Approx(score / opt),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ScoreRatio::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            ScoreRatio::Approx(v) => *v,
        }
    }

    /// `self ≥ alpha`, compared exactly when possible.
    pub fn at_least(&self, alpha: &Alpha) -> bool {
        match self {
            ScoreRatio::Exact(r) => {
                r.numer() * u128::from(*alpha.denom()) >= u128::from(*alpha.numer()) * r.denom()
            }
            ScoreRatio::Approx(v) => *v * *alpha.denom() as f64 >= *alpha.numer() as f64,
        }
    }

    pub fn equals(&self, alpha: &Alpha) -> bool {
        match self {
            ScoreRatio::Exact(r) => {
                *r == Ratio::new(u128::from(*alpha.numer()), u128::from(*alpha.denom()))
            }
            ScoreRatio::Approx(v) => *v == alpha_decimal(alpha),
        }
    }
}

impl fmt::Display for ScoreRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreRatio::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ScoreRatio::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for ScoreRatio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn as_exact(x: f64) -> Option<u128> {
    (x >= 0.0 && x.fract() == 0.0 && x < 9.0e15).then_some(x as u128)
}
