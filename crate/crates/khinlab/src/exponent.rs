use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An exponent in (0, ∞]. Values below 1 are allowed because several
/// operations work with quasi-norms.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Builds a finite exponent, rejecting values that are not strictly
    /// positive finite reals.
    pub fn new(value: f64) -> Result<Exponent> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::Domain(format!(
                "exponent must be a positive finite real, got {value}"
            )));
        }
        Ok(Exponent::Finite(value))
    }

    /// Parses either a positive real or the token `inf`.
    pub fn parse(text: &str) -> Result<Exponent> {
        text.parse()
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// The exponent as an f64, with `Infinity` mapped to `f64::INFINITY`.
    pub fn get(self) -> f64 {
        match self {
            Exponent::Finite(v) => v,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// Hölder conjugate: 1 ↔ ∞, 2 ↔ 2, otherwise p ↦ p/(p-1).
    /// Defined only for exponents ≥ 1.
    pub fn conjugate(self) -> Result<Exponent> {
        let p = match self {
            Exponent::Infinity => return Ok(Exponent::Finite(1.0)),
            Exponent::Finite(p) => p,
        };
        if p > 1.0 {
            Ok(Exponent::Finite(p / (p - 1.0)))
        } else if p == 1.0 {
            Ok(Exponent::Infinity)
        } else {
            Err(Error::Domain(format!(
                "conjugate exponent is defined for p >= 1, got {p}"
            )))
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Exponent> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::Infinity);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("invalid exponent: {s:?}")))?;
        Exponent::new(v)
    }
}
