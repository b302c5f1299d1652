//! Values in `[0, ∞]`.
//!
//! [`ExtendedWeight`] is the codomain of weight functions, path metrics and
//! resistance tables. It wraps an `f64` that is never negative and never NaN,
//! which makes the usual float ordering total and lets `+∞` absorb addition.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ExtendedWeight(f64);

impl ExtendedWeight {
    pub const ZERO: Self = Self(0.0);
    pub const INFINITY: Self = Self(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidWeight(value));
        }
        // -0.0 compares equal to 0.0 but prints differently
        Ok(Self(if value == 0.0 { 0.0 } else { value }))
    }

    /// Panics on negative or NaN input. For values already known to be valid.
    pub fn from_f64(value: f64) -> Self {
        Self::new(value).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        !self.0.is_finite()
    }

    pub fn finite(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    /// Equality with relative tolerance on finite values; infinities match only each other.
    pub fn approx_eq(self, other: Self, rel_tol: f64) -> bool {
        match (self.finite(), other.finite()) {
            (Some(a), Some(b)) => approx_eq_f64(a, b, rel_tol),
            (None, None) => true,
            _ => false,
        }
    }
}

/// `|a - b| <= tol * max(|a|, |b|)`; exact comparison when `tol == 0`.
pub fn approx_eq_f64(a: f64, b: f64, rel_tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= rel_tol * a.abs().max(b.abs())
}

impl Eq for ExtendedWeight {}

impl PartialOrd for ExtendedWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("ExtendedWeight is never NaN")
    }
}

impl Add for ExtendedWeight {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl std::iter::Sum for ExtendedWeight {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl From<ExtendedWeight> for f64 {
    fn from(w: ExtendedWeight) -> f64 {
        w.0
    }
}

impl fmt::Display for ExtendedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}
