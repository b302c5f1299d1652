//! Countable weighted vertex sets given by a vertex stream and a weight oracle.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::graph::{VertexId, WeightOracle};
use crate::oracle::{ExactWeight, Rational};
use crate::weight::ExtendedWeight;

/// A countably infinite vertex set enumerated as `0, 1, 2, …`.
///
/// `weight` must be symmetric and vanish exactly on the diagonal.
pub trait GraphFamily: Sync {
    fn name(&self) -> &str;

    /// Human-readable descriptor of the vertex at stream position `v`.
    fn descriptor(&self, v: VertexId) -> String;

    /// Inverse of [`GraphFamily::descriptor`].
    fn parse_descriptor(&self, text: &str) -> Option<VertexId>;

    fn weight(&self, x: VertexId, y: VertexId) -> ExtendedWeight;

    /// Exact value of [`GraphFamily::weight`].
    fn exact_weight(&self, x: VertexId, y: VertexId) -> ExactWeight;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Center `c` joined to leaves `l1, l2, …` by weight 1.
    UnitStar,
    /// Center `c` joined to leaf `lk` by weight `1/k`.
    DecayingStar,
    /// `x0 – x1 – x2 – …` with unit steps.
    UnitRay,
    /// `x0 – x1 – x2 – …` with step `x(k-1) – xk` of weight `2^-k`.
    DecayingRay,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::UnitStar, Builtin::DecayingStar, Builtin::UnitRay, Builtin::DecayingRay];

    fn is_star(self) -> bool {
        matches!(self, Builtin::UnitStar | Builtin::DecayingStar)
    }

    /// The stream index `k ≥ 1` carrying the single finite edge, if any.
    fn edge_index(self, x: VertexId, y: VertexId) -> Option<usize> {
        let (lo, hi) = (x.min(y), x.max(y));
        if lo == hi {
            return None;
        }
        if self.is_star() {
            (lo == 0).then_some(hi)
        } else {
            (hi == lo + 1).then_some(hi)
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

fn inverse_power_of_two(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

impl GraphFamily for Builtin {
    fn name(&self) -> &str {
        match self {
            Builtin::UnitStar => "unit-star",
            Builtin::DecayingStar => "decaying-star",
            Builtin::UnitRay => "unit-ray",
            Builtin::DecayingRay => "decaying-ray",
        }
    }

    fn descriptor(&self, v: VertexId) -> String {
        match (self.is_star(), v) {
            (true, 0) => "c".to_string(),
            (true, k) => format!("l{k}"),
            (false, k) => format!("x{k}"),
        }
    }

    fn parse_descriptor(&self, text: &str) -> Option<VertexId> {
        if self.is_star() && text == "c" {
            return Some(0);
        }
        let prefix = if self.is_star() { 'l' } else { 'x' };
        let k: VertexId = text.strip_prefix(prefix)?.parse().ok()?;
        (!self.is_star() || k > 0).then_some(k)
    }

    fn weight(&self, x: VertexId, y: VertexId) -> ExtendedWeight {
        if x == y {
            return ExtendedWeight::ZERO;
        }
        let Some(k) = self.edge_index(x, y) else {
            return ExtendedWeight::INFINITY;
        };
        let value = match self {
            Builtin::UnitStar | Builtin::UnitRay => 1.0,
            Builtin::DecayingStar => 1.0 / k as f64,
            // Past 2^-1074 the float is zero; keep the weight definite.
            Builtin::DecayingRay => 2f64.powi(-(k.min(i32::MAX as usize) as i32)).max(f64::from_bits(1)),
        };
        ExtendedWeight::from_f64(value)
    }

    fn exact_weight(&self, x: VertexId, y: VertexId) -> ExactWeight {
        if x == y {
            return ExactWeight::Finite(Rational::from_integer(BigInt::from(0)));
        }
        let Some(k) = self.edge_index(x, y) else {
            return ExactWeight::Infinite;
        };
        ExactWeight::Finite(match self {
            Builtin::UnitStar | Builtin::UnitRay => Rational::one(),
            Builtin::DecayingStar => Rational::new(BigInt::one(), BigInt::from(k)),
            Builtin::DecayingRay => inverse_power_of_two(k),
        })
    }
}

impl WeightOracle for Builtin {
    fn weight(&self, x: VertexId, y: VertexId) -> ExtendedWeight {
        GraphFamily::weight(self, x, y)
    }
}
