//! Values on the extended positive reals `R++ ∪ {0, +∞}`.
//!
//! Zero and infinity are tags, never floats, so a value that underflows or
//! overflows during arithmetic lands on the correct tag instead of a
//! misleading finite number.

use std::cmp::Ordering;
use std::fmt;

/// A strictly positive, finite `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Positive(f64);

impl Positive {
    pub fn new(value: f64) -> Option<Self> {
        (value > 0.0 && value.is_finite()).then_some(Positive(value))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl Eq for Positive {}

impl PartialOrd for Positive {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Positive {
    fn cmp(&self, other: &Self) -> Ordering {
        // both operands are finite and positive
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }
}

/// An element of `R++ ∪ {0, +∞}`, ordered `Zero < Finite(_) < Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtReal {
    Zero,
    Finite(Positive),
    Infinite,
}

impl ExtReal {
    pub const ONE: ExtReal = ExtReal::Finite(Positive(1.0));

    /// `(v)_+` lifted to the extended positive reals: nonpositive values map
    /// to `Zero` and `+∞` maps to `Infinite`.
    ///
    /// # Panics
    ///
    /// Panics if `v` is NaN.
    pub fn positive_part(v: f64) -> Self {
        assert!(!v.is_nan(), "ExtReal::positive_part called with NaN");
        if v <= 0.0 {
            ExtReal::Zero
        } else if v == f64::INFINITY {
            ExtReal::Infinite
        } else {
            ExtReal::Finite(Positive(v))
        }
    }

    /// A finite value; `None` unless `v` is finite and strictly positive.
    pub fn finite(v: f64) -> Option<Self> {
        Positive::new(v).map(ExtReal::Finite)
    }

    /// The finite value, if any.
    #[inline]
    pub fn value(self) -> Option<f64> {
        match self {
            ExtReal::Finite(p) => Some(p.get()),
            _ => None,
        }
    }

    /// Numeric view: `0.0`, the value, or `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Zero => 0.0,
            ExtReal::Finite(p) => p.get(),
            ExtReal::Infinite => f64::INFINITY,
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        matches!(self, ExtReal::Zero)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    /// `s · self` for a strictly positive scalar, with `s·0 = 0` and `s·∞ = ∞`.
    ///
    /// # Panics
    ///
    /// Panics unless `s > 0`.
    pub fn scale(self, s: f64) -> Self {
        assert!(s > 0.0, "ExtReal::scale needs a positive factor, got {s}");
        match self {
            ExtReal::Finite(p) => ExtReal::positive_part(p.get() * s),
            other => other,
        }
    }

    /// `1/self` with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(self) -> Self {
        match self {
            ExtReal::Zero => ExtReal::Infinite,
            ExtReal::Infinite => ExtReal::Zero,
            ExtReal::Finite(p) => ExtReal::positive_part(1.0 / p.get()),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Zero => write!(f, "0"),
            ExtReal::Finite(p) => write!(f, "{}", p.get()),
            ExtReal::Infinite => write!(f, "inf"),
        }
    }
}
