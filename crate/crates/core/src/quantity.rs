//! Integer quantities in smallest indivisible units, with an infinity sentinel.

use std::fmt;

use crate::error::GraphError;

/// A non-negative quantity in the smallest indivisible unit (satoshi, byte,
/// cent, ...). One reserved value denotes an infinite quantity, used only on
/// synthetic source/sink edges.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quantity(u64);

impl Quantity {
    pub const ZERO: Quantity = Quantity(0);
    pub const INFINITE: Quantity = Quantity(u64::MAX);

    /// Largest representable finite value.
    pub const MAX_FINITE: u64 = u64::MAX - 1;

    pub fn new(value: u64) -> Result<Quantity, GraphError> {
        if value > Self::MAX_FINITE {
            return Err(GraphError::QuantityOverflow);
        }
        Ok(Quantity(value))
    }

    /// Construct a finite quantity, panicking on the sentinel value.
    /// Intended for literals in tests and fixtures.
    pub fn finite(value: u64) -> Quantity {
        Quantity::new(value).expect("finite quantity")
    }

    pub fn is_infinite(self) -> bool {
        self == Self::INFINITE
    }

    /// Raw value; callers must check `is_infinite` first when it matters.
    pub fn raw(self) -> u64 {
        self.0
    }

    /// Finite value, or `None` for the sentinel.
    pub fn as_finite(self) -> Option<u64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.0)
        }
    }

    /// Saturating-at-infinity addition. Finite overflow past the sentinel is
    /// an error rather than silent wraparound.
    pub fn checked_add(self, rhs: Quantity) -> Result<Quantity, GraphError> {
        if self.is_infinite() || rhs.is_infinite() {
            return Ok(Self::INFINITE);
        }
        match self.0.checked_add(rhs.0) {
            Some(v) if v <= Self::MAX_FINITE => Ok(Quantity(v)),
            _ => Err(GraphError::QuantityOverflow),
        }
    }

    /// Subtraction; INFINITE absorbs (INFINITE - x = INFINITE).
    pub fn checked_sub(self, rhs: Quantity) -> Result<Quantity, GraphError> {
        if self.is_infinite() {
            return Ok(Self::INFINITE);
        }
        if rhs.is_infinite() || rhs.0 > self.0 {
            return Err(GraphError::QuantityUnderflow);
        }
        Ok(Quantity(self.0 - rhs.0))
    }

    /// min(INFINITE, x) = x.
    pub fn min_with(self, rhs: Quantity) -> Quantity {
        if self.0 <= rhs.0 {
            self
        } else {
            rhs
        }
    }
}

impl fmt::Debug for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
