//! `p`-adic orders with a saturating `+∞`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::primes::require_prime;
use crate::{Rational, Result};

/// An integer order or `+∞` (the order of zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtOrder {
    Finite(i64),
    Infinite,
}

impl ExtOrder {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtOrder::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtOrder::Finite(k) => Some(k),
            ExtOrder::Infinite => None,
        }
    }

    /// `self >= k`.
    pub fn at_least(self, k: i64) -> bool {
        match self {
            ExtOrder::Finite(v) => v >= k,
            ExtOrder::Infinite => true,
        }
    }

    /// Saturating shift: `∞ + n = ∞`.
    pub fn shift(self, n: i64) -> ExtOrder {
        match self {
            ExtOrder::Finite(v) => ExtOrder::Finite(v + n),
            ExtOrder::Infinite => ExtOrder::Infinite,
        }
    }
}

impl std::ops::Add for ExtOrder {
    type Output = ExtOrder;
    fn add(self, rhs: ExtOrder) -> ExtOrder {
        match (self, rhs) {
            (ExtOrder::Finite(a), ExtOrder::Finite(b)) => ExtOrder::Finite(a + b),
            _ => ExtOrder::Infinite,
        }
    }
}

impl PartialOrd for ExtOrder {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtOrder {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtOrder::Finite(a), ExtOrder::Finite(b)) => a.cmp(b),
            (ExtOrder::Finite(_), ExtOrder::Infinite) => Ordering::Less,
            (ExtOrder::Infinite, ExtOrder::Finite(_)) => Ordering::Greater,
            (ExtOrder::Infinite, ExtOrder::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtOrder::Finite(k) => write!(f, "{k}"),
            ExtOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Finite orders serialize as JSON integers, `+∞` as the string `"inf"`.
impl Serialize for ExtOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtOrder::Finite(k) => s.serialize_i64(*k),
            ExtOrder::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `ord_p(n)` for a nonzero integer; the caller guarantees `p` prime.
pub(crate) fn int_ord(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `ord_p` of an integer, `+∞` for zero.
pub fn int_valuation(n: &BigInt, p: u64) -> Result<ExtOrder> {
    require_prime(p)?;
    if n.is_zero() {
        return Ok(ExtOrder::Infinite);
    }
    Ok(ExtOrder::Finite(int_ord(n, p)))
}

/// `ord_p(numerator) − ord_p(denominator)`, `+∞` for zero.
pub fn rat_valuation(x: &Rational, p: u64) -> Result<ExtOrder> {
    require_prime(p)?;
    if x.is_zero() {
        return Ok(ExtOrder::Infinite);
    }
    Ok(ExtOrder::Finite(int_ord(x.numer(), p) - int_ord(x.denom(), p)))
}
