//! The coefficient abstraction shared by series and polynomials.

use num_traits::{One, Zero};

use crate::{CycElem, Error, Rational, Result};

/// Exact field element usable as a series or polynomial coefficient.
///
/// Elements carry their own domain (the conductor for cyclotomic values), so
/// `zero_like`/`one_like` build constants in the same domain as `self`.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug + std::fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    fn try_inv(&self) -> Result<Self>;
    fn same_domain(&self, other: &Self) -> bool;

    fn from_rational_like(&self, r: &Rational) -> Self {
        self.one_like().scale(r)
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

impl Coefficient for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn try_inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn same_domain(&self, _other: &Self) -> bool {
        true
    }
}

impl Coefficient for CycElem {
    fn zero_like(&self) -> Self {
        CycElem::zero(self.conductor())
    }
    fn one_like(&self) -> Self {
        CycElem::one(self.conductor())
    }
    fn is_zero(&self) -> bool {
        CycElem::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        CycElem::scale(self, r)
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn same_domain(&self, other: &Self) -> bool {
        self.conductor() == other.conductor()
    }
}
