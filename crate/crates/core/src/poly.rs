//! Dense univariate polynomials over a [`Coefficient`] field.

use std::fmt;

use crate::scalar::Coefficient;
use crate::{Error, Rational, Result};

/// A polynomial with trimmed coefficients (ascending degree). The zero
/// polynomial has no coefficients but still remembers its domain.
#[derive(Clone, PartialEq)]
pub struct Poly<C: Coefficient> {
    coeffs: Vec<C>,
    zero: C,
}

impl<C: Coefficient> Poly<C> {
    pub fn new(coeffs: Vec<C>, zero: C) -> Poly<C> {
        let zero = zero.zero_like();
        let mut p = Poly { coeffs, zero };
        p.trim();
        p
    }

    /// Builds a polynomial from a non-empty coefficient list.
    pub fn from_coeffs(coeffs: Vec<C>) -> Result<Poly<C>> {
        let zero = coeffs
            .first()
            .ok_or_else(|| Error::InvalidInput("empty coefficient list".into()))?
            .zero_like();
        Ok(Poly::new(coeffs, zero))
    }

    pub fn zero(like: &C) -> Poly<C> {
        Poly::new(Vec::new(), like.zero_like())
    }

    pub fn constant(c: C) -> Poly<C> {
        let z = c.zero_like();
        Poly::new(vec![c], z)
    }

    /// `c·x^k`.
    pub fn monomial(c: C, k: usize) -> Poly<C> {
        let z = c.zero_like();
        let mut v = vec![z.clone(); k];
        v.push(c);
        Poly::new(v, z)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn zero_elem(&self) -> &C {
        &self.zero
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).add_ref(&other.coeff(i))).collect();
        Poly::new(v, self.zero.clone())
    }

    pub fn sub(&self, other: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).sub_ref(&other.coeff(i))).collect();
        Poly::new(v, self.zero.clone())
    }

    pub fn neg(&self) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(C::neg_ref).collect(), self.zero.clone())
    }

    pub fn scale(&self, r: &Rational) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(|c| c.scale(r)).collect(), self.zero.clone())
    }

    pub fn scale_by(&self, c: &C) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(|x| x.mul_ref(c)).collect(), self.zero.clone())
    }

    pub fn mul(&self, other: &Poly<C>) -> Poly<C> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.zero);
        }
        let mut v = vec![self.zero.clone(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = v[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Poly::new(v, self.zero.clone())
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Poly<C>) -> Result<(Poly<C>, Poly<C>)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].try_inv()?;
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n <= dd {
            return Ok((Poly::zero(&self.zero), self.clone()));
        }
        let mut q = vec![self.zero.clone(); n - dd];
        for k in (0..n - dd).rev() {
            let c = r[k + dd].mul_ref(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                if !di.is_zero() {
                    r[k + i] = r[k + i].sub_ref(&c.mul_ref(di));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q, self.zero.clone()), Poly::new(r, self.zero.clone())))
    }

    pub fn rem(&self, d: &Poly<C>) -> Result<Poly<C>> {
        Ok(self.divrem(d)?.1)
    }

    /// Scales to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Poly<C> {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.try_inv().expect("nonzero leading coefficient");
                self.scale_by(&inv)
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly<C>) -> Poly<C> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly<C> {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into())))
            .collect();
        Poly::new(v, self.zero.clone())
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(self.zero.clone(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    /// `p(x) ↦ p(c·x)`.
    pub fn substitute_scaled(&self, c: &C) -> Poly<C> {
        let mut pow = c.one_like();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a.mul_ref(&pow));
            pow = pow.mul_ref(c);
        }
        Poly::new(v, self.zero.clone())
    }

    /// `p(x) ↦ p(x^k)`.
    pub fn compose_power(&self, k: usize) -> Poly<C> {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.zero.clone(); (self.coeffs.len() - 1) * k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            v[i * k] = a.clone();
        }
        Poly::new(v, self.zero.clone())
    }

    pub fn map<D: Coefficient>(&self, zero: D, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect(), zero)
    }
}

impl<C: Coefficient> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn rp(v: &[i64]) -> Poly<Rational> {
        Poly::new(v.iter().map(|&c| Rational::from_integer(c.into())).collect(), Rational::zero())
    }

    #[test]
    fn division_and_gcd() {
        // (x^3 − 1) = (x − 1)(x^2 + x + 1)
        let (q, r) = rp(&[-1, 0, 0, 1]).divrem(&rp(&[-1, 1])).unwrap();
        assert_eq!(q, rp(&[1, 1, 1]));
        assert!(r.is_zero());
        let g = rp(&[-1, 0, 1]).gcd(&rp(&[-1, 0, 0, 1]));
        assert_eq!(g, rp(&[-1, 1]));
        assert_eq!(rp(&[1, 2, 1]).derivative(), rp(&[2, 2]));
        assert_eq!(rp(&[1, 1]).compose_power(3), rp(&[1, 0, 0, 1]));
        assert!(rp(&[1]).divrem(&rp(&[])).is_err());
    }
}
