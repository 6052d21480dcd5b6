//! Truncated formal power series and their operator algebra.
//!
//! A series with truncation `T` knows its coefficients of `z^0..=z^T`. Every
//! operation returns the tightest truncation it can justify, and comparisons
//! past a known truncation are refused.

use std::fmt;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::scalar::Coefficient;
use crate::{CycElem, Error, Rational, Result};

fn rat(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Clone, PartialEq)]
pub struct TruncSeries<C: Coefficient> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncSeries<C> {
    /// Series with the given coefficients; the truncation is `len − 1`.
    pub fn new(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a series needs at least one coefficient".into()));
        }
        Ok(TruncSeries { coeffs })
    }

    pub fn from_fn(truncation: usize, f: impl Fn(usize) -> C) -> Self {
        TruncSeries {
            coeffs: (0..=truncation).map(f).collect(),
        }
    }

    pub fn zero(like: &C, truncation: usize) -> Self {
        TruncSeries::from_fn(truncation, |_| like.zero_like())
    }

    pub fn one(like: &C, truncation: usize) -> Self {
        let mut s = TruncSeries::zero(like, truncation);
        s.coeffs[0] = like.one_like();
        s
    }

    /// `Σ_{n≥0} z^n`, the Hadamard identity.
    pub fn ones(like: &C, truncation: usize) -> Self {
        TruncSeries::from_fn(truncation, |_| like.one_like())
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `z^n`; `None` past the truncation.
    pub fn get(&self, n: usize) -> Option<&C> {
        self.coeffs.get(n)
    }

    /// Coefficient of `z^n`, erroring past the truncation.
    pub fn coeff(&self, n: usize) -> Result<&C> {
        self.coeffs.get(n).ok_or(Error::InsufficientTruncation {
            truncation: self.truncation(),
            needed: n,
        })
    }

    fn zero_elem(&self) -> C {
        self.coeffs[0].zero_like()
    }

    /// Drops coefficients beyond `t`; refuses to extend.
    pub fn truncate(&self, t: usize) -> Result<Self> {
        if t > self.truncation() {
            return Err(Error::InsufficientTruncation {
                truncation: self.truncation(),
                needed: t,
            });
        }
        Ok(TruncSeries {
            coeffs: self.coeffs[..=t].to_vec(),
        })
    }

    /// Equality of the coefficients of `z^0..=z^upto`.
    pub fn agrees_to(&self, other: &Self, upto: usize) -> Result<bool> {
        let avail = self.truncation().min(other.truncation());
        if upto > avail {
            return Err(Error::InsufficientTruncation {
                truncation: avail,
                needed: upto,
            });
        }
        Ok(self.coeffs[..=upto] == other.coeffs[..=upto])
    }

    /// Equality at the common truncation.
    pub fn agrees(&self, other: &Self) -> bool {
        let t = self.truncation().min(other.truncation());
        self.coeffs[..=t] == other.coeffs[..=t]
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<D: Coefficient>(&self, f: impl Fn(&C) -> Result<D>) -> Result<TruncSeries<D>> {
        Ok(TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        let (a, b) = (&self.coeffs[0], &other.coeffs[0]);
        if a.same_domain(b) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "series over different fields ({a} vs {b})"
            )))
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Result<Self> {
        self.check_domain(other)?;
        Ok(TruncSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, C::add_ref)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, C::sub_ref)
    }

    pub fn neg(&self) -> Self {
        self.map(C::neg_ref)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }

    pub fn scale_by(&self, c: &C) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    /// Cauchy product, truncated to the smaller truncation.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let t = self.truncation().min(other.truncation());
        let zero = self.zero_elem();
        let coeffs = (0..=t)
            .into_par_iter()
            .map(|n| {
                let mut acc = zero.clone();
                for k in 0..=n {
                    let (a, b) = (&self.coeffs[k], &other.coeffs[n - k]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add_ref(&a.mul_ref(b));
                    }
                }
                acc
            })
            .collect();
        Ok(TruncSeries { coeffs })
    }

    /// Multiplicative inverse of a series with invertible constant term.
    pub fn inv(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NonunitConstantTerm);
        }
        let c0_inv = c0.try_inv()?;
        let mut out: Vec<C> = Vec::with_capacity(self.coeffs.len());
        out.push(c0_inv.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = self.zero_elem();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc = acc.add_ref(&a.mul_ref(&out[n - k]));
                }
            }
            out.push(acc.neg_ref().mul_ref(&c0_inv));
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `δ = z·d/dz`.
    pub fn delta(&self) -> Self {
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c.scale(&rat(n as u64)))
                .collect(),
        }
    }

    /// `s`-fold logarithmic integration: coefficient `n` becomes `a_n / n^s`.
    pub fn int_s(&self, s: u32) -> Result<Self> {
        if s == 0 {
            return Ok(self.clone());
        }
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut out = self.clone();
        for (n, c) in out.coeffs.iter_mut().enumerate().skip(1) {
            if !c.is_zero() {
                *c = c.scale(&rat(n as u64).pow(s as i32).recip());
            }
        }
        Ok(out)
    }

    /// Cartier operator `C_k`: coefficient `n` becomes coefficient `kn`.
    pub fn cartier(&self, k: usize) -> Self {
        assert!(k >= 1, "Cartier index must be positive");
        let t = self.truncation() / k;
        TruncSeries {
            coeffs: (0..=t).map(|n| self.coeffs[k * n].clone()).collect(),
        }
    }

    /// `z ↦ z^ℓ` followed by multiplication of every coefficient by `ℓ^s`.
    pub fn epsilon(&self, l: usize, s: u32) -> Self {
        assert!(l >= 1, "substitution exponent must be positive");
        let t = self.truncation();
        let factor = rat(l as u64).pow(s as i32);
        let mut out = TruncSeries::zero(&self.coeffs[0], t);
        for (n, c) in self.coeffs.iter().enumerate() {
            if n * l > t {
                break;
            }
            out.coeffs[n * l] = c.scale(&factor);
        }
        out
    }

    /// Coefficient-wise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, C::mul_ref)
    }

    /// Truncated exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let dv = self.delta();
        let mut y: Vec<C> = Vec::with_capacity(self.coeffs.len());
        y.push(self.coeffs[0].one_like());
        for n in 1..self.coeffs.len() {
            // n·y_n = Σ_{k=1}^{n} (k v_k) y_{n−k}
            let mut acc = self.zero_elem();
            for k in 1..=n {
                let a = &dv.coeffs[k];
                if !a.is_zero() {
                    acc = acc.add_ref(&a.mul_ref(&y[n - k]));
                }
            }
            y.push(acc.scale(&rat(n as u64).recip()));
        }
        Ok(TruncSeries { coeffs: y })
    }

    /// Truncated logarithm of a series with constant term one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonunitConstantTerm);
        }
        let dy = self.delta();
        // δV = δY / Y, i.e. (kv_k) = (ky_k) − Σ_{j=1}^{k−1} (jv_j) y_{k−j}
        let mut dv: Vec<C> = Vec::with_capacity(self.coeffs.len());
        dv.push(self.zero_elem());
        for n in 1..self.coeffs.len() {
            let mut acc = dy.coeffs[n].clone();
            for j in 1..n {
                let a = &dv[j];
                let b = &self.coeffs[n - j];
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.sub_ref(&a.mul_ref(b));
                }
            }
            dv.push(acc);
        }
        TruncSeries { coeffs: dv }.int_s(1)
    }

    /// The unique `q_1..q_T` with `Y = Π_{n≥1} (1 − q_n z^n)^{−1}` to truncation.
    /// The returned vector has `q_n` at index `n − 1`.
    pub fn product_form_extract(&self) -> Result<Vec<C>> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonunitConstantTerm);
        }
        let t = self.truncation();
        // invariant: r = Y·Π_{k<n}(1 − q_k z^k) ≡ 1 mod z^n
        let mut r = self.coeffs.clone();
        let mut q = Vec::with_capacity(t);
        for n in 1..=t {
            let qn = r[n].clone();
            if !qn.is_zero() {
                // r ← r·(1 − q_n z^n)
                for k in (n..=t).rev() {
                    let sub = r[k - n].mul_ref(&qn);
                    r[k] = r[k].sub_ref(&sub);
                }
            }
            q.push(qn);
        }
        Ok(q)
    }

    /// Inverse of [`TruncSeries::product_form_extract`]: `Π_{n≤T}(1 − q_n z^n)^{−1}`.
    pub fn product_form_expand(q: &[C], like: &C) -> Self {
        let t = q.len();
        let mut y = TruncSeries::one(like, t).coeffs;
        for (i, qn) in q.iter().enumerate() {
            let n = i + 1;
            if qn.is_zero() {
                continue;
            }
            // multiply by 1/(1 − q_n z^n): y_k += q_n·y_{k−n}, ascending
            for k in n..=t {
                let add = y[k - n].mul_ref(qn);
                y[k] = y[k].add_ref(&add);
            }
        }
        TruncSeries { coeffs: y }
    }
}

impl TruncSeries<CycElem> {
    pub fn conductor(&self) -> u64 {
        self.coeffs[0].conductor()
    }

    /// Coefficient-wise Frobenius at an unramified prime.
    pub fn frobenius(&self, p: u64) -> Result<Self> {
        self.try_map(|c| c.frobenius(p))
    }

    pub fn promote(&self, to: u64) -> Result<Self> {
        self.try_map(|c| c.promote(to))
    }

    /// Rational view; `None` when some coefficient is irrational.
    pub fn as_rational(&self) -> Option<TruncSeries<Rational>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(CycElem::as_rational)
            .collect::<Option<Vec<_>>>()?;
        Some(TruncSeries { coeffs })
    }
}

impl TruncSeries<Rational> {
    /// Embeds a rational series into `Q(ζ_M)`.
    pub fn to_cyclotomic(&self, m: u64) -> TruncSeries<CycElem> {
        self.map(|c| CycElem::from_rational(m, c))
    }
}

impl<C: Coefficient> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] + O(z^{})", self.truncation() + 1)
    }
}

impl<C: Coefficient> Serialize for TruncSeries<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        let mut st = s.serialize_struct("TruncSeries", 2)?;
        st.serialize_field("truncation", &self.truncation())?;
        st.serialize_field("coeffs", &text)?;
        st.end()
    }
}
