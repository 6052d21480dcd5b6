//! Exact arithmetic in the cyclotomic field `Q(ζ_M)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(M)−1}`, which is an
//! integral basis of `Z[ζ_M]`. Consequently `x ∈ p^k·O_p` holds exactly when
//! every coordinate has `p`-adic order at least `k`, which is what
//! [`CycElem::padic_order`] computes.
//!
//! Internally an element is an integer vector over a common positive
//! denominator, kept in lowest terms, so equality is structural.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::primes::{divisors, euler_phi, gcd, mobius, require_prime};
use crate::valuation::{int_ord, ExtOrder};
use crate::{Error, Rational, Result};

/// Shared data for `Q(ζ_M)`: the cyclotomic polynomial and the reductions of
/// `x^e` modulo it for `0 <= e < M`.
pub struct CycField {
    conductor: u64,
    degree: usize,
    cyclotomic_poly: Vec<BigInt>,
    powers: Vec<Vec<BigInt>>,
}

impl CycField {
    /// The (cached) field of conductor `m`.
    pub fn get(m: u64) -> Arc<CycField> {
        assert!(m >= 1, "conductor must be positive");
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&m) {
            return f.clone();
        }
        let field = Arc::new(CycField::build(m));
        cache.lock().unwrap().entry(m).or_insert(field).clone()
    }

    fn build(m: u64) -> CycField {
        let cyclotomic_poly = cyclotomic_polynomial(m);
        let degree = cyclotomic_poly.len() - 1;
        debug_assert_eq!(degree as u64, euler_phi(m));
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce the overflow coefficient with the monic Φ_M
            let top = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for i in 0..degree {
                    cur[i] -= &top * &cyclotomic_poly[i];
                }
            }
        }
        CycField {
            conductor: m,
            degree,
            cyclotomic_poly,
            powers,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `φ(M)`, the length of every coordinate vector.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Φ_M`, ascending degree.
    pub fn cyclotomic_poly(&self) -> &[BigInt] {
        &self.cyclotomic_poly
    }

    /// `k` in `1..=M` coprime to `M`: the exponents of the Galois group.
    pub fn galois_exponents(&self) -> Vec<u64> {
        (1..=self.conductor).filter(|&k| gcd(k, self.conductor) == 1).collect()
    }

    fn power(&self, e: u64) -> &[BigInt] {
        &self.powers[(e % self.conductor) as usize]
    }
}

/// `Φ_m` with integer coefficients, via `Π_{d|m} (x^d − 1)^{μ(m/d)}`.
fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    let mut divide_by = Vec::new();
    for d in divisors(m) {
        match mobius(m / d) {
            1 => poly = mul_by_xd_minus_one(&poly, d as usize),
            -1 => divide_by.push(d as usize),
            _ => {}
        }
    }
    for d in divide_by {
        poly = div_by_xd_minus_one(&poly, d);
    }
    poly
}

fn mul_by_xd_minus_one(a: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + d];
    for (i, c) in a.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn div_by_xd_minus_one(a: &[BigInt], d: usize) -> Vec<BigInt> {
    // a = q·(x^d − 1); solve from the top: q_k = a_{k+d} + q_{k+d}
    let n = a.len() - d;
    let mut q = vec![BigInt::zero(); n];
    for k in (0..n).rev() {
        let mut c = a[k + d].clone();
        if k + d < n {
            c += &q[k + d];
        }
        q[k] = c;
    }
    q
}

/// An element of `Q(ζ_M)` in canonical (reduced, lowest-terms) form.
#[derive(Clone)]
pub struct CycElem {
    field: Arc<CycField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycElem {
    fn from_parts(field: Arc<CycField>, num: Vec<BigInt>, den: BigInt) -> CycElem {
        let mut e = CycElem { field, num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn zero(m: u64) -> CycElem {
        let field = CycField::get(m);
        let d = field.degree;
        CycElem {
            field,
            num: vec![BigInt::zero(); d],
            den: BigInt::one(),
        }
    }

    pub fn one(m: u64) -> CycElem {
        CycElem::from_rational(m, &Rational::one())
    }

    pub fn from_int(m: u64, k: i64) -> CycElem {
        CycElem::from_rational(m, &Rational::from_integer(k.into()))
    }

    pub fn from_rational(m: u64, r: &Rational) -> CycElem {
        let mut e = CycElem::zero(m);
        e.num[0] = r.numer().clone();
        e.den = r.denom().clone();
        e.normalize();
        e
    }

    /// Builds an element from an arbitrary-length polynomial in `ζ`,
    /// reducing it modulo `Φ_M`.
    pub fn from_poly(m: u64, coeffs: &[Rational]) -> CycElem {
        let field = CycField::get(m);
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let num = reduce(&field, ints);
        CycElem::from_parts(field, num, den)
    }

    /// Builds an element from exactly `φ(M)` power-basis coordinates.
    pub fn from_coords(m: u64, coords: &[Rational]) -> Result<CycElem> {
        let deg = CycField::get(m).degree;
        if coords.len() != deg {
            return Err(Error::InvalidInput(format!(
                "conductor {m} needs {deg} coordinates, got {}",
                coords.len()
            )));
        }
        Ok(CycElem::from_poly(m, coords))
    }

    /// The generator `ζ_M`.
    pub fn zeta(m: u64) -> CycElem {
        CycElem::zeta_pow(m, 1)
    }

    /// `ζ_M^e` for any integer exponent.
    pub fn zeta_pow(m: u64, e: i64) -> CycElem {
        let field = CycField::get(m);
        let e = e.rem_euclid(m as i64) as u64;
        let num = field.power(e).to_vec();
        CycElem::from_parts(field, num, BigInt::one())
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    /// Power-basis coordinates as rationals.
    pub fn coords(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Integer numerator vector over [`CycElem::denominator`].
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    /// The least positive common denominator of the coordinates.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// `Some(r)` when the element lies in `Q` (all non-constant coordinates vanish).
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// True when every coordinate is an integer, i.e. the element lies in `Z[ζ_M]`.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    fn check_same(&self, other: &CycElem) -> Result<()> {
        if self.conductor() == other.conductor() {
            Ok(())
        } else {
            Err(Error::ConductorMismatch(self.conductor(), other.conductor()))
        }
    }

    pub fn try_add(&self, other: &CycElem) -> Result<CycElem> {
        self.check_same(other)?;
        Ok(self.add_sub(other, false))
    }

    pub fn try_sub(&self, other: &CycElem) -> Result<CycElem> {
        self.check_same(other)?;
        Ok(self.add_sub(other, true))
    }

    pub fn try_mul(&self, other: &CycElem) -> Result<CycElem> {
        self.check_same(other)?;
        Ok(self.mul_same(other))
    }

    fn add_sub(&self, other: &CycElem, subtract: bool) -> CycElem {
        let l = self.den.lcm(&other.den);
        let fa = &l / &self.den;
        let fb = &l / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                let x = a * &fa;
                let y = b * &fb;
                if subtract {
                    x - y
                } else {
                    x + y
                }
            })
            .collect();
        CycElem::from_parts(self.field.clone(), num, l)
    }

    fn mul_same(&self, other: &CycElem) -> CycElem {
        if self.is_zero() || other.is_zero() {
            return CycElem::zero(self.conductor());
        }
        let d = self.field.degree;
        if d == 1 {
            let num = vec![&self.num[0] * &other.num[0]];
            return CycElem::from_parts(self.field.clone(), num, &self.den * &other.den);
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let num = reduce(&self.field, prod);
        CycElem::from_parts(self.field.clone(), num, &self.den * &other.den)
    }

    /// Multiplicative inverse via the Galois norm: `a^{-1} = Π_{σ≠1} σ(a) / N(a)`.
    pub fn inv(&self) -> Result<CycElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut conj = CycElem::one(self.conductor());
        for k in self.field.galois_exponents() {
            if k != 1 {
                conj = conj.mul_same(&self.galois(k));
            }
        }
        let norm = self
            .mul_same(&conj)
            .as_rational()
            .expect("the norm of a cyclotomic element is rational");
        Ok(conj.scale(&norm.recip()))
    }

    pub fn try_div(&self, other: &CycElem) -> Result<CycElem> {
        self.check_same(other)?;
        Ok(self.mul_same(&other.inv()?))
    }

    pub fn scale(&self, r: &Rational) -> CycElem {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        CycElem::from_parts(self.field.clone(), num, &self.den * r.denom())
    }

    pub fn pow(&self, mut e: u64) -> CycElem {
        if self.field.degree == 1 {
            let e = u32::try_from(e).expect("exponent too large");
            return CycElem::from_parts(
                self.field.clone(),
                vec![num_traits::pow::Pow::pow(&self.num[0], e)],
                num_traits::pow::Pow::pow(&self.den, e),
            );
        }
        let mut base = self.clone();
        let mut acc = CycElem::one(self.conductor());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// The automorphism `ζ ↦ ζ^k` for `gcd(k, M) = 1`.
    pub fn galois(&self, k: u64) -> CycElem {
        debug_assert_eq!(gcd(k, self.conductor()), 1);
        let d = self.field.degree;
        let mut out = vec![BigInt::zero(); d];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = self.field.power(i as u64 * k);
            for (o, b) in out.iter_mut().zip(img) {
                if !b.is_zero() {
                    *o += c * b;
                }
            }
        }
        CycElem::from_parts(self.field.clone(), out, self.den.clone())
    }

    /// Frobenius at an unramified prime: the automorphism `ζ ↦ ζ^p`.
    pub fn frobenius(&self, p: u64) -> Result<CycElem> {
        self.require_unramified(p)?;
        Ok(self.galois(p % self.conductor()))
    }

    fn require_unramified(&self, p: u64) -> Result<()> {
        require_prime(p)?;
        if self.conductor() % p == 0 {
            return Err(Error::RamifiedPrime {
                p,
                conductor: self.conductor(),
            });
        }
        Ok(())
    }

    /// Largest `k` with `x ∈ p^k·O_p`: the minimum coordinate order.
    pub fn padic_order(&self, p: u64) -> Result<ExtOrder> {
        self.require_unramified(p)?;
        Ok(self.coordinate_order(p))
    }

    /// Minimum coordinate order at `p`, without the unramified check.
    /// Integrality (`order >= 0`) is meaningful at every prime because the
    /// power basis is an integral basis.
    pub(crate) fn coordinate_order(&self, p: u64) -> ExtOrder {
        let min_num = self
            .num
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| int_ord(c, p))
            .min();
        match min_num {
            None => ExtOrder::Infinite,
            Some(k) => ExtOrder::Finite(k - int_ord(&self.den, p)),
        }
    }

    /// `x ≡ y (mod p^k·O_p)`.
    pub fn congruent_mod(&self, other: &CycElem, p: u64, k: i64) -> Result<bool> {
        let diff = self.try_sub(other)?;
        Ok(diff.padic_order(p)?.at_least(k))
    }

    /// Embeds into `Q(ζ_L)` for a multiple `L` of the conductor via `ζ_M = ζ_L^{L/M}`.
    pub fn promote(&self, to: u64) -> Result<CycElem> {
        let from = self.conductor();
        if to % from != 0 {
            return Err(Error::BadPromotion { from, to });
        }
        if to == from {
            return Ok(self.clone());
        }
        let step = to / from;
        let field = CycField::get(to);
        let mut out = vec![BigInt::zero(); field.degree];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(field.power(i as u64 * step)) {
                if !b.is_zero() {
                    *o += c * b;
                }
            }
        }
        Ok(CycElem::from_parts(field, out, self.den.clone()))
    }
}

/// Reduces an integer polynomial in `ζ` modulo `Φ_M` using `ζ^M = 1` and the
/// precomputed power table.
fn reduce(field: &CycField, mut poly: Vec<BigInt>) -> Vec<BigInt> {
    let d = field.degree;
    if poly.len() <= d {
        poly.resize(d, BigInt::zero());
        return poly;
    }
    let tail = poly.split_off(d);
    for (k, c) in tail.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (o, b) in poly.iter_mut().zip(field.power((k + d) as u64)) {
            if !b.is_zero() {
                *o += &c * b;
            }
        }
    }
    poly
}

impl PartialEq for CycElem {
    fn eq(&self, other: &Self) -> bool {
        self.conductor() == other.conductor() && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycElem {}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:[", self.conductor())?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for CycElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Accepts the canonical `M:[c0,c1,...]` form or a bare rational (conductor 1).
impl FromStr for CycElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<CycElem> {
        let s = s.trim();
        let Some((m, rest)) = s.split_once(':') else {
            return Ok(CycElem::from_rational(1, &parse_rational(s)?));
        };
        let m: u64 = m
            .trim()
            .parse()
            .ok()
            .filter(|&m| m > 0)
            .ok_or_else(|| Error::Parse(format!("bad conductor in '{s}'")))?;
        let inner = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..] in '{s}'")))?;
        let coords = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?
        };
        Ok(CycElem::from_poly(m, &coords))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&CycElem> for &CycElem {
            type Output = CycElem;
            fn $method(self, rhs: &CycElem) -> CycElem {
                assert_eq!(
                    self.conductor(),
                    rhs.conductor(),
                    "conductor mismatch in cyclotomic arithmetic"
                );
                $body(self, rhs)
            }
        }
        impl $tr<CycElem> for CycElem {
            type Output = CycElem;
            fn $method(self, rhs: CycElem) -> CycElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CycElem, b: &CycElem| a.add_sub(b, false));
forward_binop!(Sub, sub, |a: &CycElem, b: &CycElem| a.add_sub(b, true));
forward_binop!(Mul, mul, |a: &CycElem, b: &CycElem| a.mul_same(b));

impl Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        CycElem {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        -&self
    }
}
