//! Decision procedure for rational 2-functions.
//!
//! [`classify_2function`] either returns the abelian normal form
//! `F(z) = Σ_{j=1}^{P} A_j ζ^j z / (1 − ζ^j z)` with rational `A_j` and `ζ` a
//! primitive `P`-th root of unity, or names the first obstruction together
//! with a concrete witness. It never looks at congruences.

mod minton;

pub use minton::{minton_form, MintonForm};

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::poly::Poly;
use crate::primes::{factorize, lcm};
use crate::scalar::Coefficient;
use crate::{CycElem, Error, Rational, Result, TruncSeries};

/// Default bound for the period search.
pub const DEFAULT_NMAX: u64 = 720;

/// Human-readable text for a field element: a bare rational when possible.
pub fn elem_text(c: &CycElem) -> String {
    match c.as_rational() {
        Some(r) => r.to_string(),
        None => c.to_string(),
    }
}

/// Ascending coefficient list, e.g. `[1, -2]` for `1 − 2z`.
pub fn poly_text(p: &Poly<CycElem>) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(elem_text).collect();
    format!("[{}]", parts.join(", "))
}

/// A reduced rational function `P/Q` over `Q(ζ_M)` with `Q(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    num: Poly<CycElem>,
    den: Poly<CycElem>,
}

impl RatFunc {
    /// Promotes all coefficients to a common conductor, cancels the gcd and
    /// scales so that `Q(0) = 1`.
    pub fn new(num: Vec<CycElem>, den: Vec<CycElem>) -> Result<RatFunc> {
        let m = num
            .iter()
            .chain(&den)
            .fold(1, |acc, c| lcm(acc, c.conductor()));
        let lift = |v: Vec<CycElem>| -> Result<Vec<CycElem>> {
            v.into_iter().map(|c| c.promote(m)).collect()
        };
        let zero = CycElem::zero(m);
        let num = Poly::new(lift(num)?, zero.clone());
        let den = Poly::new(lift(den)?, zero);
        RatFunc::from_polys(num, den)
    }

    pub fn from_rationals(num: &[Rational], den: &[Rational]) -> Result<RatFunc> {
        let lift = |v: &[Rational]| v.iter().map(|r| CycElem::from_rational(1, r)).collect();
        RatFunc::new(lift(num), lift(den))
    }

    pub fn from_polys(num: Poly<CycElem>, den: Poly<CycElem>) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (m1, m2) = (num.zero_elem().conductor(), den.zero_elem().conductor());
        if m1 != m2 {
            return Err(Error::ConductorMismatch(m1, m2));
        }
        let g = num.gcd(&den);
        let num = num.divrem(&g)?.0;
        let den = den.divrem(&g)?.0;
        let c0 = den.coeff(0);
        if c0.is_zero() {
            return Err(Error::PoleAtOrigin);
        }
        let inv = c0.inv()?;
        Ok(RatFunc {
            num: num.scale_by(&inv),
            den: den.scale_by(&inv),
        })
    }

    pub fn num(&self) -> &Poly<CycElem> {
        &self.num
    }

    pub fn den(&self) -> &Poly<CycElem> {
        &self.den
    }

    pub fn conductor(&self) -> u64 {
        self.den.zero_elem().conductor()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn promote(&self, to: u64) -> Result<RatFunc> {
        let zero = CycElem::zero(to);
        let lift = |p: &Poly<CycElem>| -> Result<Poly<CycElem>> {
            let c = p.coeffs().iter().map(|c| c.promote(to)).collect::<Result<Vec<_>>>()?;
            Ok(Poly::new(c, zero.clone()))
        };
        Ok(RatFunc {
            num: lift(&self.num)?,
            den: lift(&self.den)?,
        })
    }

    /// Maclaurin coefficients `f_0..=f_T` via the recurrence from `Q`.
    pub fn maclaurin(&self, t: usize) -> TruncSeries<CycElem> {
        let q = self.den.coeffs();
        let mut f: Vec<CycElem> = Vec::with_capacity(t + 1);
        for n in 0..=t {
            let mut acc = self.num.coeff(n);
            for (k, qk) in q.iter().enumerate().take(n + 1).skip(1) {
                if !qk.is_zero() && !f[n - k].is_zero() {
                    acc = &acc - &(qk * &f[n - k]);
                }
            }
            f.push(acc);
        }
        TruncSeries::new(f).expect("non-empty")
    }

    /// `ℓ^s · F(z^ℓ)`.
    pub fn epsilon(&self, l: usize, s: u32) -> Result<RatFunc> {
        let factor = Rational::from_integer(l.into()).pow(s as i32);
        RatFunc::from_polys(
            self.num.compose_power(l).scale(&factor),
            self.den.compose_power(l),
        )
    }

    /// Value at the origin.
    pub fn at_origin(&self) -> CycElem {
        self.num.coeff(0)
    }
}

/// `F = Σ_{j=1}^{P} A_j ζ^j z/(1 − ζ^j z)` in lowest terms.
///
/// Residues at equal poles are merged and zero residues dropped; the
/// remaining simple poles with nonzero residues make `Π (1 − α z)` and
/// `Σ A_α α z Π_{β≠α} (1 − β z)` coprime, so no gcd is needed.
pub fn synthesize(zeta: &CycElem, period: u64, residues: &[CycElem]) -> Result<RatFunc> {
    if residues.len() as u64 != period || period == 0 {
        return Err(Error::InvalidInput(format!(
            "expected {period} residues, got {}",
            residues.len()
        )));
    }
    let m = residues
        .iter()
        .fold(zeta.conductor(), |acc, c| lcm(acc, c.conductor()));
    let zeta = zeta.promote(m)?;
    let powers = zeta_powers(&zeta, period as usize + 1);
    let mut poles: Vec<(CycElem, CycElem)> = Vec::new();
    for (j, a) in residues.iter().enumerate() {
        let a = a.promote(m)?;
        let alpha = &powers[j + 1];
        match poles.iter_mut().find(|(b, _)| b == alpha) {
            Some((_, acc)) => *acc = &*acc + &a,
            None => poles.push((alpha.clone(), a)),
        }
    }
    poles.retain(|(_, a)| !a.is_zero());
    let zero = CycElem::zero(m);
    let one = CycElem::one(m);
    let linear = |alpha: &CycElem| Poly::new(vec![one.clone(), -alpha], zero.clone());
    let mut den = Poly::constant(one.clone());
    let mut num = Poly::zero(&zero);
    for (alpha, a) in &poles {
        let term = Poly::monomial(a * alpha, 1);
        num = num.mul(&linear(alpha)).add(&den.mul(&term));
        den = den.mul(&linear(alpha));
    }
    if poles.is_empty() {
        return RatFunc::from_polys(num, den);
    }
    Ok(RatFunc { num, den })
}

/// `b_k = Σ_j A_j ζ^{jk}` for `k = 1..=P`.
fn resynthesize_coeffs(zeta: &CycElem, residues: &[CycElem], p: usize) -> Vec<CycElem> {
    let powers = zeta_powers(zeta, p);
    (1..=p)
        .into_par_iter()
        .map(|k| {
            residues
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .fold(zeta.zero_like(), |acc, (i, a)| &acc + &(a * &powers[((i + 1) * k) % p]))
        })
        .collect()
}

fn zeta_powers(zeta: &CycElem, p: usize) -> Vec<CycElem> {
    let mut out = Vec::with_capacity(p);
    let mut cur = zeta.one_like();
    for _ in 0..p {
        out.push(cur.clone());
        cur = &cur * zeta;
    }
    out
}

/// Least `N <= n_max` with `Q | 1 − z^N`, found by iterating `z^N mod Q`.
pub fn find_cyclotomic_period(q: &Poly<CycElem>, n_max: u64) -> Option<u64> {
    let d = q.degree()?;
    if q.coeff(0).is_zero() {
        return None;
    }
    if d == 0 {
        return Some(1);
    }
    let mut orbit = PowerOrbit::new(q);
    (1..=n_max).find(|_| {
        orbit.step();
        orbit.is_one()
    })
}

/// The residues `z^N mod Q` for `N = 0, 1, 2, …`.
struct PowerOrbit {
    modulus: Vec<CycElem>,
    lead_inv: CycElem,
    h: Vec<CycElem>,
}

impl PowerOrbit {
    fn new(q: &Poly<CycElem>) -> PowerOrbit {
        let modulus = q.coeffs().to_vec();
        let d = modulus.len() - 1;
        let lead_inv = modulus[d].inv().expect("nonzero leading coefficient");
        let mut h = vec![q.zero_elem().clone(); d];
        h[0] = q.zero_elem().one_like();
        PowerOrbit { modulus, lead_inv, h }
    }

    fn step(&mut self) {
        let d = self.h.len();
        let top = self.h[d - 1].clone();
        self.h.rotate_right(1);
        self.h[0] = top.zero_like();
        if !top.is_zero() {
            let c = &top * &self.lead_inv;
            for (hi, qi) in self.h.iter_mut().zip(&self.modulus) {
                if !qi.is_zero() {
                    *hi = &*hi - &(&c * qi);
                }
            }
        }
    }

    fn is_one(&self) -> bool {
        self.h[0].is_one() && self.h[1..].iter().all(CycElem::is_zero)
    }

    /// The same power reduced modulo a divisor of the current modulus.
    fn reduce_to(&self, divisor: &Poly<CycElem>) -> PowerOrbit {
        let h = Poly::new(self.h.clone(), divisor.zero_elem().clone());
        let rem = h.rem(divisor).expect("nonzero divisor");
        let mut next = PowerOrbit::new(divisor);
        for (i, slot) in next.h.iter_mut().enumerate() {
            *slot = rem.coeff(i);
        }
        next
    }

    fn minus_one(&self) -> Poly<CycElem> {
        let mut v = self.h.clone();
        v[0] = &v[0] - &v[0].one_like();
        Poly::new(v, self.h[0].zero_like())
    }
}

/// The part of `Q` left after removing every factor that divides some
/// `1 − z^N` with `N <= n_max`; normalized to constant term one.
fn non_cyclotomic_part(q: &Poly<CycElem>, n_max: u64) -> Poly<CycElem> {
    let mut r = q.clone();
    if r.degree().unwrap_or(0) > 0 {
        let mut orbit = PowerOrbit::new(&r);
        for _ in 0..n_max {
            orbit.step();
            // Q is squarefree here, so one gcd strips every factor of 1 − z^N
            let g = r.gcd(&orbit.minus_one());
            if g.degree().unwrap_or(0) > 0 {
                r = r.divrem(&g).expect("nonzero divisor").0;
                if r.degree().unwrap_or(0) == 0 {
                    break;
                }
                orbit = orbit.reduce_to(&r);
            }
        }
    }
    match r.coeff(0).inv() {
        Ok(inv) => r.scale_by(&inv),
        Err(_) => r,
    }
}

/// True iff `gcd(Q, Q′)` is constant.
pub fn simple_pole_check(q: &Poly<CycElem>) -> bool {
    match q.degree() {
        None => false,
        Some(0) => true,
        Some(_) => q.gcd(&q.derivative()).degree() == Some(0),
    }
}

/// Least divisor `P` of `N = a.len()` with `a_i = a_{i+P}` cyclically.
pub fn minimal_period<C: PartialEq>(a: &[C]) -> usize {
    let n = a.len();
    if n == 0 {
        return 0;
    }
    let mut divs: Vec<u64> = crate::primes::divisors(n as u64);
    divs.sort_unstable();
    divs.into_iter()
        .map(|d| d as usize)
        .find(|&p| (0..n).all(|i| a[i] == a[(i + p) % n]))
        .unwrap_or(n)
}

/// Checks that `zeta` is a primitive `p`-th root of unity.
fn require_primitive(zeta: &CycElem, p: usize) -> Result<()> {
    let one = zeta.one_like();
    let primitive = zeta.pow(p as u64) == one
        && factorize(p as u64)
            .iter()
            .all(|&(q, _)| zeta.pow(p as u64 / q) != one);
    if primitive {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{zeta} is not a primitive root of unity of order {p}"
        )))
    }
}

/// Inverse transform `A_j = (1/P) Σ_{i=1}^{P} a_i ζ^{−ij}`, so that
/// `a_n = Σ_{j=1}^{P} A_j ζ^{jn}`. The result has `A_j` at index `j − 1`.
pub fn residues_dft(a: &[CycElem], zeta: &CycElem) -> Result<Vec<CycElem>> {
    let p = a.len();
    if p == 0 {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    require_primitive(zeta, p)?;
    let m = zeta.conductor();
    let a = a.iter().map(|c| c.promote(m)).collect::<Result<Vec<_>>>()?;
    let inv_powers = zeta_powers(&zeta.inv()?, p);
    let scale = Rational::new(1.into(), (p as u64).into());
    Ok((1..=p)
        .into_par_iter()
        .map(|j| {
            a.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .fold(zeta.zero_like(), |acc, (i, x)| {
                    &acc + &(x * &inv_powers[((i + 1) * j) % p])
                })
                .scale(&scale)
        })
        .collect())
}

/// The abelian normal form: period `P`, primitive `P`-th root `ζ`, and
/// rational residues `A_1..A_P` (stored at indices `0..P`).
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianForm {
    pub period: u64,
    pub zeta: CycElem,
    pub residues: Vec<Rational>,
}

impl AbelianForm {
    pub fn to_ratfunc(&self) -> Result<RatFunc> {
        let m = self.zeta.conductor();
        let a: Vec<CycElem> = self.residues.iter().map(|r| CycElem::from_rational(m, r)).collect();
        synthesize(&self.zeta, self.period, &a)
    }

    /// `a_n = Σ_j A_j ζ^{jn}`.
    pub fn coefficient(&self, n: u64) -> CycElem {
        let p = self.period;
        self.residues
            .iter()
            .enumerate()
            .filter(|(_, a)| !num_traits::Zero::is_zero(*a))
            .fold(self.zeta.zero_like(), |acc, (i, a)| {
                &acc + &self.zeta.pow(((i as u64 + 1) * n) % p).scale(a)
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    NonzeroAtOrigin,
    DegreeBound,
    MultiplePole,
    PoleNotRootOfUnity,
    IrrationalResidue,
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RejectReason::NonzeroAtOrigin => "nonzero-at-origin",
            RejectReason::DegreeBound => "degree-bound",
            RejectReason::MultiplePole => "multiple-pole",
            RejectReason::PoleNotRootOfUnity => "pole-not-root-of-unity",
            RejectReason::IrrationalResidue => "irrational-residue",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Abelian(AbelianForm),
    /// `F = 0`, the empty sum.
    Zero,
    Rejected { reason: RejectReason, witness: String },
}

impl Verdict {
    pub fn is_abelian(&self) -> bool {
        matches!(self, Verdict::Abelian(_) | Verdict::Zero)
    }

    pub fn period(&self) -> Option<u64> {
        match self {
            Verdict::Abelian(f) => Some(f.period),
            _ => None,
        }
    }

    pub fn reason(&self) -> Option<RejectReason> {
        match self {
            Verdict::Rejected { reason, .. } => Some(*reason),
            _ => None,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        match self {
            Verdict::Abelian(f) => {
                map.serialize_entry("verdict", "abelian")?;
                map.serialize_entry("period", &f.period)?;
                map.serialize_entry("zeta", &f.zeta.to_string())?;
                let res: Vec<String> = f.residues.iter().map(ToString::to_string).collect();
                map.serialize_entry("residues", &res)?;
            }
            Verdict::Zero => {
                map.serialize_entry("verdict", "zero")?;
                map.serialize_entry("period", &0)?;
                map.serialize_entry("residues", &Vec::<String>::new())?;
            }
            Verdict::Rejected { reason, witness } => {
                map.serialize_entry("verdict", "rejected")?;
                map.serialize_entry("reason", reason)?;
                map.serialize_entry("witness", witness)?;
            }
        }
        map.end()
    }
}

fn reject(reason: RejectReason, witness: String) -> Result<Verdict> {
    Ok(Verdict::Rejected { reason, witness })
}

/// Decides whether `F` is a rational 2-function in abelian normal form.
///
/// The returned form is checked exactly: `F·(1 − z^P)` must equal the
/// re-synthesized numerator times `Q`. A mismatch is reported as
/// [`Error::Soundness`].
pub fn classify_2function(f: &RatFunc, n_max: u64) -> Result<Verdict> {
    if f.is_zero() {
        return Ok(Verdict::Zero);
    }
    let origin = f.at_origin();
    if !origin.is_zero() {
        return reject(RejectReason::NonzeroAtOrigin, format!("F(0) = {}", elem_text(&origin)));
    }
    let (dp, dq) = (f.num.degree().unwrap_or(0), f.den.degree().unwrap_or(0));
    if dp > dq {
        return reject(RejectReason::DegreeBound, format!("deg P = {dp} > deg Q = {dq}"));
    }
    if !simple_pole_check(&f.den) {
        let g = f.den.gcd(&f.den.derivative());
        return reject(RejectReason::MultiplePole, format!("gcd(Q, Q') = {}", poly_text(&g)));
    }
    let Some(n) = find_cyclotomic_period(&f.den, n_max) else {
        let r = non_cyclotomic_part(&f.den, n_max);
        return reject(
            RejectReason::PoleNotRootOfUnity,
            format!("factor {} of Q divides no 1 - z^N with N <= {n_max}", poly_text(&r)),
        );
    };
    let series = f.maclaurin(n as usize);
    let p = minimal_period(&series.coeffs()[1..]);
    let l = lcm(p as u64, f.conductor());
    let zeta = CycElem::zeta_pow(l, (l / p as u64) as i64);
    let a = series.coeffs()[1..=p].to_vec();
    let residues = residues_dft(&a, &zeta)?;
    let mut rational = Vec::with_capacity(p);
    for (j, r) in residues.iter().enumerate() {
        match r.as_rational() {
            Some(q) => rational.push(q),
            None => {
                return reject(
                    RejectReason::IrrationalResidue,
                    format!("A_{} = {}", j + 1, r),
                )
            }
        }
    }
    let (zeta, rational) = normalize_zeta(zeta, rational);
    let form = AbelianForm {
        period: p as u64,
        zeta,
        residues: rational,
    };
    check_soundness(f, &form)?;
    Ok(Verdict::Abelian(form))
}

/// Replaces `ζ` by `ζ^j` for the least `j` coprime to `P` with `A_j ≠ 0`,
/// so that `A_1 ≠ 0` whenever possible.
fn normalize_zeta(zeta: CycElem, a: Vec<Rational>) -> (CycElem, Vec<Rational>) {
    let p = a.len();
    let Some(j) = (1..=p).find(|&j| {
        crate::primes::gcd(j as u64, p as u64) == 1 && !num_traits::Zero::is_zero(&a[j - 1])
    }) else {
        return (zeta, a);
    };
    if j == 1 {
        return (zeta, a);
    }
    // a_n = Σ_k A_{kj} (ζ^j)^{kn}
    let reindexed = (1..=p)
        .map(|k| {
            let idx = (k * j) % p;
            a[if idx == 0 { p - 1 } else { idx - 1 }].clone()
        })
        .collect();
    (zeta.pow(j as u64), reindexed)
}

fn check_soundness(f: &RatFunc, form: &AbelianForm) -> Result<()> {
    let m = form.zeta.conductor();
    let f = f.promote(m)?;
    let p = form.period as usize;
    let residues: Vec<CycElem> = form
        .residues
        .iter()
        .map(|r| CycElem::from_rational(m, r))
        .collect();
    let zero = CycElem::zero(m);
    let mut g = vec![zero.clone()];
    g.extend(resynthesize_coeffs(&form.zeta, &residues, p));
    let g = Poly::new(g, zero.clone());
    let one_minus = Poly::constant(CycElem::one(m)).sub(&Poly::monomial(CycElem::one(m), p));
    if f.num.mul(&one_minus) == g.mul(&f.den) {
        Ok(())
    } else {
        Err(Error::Soundness(format!(
            "normal form with period {p} does not reproduce F = {}/{}",
            poly_text(&f.num),
            poly_text(&f.den)
        )))
    }
}
