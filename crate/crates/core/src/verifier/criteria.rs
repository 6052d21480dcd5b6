//! Reformulations of the local s-function property.
//!
//! * Cartier form: coefficient `m <= m_max` of `C_p^{r−1}(Frob_p V − C_p V)`
//!   must have order `>= sr`, and `V − ε_p C_p V` must be `p`-integral.
//!
//! The b- and q-forms use `n = mp^r` with `p ∤ m <= m_max`:
//!
//! * b-representation: `X_n = Σ_{i=1}^{ord_p n} (Frob_p(b_{n/p^i}) − b_{n/p^i})/p^{si} − b_n`
//!   must be `p`-integral for `n = mp^r`, `0 <= r <= r_max`.
//! * q-representation: `q_m` must be `p`-integral and
//!   `Q_n = Σ_{d|n} (Frob_p(q_{n/d}^d) − q_{n/d}^{pd})/d − p Σ_{d|n, p∤d} q_{np/d}^d/d`
//!   must have order `>= (s−1)·ord_p(n) + s` for `n = mp^{r−1}`.
//!   This rests on the identity `Frob_p(a_n) − a_{np} = n·Q_n`.

use rayon::prelude::*;

use super::{coprime_range, require_window, CheckKind, CheckRecord, CongruenceReport, PrimeWindow};
use crate::primes::{divisors, require_prime};
use crate::{CycElem, Error, Rational, Result, TruncSeries};

fn rat(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

fn require_unramified(like: &CycElem, p: u64) -> Result<()> {
    require_prime(p)?;
    if like.conductor() % p == 0 {
        return Err(Error::RamifiedPrime {
            p,
            conductor: like.conductor(),
        });
    }
    Ok(())
}

fn first(v: &[CycElem]) -> Result<&CycElem> {
    v.first()
        .ok_or_else(|| Error::InvalidInput("empty sequence".into()))
}

/// Checks the b-representation criterion. `b` holds `b_1..b_H`.
pub fn b_criterion_check(
    b: &[CycElem],
    s: u32,
    p: u64,
    m_max: u64,
    r_max: u32,
) -> Result<CongruenceReport> {
    require_unramified(first(b)?, p)?;
    require_window(b.len() as u64, p, m_max, r_max)?;
    let get = |n: u64| &b[n as usize - 1];
    let ps = rat(p).pow(s as i32);
    let ms: Vec<u64> = coprime_range(m_max, p).collect();
    let records: Vec<Vec<CheckRecord>> = ms
        .par_iter()
        .map(|&m| -> Result<Vec<CheckRecord>> {
            let mut out = Vec::new();
            for r in 0..=r_max {
                let n = m * p.pow(r);
                let mut x = -get(n);
                let mut scale = Rational::from_integer(1.into());
                for i in 1..=r {
                    scale /= &ps;
                    let bi = get(n / p.pow(i));
                    x = &x + &(&bi.frobenius(p)? - bi).scale(&scale);
                }
                out.push(CheckRecord::new(
                    CheckKind::BCriterion,
                    (p, s),
                    (m, r, n),
                    x.padic_order(p)?,
                    0,
                ));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(CongruenceReport::new(
        "b",
        s,
        vec![PrimeWindow { p, m_max, r_max }],
        records.into_iter().flatten().collect(),
    ))
}

/// The product-form combination `Q_n`; `q` holds `q_1..q_H` with `H >= np`.
pub fn q_combination(q: &[CycElem], p: u64, n: u64) -> Result<CycElem> {
    let get = |k: u64| &q[k as usize - 1];
    let mut acc = CycElem::zero(first(q)?.conductor());
    for d in divisors(n) {
        let base = get(n / d);
        if !base.is_zero() {
            let qd = base.pow(d);
            let term = &qd.frobenius(p)? - &qd.pow(p);
            acc = &acc + &term.scale(&rat(d).recip());
        }
        if d % p != 0 {
            let base = get(n * p / d);
            if !base.is_zero() {
                acc = &acc - &base.pow(d).scale(&Rational::new(p.into(), d.into()));
            }
        }
    }
    Ok(acc)
}

/// Checks the q-representation criterion. `q` holds `q_1..q_H`.
pub fn q_criterion_check(
    q: &[CycElem],
    s: u32,
    p: u64,
    m_max: u64,
    r_max: u32,
) -> Result<CongruenceReport> {
    require_unramified(first(q)?, p)?;
    require_window(q.len() as u64, p, m_max, r_max)?;
    let ms: Vec<u64> = coprime_range(m_max, p).collect();
    let records: Vec<Vec<CheckRecord>> = ms
        .par_iter()
        .map(|&m| -> Result<Vec<CheckRecord>> {
            let mut out = vec![CheckRecord::new(
                CheckKind::QIntegrality,
                (p, s),
                (m, 0, m),
                q[m as usize - 1].padic_order(p)?,
                0,
            )];
            for r in 1..=r_max {
                let n = m * p.pow(r - 1);
                let required = (s as i64 - 1) * (r as i64 - 1) + s as i64;
                out.push(CheckRecord::new(
                    CheckKind::QCriterion,
                    (p, s),
                    (m, r, n),
                    q_combination(q, p, n)?.padic_order(p)?,
                    required,
                ));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(CongruenceReport::new(
        "q",
        s,
        vec![PrimeWindow { p, m_max, r_max }],
        records.into_iter().flatten().collect(),
    ))
}

/// Checks the Cartier-form criterion on `V = Σ a_n z^n` through the series
/// operators.
pub fn cartier_criterion_check(
    v: &TruncSeries<CycElem>,
    s: u32,
    p: u64,
    m_max: u64,
    r_max: u32,
) -> Result<CongruenceReport> {
    require_unramified(&v.coeffs()[0], p)?;
    let t = v.truncation();
    let needed = (m_max as usize).saturating_mul((p as usize).saturating_pow(r_max));
    if t < needed {
        return Err(Error::InsufficientTruncation { truncation: t, needed });
    }
    let cv = v.cartier(p as usize);
    let mut w = v.truncate(cv.truncation())?.frobenius(p)?.sub(&cv)?;
    let mut records = Vec::new();
    for r in 1..=r_max {
        if r > 1 {
            w = w.cartier(p as usize);
        }
        for m in 1..=m_max {
            records.push(CheckRecord::new(
                CheckKind::CartierCongruence,
                (p, s),
                (m, r, m * p.pow(r)),
                w.coeff(m as usize)?.padic_order(p)?,
                s as i64 * r as i64,
            ));
        }
    }
    let u = v.sub(&cv.epsilon(p as usize, 0))?;
    for m in coprime_range(m_max, p) {
        records.push(CheckRecord::new(
            CheckKind::CartierIntegrality,
            (p, s),
            (m, 0, m),
            u.coeff(m as usize)?.padic_order(p)?,
            0,
        ));
    }
    Ok(CongruenceReport::new(
        "cartier",
        s,
        vec![PrimeWindow { p, m_max, r_max }],
        records,
    ))
}
