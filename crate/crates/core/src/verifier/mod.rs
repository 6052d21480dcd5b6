//! Finite-window verification of the local s-function property.
//!
//! For a sequence `(a_n)` over `Q(ζ_M)`, a prime `p ∤ M` outside the excluded
//! set and `s >= 1`, the property asks that every `a_n` is `p`-integral and
//! that `Frob_p(a_{mp^{r−1}}) ≡ a_{mp^r} mod p^{sr}` for all `m, r >= 1`.
//!
//! [`check_local_s`] tests this on `m <= m_max`, `1 <= r <= r_max`. The
//! Cartier-form check in [`criteria`] measures exactly the same differences.
//! The b- and q-checks measure their own quantities at `n = mp^r` with
//! `p ∤ m <= m_max`; a failure of the direct check at `(m, r)` with `p ∤ m`
//! shows up in both of them.

pub mod convert;
pub mod criteria;
pub mod dwork;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::primes::{is_prime, lcm, primes_up_to};
use crate::{CycElem, Error, ExtOrder, Result, TruncSeries};

pub use convert::{a_to_b, a_to_q, b_to_a, q_to_a};
pub use criteria::{b_criterion_check, cartier_criterion_check, q_criterion_check};
pub use dwork::{dwork_test, DworkReport};

type Generator = Arc<dyn Fn(u64) -> CycElem + Send + Sync>;

/// A deterministic sequence `a_1, a_2, …, a_horizon` with metadata.
///
/// Values are produced on demand and memoized; the generator may return
/// elements of any conductor dividing the declared one.
#[derive(Clone)]
pub struct SequenceSource {
    name: String,
    conductor: u64,
    excluded: Vec<u64>,
    horizon: u64,
    gen: Generator,
    cache: Arc<Mutex<HashMap<u64, CycElem>>>,
}

impl fmt::Debug for SequenceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceSource")
            .field("name", &self.name)
            .field("conductor", &self.conductor)
            .field("excluded", &self.excluded)
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl SequenceSource {
    pub fn new(
        name: impl Into<String>,
        conductor: u64,
        excluded: Vec<u64>,
        horizon: u64,
        gen: impl Fn(u64) -> CycElem + Send + Sync + 'static,
    ) -> SequenceSource {
        let mut excluded = excluded;
        excluded.sort_unstable();
        excluded.dedup();
        SequenceSource {
            name: name.into(),
            conductor,
            excluded,
            horizon,
            gen: Arc::new(gen),
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    /// A finite source holding `a_1..a_H` explicitly.
    pub fn from_values(
        name: impl Into<String>,
        excluded: Vec<u64>,
        values: Vec<CycElem>,
    ) -> Result<SequenceSource> {
        let m = values.iter().fold(1, |acc, c| lcm(acc, c.conductor()));
        let values = values.iter().map(|c| c.promote(m)).collect::<Result<Vec<_>>>()?;
        let horizon = values.len() as u64;
        let values = Arc::new(values);
        Ok(SequenceSource::new(name, m, excluded, horizon, move |n| {
            values[(n - 1) as usize].clone()
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn excluded(&self) -> &[u64] {
        &self.excluded
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// A copy with a different horizon (sharing the memo).
    pub fn with_horizon(&self, horizon: u64) -> SequenceSource {
        SequenceSource {
            horizon,
            ..self.clone()
        }
    }

    /// A copy with additional excluded primes.
    pub fn with_excluded(&self, extra: &[u64]) -> SequenceSource {
        let mut excluded = self.excluded.clone();
        excluded.extend_from_slice(extra);
        excluded.sort_unstable();
        excluded.dedup();
        SequenceSource {
            excluded,
            ..self.clone()
        }
    }

    /// `a_n` for `1 <= n <= horizon`, in the declared conductor.
    pub fn get(&self, n: u64) -> Result<CycElem> {
        if n == 0 || n > self.horizon {
            return Err(Error::InsufficientHorizon {
                horizon: self.horizon,
                needed: n,
            });
        }
        if let Some(v) = self.cache.lock().unwrap().get(&n) {
            return Ok(v.clone());
        }
        let v = (self.gen)(n).promote(self.conductor)?;
        self.cache.lock().unwrap().insert(n, v.clone());
        Ok(v)
    }

    /// `a_1..=a_n`.
    pub fn prefix(&self, n: u64) -> Result<Vec<CycElem>> {
        (1..=n).map(|k| self.get(k)).collect()
    }

    /// `V(z) = Σ_{n=1}^{T} a_n z^n`.
    pub fn series(&self, t: u64) -> Result<TruncSeries<CycElem>> {
        let mut coeffs = vec![CycElem::zero(self.conductor)];
        coeffs.extend(self.prefix(t)?);
        TruncSeries::new(coeffs)
    }

    /// The coefficient-wise product `(a_n b_n)`.
    pub fn hadamard(&self, other: &SequenceSource) -> SequenceSource {
        let m = lcm(self.conductor, other.conductor);
        let (a, b) = (self.clone(), other.clone());
        let mut excluded = self.excluded.clone();
        excluded.extend_from_slice(&other.excluded);
        SequenceSource::new(
            format!("{}*{}", self.name, other.name),
            m,
            excluded,
            self.horizon.min(other.horizon),
            move |n| {
                let x = a.get(n).and_then(|x| x.promote(m)).expect("within horizon");
                let y = b.get(n).and_then(|y| y.promote(m)).expect("within horizon");
                &x * &y
            },
        )
    }

    /// Primes `p <= p_max` that are unramified and not excluded.
    pub fn window_primes(&self, p_max: u64) -> Vec<u64> {
        primes_up_to(p_max)
            .into_iter()
            .filter(|&p| self.conductor % p != 0 && !self.excluded.contains(&p))
            .collect()
    }

    /// Validates a prime for local checks.
    pub fn require_checkable(&self, p: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if self.conductor % p == 0 {
            return Err(Error::RamifiedPrime {
                p,
                conductor: self.conductor,
            });
        }
        if self.excluded.contains(&p) {
            return Err(Error::ExcludedPrime(p));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// `Frob_p(a_{mp^{r−1}}) − a_{mp^r}` against `sr`.
    Congruence,
    /// `a_n` against `0`.
    Integrality,
    /// Coefficient `m` of `C_p^{r−1}(Frob_p V − C_p V)` against `sr`.
    CartierCongruence,
    /// Coefficient `n` of `V − ε_p C_p V` against `0`.
    CartierIntegrality,
    /// `Σ_i (Frob_p(b_{n/p^i}) − b_{n/p^i})/p^{si} − b_n` against `0`.
    BCriterion,
    /// `q_n` against `0`.
    QIntegrality,
    /// The product-form combination `Q_n` against `(s−1)·ord_p(n) + s`.
    QCriterion,
}

/// One valuation measurement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub kind: CheckKind,
    pub p: u64,
    pub s: u32,
    pub m: u64,
    pub r: u32,
    /// The sequence index the measured quantity is attached to.
    pub n: u64,
    pub order: ExtOrder,
    pub required: i64,
    pub pass: bool,
}

impl CheckRecord {
    pub(crate) fn new(
        kind: CheckKind,
        (p, s): (u64, u32),
        (m, r, n): (u64, u32, u64),
        order: ExtOrder,
        required: i64,
    ) -> CheckRecord {
        CheckRecord {
            kind,
            p,
            s,
            m,
            r,
            n,
            order,
            required,
            pass: order.at_least(required),
        }
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} p={} s={} m={} r={} n={}: order {} vs required {} ({})",
            self.kind,
            self.p,
            self.s,
            self.m,
            self.r,
            self.n,
            self.order,
            self.required,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeWindow {
    pub p: u64,
    pub m_max: u64,
    pub r_max: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub tested: usize,
    pub failed: usize,
    pub first_failure: Option<CheckRecord>,
}

/// Pass/fail records of a family of local checks, with the exact window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongruenceReport {
    pub sequence: String,
    pub s: u32,
    pub windows: Vec<PrimeWindow>,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl CongruenceReport {
    pub fn new(
        sequence: impl Into<String>,
        s: u32,
        windows: Vec<PrimeWindow>,
        records: Vec<CheckRecord>,
    ) -> CongruenceReport {
        let failed: Vec<&CheckRecord> = records.iter().filter(|r| !r.pass).collect();
        let summary = Summary {
            tested: records.len(),
            failed: failed.len(),
            first_failure: failed.first().map(|r| (*r).clone()),
        };
        CongruenceReport {
            sequence: sequence.into(),
            s,
            windows,
            records,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// Concatenates reports in the given order.
    pub fn merge(sequence: impl Into<String>, s: u32, parts: Vec<CongruenceReport>) -> CongruenceReport {
        let mut windows = Vec::new();
        let mut records = Vec::new();
        for part in parts {
            windows.extend(part.windows);
            records.extend(part.records);
        }
        CongruenceReport::new(sequence, s, windows, records)
    }
}

/// `m` in `1..=m_max` with `p ∤ m`.
pub(crate) fn coprime_range(m_max: u64, p: u64) -> impl Iterator<Item = u64> {
    (1..=m_max).filter(move |m| m % p != 0)
}

pub(crate) fn require_window(horizon: u64, p: u64, m_max: u64, r_max: u32) -> Result<()> {
    let needed = p
        .checked_pow(r_max)
        .and_then(|q| q.checked_mul(m_max))
        .unwrap_or(u64::MAX);
    if needed > horizon {
        return Err(Error::InsufficientHorizon { horizon, needed });
    }
    Ok(())
}

/// Direct check of the local s-function property at `p`.
///
/// Records `ord_p(Frob_p(a_{mp^{r−1}}) − a_{mp^r})` against `sr` for
/// `m <= m_max`, `1 <= r <= r_max`, and the integrality of every index
/// `mp^r`, `0 <= r <= r_max`, touched by the window.
pub fn check_local_s(
    src: &SequenceSource,
    p: u64,
    s: u32,
    m_max: u64,
    r_max: u32,
) -> Result<CongruenceReport> {
    src.require_checkable(p)?;
    require_window(src.horizon(), p, m_max, r_max)?;
    let ms: Vec<u64> = (1..=m_max).collect();
    let congruences: Vec<Vec<CheckRecord>> = ms
        .par_iter()
        .map(|&m| -> Result<Vec<CheckRecord>> {
            let mut out = Vec::new();
            let mut prev = src.get(m)?;
            let mut n = m;
            for r in 1..=r_max {
                n *= p;
                let cur = src.get(n)?;
                let diff = &prev.frobenius(p)? - &cur;
                out.push(CheckRecord::new(
                    CheckKind::Congruence,
                    (p, s),
                    (m, r, n),
                    diff.padic_order(p)?,
                    s as i64 * r as i64,
                ));
                prev = cur;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut indices: Vec<(u64, u64, u32)> = Vec::new();
    for m in 1..=m_max {
        for r in 0..=r_max {
            indices.push((m * p.pow(r), m, r));
        }
    }
    indices.sort_unstable();
    indices.dedup_by_key(|t| t.0);
    let integrality = indices
        .into_iter()
        .map(|(n, m, r)| {
            Ok(CheckRecord::new(
                CheckKind::Integrality,
                (p, s),
                (m, r, n),
                src.get(n)?.padic_order(p)?,
                0,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records = integrality;
    records.extend(congruences.into_iter().flatten());
    Ok(CongruenceReport::new(
        src.name(),
        s,
        vec![PrimeWindow { p, m_max, r_max }],
        records,
    ))
}

/// Aggregates [`check_local_s`] over a list of primes.
pub fn verify_s_sequence(
    src: &SequenceSource,
    s: u32,
    primes: &[u64],
    m_max: u64,
    r_max: u32,
) -> Result<CongruenceReport> {
    let parts = primes
        .par_iter()
        .map(|&p| check_local_s(src, p, s, m_max, r_max))
        .collect::<Result<Vec<_>>>()?;
    Ok(CongruenceReport::merge(src.name(), s, parts))
}

/// Largest `r <= r_max` with `m_max·p^r <= horizon`.
pub fn capped_r(horizon: u64, p: u64, m_max: u64, r_max: u32) -> u32 {
    (0..=r_max)
        .rev()
        .find(|&r| require_window(horizon, p, m_max, r).is_ok())
        .unwrap_or(0)
}

/// [`verify_s_sequence`] on the window primes `p <= p_max`, with `r` capped
/// per prime by the horizon. Primes admitting no `r >= 1` are skipped; the
/// effective window is recorded in the report.
pub fn verify_window(
    src: &SequenceSource,
    s: u32,
    p_max: u64,
    m_max: u64,
    r_max: u32,
) -> Result<CongruenceReport> {
    let parts = src
        .window_primes(p_max)
        .into_par_iter()
        .filter_map(|p| {
            let r = capped_r(src.horizon(), p, m_max, r_max);
            (r >= 1).then(|| check_local_s(src, p, s, m_max, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CongruenceReport::merge(src.name(), s, parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn geometric(c: i64, horizon: u64) -> SequenceSource {
        let c = CycElem::from_int(1, c);
        SequenceSource::new(format!("geometric({c})"), 1, vec![], horizon, move |n| c.pow(n))
    }

    #[test]
    fn euler_examples() {
        let rep = check_local_s(&geometric(2, 100), 3, 1, 3, 3).unwrap();
        assert!(rep.passed(), "{:?}", rep.summary);
        let rep = check_local_s(&geometric(2, 100), 3, 2, 3, 3).unwrap();
        let f = rep.summary.first_failure.clone().unwrap();
        assert_eq!((f.kind, f.m, f.r), (CheckKind::Congruence, 1, 1));
        let at = |m, r| {
            rep.records
                .iter()
                .find(|x| x.kind == CheckKind::Congruence && (x.m, x.r) == (m, r))
                .unwrap()
        };
        // 2^9 − 2^3 = 2^3·63 and 2^27 − 2^9 = 2^9·511·513
        assert_eq!((at(1, 2).order, at(1, 2).required), (ExtOrder::Finite(2), 4));
        assert_eq!((at(3, 2).order, at(3, 2).required), (ExtOrder::Finite(3), 4));
        assert!(!at(3, 2).pass && at(3, 1).pass);
        let ones = geometric(1, 2000);
        for p in [2, 3, 5, 7] {
            for s in 1..5 {
                assert!(check_local_s(&ones, p, s, 4, 3).unwrap().passed());
            }
        }
    }

    #[test]
    fn precondition_errors() {
        let g = geometric(2, 10);
        assert_eq!(
            check_local_s(&g, 3, 1, 2, 2).unwrap_err(),
            Error::InsufficientHorizon { horizon: 10, needed: 18 }
        );
        let g = g.with_excluded(&[3]);
        assert_eq!(check_local_s(&g, 3, 1, 1, 1).unwrap_err(), Error::ExcludedPrime(3));
        let z = SequenceSource::new("zeta3", 3, vec![], 100, |n| CycElem::zeta(3).pow(n));
        assert_eq!(
            check_local_s(&z, 3, 1, 1, 1).unwrap_err(),
            Error::RamifiedPrime { p: 3, conductor: 3 }
        );
        assert_eq!(check_local_s(&z, 4, 1, 1, 1).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn periodic_sign_passes_at_odd_primes() {
        let alt = SequenceSource::new("alt", 1, vec![], 20000, |n| {
            CycElem::from_int(1, if n % 2 == 0 { 1 } else { -1 })
        });
        let primes: Vec<u64> = alt.window_primes(50).into_iter().filter(|&p| p != 2).collect();
        let rep = verify_window(&alt.with_excluded(&[2]), 2, 50, 8, 3).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.windows.len(), primes.len());
    }

    #[test]
    fn nonintegral_value_is_reported() {
        let src = SequenceSource::from_values(
            "half",
            vec![],
            (1..=50).map(|_| CycElem::from_rational(1, &Rational::new(1.into(), 2.into()))).collect(),
        )
        .unwrap();
        let rep = check_local_s(&src, 2, 1, 3, 2).unwrap();
        assert!(rep.failures().all(|r| r.kind == CheckKind::Integrality));
        assert!(!rep.passed());
        assert!(check_local_s(&src, 3, 1, 3, 2).unwrap().passed());
    }

    #[test]
    fn chain_containment() {
        // a pass at s implies a pass at s − 1 because the thresholds shrink
        let g = geometric(3, 2000);
        for p in [5, 7, 11] {
            let hi = check_local_s(&g, p, 1, 4, 2).unwrap();
            for rec in &hi.records {
                let lower = rec.required - if rec.kind == CheckKind::Congruence { rec.r as i64 } else { 0 };
                assert!(!rec.pass || rec.order.at_least(lower));
            }
        }
    }

    #[test]
    fn hadamard_inner_congruence() {
        let a = geometric(2, 1000);
        let b = geometric(5, 1000);
        let ab = a.hadamard(&b);
        for p in [3, 7] {
            assert!(check_local_s(&ab, p, 1, 3, 2).unwrap().passed());
            for n in 1..=5u64 {
                let lhs = &ab.get(n).unwrap().frobenius(p).unwrap() - &ab.get(n * p).unwrap();
                let rhs = &a.get(n * p).unwrap()
                    * &(&b.get(n).unwrap().frobenius(p).unwrap() - &b.get(n * p).unwrap());
                assert!(lhs.congruent_mod(&rhs, p, 1).unwrap());
            }
        }
    }
}
