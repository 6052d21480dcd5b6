//! Finite-precision experiments with the error terms
//! `ρ_n(m) = (x^{mp^n} − x^{mp^{n−1}}) / p^n` and `κ = ord_p ρ_1(1)`.
//!
//! `Z_p` is modelled as `Z/p^K`. A quantity that is zero modulo the working
//! precision has order "at least K"; any assertion that would need more than
//! the available precision is reported as [`Outcome::Indistinguishable`],
//! never as a pass.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::primes::require_prime;
use crate::valuation::int_ord;
use crate::{Error, Result};

/// `ord_p` as far as a residue modulo `p^K` can tell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Known {
    Exact(u32),
    AtLeast(u32),
}

impl Known {
    pub fn exact(self) -> Option<u32> {
        match self {
            Known::Exact(k) => Some(k),
            Known::AtLeast(_) => None,
        }
    }

    /// Both could be the order of the same element.
    pub fn compatible(self, other: Known) -> bool {
        match (self, other) {
            (Known::Exact(a), Known::Exact(b)) => a == b,
            (Known::Exact(a), Known::AtLeast(b)) | (Known::AtLeast(b), Known::Exact(a)) => a >= b,
            (Known::AtLeast(_), Known::AtLeast(_)) => true,
        }
    }

    /// Certainly `>= k`.
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Known::Exact(v) | Known::AtLeast(v) => v >= k,
        }
    }
}

impl fmt::Display for Known {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Known::Exact(k) => write!(f, "{k}"),
            Known::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

impl Serialize for Known {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Known::Exact(k) => s.serialize_u32(*k),
            Known::AtLeast(_) => s.collect_str(self),
        }
    }
}

/// An element of `Z_p` known modulo `p^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicApprox {
    pub p: u64,
    pub precision: u32,
    #[serde(serialize_with = "as_string")]
    pub value: BigInt,
    pub order: Known,
}

fn as_string<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl PadicApprox {
    pub fn new(x: &BigInt, p: u64, precision: u32) -> Result<PadicApprox> {
        require_prime(p)?;
        let value = x.mod_floor(&modulus(p, precision));
        let order = known_order(&value, p, precision);
        Ok(PadicApprox {
            p,
            precision,
            value,
            order,
        })
    }

    /// `self ≡ other` modulo `p^e`, or `None` when `e` exceeds either precision.
    pub fn congruent(&self, other: &PadicApprox, e: u32) -> Option<bool> {
        if e > self.precision.min(other.precision) {
            return None;
        }
        let d = &self.value - &other.value;
        Some(d.is_multiple_of(&modulus(self.p, e)))
    }
}

fn modulus(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

fn known_order(v: &BigInt, p: u64, precision: u32) -> Known {
    if v.is_zero() {
        Known::AtLeast(precision)
    } else {
        Known::Exact(int_ord(v, p) as u32)
    }
}

/// Result of a single congruence test at finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Indistinguishable,
}

impl Outcome {
    fn from_check(c: Option<bool>) -> Outcome {
        match c {
            Some(true) => Outcome::Pass,
            Some(false) => Outcome::Fail,
            None => Outcome::Indistinguishable,
        }
    }
}

fn require_unit(x: &BigInt, p: u64) -> Result<()> {
    require_prime(p)?;
    if x.is_multiple_of(&BigInt::from(p)) {
        return Err(Error::NotAUnit {
            x: x.to_string(),
            p,
        });
    }
    Ok(())
}

/// `x^{mp^n} − x^{mp^{n−1}}` modulo `p^K`.
fn frobenius_gap(x: &BigInt, p: u64, n: u32, m: u64, k: u32) -> BigInt {
    let pk = modulus(p, k);
    let e1 = BigInt::from(m) * BigInt::from(p).pow(n);
    let e0 = BigInt::from(m) * BigInt::from(p).pow(n - 1);
    let x = x.mod_floor(&pk);
    (x.modpow(&e1, &pk) - x.modpow(&e0, &pk)).mod_floor(&pk)
}

/// `ρ_n(m)` modulo `p^{K−n}`.
pub fn rho(x: &BigInt, p: u64, n: u32, m: u64, k: u32) -> Result<PadicApprox> {
    require_unit(x, p)?;
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("rho needs n >= 1 and m >= 1".into()));
    }
    if k <= n {
        return Err(Error::InsufficientPrecision {
            precision: k,
            needed: n,
        });
    }
    let gap = frobenius_gap(x, p, n, m, k);
    let pn = modulus(p, n);
    if !gap.is_multiple_of(&pn) {
        return Err(Error::Soundness(format!(
            "p^{n} does not divide x^(m p^n) - x^(m p^(n-1)) for x = {x}, p = {p}, m = {m}"
        )));
    }
    PadicApprox::new(&(gap / pn), p, k - n)
}

/// `κ = ord_p ρ_1(1)`; `AtLeast(K−1)` when indistinguishable from `+∞`.
pub fn kappa(x: &BigInt, p: u64, k: u32) -> Result<Known> {
    Ok(rho(x, p, 1, 1, k)?.order)
}

/// `K = 2·n_max + 2·κ + 4`, with `κ` estimated from `ρ_1(1)` at a probe
/// precision and capped there.
pub fn default_precision(x: &BigInt, p: u64, n_max: u32) -> Result<u32> {
    let probe = 2 * n_max + 8;
    let kb = match kappa(x, p, probe)? {
        Known::Exact(k) | Known::AtLeast(k) => k,
    };
    Ok(2 * n_max + 2 * kb + 4)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoRecord {
    pub m: u64,
    pub n: u32,
    /// Exponent `e` of the modulus `p^e`; `None` when `κ` is unknown.
    pub modulus: Option<u32>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoReport {
    pub x: String,
    pub p: u64,
    pub precision: u32,
    /// `κ(m)` for each tested `m`, in order.
    pub kappas: Vec<(u64, Known)>,
    /// `κ_n(m)` agrees with `κ_1(m)` wherever both are determined.
    pub kappa_constant: bool,
    pub records: Vec<RhoRecord>,
}

impl RhoReport {
    pub fn violations(&self) -> usize {
        self.records.iter().filter(|r| r.outcome == Outcome::Fail).count()
    }

    pub fn holds(&self) -> bool {
        self.violations() == 0 && self.kappa_constant
    }

    /// Every record was beyond the available precision.
    pub fn vacuous(&self) -> bool {
        self.records.iter().all(|r| r.outcome == Outcome::Indistinguishable)
    }
}

fn tested_ms(m_max: u64, p: u64) -> Vec<u64> {
    (1..=m_max).filter(|m| m % p != 0).collect()
}

fn require_odd(p: u64) -> Result<()> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::InvalidInput("this check assumes p > 2".into()));
    }
    Ok(())
}

/// Checks `ρ_{n+1}(m) ≡ ρ_n(m) mod p^{n+2κ(m)}` and `κ_n(m) = κ_1(m)` for
/// `1 <= n <= n_max` and `m <= m_max` with `p ∤ m`.
pub fn check_rho_stability(x: &BigInt, p: u64, m_max: u64, n_max: u32, k: u32) -> Result<RhoReport> {
    require_odd(p)?;
    require_unit(x, p)?;
    if k <= n_max + 1 {
        return Err(Error::InsufficientPrecision {
            precision: k,
            needed: n_max + 1,
        });
    }
    let mut kappas = Vec::new();
    let mut records = Vec::new();
    let mut kappa_constant = true;
    for m in tested_ms(m_max, p) {
        let rhos = (1..=n_max + 1)
            .map(|n| rho(x, p, n, m, k))
            .collect::<Result<Vec<_>>>()?;
        let kap = rhos[0].order;
        kappas.push((m, kap));
        kappa_constant &= rhos[1..].iter().all(|r| kap.compatible(r.order));
        for n in 1..=n_max {
            let e = kap.exact().map(|kp| n + 2 * kp);
            let outcome = match e {
                Some(e) => Outcome::from_check(rhos[n as usize].congruent(&rhos[n as usize - 1], e)),
                None => Outcome::Indistinguishable,
            };
            records.push(RhoRecord {
                m,
                n,
                modulus: e,
                outcome,
            });
        }
    }
    Ok(RhoReport {
        x: x.to_string(),
        p,
        precision: k,
        kappas,
        kappa_constant,
        records,
    })
}

/// Checks `ρ_n(m) ≡ m x^{(m−1)p^{n−1}} ρ_n(1) mod p^{n+2κ}` for `m <= m_max`
/// with `p ∤ m`, and that `κ(m) = κ(1)`.
pub fn check_rho_m_scaling(x: &BigInt, p: u64, m_max: u64, n: u32, k: u32) -> Result<RhoReport> {
    require_odd(p)?;
    require_unit(x, p)?;
    let base = rho(x, p, n, 1, k)?;
    let kap = kappa(x, p, k)?;
    let prec = k - n;
    let pk = modulus(p, prec);
    let mut kappas = Vec::new();
    let mut records = Vec::new();
    let mut kappa_constant = true;
    for m in tested_ms(m_max, p) {
        let lhs = rho(x, p, n, m, k)?;
        let km = rho(x, p, 1, m, k)?.order;
        kappas.push((m, km));
        kappa_constant &= kap.compatible(km);
        let e = BigInt::from(m - 1) * BigInt::from(p).pow(n - 1);
        let factor = x.mod_floor(&pk).modpow(&e, &pk) * BigInt::from(m);
        let rhs = PadicApprox::new(&(factor * &base.value), p, prec)?;
        let modulus = kap.exact().map(|kp| n + 2 * kp);
        let outcome = match modulus {
            Some(e) => Outcome::from_check(lhs.congruent(&rhs, e)),
            None => Outcome::Indistinguishable,
        };
        records.push(RhoRecord {
            m,
            n,
            modulus,
            outcome,
        });
    }
    Ok(RhoReport {
        x: x.to_string(),
        p,
        precision: k,
        kappas,
        kappa_constant,
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub x: String,
    pub p: u64,
    pub precision: u32,
    /// No violation among the decidable `n`; evidence only, never a proof.
    pub consistent_with_root_of_unity: bool,
    pub first_violation: Option<u32>,
    /// `ord_p(x^{p^n} − x^{p^{n−1}})` for `n = 1..=n_max`.
    pub orders: Vec<Known>,
    /// `n` whose threshold `2n` exceeds the precision and was not decided.
    pub undecided: Vec<u32>,
}

/// Tests `x^{p^n} ≡ x^{p^{n−1}} mod p^{2n}` for `n <= n_max`. A violation
/// certifies that `x` is not a root of unity in `Z_p`. At `p = 2` the
/// threshold is tested as stated although the stability results assume `p > 2`.
pub fn root_of_unity_probe(x: &BigInt, p: u64, n_max: u32, k: u32) -> Result<ProbeReport> {
    require_unit(x, p)?;
    let mut orders = Vec::new();
    let mut undecided = Vec::new();
    let mut first_violation = None;
    for n in 1..=n_max {
        let ord = known_order(&frobenius_gap(x, p, n, 1, k), p, k);
        orders.push(ord);
        match ord {
            Known::Exact(v) if v < 2 * n => {
                first_violation.get_or_insert(n);
            }
            Known::AtLeast(v) if v < 2 * n => undecided.push(n),
            _ => {}
        }
    }
    Ok(ProbeReport {
        x: x.to_string(),
        p,
        precision: k,
        consistent_with_root_of_unity: first_violation.is_none(),
        first_violation,
        orders,
        undecided,
    })
}

/// The Teichmüller lift of `a` modulo `p^K`: the `(p−1)`-th root of unity
/// congruent to `a` mod `p`.
pub fn teichmuller(a: &BigInt, p: u64, k: u32) -> Result<BigInt> {
    require_unit(a, p)?;
    let pk = modulus(p, k);
    let bp = BigInt::from(p);
    let mut x = a.mod_floor(&pk);
    // x ↦ x^p gains one digit per step
    for _ in 0..k {
        x = x.modpow(&bp, &pk);
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyRecord {
    pub m: u64,
    pub n: u32,
    pub order: Known,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VandermondeReport {
    pub p: u64,
    pub precision: u32,
    /// `κ_i = ord_p ρ_{i,1}(1)`.
    pub kappas: Vec<Known>,
    pub kappa: Known,
    /// `ord_p(Π B_i · Π_{k<l} (x_l − x_k))`; zero under the preconditions.
    pub determinant_order: u32,
    /// `1 + 2κ` when `κ` is determined.
    pub system_modulus: Option<u32>,
    /// Orders of `(Σ_i B_i x_i^j ρ_{i,1}(1))_j`, the right-hand side of the system.
    pub residual_orders: Vec<Known>,
    /// Solving the system mod `p^{1+2κ}` returns the `ρ_{i,1}(1)`.
    pub solution_recovers_rho: Option<bool>,
    /// `Σ B_i (x_i^{mp^n} − x_i^{mp^{n−1}}) ≡ 0 mod p^{2n}` on the window.
    pub family_holds: bool,
    pub first_family_failure: Option<FamilyRecord>,
    pub records: Vec<FamilyRecord>,
}

impl VandermondeReport {
    /// The family holding forces the residual to vanish mod `p^{1+2κ}`, which
    /// the unit determinant turns into `ρ ≡ 0`, contradicting the value of `κ`.
    pub fn residual_vanishes(&self) -> Option<bool> {
        self.system_modulus
            .map(|e| self.residual_orders.iter().all(|o| o.at_least(e)))
    }
}

/// Solves `A y = b` modulo `p^e` for `A` invertible mod `p`.
fn solve_mod(mut a: Vec<Vec<BigInt>>, mut b: Vec<BigInt>, p: u64, e: u32) -> Option<Vec<BigInt>> {
    let pe = modulus(p, e);
    let bp = BigInt::from(p);
    let r = b.len();
    for col in 0..r {
        let piv = (col..r).find(|&i| !a[i][col].is_multiple_of(&bp))?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = mod_inverse(&a[col][col], &pe)?;
        for j in 0..r {
            a[col][j] = (&a[col][j] * &inv).mod_floor(&pe);
        }
        b[col] = (&b[col] * &inv).mod_floor(&pe);
        for i in 0..r {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..r {
                    a[i][j] = (&a[i][j] - &f * &a[col][j]).mod_floor(&pe);
                }
                b[i] = (&b[i] - &f * &b[col]).mod_floor(&pe);
            }
        }
    }
    Some(b)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

/// Evaluates the congruence family on `m <= m_max`, `n <= n_max` and sets up
/// the Vandermonde system for `(ρ_{i,1}(1))_i` modulo `p^{1+2κ}`.
pub fn vandermonde_contradiction_demo(
    xs: &[BigInt],
    bs: &[BigInt],
    p: u64,
    k: u32,
    m_max: u64,
    n_max: u32,
) -> Result<VandermondeReport> {
    require_prime(p)?;
    let r = xs.len();
    if r == 0 || bs.len() != r {
        return Err(Error::InvalidInput(
            "need equally many x's and B's, at least one".into(),
        ));
    }
    if r as u64 >= p {
        return Err(Error::InvalidInput(format!("need r < p, got r = {r}, p = {p}")));
    }
    for v in xs.iter().chain(bs) {
        require_unit(v, p)?;
    }
    let bp = BigInt::from(p);
    for i in 0..r {
        for j in i + 1..r {
            if (&xs[i] - &xs[j]).is_multiple_of(&bp) {
                return Err(Error::InvalidInput(format!(
                    "x_{} and x_{} collide modulo {p}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    if k <= 1 {
        return Err(Error::InsufficientPrecision {
            precision: k,
            needed: 1,
        });
    }
    let pk = modulus(p, k);

    let mut records = Vec::new();
    for n in 1..=n_max {
        for m in 1..=m_max {
            let sum = xs.iter().zip(bs).fold(BigInt::zero(), |acc, (x, b)| {
                acc + b * frobenius_gap(x, p, n, m, k)
            });
            let order = known_order(&sum.mod_floor(&pk), p, k);
            let outcome = match order {
                Known::Exact(v) => Outcome::from_check(Some(v >= 2 * n)),
                Known::AtLeast(v) if v >= 2 * n => Outcome::Pass,
                Known::AtLeast(_) => Outcome::Indistinguishable,
            };
            records.push(FamilyRecord { m, n, order, outcome });
        }
    }
    let first_family_failure = records.iter().find(|r| r.outcome == Outcome::Fail).cloned();

    let rhos = xs
        .iter()
        .map(|x| rho(x, p, 1, 1, k))
        .collect::<Result<Vec<_>>>()?;
    let kappas: Vec<Known> = rhos.iter().map(|r| r.order).collect();
    let kappa = kappas
        .iter()
        .copied()
        .min_by_key(|o| match o {
            Known::Exact(v) => (*v, 0),
            Known::AtLeast(v) => (*v, 1),
        })
        .unwrap();
    let system_modulus = kappa.exact().map(|kp| 1 + 2 * kp).filter(|&e| e <= k - 1);
    let matrix: Vec<Vec<BigInt>> = (0..r as u32)
        .map(|j| xs.iter().zip(bs).map(|(x, b)| b * x.pow(j)).collect())
        .collect();
    let rhs: Vec<BigInt> = matrix
        .iter()
        .map(|row| row.iter().zip(&rhos).map(|(a, rh)| a * &rh.value).sum::<BigInt>())
        .collect();
    let residual_orders = rhs
        .iter()
        .map(|v| known_order(&v.mod_floor(&modulus(p, k - 1)), p, k - 1))
        .collect();
    let solution_recovers_rho = system_modulus.map(|e| {
        let pe = modulus(p, e);
        let reduced = rhs.iter().map(|v| v.mod_floor(&pe)).collect();
        solve_mod(matrix.clone(), reduced, p, e).is_some_and(|y| {
            y.iter()
                .zip(&rhos)
                .all(|(a, rh)| (a - &rh.value).is_multiple_of(&pe))
        })
    });
    let mut det = bs.iter().fold(BigInt::one(), |acc, b| acc * b);
    for i in 0..r {
        for j in i + 1..r {
            det *= &xs[j] - &xs[i];
        }
    }
    Ok(VandermondeReport {
        p,
        precision: k,
        kappas,
        kappa,
        determinant_order: int_ord(&det, p) as u32,
        system_modulus,
        residual_orders,
        solution_recovers_rho,
        family_holds: first_family_failure.is_none(),
        first_family_failure,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn rho_examples() {
        let r = rho(&b(2), 5, 1, 1, 10).unwrap();
        assert_eq!((r.value.clone(), r.order, r.precision), (b(6), Known::Exact(0), 9));
        let r = rho(&b(1), 5, 2, 3, 10).unwrap();
        assert_eq!((r.value, r.order), (b(0), Known::AtLeast(8)));
        let r2 = rho(&b(2), 5, 2, 1, 12).unwrap();
        assert_eq!(r2.value.clone() % 5, b(1));
        assert_eq!(r2.value, b(1342176));
        assert!(matches!(rho(&b(10), 5, 1, 1, 10), Err(Error::NotAUnit { .. })));
        assert!(matches!(rho(&b(2), 5, 3, 1, 3), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&b(2), 5, 8).unwrap(), Known::Exact(0));
        assert_eq!(kappa(&b(7), 3, 8).unwrap(), Known::Exact(0));
        assert_eq!(kappa(&b(1), 7, 8).unwrap(), Known::AtLeast(7));
        // 3^5 = 243 ≡ 1 mod 11^2
        assert_eq!(kappa(&b(3), 11, 8).unwrap(), Known::Exact(1));
    }

    #[test]
    fn default_precision_covers_stability() {
        assert_eq!(default_precision(&b(2), 5, 3).unwrap(), 10);
        let k = default_precision(&b(3), 11, 3).unwrap();
        assert_eq!(k, 12);
        let rep = check_rho_stability(&b(3), 11, 4, 3, k).unwrap();
        assert!(rep.holds() && rep.records.iter().all(|r| r.outcome == Outcome::Pass));
    }

    #[test]
    fn stability_and_scaling() {
        let rep = check_rho_stability(&b(2), 5, 4, 3, 12).unwrap();
        assert!(rep.holds() && !rep.vacuous());
        assert!(check_rho_stability(&b(3), 7, 4, 3, 12).unwrap().holds());
        let ones = check_rho_stability(&b(1), 5, 4, 3, 12).unwrap();
        assert!(ones.holds() && ones.vacuous());
        assert!(check_rho_stability(&b(3), 2, 1, 2, 12).is_err());
        assert!(check_rho_m_scaling(&b(2), 5, 4, 1, 12).unwrap().holds());
        assert!(check_rho_m_scaling(&b(2), 3, 2, 2, 12).unwrap().holds());
    }

    #[test]
    fn probe_examples() {
        let rep = root_of_unity_probe(&b(1), 5, 4, 12).unwrap();
        assert!(rep.consistent_with_root_of_unity && rep.undecided.is_empty());
        let rep = root_of_unity_probe(&b(2), 5, 4, 12).unwrap();
        assert_eq!(rep.first_violation, Some(1));
        assert_eq!(rep.orders[0], Known::Exact(1));
        let t = teichmuller(&b(2), 5, 12).unwrap();
        assert!((&t - b(2)).is_multiple_of(&b(5)));
        assert!(root_of_unity_probe(&t, 5, 6, 12).unwrap().consistent_with_root_of_unity);
        // threshold 2n beyond K is left undecided
        let rep = root_of_unity_probe(&t, 5, 8, 12).unwrap();
        assert_eq!(rep.undecided, vec![7, 8]);
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        for p in [3u64, 5, 7, 13] {
            let pk = modulus(p, 20);
            for a in 1..p as i64 {
                let t = teichmuller(&b(a), p, 20).unwrap();
                assert!(t.modpow(&b(p as i64 - 1), &pk).is_one(), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn vandermonde_examples() {
        let rep = vandermonde_contradiction_demo(&[b(1)], &[b(1)], 5, 10, 3, 3).unwrap();
        assert!(rep.family_holds);
        assert_eq!(rep.system_modulus, None);

        let rep = vandermonde_contradiction_demo(&[b(2), b(3)], &[b(1), b(1)], 7, 12, 3, 2).unwrap();
        assert!(!rep.family_holds);
        assert!(rep.first_family_failure.as_ref().unwrap().n <= 2);
        assert_eq!(rep.determinant_order, 0);
        assert_eq!(rep.solution_recovers_rho, Some(true));
        assert_eq!(rep.residual_vanishes(), Some(false));

        let k = 14;
        let xs = [teichmuller(&b(2), 7, k).unwrap(), teichmuller(&b(3), 7, k).unwrap()];
        let rep = vandermonde_contradiction_demo(&xs, &[b(4), b(-5)], 7, k, 4, 3).unwrap();
        assert!(rep.family_holds);

        assert!(vandermonde_contradiction_demo(&[b(2), b(9)], &[b(1), b(1)], 7, 10, 2, 2).is_err());
        let many: Vec<BigInt> = (1..=3).map(b).collect();
        assert!(vandermonde_contradiction_demo(&many, &many, 3, 10, 2, 2).is_err());
    }
}
