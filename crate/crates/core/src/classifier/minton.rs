//! Partial-fraction normal form `F = Σ A_i α_i z/(1 − α_i z)` for rational
//! functions whose denominator splits over the coefficient field.
//!
//! Roots are searched among `c·ω` with `c ∈ Q` and `ω` a root of unity of
//! `Q(ζ_M)`. For each `ω` the rational roots of `Q̃(ωx)` are the common
//! rational roots of its power-basis coordinate polynomials, found with the
//! rational root theorem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{simple_pole_check, RatFunc};
use crate::poly::Poly;
use crate::primes::divisors;
use crate::{CycElem, Error, Rational, Result};

/// Largest constant term the rational root search will factor.
const ROOT_SEARCH_LIMIT: u64 = 1_000_000_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum MintonForm {
    /// Pairs `(A_i, α_i)` with `a_n = Σ A_i α_i^n`.
    Split(Vec<(CycElem, CycElem)>),
    /// The denominator has a reciprocal root outside the searched set.
    NotSplit { diagnostic: String },
}

/// Exact partial-fraction data of `F`, or a diagnostic when `Q` does not
/// split into factors `1 − c·ω·z` over the coefficient field.
pub fn minton_form(f: &RatFunc) -> Result<MintonForm> {
    let (num, den) = (f.num(), f.den());
    if !simple_pole_check(den) {
        return Err(Error::NotSquarefree);
    }
    if !f.at_origin().is_zero() {
        return Err(Error::InvalidInput("F(0) must vanish".into()));
    }
    let d = den.degree().unwrap_or(0);
    if num.degree().is_some_and(|dp| dp > d) {
        return Err(Error::InvalidInput("deg P must not exceed deg Q".into()));
    }
    if f.is_zero() {
        return Ok(MintonForm::Split(Vec::new()));
    }
    let m = f.conductor();
    // reciprocal polynomial: its roots are the α_i
    let mut rev = den.coeffs().to_vec();
    rev.reverse();
    let rev = Poly::new(rev, CycElem::zero(m));

    let mut alphas: Vec<CycElem> = Vec::new();
    for omega in roots_of_unity(m) {
        let shifted = rev.substitute_scaled(&omega);
        let roots = match common_rational_roots(&shifted) {
            Ok(r) => r,
            Err(diagnostic) => return Ok(MintonForm::NotSplit { diagnostic }),
        };
        for c in roots {
            let alpha = omega.scale(&c);
            if !alphas.contains(&alpha) {
                alphas.push(alpha);
            }
        }
    }
    if alphas.len() != d {
        return Ok(MintonForm::NotSplit {
            diagnostic: format!(
                "found {} of {d} reciprocal roots of the form c*w with c rational and w a root of unity in Q(zeta_{m})",
                alphas.len()
            ),
        });
    }

    // A_i = P(1/α_i) / Π_{j≠i}(1 − α_j/α_i), valid because Q(0) = 1
    let mut terms = Vec::with_capacity(d);
    for (i, ai) in alphas.iter().enumerate() {
        let inv = ai.inv()?;
        let mut denom = CycElem::one(m);
        for (j, aj) in alphas.iter().enumerate() {
            if i != j {
                denom = &denom * &(&CycElem::one(m) - &(aj * &inv));
            }
        }
        terms.push((num.eval(&inv).try_div(&denom)?, ai.clone()));
    }

    // two rational functions of degree <= d agreeing on 2d + 1 terms coincide
    let series = f.maclaurin(2 * d + 1);
    for n in 1..=2 * d + 1 {
        let sum = terms
            .iter()
            .fold(CycElem::zero(m), |acc, (a, al)| &acc + &(a * &al.pow(n as u64)));
        if sum != series.coeffs()[n] {
            return Err(Error::Soundness(format!(
                "partial fractions disagree with F at z^{n}"
            )));
        }
    }
    Ok(MintonForm::Split(terms))
}

/// All roots of unity of `Q(ζ_M)`, i.e. the `lcm(2, M)`-th roots, as powers
/// of a generator.
fn roots_of_unity(m: u64) -> Vec<CycElem> {
    let (gen, order) = if m % 2 == 0 {
        (CycElem::zeta(m), m)
    } else {
        // −ζ^{(M+1)/2} squares to ζ and has order 2M
        (-CycElem::zeta_pow(m, (m as i64 + 1) / 2), 2 * m)
    };
    let mut out = Vec::with_capacity(order as usize);
    let mut cur = CycElem::one(m);
    for _ in 0..order {
        out.push(cur.clone());
        cur = &cur * &gen;
    }
    out
}

/// Rational roots shared by all coordinate polynomials, in decreasing order.
fn common_rational_roots(p: &Poly<CycElem>) -> std::result::Result<Vec<Rational>, String> {
    let deg = p.zero_elem().field().degree();
    let mut g: Option<Poly<Rational>> = None;
    for i in 0..deg {
        let coord = p.map(Rational::zero(), |c| c.coords()[i].clone());
        if coord.is_zero() {
            continue;
        }
        g = Some(match g {
            None => coord.monic(),
            Some(acc) => acc.gcd(&coord),
        });
    }
    match g {
        None => Ok(Vec::new()),
        Some(g) => rational_roots(&g),
    }
}

fn divisors_of(n: &BigInt) -> std::result::Result<Vec<u64>, String> {
    match n.abs().to_u64() {
        Some(v) if v <= ROOT_SEARCH_LIMIT => Ok(divisors(v)),
        _ => Err(format!("coefficient {n} too large for the rational root search")),
    }
}

/// Distinct rational roots of a nonzero polynomial, in decreasing order.
fn rational_roots(g: &Poly<Rational>) -> std::result::Result<Vec<Rational>, String> {
    if g.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    // strip the root 0, then clear denominators
    let low = g.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rational::zero());
    }
    let coeffs = &g.coeffs()[low..];
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let lead = ints.last().expect("nonzero polynomial");
    if ints.len() > 1 {
        let tail = divisors_of(&ints[0])?;
        let head = divisors_of(lead)?;
        for &u in &tail {
            for &v in &head {
                if u.gcd(&v) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let c = Rational::new(BigInt::from(u) * sign, BigInt::from(v));
                    if g.eval(&c).is_zero() {
                        roots.push(c);
                    }
                }
            }
        }
    }
    roots.sort_by(|a, b| b.cmp(a));
    roots.dedup();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        let v = |s: &[i64]| s.iter().map(|&c| q(c, 1)).collect::<Vec<_>>();
        RatFunc::from_rationals(&v(num), &v(den)).unwrap()
    }

    fn pairs(form: MintonForm) -> Vec<(Rational, Rational)> {
        match form {
            MintonForm::Split(t) => t
                .into_iter()
                .map(|(a, al)| (a.as_rational().unwrap(), al.as_rational().unwrap()))
                .collect(),
            MintonForm::NotSplit { diagnostic } => panic!("{diagnostic}"),
        }
    }

    #[test]
    fn rational_examples() {
        assert_eq!(pairs(minton_form(&rf(&[0, 1], &[1, -1])).unwrap()), vec![(q(1, 1), q(1, 1))]);
        // 2z/(1 − z²): a_n = 1 − (−1)^n
        assert_eq!(
            pairs(minton_form(&rf(&[0, 2], &[1, 0, -1])).unwrap()),
            vec![(q(1, 1), q(1, 1)), (q(-1, 1), q(-1, 1))]
        );
        // z/(1 − 2z): a_n = 2^{n−1}
        assert_eq!(pairs(minton_form(&rf(&[0, 1], &[1, -2])).unwrap()), vec![(q(1, 2), q(2, 1))]);
        assert_eq!(minton_form(&rf(&[0, 1], &[1, -2, 1])), Err(Error::NotSquarefree));
    }

    #[test]
    fn cyclotomic_split() {
        // z/(1 + z + z²) has reciprocal roots ζ_3, ζ_3² over Q(ζ_3)
        let f = rf(&[0, 1], &[1, 1, 1]).promote(3).unwrap();
        let MintonForm::Split(terms) = minton_form(&f).unwrap() else {
            panic!("expected a split");
        };
        assert_eq!(terms.len(), 2);
        let z = CycElem::zeta(3);
        assert!(terms.iter().any(|(_, a)| *a == z));
        assert!(terms.iter().any(|(_, a)| *a == z.pow(2)));
        // over Q the same denominator does not split
        assert!(matches!(
            minton_form(&rf(&[0, 1], &[1, 1, 1])).unwrap(),
            MintonForm::NotSplit { .. }
        ));
    }
}
