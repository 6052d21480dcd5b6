//! Dwork's integrality test: `V` is a 1-function exactly when
//! `Y = exp(−∫V)` has coefficients in `O[D^{−1}]`.
//!
//! Integrality is checked prime by prime for the primes `<= p_max` outside
//! the excluded set. Denominator content left over after removing every prime
//! `<= p_max` is reported separately rather than factored.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::primes::primes_up_to;
use crate::{CycElem, Error, Result, TruncSeries};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DworkReport {
    pub truncation: usize,
    pub p_max: u64,
    pub excluded: Vec<u64>,
    /// True when no checked prime divides a denominator and no unresolved
    /// content remains.
    pub integral: bool,
    /// First `(n, p)` with `p` dividing the denominator of `[z^n] Y`.
    pub witness: Option<(usize, u64)>,
    /// First `(n, cofactor)` whose denominator has prime factors above `p_max`.
    pub large_prime_content: Option<(usize, String)>,
    pub y: TruncSeries<CycElem>,
}

pub fn dwork_test(v: &TruncSeries<CycElem>, excluded: &[u64], p_max: u64) -> Result<DworkReport> {
    if !v.coeffs()[0].is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let y = v.int_s(1)?.neg().exp()?;
    let small = primes_up_to(p_max);
    let mut witness = None;
    let mut large = None;
    for (n, c) in y.coeffs().iter().enumerate() {
        let den = c.denominator();
        if den.is_one() {
            continue;
        }
        let mut rest = den.clone();
        for &p in &small {
            let bp = BigInt::from(p);
            if rest.is_multiple_of(&bp) {
                if witness.is_none() && !excluded.contains(&p) {
                    witness = Some((n, p));
                }
                while rest.is_multiple_of(&bp) && !rest.is_zero() {
                    rest /= &bp;
                }
            }
        }
        if large.is_none() && !rest.is_one() {
            large = Some((n, rest.to_string()));
        }
    }
    Ok(DworkReport {
        truncation: y.truncation(),
        p_max,
        excluded: excluded.to_vec(),
        integral: witness.is_none() && large.is_none(),
        witness,
        large_prime_content: large,
        y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: impl Fn(usize) -> i64, t: usize) -> TruncSeries<CycElem> {
        TruncSeries::from_fn(t, |n| CycElem::from_int(1, if n == 0 { 0 } else { f(n) }))
    }

    #[test]
    fn examples() {
        let rep = dwork_test(&series(|_| 1, 20), &[], 50).unwrap();
        assert!(rep.integral);
        assert_eq!(rep.y.coeffs()[1], CycElem::from_int(1, -1));
        assert!(rep.y.coeffs()[2..].iter().all(CycElem::is_zero));

        let rep = dwork_test(&series(|n| n as i64, 20), &[], 50).unwrap();
        assert!(!rep.integral);
        assert_eq!(rep.witness, Some((2, 2)));

        let rep = dwork_test(&series(|_| 0, 20), &[], 50).unwrap();
        assert!(rep.integral);

        let rep = dwork_test(&series(|n| n as i64, 20), &[2, 3, 5, 7, 11, 13, 17, 19], 50).unwrap();
        assert_eq!(rep.witness, None);
    }

    #[test]
    fn rejects_constant_term() {
        let v = TruncSeries::from_fn(3, |_| CycElem::one(1));
        assert_eq!(dwork_test(&v, &[], 10).unwrap_err(), Error::NonzeroConstantTerm);
    }
}
