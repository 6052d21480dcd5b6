//! Converters between the a-, b- and q-representations.
//!
//! All vectors hold indices `1..=H` at positions `0..H`.
//!
//! * `a_n = Σ_{d|n} d^s b_d`, equivalently `b_n = n^{−s} Σ_{d|n} μ(n/d) a_d`.
//! * `a_n = Σ_{d|n} (n/d) q_{n/d}^d`, the logarithmic derivative of
//!   `Π (1 − q_k z^k)^{−1}`; solved for `q_n` this gives
//!   `q_n = (a_n − Σ_{d|n, d>1} (n/d) q_{n/d}^d) / n`.

use crate::primes::{divisors, mobius};
use crate::{CycElem, Rational};

fn rat(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

fn like(v: &[CycElem]) -> Option<CycElem> {
    v.first().map(|c| CycElem::zero(c.conductor()))
}

pub fn a_to_b(a: &[CycElem], s: u32) -> Vec<CycElem> {
    let Some(zero) = like(a) else { return Vec::new() };
    (1..=a.len() as u64)
        .map(|n| {
            let sum = divisors(n).into_iter().fold(zero.clone(), |acc, d| match mobius(n / d) {
                1 => &acc + &a[d as usize - 1],
                -1 => &acc - &a[d as usize - 1],
                _ => acc,
            });
            sum.scale(&rat(n).pow(s as i32).recip())
        })
        .collect()
}

pub fn b_to_a(b: &[CycElem], s: u32) -> Vec<CycElem> {
    let Some(zero) = like(b) else { return Vec::new() };
    (1..=b.len() as u64)
        .map(|n| {
            divisors(n).into_iter().fold(zero.clone(), |acc, d| {
                &acc + &b[d as usize - 1].scale(&rat(d).pow(s as i32))
            })
        })
        .collect()
}

pub fn a_to_q(a: &[CycElem]) -> Vec<CycElem> {
    let mut q: Vec<CycElem> = Vec::with_capacity(a.len());
    for n in 1..=a.len() as u64 {
        let mut acc = a[n as usize - 1].clone();
        for d in divisors(n).into_iter().skip(1) {
            let base = &q[(n / d) as usize - 1];
            if !base.is_zero() {
                acc = &acc - &base.pow(d).scale(&rat(n / d));
            }
        }
        q.push(acc.scale(&rat(n).recip()));
    }
    q
}

pub fn q_to_a(q: &[CycElem]) -> Vec<CycElem> {
    let Some(zero) = like(q) else { return Vec::new() };
    (1..=q.len() as u64)
        .map(|n| {
            divisors(n).into_iter().fold(zero.clone(), |acc, d| {
                let base = &q[(n / d) as usize - 1];
                if base.is_zero() {
                    acc
                } else {
                    &acc + &base.pow(d).scale(&rat(n / d))
                }
            })
        })
        .collect()
}
