//! Deterministic sequence generators and CSV ingestion.
//!
//! Classical sequences are indexed from `0`; entries expose `a_n = A_{n + offset}`
//! for `n >= 1` with `offset = 0`, so `A_0` is dropped and congruence indices
//! stay literal.

use std::fmt;
use std::path::Path;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::primes::{factorize, lcm};
use crate::verifier::SequenceSource;
use crate::{CycElem, Error, Rational, Result};

type Generator = Arc<dyn Fn(u64) -> CycElem + Send + Sync>;

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub conductor: u64,
    /// Expected `s`; metadata only, never consulted by the verifier.
    pub claimed_s: Option<u32>,
    pub excluded: Vec<u64>,
    pub note: String,
    pub offset: u64,
    /// Largest index the generator supports, if finite.
    pub horizon: Option<u64>,
    generator: Generator,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("conductor", &self.conductor)
            .field("claimed_s", &self.claimed_s)
            .field("excluded", &self.excluded)
            .field("offset", &self.offset)
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl CatalogEntry {
    fn new(
        name: impl Into<String>,
        conductor: u64,
        claimed_s: Option<u32>,
        excluded: Vec<u64>,
        note: impl Into<String>,
        generator: impl Fn(u64) -> CycElem + Send + Sync + 'static,
    ) -> CatalogEntry {
        CatalogEntry {
            name: name.into(),
            conductor,
            claimed_s,
            excluded,
            note: note.into(),
            offset: 0,
            horizon: None,
            generator: Arc::new(generator),
        }
    }

    /// `a_n` for `n >= 1`.
    pub fn value(&self, n: u64) -> CycElem {
        (self.generator)(n + self.offset)
    }

    /// A verifier source over `1..=horizon`, capped by the entry's own horizon.
    pub fn source(&self, horizon: u64) -> SequenceSource {
        let horizon = self.horizon.map_or(horizon, |h| h.min(horizon));
        let entry = self.clone();
        SequenceSource::new(
            self.name.clone(),
            self.conductor,
            self.excluded.clone(),
            horizon,
            move |n| entry.value(n),
        )
    }

    /// `n,value` lines for `1..=n`, readable by [`ingest_csv_str`].
    pub fn dump(&self, n: u64) -> String {
        let mut out = String::new();
        for k in 1..=n {
            out.push_str(&format!("{k},{}\n", self.value(k)));
        }
        out
    }
}

fn denominator_primes(values: &[&CycElem]) -> Vec<u64> {
    let mut out = Vec::new();
    for v in values {
        let d = v.denominator();
        if d.is_one() {
            continue;
        }
        match u64::try_from(d) {
            Ok(d) => out.extend(factorize(d).into_iter().map(|(p, _)| p)),
            Err(_) => {}
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `a_n = c^n`.
pub fn geometric(c: CycElem) -> CatalogEntry {
    let excluded = denominator_primes(&[&c]);
    let name = match c.as_rational() {
        Some(r) => format!("geometric:{r}"),
        None => format!("geometric:{c}"),
    };
    CatalogEntry::new(name, c.conductor(), Some(1), excluded, "a_n = c^n", move |n| c.pow(n))
}

pub fn all_ones() -> CatalogEntry {
    let mut e = geometric(CycElem::one(1));
    e.name = "all-ones".into();
    e.note = "a_n = 1".into();
    e
}

/// `a_n = Σ_{i=1}^{P} A_i ζ_P^{in}` with `A_i` at index `i − 1`.
pub fn periodic(a: &[Rational], p: u64) -> Result<CatalogEntry> {
    if p == 0 || a.len() as u64 != p {
        return Err(Error::InvalidInput(format!(
            "periodic needs exactly {p} residues, got {}",
            a.len()
        )));
    }
    let zeta = CycElem::zeta(p);
    let residues: Vec<CycElem> = a.iter().map(|r| CycElem::from_rational(p, r)).collect();
    let excluded = denominator_primes(&residues.iter().collect::<Vec<_>>());
    // one full period a_1..a_P
    let period: Vec<CycElem> = (1..=p)
        .map(|n| {
            residues.iter().enumerate().fold(CycElem::zero(p), |acc, (i, c)| {
                &acc + &(c * &zeta.pow(((i as u64 + 1) * n) % p))
            })
        })
        .collect();
    let text: Vec<String> = a.iter().map(ToString::to_string).collect();
    Ok(CatalogEntry::new(
        format!("periodic:{p}:{}", text.join(",")),
        p,
        None,
        excluded,
        "a_n = sum_i A_i zeta_P^(i n)",
        move |n| period[((n - 1) % p) as usize].clone(),
    ))
}

/// Integer sequence from a three-term recurrence
/// `n^3 u_n = f(n) u_{n−1} − g(n) u_{n−2}`, memoized.
struct Recurrence {
    values: Mutex<Vec<BigInt>>,
    step: fn(i64) -> (BigInt, BigInt),
}

impl Recurrence {
    fn new(u0: i64, u1: i64, step: fn(i64) -> (BigInt, BigInt)) -> Recurrence {
        Recurrence {
            values: Mutex::new(vec![u0.into(), u1.into()]),
            step,
        }
    }

    fn get(&self, n: u64) -> BigInt {
        let mut v = self.values.lock().unwrap();
        while v.len() as u64 <= n {
            let k = v.len() as i64;
            let (f, g) = (self.step)(k);
            let num = f * &v[k as usize - 1] - g * &v[k as usize - 2];
            let den = BigInt::from(k).pow(3);
            debug_assert!((&num % &den).is_zero());
            v.push(num / den);
        }
        v[n as usize].clone()
    }
}

fn recurrence_entry(
    name: &str,
    note: &str,
    rec: Recurrence,
) -> CatalogEntry {
    let rec = Arc::new(rec);
    CatalogEntry::new(name, 1, Some(3), vec![2, 3], note, move |n| {
        CycElem::from_rational(1, &Rational::from_integer(rec.get(n)))
    })
}

/// `A_n = Σ_k C(n,k)^2 C(n+k,k)^2`.
pub fn apery() -> CatalogEntry {
    recurrence_entry(
        "apery",
        "sum_k C(n,k)^2 C(n+k,k)^2",
        Recurrence::new(1, 5, |n| {
            let f = 34 * n * n * n - 51 * n * n + 27 * n - 5;
            (f.into(), BigInt::from(n - 1).pow(3))
        }),
    )
}

/// Classical Domb numbers `Σ_k C(n,k)^2 C(2k,k) C(2(n−k),n−k)`.
pub fn domb() -> CatalogEntry {
    recurrence_entry(
        "domb",
        "sum_k C(n,k)^2 C(2k,k) C(2(n-k),n-k)",
        Recurrence::new(1, 4, |n| {
            let f = 2 * (2 * n - 1) * (5 * n * n - 5 * n + 2);
            (f.into(), BigInt::from(64) * BigInt::from(n - 1).pow(3))
        }),
    )
}

/// `Σ_k (−1)^k 3^{n−3k} C(n,3k) C(n+k,n) (3k)!/(k!)^3`.
pub fn almkvist_zudilin() -> CatalogEntry {
    recurrence_entry(
        "almkvist-zudilin",
        "sum_k (-1)^k 3^(n-3k) C(n,3k) C(n+k,n) (3k)!/(k!)^3",
        Recurrence::new(1, 3, |n| {
            let f = (2 * n - 1) * (7 * n * n - 7 * n + 3);
            (f.into(), BigInt::from(81) * BigInt::from(n - 1).pow(3))
        }),
    )
}

/// The named entries.
pub fn list() -> Vec<CatalogEntry> {
    vec![all_ones(), apery(), domb(), almkvist_zudilin()]
}

/// Resolves `apery`, `domb`, `almkvist-zudilin`, `all-ones`,
/// `geometric:<c>` and `periodic:<P>:<A_1>,…,<A_P>`.
pub fn lookup(spec: &str) -> Result<CatalogEntry> {
    if let Some(c) = spec.strip_prefix("geometric:") {
        let c: CycElem = c.parse()?;
        if c.is_zero() {
            return Err(Error::InvalidInput("geometric needs c != 0".into()));
        }
        return Ok(geometric(c));
    }
    if let Some(rest) = spec.strip_prefix("periodic:") {
        let (p, a) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected periodic:<P>:<A_1>,...; got '{spec}'")))?;
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad period '{p}'")))?;
        let a = a
            .split(',')
            .map(crate::cyclotomic::parse_rational)
            .collect::<Result<Vec<_>>>()?;
        return periodic(&a, p);
    }
    match spec {
        "az" => Ok(almkvist_zudilin()),
        "ones" => Ok(all_ones()),
        _ => list()
            .into_iter()
            .find(|e| e.name == spec)
            .ok_or_else(|| Error::InvalidInput(format!("unknown sequence '{spec}'"))),
    }
}

/// Parses `n,value` lines (blank lines and `#` comments are skipped).
/// Indices must run `1, 2, 3, …` without gaps.
pub fn ingest_csv_str(name: &str, text: &str) -> Result<CatalogEntry> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let csv_err = |msg: String| Error::Csv { line: line_no, msg };
        let (n, v) = line
            .split_once(',')
            .ok_or_else(|| csv_err("expected 'n,value'".into()))?;
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| csv_err(format!("bad index '{}'", n.trim())))?;
        let expected = values.len() as u64 + 1;
        if n != expected {
            return Err(csv_err(format!("index gap: expected {expected}, found {n}")));
        }
        let v: CycElem = v.parse().map_err(|e: Error| csv_err(e.to_string()))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Csv {
            line: 0,
            msg: "no data lines".into(),
        });
    }
    let m = values.iter().fold(1, |acc, c| lcm(acc, c.conductor()));
    let values = values.iter().map(|c| c.promote(m)).collect::<Result<Vec<_>>>()?;
    let excluded = denominator_primes(&values.iter().collect::<Vec<_>>());
    let horizon = values.len() as u64;
    let values = Arc::new(values);
    let mut entry = CatalogEntry::new(name, m, None, excluded, "ingested from CSV", move |n| {
        values[(n - 1) as usize].clone()
    });
    entry.horizon = Some(horizon);
    Ok(entry)
}

pub fn ingest_csv(path: &Path) -> Result<CatalogEntry> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    ingest_csv_str(&name, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::verify_s_sequence;

    fn binom(n: u64, k: u64) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
    }

    fn fact(n: u64) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, i| acc * i)
    }

    fn int(e: &CatalogEntry, n: u64) -> BigInt {
        e.value(n).as_rational().unwrap().to_integer()
    }

    // a_0 is reachable through the raw generator (offset is applied in value)
    fn raw(e: &CatalogEntry, n: u64) -> BigInt {
        (e.generator)(n).as_rational().unwrap().to_integer()
    }

    #[test]
    fn apery_matches_binomial_sum() {
        let e = apery();
        assert_eq!(raw(&e, 0), BigInt::from(1));
        assert_eq!(int(&e, 1), BigInt::from(5));
        assert_eq!(int(&e, 5), BigInt::from(819005));
        for n in 0..40u64 {
            let oracle: BigInt = (0..=n)
                .map(|k| binom(n, k).pow(2) * binom(n + k, k).pow(2))
                .sum();
            assert_eq!(raw(&e, n), oracle);
        }
    }

    #[test]
    fn domb_matches_binomial_sum() {
        let e = domb();
        assert_eq!(raw(&e, 0), BigInt::from(1));
        assert_eq!(int(&e, 1), BigInt::from(4));
        for n in 0..40u64 {
            let oracle: BigInt = (0..=n)
                .map(|k| binom(n, k).pow(2) * binom(2 * k, k) * binom(2 * (n - k), n - k))
                .sum();
            assert_eq!(raw(&e, n), oracle);
        }
    }

    #[test]
    fn almkvist_zudilin_matches_binomial_sum() {
        let e = almkvist_zudilin();
        assert_eq!(raw(&e, 0), BigInt::from(1));
        let first: Vec<i64> = (1..=7).map(|n| i64::try_from(int(&e, n)).unwrap()).collect();
        assert_eq!(first, vec![3, 9, 3, -279, -2997, -19431, -65853]);
        for n in 0..40u64 {
            let oracle: BigInt = (0..=n / 3)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    BigInt::from(sign)
                        * BigInt::from(3).pow((n - 3 * k) as u32)
                        * binom(n, 3 * k)
                        * binom(n + k, n)
                        * fact(3 * k)
                        / fact(k).pow(3)
                })
                .sum();
            assert_eq!(raw(&e, n), oracle);
        }
    }

    #[test]
    fn geometric_and_periodic() {
        let g = geometric(CycElem::from_int(1, 2));
        assert_eq!((1..=3).map(|n| int(&g, n)).collect::<Vec<_>>(), vec![2.into(), 4.into(), 8.into()]);
        let z = CycElem::zeta(3);
        let g = geometric(z.clone());
        assert_eq!(g.value(1), z);
        assert_eq!(g.value(2), z.pow(2));
        assert!(g.value(3).is_one());
        let q = |n: i64| Rational::from_integer(n.into());
        let alt = periodic(&[q(1), q(0)], 2).unwrap();
        assert_eq!(alt.value(1), CycElem::from_int(2, -1));
        assert_eq!(alt.value(2), CycElem::one(2));
        let ones = periodic(&[q(0), q(1)], 2).unwrap();
        assert!((1..10).all(|n| ones.value(n).is_one()));
        assert!(periodic(&[q(1)], 1).unwrap().value(7).is_one());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let e = periodic(&[Rational::new(1.into(), 2.into()), Rational::from_integer(3.into()), Rational::zero()], 3).unwrap();
        let text = e.dump(12);
        let back = ingest_csv_str("p3", &text).unwrap();
        assert_eq!(back.excluded, vec![2]);
        for n in 1..=12 {
            assert_eq!(back.value(n), e.value(n));
        }
        assert_eq!(back.source(100).horizon(), 12);
        let err = ingest_csv_str("bad", "2,5\n1,3\n").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 1, .. }), "{err:?}");
        let err = ingest_csv_str("bad", "1,5\n3,3\n").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 2, .. }), "{err:?}");
        let err = ingest_csv_str("bad", "1,5\n2,x\n").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn apery_supercongruence_on_small_window() {
        let src = apery().source(3000);
        let rep = verify_s_sequence(&src, 3, &[5, 7, 11, 13, 17, 19, 23, 29, 31], 3, 2).unwrap();
        assert!(rep.passed(), "{:?}", rep.summary.first_failure);
    }

    #[test]
    fn lookup_specs() {
        assert_eq!(lookup("apery").unwrap().name, "apery");
        assert_eq!(lookup("geometric:3").unwrap().value(2), CycElem::from_int(1, 9));
        assert_eq!(lookup("periodic:2:1,0").unwrap().conductor, 2);
        assert!(lookup("nope").is_err());
        assert!(lookup("geometric:0").is_err());
    }
}
