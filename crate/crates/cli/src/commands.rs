use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use sfunc_core::catalog::{self, CatalogEntry};
use sfunc_core::classifier::{classify_2function, elem_text, minton_form, poly_text, MintonForm, RatFunc};
use sfunc_core::lab;
use sfunc_core::verifier::{
    a_to_b, a_to_q, b_criterion_check, b_to_a, capped_r, cartier_criterion_check, check_local_s,
    dwork_test, q_criterion_check, q_to_a, CheckRecord, CongruenceReport, SequenceSource,
};
use sfunc_core::{BigInt, CycElem, Error, TruncSeries};

use crate::args::*;

/// What a command produced.
pub struct Outcome {
    pub command: &'static str,
    pub config: Value,
    pub result: Value,
    pub pass: bool,
    pub csv: Option<String>,
    pub summary: String,
}

/// Why a command could not run.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or input; exit status 2.
    Usage(String),
    /// An internal consistency check failed; exit status 1.
    Internal(String),
}

type Run = Result<Outcome, Failure>;

fn usage(flag: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{flag}: {e}"))
}

/// Maps a core error raised while working on `flag`.
fn core(flag: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| match e {
        Error::Soundness(msg) => Failure::Internal(msg),
        e => usage(flag, e),
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Splits on commas outside brackets, so `3:[1,2]` stays one element.
pub fn split_list(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn parse_elems(flag: &str, s: &str) -> Result<Vec<CycElem>, Failure> {
    split_list(s)
        .into_iter()
        .map(|t| t.parse::<CycElem>().map_err(|e| usage(flag, e)))
        .collect()
}

fn parse_int(flag: &str, s: &str) -> Result<BigInt, Failure> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| usage(flag, format!("'{s}' is not an integer")))
}

fn lookup(flag: &str, spec: &str) -> Result<CatalogEntry, Failure> {
    catalog::lookup(spec).map_err(core(flag))
}

fn load_seq(args: &SeqArgs, horizon: u64) -> Result<SequenceSource, Failure> {
    let base = match (&args.seq, &args.from_csv) {
        (Some(spec), _) => lookup("--seq", spec)?.source(horizon),
        (None, Some(path)) => catalog::ingest_csv(path)
            .map_err(core("--from-csv"))?
            .source(horizon),
        (None, None) => return Err(Failure::Usage("one of --seq or --from-csv is required".into())),
    };
    Ok(match &args.hadamard {
        Some(spec) => base.hadamard(&lookup("--hadamard", spec)?.source(horizon)),
        None => base,
    })
}

fn load_function(f: &FunctionArgs) -> Result<RatFunc, Failure> {
    let num = parse_elems("--num", &f.num)?;
    let den = parse_elems("--den", &f.den)?;
    let rf = RatFunc::new(num, den).map_err(core("--den"))?;
    match &f.epsilon {
        None => Ok(rf),
        Some(spec) => {
            let (l, s) = spec.split_once(':').unwrap_or((spec, "0"));
            let l: usize = l.parse().map_err(|_| usage("--epsilon", format!("bad L in '{spec}'")))?;
            let s: u32 = s.parse().map_err(|_| usage("--epsilon", format!("bad S in '{spec}'")))?;
            if l == 0 {
                return Err(usage("--epsilon", "L must be positive"));
            }
            rf.epsilon(l, s).map_err(core("--epsilon"))
        }
    }
}

fn records_csv(records: &[(&str, &CheckRecord)]) -> String {
    let mut out = String::from("method,kind,p,s,m,r,n,order,required,pass\n");
    for (method, r) in records {
        let kind = serde_json::to_value(r.kind).unwrap();
        let _ = writeln!(
            out,
            "{method},{},{},{},{},{},{},{},{},{}",
            kind.as_str().unwrap_or_default(),
            r.p,
            r.s,
            r.m,
            r.r,
            r.n,
            r.order,
            r.required,
            r.pass
        );
    }
    out
}

fn first_failure_by_prime(rep: &CongruenceReport) -> Vec<&CheckRecord> {
    let mut out: Vec<&CheckRecord> = Vec::new();
    for r in rep.failures() {
        if !out.iter().any(|f| f.p == r.p) {
            out.push(r);
        }
    }
    out
}

pub fn verify(a: &VerifyArgs) -> Run {
    let w = &a.window;
    let src = load_seq(&a.seq, w.horizon)?;
    let plan: Vec<(u64, u32)> = match &w.primes {
        Some(ps) => ps
            .iter()
            .map(|&p| {
                src.require_checkable(p).map_err(core("--primes"))?;
                match capped_r(w.horizon, p, w.mmax, w.rmax) {
                    0 => Err(usage("--horizon", format!("too small for m = {} at p = {p}", w.mmax))),
                    r => Ok((p, r)),
                }
            })
            .collect::<Result<_, _>>()?,
        None => src
            .window_primes(w.pmax)
            .into_iter()
            .map(|p| (p, capped_r(w.horizon, p, w.mmax, w.rmax)))
            .filter(|&(_, r)| r >= 1)
            .collect(),
    };
    if plan.is_empty() {
        return Err(usage("--pmax", "no testable prime in the window"));
    }
    let reach = plan.iter().map(|&(p, r)| w.mmax * p.pow(r)).max().unwrap();
    let name = src.name().to_string();
    let methods: Vec<Method> = match a.method {
        Method::All => vec![Method::Direct, Method::Cartier, Method::B, Method::Q],
        m => vec![m],
    };
    let mut reports: Vec<(Method, CongruenceReport)> = Vec::new();
    let mut prefix: Option<Vec<CycElem>> = None;
    for &method in &methods {
        let parts = match method {
            Method::Direct => plan
                .iter()
                .map(|&(p, r)| check_local_s(&src, p, a.s, w.mmax, r))
                .collect::<Result<Vec<_>, _>>(),
            Method::Cartier => {
                let v = src.series(reach).map_err(core("--horizon"))?;
                plan.iter()
                    .map(|&(p, r)| cartier_criterion_check(&v, a.s, p, w.mmax, r))
                    .collect()
            }
            Method::B | Method::Q => {
                if prefix.is_none() {
                    prefix = Some(src.prefix(reach).map_err(core("--horizon"))?);
                }
                let seq = prefix.as_ref().unwrap();
                if method == Method::B {
                    let b = a_to_b(seq, a.s);
                    plan.iter()
                        .map(|&(p, r)| b_criterion_check(&b, a.s, p, w.mmax, r))
                        .collect()
                } else {
                    let q = a_to_q(seq);
                    plan.iter()
                        .map(|&(p, r)| q_criterion_check(&q, a.s, p, w.mmax, r))
                        .collect()
                }
            }
            Method::All => unreachable!(),
        }
        .map_err(core("--seq"))?;
        reports.push((method, CongruenceReport::merge(name.clone(), a.s, parts)));
    }

    let label = |m: Method| to_value(&m).as_str().unwrap().to_string();
    let pass = reports.iter().all(|(_, r)| r.passed());
    let agree = reports.iter().all(|(_, r)| r.passed() == pass);
    let mut csv_rows = Vec::new();
    let mut labels = Vec::new();
    for (m, _) in &reports {
        labels.push(label(*m));
    }
    for ((_, rep), l) in reports.iter().zip(&labels) {
        csv_rows.extend(rep.records.iter().map(|r| (l.as_str(), r)));
    }
    let csv = records_csv(&csv_rows);
    let render = |rep: &CongruenceReport| {
        let mut v = to_value(rep);
        v["first_failure_by_prime"] = to_value(&first_failure_by_prime(rep));
        v
    };
    let result = if a.method == Method::All {
        let mut obj = serde_json::Map::new();
        for ((_, rep), l) in reports.iter().zip(&labels) {
            obj.insert(l.clone(), render(rep));
        }
        obj.insert("agree".into(), json!(agree));
        Value::Object(obj)
    } else {
        render(&reports[0].1)
    };
    let mut summary = format!(
        "{name}: s = {}, {} prime(s), {}",
        a.s,
        plan.len(),
        if pass { "pass" } else { "FAIL" }
    );
    if let Some(f) = reports.iter().find_map(|(_, r)| r.summary.first_failure.as_ref()) {
        let _ = write!(summary, "; first failure {f}");
    }
    Ok(Outcome {
        command: "verify",
        config: json!({
            "args": to_value(a),
            "conductor": src.conductor(),
            "excluded": src.excluded(),
            "plan": plan.iter().map(|&(p, r)| json!({"p": p, "m_max": w.mmax, "r_max": r})).collect::<Vec<_>>(),
        }),
        result,
        pass: pass && agree,
        csv: Some(csv),
        summary,
    })
}

fn minton_value(f: &RatFunc) -> Value {
    match minton_form(f) {
        Ok(MintonForm::Split(terms)) => json!({
            "split": true,
            "terms": terms
                .iter()
                .map(|(a, alpha)| json!({"A": elem_text(a), "alpha": elem_text(alpha)}))
                .collect::<Vec<_>>(),
        }),
        Ok(MintonForm::NotSplit { diagnostic }) => json!({"split": false, "diagnostic": diagnostic}),
        Err(e) => json!({"error": e.to_string()}),
    }
}

pub fn classify(a: &ClassifyArgs) -> Run {
    let f = load_function(&a.f)?;
    let verdict = classify_2function(&f, a.nmax).map_err(core("--den"))?;
    let mut result = json!({
        "function": {"num": poly_text(f.num()), "den": poly_text(f.den()), "conductor": f.conductor()},
        "verdict": to_value(&verdict),
    });
    if a.minton {
        result["minton"] = minton_value(&f);
    }
    let summary = match verdict.reason() {
        None => format!("abelian, period {}", verdict.period().unwrap_or(0)),
        Some(r) => format!("rejected: {r}"),
    };
    Ok(Outcome {
        command: "classify",
        config: to_value(a),
        result,
        pass: verdict.is_abelian(),
        csv: None,
        summary,
    })
}

fn values_csv(values: &[String], offset: usize) -> String {
    let mut out = String::from("n,value\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{},{v}", i + offset);
    }
    out
}

pub fn convert(a: &ConvertArgs) -> Run {
    let input: Vec<CycElem> = match (&a.seq, &a.values) {
        (Some(spec), _) => {
            if a.from != Repr::A {
                return Err(usage("--seq", "named sequences are a-representations; use --from a"));
            }
            let n = a.n.unwrap_or(20);
            lookup("--seq", spec)?.source(n).prefix(n).map_err(core("--n"))?
        }
        (None, Some(v)) => {
            let mut v = parse_elems("--values", v)?;
            if let Some(n) = a.n {
                if n as usize > v.len() {
                    return Err(usage("--n", format!("only {} values given", v.len())));
                }
                v.truncate(n as usize);
            }
            let m = v.iter().fold(1, |acc, c| sfunc_core::primes::lcm(acc, c.conductor()));
            v.iter().map(|c| c.promote(m)).collect::<Result<_, _>>().map_err(core("--values"))?
        }
        (None, None) => return Err(Failure::Usage("one of --seq or --values is required".into())),
    };
    if input.is_empty() {
        return Err(usage("--n", "need at least one term"));
    }
    let seq_a = match a.from {
        Repr::A => input,
        Repr::B => b_to_a(&input, a.s),
        Repr::Q => q_to_a(&input),
    };
    let out = match a.to {
        Repr::A => seq_a,
        Repr::B => a_to_b(&seq_a, a.s),
        Repr::Q => a_to_q(&seq_a),
    };
    let values: Vec<String> = out.iter().map(elem_text).collect();
    Ok(Outcome {
        command: "convert",
        config: to_value(a),
        summary: format!("{} terms", values.len()),
        csv: Some(values_csv(&values, 1)),
        result: json!({"first_index": 1, "values": values}),
        pass: true,
    })
}

fn apply_op(v: TruncSeries<CycElem>, op: &str) -> Result<TruncSeries<CycElem>, Failure> {
    let parts: Vec<&str> = op.split(':').collect();
    let num = |i: usize| -> Result<u64, Failure> {
        parts
            .get(i)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| usage("--apply", format!("bad operator '{op}'")))
    };
    let err = core("--apply");
    Ok(match parts[0] {
        "delta" => v.delta(),
        "int" => v.int_s(num(1)? as u32).map_err(err)?,
        "cartier" => match num(1)? {
            0 => return Err(usage("--apply", "cartier index must be positive")),
            k => v.cartier(k as usize),
        },
        "epsilon" => match num(1)? {
            0 => return Err(usage("--apply", "epsilon index must be positive")),
            l => v.epsilon(l as usize, num(2)? as u32),
        },
        "frobenius" => v.frobenius(num(1)?).map_err(err)?,
        "exp" => v.exp().map_err(err)?,
        "log" => v.log().map_err(err)?,
        _ => return Err(usage("--apply", format!("unknown operator '{op}'"))),
    })
}

pub fn expand(a: &ExpandArgs) -> Run {
    let f = load_function(&a.f)?;
    let mut v = f.maclaurin(a.truncation);
    for op in &a.ops {
        v = apply_op(v, op)?;
    }
    let coeffs: Vec<String> = v.coeffs().iter().map(elem_text).collect();
    Ok(Outcome {
        command: "expand",
        config: to_value(a),
        summary: format!("{} coefficients", coeffs.len()),
        csv: Some(values_csv(&coeffs, 0)),
        result: json!({"truncation": v.truncation(), "coeffs": coeffs}),
        pass: true,
    })
}

pub fn dwork(a: &DworkArgs) -> Run {
    let mut excluded = a.exclude.clone();
    let v = match (&a.seq, &a.num, &a.den) {
        (Some(spec), _, _) => {
            let src = lookup("--seq", spec)?.source(a.truncation as u64);
            excluded.extend_from_slice(src.excluded());
            src.series(a.truncation as u64).map_err(core("--truncation"))?
        }
        (None, Some(num), Some(den)) => {
            let f = load_function(&FunctionArgs {
                num: num.clone(),
                den: den.clone(),
                epsilon: None,
            })?;
            f.maclaurin(a.truncation)
        }
        _ => return Err(Failure::Usage("give --seq or both --num and --den".into())),
    };
    excluded.sort_unstable();
    excluded.dedup();
    let rep = dwork_test(&v, &excluded, a.pmax).map_err(core("--seq"))?;
    let summary = match (&rep.witness, &rep.large_prime_content) {
        (None, None) => "integral".to_string(),
        (Some((n, p)), _) => format!("{p} divides the denominator of coefficient {n}"),
        (None, Some((n, c))) => format!("coefficient {n} has denominator content {c} above --pmax"),
    };
    Ok(Outcome {
        command: "dwork",
        config: to_value(a),
        pass: rep.integral,
        csv: Some(values_csv(&rep.y.coeffs().iter().map(elem_text).collect::<Vec<_>>(), 0)),
        result: to_value(&rep),
        summary,
    })
}

pub fn lab(cmd: &LabCommand) -> Run {
    let err = core("--x");
    let (config, result, pass, summary) = match cmd {
        LabCommand::Rho(a) => {
            let x = parse_int("--x", &a.unit.x)?;
            let r = lab::rho(&x, a.unit.p, a.n, a.m, a.unit.k).map_err(err)?;
            let s = format!("rho = {} mod {}^{}, order {}", r.value, r.p, r.precision, r.order);
            (to_value(a), to_value(&r), true, s)
        }
        LabCommand::Kappa(a) => {
            let x = parse_int("--x", &a.x)?;
            let k = lab::kappa(&x, a.p, a.k).map_err(err)?;
            (to_value(a), json!({"kappa": to_value(&k)}), true, format!("kappa = {k}"))
        }
        LabCommand::Stability(a) => {
            let x = parse_int("--x", &a.x)?;
            let k = match a.k {
                Some(k) => k,
                None => lab::default_precision(&x, a.p, a.nmax).map_err(core("--p"))?,
            };
            let r = lab::check_rho_stability(&x, a.p, a.mmax, a.nmax, k).map_err(core("--K"))?;
            let s = format!("{} violation(s), kappa constant: {}", r.violations(), r.kappa_constant);
            let mut v = to_value(&r);
            v["vacuous"] = json!(r.vacuous());
            (to_value(a), v, r.holds(), s)
        }
        LabCommand::Scaling(a) => {
            let x = parse_int("--x", &a.x)?;
            let r = lab::check_rho_m_scaling(&x, a.p, a.mmax, a.n, a.k).map_err(core("--K"))?;
            let s = format!("{} violation(s), kappa constant: {}", r.violations(), r.kappa_constant);
            let mut v = to_value(&r);
            v["vacuous"] = json!(r.vacuous());
            (to_value(a), v, r.holds(), s)
        }
        LabCommand::Probe(a) => {
            let x = parse_int("--x", &a.unit.x)?;
            let r = lab::root_of_unity_probe(&x, a.unit.p, a.nmax, a.unit.k).map_err(err)?;
            let s = match r.first_violation {
                Some(n) => format!("not a root of unity: violation at n = {n}"),
                None => "consistent with a root of unity (evidence only)".to_string(),
            };
            (to_value(a), to_value(&r), r.consistent_with_root_of_unity, s)
        }
        LabCommand::Teichmuller(a) => {
            let x = parse_int("--x", &a.x)?;
            let t = lab::teichmuller(&x, a.p, a.k).map_err(err)?;
            (to_value(a), json!({"lift": t.to_string()}), true, format!("lift = {t}"))
        }
        LabCommand::Vandermonde(a) => {
            let xs = a.xs.iter().map(|s| parse_int("--xs", s)).collect::<Result<Vec<_>, _>>()?;
            let bs = a.bs.iter().map(|s| parse_int("--bs", s)).collect::<Result<Vec<_>, _>>()?;
            let r = lab::vandermonde_contradiction_demo(&xs, &bs, a.p, a.k, a.mmax, a.nmax)
                .map_err(core("--xs"))?;
            let s = match &r.first_family_failure {
                Some(f) => format!("family fails at m = {}, n = {}", f.m, f.n),
                None => "family holds on the window".to_string(),
            };
            let mut v = to_value(&r);
            v["residual_vanishes"] = to_value(&r.residual_vanishes());
            (to_value(a), v, r.family_holds, s)
        }
    };
    Ok(Outcome {
        command: "lab",
        config,
        result,
        pass,
        csv: None,
        summary,
    })
}

fn entry_value(e: &CatalogEntry) -> Value {
    json!({
        "name": e.name,
        "conductor": e.conductor,
        "claimed_s": e.claimed_s,
        "excluded": e.excluded,
        "note": e.note,
        "offset": e.offset,
        "horizon": e.horizon,
    })
}

pub fn catalog(cmd: &CatalogCommand) -> Run {
    let (config, result, csv, summary) = match cmd {
        CatalogCommand::List => {
            let entries: Vec<Value> = catalog::list().iter().map(entry_value).collect();
            let s = format!("{} entries", entries.len());
            (json!({"action": "list"}), json!({"entries": entries}), None, s)
        }
        CatalogCommand::Show { spec, n } => {
            let e = lookup("<spec>", spec)?;
            let values: Vec<String> = e.source(*n).prefix(*n).map_err(core("--n"))?.iter().map(elem_text).collect();
            let mut v = entry_value(&e);
            v["values"] = json!(values);
            let s = format!("{}: {} values", e.name, values.len());
            (json!({"action": "show", "spec": spec, "n": n}), v, Some(values_csv(&values, 1)), s)
        }
        CatalogCommand::Export { spec, n, out } => {
            let e = lookup("<spec>", spec)?;
            if e.horizon.is_some_and(|h| h < *n) {
                return Err(usage("--n", format!("{} has only {} values", e.name, e.horizon.unwrap())));
            }
            std::fs::write(out, e.dump(*n)).map_err(|err| usage("--out", err))?;
            let s = format!("wrote {n} values to {}", out.display());
            (
                json!({"action": "export", "spec": spec, "n": n, "out": out}),
                entry_value(&e),
                None,
                s,
            )
        }
        CatalogCommand::Ingest { file } => {
            let e = catalog::ingest_csv(file).map_err(core("<file>"))?;
            let s = format!("{}: {} values, conductor {}", e.name, e.horizon.unwrap_or(0), e.conductor);
            (json!({"action": "ingest", "file": file}), entry_value(&e), None, s)
        }
    };
    Ok(Outcome {
        command: "catalog",
        config,
        result,
        pass: true,
        csv,
        summary,
    })
}
