use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use tcore::asymptotics::{estimate, select_regime, CertifiedEstimate, Regime};
use tcore::exact::{partition_numbers, tcore_count_from, tcore_counts};
use tcore::lemmas::{run_selftest, Level};
use tcore::saddle::{kappa_constants, solve_y, KappaConstants};
use tcore::stanton::{certify_pair, verify_exact_with, Pair, VerifyOptions};
use tcore::Error;

use crate::output::object;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Usage = 2,
    Solver = 3,
    Hypothesis = 4,
    Verification = 5,
}

impl From<&Error> for Exit {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::ResourceCap { .. } => Exit::Usage,
            Error::OutsideRegion { .. }
            | Error::TruncationCap(_)
            | Error::BracketSign { .. }
            | Error::NoConvergence(_) => Exit::Solver,
            Error::HypothesesNotSatisfied(_) => Exit::Hypothesis,
        }
    }
}

/// What a command produced, before it is wrapped into a record.
pub struct Outcome {
    pub result: Value,
    pub flags: Value,
    pub exit: Exit,
}

impl Outcome {
    fn ok(result: Value, flags: Value) -> Self {
        Self {
            result,
            flags,
            exit: Exit::Ok,
        }
    }

    pub fn failed(error: &Error) -> Self {
        Self {
            result: json!({ "error": error.to_string() }),
            flags: json!({ "ok": false }),
            exit: error.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            result: json!({ "error": message.into() }),
            flags: json!({ "ok": false }),
            exit: Exit::Usage,
        }
    }
}

pub type CmdResult = Result<Outcome, Error>;

pub fn count(t: u32, n: Option<u64>, max_n: Option<u64>) -> CmdResult {
    match (n, max_n) {
        (_, Some(limit)) => {
            let series = tcore_counts(t, to_usize(limit)?)?;
            let values: Vec<String> = series.values().iter().map(ToString::to_string).collect();
            let mut result = object([
                ("t", json!(t)),
                ("max_n", json!(limit)),
                ("values", json!(values)),
            ]);
            if let Some(n) = n {
                let value = series.get(to_usize(n)?).ok_or_else(|| {
                    Error::InvalidArgument(format!("--n {n} exceeds --max-n {limit}"))
                })?;
                result["n"] = json!(n);
                result["value"] = json!(value.to_string());
            }
            Ok(Outcome::ok(result, json!({ "exact": true })))
        }
        (Some(n), None) => {
            let p = partition_numbers(to_usize(n)?)?;
            let value = tcore_count_from(&p, t, n as usize)?;
            Ok(Outcome::ok(
                object([
                    ("t", json!(t)),
                    ("n", json!(n)),
                    ("value", json!(value.to_string())),
                ]),
                json!({ "exact": true }),
            ))
        }
        (None, None) => Ok(Outcome::usage("count needs --n or --max-n")),
    }
}

fn to_usize(n: u64) -> Result<usize, Error> {
    usize::try_from(n).map_err(|_| Error::InvalidArgument(format!("{n} is too large")))
}

pub fn saddle(t: u32, n: u64) -> CmdResult {
    let s = solve_y(t, n)?;
    let mut result = serde_json::to_value(s).expect("saddle result serializes");
    result["scale"] = json!(s.scale());
    result["ty"] = json!(s.ty());
    Ok(Outcome::ok(
        result,
        json!({ "outside_hypotheses": s.outside_hypotheses }),
    ))
}

/// `--regime` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RegimeArg {
    Auto,
    Main,
    SmallT,
    BigT,
    Kappa,
    Difference,
}

impl RegimeArg {
    fn forced(self) -> Option<Regime> {
        match self {
            RegimeArg::Auto => None,
            RegimeArg::Main => Some(Regime::Main),
            RegimeArg::SmallT => Some(Regime::SmallT),
            RegimeArg::BigT => Some(Regime::BigTHybrid),
            RegimeArg::Kappa => Some(Regime::KappaHeuristic),
            RegimeArg::Difference => Some(Regime::Difference),
        }
    }
}

fn estimate_value(e: &CertifiedEstimate) -> Value {
    let mut v = serde_json::to_value(e).expect("estimate serializes");
    v["log_interval"] = match e.log_interval() {
        Some((lo, hi)) => json!([lo, hi]),
        None => Value::Null,
    };
    v
}

pub fn estimate_cmd(t: u32, n: u64, regime: RegimeArg) -> CmdResult {
    let (chosen, auto_certified) = match regime.forced() {
        Some(r) => (r, None),
        None => {
            let choice = select_regime(t, n);
            (choice.regime, Some(choice.certified))
        }
    };
    let e = estimate(chosen, t, n)?;
    let flags = json!({
        "regime": chosen.as_str(),
        "hypotheses_ok": e.hypotheses_ok,
        "rigorous": e.rigorous,
        "certified": e.certified(),
    });
    // Forcing a certified regime promises its hypotheses.
    let exit = match (auto_certified, chosen) {
        (None, Regime::Main | Regime::SmallT | Regime::Difference) if !e.hypotheses_ok => {
            Exit::Hypothesis
        }
        _ => Exit::Ok,
    };
    Ok(Outcome {
        result: estimate_value(&e),
        flags,
        exit,
    })
}

fn parse_pair(s: &str) -> Result<Pair, Error> {
    let bad = || Error::InvalidArgument(format!("expected T:N, got {s:?}"));
    let (t, n) = s.split_once(':').ok_or_else(bad)?;
    Ok(Pair {
        t: t.trim().parse().map_err(|_| bad())?,
        n: n.trim().parse().map_err(|_| bad())?,
    })
}

pub struct VerifyArgs<'a> {
    pub max_n: u64,
    pub max_t: Option<u32>,
    pub max_n_cap: Option<u64>,
    pub certify: &'a [String],
    pub report: Option<&'a Path>,
    pub inject_fault: Option<&'a str>,
}

pub fn verify_stanton(args: VerifyArgs<'_>) -> CmdResult {
    let options = VerifyOptions {
        max_n_cap: args.max_n_cap.map(to_usize).transpose()?,
        inject_fault: args.inject_fault.map(parse_pair).transpose()?,
    };
    let pairs: Vec<Pair> = args
        .certify
        .iter()
        .map(|s| parse_pair(s))
        .collect::<Result<_, _>>()?;
    let mut report = verify_exact_with(to_usize(args.max_n)?, args.max_t, &options)?;
    report.certified_pairs = pairs.iter().map(|p| certify_pair(p.t, p.n)).collect();
    if let Some(path) = args.report {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        fs::write(path, text + "\n")
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    }
    let flags = json!({
        "passed": report.passed(),
        "violations": report.violations.len(),
        "equalities": report.equalities.len(),
    });
    let exit = if report.passed() {
        Exit::Ok
    } else {
        Exit::Verification
    };
    Ok(Outcome {
        result: serde_json::to_value(&report).expect("report serializes"),
        flags,
        exit,
    })
}

pub fn kappa(kappa: f64) -> CmdResult {
    let c = kappa_constants(kappa)?;
    Ok(Outcome::ok(
        serde_json::to_value(c).expect("constants serialize"),
        json!({}),
    ))
}

pub fn write_kappa_csv(path: &Path, rows: &[KappaConstants]) -> Result<(), Error> {
    let io =
        |e: csv::Error| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["kappa", "v", "A", "B"]).map_err(io)?;
    for c in rows {
        w.write_record([c.kappa, c.v, c.a, c.b].map(|x| format!("{x:.15e}")))
            .map_err(io)?;
    }
    w.flush().map_err(|e| io(e.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

pub fn selftest(level: LevelArg) -> CmdResult {
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let report = run_selftest(level);
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    let flags = json!({ "passed": report.passed(), "failed": failed });
    let exit = if report.passed() {
        Exit::Ok
    } else {
        Exit::Verification
    };
    Ok(Outcome {
        result: serde_json::to_value(&report).expect("report serializes"),
        flags,
        exit,
    })
}
