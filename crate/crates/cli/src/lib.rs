//! `syndet` command-line front end. Every run prints one JSON report.
//!
//! Exit codes: 0 success, 1 a check ran and failed (no witness, verification
//! false), 2 usage error.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use syndet::analysis::{
    banach_estimate, pws_witness, syndetic_bound, thick_up_to, upper_density_over, window_profile,
    DensityProfile,
};
use syndet::jin::{
    default_n_list, jin_pipeline, prop2_witness, prop2_witness_over, verify_witness, CoverStep,
    CoverTrace, PipelineRun,
};
use syndet::rational::{format_rational, parse_rational};
use syndet::{parse_spec, Error, Interval, Rational, SetSpec, WindowSet};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "syndet", version, about = "Density, structure and shift-cover witnesses for integer sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Window profile, Banach-density estimate and upper-density proxy
    Density(DensityArgs),
    /// Thick / syndetic / piecewise-syndetic scans
    Structure(StructureArgs),
    /// Difference set (or sumset) statistics
    Diffset(DiffsetArgs),
    /// Thickness witness for A - B from a dense window pair
    Prop2(Prop2Args),
    /// Full shift-cover pipeline and verified witness
    Jin(JinArgs),
    /// Re-check a witness from a prior `jin` report
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SetArgs {
    /// Set spec for A
    #[arg(long)]
    a: String,
    /// Inclusive support "lo:hi"
    #[arg(long, allow_hyphen_values = true)]
    support: String,
    /// Overrides the seed of every Bernoulli leaf
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Window lengths "lo:hi" (default 1:min(256, support length))
    #[arg(long, allow_hyphen_values = true)]
    lengths: Option<String>,
    /// Initial-segment horizon N for the upper-density proxy (default support hi)
    #[arg(long)]
    n: Option<u64>,
    /// Lower end of the upper-density range (default N/2)
    #[arg(long)]
    limsup_from: Option<u64>,
    /// Check a_n >= ceil(alpha·n) for every profiled n
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Args, Debug)]
struct StructureArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Gap bound / interval length for the thick and piecewise-syndetic scans
    #[arg(long)]
    k: u64,
    /// Window length for the piecewise-syndetic scan
    #[arg(long)]
    m: u64,
    /// Probe interval "lo:hi" (default the support)
    #[arg(long, allow_hyphen_values = true)]
    interval: Option<String>,
}

#[derive(Args, Debug)]
struct DiffsetArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Set spec for B (default A)
    #[arg(long)]
    b: Option<String>,
    /// Compute A + B instead of A - B
    #[arg(long)]
    sum: bool,
}

#[derive(Args, Debug)]
struct Prop2Args {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long)]
    b: String,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    alpha: String,
    /// Window lengths N to scan, "lo:hi" (default all)
    #[arg(long, allow_hyphen_values = true)]
    lengths: Option<String>,
}

#[derive(Args, Debug)]
struct JinArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long)]
    b: String,
    /// Length of the interval to cover
    #[arg(long)]
    m: u64,
    /// Density of A (default: nominal density of the spec)
    #[arg(long)]
    alpha: Option<String>,
    /// Density of B (default: nominal density of the spec)
    #[arg(long)]
    beta: Option<String>,
    /// Surviving-fraction threshold
    #[arg(long, default_value = "1/4")]
    tau: String,
    /// Stage indices "a,b,c" (default automatic)
    #[arg(long)]
    n_list: Option<String>,
    /// Use banach_estimate values for alpha and beta
    #[arg(long)]
    measured: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// A report written by `syndet jin`
    #[arg(long)]
    report: PathBuf,
}

/// Outcome of a subcommand before printing.
enum Outcome {
    Report { report: Value, ok: bool },
    Usage(String),
}

fn usage(e: impl std::fmt::Display) -> Outcome {
    Outcome::Usage(e.to_string())
}

/// Runs `argv` (including the program name) and returns the exit code.
pub fn run<O: Write, E: Write>(argv: &[String], out: &mut O, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            return match e.kind() {
                DisplayHelp | DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Density(a) => density(a),
        Command::Structure(a) => structure(a),
        Command::Diffset(a) => diffset(a),
        Command::Prop2(a) => prop2(a),
        Command::Jin(a) => jin(a),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Outcome::Report { report, ok } => {
            let text = serde_json::to_string_pretty(&report).expect("json values serialize");
            let _ = writeln!(out, "{text}");
            if ok {
                0
            } else {
                1
            }
        }
        Outcome::Usage(msg) => {
            let _ = writeln!(err, "syndet: {msg}");
            2
        }
    }
}

fn report(command: &str, inputs: Value, result: Value, verified: Option<bool>) -> Value {
    json!({
        "command": command,
        "inputs": inputs,
        "result": result,
        "verified": verified,
        "version": SCHEMA_VERSION,
    })
}

pub fn parse_range(text: &str) -> Result<Interval, String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("range {text:?} must be \"lo:hi\""))?;
    let lo: i64 = lo.parse().map_err(|_| format!("bad range start in {text:?}"))?;
    let hi: i64 = hi.parse().map_err(|_| format!("bad range end in {text:?}"))?;
    Interval::new(lo, hi).map_err(|e| e.to_string())
}

fn length_range(text: &str) -> Result<Vec<u64>, String> {
    let r = parse_range(text)?;
    if r.lo() < 1 {
        return Err(format!("lengths {text:?} must start at >= 1"));
    }
    Ok((r.lo() as u64..=r.hi() as u64).collect())
}

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn interval_json(i: &Interval) -> Value {
    json!([i.lo(), i.hi()])
}

struct Loaded {
    spec: SetSpec,
    set: WindowSet,
}

fn load(text: &str, support: Interval, seed: Option<u64>) -> Result<Loaded, String> {
    let mut spec = parse_spec(text).map_err(|e| format!("spec {text:?}: {e}"))?;
    if let Some(s) = seed {
        spec = spec.with_seed(s);
    }
    let set = spec.materialize(support).map_err(|e| e.to_string())?;
    Ok(Loaded { spec, set })
}

fn nominal_json(spec: &SetSpec) -> Value {
    match spec.nominal_density() {
        Some(d) => json!({ "value": q(&d.value), "exact": d.exact }),
        None => Value::Null,
    }
}

fn set_inputs(args: &SetArgs, support: &Interval) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("a".into(), json!(args.a));
    m.insert("support".into(), interval_json(support));
    m.insert("seed".into(), json!(args.seed));
    m
}

macro_rules! tryu {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return usage(e),
        }
    };
}

fn profile_json(p: &DensityProfile) -> Value {
    Value::Array(
        p.entries
            .iter()
            .map(|e| json!({ "n": e.n, "a_n": e.best, "x_n": e.offset, "density": q(&e.density()) }))
            .collect(),
    )
}

fn density(args: DensityArgs) -> Outcome {
    let support = tryu!(parse_range(&args.set.support));
    let a = tryu!(load(&args.set.a, support, args.set.seed));
    let lengths = match &args.lengths {
        Some(l) => tryu!(length_range(l)),
        None => (1..=support.len().min(256)).collect(),
    };
    let profile = tryu!(window_profile(&a.set, &lengths));
    let estimate = tryu!(banach_estimate(&profile));
    let upper = if support.lo() == 1 {
        let big_n = args.n.unwrap_or(support.hi() as u64);
        let from = args.limsup_from.unwrap_or((big_n / 2).max(1));
        Some((from, big_n, tryu!(upper_density_over(&a.set, from, big_n))))
    } else if args.n.is_some() {
        return usage("--n needs a support starting at 1");
    } else {
        None
    };
    let alpha = match &args.alpha {
        Some(t) => Some(tryu!(rational(t))),
        None => None,
    };

    let mut inputs = set_inputs(&args.set, &support);
    inputs.insert("lengths".into(), json!([lengths[0], lengths[lengths.len() - 1]]));
    inputs.insert("alpha".into(), alpha.as_ref().map_or(Value::Null, q));
    let result = json!({
        "profile": profile_json(&profile),
        "banach_estimate": q(&estimate),
        "upper_density_estimate": upper.as_ref().map_or(Value::Null, |(from, to, d)| json!({
            "from": from, "to": to, "value": q(d),
        })),
        "nominal_density": nominal_json(&a.spec),
        "cardinality": a.set.cardinality(),
        "subadditivity_violations": profile.subadditivity_violations().len(),
        "density_floor_violations": alpha.map_or(Value::Null, |al| json!(profile.density_floor_violations(&al))),
    });
    Outcome::Report {
        report: report("density", Value::Object(inputs), result, None),
        ok: true,
    }
}

fn structure(args: StructureArgs) -> Outcome {
    let support = tryu!(parse_range(&args.set.support));
    let a = tryu!(load(&args.set.a, support, args.set.seed));
    let probe = match &args.interval {
        Some(t) => tryu!(parse_range(t)),
        None => support,
    };
    let region = tryu!(a.set.restrict(&probe));
    if region.support() != probe {
        return usage(format!("interval {probe} not inside support {support}"));
    }
    let thick = tryu!(thick_up_to(&region, args.k));
    let bound = tryu!(syndetic_bound(&region, &probe));
    let pws = tryu!(pws_witness(&region, args.k, args.m));
    let longest = region
        .runs()
        .into_iter()
        .max_by(|x, y| x.len().cmp(&y.len()).then(y.lo().cmp(&x.lo())));

    let mut inputs = set_inputs(&args.set, &support);
    inputs.insert("k".into(), json!(args.k));
    inputs.insert("m".into(), json!(args.m));
    inputs.insert("interval".into(), interval_json(&probe));
    let result = json!({
        "thick_up_to": { "k": args.k, "holds": thick.is_some(), "witness": thick.as_ref().map(interval_json) },
        "longest_run": longest.as_ref().map(|r| json!({ "interval": interval_json(r), "length": r.len() })),
        "syndetic_bound": bound,
        "max_gap": bound.map(|b| b - 1),
        "pws_witness": pws.as_ref().map(|j| json!({ "k": args.k, "interval": interval_json(j) })),
    });
    Outcome::Report {
        report: report("structure", Value::Object(inputs), result, None),
        ok: true,
    }
}

fn gap_histogram(set: &WindowSet) -> Value {
    let mut counts = std::collections::BTreeMap::<i64, u64>::new();
    let elems = set.to_vec();
    for w in elems.windows(2) {
        let gap = w[1] - w[0] - 1;
        if gap > 0 {
            *counts.entry(gap).or_default() += 1;
        }
    }
    Value::Array(counts.into_iter().map(|(g, c)| json!([g, c])).collect())
}

fn diffset(args: DiffsetArgs) -> Outcome {
    let support = tryu!(parse_range(&args.set.support));
    let a = tryu!(load(&args.set.a, support, args.set.seed));
    let b_text = args.b.clone().unwrap_or_else(|| args.set.a.clone());
    let b = tryu!(load(&b_text, support, args.set.seed));
    let out = if args.sum {
        tryu!(a.set.sumset(&b.set))
    } else {
        tryu!(a.set.difference_set(&b.set))
    };
    let s = out.support();
    // central half of the result support
    let quarter = (s.len() / 4) as i64;
    let central = Interval::new(s.lo() + quarter, s.hi() - quarter).unwrap_or(s);

    let mut inputs = set_inputs(&args.set, &support);
    inputs.insert("b".into(), json!(b_text));
    inputs.insert("operation".into(), json!(if args.sum { "sum" } else { "difference" }));
    let result = json!({
        "support": interval_json(&s),
        "degenerate": out.is_degenerate(),
        "cardinality": out.cardinality(),
        "min": out.min(),
        "max": out.max(),
        "central": interval_json(&central),
        "central_syndetic_bound": tryu!(syndetic_bound(&out, &central)),
        "gap_histogram": gap_histogram(&out),
    });
    Outcome::Report {
        report: report("diffset", Value::Object(inputs), result, None),
        ok: true,
    }
}

fn prop2(args: Prop2Args) -> Outcome {
    let support = tryu!(parse_range(&args.set.support));
    let a = tryu!(load(&args.set.a, support, args.set.seed));
    let b = tryu!(load(&args.b, support, args.set.seed));
    let alpha = tryu!(rational(&args.alpha));
    let found = match &args.lengths {
        Some(l) => tryu!(prop2_witness_over(&a.set, &b.set, args.k, alpha, tryu!(length_range(l)))),
        None => tryu!(prop2_witness(&a.set, &b.set, args.k, alpha)),
    };
    let verified = found.as_ref().map(|w| w.verify(&a.set, &b.set));
    let mut inputs = set_inputs(&args.set, &support);
    inputs.insert("b".into(), json!(args.b));
    inputs.insert("k".into(), json!(args.k));
    inputs.insert("alpha".into(), q(&alpha));
    inputs.insert("lengths".into(), json!(args.lengths));
    let result = json!({
        "witness": found.as_ref().map(|w| json!({
            "t": w.t,
            "k": w.k,
            "n": w.n,
            "window_a": interval_json(&w.window_a),
            "window_b": interval_json(&w.window_b),
            "count_a": w.count_a,
            "count_b": w.count_b,
            "covered": interval_json(&Interval::new(w.t + 1, w.t + w.k as i64).expect("k >= 1")),
        })),
    });
    Outcome::Report {
        report: report("prop2", Value::Object(inputs), result, Some(verified.unwrap_or(false))),
        ok: verified == Some(true),
    }
}

fn steps_json(steps: &[CoverStep]) -> Value {
    Value::Array(
        steps
            .iter()
            .map(|s| {
                json!({
                    "counterexample": s.counterexample,
                    "covered_fraction": q(&s.covered_fraction),
                    "retained": s.retained,
                    "discarded": s.discarded,
                })
            })
            .collect(),
    )
}

fn trace_json(t: &CoverTrace) -> Value {
    json!({ "shifts": t.shifts, "steps": steps_json(&t.steps), "survivors": t.survivors })
}

fn run_json(run: &PipelineRun) -> serde_json::Map<String, Value> {
    let w = &run.witness;
    let mut m = serde_json::Map::new();
    m.insert("shifts".into(), json!(w.shifts));
    m.insert("t".into(), json!(w.t));
    m.insert("m".into(), json!(w.m));
    m.insert("n".into(), json!(w.n));
    m.insert("covered".into(), json!([w.t + 1, w.t + w.m as i64]));
    m.insert("bound".into(), json!(w.bound));
    m.insert("bound_exceeded".into(), json!(w.bound_exceeded));
    m.insert("gamma".into(), q(&run.cover.gamma));
    m.insert("within_gamma_bound".into(), json!(run.cover.within_bound));
    m.insert("disjointness_checks".into(), json!(run.cover.disjointness_checks));
    m.insert("steps".into(), steps_json(&run.cover.steps));
    m.insert("survivors".into(), json!(run.cover.survivors));
    m.insert("satisfied".into(), json!(run.cover.satisfied));
    m.insert("skipped".into(), json!(run.skipped));
    m.insert(
        "stages".into(),
        Value::Array(
            run.stages
                .iter()
                .map(|s| {
                    json!({
                        "n": s.n, "x": s.x, "y": s.y, "z": s.z(), "t": s.t(),
                        "e_cardinality": s.e.cardinality(),
                        "e_density": q(&s.e_density()),
                        "lower_bound": q(&s.lower_bound()),
                    })
                })
                .collect(),
        ),
    );
    m
}

fn jin(args: JinArgs) -> Outcome {
    let support = tryu!(parse_range(&args.set.support));
    let a = tryu!(load(&args.set.a, support, args.set.seed));
    let b = tryu!(load(&args.b, support, args.set.seed));
    let tau = tryu!(rational(&args.tau));
    let n_list: Vec<u64> = match &args.n_list {
        Some(t) => tryu!(t
            .split(',')
            .map(|x| x.parse::<u64>().map_err(|_| format!("bad --n-list entry {x:?}")))
            .collect::<Result<Vec<_>, _>>()),
        None => default_n_list(&a.set, &b.set, args.m),
    };
    if n_list.is_empty() {
        return usage(format!("supports too small for m = {}: no n with n > 2m and n² <= |support|", args.m));
    }

    let user = |t: &Option<String>| -> Result<Option<Rational>, String> { t.as_deref().map(rational).transpose() };
    let given = (tryu!(user(&args.alpha)), tryu!(user(&args.beta)));
    let nominal = (
        given.0.or(a.spec.nominal_density().map(|d| d.value)),
        given.1.or(b.spec.nominal_density().map(|d| d.value)),
    );
    let fits = |n: &&u64| n.checked_mul(**n).is_some_and(|nn| nn <= support.len());
    let sq: Vec<u64> = n_list.iter().filter(fits).map(|n| n * n).collect();
    let lin: Vec<u64> = n_list.iter().filter(fits).copied().collect();
    let measured = if sq.is_empty() {
        (None, None)
    } else {
        (
            Some(tryu!(banach_estimate(&tryu!(window_profile(&a.set, &sq))))),
            Some(tryu!(banach_estimate(&tryu!(window_profile(&b.set, &lin))))),
        )
    };
    let (alpha, beta) = if args.measured { measured } else { nominal };
    let (Some(alpha), Some(beta)) = (alpha, beta) else {
        return usage("alpha/beta unknown: pass --alpha/--beta, use specs with a nominal density, or --measured");
    };

    let mut inputs = set_inputs(&args.set, &support);
    inputs.insert("b".into(), json!(args.b));
    inputs.insert("m".into(), json!(args.m));
    inputs.insert("tau".into(), q(&tau));
    inputs.insert("alpha".into(), q(&alpha));
    inputs.insert("beta".into(), q(&beta));
    inputs.insert("n_list".into(), json!(n_list));
    inputs.insert("measured".into(), json!(args.measured));
    let densities = json!({
        "nominal": { "alpha": nominal.0.as_ref().map(q), "beta": nominal.1.as_ref().map(q) },
        "measured": { "alpha": measured.0.as_ref().map(q), "beta": measured.1.as_ref().map(q) },
        "in_force": if args.measured { "measured" } else { "nominal" },
    });

    match jin_pipeline(&a.set, &b.set, args.m, &n_list, tau, alpha, beta) {
        Ok(run) => {
            let recheck = verify_witness(&a.set, &b.set, &run.witness.shifts, run.witness.t, args.m)
                .unwrap_or(false);
            let mut result = run_json(&run);
            result.insert("densities".into(), densities);
            let ok = run.witness.verified && recheck;
            Outcome::Report {
                report: report("jin", Value::Object(inputs), Value::Object(result), Some(ok)),
                ok,
            }
        }
        Err(e @ (Error::CoverFailed { .. } | Error::NoWitness { .. })) => {
            let trace = match &e {
                Error::CoverFailed { trace, .. } | Error::NoWitness { trace, .. } => trace_json(trace),
                _ => unreachable!(),
            };
            let result = json!({ "error": e.to_string(), "trace": trace, "densities": densities });
            Outcome::Report {
                report: report("jin", Value::Object(inputs), result, Some(false)),
                ok: false,
            }
        }
        Err(e) => usage(e),
    }
}

fn verify(args: VerifyArgs) -> Outcome {
    let text = tryu!(std::fs::read_to_string(&args.report).map_err(|e| format!("{}: {e}", args.report.display())));
    let prior: Value = tryu!(serde_json::from_str(&text).map_err(|e| format!("report is not JSON: {e}")));
    if prior["command"] != "jin" {
        return usage("report was not produced by `syndet jin`");
    }
    let field = |v: &Value, name: &str| -> Result<Value, String> {
        v.get(name).cloned().ok_or_else(|| format!("report lacks {name}"))
    };
    let inputs = tryu!(field(&prior, "inputs"));
    let result = tryu!(field(&prior, "result"));
    let str_of = |v: Value, name: &str| v.as_str().map(str::to_owned).ok_or_else(|| format!("{name} must be a string"));
    let a_text = tryu!(field(&inputs, "a").and_then(|v| str_of(v, "a")));
    let b_text = tryu!(field(&inputs, "b").and_then(|v| str_of(v, "b")));
    let support = tryu!(field(&inputs, "support").and_then(|v| {
        match (v[0].as_i64(), v[1].as_i64()) {
            (Some(lo), Some(hi)) => Interval::new(lo, hi).map_err(|e| e.to_string()),
            _ => Err("support must be [lo, hi]".into()),
        }
    }));
    let seed = inputs.get("seed").and_then(Value::as_u64);
    let Some(shifts) = result.get("shifts").and_then(Value::as_array) else {
        return usage("report has no witness (result.shifts missing)");
    };
    let shifts = tryu!(shifts
        .iter()
        .map(|v| v.as_i64().ok_or("shifts must be integers"))
        .collect::<Result<Vec<_>, _>>());
    let t = tryu!(result.get("t").and_then(Value::as_i64).ok_or("result.t missing"));
    let m = tryu!(result.get("m").and_then(Value::as_u64).ok_or("result.m missing"));

    let a = tryu!(load(&a_text, support, seed));
    let b = tryu!(load(&b_text, support, seed));
    let ok = tryu!(verify_witness(&a.set, &b.set, &shifts, t, m));
    let inputs = json!({
        "a": a_text, "b": b_text, "support": interval_json(&support), "seed": seed,
        "shifts": shifts, "t": t, "m": m,
    });
    Outcome::Report {
        report: report("verify", inputs, json!({ "covered": [t + 1, t + m as i64] }), Some(ok)),
        ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-10:10").unwrap(), Interval::new(-10, 10).unwrap());
        assert!(parse_range("5:1").is_err());
        assert!(parse_range("5").is_err());
        assert!(length_range("0:4").is_err());
        assert_eq!(length_range("2:4").unwrap(), vec![2, 3, 4]);
    }

    #[test]
    fn histogram_counts_interior_gaps() {
        let s = WindowSet::from_elements([0, 2, 4, 8, 9], Interval::new(0, 9).unwrap()).unwrap();
        assert_eq!(gap_histogram(&s), json!([[1, 2], [3, 1]]));
    }
}
