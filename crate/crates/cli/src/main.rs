//! `tspace`: command-line access to the engine and the claim harness.

mod cache;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use tspace_core::grassmann::{self, GrassmannElement};
use tspace_core::specs::{parse_poly, parse_spec, SpecOptions, DEFAULT_LEVELS};
use tspace_core::syntax::{self, print_normal};
use tspace_core::{
    is_central_for_g, is_identity_of_g, straighten, Engine, EngineConfig, Error, FalsifyMode,
    FreePoly, MultiDegree, PrimeField, Result,
};
use tspace_harness::{resolve_ids, run_checks, HarnessConfig, Verdict};

use cache::JsonCache;

/// Default Grassmann generator count for random evaluation.
const DEFAULT_S: usize = 8;

#[derive(Parser, Debug)]
#[command(
    name = "tspace",
    version,
    about = "Exact computation modulo the triple-commutator T-ideal over F_p"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Odd prime characteristic.
    #[arg(long, global = true, default_value_t = 3)]
    p: u32,
    /// Number of variables (defaults to the largest index used).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Largest total degree the engine may examine.
    #[arg(long = "max-deg", global = true)]
    max_deg: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// JSON file of computed component bases.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form modulo T^(3).
    Nf { poly: String },
    /// Whether every evaluation in the Grassmann algebra is central.
    Central {
        poly: String,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Whether the polynomial is an identity of the Grassmann algebra.
    Identity { poly: String },
    /// Membership of the polynomial in a T-space or T-ideal.
    Member {
        poly: String,
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: u32,
    },
    /// Dimension of one multihomogeneous component.
    Dim {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        deg: String,
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: u32,
    },
    /// Whether two specs agree at the given multidegrees.
    Equal {
        /// Given exactly twice.
        #[arg(long, required = true)]
        spec: Vec<String>,
        #[arg(long, required = true)]
        deg: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: u32,
    },
    /// Evaluates in the Grassmann algebra G_s.
    Geval {
        poly: String,
        #[arg(long, default_value_t = DEFAULT_S)]
        s: usize,
        /// Image of x1, x2, ... in order, written in e1, e2, ...
        #[arg(long)]
        assign: Vec<String>,
    },
    /// Runs harness checks by id, or `all`.
    Verify {
        #[arg(default_value = "all")]
        ids: Vec<String>,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// Record wall time per check (breaks byte-identical reports).
        #[arg(long)]
        time: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Nf { .. } => "nf",
            Command::Central { .. } => "central",
            Command::Identity { .. } => "identity",
            Command::Member { .. } => "member",
            Command::Dim { .. } => "dim",
            Command::Equal { .. } => "equal",
            Command::Geval { .. } => "geval",
            Command::Verify { .. } => "verify",
        }
    }
}

/// The single JSON object printed under `--json`.
#[derive(Serialize)]
struct Report {
    command: &'static str,
    p: u32,
    n: Option<usize>,
    result: Value,
    details: Value,
    witness: Value,
}

/// What a command produced: the verdict decides the exit code.
struct Outcome {
    n: Option<usize>,
    result: Value,
    details: Value,
    witness: Value,
    /// `Some(false)` exits with 1.
    verdict: Option<bool>,
    text: String,
}

impl Outcome {
    fn boolean(n: usize, b: bool, details: Value, witness: Value, extra: String) -> Outcome {
        let mut text = b.to_string();
        if !extra.is_empty() {
            text.push('\n');
            text.push_str(&extra);
        }
        Outcome {
            n: Some(n),
            result: Value::Bool(b),
            details,
            witness,
            verdict: Some(b),
            text,
        }
    }
}

fn read_arg(text: &str) -> Result<String> {
    if text != "-" {
        return Ok(text.to_string());
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Error::Argument(format!("cannot read stdin: {e}")))?;
    Ok(s)
}

fn read_poly(text: &str, field: PrimeField, n: Option<usize>) -> Result<(FreePoly, usize)> {
    let f = parse_poly(&read_arg(text)?, field)?;
    let n = n.unwrap_or(f.max_var() as usize);
    Ok((f.with_ambient(n)?, n))
}

fn parse_deg(text: &str, n: Option<usize>) -> Result<MultiDegree> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let d = inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::Argument(format!("bad multidegree '{text}'")))
        })
        .collect::<Result<Vec<u32>>>()?;
    match n {
        Some(n) if n != d.len() => Err(Error::Argument(format!(
            "multidegree '{text}' has {} entries but --n is {n}",
            d.len()
        ))),
        _ => Ok(MultiDegree(d)),
    }
}

fn element_json(g: &GrassmannElement) -> Value {
    Value::String(g.to_string())
}

/// Reads an element of `G_s` written in `e1`, `e2`, ...
fn read_element(text: &str, field: PrimeField, s: usize) -> Result<GrassmannElement> {
    let f = syntax::parse_with_letter(&read_arg(text)?, field, None, 'e')?;
    let gens = (1..=s)
        .map(|i| GrassmannElement::generator(field, s, i))
        .collect::<Result<Vec<_>>>()?;
    if f.max_var() as usize > s {
        return Err(Error::Argument(format!(
            "e{} is not a generator of G_{s}",
            f.max_var()
        )));
    }
    if f.max_var() == 0 {
        return GrassmannElement::scalar(field, s, f.coeff(&tspace_core::Word::unit()));
    }
    grassmann::evaluate(&f, &gens)
}

struct Context {
    field: PrimeField,
    global: Global,
    engine: Engine,
}

fn engine_config(global: &Global) -> EngineConfig {
    let mut c = EngineConfig::default();
    if let Some(m) = global.max_deg {
        c.max_degree = m;
    }
    c
}

fn spec_n(global: &Global, hint: usize) -> usize {
    global.n.unwrap_or(hint).max(1)
}

fn run(cmd: &Command, cx: &Context) -> Result<Outcome> {
    let field = cx.field;
    let g = &cx.global;
    match cmd {
        Command::Nf { poly } => {
            let (f, n) = read_poly(poly, field, g.n)?;
            let nf = straighten(&f);
            let text = print_normal(&nf);
            Ok(Outcome {
                n: Some(n),
                result: Value::String(text.clone()),
                details: json!({ "terms": nf.len() }),
                witness: Value::Null,
                verdict: None,
                text,
            })
        }
        Command::Identity { poly } => {
            let (f, n) = read_poly(poly, field, g.n)?;
            let b = is_identity_of_g(&f);
            let nf = print_normal(&straighten(&f));
            Ok(Outcome::boolean(
                n,
                b,
                json!({ "normal_form": nf }),
                Value::Null,
                String::new(),
            ))
        }
        Command::Central { poly, trials } => {
            let (f, n) = read_poly(poly, field, g.n)?;
            let b = is_central_for_g(&f);
            let mut witness = Value::Null;
            let mut extra = String::new();
            if !b {
                if let Some(c) =
                    grassmann::falsify(&f, FalsifyMode::Central, DEFAULT_S, *trials, g.seed)?
                {
                    let sub: Vec<Value> = c.substitution.iter().map(element_json).collect();
                    extra = format!("witness: trial {} gives {}", c.trial, c.value);
                    witness = json!({ "s": DEFAULT_S, "trial": c.trial, "substitution": sub, "value": element_json(&c.value) });
                }
            }
            Ok(Outcome::boolean(
                n,
                b,
                json!({ "normal_form": print_normal(&straighten(&f)) }),
                witness,
                extra,
            ))
        }
        Command::Member { poly, spec, levels } => {
            let text = read_arg(poly)?;
            let f = parse_poly(&text, field)?;
            let n = spec_n(g, f.max_var() as usize);
            let hint = f.degree().unwrap_or(0) as u32;
            let spec = parse_spec(
                spec,
                field,
                n,
                SpecOptions {
                    levels: *levels,
                    degree_hint: hint,
                },
            )?;
            let report = cx.engine.member(&f, &spec)?;
            let witness = match report.components.iter().find(|c| !c.contains) {
                Some(c) => serde_json::to_value(c).expect("plain data"),
                None => Value::Null,
            };
            let lines = report
                .components
                .iter()
                .map(|c| {
                    format!(
                        "{}: frame {} rank {} rank_with_target {} {}",
                        c.d,
                        c.frame_size,
                        c.rank,
                        c.rank_with_target,
                        if c.contains {
                            "contained"
                        } else {
                            "not contained"
                        }
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let details = json!({ "spec": spec.label(), "components": report.components });
            Ok(Outcome::boolean(n, report.member, details, witness, lines))
        }
        Command::Dim { spec, deg, levels } => {
            let d = parse_deg(deg, g.n)?;
            let n = d.n();
            let hint = d.0.iter().sum();
            let spec = parse_spec(
                spec,
                field,
                n,
                SpecOptions {
                    levels: *levels,
                    degree_hint: hint,
                },
            )?;
            let b = cx.engine.component_basis(&spec, &d)?;
            Ok(Outcome {
                n: Some(n),
                result: json!(b.rank()),
                details: json!({ "spec": spec.label(), "d": d, "frame_size": b.frame.len() }),
                witness: Value::Null,
                verdict: None,
                text: b.rank().to_string(),
            })
        }
        Command::Equal { spec, deg, levels } => {
            if spec.len() != 2 {
                return Err(Error::Argument(format!(
                    "equal needs exactly two --spec values, got {}",
                    spec.len()
                )));
            }
            let ds = deg
                .iter()
                .map(|t| parse_deg(t, g.n))
                .collect::<Result<Vec<_>>>()?;
            let n = ds[0].n();
            if ds.iter().any(|d| d.n() != n) {
                return Err(Error::Argument(
                    "all multidegrees must have the same length".into(),
                ));
            }
            let mut rows = Vec::new();
            let mut first_diff = Value::Null;
            for d in &ds {
                let opts = SpecOptions {
                    levels: *levels,
                    degree_hint: d.0.iter().sum(),
                };
                let a = parse_spec(&spec[0], field, n, opts)?;
                let b = parse_spec(&spec[1], field, n, opts)?;
                let (da, db) = (cx.engine.dim(&a, d)?, cx.engine.dim(&b, d)?);
                let eq = cx.engine.subspace_equal(&a, &b, d)?;
                let row = json!({ "d": d, "dim_a": da, "dim_b": db, "equal": eq });
                if !eq && first_diff.is_null() {
                    first_diff = row.clone();
                }
                rows.push(row);
            }
            let all = first_diff.is_null();
            let extra = rows
                .iter()
                .map(|r| {
                    format!(
                        "{}: {} vs {}",
                        MultiDegree(serde_json::from_value(r["d"].clone()).unwrap_or_default()),
                        r["dim_a"],
                        r["dim_b"]
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::boolean(
                n,
                all,
                json!({ "components": rows }),
                first_diff,
                extra,
            ))
        }
        Command::Geval { poly, s, assign } => {
            let (f, n) = read_poly(poly, field, g.n)?;
            let images = if assign.is_empty() {
                grassmann::trial_substitution(field, n, *s, g.seed, 0)?
            } else {
                if assign.len() < n {
                    return Err(Error::Argument(format!(
                        "{} variables but {} --assign values",
                        n,
                        assign.len()
                    )));
                }
                assign
                    .iter()
                    .map(|a| read_element(a, field, *s))
                    .collect::<Result<Vec<_>>>()?
            };
            let value = if n == 0 {
                GrassmannElement::scalar(field, *s, f.coeff(&tspace_core::Word::unit()))?
            } else {
                grassmann::evaluate(&f, &images)?
            };
            let text = value.to_string();
            let sub: Vec<Value> = images.iter().map(element_json).collect();
            Ok(Outcome {
                n: Some(n),
                result: Value::String(text.clone()),
                details: json!({ "s": s, "substitution": sub, "central": value.is_central_element() }),
                witness: Value::Null,
                verdict: None,
                text,
            })
        }
        Command::Verify { ids, trials, time } => {
            let ids = resolve_ids(ids)?;
            let config = HarnessConfig {
                p: field.p(),
                seed: g.seed,
                trials: *trials,
                engine: cx.engine.config.clone(),
                record_time: *time,
            };
            let results = run_checks(&ids, &config)?;
            let failed: Vec<&str> = results
                .iter()
                .filter(|r| r.verdict == Verdict::Fail)
                .map(|r| r.id.as_str())
                .collect();
            let pass = failed.is_empty();
            let text = results
                .iter()
                .map(|r| {
                    let v = match r.verdict {
                        Verdict::Pass => "pass",
                        Verdict::Fail => "fail",
                        Verdict::Skipped => "skipped",
                    };
                    match &r.reason {
                        Some(why) => format!("{} {v} ({why})", r.id),
                        None => format!("{} {v}", r.id),
                    }
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome {
                n: g.n,
                result: json!(if pass { "pass" } else { "fail" }),
                details: serde_json::to_value(&results).expect("plain data"),
                witness: if pass {
                    Value::Null
                } else {
                    json!({ "failed": failed })
                },
                verdict: Some(pass),
                text,
            })
        }
    }
}

fn emit(json_mode: bool, report: &Report, text: &str) {
    if json_mode {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("plain data")
        );
    } else {
        println!("{text}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    let json_mode = cli.global.json;
    let p = cli.global.p;
    let n_flag = cli.global.n;
    let fail = |e: Error| {
        let report = Report {
            command,
            p,
            n: n_flag,
            result: Value::Null,
            details: json!({ "error": e.to_string() }),
            witness: Value::Null,
        };
        if json_mode {
            emit(true, &report, "");
        } else {
            eprintln!("error: {e}");
        }
        ExitCode::from(2)
    };

    let field = match PrimeField::new(p) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    if let Some(j) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
        {
            return fail(Error::Config(format!("cannot start {j} workers: {e}")));
        }
    }
    let store = cli
        .global
        .cache
        .as_deref()
        .map(|p| Arc::new(JsonCache::open(p)));
    if let Some(s) = store.as_ref().filter(|s| s.rejected() > 0) {
        eprintln!(
            "note: ignored {} cache entries that failed verification",
            s.rejected()
        );
    }
    let mut engine = Engine::new(engine_config(&cli.global));
    if let Some(s) = &store {
        engine = engine.with_store(s.clone());
    }
    let cx = Context {
        field,
        global: cli.global,
        engine,
    };
    let outcome = match run(&cli.command, &cx) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    if let Some(s) = &store {
        if let Err(e) = s.persist() {
            return fail(e);
        }
    }
    let report = Report {
        command,
        p,
        n: outcome.n,
        result: outcome.result,
        details: outcome.details,
        witness: outcome.witness,
    };
    emit(json_mode, &report, &outcome.text);
    match outcome.verdict {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}
