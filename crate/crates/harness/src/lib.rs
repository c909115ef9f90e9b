//! Named verification checks over the engine, each producing a serializable
//! [`CheckResult`].

mod checks;
pub mod random;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use tspace_core::{EngineConfig, Error, PrimeField, Result};

pub use checks::{rewriting_soundness, t3k_span_check, SpanCheck};

/// Every registered check, in report order.
pub const CHECK_IDS: [&str; 12] = [
    "CHK-CENTRAL",
    "CHK-GAMMA",
    "CHK-GXVAL",
    "CHK-LEMMA11",
    "CHK-LGT",
    "CHK-PROP10",
    "CHK-QLADDER",
    "CHK-REL4",
    "CHK-REL6",
    "CHK-RKCHAIN",
    "CHK-RKSEP",
    "CHK-T3N",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub params: Value,
    pub verdict: Verdict,
    /// Ranks, counts or the offending input; always present on failure.
    pub witness: Value,
    /// Why a check was skipped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Wall time, recorded only when requested so reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub p: u32,
    pub seed: u64,
    /// Random tuples per relation check.
    pub trials: u64,
    pub engine: EngineConfig,
    pub record_time: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            p: 3,
            seed: 0,
            trials: 200,
            engine: EngineConfig::default(),
            record_time: false,
        }
    }
}

impl HarnessConfig {
    pub fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.p)
    }
}

/// What a check body reports before timing and error mapping.
pub(crate) struct Outcome {
    pub params: Value,
    pub pass: bool,
    pub witness: Value,
}

/// Canonical id for `name`: case-insensitive, with or without the `CHK-` prefix.
pub fn canonical_id(name: &str) -> Option<&'static str> {
    let upper = name.trim().to_ascii_uppercase();
    let full = if upper.starts_with("CHK-") {
        upper
    } else {
        format!("CHK-{upper}")
    };
    CHECK_IDS.iter().copied().find(|id| *id == full)
}

/// Expands `all` and resolves names to ids, sorted and without repeats.
pub fn resolve_ids<S: AsRef<str>>(names: &[S]) -> Result<Vec<&'static str>> {
    let mut out = Vec::new();
    for name in names {
        let name = name.as_ref();
        if name.eq_ignore_ascii_case("all") {
            out.extend(CHECK_IDS);
            continue;
        }
        out.push(
            canonical_id(name)
                .ok_or_else(|| Error::Argument(format!("unknown check id {name:?}")))?,
        );
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Runs one check. Budget exhaustion becomes `skipped`; an internal
/// consistency violation becomes `fail`; other errors are returned.
pub fn run_check(id: &str, config: &HarnessConfig) -> Result<CheckResult> {
    let id = canonical_id(id).ok_or_else(|| Error::Argument(format!("unknown check id {id:?}")))?;
    config.field()?;
    let start = Instant::now();
    let outcome = checks::dispatch(id, config);
    let wall_ms = config
        .record_time
        .then(|| start.elapsed().as_millis() as u64);
    let base = serde_json::json!({ "p": config.p, "seed": config.seed });
    let result = match outcome {
        Ok(o) => CheckResult {
            id: id.to_string(),
            params: merge(base, o.params),
            verdict: if o.pass { Verdict::Pass } else { Verdict::Fail },
            witness: o.witness,
            reason: None,
            wall_ms,
        },
        Err(Error::Resource(msg)) => CheckResult {
            id: id.to_string(),
            params: base,
            verdict: Verdict::Skipped,
            witness: Value::Null,
            reason: Some(format!("budget exceeded: {msg}")),
            wall_ms,
        },
        Err(Error::Consistency(msg)) => CheckResult {
            id: id.to_string(),
            params: base,
            verdict: Verdict::Fail,
            witness: serde_json::json!({ "consistency": msg }),
            reason: None,
            wall_ms,
        },
        Err(e) => return Err(e),
    };
    Ok(result)
}

/// Runs checks concurrently; results come back in id order.
pub fn run_checks(ids: &[&str], config: &HarnessConfig) -> Result<Vec<CheckResult>> {
    let mut results: Vec<CheckResult> = ids
        .par_iter()
        .map(|id| run_check(id, config))
        .collect::<Result<_>>()?;
    results.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(results)
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}
