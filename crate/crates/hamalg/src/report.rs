//! Versioned machine-readable reports and their text rendering.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::explain;
use crate::suites::{Role, SuiteRun};

pub const FORMAT: &str = "report-v1";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{:02x}", b)).collect()
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Prerequisite => "prerequisite",
        Role::Condition => "condition",
        Role::Diagnostic => "diagnostic",
    }
}

/// Everything except the timestamp and the report digest.
fn body(run: &SuiteRun, input_digest: &str) -> Map<String, Value> {
    let checks: Vec<Value> = run
        .entries
        .iter()
        .map(|e| {
            let r = &e.report;
            json!({
                "name": e.name,
                "tag": explain::tag(&e.name),
                "role": role_name(e.role),
                "pass": e.pass,
                "max_residual": r.max_residual,
                "tol": r.tol,
                "samples": r.samples,
                "worst_point": r.worst_point,
                "worst_field": r.worst_field,
                "note": e.note,
            })
        })
        .collect();
    let mut m = Map::new();
    m.insert("format".into(), json!(FORMAT));
    m.insert("tool".into(), json!({"name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION")}));
    m.insert("input_sha256".into(), json!(input_digest));
    m.insert("suite".into(), json!(run.suite));
    m.insert("plan".into(), json!({"points": run.settings.points, "tol": run.settings.tol, "seed": run.settings.seed}));
    m.insert("verdict".into(), json!(if run.pass() { "pass" } else { "fail" }));
    m.insert("failing".into(), json!(run.failing()));
    m.insert("checks".into(), Value::Array(checks));
    m
}

/// The digest covers the compact serialization of every field except
/// `timestamp_unix` and `report_sha256` itself.
pub fn to_json(run: &SuiteRun, input_digest: &str, timestamp_unix: u64) -> Value {
    let mut m = body(run, input_digest);
    let digest = sha256_hex(Value::Object(m.clone()).to_string().as_bytes());
    m.insert("report_sha256".into(), json!(digest));
    m.insert("timestamp_unix".into(), json!(timestamp_unix));
    Value::Object(m)
}

/// Recompute the digest of a parsed report.
pub fn verify_digest(report: &Value) -> bool {
    let Some(obj) = report.as_object() else { return false };
    let mut m = obj.clone();
    let claimed = m.remove("report_sha256");
    m.remove("timestamp_unix");
    claimed.as_ref().and_then(Value::as_str) == Some(sha256_hex(Value::Object(m).to_string().as_bytes()).as_str())
}

pub fn to_text(run: &SuiteRun) -> String {
    let s = &run.settings;
    let mut out = format!("suite {} (points {}, tol {:e}, seed {})\n", run.suite, s.points, s.tol, s.seed);
    let width = run.entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for e in &run.entries {
        out.push_str(&format!(
            "  {}  {:<12}  {:<width$}  max {:.3e}  [{}]",
            if e.pass { "PASS" } else { "FAIL" },
            role_name(e.role),
            e.name,
            e.report.max_residual,
            explain::tag(&e.name),
            width = width
        ));
        if let Some(n) = &e.note {
            out.push_str(&format!("  {}", n));
        }
        out.push('\n');
    }
    let failing = run.failing();
    if failing.is_empty() {
        out.push_str("verdict: PASS\n");
    } else {
        out.push_str(&format!("verdict: FAIL ({})\n", failing.join(", ")));
    }
    out
}
