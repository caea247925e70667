//! Report plumbing shared by the harness and the CLI: verdicts with exit
//! codes, the versioned JSON envelope, and a small CSV writer.
//!
//! JSON output is byte-deterministic: serde_json's default map is ordered by
//! key, and every payload below is built from sorted structures.

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }

    /// Combine: any failure dominates, then any inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Versioned envelope for every machine-readable artifact.
pub fn envelope(command: &str, payload: Value) -> Value {
    json!({
        "schema": "wfx/1",
        "command": command,
        "payload": payload,
    })
}

pub fn to_json_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Minimal CSV writer: quotes a field only when it contains a comma, quote,
/// or newline; embedded quotes are doubled.
pub fn to_csv(rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for row in rows {
        let mut first = true;
        for field in row {
            if !first {
                out.push(',');
            }
            first = false;
            if field.contains(',') || field.contains('"') || field.contains('\n') {
                out.push('"');
                out.push_str(&field.replace('"', "\"\""));
                out.push('"');
            } else {
                out.push_str(field);
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_algebra() {
        use Verdict::*;
        assert_eq!(Pass.and(Pass), Pass);
        assert_eq!(Pass.and(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.and(Fail), Fail);
        assert_eq!(Pass.exit_code(), 0);
        assert_eq!(Fail.exit_code(), 1);
        assert_eq!(Inconclusive.exit_code(), 2);
    }

    #[test]
    fn csv_quoting() {
        let rows = vec![
            vec!["a".to_string(), "b,c".to_string()],
            vec!["say \"hi\"".to_string(), "1.5".to_string()],
        ];
        let s = to_csv(&rows);
        assert_eq!(s, "a,\"b,c\"\n\"say \"\"hi\"\"\",1.5\n");
    }

    #[test]
    fn envelope_is_deterministic() {
        let v = envelope("ap", json!({"value": 1.0, "argmax": [0, 3]}));
        let a = to_json_string(&v);
        let b = to_json_string(&envelope("ap", json!({"value": 1.0, "argmax": [0, 3]})));
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": \"wfx/1\""));
    }
}
