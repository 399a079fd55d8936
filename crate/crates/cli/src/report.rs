use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Envelope shared by every command's report.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub command: &'static str,
    pub ok: bool,
    pub assertions: Vec<Assertion>,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &'static str, result: T) -> Self {
        Report {
            command,
            ok: true,
            assertions: Vec::new(),
            result,
        }
    }

    pub fn assert(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.ok &= passed;
        self.assertions.push(Assertion {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable report");
        s.push('\n');
        s
    }

    /// Assertions first, then the result flattened to `path: value` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}: {}",
            self.command,
            if self.ok { "ok" } else { "FAILED" }
        );
        for a in &self.assertions {
            let _ = write!(
                out,
                "  {} {}",
                if a.passed { "PASS" } else { "FAIL" },
                a.name
            );
            if let Some(d) = &a.detail {
                let _ = write!(out, " ({d})");
            }
            out.push('\n');
        }
        let value = serde_json::to_value(&self.result).expect("serializable result");
        flatten(&mut out, "", &value);
        out
    }
}

fn is_scalar_array(v: &[serde_json::Value]) -> bool {
    v.iter().all(|x| !x.is_array() && !x.is_object())
}

fn flatten(out: &mut String, path: &str, v: &serde_json::Value) {
    use serde_json::Value;
    let scalar = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                flatten(out, &p, x);
            }
        }
        Value::Array(items) if is_scalar_array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{path}: [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(out, &format!("{path}[{i}]"), x);
            }
        }
        Value::Null => {}
        other => {
            let _ = writeln!(out, "{path}: {}", scalar(other));
        }
    }
}
