//! The report document, rendered as text or JSON.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "dp4-report/1";

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct FieldInfo {
    /// `k` or `L`.
    pub name: String,
    pub descriptor: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Claim {
    pub key: String,
    pub value: Value,
    /// The operation that produced the value.
    pub op: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Stage {
    pub name: String,
    pub claims: Vec<Claim>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Stage {
    pub fn new(name: &str) -> Self {
        Stage { name: name.into(), claims: Vec::new(), notes: Vec::new() }
    }

    pub fn claim(&mut self, key: &str, value: Value, op: &str) {
        self.claims.push(Claim { key: key.into(), value, op: op.into() });
    }

    pub fn note(&mut self, text: &str) {
        self.notes.push(text.into());
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.claims.iter().find(|c| c.key == key).map(|c| &c.value)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &str, passed: bool) -> Self {
        Check { name: name.into(), passed }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub schema: String,
    pub field: FieldInfo,
    pub stages: Vec<Stage>,
    pub checks: Vec<Check>,
    pub verdict: String,
}

impl Report {
    pub fn new(name: &str, descriptor: &str) -> Self {
        Report {
            schema: SCHEMA.into(),
            field: FieldInfo { name: name.into(), descriptor: descriptor.into() },
            stages: Vec::new(),
            checks: Vec::new(),
            verdict: String::new(),
        }
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn claim(&self, stage: &str, key: &str) -> Option<&Value> {
        self.stage(stage)?.get(key)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("field {} = {}\n", self.field.name, self.field.descriptor);
        for s in &self.stages {
            out.push_str(&format!("\n[{}]\n", s.name));
            for c in &s.claims {
                write_value(&mut out, &c.key, &c.value, 2);
            }
            for n in &s.notes {
                out.push_str(&format!("  note: {n}\n"));
            }
        }
        out.push_str("\n[checks]\n");
        for c in &self.checks {
            out.push_str(&format!("  {} {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name));
        }
        out.push_str(&format!("\nverdict: {}\n", self.verdict));
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn write_value(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for item in items {
                let Value::Object(map) = item else {
                    out.push_str(&format!("{pad}  {}\n", scalar(item)));
                    continue;
                };
                let fields: Vec<String> = map.iter().map(|(k, x)| format!("{k}={}", scalar(x))).collect();
                out.push_str(&format!("{pad}  {}\n", fields.join("  ")));
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", parts.join(", ")));
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_and_json() {
        let mut r = Report::new("k", "Qcyc(a)");
        let mut s = Stage::new("pencil");
        s.claim("smooth", json!(true), "isSmoothPencil");
        s.claim("rows", json!([{"label": "T0", "degree": 1}]), "x");
        r.stages.push(s);
        r.checks.push(Check::new("smooth", true));
        let t = r.to_text();
        assert!(t.contains("smooth: true"));
        assert!(t.contains("degree=1  label=T0"));
        let j: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(j["schema"], SCHEMA);
        assert!(r.all_passed());
        assert_eq!(r.claim("pencil", "smooth"), Some(&json!(true)));
    }
}
