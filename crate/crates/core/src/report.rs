//! Machine-readable check rows shared by diagnostics, suites and the CLI.

use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    Exact,
    Approx,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Exact => "exact",
            Tag::Approx => "approx",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub tag: Tag,
    pub detail: Value,
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, tag: Tag) -> Self {
        Check { name: name.into(), passed, tag, detail: Value::Null, witness: None }
    }

    pub fn exact(name: impl Into<String>, passed: bool) -> Self {
        Self::new(name, passed, Tag::Exact)
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    pub fn with_witness(mut self, witness: Option<Value>) -> Self {
        self.witness = witness;
        self
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "name": self.name, "status": self.status(), "tag": self.tag.as_str() });
        if !self.detail.is_null() {
            v["detail"] = self.detail.clone();
        }
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub suite: String,
    pub rows: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), rows: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.rows.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.rows.iter().filter(|r| !r.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "rows": self.rows.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }

    /// Columns `name,status,tag,detail,witness`; JSON fields are embedded compactly.
    pub fn csv(&self) -> String {
        let mut s = String::from("name,status,tag,detail,witness\n");
        let field = |v: &Value| {
            if v.is_null() {
                String::new()
            } else {
                format!("\"{}\"", v.to_string().replace('"', "\"\""))
            }
        };
        for r in &self.rows {
            let w = r.witness.clone().unwrap_or(Value::Null);
            s.push_str(&format!("{},{},{},{},{}\n", r.name, r.status(), r.tag.as_str(), field(&r.detail), field(&w)));
        }
        s
    }
}
