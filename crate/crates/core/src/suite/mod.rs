//! Seeded property suites. Every row aggregates one invariant over its random instances.

mod geometry;
mod graded;
mod linear;
mod toric;

use serde_json::{json, Map, Value};

use crate::report::{Check, Report, Tag};
use crate::{Error, Result};

pub use geometry::{kiselman, theorem_b};
pub use graded::{graded, negative};
pub use linear::{geodesics, norms};
pub use toric::quantization;

pub const SUITES: [&str; 7] = ["norms", "geodesics", "graded", "quantization", "kiselman", "theoremB", "negative"];

/// Runs a named suite (`all` runs every suite in order).
pub fn run(name: &str, seed: u64) -> Result<Report> {
    let one = |n: &str| -> Result<Report> {
        Ok(match n {
            "norms" => norms(seed),
            "geodesics" => geodesics(seed),
            "graded" => graded(seed),
            "quantization" => quantization(seed),
            "kiselman" => kiselman(seed),
            "theoremB" => theorem_b(seed),
            "negative" => negative(seed),
            other => {
                return Err(Error::Parse(format!(
                    "unknown suite {other:?}; expected one of all, {}",
                    SUITES.join(", ")
                )))
            }
        })
    };
    if name == "all" {
        let mut r = Report::new("all");
        for n in SUITES {
            r.extend(one(n)?);
        }
        Ok(r)
    } else {
        one(name)
    }
}

/// Outcome of one instance: `Ok(None)` passes, `Ok(Some(w))` fails with witness `w`.
pub(crate) type Outcome = Result<Option<Value>>;

pub(crate) struct Tally {
    name: String,
    tag: Tag,
    instances: usize,
    failed: usize,
    witness: Option<Value>,
    extra: Map<String, Value>,
}

impl Tally {
    pub(crate) fn new(name: &str) -> Self {
        Self::tagged(name, Tag::Exact)
    }

    pub(crate) fn tagged(name: &str, tag: Tag) -> Self {
        Tally { name: name.into(), tag, instances: 0, failed: 0, witness: None, extra: Map::new() }
    }

    pub(crate) fn record(&mut self, o: Outcome) {
        self.instances += 1;
        let w = match o {
            Ok(None) => return,
            Ok(Some(w)) => w,
            Err(e) => json!({ "error": e.to_string() }),
        };
        self.failed += 1;
        if self.witness.is_none() {
            self.witness = Some(w);
        }
    }

    pub(crate) fn note(&mut self, key: &str, v: Value) {
        self.extra.insert(key.into(), v);
    }

    pub(crate) fn finish(self) -> Check {
        let mut detail = Map::new();
        detail.insert("instances".into(), json!(self.instances));
        detail.insert("failed".into(), json!(self.failed));
        detail.extend(self.extra);
        Check::new(self.name, self.failed == 0 && self.instances > 0, self.tag)
            .with_detail(Value::Object(detail))
            .with_witness(self.witness)
    }
}

/// `Ok(None)` when `ok`, otherwise the witness built by `w`.
pub(crate) fn expect(ok: bool, w: impl FnOnce() -> Value) -> Outcome {
    Ok(if ok { None } else { Some(w()) })
}

/// Independent stream per suite and row.
pub(crate) fn stream(seed: u64, salt: u64) -> crate::instances::Rng64 {
    crate::instances::rng(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}
