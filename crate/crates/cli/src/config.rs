//! Experiment configuration: arena, named objects, task list and output settings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use serde_json::Value;

use nageo::graded::{GradedNorm, SectionRing};
use nageo::norms::AnyNorm;
use nageo::segments::FSSegment;
use nageo::toric::{fs_from_weights, ToricMetric};
use nageo::{rational, Backend};

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BackendName {
    #[default]
    #[serde(alias = "q", alias = "trivial")]
    Rational,
    #[serde(alias = "t-adic")]
    Tadic,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arena {
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub backend: BackendName,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Norm,
    Graded,
    Metric,
    Segment,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    pub kind: Kind,
    pub value: Value,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default)]
    pub format: Format,
    pub path: Option<PathBuf>,
}

fn default_p() -> String {
    "1".into()
}

fn default_kmax() -> usize {
    8
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    Geodesic {
        n0: String,
        n1: String,
        ts: Vec<String>,
    },
    Distance {
        n0: String,
        n1: String,
        #[serde(default = "default_p")]
        p: String,
    },
    GradedStats {
        g0: String,
        g1: String,
        #[serde(default = "default_p")]
        p: String,
        kmax: Option<usize>,
    },
    Energy {
        phi0: String,
        phi1: String,
        #[serde(default = "default_kmax")]
        kmax: usize,
    },
    D1 {
        phi0: String,
        phi1: String,
        #[serde(default = "default_kmax")]
        kmax: usize,
    },
    MaximalSegment {
        phi0: String,
        phi1: String,
        t: String,
        #[serde(default = "default_kmax")]
        kmax: usize,
    },
    LegendreSegment {
        phi0: String,
        phi1: String,
        t: String,
    },
    SegmentEval {
        segment: String,
        t: String,
    },
    Diagnostics {
        phi0: String,
        phi1: String,
        #[serde(default = "default_kmax")]
        kmax: usize,
    },
    Verify {
        #[serde(alias = "suite")]
        check: String,
        phi0: Option<String>,
        phi1: Option<String>,
        graded: Option<String>,
        kmax: Option<usize>,
        #[serde(default)]
        seed: u64,
    },
}

impl Task {
    pub fn op(&self) -> &'static str {
        match self {
            Task::Geodesic { .. } => "geodesic",
            Task::Distance { .. } => "distance",
            Task::GradedStats { .. } => "graded_stats",
            Task::Energy { .. } => "energy",
            Task::D1 { .. } => "d1",
            Task::MaximalSegment { .. } => "maximal_segment",
            Task::LegendreSegment { .. } => "legendre_segment",
            Task::SegmentEval { .. } => "segment_eval",
            Task::Diagnostics { .. } => "diagnostics",
            Task::Verify { .. } => "verify",
        }
    }

    /// Object names referenced by the task, with the kind each must have.
    pub fn references(&self) -> Vec<(&str, Kind)> {
        let mut out = Vec::new();
        match self {
            Task::Geodesic { n0, n1, .. } | Task::Distance { n0, n1, .. } => {
                out.push((n0.as_str(), Kind::Norm));
                out.push((n1.as_str(), Kind::Norm));
            }
            Task::GradedStats { g0, g1, .. } => {
                out.push((g0.as_str(), Kind::Graded));
                out.push((g1.as_str(), Kind::Graded));
            }
            Task::Energy { phi0, phi1, .. }
            | Task::D1 { phi0, phi1, .. }
            | Task::MaximalSegment { phi0, phi1, .. }
            | Task::LegendreSegment { phi0, phi1, .. }
            | Task::Diagnostics { phi0, phi1, .. } => {
                out.push((phi0.as_str(), Kind::Metric));
                out.push((phi1.as_str(), Kind::Metric));
            }
            Task::SegmentEval { segment, .. } => out.push((segment.as_str(), Kind::Segment)),
            Task::Verify { phi0, phi1, graded, .. } => {
                out.extend(phi0.as_deref().map(|s| (s, Kind::Metric)));
                out.extend(phi1.as_deref().map(|s| (s, Kind::Metric)));
                out.extend(graded.as_deref().map(|s| (s, Kind::Graded)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub arena: Option<Arena>,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectSpec>,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub output: Output,
}

#[derive(Clone, Debug)]
pub enum Object {
    Norm(AnyNorm),
    Graded(GradedNorm),
    Metric(ToricMetric),
    Segment(FSSegment),
}

impl Object {
    fn kind(&self) -> Kind {
        match self {
            Object::Norm(_) => Kind::Norm,
            Object::Graded(_) => Kind::Graded,
            Object::Metric(_) => Kind::Metric,
            Object::Segment(_) => Kind::Segment,
        }
    }
}

/// Reads a config; syntax and schema errors carry line and column.
pub fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}

pub fn parse(text: &str) -> Result<ExperimentConfig> {
    serde_json::from_str(text).map_err(|e| anyhow!("{e} (line {}, column {})", e.line(), e.column()))
}

/// A metric given either as `{"n","m","potential"}` or as FS weights `{"n","m","k","weights"}`.
pub fn metric_from_json(v: &Value, arena: Option<&Arena>) -> Result<ToricMetric> {
    let mut v = v.clone();
    if let (Some(a), Some(obj)) = (arena, v.as_object_mut()) {
        obj.entry("n").or_insert(a.n.into());
        obj.entry("m").or_insert(a.m.into());
    }
    if v.get("potential").is_some() {
        return Ok(ToricMetric::from_json(&v)?);
    }
    let get = |key: &str| v.get(key).and_then(Value::as_u64).ok_or_else(|| anyhow!("metric needs integer \"{key}\""));
    let ring = SectionRing::new(get("n")? as usize, get("m")? as usize)?;
    let weights = rational::qvec_from_json(
        v.get("weights").ok_or_else(|| anyhow!("metric needs \"potential\" or \"weights\""))?,
    )?;
    Ok(fs_from_weights(ring, get("k")? as usize, &weights)?)
}

fn build(spec: &ObjectSpec, arena: Option<&Arena>) -> Result<Object> {
    Ok(match spec.kind {
        Kind::Norm => {
            let n = AnyNorm::from_json(&spec.value)?;
            if arena.is_some_and(|a| a.backend == BackendName::Rational) && n.backend() == Backend::TAdic {
                bail!("norm uses the t-adic backend but the arena is rational");
            }
            Object::Norm(n)
        }
        Kind::Graded => Object::Graded(GradedNorm::from_json(&spec.value)?),
        Kind::Metric => Object::Metric(metric_from_json(&spec.value, arena)?),
        Kind::Segment => {
            let mut v = spec.value.clone();
            if let (Some(a), Some(obj)) = (arena, v.as_object_mut()) {
                obj.entry("n").or_insert(a.n.into());
                obj.entry("m").or_insert(a.m.into());
            }
            Object::Segment(FSSegment::from_json(&v)?)
        }
    })
}

/// Builds every object and checks that each task's references exist with the right kind.
pub fn resolve(cfg: &ExperimentConfig) -> Result<BTreeMap<String, Object>> {
    let mut objects = BTreeMap::new();
    for (name, spec) in &cfg.objects {
        let o = build(spec, cfg.arena.as_ref()).with_context(|| format!("object `{name}`"))?;
        objects.insert(name.clone(), o);
    }
    for (i, task) in cfg.tasks.iter().enumerate() {
        for (name, kind) in task.references() {
            match objects.get(name) {
                None => bail!("task {i} ({}): undefined object `{name}`", task.op()),
                Some(o) if o.kind() != kind => {
                    bail!("task {i} ({}): object `{name}` is a {:?}, expected a {:?}", task.op(), o.kind(), kind)
                }
                Some(_) => {}
            }
        }
    }
    Ok(objects)
}
