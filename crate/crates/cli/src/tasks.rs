//! Task execution. Every task yields a JSON value and a CSV rendering; `verify` tasks also
//! yield a verdict.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use serde_json::{json, Value};

use nageo::field::Field;
use nageo::geodesics::geodesic;
use nageo::graded::{asymptotic_stats, check_submultiplicative, generate_from_weights, GradedNorm};
use nageo::norms::{distance, spectrum, volume, AnyNorm, DiagNorm, Exponent};
use nageo::rational::{self, Q};
use nageo::report::{Check, Report};
use nageo::segments::{diagnostics, legendre_segment, MaximalSegment};
use nageo::suite;
use nageo::toric::{d1_metric, energy, ToricMetric};

use crate::config::{Object, Task};

pub struct Artifact {
    pub json: Value,
    pub csv: String,
    /// `Some(false)` when a verification failed.
    pub verdict: Option<bool>,
}

impl Artifact {
    fn plain(json: Value, csv: String) -> Self {
        Artifact { json, csv, verdict: None }
    }

    pub fn report(r: &Report) -> Self {
        Artifact { json: r.to_json(), csv: r.csv(), verdict: Some(r.passed()) }
    }
}

pub struct Objects<'a>(pub &'a BTreeMap<String, Object>);

impl Objects<'_> {
    fn get(&self, name: &str) -> Result<&Object> {
        self.0.get(name).ok_or_else(|| anyhow!("undefined object `{name}`"))
    }

    fn norm(&self, name: &str) -> Result<&AnyNorm> {
        match self.get(name)? {
            Object::Norm(n) => Ok(n),
            _ => bail!("object `{name}` is not a norm"),
        }
    }

    fn graded(&self, name: &str) -> Result<&GradedNorm> {
        match self.get(name)? {
            Object::Graded(g) => Ok(g),
            _ => bail!("object `{name}` is not a graded norm"),
        }
    }

    fn metric(&self, name: &str) -> Result<&ToricMetric> {
        match self.get(name)? {
            Object::Metric(m) => Ok(m),
            _ => bail!("object `{name}` is not a toric metric"),
        }
    }
}

fn q(s: &str) -> Result<Q> {
    Ok(rational::parse(s)?)
}

fn norm_pair<'a>(o: &'a Objects, n0: &str, n1: &str) -> Result<NormPair<'a>> {
    Ok(match (o.norm(n0)?, o.norm(n1)?) {
        (AnyNorm::Q(a), AnyNorm::Q(b)) => NormPair::Q(a, b),
        (AnyNorm::T(a), AnyNorm::T(b)) => NormPair::T(a, b),
        _ => bail!("norms `{n0}` and `{n1}` use different field backends"),
    })
}

enum NormPair<'a> {
    Q(&'a DiagNorm<Q>, &'a DiagNorm<Q>),
    T(&'a DiagNorm<nageo::RatFunc>, &'a DiagNorm<nageo::RatFunc>),
}

fn geodesic_dump<F: Field>(a: &DiagNorm<F>, b: &DiagNorm<F>, ts: &[Q]) -> Result<Artifact> {
    let g = geodesic(a, b)?;
    let mut csv = String::from("t,index,weight\n");
    for t in ts {
        for (i, w) in g.weights_at(t)?.iter().enumerate() {
            csv.push_str(&format!("{},{i},{}\n", rational::render(t), rational::render(w)));
        }
    }
    Ok(Artifact::plain(g.dump(ts)?, csv))
}

fn distance_row<F: Field>(a: &DiagNorm<F>, b: &DiagNorm<F>, p: Exponent) -> Result<Artifact> {
    let s = spectrum(a, b)?;
    let (d, v) = (distance(a, b, p)?, volume(a, b)?);
    let spec: Vec<String> = s.values().iter().map(rational::render).collect();
    let json = json!({ "p": p.to_string(), "spectrum": spec, "distance": rational::render(&d), "volume": rational::render(&v) });
    let csv = format!(
        "p,spectrum,distance,volume\n{},{},{},{}\n",
        p,
        spec.join(" "),
        rational::render(&d),
        rational::render(&v)
    );
    Ok(Artifact::plain(json, csv))
}

/// Materializes degrees up to `kmax`, generating from degree one when only it is given.
fn up_to(g: &GradedNorm, kmax: usize) -> Result<GradedNorm> {
    if g.max_degree() >= kmax {
        return Ok(g.clone());
    }
    if g.degrees().eq([1]) {
        return Ok(generate_from_weights(g.ring(), g.weights(1)?, kmax)?);
    }
    bail!("graded norm materializes degrees up to {} but {kmax} were requested", g.max_degree())
}

fn default_cap(g: &GradedNorm) -> usize {
    if g.ring().n == 1 {
        8
    } else {
        5
    }
}

fn metric_json(m: &ToricMetric) -> (Value, String) {
    (json!({ "metric": m.to_json(), "potential": m.to_string() }), format!("potential\n\"{m}\"\n"))
}

pub fn run_task(task: &Task, o: &Objects) -> Result<Artifact> {
    match task {
        Task::Geodesic { n0, n1, ts } => {
            let ts: Vec<Q> = ts.iter().map(|t| q(t)).collect::<Result<_>>()?;
            match norm_pair(o, n0, n1)? {
                NormPair::Q(a, b) => geodesic_dump(a, b, &ts),
                NormPair::T(a, b) => geodesic_dump(a, b, &ts),
            }
        }
        Task::Distance { n0, n1, p } => {
            let p = Exponent::parse(p)?;
            match norm_pair(o, n0, n1)? {
                NormPair::Q(a, b) => distance_row(a, b, p),
                NormPair::T(a, b) => distance_row(a, b, p),
            }
        }
        Task::GradedStats { g0, g1, p, kmax } => {
            let (a, b) = (o.graded(g0)?, o.graded(g1)?);
            let k = kmax.unwrap_or_else(|| default_cap(a));
            let s = asymptotic_stats(&up_to(a, k)?, &up_to(b, k)?, Exponent::parse(p)?, k)?;
            Ok(Artifact::plain(s.to_json(), s.csv()))
        }
        Task::Energy { phi0, phi1, kmax } => {
            let s = energy(o.metric(phi0)?, o.metric(phi1)?, *kmax)?;
            Ok(Artifact::plain(s.to_json(), s.csv()))
        }
        Task::D1 { phi0, phi1, kmax } => {
            let r = d1_metric(o.metric(phi0)?, o.metric(phi1)?, *kmax)?;
            let mut json = r.sequence.to_json();
            json["via_envelope"] = json!(rational::render(&r.via_envelope));
            json["formulas_agree"] = json!(r.agree());
            Ok(Artifact::plain(json, r.sequence.csv()))
        }
        Task::MaximalSegment { phi0, phi1, t, kmax } => {
            let m = MaximalSegment::new(o.metric(phi0)?, o.metric(phi1)?, *kmax)?.eval(&q(t)?)?;
            let (mut json, csv) = metric_json(&m);
            json["t"] = json!(t);
            json["kmax"] = json!(kmax);
            Ok(Artifact::plain(json, csv))
        }
        Task::LegendreSegment { phi0, phi1, t } => {
            let m = legendre_segment(o.metric(phi0)?, o.metric(phi1)?, &q(t)?)?;
            let (mut json, csv) = metric_json(&m);
            json["t"] = json!(t);
            Ok(Artifact::plain(json, csv))
        }
        Task::SegmentEval { segment, t } => {
            let Object::Segment(s) = o.get(segment)? else { bail!("object `{segment}` is not a segment") };
            let (mut json, csv) = metric_json(&s.eval(&q(t)?)?);
            json["t"] = json!(t);
            Ok(Artifact::plain(json, csv))
        }
        Task::Diagnostics { phi0, phi1, kmax } => {
            let mut r = Report::new("diagnostics");
            for c in diagnostics(o.metric(phi0)?, o.metric(phi1)?, *kmax)? {
                r.push(c);
            }
            Ok(Artifact::plain(r.to_json(), r.csv()))
        }
        Task::Verify { check, phi0, phi1, graded, kmax, seed } => {
            verify(o, check, phi0.as_deref(), phi1.as_deref(), graded.as_deref(), *kmax, *seed)
        }
    }
}

/// `verify` on a named suite; `theoremB` with endpoints runs the segment diagnostics on that
/// pair, and `submultiplicative` checks a graded norm.
pub fn verify(
    o: &Objects,
    check: &str,
    phi0: Option<&str>,
    phi1: Option<&str>,
    graded: Option<&str>,
    kmax: Option<usize>,
    seed: u64,
) -> Result<Artifact> {
    let r = match (check, phi0, phi1, graded) {
        ("submultiplicative", _, _, Some(g)) => {
            let gn = o.graded(g)?;
            let k = kmax.unwrap_or(gn.max_degree());
            let gn = up_to(gn, k)?;
            let mut r = Report::new("submultiplicative");
            r.push(match check_submultiplicative(&gn, k)? {
                Ok(()) => Check::exact("submultiplicative", true).with_detail(json!({ "max_degree": k })),
                Err(v) => {
                    let weights: BTreeMap<String, Value> = gn
                        .degrees()
                        .map(|d| Ok((d.to_string(), rational::qvec_to_json(gn.weights(d)?))))
                        .collect::<Result<_>>()?;
                    Check::exact("submultiplicative", false)
                        .with_detail(json!({ "max_degree": k }))
                        .with_witness(Some(json!({ "counterexample": v.to_json(), "ring": { "n": gn.ring().n, "m": gn.ring().m }, "weights": weights })))
                }
            });
            r
        }
        ("submultiplicative", ..) => bail!("verify submultiplicative needs a `graded` object"),
        ("theoremB", Some(a), Some(b), _) => {
            let mut r = Report::new("theoremB");
            for c in diagnostics(o.metric(a)?, o.metric(b)?, kmax.unwrap_or(4))? {
                r.push(c);
            }
            r
        }
        (name, None, None, None) => suite::run(name, seed)?,
        (name, ..) => bail!("verify `{name}` takes no objects (only theoremB and submultiplicative do)"),
    };
    Ok(Artifact::report(&r))
}
