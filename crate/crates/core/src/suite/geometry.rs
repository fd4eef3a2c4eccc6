//! Kiselman duality and maximal-segment suites.

use num_traits::One;
use rand::Rng;
use serde_json::{json, Value};

use super::{expect, stream, Outcome, Tally};
use crate::graded::SectionRing;
use crate::instances::{self, Rng64};
use crate::oracle::marginal_min_at;
use crate::plconvex::{compare, Comparison};
use crate::rational::{self, Q};
use crate::report::{Check, Report};
use crate::segments::{
    diagnostics, kiselman_dual, kiselman_recover, quantized, quarter_points, FSSegment, LegendreSegment, MaximalSegment,
};
use crate::toric::{energy_limit, fs_from_weights, in_moment_polytope, supnorm_weights, ToricMetric};

fn qv(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| rational::int(x)).collect()
}

fn pair_json(a: &ToricMetric, b: &ToricMetric) -> Value {
    json!({ "phi0": a.to_json(), "phi1": b.to_json() })
}

fn eq(a: &ToricMetric, b: &ToricMetric) -> crate::Result<bool> {
    Ok(compare(a.potential(), b.potential())?.is_eq())
}

pub fn kiselman(seed: u64) -> Report {
    let mut r = Report::new("kiselman");
    let mut grad = Tally::new("kiselman.dual_gradients_in_moment_polytope");
    let mut point = Tally::new("kiselman.dual_matches_pointwise_minimum");
    let mut round = Tally::new("kiselman.legendre_round_trip_recovers_segment");
    let mut rng = stream(seed, 51);
    for _ in 0..50 {
        let ring = instances::small_ring(&mut rng);
        let k = rng.gen_range(1..=2);
        let seg = instances::fs_segment(&mut rng, ring, k);
        let mut taus = seg.tau_breakpoints();
        for _ in 0..3 {
            taus.push(instances::small_q(&mut rng, -4, 4, 3));
        }
        let f = seg.joint_potential();
        let vs: Vec<Vec<Q>> = (0..6).map(|_| instances::weights(&mut rng, ring.n, -3, 3, 2)).collect();
        let duals: Vec<crate::Result<ToricMetric>> = taus.iter().map(|tau| kiselman_dual(&seg, tau)).collect();
        grad.record((|| -> Outcome {
            for (tau, d) in taus.iter().zip(&duals) {
                let d = match d {
                    Ok(d) => d,
                    Err(e) => return Ok(Some(json!({ "segment": seg.to_json(), "tau": rational::render(tau), "error": e.to_string() }))),
                };
                if let Some(g) = d.potential().pruned().gradients().into_iter().find(|g| !in_moment_polytope(ring, g)) {
                    return Ok(Some(json!({ "segment": seg.to_json(), "tau": rational::render(tau), "gradient": rational::qvec_to_json(&g) })));
                }
            }
            Ok(None)
        })());
        point.record((|| -> Outcome {
            for (tau, d) in taus.iter().zip(&duals) {
                let Ok(d) = d else { continue };
                for v in &vs {
                    let (got, want) = (d.potential().eval(v)?, marginal_min_at(&f, tau, v));
                    if got != want {
                        return Ok(Some(json!({ "segment": seg.to_json(), "tau": rational::render(tau),
                            "v": rational::qvec_to_json(v), "dual": rational::render(&got), "oracle": rational::render(&want) })));
                    }
                }
            }
            Ok(None)
        })());
        round.record((|| -> Outcome {
            for t in quarter_points() {
                if !eq(&kiselman_recover(&seg, &t)?, &seg.eval(&t)?)? {
                    return Ok(Some(json!({ "segment": seg.to_json(), "t": rational::render(&t) })));
                }
            }
            Ok(None)
        })());
    }
    r.push(grad.finish());
    r.push(point.finish());
    r.push(round.finish());

    // F(t, v) = max(t, v): the origin monomial carries t, the other one v
    let worked = (|| -> crate::Result<Check> {
        let seg = FSSegment::new(SectionRing { n: 1, m: 1 }, 1, qv(&[0, 0]), qv(&[1, 0]))?;
        let d = kiselman_dual(&seg, &Q::one())?;
        let shown = d.potential().pruned().to_string();
        Ok(Check::exact("kiselman.worked_example_max_t_v_at_tau_1", shown == "max(0, v-1)")
            .with_detail(json!({ "F": seg.joint_potential().to_string(), "tau": "1", "dual": shown })))
    })()
    .unwrap_or_else(|e| {
        Check::exact("kiselman.worked_example_max_t_v_at_tau_1", false)
            .with_witness(Some(json!({ "error": e.to_string() })))
    });
    r.push(worked);
    r
}

/// Random FS endpoint on `ℙ¹` at level `1` or `2`.
fn p1_endpoint(rng: &mut Rng64, ring: SectionRing) -> ToricMetric {
    let j = rng.gen_range(1..=2);
    instances::fs_metric(rng, ring, j)
}

pub fn theorem_b(seed: u64) -> Report {
    let mut r = Report::new("theoremB");
    let ts = quarter_points();

    let mut dom = Tally::new("theoremB.maximum_principle_domination");
    let mut rng = stream(seed, 61);
    for _ in 0..30 {
        let ring = instances::p1_ring(&mut rng);
        let (a, b) = (p1_endpoint(&mut rng, ring), p1_endpoint(&mut rng, ring));
        let k = rng.gen_range(1..=2);
        dom.record((|| -> Outcome {
            let lower = |rng: &mut Rng64, w: Vec<Q>| -> Vec<Q> {
                w.into_iter().map(|x| x - instances::int(rng, 0, 2)).collect()
            };
            let l0 = lower(&mut rng, supnorm_weights(k, &a)?);
            let l1 = lower(&mut rng, supnorm_weights(k, &b)?);
            let competitor = FSSegment::new(ring, k, l0, l1)?;
            let leg = LegendreSegment::new(&a, &b)?;
            let max = MaximalSegment::new(&a, &b, 8)?;
            for t in &ts {
                let c = competitor.eval(t)?;
                let (cl, cm) = (
                    compare(c.potential(), leg.eval(t)?.potential())?,
                    compare(c.potential(), max.eval(t)?.potential())?,
                );
                if !(cl.is_le() && cm.is_le()) {
                    return Ok(Some(
                        json!({ "pair": pair_json(&a, &b), "competitor": competitor.to_json(), "t": rational::render(t),
                        "vs_legendre": cl.to_json(), "vs_maximal": cm.to_json() }),
                    ));
                }
            }
            Ok(None)
        })());
    }
    r.push(dom.finish());

    let mut agree = Tally::new("theoremB.legendre_equals_quantized_at_stabilization");
    let mut affine = Tally::new("theoremB.energy_affine_along_maximal_segment");
    let mut table = Vec::new();
    let mut rng = stream(seed, 62);
    for i in 0..20 {
        let ring = instances::p1_ring(&mut rng);
        let (a, b) = (p1_endpoint(&mut rng, ring), p1_endpoint(&mut rng, ring));
        let built = LegendreSegment::new(&a, &b).and_then(|l| Ok((l, MaximalSegment::new(&a, &b, 8)?)));
        let (leg, max) = match built {
            Ok(x) => x,
            Err(e) => {
                agree.record(Err(e));
                continue;
            }
        };
        agree.record((|| -> Outcome {
            let mut row = Vec::new();
            let mut ok = true;
            for t in &ts {
                let c = compare(max.eval(t)?.potential(), leg.eval(t)?.potential())?;
                ok &= c.is_eq();
                row.push(c.symbol());
            }
            table.push(json!({ "pair": i, "m": ring.m, "quantized_vs_legendre": row }));
            expect(ok, || json!({ "pair": pair_json(&a, &b), "symbols": row }))
        })());
        affine.record((|| -> Outcome {
            let es: Vec<Q> = ts.iter().map(|t| energy_limit(&max.eval(t)?, &a)).collect::<crate::Result<_>>()?;
            let (e0, e1) = (es[0].clone(), es[4].clone());
            let ok = ts.iter().zip(&es).all(|(t, e)| *e == (Q::one() - t) * &e0 + t * &e1);
            expect(
                ok,
                || json!({ "pair": pair_json(&a, &b), "energy": es.iter().map(rational::render).collect::<Vec<_>>() }),
            )
        })());
    }
    agree.note("t", json!(ts.iter().map(rational::render).collect::<Vec<_>>()));
    agree.note("table", json!(table));
    r.push(agree.finish());
    r.push(affine.finish());

    let mut level = Tally::new("theoremB.d1_geodesic_per_level");
    let mut limit = Tally::new("theoremB.d1_geodesic_limit_and_endpoints");
    let mut rng = stream(seed, 63);
    for _ in 0..10 {
        let ring = instances::p1_ring(&mut rng);
        let (a, b) = (p1_endpoint(&mut rng, ring), p1_endpoint(&mut rng, ring));
        match diagnostics(&a, &b, 4) {
            Ok(rows) => {
                let failed =
                    |pred: &dyn Fn(&str) -> bool| rows.iter().find(|c| pred(&c.name) && !c.passed).map(|c| c.to_json());
                level.record(Ok(failed(&|n| n.starts_with("d1_geodesic_level_"))
                    .map(|w| json!({ "pair": pair_json(&a, &b), "row": w }))));
                limit.record(Ok(failed(&|n| {
                    n == "d1_geodesic_limit" || n == "endpoint_continuity" || n == "energy_affine_limit"
                })
                .map(|w| json!({ "pair": pair_json(&a, &b), "row": w }))));
            }
            Err(e) => level.record(Err(e)),
        }
    }
    r.push(level.finish());
    r.push(limit.finish());

    let mut pn = Tally::new("theoremB.projective_degree_one_stabilizes_at_level_1");
    let mut rng = stream(seed, 64);
    for i in 0..20 {
        let ring = if i % 2 == 0 { SectionRing { n: 1, m: 1 } } else { SectionRing { n: 2, m: 1 } };
        let (a, b) = (instances::fs_metric(&mut rng, ring, 1), instances::fs_metric(&mut rng, ring, 1));
        pn.record((|| -> Outcome {
            let base = quantized(&a, &b, 1)?;
            for k in 2..=4 {
                let seg = quantized(&a, &b, k)?;
                for t in &ts {
                    if !eq(&seg.eval(t)?, &base.eval(t)?)? {
                        return Ok(Some(json!({ "pair": pair_json(&a, &b), "k": k, "t": rational::render(t) })));
                    }
                }
            }
            for kmax in [2, 4, 8] {
                let max = MaximalSegment::new(&a, &b, kmax)?;
                for t in &ts {
                    if !eq(&max.eval(t)?, &base.eval(t)?)? {
                        return Ok(Some(json!({ "pair": pair_json(&a, &b), "kmax": kmax, "t": rational::render(t) })));
                    }
                }
            }
            Ok(None)
        })());
    }
    r.push(pn.finish());

    let mut mono = Tally::new("theoremB.maximal_segment_monotone_in_level");
    let mut rng = stream(seed, 65);
    let mut example = None;
    for _ in 0..20 {
        let ring = SectionRing { n: 1, m: 2 };
        let (a, b) = (instances::fs_metric(&mut rng, ring, 2), instances::fs_metric(&mut rng, ring, 2));
        mono.record((|| -> Outcome {
            let segs: Vec<MaximalSegment> =
                [1, 2, 4, 8].iter().map(|&k| MaximalSegment::new(&a, &b, k)).collect::<crate::Result<_>>()?;
            for t in &ts {
                for w in segs.windows(2) {
                    let c = compare(w[0].eval(t)?.potential(), w[1].eval(t)?.potential())?;
                    if !c.is_le() {
                        return Ok(Some(
                            json!({ "pair": pair_json(&a, &b), "t": rational::render(t), "comparison": c.to_json() }),
                        ));
                    }
                    if example.is_none() && w[0].levels.len() == 1 {
                        if let Comparison::Below { g_greater_at } = &c {
                            example = Some(json!({ "pair": pair_json(&a, &b), "t": rational::render(t),
                                "level_2_exceeds_level_1_at": rational::qvec_to_json(g_greater_at) }));
                        }
                    }
                }
            }
            Ok(None)
        })());
    }
    r.push(mono.finish());
    r.push(
        Check::exact("theoremB.non_stabilizing_example_found", example.is_some())
            .with_detail(json!({ "ring": { "n": 1, "m": 2 }, "endpoint_level": 2 }))
            .with_witness(example),
    );

    // comparable pair: reference and FS_1(0, −2) on ℙ¹
    let comparable = (|| -> crate::Result<Check> {
        let ring = SectionRing { n: 1, m: 1 };
        let (a, b) = (ToricMetric::reference(ring), fs_from_weights(ring, 1, &qv(&[0, -2]))?);
        let rows = diagnostics(&a, &b, 4)?;
        let energies = rows
            .iter()
            .find(|c| c.name == "energy_vs_start")
            .map(|c| c.detail["energy"].clone())
            .unwrap_or(Value::Null);
        let expected: Vec<String> = ts.iter().map(|t| rational::render(&-t.clone())).collect();
        let ok = rows.iter().all(|c| c.passed) && energies == json!(expected);
        Ok(Check::exact("theoremB.comparable_pair_energy_is_minus_t", ok)
            .with_detail(json!({ "t": ts.iter().map(rational::render).collect::<Vec<_>>(), "energy": energies,
                "rows": rows.iter().map(Check::to_json).collect::<Vec<_>>() })))
    })()
    .unwrap_or_else(|e| {
        Check::exact("theoremB.comparable_pair_energy_is_minus_t", false)
            .with_witness(Some(json!({ "error": e.to_string() })))
    });
    r.push(comparable);
    r
}
