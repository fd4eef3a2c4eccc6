//! Graded-norm suite and the planted negative controls.

use num_traits::{One, Signed};
use serde_json::json;

use super::{expect, stream, Outcome, Tally};
use crate::graded::{
    check_submultiplicative, degree_power, generate_from_weights, graded_geodesic, normalized_distance, GradedNorm,
    SectionRing,
};
use crate::instances;
use crate::norms::{Exponent, Spectrum};
use crate::oracle::brute_force_power;
use crate::rational::{self, Q};
use crate::report::Report;
use crate::segments::{convexity_in_t_witness, nonpsh_control, quarter_points, FSSegment};
use crate::toric::fs_from_weights;

fn sample_ts() -> Vec<Q> {
    [(1, 4), (1, 3), (1, 2), (2, 3)].iter().map(|&(a, b)| rational::frac(a, b)).collect()
}

fn generated_pair(rng: &mut instances::Rng64, ring: SectionRing, kmax: usize) -> (GradedNorm, GradedNorm) {
    let h = ring.h0(1);
    let w0 = instances::weights(rng, h, -3, 3, 2);
    let w1 = instances::weights(rng, h, -3, 3, 2);
    (
        generate_from_weights(ring, &w0, kmax).expect("valid ring"),
        generate_from_weights(ring, &w1, kmax).expect("valid ring"),
    )
}

fn submult_row(name: &str, seed: u64, salt: u64, rings: &[SectionRing], kmax: usize, pairs: usize) -> Tally {
    let mut tally = Tally::new(name);
    tally.note("max_degree", json!(kmax));
    let mut rng = stream(seed, salt);
    for i in 0..pairs {
        let ring = rings[i % rings.len()];
        let (g0, g1) = generated_pair(&mut rng, ring, kmax);
        tally.record((|| -> Outcome {
            for t in sample_ts() {
                let g = graded_geodesic(&g0, &g1, &t)?;
                if let Err(v) = check_submultiplicative(&g, kmax)? {
                    return Ok(Some(json!({
                        "ring": { "n": ring.n, "m": ring.m },
                        "t": rational::render(&t),
                        "g0": g0.to_json(), "g1": g1.to_json(),
                        "violation": v.to_json(),
                    })));
                }
            }
            Ok(None)
        })());
    }
    tally
}

pub fn graded(seed: u64) -> Report {
    let mut r = Report::new("graded");
    let p1 = [SectionRing { n: 1, m: 1 }, SectionRing { n: 1, m: 2 }];
    let p2 = [SectionRing { n: 2, m: 1 }];
    r.push(submult_row("graded.geodesic_submultiplicative_p1", seed, 31, &p1, 10, 20).finish());
    r.push(submult_row("graded.geodesic_submultiplicative_p2", seed, 32, &p2, 6, 10).finish());

    let mut lin = Tally::new("graded.per_degree_dp_linear_in_t");
    let mut rng = stream(seed, 33);
    let ps = [Exponent::Finite(1), Exponent::Finite(2), Exponent::Infinity];
    for _ in 0..30 {
        let ring = instances::small_ring(&mut rng);
        let kmax = 4;
        let (g0, g1) = generated_pair(&mut rng, ring, kmax);
        lin.record((|| -> Outcome {
            let mut ts = sample_ts();
            ts.insert(0, Q::from_integer(0.into()));
            ts.push(Q::one());
            let path: Vec<GradedNorm> =
                ts.iter().map(|t| graded_geodesic(&g0, &g1, t)).collect::<crate::Result<_>>()?;
            for k in 1..=kmax {
                for &p in &ps {
                    let whole = normalized_distance(&Spectrum::from_weights(g0.weights(k)?, g1.weights(k)?), k, p);
                    for (i, s) in ts.iter().enumerate() {
                        for (j, t) in ts.iter().enumerate().skip(i + 1) {
                            let spec = Spectrum::from_weights(path[i].weights(k)?, path[j].weights(k)?);
                            let h = (t - s).abs();
                            let scale = match p {
                                Exponent::Finite(e) => rational::abs_pow(&h, e),
                                Exponent::Infinity => h,
                            };
                            if normalized_distance(&spec, k, p) != &scale * &whole {
                                return Ok(Some(json!({
                                    "k": k, "p": p.to_string(), "s": rational::render(s), "t": rational::render(t),
                                    "g0": g0.to_json(), "g1": g1.to_json(),
                                })));
                            }
                        }
                    }
                }
            }
            Ok(None)
        })());
    }
    r.push(lin.finish());

    let mut bf = Tally::new("graded.maxplus_power_matches_brute_force");
    let mut rng = stream(seed, 34);
    for _ in 0..30 {
        let ring = instances::small_ring(&mut rng);
        let w1 = instances::weights(&mut rng, ring.h0(1), -3, 3, 2);
        bf.record((|| -> Outcome {
            let g = generate_from_weights(ring, &w1, 4)?;
            for k in 1..=4 {
                let brute = brute_force_power(ring, &w1, k);
                if g.weights(k)? != brute.as_slice() || degree_power(ring, &w1, k)? != brute {
                    return Ok(Some(json!({ "k": k, "w1": rational::qvec_to_json(&w1) })));
                }
            }
            Ok(None)
        })());
    }
    r.push(bf.finish());
    r
}

pub fn negative(_seed: u64) -> Report {
    let mut r = Report::new("negative");
    let ring = SectionRing { n: 1, m: 1 };

    let mut planted = Tally::new("negative.planted_submultiplicativity_violation_detected");
    let mut found = None;
    let outcome = (|| -> Outcome {
        let zero = vec![Q::from_integer(0.into()); ring.h0(1)];
        let mut g = generate_from_weights(ring, &zero, 3)?;
        let mut w2 = g.weights(2)?.to_vec();
        w2[0] = rational::int(-1);
        g.set_weights(2, w2)?;
        Ok(match check_submultiplicative(&g, 3)? {
            Ok(()) => Some(json!({ "undetected": g.to_json() })),
            Err(v) if (v.k, v.l, v.a.as_str(), v.b.as_str()) == (1, 1, "x0", "x0") => {
                found = Some(v.to_json());
                None
            }
            Err(v) => Some(json!({ "unexpected": v.to_json() })),
        })
    })();
    planted.record(outcome);
    if let Some(v) = found {
        planted.note("counterexample", v);
    }
    r.push(planted.finish());

    let mut nonpsh = Tally::new("negative.planted_nonpsh_segment_detected");
    let mut genuine = Tally::new("negative.genuine_segment_not_flagged");
    let ts = quarter_points();
    for (k, w) in [(1usize, vec![0i64, -2]), (2, vec![0, -1, 1])] {
        let phi =
            fs_from_weights(ring, k, &w.iter().map(|&x| rational::int(x)).collect::<Vec<_>>()).expect("full support");
        match convexity_in_t_witness(|t| nonpsh_control(&phi, t), &ts) {
            Ok(Some(wit)) => {
                nonpsh.record(Ok(None));
                nonpsh.note(&format!("counterexample_level_{k}"), json!({ "phi": phi.to_json(), "witness": wit }));
            }
            Ok(None) => nonpsh.record(Ok(Some(json!({ "undetected": phi.to_json() })))),
            Err(e) => nonpsh.record(Err(e)),
        }
        genuine.record((|| -> Outcome {
            let lam1: Vec<Q> = w.iter().map(|&x| rational::int(x)).collect();
            let seg = FSSegment::new(ring, k, vec![Q::from_integer(0.into()); lam1.len()], lam1)?;
            let flagged = convexity_in_t_witness(|t| seg.eval(t).map(|m| m.potential().clone()), &ts)?;
            expect(flagged.is_none(), || json!({ "false_positive": flagged }))
        })());
    }
    r.push(nonpsh.finish());
    r.push(genuine.finish());
    r
}
