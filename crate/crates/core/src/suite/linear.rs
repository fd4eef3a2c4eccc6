//! Norm-space and norm-geodesic suites.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::json;

use super::{expect, stream, Outcome, Tally};
use crate::field::{Poly, RatFunc, Valuation};
use crate::geodesics::geodesic;
use crate::instances::{self, Rng64};
use crate::linalg::Matrix;
use crate::norms::{codiagonalize, det, distance, join, spectrum, sym, volume, DiagNorm, Exponent};
use crate::oracle::{codiagonal_multiplicities, minmax_spectrum};
use crate::rational::{self, Q};
use crate::report::Report;
use crate::Result;

fn qj(v: &[Q]) -> serde_json::Value {
    rational::qvec_to_json(v)
}

fn pair_json(a: &DiagNorm<Q>, b: &DiagNorm<Q>) -> serde_json::Value {
    json!({ "n0": a.to_json(), "n1": b.to_json() })
}

fn finite(v: Valuation) -> Q {
    v.finite().cloned().expect("nonzero vector has finite value")
}

/// Four norms diagonal in one basis `C`, each presented in its own rebased basis.
fn rebased_family(rng: &mut Rng64, d: usize, count: usize) -> Vec<DiagNorm<Q>> {
    instances::shared_basis(rng, d, count).iter().map(|n| instances::rebase(rng, n)).collect()
}

const T7: [(i64, i64); 7] = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)];

fn ts() -> Vec<Q> {
    T7.iter().map(|&(a, b)| rational::frac(a, b)).collect()
}

pub fn norms(seed: u64) -> Report {
    let mut r = Report::new("norms");
    let d1 = Exponent::Finite(1);

    let mut spec = Tally::new("norms.spectrum_matches_minmax_oracle");
    let mut mult = Tally::new("norms.codiagonal_multiplicities_match_filtrations");
    let mut repro = Tally::new("norms.codiagonal_basis_reproduces_inputs");
    let mut indep = Tally::new("norms.spectrum_basis_independent");
    let mut rng = stream(seed, 11);
    for _ in 0..200 {
        let d = rng.gen_range(1..=4);
        let (n0, n1) = instances::codiagonal_pair(&mut rng, d);
        spec.record((|| -> Outcome {
            let s = spectrum(&n0, &n1)?;
            let o = minmax_spectrum(&n0, &n1);
            expect(
                s.values() == o.as_slice(),
                || json!({ "pair": pair_json(&n0, &n1), "codiagonal": qj(s.values()), "oracle": qj(&o) }),
            )
        })());
        mult.record((|| -> Outcome {
            let c = codiagonalize(&n0, &n1)?;
            let mut counts: BTreeMap<(Q, Q), usize> = BTreeMap::new();
            for (a, b) in c.weights0.iter().zip(&c.weights1) {
                *counts.entry((a.clone(), b.clone())).or_default() += 1;
            }
            let o = codiagonal_multiplicities(&n0, &n1);
            expect(counts == o, || json!({ "pair": pair_json(&n0, &n1) }))
        })());
        repro.record((|| -> Outcome {
            let c = codiagonalize(&n0, &n1)?;
            let ok = c.first().norm_eq(&n0)? && c.second().norm_eq(&n1)?;
            expect(ok, || json!({ "pair": pair_json(&n0, &n1) }))
        })());
        indep.record((|| -> Outcome {
            let (m0, m1) = (instances::rebase(&mut rng, &n0), instances::rebase(&mut rng, &n1));
            expect(spectrum(&n0, &n1)? == spectrum(&m0, &m1)?, || json!({ "pair": pair_json(&n0, &n1) }))
        })());
    }
    r.push(spec.finish());
    r.push(mult.finish());
    r.push(repro.finish());
    r.push(indep.finish());

    let mut tri = Tally::new("norms.d1_triangle_inequality");
    let mut coc = Tally::new("norms.volume_cocycle");
    let mut anti = Tally::new("norms.volume_antisymmetry");
    let mut rng = stream(seed, 12);
    for _ in 0..200 {
        let d = rng.gen_range(1..=4);
        let f = rebased_family(&mut rng, d, 3);
        let (a, b, c) = (&f[0], &f[1], &f[2]);
        tri.record((|| -> Outcome {
            let (ab, bc, ac) = (distance(a, b, d1)?, distance(b, c, d1)?, distance(a, c, d1)?);
            expect(
                ac <= &ab + &bc,
                || json!({ "ab": rational::render(&ab), "bc": rational::render(&bc), "ac": rational::render(&ac) }),
            )
        })());
        coc.record((|| -> Outcome {
            let (ab, ac, cb) = (volume(a, b)?, volume(a, c)?, volume(c, b)?);
            expect(
                ab == &ac + &cb,
                || json!({ "ab": rational::render(&ab), "ac": rational::render(&ac), "cb": rational::render(&cb) }),
            )
        })());
        anti.record((|| -> Outcome {
            let (ab, ba) = (volume(a, b)?, volume(b, a)?);
            expect(ab == -ba.clone(), || json!({ "ab": rational::render(&ab), "ba": rational::render(&ba) }))
        })());
    }
    r.push(tri.finish());
    r.push(coc.finish());
    r.push(anti.finish());

    let mut ji = Tally::new("norms.d1_equals_volumes_to_join");
    let mut je = Tally::new("norms.join_evaluates_to_max");
    let mut zero = Tally::new("norms.distance_zero_iff_equal");
    let mut detf = Tally::new("norms.det_product_formula");
    let mut rng = stream(seed, 13);
    for _ in 0..200 {
        let d = rng.gen_range(1..=4);
        let (n0, n1) = instances::codiagonal_pair(&mut rng, d);
        ji.record((|| -> Outcome {
            let j = join(&n0, &n1)?;
            let lhs = rational::int(d as i64) * distance(&n0, &n1, d1)?;
            let rhs = volume(&n0, &j)? + volume(&n1, &j)?;
            expect(lhs == rhs, || json!({ "pair": pair_json(&n0, &n1), "d_times_d1": rational::render(&lhs), "volumes": rational::render(&rhs) }))
        })());
        je.record((|| -> Outcome {
            let j = join(&n0, &n1)?;
            for _ in 0..20 {
                let v = instances::vector(&mut rng, d);
                let (a, b, c) = (n0.evaluate(&v)?, n1.evaluate(&v)?, j.evaluate(&v)?);
                if c != a.clone().min(b.clone()) {
                    return Ok(Some(json!({ "pair": pair_json(&n0, &n1), "v": qj(&v) })));
                }
            }
            Ok(None)
        })());
        zero.record((|| -> Outcome {
            let z = distance(&n0, &n1, d1)?.is_zero();
            let e = n0.norm_eq(&n1)?;
            let z2 = distance(&n0, &n0, d1)?.is_zero();
            expect(z == e && z2, || json!({ "pair": pair_json(&n0, &n1) }))
        })());
        detf.record((|| -> Outcome {
            let dn = det(&n0)?;
            let w: Q = n0.weights().iter().sum();
            let other = det(&instances::rebase(&mut rng, &n0))?;
            let wedge = vec![n0.basis().det()?];
            let ok = finite(dn.evaluate(&wedge)?) == w && other.norm_eq(&dn)?;
            expect(ok, || json!({ "norm": n0.to_json() }))
        })());
    }
    r.push(ji.finish());
    r.push(je.finish());
    r.push(zero.finish());
    r.push(detf.finish());

    let mut ta = Tally::new("norms.tadic_codiagonal_reproduces_inputs");
    let mut rng = stream(seed, 14);
    for _ in 0..50 {
        let d = rng.gen_range(1..=3);
        ta.record((|| -> Outcome {
            let b0 = tadic_invertible(&mut rng, d);
            let b1 = tadic_invertible(&mut rng, d);
            let w0: Vec<Q> = (0..d).map(|_| instances::int(&mut rng, -2, 2)).collect();
            let w1: Vec<Q> = (0..d).map(|_| instances::int(&mut rng, -2, 2)).collect();
            let n0 = DiagNorm::new(b0, w0)?;
            let n1 = DiagNorm::new(b1, w1)?;
            let c = codiagonalize(&n0, &n1)?;
            let ok = c.first().norm_eq(&n0)? && c.second().norm_eq(&n1)?;
            let s = spectrum(&n0, &n1)?;
            let back = spectrum(&n1, &n0)?;
            let neg: Vec<Q> = back.values().iter().rev().map(|x| -x).collect();
            expect(ok && s.values() == neg.as_slice(), || json!({ "n0": n0.to_json(), "n1": n1.to_json() }))
        })());
    }
    r.push(ta.finish());
    r
}

fn tadic_invertible(rng: &mut Rng64, d: usize) -> Matrix<RatFunc> {
    let choices: [&[i64]; 7] = [&[0], &[1], &[-1], &[0, 1], &[1, 1], &[0, 0, 1], &[2, -1]];
    loop {
        let rows: Vec<Vec<RatFunc>> = (0..d)
            .map(|_| {
                (0..d).map(|_| RatFunc::from_poly(Poly::from_i64(choices[rng.gen_range(0..choices.len())]))).collect()
            })
            .collect();
        let m = Matrix::from_rows(&rows).expect("square");
        if m.rank() == d {
            return m;
        }
    }
}

pub fn geodesics(seed: u64) -> Report {
    let mut r = Report::new("geodesics");
    let ts = ts();
    let d1 = Exponent::Finite(1);

    let mut lc = Tally::new("geodesics.log_convexity");
    let mut ends = Tally::new("geodesics.endpoints_reproduced");
    let mut geo = Tally::new("geodesics.dp_geodesicity");
    let mut detg = Tally::new("geodesics.determinant_of_geodesic");
    let mut rng = stream(seed, 21);
    for _ in 0..200 {
        let d = rng.gen_range(1..=4);
        let (n0, n1) = instances::codiagonal_pair(&mut rng, d);
        let Ok(g) = geodesic(&n0, &n1) else {
            lc.record(Err(crate::Error::Inconsistent("codiagonalization failed".into())));
            continue;
        };
        lc.record((|| -> Outcome {
            for _ in 0..20 {
                let v = instances::vector(&mut rng, d);
                let (a, b) = (finite(n0.evaluate(&v)?), finite(n1.evaluate(&v)?));
                for t in &ts {
                    let e = finite(g.eval_at(t)?.evaluate(&v)?);
                    let bound = (Q::one() - t) * &a + t * &b;
                    if e < bound {
                        return Ok(Some(json!({ "pair": pair_json(&n0, &n1), "v": qj(&v), "t": rational::render(t) })));
                    }
                }
            }
            Ok(None)
        })());
        ends.record((|| -> Outcome {
            let ok = g.eval_at(&Q::zero())?.norm_eq(&n0)? && g.eval_at(&Q::one())?.norm_eq(&n1)?;
            expect(ok, || pair_json(&n0, &n1))
        })());
        if ends.instances > 100 {
            continue;
        }
        geo.record((|| -> Outcome {
            let base1 = distance(&n0, &n1, d1)?;
            let base2 = distance(&n0, &n1, Exponent::Finite(2))?;
            let baseinf = distance(&n0, &n1, Exponent::Infinity)?;
            for t in &ts {
                for s in &ts {
                    let (gt, gs) = (g.eval_at(t)?, g.eval_at(s)?);
                    let h = (t - s).abs_value();
                    let ok = distance(&gt, &gs, d1)? == &h * &base1
                        && distance(&gt, &gs, Exponent::Finite(2))? == &h * &h * &base2
                        && distance(&gt, &gs, Exponent::Infinity)? == &h * &baseinf;
                    if !ok {
                        return Ok(Some(
                            json!({ "pair": pair_json(&n0, &n1), "t": rational::render(t), "s": rational::render(s) }),
                        ));
                    }
                }
            }
            Ok(None)
        })());
        detg.record((|| -> Outcome {
            let gd = geodesic(&det(&n0)?, &det(&n1)?)?;
            for t in &ts {
                if !det(&g.eval_at(t)?)?.norm_eq(&gd.eval_at(t)?)? {
                    return Ok(Some(json!({ "pair": pair_json(&n0, &n1), "t": rational::render(t) })));
                }
            }
            Ok(None)
        })());
    }
    r.push(lc.finish());
    r.push(ends.finish());
    r.push(geo.finish());
    r.push(detg.finish());

    let mut mono = Tally::new("geodesics.endpoint_monotonicity");
    let mut vol = Tally::new("geodesics.relative_volume_affine");
    let mut mc1 = Tally::new("geodesics.d1_metric_convexity");
    let mut mci = Tally::new("geodesics.dinf_convexity");
    let mut rng = stream(seed, 22);
    for _ in 0..100 {
        let d = rng.gen_range(1..=4);
        let c = instances::invertible(&mut rng, d);
        let w0 = instances::weights(&mut rng, d, -3, 3, 2);
        let w1 = instances::weights(&mut rng, d, -3, 3, 2);
        let bump = |rng: &mut Rng64, w: &[Q]| -> Vec<Q> { w.iter().map(|x| x + instances::int(rng, 0, 2)).collect() };
        let w0p = bump(&mut rng, &w0);
        let w1p = bump(&mut rng, &w1);
        let mk = |rng: &mut Rng64, w: Vec<Q>| instances::rebase(rng, &DiagNorm::new(c.clone(), w).expect("invertible"));
        let (n0, n1, m0, m1) = (mk(&mut rng, w0), mk(&mut rng, w1), mk(&mut rng, w0p), mk(&mut rng, w1p));
        mono.record((|| -> Outcome {
            // m_i ≤ n_i as norms (larger weights are smaller norms)
            if !(m0.le(&n0)? && m1.le(&n1)?) {
                return Ok(Some(json!({ "error": "competitor endpoints not below" })));
            }
            let (g, h) = (geodesic(&n0, &n1)?, geodesic(&m0, &m1)?);
            for i in [0usize, 1, 3, 5, 6] {
                let t = &ts[i];
                if !h.eval_at(t)?.le(&g.eval_at(t)?)? {
                    return Ok(Some(
                        json!({ "t": rational::render(t), "n": pair_json(&n0, &n1), "m": pair_json(&m0, &m1) }),
                    ));
                }
            }
            Ok(None)
        })());
        // a second geodesic in the same apartment, with crossed endpoints
        let (Ok(g), Ok(h2)) = (geodesic(&n0, &n1), geodesic(&m1, &m0)) else {
            vol.record(Err(crate::Error::Inconsistent("codiagonalization failed".into())));
            continue;
        };
        vol.record((|| -> Outcome {
            let vs: Vec<Q> = ts.iter().map(|t| volume(&g.eval_at(t)?, &h2.eval_at(t)?)).collect::<Result<_>>()?;
            let (v0, v1) = (vs[0].clone(), vs[6].clone());
            let ok = ts.iter().zip(&vs).all(|(t, v)| *v == (Q::one() - t) * &v0 + t * &v1);
            expect(ok, || json!({ "volumes": qj(&vs) }))
        })());
        for (tally, p) in [(&mut mc1, d1), (&mut mci, Exponent::Infinity)] {
            tally.record((|| -> Outcome {
                let a = distance(&g.eval_at(&Q::zero())?, &h2.eval_at(&Q::zero())?, p)?;
                let b = distance(&g.eval_at(&Q::one())?, &h2.eval_at(&Q::one())?, p)?;
                for t in &ts {
                    let dt = distance(&g.eval_at(t)?, &h2.eval_at(t)?, p)?;
                    if dt > (Q::one() - t) * &a + t * &b {
                        return Ok(Some(json!({ "t": rational::render(t), "d_t": rational::render(&dt) })));
                    }
                }
                Ok(None)
            })());
        }
    }
    r.push(mono.finish());
    r.push(vol.finish());
    r.push(mc1.finish());
    r.push(mci.finish());

    let mut sp = Tally::new("geodesics.symmetric_power_commutes");
    let mut rng = stream(seed, 23);
    for _ in 0..100 {
        let d = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=4);
        let (n0, n1) = instances::codiagonal_pair(&mut rng, d);
        sp.record((|| -> Outcome {
            let g = geodesic(&n0, &n1)?;
            let gs = geodesic(&sym(&n0, m)?, &sym(&n1, m)?)?;
            for t in &ts {
                if !sym(&g.eval_at(t)?, m)?.norm_eq(&gs.eval_at(t)?)? {
                    return Ok(Some(json!({ "pair": pair_json(&n0, &n1), "m": m, "t": rational::render(t) })));
                }
            }
            Ok(None)
        })());
    }
    r.push(sp.finish());
    r
}

trait AbsValue {
    fn abs_value(&self) -> Q;
}

impl AbsValue for Q {
    fn abs_value(&self) -> Q {
        num_traits::Signed::abs(self)
    }
}
