//! Quantization suite: `FS_k` / `N_k` round trips, energy and `d₁` on toric metrics.

use num_traits::{Signed, Zero};
use rand::Rng;
use serde_json::json;

use super::{expect, stream, Outcome, Tally};
use crate::graded::SectionRing;
use crate::instances::{self, Rng64};
use crate::oracle::concave_closure_lp;
use crate::plconvex::{compare, MaxAffine};
use crate::rational::{self, Q};
use crate::report::{Report, Tag};
use crate::toric::{
    d1_at, d1_limit, d1_metric, energy_at, energy_limit, fs_from_weights, supnorm_weights, Provenance, ToricMetric,
};

/// Gradients of a level-`j` FS metric lie on the `1/j` grid; the level is drawn from `1..=3`.
fn random_metric(rng: &mut Rng64, ring: SectionRing) -> ToricMetric {
    let j = rng.gen_range(1..=3);
    instances::fs_metric(rng, ring, j)
}

fn on_grid(phi: &ToricMetric, k: usize) -> bool {
    let kq = rational::int(k as i64);
    phi.potential().pruned().gradients().iter().all(|g| g.iter().all(|x| rational::is_integer(&(x * &kq))))
}

fn pair_json(a: &ToricMetric, b: &ToricMetric) -> serde_json::Value {
    json!({ "phi0": a.to_json(), "phi1": b.to_json() })
}

pub fn quantization(seed: u64) -> Report {
    let mut r = Report::new("quantization");

    let mut below = Tally::new("quantization.fs_of_supnorm_below_metric");
    let mut grid = Tally::new("quantization.fs_of_supnorm_equal_iff_gradients_on_grid");
    let mut rng = stream(seed, 41);
    for _ in 0..100 {
        let ring = instances::small_ring(&mut rng);
        let phi = random_metric(&mut rng, ring);
        let k = rng.gen_range(1..=4);
        let back = supnorm_weights(k, &phi).and_then(|b| fs_from_weights(ring, k, &b));
        let back = match back {
            Ok(b) => b,
            Err(e) => {
                below.record(Err(e));
                continue;
            }
        };
        match compare(back.potential(), phi.potential()) {
            Ok(c) => {
                let w = || json!({ "k": k, "phi": phi.to_json(), "comparison": c.to_json() });
                below.record(expect(c.is_le(), w));
                grid.record(expect(c.is_eq() == on_grid(&phi, k), w));
            }
            Err(e) => below.record(Err(e)),
        }
    }
    r.push(below.finish());
    r.push(grid.finish());

    let mut above = Tally::new("quantization.supnorm_of_fs_is_concave_closure");
    let mut closed = Tally::new("quantization.supnorm_of_fs_equal_iff_concave_closed");
    let mut rng = stream(seed, 42);
    for _ in 0..100 {
        let ring = instances::small_ring(&mut rng);
        let k = rng.gen_range(1..=3);
        let beta = instances::fs_weights(&mut rng, ring, k, -3, 3);
        let hull = concave_closure_lp(ring, k, &beta);
        let nfs = fs_from_weights(ring, k, &beta).and_then(|p| supnorm_weights(k, &p));
        match nfs {
            Ok(nfs) => {
                let ge = nfs.iter().zip(&beta).all(|(a, b)| a >= b);
                above.record(expect(ge && nfs == hull, || {
                    json!({ "k": k, "beta": rational::qvec_to_json(&beta), "nfs": rational::qvec_to_json(&nfs),
                            "closure": rational::qvec_to_json(&hull) })
                }));
                // concavity at lattice points judged by the LP hull, independently of N∘FS
                let concave = hull == beta;
                closed.record(expect(
                    (nfs == beta) == concave,
                    || json!({ "k": k, "beta": rational::qvec_to_json(&beta) }),
                ));
            }
            Err(e) => above.record(Err(e)),
        }
    }
    r.push(above.finish());
    r.push(closed.finish());

    let mut idem = Tally::new("quantization.supnorm_fs_supnorm_idempotent");
    let mut rng = stream(seed, 43);
    for _ in 0..100 {
        let ring = instances::small_ring(&mut rng);
        let phi = random_metric(&mut rng, ring);
        let k = rng.gen_range(1..=4);
        idem.record((|| -> Outcome {
            let n = supnorm_weights(k, &phi)?;
            let nn = supnorm_weights(k, &fs_from_weights(ring, k, &n)?)?;
            let f = fs_from_weights(ring, k, &n)?;
            let ff = fs_from_weights(ring, k, &supnorm_weights(k, &f)?)?;
            let ok = n == nn && compare(f.potential(), ff.potential())?.is_eq();
            expect(ok, || json!({ "k": k, "phi": phi.to_json() }))
        })());
    }
    r.push(idem.finish());

    energy_rows(&mut r, seed);
    d1_rows(&mut r, seed);
    convergence_rows(&mut r, seed);
    r
}

fn energy_rows(r: &mut Report, seed: u64) {
    let mut zero = Tally::new("quantization.energy_zero_on_diagonal");
    let mut anti = Tally::new("quantization.energy_antisymmetric");
    let mut coc = Tally::new("quantization.energy_cocycle");
    let mut mono = Tally::new("quantization.energy_monotone");
    let mut rng = stream(seed, 44);
    for _ in 0..50 {
        let ring = instances::small_ring(&mut rng);
        let (a, b, c) = (random_metric(&mut rng, ring), random_metric(&mut rng, ring), random_metric(&mut rng, ring));
        let k = rng.gen_range(1..=4);
        zero.record((|| -> Outcome {
            expect(energy_limit(&a, &a)?.is_zero() && energy_at(&a, &a, k)?.is_zero(), || json!({ "phi": a.to_json() }))
        })());
        anti.record((|| -> Outcome {
            let ok = energy_limit(&a, &b)? == -energy_limit(&b, &a)? && energy_at(&a, &b, k)? == -energy_at(&b, &a, k)?;
            expect(ok, || pair_json(&a, &b))
        })());
        coc.record((|| -> Outcome {
            let ok = energy_limit(&a, &c)? == energy_limit(&a, &b)? + energy_limit(&b, &c)?
                && energy_at(&a, &c, k)? == energy_at(&a, &b, k)? + energy_at(&b, &c, k)?;
            expect(ok, || json!({ "a": a.to_json(), "b": b.to_json(), "c": c.to_json() }))
        })());
        mono.record((|| -> Outcome {
            // a ≤ max(a, b) pointwise, so the energy of a relative to the max is nonpositive
            let top = ToricMetric::new(
                ring,
                MaxAffine::max_all(&[a.potential().clone(), b.potential().clone()])?,
                Provenance::Envelope,
            )?;
            let (e, ek) = (energy_limit(&a, &top)?, energy_at(&a, &top, k)?);
            expect(
                !e.is_positive() && !ek.is_positive(),
                || json!({ "a": a.to_json(), "top": top.to_json(), "energy": rational::render(&e) }),
            )
        })());
    }
    r.push(zero.finish());
    r.push(anti.finish());
    r.push(coc.finish());
    r.push(mono.finish());
}

fn d1_rows(r: &mut Report, seed: u64) {
    let mut agree = Tally::new("quantization.d1_limit_equals_envelope_formula");
    let mut tri = Tally::new("quantization.d1_triangle_inequality");
    let mut rng = stream(seed, 45);
    for _ in 0..50 {
        let ring = instances::small_ring(&mut rng);
        let (a, b, c) = (random_metric(&mut rng, ring), random_metric(&mut rng, ring), random_metric(&mut rng, ring));
        agree.record((|| -> Outcome {
            let rep = d1_metric(&a, &b, 2)?;
            expect(rep.agree(), || {
                json!({ "pair": pair_json(&a, &b), "limit": rational::render(&rep.sequence.limit),
                        "via_envelope": rational::render(&rep.via_envelope) })
            })
        })());
        tri.record((|| -> Outcome {
            let (ab, bc, ac) = (d1_limit(&a, &b)?, d1_limit(&b, &c)?, d1_limit(&a, &c)?);
            expect(ac <= &ab + &bc, || json!({ "a": a.to_json(), "b": b.to_json(), "c": c.to_json() }))
        })());
    }
    r.push(agree.finish());
    r.push(tri.finish());
}

type LevelFn = fn(&ToricMetric, &ToricMetric, usize) -> crate::Result<Q>;
type LimitFn = fn(&ToricMetric, &ToricMetric) -> crate::Result<Q>;

/// `|gap(k_hi)| ≤ ratio · |gap(k_lo)|` for each random pair, exact rationals compared.
#[allow(clippy::too_many_arguments)]
fn gap_row(
    name: &str,
    seed: u64,
    salt: u64,
    rings: &[SectionRing],
    pairs: usize,
    (k_lo, k_hi): (usize, usize),
    ratio: Q,
    (at, limit): (LevelFn, LimitFn),
) -> Tally {
    let mut tally = Tally::tagged(name, Tag::Approx);
    tally.note("k_low", json!(k_lo));
    tally.note("k_high", json!(k_hi));
    tally.note("tolerance_ratio", json!(rational::render(&ratio)));
    let mut rng = stream(seed, salt);
    let mut worst: Option<Q> = None;
    for i in 0..pairs {
        let ring = rings[i % rings.len()];
        let (a, b) = (random_metric(&mut rng, ring), random_metric(&mut rng, ring));
        let o = (|| -> Outcome {
            let lim = limit(&a, &b)?;
            let lo = (at(&a, &b, k_lo)? - &lim).abs();
            let hi = (at(&a, &b, k_hi)? - &lim).abs();
            if !lo.is_zero() {
                let q = &hi / &lo;
                if worst.as_ref().is_none_or(|w| q > *w) {
                    worst = Some(q);
                }
            }
            expect(hi <= &ratio * &lo, || {
                json!({ "pair": pair_json(&a, &b), "limit": rational::render(&lim),
                        "gap_low": rational::render(&lo), "gap_high": rational::render(&hi),
                        "observed_ratio": if lo.is_zero() { None } else { Some(rational::to_f64(&(&hi / &lo))) } })
            })
        })();
        tally.record(o);
    }
    if let Some(w) = worst {
        tally.note("worst_ratio", json!(rational::render(&w)));
        tally.note("worst_ratio_decimal", json!(rational::to_f64(&w)));
    }
    tally
}

fn convergence_rows(r: &mut Report, seed: u64) {
    let p1 = [SectionRing { n: 1, m: 1 }, SectionRing { n: 1, m: 2 }];
    let p2 = [SectionRing { n: 2, m: 1 }];
    let five = rational::frac(1, 20);
    let energy: (LevelFn, LimitFn) = (energy_at, energy_limit);
    let d1: (LevelFn, LimitFn) = (d1_at, d1_limit);
    r.push(
        gap_row("quantization.energy_gap_p1_k40_within_5pct_of_k2", seed, 46, &p1, 6, (2, 40), five.clone(), energy)
            .finish(),
    );
    r.push(
        gap_row("quantization.energy_gap_p2_k12_within_5pct_of_k2", seed, 47, &p2, 4, (2, 12), five.clone(), energy)
            .finish(),
    );
    r.push(
        gap_row("quantization.d1_gap_p1_k40_within_5pct_of_k2", seed, 48, &p1, 6, (2, 40), five.clone(), d1).finish(),
    );
    r.push(gap_row("quantization.d1_gap_p2_k12_within_5pct_of_k2", seed, 49, &p2, 4, (2, 12), five, d1).finish());
    r.push(
        gap_row(
            "quantization.energy_gap_p1_k40_within_10pct_of_k4",
            seed,
            50,
            &p1,
            6,
            (4, 40),
            rational::frac(1, 10),
            energy,
        )
        .finish(),
    );
}
