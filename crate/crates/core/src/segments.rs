//! Fubini–Study segments, the quantized maximal segment, the Legendre construction and
//! the Kiselman transform.
//!
//! A segment `t ↦ φ_t` on `[0, 1]` is represented by its joint potential on `(t, v)`;
//! psh segments are exactly those whose joint potential is convex.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::geodesics::{check_t, interpolate};
use crate::graded::SectionRing;
use crate::plconvex::profile::difference_cells;
use crate::plconvex::{compare, exceeds, marginal_min, MaxAffine, Piece};
use crate::rational::{self, Q};
use crate::report::{Check, Tag};
use crate::toric::{d1_limit, energy_limit, envelope_P, fs_from_weights, supnorm_weights, Provenance, ToricMetric};
use crate::{Error, Result};

/// `t ↦ k⁻¹ max_a (⟨a, v⟩ + (1 − t)λ_a + tλ'_a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FSSegment {
    ring: SectionRing,
    k: usize,
    lam0: Vec<Q>,
    lam1: Vec<Q>,
}

impl FSSegment {
    pub fn new(ring: SectionRing, k: usize, lam0: Vec<Q>, lam1: Vec<Q>) -> Result<Self> {
        if k == 0 {
            return Err(Error::OutOfRange("level k must be ≥ 1".into()));
        }
        let h = ring.h0(k);
        if lam0.len() != h || lam1.len() != h {
            return Err(Error::MissingSupport(format!(
                "degree {k} has {h} monomials, got {} and {} weights",
                lam0.len(),
                lam1.len()
            )));
        }
        Ok(FSSegment { ring, k, lam0, lam1 })
    }

    pub fn ring(&self) -> SectionRing {
        self.ring
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn weights0(&self) -> &[Q] {
        &self.lam0
    }

    pub fn weights1(&self) -> &[Q] {
        &self.lam1
    }

    pub fn eval(&self, t: &Q) -> Result<ToricMetric> {
        check_t(t)?;
        fs_from_weights(self.ring, self.k, &interpolate(&self.lam0, &self.lam1, t))
    }

    /// Potential on `(t, v)`, with `t` the first coordinate.
    pub fn joint_potential(&self) -> MaxAffine {
        let kq = rational::int(self.k as i64);
        let pieces = self
            .ring
            .monomials(self.k)
            .iter()
            .zip(self.lam0.iter().zip(&self.lam1))
            .map(|(a, (l0, l1))| {
                let mut g = vec![(l1 - l0) / &kq];
                g.extend(a.iter().map(|&x| rational::int(x as i64) / &kq));
                Piece::new(g, l0 / &kq)
            })
            .collect();
        MaxAffine::new(self.ring.n + 1, pieces).expect("nonempty")
    }

    /// `t`-slopes of the joint pieces: the breakpoints of the Legendre transform in `τ`.
    pub fn tau_breakpoints(&self) -> Vec<Q> {
        let kq = rational::int(self.k as i64);
        let mut out: Vec<Q> = self.lam0.iter().zip(&self.lam1).map(|(a, b)| (b - a) / &kq).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.ring.n, "m": self.ring.m, "k": self.k,
            "weights0": rational::qvec_to_json(&self.lam0),
            "weights1": rational::qvec_to_json(&self.lam1),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |key: &str| {
            v.get(key).and_then(|x| x.as_u64()).ok_or_else(|| Error::Parse(format!("segment needs integer \"{key}\"")))
        };
        let ring = SectionRing::new(get("n")? as usize, get("m")? as usize)?;
        let w = |key: &str| {
            rational::qvec_from_json(v.get(key).ok_or_else(|| Error::Parse(format!("segment needs \"{key}\"")))?)
        };
        Self::new(ring, get("k")? as usize, w("weights0")?, w("weights1")?)
    }
}

fn same_ring(phi0: &ToricMetric, phi1: &ToricMetric) -> Result<SectionRing> {
    if phi0.ring() != phi1.ring() {
        return Err(Error::InvalidMetric("endpoints live on different arenas".into()));
    }
    Ok(phi0.ring())
}

/// Level-`k` segment `FS_k` of the norm geodesic between `N_k(φ0)` and `N_k(φ1)`.
///
/// Both sup-norms are diagonal in the monomial basis, so the geodesic interpolates weights.
pub fn quantized(phi0: &ToricMetric, phi1: &ToricMetric, k: usize) -> Result<FSSegment> {
    let ring = same_ring(phi0, phi1)?;
    FSSegment::new(ring, k, supnorm_weights(k, phi0)?, supnorm_weights(k, phi1)?)
}

pub fn quantized_segment(phi0: &ToricMetric, phi1: &ToricMetric, k: usize, t: &Q) -> Result<ToricMetric> {
    quantized(phi0, phi1, k)?.eval(t)
}

/// Quantization levels `1, 2, 4, … ≤ kmax`.
pub fn levels(kmax: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = 1;
    while k <= kmax.max(1) {
        out.push(k);
        k *= 2;
    }
    out
}

/// Quantized segments at the materialized levels; evaluation takes their maximum.
#[derive(Clone, Debug)]
pub struct MaximalSegment {
    pub phi0: ToricMetric,
    pub phi1: ToricMetric,
    pub levels: Vec<FSSegment>,
}

impl MaximalSegment {
    pub fn new(phi0: &ToricMetric, phi1: &ToricMetric, kmax: usize) -> Result<Self> {
        let levels = levels(kmax).into_iter().map(|k| quantized(phi0, phi1, k)).collect::<Result<_>>()?;
        Ok(MaximalSegment { phi0: phi0.clone(), phi1: phi1.clone(), levels })
    }

    pub fn eval(&self, t: &Q) -> Result<ToricMetric> {
        let pots: Vec<MaxAffine> =
            self.levels.iter().map(|s| s.eval(t).map(|m| m.potential().clone())).collect::<Result<_>>()?;
        let top = self.levels.last().map_or(1, |s| s.level());
        ToricMetric::new(self.phi0.ring(), MaxAffine::max_all(&pots)?.pruned(), Provenance::Fs(top))
    }
}

pub fn maximal_segment(phi0: &ToricMetric, phi1: &ToricMetric, t: &Q, kmax: usize) -> Result<ToricMetric> {
    MaximalSegment::new(phi0, phi1, kmax)?.eval(t)
}

/// Values of `q1 − q0` at the vertices of the common refinement, padded by `±C`.
pub fn legendre_taus(phi0: &ToricMetric, phi1: &ToricMetric) -> Result<Vec<Q>> {
    let ring = same_ring(phi0, phi1)?;
    let (q0, q1) = (phi0.conjugate(), phi1.conjugate());
    let mut taus = Vec::new();
    for (cell, _) in difference_cells(&ring.polytope(), &q0.pieces, &q1.pieces) {
        for y in &cell.vertices {
            let a = q0.eval(y).ok_or_else(|| Error::Inconsistent("refinement vertex outside mΔ".into()))?;
            let b = q1.eval(y).ok_or_else(|| Error::Inconsistent("refinement vertex outside mΔ".into()))?;
            taus.push(b - a);
        }
    }
    let c = taus.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero);
    taus.push(-c.clone());
    taus.push(c);
    taus.sort();
    taus.dedup();
    Ok(taus)
}

/// `φ̂_τ = P(φ0, φ1 − τ)`.
pub fn legendre_dual(phi0: &ToricMetric, phi1: &ToricMetric, tau: &Q) -> Result<ToricMetric> {
    envelope_P(phi0, &phi1.shift(&-tau))
}

/// `φ_t = sup_τ (φ̂_τ + tτ)` over the critical values of `τ`.
pub fn legendre_segment(phi0: &ToricMetric, phi1: &ToricMetric, t: &Q) -> Result<ToricMetric> {
    check_t(t)?;
    let duals: Vec<(Q, ToricMetric)> = legendre_taus(phi0, phi1)?
        .into_iter()
        .map(|tau| legendre_dual(phi0, phi1, &tau).map(|d| (tau, d)))
        .collect::<Result<_>>()?;
    legendre_from_duals(phi0.ring(), &duals, t)
}

fn legendre_from_duals(ring: SectionRing, duals: &[(Q, ToricMetric)], t: &Q) -> Result<ToricMetric> {
    let pots: Vec<MaxAffine> = duals.iter().map(|(tau, d)| d.potential().add_constant(&(t * tau))).collect();
    ToricMetric::new(ring, MaxAffine::max_all(&pots)?.pruned(), Provenance::Limit)
}

/// Precomputed Legendre duals for evaluating the Legendre segment at many `t`.
#[derive(Clone, Debug)]
pub struct LegendreSegment {
    ring: SectionRing,
    duals: Vec<(Q, ToricMetric)>,
}

impl LegendreSegment {
    pub fn new(phi0: &ToricMetric, phi1: &ToricMetric) -> Result<Self> {
        let duals = legendre_taus(phi0, phi1)?
            .into_iter()
            .map(|tau| legendre_dual(phi0, phi1, &tau).map(|d| (tau, d)))
            .collect::<Result<_>>()?;
        Ok(LegendreSegment { ring: phi0.ring(), duals })
    }

    pub fn taus(&self) -> Vec<Q> {
        self.duals.iter().map(|(t, _)| t.clone()).collect()
    }

    pub fn eval(&self, t: &Q) -> Result<ToricMetric> {
        check_t(t)?;
        legendre_from_duals(self.ring, &self.duals, t)
    }
}

/// `φ̂_τ(v) = inf_{t ∈ [0,1]} (φ_t(v) − tτ)`; validation of the result enforces `∇ ⊂ mΔ`.
pub fn kiselman_dual(seg: &FSSegment, tau: &Q) -> Result<ToricMetric> {
    let u = marginal_min(&seg.joint_potential(), tau)?;
    ToricMetric::new(seg.ring(), u, Provenance::Envelope)
}

/// `sup_τ (φ̂_τ + tτ)` over the breakpoints of the segment.
pub fn kiselman_recover(seg: &FSSegment, t: &Q) -> Result<ToricMetric> {
    check_t(t)?;
    let pots: Vec<MaxAffine> = seg
        .tau_breakpoints()
        .iter()
        .map(|tau| kiselman_dual(seg, tau).map(|d| d.potential().add_constant(&(t * tau))))
        .collect::<Result<_>>()?;
    ToricMetric::new(seg.ring(), MaxAffine::max_all(&pots)?.pruned(), Provenance::Limit)
}

/// Sample points `0, 1/4, 1/2, 3/4, 1`.
pub fn quarter_points() -> Vec<Q> {
    (0..=4).map(|i| rational::frac(i, 4)).collect()
}

/// Convex combination `((c − b) f + (b − a) h) / (c − a)` of potentials at `a < b < c`.
fn chord(f: &MaxAffine, h: &MaxAffine, a: &Q, b: &Q, c: &Q) -> Result<MaxAffine> {
    let w = c - a;
    f.scale(&((c - b) / &w)).add(&h.scale(&((b - a) / &w)))
}

/// Looks for a failure of convexity in `t`: a triple `a < b < c` and a point `v`
/// with `u_b(v) > chord(v)`.
pub fn convexity_in_t_witness<F>(family: F, ts: &[Q]) -> Result<Option<Value>>
where
    F: Fn(&Q) -> Result<MaxAffine>,
{
    let mut ts = ts.to_vec();
    ts.sort();
    ts.dedup();
    let us: Vec<MaxAffine> = ts.iter().map(&family).collect::<Result<_>>()?;
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            for l in j + 1..ts.len() {
                let ch = chord(&us[i], &us[l], &ts[i], &ts[j], &ts[l])?;
                if let Some(v) = exceeds(&us[j], &ch) {
                    return Ok(Some(json!({
                        "t": [rational::render(&ts[i]), rational::render(&ts[j]), rational::render(&ts[l])],
                        "v": rational::qvec_to_json(&v),
                        "value": rational::render(&us[j].eval(&v)?),
                        "chord": rational::render(&ch.eval(&v)?),
                    })));
                }
            }
        }
    }
    Ok(None)
}

/// The planted non-psh control `u_t = u + 4t(1 − t)`, concave in `t`.
pub fn nonpsh_control(phi: &ToricMetric, t: &Q) -> Result<MaxAffine> {
    check_t(t)?;
    Ok(phi.potential().add_constant(&(rational::int(4) * t * (Q::one() - t))))
}

/// Geodesicity, energy affineness and endpoint checks for the segment joining `φ0` and `φ1`.
pub fn diagnostics(phi0: &ToricMetric, phi1: &ToricMetric, kmax: usize) -> Result<Vec<Check>> {
    let ring = same_ring(phi0, phi1)?;
    let ts = quarter_points();
    let mut rows = Vec::new();

    for k in levels(kmax) {
        let seg = quantized(phi0, phi1, k)?;
        let base = level_d1(k, seg.weights0(), seg.weights1());
        let mut bad = None;
        'pairs: for t in &ts {
            for s in &ts {
                let d = level_d1(
                    k,
                    &interpolate(seg.weights0(), seg.weights1(), t),
                    &interpolate(seg.weights0(), seg.weights1(), s),
                );
                let expect = (t - s).abs() * &base;
                if d != expect {
                    bad = Some(json!({"t": rational::render(t), "s": rational::render(s),
                        "d1": rational::render(&d), "expected": rational::render(&expect)}));
                    break 'pairs;
                }
            }
        }
        rows.push(
            Check::exact(format!("d1_geodesic_level_{k}"), bad.is_none())
                .with_detail(json!({"k": k, "d1_endpoints": rational::render(&base)}))
                .with_witness(bad),
        );
    }

    let leg = LegendreSegment::new(phi0, phi1)?;
    let path: Vec<ToricMetric> = ts.iter().map(|t| leg.eval(t)).collect::<Result<_>>()?;
    let reference = ToricMetric::reference(ring);
    let es: Vec<Q> = path.iter().map(|p| energy_limit(p, &reference)).collect::<Result<_>>()?;
    let (e0, e1) = (es[0].clone(), es[4].clone());
    let affine = ts.iter().zip(&es).all(|(t, e)| *e == (Q::one() - t) * &e0 + t * &e1);
    rows.push(Check::exact("energy_affine_limit", affine).with_detail(json!({
        "t": ts.iter().map(rational::render).collect::<Vec<_>>(),
        "energy_vs_reference": es.iter().map(rational::render).collect::<Vec<_>>(),
    })));

    let e_rel: Vec<Q> = path.iter().map(|p| energy_limit(p, phi0)).collect::<Result<_>>()?;
    rows.push(Check::exact("energy_vs_start", true).with_detail(json!({
        "t": ts.iter().map(rational::render).collect::<Vec<_>>(),
        "energy": e_rel.iter().map(rational::render).collect::<Vec<_>>(),
    })));

    let total = d1_limit(phi0, phi1)?;
    let mut bad = None;
    'lim: for (i, t) in ts.iter().enumerate() {
        for (j, s) in ts.iter().enumerate().skip(i + 1) {
            let d = d1_limit(&path[i], &path[j])?;
            let expect = (s - t) * &total;
            if d != expect {
                bad = Some(json!({"t": rational::render(t), "s": rational::render(s),
                    "d1": rational::render(&d), "expected": rational::render(&expect)}));
                break 'lim;
            }
        }
    }
    rows.push(
        Check::exact("d1_geodesic_limit", bad.is_none())
            .with_detail(json!({"d1_endpoints": rational::render(&total)}))
            .with_witness(bad),
    );

    let g0 = d1_limit(&path[0], phi0)?;
    let g1 = d1_limit(&path[4], phi1)?;
    rows.push(
        Check::exact("endpoint_continuity", g0.is_zero() && g1.is_zero())
            .with_detail(json!({"gap0": rational::render(&g0), "gap1": rational::render(&g1)})),
    );

    let maximal = MaximalSegment::new(phi0, phi1, kmax)?;
    let mut table = Vec::new();
    let mut all_le = true;
    for (t, l) in ts.iter().zip(&path) {
        let q = maximal.eval(t)?;
        let c = compare(q.potential(), l.potential())?;
        all_le &= c.is_le();
        table.push(json!({"t": rational::render(t), "quantized_vs_legendre": c.symbol()}));
    }
    rows.push(Check::new("quantized_below_legendre", all_le, Tag::Exact).with_detail(json!(table)));
    Ok(rows)
}

/// `(k h⁰)⁻¹ Σ |λ|` for monomial weight vectors at level `k`.
fn level_d1(k: usize, w0: &[Q], w1: &[Q]) -> Q {
    let s: Q = w0.iter().zip(w1).map(|(a, b)| (a - b).abs()).sum();
    s / rational::int((k * w0.len()) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plconvex::Comparison;
    use crate::rational::{frac, int};

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn p1(m: usize) -> SectionRing {
        SectionRing::new(1, m).unwrap()
    }

    fn pair() -> (ToricMetric, ToricMetric) {
        (ToricMetric::reference(p1(1)), fs_from_weights(p1(1), 1, &qv(&[0, -2])).unwrap())
    }

    fn eq(a: &ToricMetric, b: &ToricMetric) -> bool {
        compare(a.potential(), b.potential()).unwrap().is_eq()
    }

    #[test]
    fn fs_segment_examples() {
        let s = FSSegment::new(p1(1), 1, qv(&[0, 0]), qv(&[0, -2])).unwrap();
        assert_eq!(s.eval(&frac(1, 2)).unwrap().potential().to_string(), "max(0, v-1)");
        let c = FSSegment::new(p1(1), 1, qv(&[1, 3]), qv(&[1, 3])).unwrap();
        assert!(eq(&c.eval(&frac(1, 3)).unwrap(), &c.eval(&int(0)).unwrap()));
        let (a, b) = (s.eval(&int(0)).unwrap(), s.eval(&int(1)).unwrap());
        let avg = a.potential().scale(&frac(1, 2)).add(&b.potential().scale(&frac(1, 2))).unwrap();
        assert!(compare(s.eval(&frac(1, 2)).unwrap().potential(), &avg).unwrap().is_le());
        assert!(matches!(FSSegment::new(p1(1), 1, qv(&[0]), qv(&[0, 0])), Err(Error::MissingSupport(_))));
    }

    #[test]
    fn quantized_examples() {
        let (r, u1) = pair();
        let q = quantized_segment(&r, &u1, 1, &frac(1, 2)).unwrap();
        assert_eq!(q.potential().to_string(), "max(0, v-1)");
        let q0 = quantized_segment(&r, &u1, 2, &int(0)).unwrap();
        assert!(compare(q0.potential(), r.potential()).unwrap().is_le());
        let w = fs_from_weights(p1(2), 1, &qv(&[0, -3, 1])).unwrap();
        let z = fs_from_weights(p1(2), 2, &qv(&[0, 1, 0, 2, -1])).unwrap();
        for t in quarter_points() {
            let a = quantized_segment(&w, &z, 1, &t).unwrap();
            let b = quantized_segment(&w, &z, 2, &t).unwrap();
            assert!(compare(a.potential(), b.potential()).unwrap().is_le());
        }
    }

    #[test]
    fn legendre_examples() {
        let (r, u1) = pair();
        let l = legendre_segment(&r, &u1, &frac(1, 2)).unwrap();
        assert_eq!(
            compare(l.potential(), &MaxAffine::from_pairs(1, vec![(qv(&[0]), int(0)), (qv(&[1]), int(-1))]).unwrap())
                .unwrap(),
            Comparison::Equal
        );
        assert!(eq(&legendre_segment(&r, &u1, &int(0)).unwrap(), &r));
        assert!(eq(&legendre_segment(&r, &u1, &int(1)).unwrap(), &u1));
        let w = fs_from_weights(p1(2), 1, &qv(&[0, -3, 1])).unwrap();
        let z = fs_from_weights(p1(2), 1, &qv(&[2, 2, -1])).unwrap();
        for t in quarter_points() {
            let l = legendre_segment(&w, &z, &t).unwrap();
            let m = maximal_segment(&w, &z, &t, 8).unwrap();
            assert!(eq(&l, &m), "t = {t}: {l} vs {m}");
        }
    }

    #[test]
    fn kiselman_examples() {
        let c = FSSegment::new(p1(1), 1, qv(&[0, 1]), qv(&[0, 1])).unwrap();
        assert!(eq(&kiselman_dual(&c, &int(0)).unwrap(), &c.eval(&int(0)).unwrap()));
        // u_t = max(t, v)
        let s = FSSegment::new(p1(1), 1, qv(&[0, 0]), qv(&[1, 0])).unwrap();
        let d = kiselman_dual(&s, &int(1)).unwrap();
        assert_eq!(d.potential().to_string(), "max(0, v-1)");
        for t in quarter_points() {
            assert!(eq(&kiselman_recover(&s, &t).unwrap(), &s.eval(&t).unwrap()));
        }
    }

    #[test]
    fn convexity_control() {
        let (r, u1) = pair();
        let seg = quantized(&r, &u1, 1).unwrap();
        let ok = convexity_in_t_witness(|t| seg.eval(t).map(|m| m.potential().clone()), &quarter_points()).unwrap();
        assert!(ok.is_none());
        let w = convexity_in_t_witness(|t| nonpsh_control(&r, t), &quarter_points()).unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn diagnostics_examples() {
        let (r, u1) = pair();
        let rows = diagnostics(&r, &u1, 4).unwrap();
        assert!(rows.iter().all(|c| c.passed), "{rows:?}");
        let e = rows.iter().find(|c| c.name == "energy_vs_start").unwrap();
        assert_eq!(e.detail["energy"], json!(["0", "-1/4", "-1/2", "-3/4", "-1"]));
        let d = rows.iter().find(|c| c.name == "d1_geodesic_limit").unwrap();
        assert_eq!(d.detail["d1_endpoints"], json!("1"));
        let rows = diagnostics(&r, &r, 2).unwrap();
        assert!(rows.iter().all(|c| c.passed));
    }
}
