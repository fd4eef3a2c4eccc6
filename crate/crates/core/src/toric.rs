//! Continuous toric psh metrics on `(P^n, O(m))` in tropical coordinates.
//!
//! On the skeleton `v_i = log|x_i/x_0|` a metric is a potential `u : R^n → R`; it is psh and
//! continuous exactly when `u` is convex with `u − u_ref` bounded, i.e. the gradients of `u`
//! span `mΔ_n`. A monomial-diagonal degree-`k` norm with weights `β_a` has
//! `FS_k = k⁻¹ max_a (⟨a, v⟩ + β_a)`, and the sup-norm of `x^a` for `kφ` has weight
//! `k·q(a/k)` where `q = −u*` is the concave conjugate on `mΔ_n`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::graded::SectionRing;
use crate::norms::{DiagNorm, Spectrum};
use crate::plconvex::profile::integrate_abs_difference;
use crate::plconvex::{envelope_constrained, ConcaveProfile, MaxAffine, Piece};
use crate::rational::{self, Q};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Fs(usize),
    Envelope,
    Limit,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Fs(k) => write!(f, "fs({k})"),
            Provenance::Envelope => write!(f, "envelope"),
            Provenance::Limit => write!(f, "limit"),
        }
    }
}

impl Provenance {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "envelope" => Ok(Provenance::Envelope),
            "limit" => Ok(Provenance::Limit),
            _ => s
                .strip_prefix("fs(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|k| k.parse().ok())
                .map(Provenance::Fs)
                .ok_or_else(|| Error::Parse(format!("unknown provenance {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToricMetric {
    ring: SectionRing,
    potential: MaxAffine,
    tag: Provenance,
}

/// Whether `g ∈ mΔ_n`, i.e. `g ≥ 0` and `Σ g ≤ m`.
pub fn in_moment_polytope(ring: SectionRing, g: &[Q]) -> bool {
    g.len() == ring.n && g.iter().all(|x| *x >= Q::zero()) && g.iter().sum::<Q>() <= rational::int(ring.m as i64)
}

fn vertices(ring: SectionRing) -> Vec<Vec<Q>> {
    let mut out = vec![vec![Q::zero(); ring.n]];
    for i in 0..ring.n {
        let mut e = vec![Q::zero(); ring.n];
        e[i] = rational::int(ring.m as i64);
        out.push(e);
    }
    out
}

impl ToricMetric {
    pub fn new(ring: SectionRing, potential: MaxAffine, tag: Provenance) -> Result<Self> {
        if potential.dim() != ring.n {
            return Err(Error::DimensionMismatch { expected: ring.n, got: potential.dim() });
        }
        if let Some(p) = potential.pieces().iter().find(|p| !in_moment_polytope(ring, &p.g)) {
            return Err(Error::InvalidMetric(format!(
                "gradient {} lies outside {}Δ_{}",
                fmt_vec(&p.g),
                ring.m,
                ring.n
            )));
        }
        let grads = potential.gradients();
        if let Some(v) = vertices(ring).into_iter().find(|v| !grads.contains(v)) {
            return Err(Error::InvalidMetric(format!(
                "potential is unbounded relative to the reference: no piece with gradient {}",
                fmt_vec(&v)
            )));
        }
        Ok(ToricMetric { ring, potential, tag })
    }

    /// `u_ref = max(0, m v_1, …, m v_n)`, the FS metric of the trivial norm.
    pub fn reference(ring: SectionRing) -> Self {
        let pieces = vertices(ring).into_iter().map(|g| Piece::new(g, Q::zero())).collect();
        ToricMetric { ring, potential: MaxAffine::new(ring.n, pieces).expect("nonempty"), tag: Provenance::Fs(1) }
    }

    pub fn ring(&self) -> SectionRing {
        self.ring
    }

    pub fn potential(&self) -> &MaxAffine {
        &self.potential
    }

    pub fn tag(&self) -> Provenance {
        self.tag
    }

    pub fn with_tag(mut self, tag: Provenance) -> Self {
        self.tag = tag;
        self
    }

    /// The concave conjugate `q = −u*` on `mΔ_n`.
    pub fn conjugate(&self) -> ConcaveProfile {
        self.potential.conjugate()
    }

    /// `φ + c`.
    pub fn shift(&self, c: &Q) -> Self {
        ToricMetric { ring: self.ring, potential: self.potential.add_constant(c), tag: self.tag }
    }

    pub fn pruned(&self) -> Self {
        ToricMetric { ring: self.ring, potential: self.potential.pruned(), tag: self.tag }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.ring.n,
            "m": self.ring.m,
            "potential": self.potential.to_json(),
            "tag": self.tag.to_string(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |key: &str| {
            v.get(key).and_then(|x| x.as_u64()).ok_or_else(|| Error::Parse(format!("metric needs integer \"{key}\"")))
        };
        let ring = SectionRing::new(get("n")? as usize, get("m")? as usize)?;
        let potential =
            MaxAffine::from_json(v.get("potential").ok_or_else(|| Error::Parse("metric needs \"potential\"".into()))?)?;
        let tag = match v.get("tag").and_then(|t| t.as_str()) {
            Some(s) => Provenance::parse(s)?,
            None => Provenance::Limit,
        };
        Self::new(ring, potential, tag)
    }
}

impl fmt::Display for ToricMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.potential)
    }
}

fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(rational::render).collect();
    format!("({})", parts.join(", "))
}

fn check_same_ring(a: &ToricMetric, b: &ToricMetric) -> Result<()> {
    if a.ring != b.ring {
        return Err(Error::InvalidMetric(format!(
            "metrics on different arenas: (n, m) = ({}, {}) vs ({}, {})",
            a.ring.n, a.ring.m, b.ring.n, b.ring.m
        )));
    }
    Ok(())
}

/// `FS_k` of monomial weights `β` (one per lattice point of `kmΔ_n`, lexicographic).
pub fn fs_from_weights(ring: SectionRing, k: usize, beta: &[Q]) -> Result<ToricMetric> {
    if k == 0 {
        return Err(Error::OutOfRange("level k must be ≥ 1".into()));
    }
    let mons = ring.monomials(k);
    if beta.len() != mons.len() {
        return Err(Error::MissingSupport(format!(
            "degree {k} has {} monomials, got {} weights",
            mons.len(),
            beta.len()
        )));
    }
    let kq = rational::int(k as i64);
    let pieces = mons
        .iter()
        .zip(beta)
        .map(|(a, b)| Piece::new(a.iter().map(|&x| rational::int(x as i64) / &kq).collect(), b / &kq))
        .collect();
    ToricMetric::new(ring, MaxAffine::new(ring.n, pieces)?, Provenance::Fs(k))
}

pub fn fs_from_norm(ring: SectionRing, k: usize, norm: &DiagNorm<Q>) -> Result<ToricMetric> {
    let beta = crate::graded::monomial_weights(norm)?;
    fs_from_weights(ring, k, &beta)
}

/// Weights of `N_k(φ)`: `β'_a = k·q(a/k)`.
pub fn supnorm_weights(k: usize, phi: &ToricMetric) -> Result<Vec<Q>> {
    if k == 0 {
        return Err(Error::OutOfRange("level k must be ≥ 1".into()));
    }
    let q = phi.conjugate();
    let kq = rational::int(k as i64);
    phi.ring
        .monomials(k)
        .iter()
        .map(|a| {
            let y: Vec<Q> = a.iter().map(|&x| rational::int(x as i64) / &kq).collect();
            q.eval(&y)
                .map(|z| z * &kq)
                .ok_or_else(|| Error::OutOfRange(format!("monomial {a:?} outside the conjugate domain")))
        })
        .collect()
}

pub fn supnorm(k: usize, phi: &ToricMetric) -> Result<DiagNorm<Q>> {
    Ok(DiagNorm::diagonal(supnorm_weights(k, phi)?))
}

/// Whether the weights agree with their concave envelope at every lattice point.
pub fn concave_closed(ring: SectionRing, k: usize, beta: &[Q]) -> Result<bool> {
    Ok(supnorm_weights(k, &fs_from_weights(ring, k, beta)?)? == beta)
}

/// Rooftop envelope `P(φ0, φ1)`: largest psh metric below both.
#[allow(non_snake_case)]
pub fn envelope_P(phi0: &ToricMetric, phi1: &ToricMetric) -> Result<ToricMetric> {
    check_same_ring(phi0, phi1)?;
    let env = envelope_constrained(&[phi0.potential.clone(), phi1.potential.clone()], &phi0.ring.polytope())?;
    ToricMetric::new(phi0.ring, env, Provenance::Envelope)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sequence {
    pub per_k: Vec<(usize, Q)>,
    pub limit: Q,
}

impl Sequence {
    pub fn csv(&self) -> String {
        let mut s = String::from("k,exact_value,decimal_value,oracle_limit\n");
        let lim = rational::render(&self.limit);
        for (k, v) in &self.per_k {
            s.push_str(&format!("{k},{},{:.12},{lim}\n", rational::render(v), rational::to_f64(v)));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "per_k": self.per_k.iter().map(|(k, v)| json!({"k": k, "value": rational::render(v)})).collect::<Vec<_>>(),
            "limit": rational::render(&self.limit),
        })
    }

    /// `|v_k − limit|`.
    pub fn gap(&self, k: usize) -> Option<Q> {
        self.per_k.iter().find(|(j, _)| *j == k).map(|(_, v)| (v - &self.limit).abs())
    }
}

/// Exact limit `vol(mΔ)⁻¹ ∫ (q0 − q1)`.
pub fn energy_limit(phi0: &ToricMetric, phi1: &ToricMetric) -> Result<Q> {
    check_same_ring(phi0, phi1)?;
    let i0 = phi0.conjugate().integrate(None)?;
    let i1 = phi1.conjugate().integrate(None)?;
    Ok((i0 - i1) / phi0.ring.volume())
}

/// Level-`k` value `(k h⁰)⁻¹ Σ_a (β̂⁰_a − β̂¹_a)`.
pub fn energy_at(phi0: &ToricMetric, phi1: &ToricMetric, k: usize) -> Result<Q> {
    check_same_ring(phi0, phi1)?;
    let b0 = supnorm_weights(k, phi0)?;
    let b1 = supnorm_weights(k, phi1)?;
    let s: Q = b0.iter().zip(&b1).map(|(x, y)| x - y).sum();
    Ok(s / rational::int((k * phi0.ring.h0(k)) as i64))
}

/// Monge–Ampère energy `E(φ0, φ1)`: per-level relative volumes and their exact limit.
pub fn energy(phi0: &ToricMetric, phi1: &ToricMetric, kmax: usize) -> Result<Sequence> {
    let per_k = (1..=kmax).map(|k| Ok((k, energy_at(phi0, phi1, k)?))).collect::<Result<_>>()?;
    Ok(Sequence { per_k, limit: energy_limit(phi0, phi1)? })
}

/// Level-`k` value `(k h⁰)⁻¹ Σ_a |β̂⁰_a − β̂¹_a|`.
pub fn d1_at(phi0: &ToricMetric, phi1: &ToricMetric, k: usize) -> Result<Q> {
    check_same_ring(phi0, phi1)?;
    let spec = Spectrum::from_weights(&supnorm_weights(k, phi0)?, &supnorm_weights(k, phi1)?);
    Ok(spec.distance(crate::norms::Exponent::Finite(1)) / rational::int(k as i64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct D1Report {
    pub sequence: Sequence,
    /// `E(φ0, P) + E(φ1, P)`.
    pub via_envelope: Q,
}

impl D1Report {
    pub fn agree(&self) -> bool {
        self.sequence.limit == self.via_envelope
    }
}

/// `d₁(φ0, φ1)` two ways: the limit of normalized level-`k` distances, and the envelope formula.
pub fn d1_metric(phi0: &ToricMetric, phi1: &ToricMetric, kmax: usize) -> Result<D1Report> {
    check_same_ring(phi0, phi1)?;
    let per_k = (1..=kmax).map(|k| Ok((k, d1_at(phi0, phi1, k)?))).collect::<Result<_>>()?;
    let ring = phi0.ring;
    let limit = integrate_abs_difference(&ring.polytope(), &phi0.conjugate(), &phi1.conjugate(), 1) / ring.volume();
    let p = envelope_P(phi0, phi1)?;
    let via_envelope = energy_limit(phi0, &p)? + energy_limit(phi1, &p)?;
    Ok(D1Report { sequence: Sequence { per_k, limit }, via_envelope })
}

pub fn d1_limit(phi0: &ToricMetric, phi1: &ToricMetric) -> Result<Q> {
    check_same_ring(phi0, phi1)?;
    let ring = phi0.ring;
    Ok(integrate_abs_difference(&ring.polytope(), &phi0.conjugate(), &phi1.conjugate(), 1) / ring.volume())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plconvex::{compare, Comparison};
    use crate::rational::{frac, int};

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn p1(m: usize) -> SectionRing {
        SectionRing::new(1, m).unwrap()
    }

    fn metric1(m: usize, pairs: &[(Q, Q)]) -> ToricMetric {
        let pieces = pairs.iter().map(|(g, c)| Piece::new(vec![g.clone()], c.clone())).collect();
        ToricMetric::new(p1(m), MaxAffine::new(1, pieces).unwrap(), Provenance::Limit).unwrap()
    }

    #[test]
    fn fs_examples() {
        let u = fs_from_weights(p1(1), 1, &qv(&[0, 0])).unwrap();
        assert_eq!(compare(u.potential(), ToricMetric::reference(p1(1)).potential()).unwrap(), Comparison::Equal);
        let u = fs_from_weights(p1(1), 1, &qv(&[0, -2])).unwrap();
        assert_eq!(u.potential().to_string(), "max(0, v-2)");
        let u = fs_from_weights(p1(2), 1, &qv(&[0, 5, 0])).unwrap();
        assert_eq!(u.potential().to_string(), "max(0, v+5, 2v)");
        assert!(matches!(fs_from_weights(p1(2), 1, &qv(&[0, 5])), Err(Error::MissingSupport(_))));
    }

    #[test]
    fn validation() {
        let bad = MaxAffine::from_pairs(1, vec![(vec![int(0)], int(0)), (vec![int(2)], int(0))]).unwrap();
        assert!(matches!(ToricMetric::new(p1(1), bad, Provenance::Limit), Err(Error::InvalidMetric(_))));
        let unbounded = MaxAffine::constant(1, int(0));
        assert!(matches!(ToricMetric::new(p1(1), unbounded, Provenance::Limit), Err(Error::InvalidMetric(_))));
    }

    #[test]
    fn supnorm_examples() {
        assert_eq!(supnorm_weights(1, &ToricMetric::reference(p1(1))).unwrap(), qv(&[0, 0]));
        let phi = fs_from_weights(p1(2), 1, &qv(&[0, -5, 0])).unwrap();
        assert_eq!(supnorm_weights(1, &phi).unwrap(), qv(&[0, 0, 0]));
        let phi = fs_from_weights(p1(2), 1, &qv(&[0, 5, 0])).unwrap();
        assert_eq!(supnorm_weights(1, &phi).unwrap(), qv(&[0, 5, 0]));
        assert!(concave_closed(p1(2), 1, &qv(&[0, 5, 0])).unwrap());
        assert!(!concave_closed(p1(2), 1, &qv(&[0, -5, 0])).unwrap());
        // level 2 of max(0, v-2): q(y) = -2y at y = 0, 1/2, 1, scaled by 2
        let phi = fs_from_weights(p1(1), 1, &qv(&[0, -2])).unwrap();
        assert_eq!(supnorm_weights(2, &phi).unwrap(), qv(&[0, -2, -4]));
    }

    #[test]
    fn envelope_examples() {
        let r = ToricMetric::reference(p1(1));
        let e = envelope_P(&r, &r).unwrap();
        assert_eq!(compare(e.potential(), r.potential()).unwrap(), Comparison::Equal);
        let u1 = metric1(1, &[(int(0), int(0)), (int(1), int(-2))]);
        let e = envelope_P(&r, &u1).unwrap();
        assert_eq!(compare(e.potential(), u1.potential()).unwrap(), Comparison::Equal);
        let u0 = metric1(1, &[(int(0), int(1)), (int(1), int(-1))]);
        let e = envelope_P(&u0, &r).unwrap();
        let expect = metric1(1, &[(int(0), int(0)), (frac(1, 2), int(0)), (int(1), int(-1))]);
        assert_eq!(compare(e.potential(), expect.potential()).unwrap(), Comparison::Equal);
    }

    #[test]
    fn energy_examples() {
        let r = ToricMetric::reference(p1(1));
        let e = energy(&r, &r, 6).unwrap();
        assert!(e.per_k.iter().all(|(_, v)| v.is_zero()) && e.limit.is_zero());
        let u1 = metric1(1, &[(int(0), int(0)), (int(1), int(-2))]);
        assert_eq!(energy(&u1, &r, 4).unwrap().limit, int(-1));
        assert_eq!(energy(&r, &u1, 4).unwrap().limit, int(1));
        // q1 is affine, so every level is exact
        assert!(energy(&u1, &r, 4).unwrap().per_k.iter().all(|(_, v)| *v == int(-1)));
    }

    #[test]
    fn d1_examples() {
        let r = ToricMetric::reference(p1(1));
        let d = d1_metric(&r, &r, 3).unwrap();
        assert!(d.sequence.limit.is_zero() && d.agree());
        let u1 = metric1(1, &[(int(0), int(0)), (int(1), int(-2))]);
        let d = d1_metric(&r, &u1, 3).unwrap();
        assert_eq!(d.sequence.limit, int(1));
        assert!(d.agree());
        let u0 = metric1(1, &[(int(0), int(1)), (int(1), int(-1))]);
        let d = d1_metric(&u0, &r, 3).unwrap();
        assert_eq!(d.sequence.limit, frac(1, 2));
        assert!(d.agree());
    }

    #[test]
    fn json_round_trip() {
        let phi = fs_from_weights(SectionRing::new(2, 1).unwrap(), 2, &qv(&[0, 1, 0, -1, 2, 0])).unwrap();
        let back = ToricMetric::from_json(&phi.to_json()).unwrap();
        assert_eq!(back, phi);
    }
}
