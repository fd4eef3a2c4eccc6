//! The section ring of `(P^n, O(m))`, monomial-diagonal graded norms, and their
//! submultiplicativity, geodesics and asymptotic spectral statistics.
//!
//! Degree `k` sections are spanned by the monomials of degree `km`; a monomial is
//! recorded by its dehomogenized exponent `a ∈ kmΔ_n ∩ Z^n` (the exponents of
//! `x_1, …, x_n`), and multiplication is addition of exponents.
//!
//! Over a trivially valued field, superadditivity of monomial weights is equivalent
//! to submultiplicativity: for `s = Σ s_a x^a` and `s' = Σ s'_b x^b`, every coefficient
//! of `s s'` is a sum of products `s_a s'_b`, so by the ultrametric inequality
//! `‖s s'‖ ≤ max_{a,b} ‖x^{a+b}‖ ≤ max_{a,b} ‖x^a‖‖x^b‖ = ‖s‖‖s'‖` (the last equality
//! because monomials are an orthogonal basis and all nonzero scalars have `|·| = 1`).
//! Conversely the condition restricted to monomials is part of submultiplicativity.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::binomial;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::geodesics::{check_t, interpolate};
use crate::linalg::Matrix;
use crate::norms::{DiagNorm, Exponent, Spectrum};
use crate::plconvex::profile::{integrate_abs_difference, max_abs_difference};
use crate::plconvex::{ConcaveProfile, Polytope};
use crate::rational::{self, Q};
use crate::{Error, Result};

/// `R(P^n, O(m)) = ⊕_k H^0(P^n, O(km))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SectionRing {
    pub n: usize,
    pub m: usize,
}

/// Lattice points of `d·Δ_n`, lexicographically increasing (the origin first).
pub fn lattice_points(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

impl SectionRing {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::OutOfRange(format!("need n ≥ 1 and m ≥ 1, got n = {n}, m = {m}")));
        }
        Ok(SectionRing { n, m })
    }

    /// `h^0(kL) = binom(km + n, n)`.
    pub fn h0(&self, k: usize) -> usize {
        binomial(k * self.m + self.n, self.n)
    }

    pub fn monomials(&self, k: usize) -> Vec<Vec<usize>> {
        lattice_points(self.n, k * self.m)
    }

    pub fn index(&self, k: usize) -> HashMap<Vec<usize>, usize> {
        self.monomials(k).into_iter().enumerate().map(|(i, a)| (a, i)).collect()
    }

    /// `x0^{km-|a|} x1^{a_1} …`, e.g. `x0^2x1`.
    pub fn monomial_name(&self, k: usize, a: &[usize]) -> String {
        let total = k * self.m;
        let rest: usize = a.iter().sum();
        let mut exps = vec![total - rest];
        exps.extend_from_slice(a);
        let mut s = String::new();
        for (i, &e) in exps.iter().enumerate() {
            match e {
                0 => {}
                1 => s.push_str(&format!("x{i}")),
                _ => s.push_str(&format!("x{i}^{e}")),
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    /// The moment polytope `mΔ_n`.
    pub fn polytope(&self) -> Polytope {
        Polytope::simplex(self.n, &rational::int(self.m as i64))
    }

    /// `vol(mΔ_n) = m^n / n!`.
    pub fn volume(&self) -> Q {
        let mut f = 1i64;
        for i in 1..=self.n {
            f *= i as i64;
        }
        Q::new((self.m as i64).pow(self.n as u32).into(), f.into())
    }
}

/// Monomial weights per degree: `‖x^a‖_k = e^{-β_a^{(k)}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedNorm {
    ring: SectionRing,
    degrees: BTreeMap<usize, Vec<Q>>,
    generator: Option<Vec<Q>>,
}

/// First failure of `β_{a+b}^{(k+l)} ≥ β_a^{(k)} + β_b^{(l)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub k: usize,
    pub l: usize,
    pub a: String,
    pub b: String,
    pub lhs: Q,
    pub rhs: Q,
}

impl Violation {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k, "l": self.l, "a": self.a, "b": self.b,
            "weight_of_product": rational::render(&self.lhs),
            "sum_of_weights": rational::render(&self.rhs),
        })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {}): {} < {}", self.k, self.l, self.a, self.b, self.lhs, self.rhs)
    }
}

/// Requires an identity basis; returns the weights.
pub fn monomial_weights(n: &DiagNorm<Q>) -> Result<Vec<Q>> {
    if *n.basis() != Matrix::identity(n.dim()) {
        return Err(Error::NotMonomialDiagonal);
    }
    Ok(n.weights().to_vec())
}

/// Max-plus product of weight vectors in degrees `k1` and `k2`.
fn convolve(ring: &SectionRing, k1: usize, w1: &[Q], k2: usize, w2: &[Q]) -> Vec<Q> {
    let m1 = ring.monomials(k1);
    let m2 = ring.monomials(k2);
    let idx = ring.index(k1 + k2);
    let mut out: Vec<Option<Q>> = vec![None; idx.len()];
    for (a, wa) in m1.iter().zip(w1) {
        for (b, wb) in m2.iter().zip(w2) {
            let c: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let v = wa + wb;
            let slot = &mut out[idx[&c]];
            if slot.as_ref().is_none_or(|s| v > *s) {
                *slot = Some(v);
            }
        }
    }
    out.into_iter().map(|x| x.expect("every monomial decomposes")).collect()
}

impl GradedNorm {
    pub fn from_degrees(ring: SectionRing, degrees: BTreeMap<usize, Vec<Q>>) -> Result<Self> {
        for (&k, w) in &degrees {
            if k == 0 {
                return Err(Error::OutOfRange("degrees start at 1".into()));
            }
            if w.len() != ring.h0(k) {
                return Err(Error::MissingSupport(format!(
                    "degree {k} needs {} monomial weights, got {}",
                    ring.h0(k),
                    w.len()
                )));
            }
        }
        Ok(GradedNorm { ring, degrees, generator: None })
    }

    pub fn ring(&self) -> SectionRing {
        self.ring
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.keys().next_back().copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.degrees.keys().copied()
    }

    pub fn weights(&self, k: usize) -> Result<&[Q]> {
        self.degrees
            .get(&k)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::DegreeMismatch(format!("degree {k} not materialized")))
    }

    pub fn norm(&self, k: usize) -> Result<DiagNorm<Q>> {
        Ok(DiagNorm::<Q>::diagonal(self.weights(k)?.to_vec()))
    }

    /// Degree-one weights when the norm was produced by [`generate_degree_one`].
    pub fn generator(&self) -> Option<&[Q]> {
        self.generator.as_deref()
    }

    pub fn set_weights(&mut self, k: usize, w: Vec<Q>) -> Result<()> {
        if w.len() != self.ring.h0(k) {
            return Err(Error::MissingSupport(format!("degree {k} needs {} weights", self.ring.h0(k))));
        }
        self.degrees.insert(k, w);
        self.generator = None;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let degrees: serde_json::Map<String, Value> =
            self.degrees.iter().map(|(k, w)| (k.to_string(), DiagNorm::<Q>::diagonal(w.clone()).to_json())).collect();
        json!({ "ring": { "n": self.ring.n, "m": self.ring.m }, "degrees": degrees })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let r = v.get("ring").ok_or_else(|| Error::Parse("graded norm needs \"ring\"".into()))?;
        let get = |key: &str| {
            r.get(key).and_then(|x| x.as_u64()).ok_or_else(|| Error::Parse(format!("ring needs integer \"{key}\"")))
        };
        let ring = SectionRing::new(get("n")? as usize, get("m")? as usize)?;
        let degs = v
            .get("degrees")
            .and_then(|d| d.as_object())
            .ok_or_else(|| Error::Parse("graded norm needs a \"degrees\" object".into()))?;
        let mut degrees = BTreeMap::new();
        for (k, n) in degs {
            let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad degree key {k:?}")))?;
            degrees.insert(k, monomial_weights(&DiagNorm::<Q>::from_json(n)?)?);
        }
        Self::from_degrees(ring, degrees)
    }
}

/// Graded norm generated in degree one: degree-`k` weights are max-plus convolution powers,
/// i.e. the quotient norm through `Sym^k H^0(L) → H^0(kL)`.
pub fn generate_degree_one(ring: SectionRing, n1: &DiagNorm<Q>, max_degree: usize) -> Result<GradedNorm> {
    let w1 = monomial_weights(n1)?;
    generate_from_weights(ring, &w1, max_degree)
}

pub fn generate_from_weights(ring: SectionRing, w1: &[Q], max_degree: usize) -> Result<GradedNorm> {
    if w1.len() != ring.h0(1) {
        return Err(Error::MissingSupport(format!("degree one needs {} weights, got {}", ring.h0(1), w1.len())));
    }
    let mut degrees = BTreeMap::new();
    let mut cur = w1.to_vec();
    degrees.insert(1, cur.clone());
    for k in 2..=max_degree {
        cur = convolve(&ring, k - 1, &cur, 1, w1);
        degrees.insert(k, cur.clone());
    }
    Ok(GradedNorm { ring, degrees, generator: Some(w1.to_vec()) })
}

/// Degree-`k` weights of the degree-one generated norm alone, by repeated squaring.
pub fn degree_power(ring: SectionRing, w1: &[Q], k: usize) -> Result<Vec<Q>> {
    if k == 0 {
        return Err(Error::OutOfRange("degree must be ≥ 1".into()));
    }
    let mut result: Option<(usize, Vec<Q>)> = None;
    let mut base = (1usize, w1.to_vec());
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some((d, w)) => (d + base.0, convolve(&ring, d, &w, base.0, &base.1)),
            });
        }
        e >>= 1;
        if e > 0 {
            base = (2 * base.0, convolve(&ring, base.0, &base.1, base.0, &base.1));
        }
    }
    Ok(result.expect("k ≥ 1").1)
}

/// Superadditivity over all monomial pairs with `k + l ≤ max_degree`, scanning `(k, l, a, b)`
/// lexicographically.
pub fn check_submultiplicative(gn: &GradedNorm, max_degree: usize) -> Result<std::result::Result<(), Violation>> {
    let ring = gn.ring;
    for k in 1..max_degree {
        for l in 1..=max_degree - k {
            let (wk, wl, wkl) = (gn.weights(k)?, gn.weights(l)?, gn.weights(k + l)?);
            let idx = ring.index(k + l);
            let mk = ring.monomials(k);
            let ml = ring.monomials(l);
            for (a, wa) in mk.iter().zip(wk) {
                for (b, wb) in ml.iter().zip(wl) {
                    let c: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    let lhs = &wkl[idx[&c]];
                    let rhs = wa + wb;
                    if *lhs < rhs {
                        return Ok(Err(Violation {
                            k,
                            l,
                            a: ring.monomial_name(k, a),
                            b: ring.monomial_name(l, b),
                            lhs: lhs.clone(),
                            rhs,
                        }));
                    }
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Degreewise weight interpolation `(1 − t)β⁰ + tβ¹`.
pub fn graded_geodesic(gn0: &GradedNorm, gn1: &GradedNorm, t: &Q) -> Result<GradedNorm> {
    check_t(t)?;
    if gn0.ring != gn1.ring {
        return Err(Error::DegreeMismatch("graded norms live on different rings".into()));
    }
    let k0: Vec<usize> = gn0.degrees().collect();
    let k1: Vec<usize> = gn1.degrees().collect();
    if k0 != k1 {
        return Err(Error::DegreeMismatch(format!("materialized degrees differ: {k0:?} vs {k1:?}")));
    }
    let degrees = gn0.degrees.iter().map(|(&k, w0)| (k, interpolate(w0, &gn1.degrees[&k], t))).collect();
    Ok(GradedNorm { ring: gn0.ring, degrees, generator: None })
}

/// Normalized per-degree statistic `h⁰⁻¹ Σ |λ/k|^p` (or `max |λ|/k` for `p = ∞`).
pub fn normalized_distance(spec: &Spectrum, k: usize, p: Exponent) -> Q {
    let kq = rational::int(k as i64);
    match p {
        Exponent::Finite(e) => spec.distance(p) / rational::abs_pow(&kq, e),
        Exponent::Infinity => spec.distance(p) / kq,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticStats {
    pub p: Exponent,
    pub per_k: Vec<(usize, Q)>,
    /// `2 v_K − v_{⌊K/2⌋}`, the first-order extrapolation of an `O(1/k)` sequence.
    pub extrapolated: Q,
    pub oracle: Option<Q>,
}

impl AsymptoticStats {
    pub fn csv(&self) -> String {
        let mut s = String::from("k,exact_value,decimal_value,oracle_limit\n");
        let oracle = self.oracle.as_ref().map(rational::render).unwrap_or_default();
        for (k, v) in &self.per_k {
            s.push_str(&format!("{k},{},{:.12},{oracle}\n", rational::render(v), rational::to_f64(v)));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p.to_string(),
            "per_k": self.per_k.iter().map(|(k, v)| json!({"k": k, "value": rational::render(v)})).collect::<Vec<_>>(),
            "extrapolated": rational::render(&self.extrapolated),
            "oracle_limit": self.oracle.as_ref().map(rational::render),
        })
    }
}

/// Concave envelope `q` of the degree-one weights: `β^{(k)}_a / k → q(a/k)`.
pub fn degree_one_profile(ring: SectionRing, w1: &[Q]) -> ConcaveProfile {
    let pts = ring
        .monomials(1)
        .into_iter()
        .zip(w1)
        .map(|(a, w)| (a.iter().map(|&x| rational::int(x as i64)).collect(), w.clone()))
        .collect();
    ConcaveProfile::from_points(ring.n, pts)
}

/// `∫|q0 − q1|^p / vol` (or `max |q0 − q1|` for `p = ∞`) over `mΔ`.
pub fn profile_distance(ring: SectionRing, q0: &ConcaveProfile, q1: &ConcaveProfile, p: Exponent) -> Q {
    let poly = ring.polytope();
    match p {
        Exponent::Finite(e) => integrate_abs_difference(&poly, q0, q1, e) / ring.volume(),
        Exponent::Infinity => max_abs_difference(&poly, q0, q1),
    }
}

pub fn asymptotic_stats(gn0: &GradedNorm, gn1: &GradedNorm, p: Exponent, max_degree: usize) -> Result<AsymptoticStats> {
    if gn0.ring != gn1.ring {
        return Err(Error::DegreeMismatch("graded norms live on different rings".into()));
    }
    let mut per_k = Vec::with_capacity(max_degree);
    for k in 1..=max_degree {
        let spec = Spectrum::from_weights(gn0.weights(k)?, gn1.weights(k)?);
        per_k.push((k, normalized_distance(&spec, k, p)));
    }
    let last = per_k.last().map(|x| x.1.clone()).unwrap_or_else(Q::zero);
    let extrapolated = if max_degree >= 2 {
        let half = &per_k[max_degree / 2 - 1].1;
        rational::int(2) * &last - half
    } else {
        last
    };
    let oracle = match (gn0.generator(), gn1.generator()) {
        (Some(w0), Some(w1)) => {
            let ring = gn0.ring;
            Some(profile_distance(ring, &degree_one_profile(ring, w0), &degree_one_profile(ring, w1), p))
        }
        _ => None,
    };
    Ok(AsymptoticStats { p, per_k, extrapolated, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn ring_basics() {
        let r = SectionRing::new(2, 1).unwrap();
        assert_eq!(r.h0(3), 10);
        assert_eq!(r.monomials(1), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(r.monomial_name(1, &[0, 0]), "x0");
        let r = SectionRing::new(1, 1).unwrap();
        assert_eq!(r.monomial_name(3, &[1]), "x0^2x1");
        assert_eq!(r.volume(), int(1));
    }

    #[test]
    fn generate_examples() {
        let r = SectionRing::new(1, 1).unwrap();
        let g = generate_from_weights(r, &qv(&[0, 0]), 4).unwrap();
        assert!(g.weights(4).unwrap().iter().all(|x| x.is_zero()));
        let g = generate_from_weights(r, &qv(&[0, 1]), 5).unwrap();
        assert_eq!(g.weights(5).unwrap(), &qv(&[0, 1, 2, 3, 4, 5])[..]);
        let r2 = SectionRing::new(1, 2).unwrap();
        let g = generate_from_weights(r2, &qv(&[0, 5, 0]), 2).unwrap();
        // x0^2 x1^2 has exponent a = 2
        assert_eq!(g.weights(2).unwrap()[2], int(10));
        assert_eq!(degree_power(r2, &qv(&[0, 5, 0]), 2).unwrap(), g.weights(2).unwrap());
        assert!(matches!(
            generate_degree_one(r, &DiagNorm::from_vectors(&[qv(&[1, 1]), qv(&[0, 1])], qv(&[0, 0])).unwrap(), 2),
            Err(Error::NotMonomialDiagonal)
        ));
    }

    #[test]
    fn submultiplicativity_examples() {
        let r = SectionRing::new(1, 1).unwrap();
        let g = generate_from_weights(r, &qv(&[3, -1]), 8).unwrap();
        assert_eq!(check_submultiplicative(&g, 8).unwrap(), Ok(()));
        let mut planted = generate_from_weights(r, &qv(&[0, 0]), 3).unwrap();
        let mut w2 = planted.weights(2).unwrap().to_vec();
        w2[0] = int(-1);
        planted.set_weights(2, w2).unwrap();
        let v = check_submultiplicative(&planted, 3).unwrap().unwrap_err();
        assert_eq!((v.k, v.l, v.a.as_str(), v.b.as_str()), (1, 1, "x0", "x0"));
    }

    #[test]
    fn geodesic_examples() {
        let r = SectionRing::new(1, 1).unwrap();
        let g0 = generate_from_weights(r, &qv(&[0, 0]), 8).unwrap();
        let g1 = generate_from_weights(r, &qv(&[0, 2]), 8).unwrap();
        assert_eq!(graded_geodesic(&g0, &g1, &int(0)).unwrap().weights(5).unwrap(), g0.weights(5).unwrap());
        let mid = graded_geodesic(&g0, &g1, &frac(1, 2)).unwrap();
        assert_eq!(mid.weights(3).unwrap(), &qv(&[0, 1, 2, 3])[..]);
        assert_eq!(check_submultiplicative(&mid, 8).unwrap(), Ok(()));
        let short = generate_from_weights(r, &qv(&[0, 0]), 3).unwrap();
        assert!(matches!(graded_geodesic(&g0, &short, &int(0)), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn stats_examples() {
        let r = SectionRing::new(1, 1).unwrap();
        let g0 = generate_from_weights(r, &qv(&[0, 0]), 8).unwrap();
        let g1 = generate_from_weights(r, &qv(&[0, 2]), 8).unwrap();
        let s = asymptotic_stats(&g0, &g0, Exponent::Finite(1), 8).unwrap();
        assert!(s.per_k.iter().all(|(_, v)| v.is_zero()));
        assert_eq!(s.oracle, Some(int(0)));
        let s = asymptotic_stats(&g0, &g1, Exponent::Finite(1), 8).unwrap();
        assert!(s.per_k.iter().all(|(_, v)| *v == int(1)));
        assert_eq!(s.oracle, Some(int(1)));
        assert_eq!(s.extrapolated, int(1));
        let s = asymptotic_stats(&g0, &g1, Exponent::Infinity, 8).unwrap();
        assert!(s.per_k.iter().all(|(_, v)| *v == int(2)));
        assert_eq!(s.oracle, Some(int(2)));
        assert!(s.csv().starts_with("k,exact_value,decimal_value,oracle_limit\n1,2,"));
    }
}
