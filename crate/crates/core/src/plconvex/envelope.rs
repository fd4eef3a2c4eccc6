//! Slope-constrained convex envelopes and marginal minimization along a parameter.

use num_traits::{One, Zero};

use super::fm::eliminate;
use super::maxaffine::{MaxAffine, Piece};
use super::polytope::{HRep, Polytope};
use super::profile::ConcaveProfile;
use crate::rational::Q;
use crate::{Error, Result};

/// Largest convex PL function below `min_j fs[j]` whose gradients lie in `slopes`.
///
/// Computed on the dual side: the conjugate of the minimum is `min_j q_j` on the
/// intersection of the conjugate domains, further restricted to `slopes`.
pub fn envelope_constrained(fs: &[MaxAffine], slopes: &Polytope) -> Result<MaxAffine> {
    let first = fs.first().ok_or_else(|| Error::Malformed("envelope of an empty family".into()))?;
    let n = first.dim();
    if slopes.vertices.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    let mut domain = slopes.h.clone();
    let mut pieces = Vec::new();
    for f in fs {
        if f.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: f.dim() });
        }
        let q = f.conjugate();
        domain = domain.intersect(&q.domain.h);
        pieces.extend(q.pieces.iter().cloned());
    }
    let domain = Polytope::from_h(domain)?;
    let profile = ConcaveProfile::from_min_affine(&domain, &pieces)?;
    Ok(profile.to_max_affine().pruned())
}

/// Splits a function on `(t, v)` into the coefficient of `t` and the rest.
fn check_split(f: &MaxAffine) -> Result<usize> {
    if f.dim() == 0 {
        return Err(Error::Malformed("marginal minimization needs a leading t coordinate".into()));
    }
    Ok(f.dim() - 1)
}

/// `v ↦ inf_{t ∈ [0,1]} (F(t, v) − t·τ)`, with `t` the first coordinate of `F`.
///
/// The epigraph `{(t, v, s) : s ≥ F(t, v) − tτ, 0 ≤ t ≤ 1}` is projected along `t`;
/// facets of the projection with positive `s` coefficient are the output pieces.
pub fn marginal_min(f: &MaxAffine, tau: &Q) -> Result<MaxAffine> {
    let n = check_split(f)?;
    // coordinates (t, v_1..v_n, s); rows a·x ≤ b
    let mut h = HRep::new(n + 2);
    for p in f.pieces() {
        // ⟨g_v, v⟩ + (g_t − τ) t + c ≤ s
        let mut a = Vec::with_capacity(n + 2);
        a.push(&p.g[0] - tau);
        a.extend(p.g[1..].iter().cloned());
        a.push(-Q::one());
        h.ineqs.push((a, -p.c.clone()));
    }
    let mut lo = vec![Q::zero(); n + 2];
    lo[0] = -Q::one();
    h.ineqs.push((lo, Q::zero()));
    let mut hi = vec![Q::zero(); n + 2];
    hi[0] = Q::one();
    h.ineqs.push((hi, Q::one()));
    let proj = eliminate(&h, 0);
    let mut pieces = Vec::new();
    for (a, b) in &proj.ineqs {
        let cs = &a[n];
        if cs.is_zero() {
            // constraints on v alone cannot occur: every v has a t ∈ [0,1]
            return Err(Error::Inconsistent("projection constrains v".into()));
        }
        if *cs > Q::zero() {
            return Err(Error::Inconsistent("epigraph projection bounded above".into()));
        }
        // a_v·v + cs·s ≤ b, cs < 0  ⇔  s ≥ (a_v·v − b)/(−cs)
        let k = -cs;
        pieces.push(Piece::new(a[..n].iter().map(|x| x / &k).collect(), -(b / &k)));
    }
    Ok(MaxAffine::new(n, pieces)?.pruned())
}

/// `t`-breakpoints of the active-piece arrangement of `F(·, v)` in `[0, 1]`, with both endpoints.
pub fn t_breakpoints(f: &MaxAffine, v: &[Q]) -> Vec<Q> {
    let lines: Vec<(Q, Q)> =
        f.pieces().iter().map(|p| (p.g[0].clone(), crate::rational::dot(&p.g[1..], v) + &p.c)).collect();
    let mut ts = vec![Q::zero(), Q::one()];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1) = &lines[i];
            let (a2, b2) = &lines[j];
            if a1 != a2 {
                let t = (b2 - b1) / (a1 - a2);
                if t > Q::zero() && t < Q::one() {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort();
    ts.dedup();
    ts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plconvex::maxaffine::{compare, Comparison};
    use crate::rational::{frac, int};

    fn ma(pairs: &[(&[i64], i64)]) -> MaxAffine {
        let n = pairs[0].0.len();
        MaxAffine::from_pairs(n, pairs.iter().map(|(g, c)| (g.iter().map(|&x| int(x)).collect(), int(*c))).collect())
            .unwrap()
    }

    fn interval(a: i64, b: i64) -> Polytope {
        Polytope::from_vertices(1, &[vec![int(a)], vec![int(b)]]).unwrap()
    }

    #[test]
    fn envelope_examples() {
        let f = ma(&[(&[0], 0), (&[1], 0)]);
        assert_eq!(
            compare(&envelope_constrained(std::slice::from_ref(&f), &interval(0, 1)).unwrap(), &f).unwrap(),
            Comparison::Equal
        );
        let g = ma(&[(&[0], 0), (&[1], -2)]);
        let e = envelope_constrained(&[f, g.clone()], &interval(0, 1)).unwrap();
        assert_eq!(compare(&e, &g).unwrap(), Comparison::Equal);
        let a = ma(&[(&[1], 0), (&[0], 0)]);
        let b = ma(&[(&[-1], 0), (&[0], 0)]);
        let e = envelope_constrained(&[a, b], &interval(-1, 1)).unwrap();
        assert_eq!(compare(&e, &MaxAffine::constant(1, int(0))).unwrap(), Comparison::Equal);
    }

    #[test]
    fn rooftop_truncates_both() {
        let u0 = ma(&[(&[0], 1), (&[1], -1)]);
        let u1 = ma(&[(&[0], 0), (&[1], 0)]);
        let e = envelope_constrained(&[u0, u1], &interval(0, 1)).unwrap();
        let expect =
            MaxAffine::from_pairs(1, vec![(vec![int(0)], int(0)), (vec![frac(1, 2)], int(0)), (vec![int(1)], int(-1))])
                .unwrap();
        assert_eq!(compare(&e, &expect).unwrap(), Comparison::Equal);
    }

    #[test]
    fn marginal_min_examples() {
        let f = ma(&[(&[0, 0], 0), (&[0, 1], 0)]);
        assert_eq!(
            compare(&marginal_min(&f, &int(0)).unwrap(), &ma(&[(&[0], 0), (&[1], 0)])).unwrap(),
            Comparison::Equal
        );
        let f = ma(&[(&[1, 0], 0), (&[0, 1], 0)]);
        let m1 = marginal_min(&f, &int(1)).unwrap();
        assert_eq!(m1, ma(&[(&[0], 0), (&[1], -1)]));
        let m0 = marginal_min(&f, &int(0)).unwrap();
        assert_eq!(m0, ma(&[(&[0], 0), (&[1], 0)]));
    }

    #[test]
    fn breakpoints_of_max_t_v() {
        let f = ma(&[(&[1, 0], 0), (&[0, 1], 0)]);
        assert_eq!(t_breakpoints(&f, &[frac(1, 3)]), vec![int(0), frac(1, 3), int(1)]);
    }
}
