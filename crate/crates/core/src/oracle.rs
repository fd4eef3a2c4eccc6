//! Independent brute-force references used to cross-check the main algorithms.
//!
//! Each oracle avoids the code path it checks: spectra via a sup–inf formula over
//! subspaces, codiagonal multiplicities via dimension counts, max-plus powers via explicit
//! decompositions, envelopes via finite candidate sets, and concave envelopes via LP.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::graded::SectionRing;
use crate::linalg::Subspace;
use crate::norms::DiagNorm;
use crate::plconvex::lp::{Constraint, Lp, LpOutcome};
use crate::plconvex::{t_breakpoints, MaxAffine};
use crate::rational::{self, Q};

/// `F^s = span{s_i : α_i ≥ s}` (or `> s` when `strict`).
pub fn filtration_step(n: &DiagNorm<Q>, s: &Q, strict: bool) -> Subspace<Q> {
    let vs: Vec<Vec<Q>> = n
        .vectors()
        .into_iter()
        .zip(n.weights())
        .filter(|(_, w)| if strict { *w > s } else { *w >= s })
        .map(|(v, _)| v)
        .collect();
    Subspace::span(n.dim(), &vs)
}

fn jumps(n: &DiagNorm<Q>) -> Vec<Q> {
    let mut j = n.weights().to_vec();
    j.sort();
    j.dedup();
    j
}

/// `inf_{w ∈ W∖0} (n0(w) − n1(w))` on the `−log` scale.
///
/// For a jump `t` of `n1`, the vectors with `n1(w) = t` form `A∖B` with `A = W ∩ G^t`,
/// `B = W ∩ G^{>t}`; a generic element of `A` avoids both `B` and the jump subspace of `n0`,
/// so the least value of `n0` there is `max{s : A ⊆ F^s}`.
pub fn restricted_min(n0: &DiagNorm<Q>, n1: &DiagNorm<Q>, w: &Subspace<Q>) -> Option<Q> {
    let j0 = jumps(n0);
    let mut best: Option<Q> = None;
    for t in jumps(n1) {
        let a = w.intersect(&filtration_step(n1, &t, false));
        let b = w.intersect(&filtration_step(n1, &t, true));
        if a.dim() == b.dim() {
            continue;
        }
        let s = j0
            .iter()
            .rev()
            .find(|s| filtration_step(n0, s, false).contains_subspace(&a))
            .expect("the lowest step is the whole space")
            .clone();
        let v = s - t;
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    best
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Relative spectrum by `λ_i = sup_{dim W = i} inf_{w ∈ W} log(‖w‖₁/‖w‖₀)` (decreasing in `i`),
/// with `W` ranging over spans of subsets of both presented bases. Returned ascending.
pub fn minmax_spectrum(n0: &DiagNorm<Q>, n1: &DiagNorm<Q>) -> Vec<Q> {
    let d = n0.dim();
    let mut gens = n0.vectors();
    gens.extend(n1.vectors());
    let mut out = Vec::with_capacity(d);
    for i in 1..=d {
        let mut best: Option<Q> = None;
        for s in subsets(gens.len(), i) {
            let vs: Vec<Vec<Q>> = s.iter().map(|&j| gens[j].clone()).collect();
            let w = Subspace::span(d, &vs);
            if w.dim() != i {
                continue;
            }
            if let Some(v) = restricted_min(n0, n1, &w) {
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
        out.push(best.expect("some i-subset is independent"));
    }
    out.sort();
    out
}

/// Multiplicity of each weight pair `(s, t)` in any codiagonal basis:
/// `dim(F^s ∩ G^t) − dim(F^{>s} ∩ G^t + F^s ∩ G^{>t})`.
pub fn codiagonal_multiplicities(n0: &DiagNorm<Q>, n1: &DiagNorm<Q>) -> BTreeMap<(Q, Q), usize> {
    let mut out = BTreeMap::new();
    for s in jumps(n0) {
        let fs = filtration_step(n0, &s, false);
        let fs_strict = filtration_step(n0, &s, true);
        for t in jumps(n1) {
            let gt = filtration_step(n1, &t, false);
            let gt_strict = filtration_step(n1, &t, true);
            let cell = fs.intersect(&gt);
            let lower = fs_strict.intersect(&gt).sum(&fs.intersect(&gt_strict));
            let m = cell.dim() - lower.dim();
            if m > 0 {
                out.insert((s.clone(), t), m);
            }
        }
    }
    out
}

/// Degree-`k` weights as the max over all decompositions into `k` degree-one monomials.
pub fn brute_force_power(ring: SectionRing, w1: &[Q], k: usize) -> Vec<Q> {
    let m1 = ring.monomials(1);
    let mk = ring.monomials(k);
    let mut best: Vec<Option<Q>> = vec![None; mk.len()];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        start: usize,
        left: usize,
        exp: &mut Vec<usize>,
        acc: Q,
        m1: &[Vec<usize>],
        w1: &[Q],
        mk: &[Vec<usize>],
        best: &mut [Option<Q>],
    ) {
        if left == 0 {
            let i = mk.iter().position(|a| a == exp).expect("sum lies in kmΔ");
            if best[i].as_ref().is_none_or(|b| acc > *b) {
                best[i] = Some(acc);
            }
            return;
        }
        for j in start..m1.len() {
            for (e, x) in exp.iter_mut().zip(&m1[j]) {
                *e += x;
            }
            rec(j, left - 1, exp, &acc + &w1[j], m1, w1, mk, best);
            for (e, x) in exp.iter_mut().zip(&m1[j]) {
                *e -= x;
            }
        }
    }
    rec(0, k, &mut vec![0; ring.n], Q::zero(), &m1, w1, &mk, &mut best);
    best.into_iter().map(|b| b.expect("every monomial decomposes")).collect()
}

fn breakpoints_1d(f: &MaxAffine) -> Vec<Q> {
    let ps = f.pieces();
    let mut out = Vec::new();
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            if ps[i].g[0] != ps[j].g[0] {
                out.push((&ps[j].c - &ps[i].c) / (&ps[i].g[0] - &ps[j].g[0]));
            }
        }
    }
    out
}

/// Largest convex function with slopes in `[0, m]` below `min(u0, u1)` in one variable,
/// evaluated at `v` by a double conjugate over explicit finite candidate sets.
///
/// Requires both inputs to have slopes `0` and `m` among their pieces, so that for
/// `y ∈ [0, m]` the sup defining `f*(y)` is attained at a breakpoint of `f`.
pub fn envelope_1d(u0: &MaxAffine, u1: &MaxAffine, m: &Q, v: &Q) -> Q {
    let f = |x: &Q| {
        let a = u0.eval(std::slice::from_ref(x)).expect("one variable");
        let b = u1.eval(std::slice::from_ref(x)).expect("one variable");
        a.min(b)
    };
    let mut xs = breakpoints_1d(u0);
    xs.extend(breakpoints_1d(u1));
    for p in u0.pieces() {
        for q in u1.pieces() {
            if p.g[0] != q.g[0] {
                xs.push((&q.c - &p.c) / (&p.g[0] - &q.g[0]));
            }
        }
    }
    let fx: Vec<(Q, Q)> = xs.iter().map(|x| (x.clone(), f(x))).collect();
    // f* is the max of the lines y·x − f(x); its breakpoints are chord slopes
    let mut ys: Vec<Q> = vec![Q::zero(), m.clone()];
    for (i, (x0, f0)) in fx.iter().enumerate() {
        for (x1, f1) in &fx[i + 1..] {
            if x0 != x1 {
                ys.push((f1 - f0) / (x1 - x0));
            }
        }
    }
    ys.retain(|y| *y >= Q::zero() && y <= m);
    let fstar = |y: &Q| fx.iter().map(|(x, fv)| y * x - fv).max().expect("nonempty candidates");
    ys.iter().map(|y| y * v - fstar(y)).max().expect("nonempty slopes")
}

/// Concave envelope at `y` of the points `(a, β_a)`: `max Σ μ_a β_a` over convex weights
/// with barycenter `y`.
pub fn concave_envelope_lp(points: &[(Vec<Q>, Q)], y: &[Q]) -> Option<Q> {
    let n = points.len();
    let mut lp = Lp::new(n);
    for i in 0..n {
        let mut e = vec![Q::zero(); n];
        e[i] = Q::one();
        lp.push(Constraint::ge(e, Q::zero()));
    }
    lp.push(Constraint::eq(vec![Q::one(); n], Q::one()));
    for (c, yc) in y.iter().enumerate() {
        lp.push(Constraint::eq(points.iter().map(|(a, _)| a[c].clone()).collect(), yc.clone()));
    }
    match lp.maximize(&points.iter().map(|(_, b)| b.clone()).collect::<Vec<_>>()) {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

/// Concave envelope of level-`k` weights at every lattice point, via [`concave_envelope_lp`].
pub fn concave_closure_lp(ring: SectionRing, k: usize, beta: &[Q]) -> Vec<Q> {
    let pts: Vec<(Vec<Q>, Q)> = ring
        .monomials(k)
        .into_iter()
        .zip(beta)
        .map(|(a, b)| (a.into_iter().map(|x| rational::int(x as i64)).collect(), b.clone()))
        .collect();
    pts.iter().map(|(a, _)| concave_envelope_lp(&pts, a).expect("feasible: the point itself")).collect()
}

/// `inf_{t ∈ [0,1]} (F(t, v) − tτ)` by scanning the `t`-breakpoints at `v`.
pub fn marginal_min_at(f: &MaxAffine, tau: &Q, v: &[Q]) -> Q {
    t_breakpoints(f, v)
        .into_iter()
        .map(|t| {
            let mut x = vec![t.clone()];
            x.extend_from_slice(v);
            f.eval(&x).expect("dimension") - &t * tau
        })
        .min()
        .expect("endpoints")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn minmax_on_cross_basis_pair() {
        let n0 = DiagNorm::diagonal(qv(&[0, 1]));
        let n1 = DiagNorm::from_vectors(&[qv(&[1, 1]), qv(&[1, 0])], qv(&[0, 1])).unwrap();
        assert_eq!(minmax_spectrum(&n0, &n1), qv(&[-1, 1]));
        let m = codiagonal_multiplicities(&n0, &n1);
        assert_eq!(m.get(&(int(0), int(1))), Some(&1));
        assert_eq!(m.get(&(int(1), int(0))), Some(&1));
    }

    #[test]
    fn brute_force_matches_example() {
        let r = SectionRing::new(1, 2).unwrap();
        assert_eq!(brute_force_power(r, &qv(&[0, 5, 0]), 2)[2], int(10));
    }

    #[test]
    fn envelope_oracle_rooftop() {
        let u0 = MaxAffine::from_pairs(1, vec![(qv(&[0]), int(1)), (qv(&[1]), int(-1))]).unwrap();
        let u1 = MaxAffine::from_pairs(1, vec![(qv(&[0]), int(0)), (qv(&[1]), int(0))]).unwrap();
        assert_eq!(envelope_1d(&u0, &u1, &int(1), &int(1)), frac(1, 2));
        assert_eq!(envelope_1d(&u0, &u1, &int(1), &int(4)), int(3));
        assert_eq!(envelope_1d(&u0, &u1, &int(1), &int(-4)), int(0));
    }

    #[test]
    fn lp_envelope() {
        let r = SectionRing::new(1, 2).unwrap();
        assert_eq!(concave_closure_lp(r, 1, &qv(&[0, -5, 0])), qv(&[0, 0, 0]));
    }
}
