//! H- and V-representations of rational polyhedra and conversion between them.

use num_traits::{Signed, Zero};

use super::dd::{cone_generators, to_integer, to_rational};
use crate::linalg::Matrix;
use crate::rational::{self, Q};
use crate::{Error, Result};

/// `{x : a·x ≤ b for (a, b) in ineqs, a·x = b for (a, b) in eqs}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HRep {
    pub dim: usize,
    pub ineqs: Vec<(Vec<Q>, Q)>,
    pub eqs: Vec<(Vec<Q>, Q)>,
}

/// `conv(points) + cone(rays) + span(lines)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VRep {
    pub dim: usize,
    pub points: Vec<Vec<Q>>,
    pub rays: Vec<Vec<Q>>,
    pub lines: Vec<Vec<Q>>,
}

impl HRep {
    pub fn new(dim: usize) -> Self {
        HRep { dim, ineqs: Vec::new(), eqs: Vec::new() }
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.ineqs.iter().all(|(a, b)| rational::dot(a, x) <= *b)
            && self.eqs.iter().all(|(a, b)| rational::dot(a, x) == *b)
    }

    pub fn intersect(&self, o: &HRep) -> HRep {
        let mut h = self.clone();
        h.ineqs.extend(o.ineqs.iter().cloned());
        h.eqs.extend(o.eqs.iter().cloned());
        h
    }

    /// Indices of inequalities tight at `x`.
    pub fn tight(&self, x: &[Q]) -> Vec<usize> {
        (0..self.ineqs.len()).filter(|&i| rational::dot(&self.ineqs[i].0, x) == self.ineqs[i].1).collect()
    }
}

/// Vertices, rays and lines of an H-polyhedron (empty `points` iff the polyhedron is empty).
pub fn h_to_v(h: &HRep) -> VRep {
    let n = h.dim;
    // homogenize: (x0, x) with b x0 − a·x ≥ 0, x0 ≥ 0
    let mut rows = Vec::with_capacity(h.ineqs.len() + 2 * h.eqs.len() + 1);
    let mut x0 = vec![Q::zero(); n + 1];
    x0[0] = Q::from_integer(1.into());
    rows.push(to_integer(&x0));
    let hom = |a: &[Q], b: &Q, sign: i64| -> Vec<Q> {
        let s = rational::int(sign);
        let mut r = Vec::with_capacity(n + 1);
        r.push(b * &s);
        r.extend(a.iter().map(|x| -(x * &s)));
        r
    };
    for (a, b) in &h.ineqs {
        rows.push(to_integer(&hom(a, b, 1)));
    }
    for (a, b) in &h.eqs {
        rows.push(to_integer(&hom(a, b, 1)));
        rows.push(to_integer(&hom(a, b, -1)));
    }
    let g = cone_generators(n + 1, &rows);
    let mut v = VRep { dim: n, ..Default::default() };
    for r in g.rays {
        let q = to_rational(&r);
        if q[0].is_positive() {
            v.points.push(q[1..].iter().map(|x| x / &q[0]).collect());
        } else {
            v.rays.push(q[1..].to_vec());
        }
    }
    for l in g.lines {
        v.lines.push(to_rational(&l)[1..].to_vec());
    }
    if v.points.is_empty() {
        v.rays.clear();
        v.lines.clear();
    }
    v.points.sort();
    v.rays.sort();
    v
}

/// Irredundant H-representation of a V-polyhedron with at least one point.
pub fn v_to_h(v: &VRep) -> HRep {
    let n = v.dim;
    // dual cone of gen{(1,p), (0,r), ±(0,l)}: (β, a) with β + a·p ≥ 0 ...; gives −a·x ≤ β
    let mut rows = Vec::new();
    for p in &v.points {
        let mut r = vec![Q::from_integer(1.into())];
        r.extend(p.iter().cloned());
        rows.push(to_integer(&r));
    }
    for ray in &v.rays {
        let mut r = vec![Q::zero()];
        r.extend(ray.iter().cloned());
        rows.push(to_integer(&r));
    }
    for l in &v.lines {
        let mut r = vec![Q::zero()];
        r.extend(l.iter().cloned());
        rows.push(to_integer(&r));
        let mut r = vec![Q::zero()];
        r.extend(l.iter().map(|x| -x));
        rows.push(to_integer(&r));
    }
    let g = cone_generators(n + 1, &rows);
    let mut h = HRep::new(n);
    for r in g.rays {
        let q = to_rational(&r);
        if q[1..].iter().all(|x| x.is_zero()) {
            continue;
        }
        h.ineqs.push((q[1..].iter().map(|x| -x).collect(), q[0].clone()));
    }
    for l in g.lines {
        let q = to_rational(&l);
        h.eqs.push((q[1..].iter().map(|x| -x).collect(), q[0].clone()));
    }
    h.ineqs.sort();
    h.eqs.sort();
    h
}

/// Affine dimension of a point set (`-1` encoded as `None` for the empty set).
pub fn affine_dim(points: &[Vec<Q>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    if rest.is_empty() {
        return Some(0);
    }
    let diffs: Vec<Vec<Q>> = rest.iter().map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
    Some(Matrix::from_rows(&diffs).expect("ragged").rank())
}

/// A bounded rational polyhedron with both representations.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    pub h: HRep,
    pub vertices: Vec<Vec<Q>>,
}

impl Polytope {
    pub fn from_h(h: HRep) -> Result<Self> {
        let v = h_to_v(&h);
        if v.points.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        if !v.rays.is_empty() || !v.lines.is_empty() {
            return Err(Error::Unbounded("polyhedron has recession directions".into()));
        }
        // re-derive an irredundant description from the vertices
        let h = v_to_h(&v);
        Ok(Polytope { h, vertices: v.points })
    }

    pub fn from_vertices(dim: usize, points: &[Vec<Q>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        let v = VRep { dim, points: points.to_vec(), ..Default::default() };
        let h = v_to_h(&v);
        // keep only the extreme points
        let mut vertices: Vec<Vec<Q>> = points.iter().filter(|p| is_vertex(&h, p)).cloned().collect();
        vertices.sort();
        vertices.dedup();
        Ok(Polytope { h, vertices })
    }

    /// The dilated standard simplex `m·Δ_n = conv(0, m e_1, …, m e_n)`.
    pub fn simplex(n: usize, m: &Q) -> Self {
        let mut h = HRep::new(n);
        for i in 0..n {
            let mut a = vec![Q::zero(); n];
            a[i] = rational::int(-1);
            h.ineqs.push((a, Q::zero()));
        }
        h.ineqs.push((vec![rational::int(1); n], m.clone()));
        let mut vertices = vec![vec![Q::zero(); n]];
        for i in 0..n {
            let mut e = vec![Q::zero(); n];
            e[i] = m.clone();
            vertices.push(e);
        }
        if m.is_zero() {
            vertices.truncate(1);
        }
        vertices.sort();
        Polytope { h, vertices }
    }

    pub fn dim(&self) -> usize {
        self.h.dim
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.h.contains(x)
    }

    pub fn affine_dim(&self) -> usize {
        affine_dim(&self.vertices).unwrap_or(0)
    }

    pub fn intersect_h(&self, o: &HRep) -> Result<Polytope> {
        Polytope::from_h(self.h.intersect(o))
    }

    pub fn volume(&self) -> Q {
        super::integrate::integrate_affine(self, &vec![Q::zero(); self.dim()], &rational::int(1))
    }
}

/// `x` is a vertex of the H-polyhedron iff its tight constraints (with equalities) have rank `dim`.
pub fn is_vertex(h: &HRep, x: &[Q]) -> bool {
    if !h.contains(x) {
        return false;
    }
    let mut rows: Vec<Vec<Q>> = h.tight(x).into_iter().map(|i| h.ineqs[i].0.clone()).collect();
    rows.extend(h.eqs.iter().map(|(a, _)| a.clone()));
    if h.dim == 0 {
        return true;
    }
    !rows.is_empty() && Matrix::from_rows(&rows).expect("ragged").rank() == h.dim
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn square_round_trip() {
        let pts = vec![qv(&[0, 0]), qv(&[1, 0]), qv(&[0, 1]), qv(&[1, 1]), vec![frac(1, 2), frac(1, 2)]];
        let p = Polytope::from_vertices(2, &pts).unwrap();
        assert_eq!(p.vertices.len(), 4);
        assert_eq!(p.h.ineqs.len(), 4);
        let back = Polytope::from_h(p.h.clone()).unwrap();
        assert_eq!(back.vertices, p.vertices);
        assert_eq!(p.volume(), int(1));
    }

    #[test]
    fn simplex_contains() {
        let s = Polytope::simplex(2, &int(2));
        assert!(s.contains(&qv(&[1, 1])));
        assert!(!s.contains(&qv(&[2, 1])));
        assert_eq!(s.volume(), int(2));
        let t = Polytope::from_h(s.h.clone()).unwrap();
        assert_eq!(t.vertices, s.vertices);
    }

    #[test]
    fn degenerate_segment_in_plane() {
        let p = Polytope::from_vertices(2, &[qv(&[0, 0]), qv(&[2, 2]), qv(&[1, 1])]).unwrap();
        assert_eq!(p.vertices, vec![qv(&[0, 0]), qv(&[2, 2])]);
        assert_eq!(p.h.eqs.len(), 1);
        assert_eq!(p.affine_dim(), 1);
        assert_eq!(p.volume(), int(0));
    }

    #[test]
    fn empty_and_unbounded() {
        let mut h = HRep::new(1);
        h.ineqs.push((qv(&[1]), int(0)));
        h.ineqs.push((qv(&[-1]), int(-1)));
        assert_eq!(Polytope::from_h(h), Err(Error::EmptyPolyhedron));
        let mut h = HRep::new(1);
        h.ineqs.push((qv(&[1]), int(0)));
        assert!(matches!(Polytope::from_h(h), Err(Error::Unbounded(_))));
    }
}
