//! Concave piecewise-linear functions on polytopes, the Legendre-dual side of [`MaxAffine`].

use num_traits::{Signed, Zero};

use super::integrate::{integrate_affine, integrate_affine_power};
use super::maxaffine::{MaxAffine, Piece};
use super::polytope::{is_vertex, v_to_h, HRep, Polytope, VRep};
use crate::rational::{self, Q};
use crate::{Error, Result};

/// Upper hull data of a finite point set `(y_i, z_i) ∈ Q^n × Q`.
#[derive(Clone, Debug)]
pub struct UpperHull {
    /// `conv(y_i)` as inequalities and equalities on `y`.
    pub domain: HRep,
    /// Affine functions `(a, b)`: the concave envelope is `min (⟨a, y⟩ + b)` on the domain.
    pub pieces: Vec<(Vec<Q>, Q)>,
    /// Vertices of the hypograph.
    pub vertices: Vec<(Vec<Q>, Q)>,
}

pub fn upper_hull(n: usize, points: &[(Vec<Q>, Q)]) -> UpperHull {
    let mut down = vec![Q::zero(); n + 1];
    down[n] = rational::int(-1);
    let lifted: Vec<Vec<Q>> = points
        .iter()
        .map(|(y, z)| {
            let mut p = y.clone();
            p.push(z.clone());
            p
        })
        .collect();
    let v = VRep { dim: n + 1, points: lifted.clone(), rays: vec![down], lines: vec![] };
    let h = v_to_h(&v);
    let mut domain = HRep::new(n);
    let mut pieces = Vec::new();
    for (a, b) in &h.ineqs {
        let az = &a[n];
        if az.is_zero() {
            domain.ineqs.push((a[..n].to_vec(), b.clone()));
        } else {
            debug_assert!(az.is_positive());
            pieces.push((a[..n].iter().map(|x| -(x / az)).collect(), b / az));
        }
    }
    for (a, b) in &h.eqs {
        debug_assert!(a[n].is_zero());
        domain.eqs.push((a[..n].to_vec(), b.clone()));
    }
    let mut vertices: Vec<(Vec<Q>, Q)> = Vec::new();
    for (p, (y, z)) in lifted.iter().zip(points) {
        if is_vertex(&h, p) && !vertices.iter().any(|(yy, zz)| yy == y && zz == z) {
            vertices.push((y.clone(), z.clone()));
        }
    }
    vertices.sort();
    pieces.sort();
    UpperHull { domain, pieces, vertices }
}

/// Concave PL function `q = min_j (⟨a_j, y⟩ + b_j)` on a polytope, with its hypograph vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcaveProfile {
    pub domain: Polytope,
    pub pieces: Vec<(Vec<Q>, Q)>,
    pub vertices: Vec<(Vec<Q>, Q)>,
}

impl ConcaveProfile {
    /// Upper concave envelope of the points, on their convex hull.
    pub fn from_points(n: usize, points: Vec<(Vec<Q>, Q)>) -> Self {
        let hull = upper_hull(n, &points);
        let mut dv: Vec<Vec<Q>> =
            hull.vertices.iter().map(|(y, _)| y.clone()).filter(|y| is_vertex(&hull.domain, y)).collect();
        dv.sort();
        dv.dedup();
        ConcaveProfile {
            domain: Polytope { h: hull.domain, vertices: dv },
            pieces: hull.pieces,
            vertices: hull.vertices,
        }
    }

    /// Concave envelope of `min_j` of the given affine functions over a polytope.
    pub fn from_min_affine(domain: &Polytope, pieces: &[(Vec<Q>, Q)]) -> Result<Self> {
        let n = domain.dim();
        let mut h = HRep::new(n + 1);
        for (a, b) in &domain.h.ineqs {
            let mut r = a.clone();
            r.push(Q::zero());
            h.ineqs.push((r, b.clone()));
        }
        for (a, b) in &domain.h.eqs {
            let mut r = a.clone();
            r.push(Q::zero());
            h.eqs.push((r, b.clone()));
        }
        // z ≤ ⟨a, y⟩ + b
        for (a, b) in pieces {
            let mut r: Vec<Q> = a.iter().map(|x| -x).collect();
            r.push(rational::int(1));
            h.ineqs.push((r, b.clone()));
        }
        let v = super::polytope::h_to_v(&h);
        if v.points.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        let pts: Vec<(Vec<Q>, Q)> = v.points.iter().map(|p| (p[..n].to_vec(), p[n].clone())).collect();
        Ok(Self::from_points(n, pts))
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// `q(y)`, or `None` outside the domain.
    pub fn eval(&self, y: &[Q]) -> Option<Q> {
        if !self.domain.contains(y) {
            return None;
        }
        Some(self.eval_unchecked(y))
    }

    pub(crate) fn eval_unchecked(&self, y: &[Q]) -> Q {
        self.pieces.iter().map(|(a, b)| rational::dot(a, y) + b).min().expect("profile has a piece")
    }

    /// Back to the primal side: `f(v) = max_y (⟨y, v⟩ + q(y))`, attained at hypograph vertices.
    pub fn to_max_affine(&self) -> MaxAffine {
        let pieces = self.vertices.iter().map(|(y, z)| Piece::new(y.clone(), z.clone())).collect();
        MaxAffine::new(self.dim(), pieces).expect("nonempty hypograph")
    }

    /// Linearity cells: for each piece, the subpolytope of the domain where it is minimal.
    pub fn cells(&self) -> Vec<(Polytope, (Vec<Q>, Q))> {
        cells_of(&self.domain, &self.pieces, true)
    }

    /// Exact `∫_P q` over `P = domain ∩ region` (the whole domain when `region` is `None`).
    pub fn integrate(&self, region: Option<&Polytope>) -> Result<Q> {
        let base = match region {
            Some(r) => match self.domain.intersect_h(&r.h) {
                Ok(p) => p,
                Err(Error::EmptyPolyhedron) => return Ok(Q::zero()),
                Err(e) => return Err(e),
            },
            None => self.domain.clone(),
        };
        Ok(cells_of(&base, &self.pieces, true).iter().map(|(cell, (a, b))| integrate_affine(cell, a, b)).sum())
    }
}

/// Cells of `base` where each affine function is minimal (`minimal`) or maximal.
pub fn cells_of(base: &Polytope, pieces: &[(Vec<Q>, Q)], minimal: bool) -> Vec<(Polytope, (Vec<Q>, Q))> {
    let n = base.dim();
    if pieces.len() == 1 {
        return vec![(base.clone(), pieces[0].clone())];
    }
    let mut out = Vec::new();
    for (i, (a, b)) in pieces.iter().enumerate() {
        let mut h = base.h.clone();
        for (j, (c, d)) in pieces.iter().enumerate() {
            if i == j {
                continue;
            }
            // minimal: a·y + b ≤ c·y + d  ⇔  (a − c)·y ≤ d − b
            let (row, rhs): (Vec<Q>, Q) = if minimal {
                (a.iter().zip(c).map(|(x, y)| x - y).collect(), d - b)
            } else {
                (c.iter().zip(a).map(|(x, y)| x - y).collect(), b - d)
            };
            if row.iter().all(|x| x.is_zero()) {
                if rhs.is_negative() {
                    h.ineqs.push((vec![Q::zero(); n], rhs));
                }
                continue;
            }
            h.ineqs.push((row, rhs));
        }
        if let Ok(cell) = Polytope::from_h(h) {
            if cell.affine_dim() == n {
                out.push((cell, (a.clone(), b.clone())));
            }
        }
    }
    out
}

/// Common refinement of two piece families on `base`, with the difference `q0 − q1` per cell,
/// split by the sign of the difference.
pub fn difference_cells(base: &Polytope, p0: &[(Vec<Q>, Q)], p1: &[(Vec<Q>, Q)]) -> Vec<(Polytope, (Vec<Q>, Q))> {
    let n = base.dim();
    let mut out = Vec::new();
    for (c0, (a0, b0)) in cells_of(base, p0, true) {
        for (c, (a1, b1)) in cells_of(&c0, p1, true) {
            let g: Vec<Q> = a0.iter().zip(&a1).map(|(x, y)| x - y).collect();
            let k = &b0 - &b1;
            if g.iter().all(|x| x.is_zero()) {
                out.push((c, (g, k)));
                continue;
            }
            for sign in [1i64, -1] {
                let s = rational::int(sign);
                let mut h = c.h.clone();
                // sign·(g·y + k) ≥ 0  ⇔  −sign·g·y ≤ sign·k
                h.ineqs.push((g.iter().map(|x| -(x * &s)).collect(), &k * &s));
                if let Ok(part) = Polytope::from_h(h) {
                    if part.affine_dim() == n {
                        out.push((part, (g.clone(), k.clone())));
                    }
                }
            }
        }
    }
    out
}

/// `∫_P |q0 − q1|^p` for two concave profiles over the common polytope `P`.
pub fn integrate_abs_difference(base: &Polytope, q0: &ConcaveProfile, q1: &ConcaveProfile, p: u32) -> Q {
    difference_cells(base, &q0.pieces, &q1.pieces)
        .iter()
        .map(|(cell, (g, k))| {
            let v = integrate_affine_power(cell, g, k, p);
            if p % 2 == 1 {
                v.abs()
            } else {
                v
            }
        })
        .sum()
}

/// `max_P |q0 − q1|`, attained at a vertex of the common refinement.
pub fn max_abs_difference(base: &Polytope, q0: &ConcaveProfile, q1: &ConcaveProfile) -> Q {
    difference_cells(base, &q0.pieces, &q1.pieces)
        .iter()
        .flat_map(|(cell, _)| cell.vertices.clone())
        .map(|y| (q0.eval_unchecked(&y) - q1.eval_unchecked(&y)).abs())
        .max()
        .unwrap_or_else(Q::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plconvex::maxaffine::{compare, Comparison, MaxAffine};
    use crate::rational::int;

    fn ma1(pairs: &[(i64, i64)]) -> MaxAffine {
        MaxAffine::from_pairs(1, pairs.iter().map(|&(g, c)| (vec![int(g)], int(c))).collect()).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        let q = ma1(&[(0, 0), (1, 0)]).conjugate();
        assert_eq!(q.domain.vertices, vec![vec![int(0)], vec![int(1)]]);
        assert_eq!(q.eval(&[crate::rational::frac(1, 3)]), Some(int(0)));
        let q = ma1(&[(0, 0), (1, 5), (2, 0)]).conjugate();
        assert_eq!(q.eval(&[int(1)]), Some(int(5)));
        assert_eq!(q.eval(&[crate::rational::frac(1, 2)]), Some(crate::rational::frac(5, 2)));
        assert_eq!(q.eval(&[crate::rational::frac(3, 2)]), Some(crate::rational::frac(5, 2)));
        assert_eq!(q.eval(&[int(3)]), None);
        let q = ma1(&[(0, 0), (1, -5), (2, 0)]).conjugate();
        assert_eq!(q.pieces, vec![(vec![int(0)], int(0))]);
        assert_eq!(q.vertices.len(), 2);
    }

    #[test]
    fn biconjugate_is_identity() {
        let f = ma1(&[(0, 0), (1, 5), (2, 0), (1, -2)]);
        let ff = f.conjugate().to_max_affine();
        assert_eq!(compare(&f, &ff).unwrap(), Comparison::Equal);
        assert_eq!(ff.pieces().len(), 3);
    }

    #[test]
    fn integrals() {
        let q = ma1(&[(0, 0), (1, 5), (2, 0)]).conjugate();
        assert_eq!(q.integrate(None).unwrap(), int(5));
        let z = ma1(&[(0, 0), (1, 0)]).conjugate();
        assert_eq!(z.integrate(None).unwrap(), int(0));
        let lin = ma1(&[(0, 0), (1, 2)]).conjugate();
        assert_eq!(lin.integrate(None).unwrap(), int(1));
    }

    #[test]
    fn abs_difference_integral() {
        // q0 = 0, q1 = 1 - 2y on [0, 1]: ∫ |1 - 2y| = 1/2
        let q0 = ma1(&[(0, 0), (1, 0)]).conjugate();
        let q1 = ma1(&[(0, 1), (1, -1)]).conjugate();
        let base = q0.domain.clone();
        assert_eq!(integrate_abs_difference(&base, &q0, &q1, 1), crate::rational::frac(1, 2));
        assert_eq!(max_abs_difference(&base, &q0, &q1), int(1));
    }
}
